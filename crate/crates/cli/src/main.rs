use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bbq_core::{
    build_quiver, enumerate_colorings, evaluate_bracket, parse_diagram_file, validate_biquandle, Biquandle, BiquandleBracket,
    BqMap, BracketData, BracketError, LinkDiagram, Normalization, RingSpec,
};
use bbq_core::biquandle::parse_tables;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

/// Biquandle bracket quivers of oriented link diagrams.
#[derive(Parser)]
#[command(name = "bbq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the biquandle axioms of an operation-table file.
    ValidateBiquandle { biquandle: PathBuf },
    /// Check the bracket axioms and print delta and w.
    ValidateBracket { bracket: PathBuf, biquandle: PathBuf },
    /// List all endomorphisms as 1-indexed image lists.
    Endos { biquandle: PathBuf },
    /// Count colorings of each diagram.
    Colorings {
        diagrams: PathBuf,
        biquandle: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// Also print each coloring as a semiarc -> color list.
        #[arg(long)]
        verbose: bool,
    },
    /// Multiset of bracket values over all colorings.
    Bracket {
        diagrams: PathBuf,
        biquandle: PathBuf,
        bracket: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// Build the bracket quiver and summarize it, optionally writing DOT.
    Quiver {
        diagrams: PathBuf,
        biquandle: PathBuf,
        bracket: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        opts: EvalOpts,
        /// Write the quiver of the selected diagram in DOT format.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Print a quiver polynomial.
    Poly {
        diagrams: PathBuf,
        biquandle: PathBuf,
        bracket: PathBuf,
        #[arg(long, value_enum, default_value_t = PolyKind::Indeg)]
        kind: PolyKind,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        opts: EvalOpts,
    },
    /// One row per diagram, computed in parallel and printed in input order.
    Table {
        diagrams: PathBuf,
        biquandle: PathBuf,
        bracket: PathBuf,
        #[arg(long, value_enum, default_value_t = PolyKind::Indeg)]
        kind: PolyKind,
        /// Add the Kauffman bracket (trivial biquandle, A = q, B = q^-1) column.
        #[arg(long)]
        jones: bool,
        #[command(flatten)]
        opts: EvalOpts,
    },
}

#[derive(clap::Args, Clone)]
struct EvalOpts {
    /// `all`, `identity`, or a file of image lists.
    #[arg(long, default_value = "all")]
    endos: String,
    /// Use delta^(circles - 1) instead of delta^circles.
    #[arg(long)]
    reduced: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyKind {
    Indeg,
    Twovar,
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
    // validation reports are program output, not diagnostics
    to_stdout: bool,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into(), to_stdout: false }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into(), to_stdout: false }
}

fn report(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into(), to_stdout: true }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_biquandle(path: &Path) -> Result<Biquandle, Failure> {
    Biquandle::parse(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_bracket(path: &Path, x: &Biquandle) -> Result<BiquandleBracket, Failure> {
    let data = BracketData::parse(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    match data.validate(x) {
        Ok(br) => Ok(br),
        Err(BracketError::Violations(v)) if data.has_overrides() => {
            let br = data.with_overrides(x).map_err(|e| invalid(e.to_string()))?;
            eprintln!(
                "warning: {} fails {} bracket axiom instance(s); using delta={} w={} from the file",
                path.display(),
                v.len(),
                br.delta(),
                br.w()
            );
            Ok(br)
        }
        Err(e) => Err(invalid(violation_report(&e))),
    }
}

fn violation_report(e: &BracketError) -> String {
    match e {
        BracketError::Violations(v) => v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
        other => other.to_string(),
    }
}

fn load_diagrams(path: &Path, name: Option<&str>) -> Result<Vec<(String, LinkDiagram)>, Failure> {
    let all = parse_diagram_file(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let picked: Vec<_> = all.into_iter().filter(|d| name.is_none_or(|n| d.name == n)).map(|d| (d.name, d.diagram)).collect();
    if picked.is_empty() {
        return Err(usage(format!("{}: no diagram named {}", path.display(), name.unwrap_or("(any)"))));
    }
    Ok(picked)
}

fn load_endos(spec: &str, x: &Biquandle) -> Result<Vec<BqMap>, Failure> {
    match spec {
        "all" => Ok(x.endomorphisms()),
        "identity" => Ok(vec![BqMap::identity(x.size())]),
        file => {
            let maps = BqMap::parse_list(&read(Path::new(file))?, x.size()).map_err(|e| invalid(format!("{file}: {e}")))?;
            if let Some(bad) = maps.iter().find(|m| !m.is_homomorphism(x, x)) {
                return Err(invalid(format!("{file}: {bad} is not an endomorphism")));
            }
            Ok(maps)
        }
    }
}

fn norm(opts: &EvalOpts) -> Normalization {
    if opts.reduced {
        Normalization::Reduced
    } else {
        Normalization::Unreduced
    }
}

/// Bare output for a single named diagram, `name : value` lines otherwise.
fn emit(rows: &[(String, String)], named: bool) -> String {
    let mut out = String::new();
    for (n, v) in rows {
        if named {
            let _ = writeln!(out, "{v}");
        } else {
            let _ = writeln!(out, "{n} : {v}");
        }
    }
    out
}

fn value_multiset(d: &LinkDiagram, br: &BiquandleBracket, n: Normalization) -> Result<String, Failure> {
    let mut counts = std::collections::BTreeMap::new();
    for c in enumerate_colorings(d, br.biquandle()) {
        let v = evaluate_bracket(d, &c, br, n).map_err(|e| invalid(e.to_string()))?;
        *counts.entry(v.canonical_key()).or_insert(0usize) += 1;
    }
    Ok(counts.iter().map(|(k, c)| format!("{c}x[{k}]")).collect::<Vec<_>>().join(" + "))
}

fn polynomial(d: &LinkDiagram, br: &BiquandleBracket, s: &[BqMap], kind: PolyKind, n: Normalization) -> Result<String, Failure> {
    let q = build_quiver(d, br, s, n).map_err(|e| invalid(e.to_string()))?;
    Ok(match kind {
        PolyKind::Indeg => q.indegree_polynomial().render(&["u", "v"]),
        PolyKind::Twovar => q.two_variable_polynomial().render(&["s", "t"]),
    })
}

fn kauffman() -> BiquandleBracket {
    let q = RingSpec::laurent("q").expect("valid variable");
    let x = Biquandle::trivial(1).expect("trivial biquandle");
    bbq_core::validate_bracket(&x, &q, vec![vec![q.monomial(1, 1)]], vec![vec![q.monomial(1, -1)]]).expect("Kauffman bracket is valid")
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::ValidateBiquandle { biquandle } => {
            let text = read(&biquandle)?;
            let tables = parse_tables(&text).map_err(|e| invalid(format!("{}: {e}", biquandle.display())))?;
            let v = validate_biquandle(&tables.0, &tables.1).map_err(|e| invalid(e.to_string()))?;
            if v.is_empty() {
                Ok("OK delta-checkable\n".into())
            } else {
                Err(report(v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")))
            }
        }
        Command::ValidateBracket { bracket, biquandle } => {
            let x = load_biquandle(&biquandle)?;
            let data = BracketData::parse(&read(&bracket)?).map_err(|e| invalid(format!("{}: {e}", bracket.display())))?;
            let br = data.validate(&x).map_err(|e| report(violation_report(&e)))?;
            Ok(format!("OK delta={} w={}\n", br.delta(), br.w()))
        }
        Command::Endos { biquandle } => {
            let x = load_biquandle(&biquandle)?;
            Ok(x.endomorphisms().iter().map(|m| format!("{m}\n")).collect())
        }
        Command::Colorings { diagrams, biquandle, name, verbose } => {
            let ds = load_diagrams(&diagrams, name.as_deref())?;
            let x = load_biquandle(&biquandle)?;
            let mut out = String::new();
            for (n, d) in &ds {
                let cs = enumerate_colorings(d, &x);
                if name.is_some() {
                    let _ = writeln!(out, "{}", cs.len());
                } else {
                    let _ = writeln!(out, "{n} : {}", cs.len());
                }
                if verbose {
                    for c in &cs {
                        let arcs = (0..d.semiarc_count()).map(|i| format!("{}->{}", d.label(i), c[i] + 1));
                        let loops = c[d.semiarc_count()..].iter().map(|v| format!("U->{}", v + 1));
                        let _ = writeln!(out, "  {}", arcs.chain(loops).collect::<Vec<_>>().join(" "));
                    }
                }
            }
            Ok(out)
        }
        Command::Bracket { diagrams, biquandle, bracket, name, opts } => {
            let ds = load_diagrams(&diagrams, name.as_deref())?;
            let x = load_biquandle(&biquandle)?;
            let br = load_bracket(&bracket, &x)?;
            let rows = ds
                .iter()
                .map(|(n, d)| Ok((n.clone(), value_multiset(d, &br, norm(&opts))?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(emit(&rows, name.is_some()))
        }
        Command::Quiver { diagrams, biquandle, bracket, name, opts, dot } => {
            let ds = load_diagrams(&diagrams, name.as_deref())?;
            let x = load_biquandle(&biquandle)?;
            let br = load_bracket(&bracket, &x)?;
            let s = load_endos(&opts.endos, &x)?;
            if dot.is_some() && ds.len() != 1 {
                return Err(usage("--dot needs a single diagram; use --name"));
            }
            let mut rows = Vec::new();
            for (n, d) in &ds {
                let q = build_quiver(d, &br, &s, norm(&opts)).map_err(|e| invalid(e.to_string()))?;
                if let Some(path) = &dot {
                    std::fs::write(path, q.to_dot()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                }
                rows.push((n.clone(), format!("vertices={} edges={} endos={}", q.vertex_count(), q.edges.len(), s.len())));
            }
            Ok(emit(&rows, name.is_some()))
        }
        Command::Poly { diagrams, biquandle, bracket, kind, name, opts } => {
            let ds = load_diagrams(&diagrams, name.as_deref())?;
            let x = load_biquandle(&biquandle)?;
            let br = load_bracket(&bracket, &x)?;
            let s = load_endos(&opts.endos, &x)?;
            let rows = ds
                .iter()
                .map(|(n, d)| Ok((n.clone(), polynomial(d, &br, &s, kind, norm(&opts))?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(emit(&rows, name.is_some()))
        }
        Command::Table { diagrams, biquandle, bracket, kind, jones, opts } => {
            let ds = load_diagrams(&diagrams, None)?;
            let x = load_biquandle(&biquandle)?;
            let br = load_bracket(&bracket, &x)?;
            let s = load_endos(&opts.endos, &x)?;
            let kb = kauffman();
            let n = norm(&opts);
            let rows: Vec<Result<String, String>> = ds
                .par_iter()
                .map(|(name, d)| {
                    let p = polynomial(d, &br, &s, kind, n).map_err(|f| format!("{name} : error: {}", f.msg))?;
                    let mut row = format!("{name} : {p}");
                    if jones {
                        let col = vec![0; d.semiarc_count() + d.free_loops()];
                        let j = evaluate_bracket(d, &col, &kb, Normalization::Reduced).map_err(|e| format!("{name} : error: {e}"))?;
                        let _ = write!(row, " | kauffman {j}");
                    }
                    Ok(row)
                })
                .collect();
            let failed = rows.iter().filter(|r| r.is_err()).count();
            let out: String = rows.into_iter().map(|r| r.unwrap_or_else(|e| e) + "\n").collect();
            if failed > 0 {
                print!("{out}");
                return Err(invalid(format!("{failed} row(s) failed")));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("BBQ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.to_stdout {
                println!("{}", f.msg);
            } else {
                eprintln!("{}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
