//! Biquandle bracket quivers of oriented classical and virtual link diagrams.
//!
//! The pipeline is: parse a [`LinkDiagram`], enumerate its colorings by a
//! finite [`Biquandle`], weight each coloring by a [`BiquandleBracket`] state
//! sum, connect colorings by endomorphisms into a [`BracketQuiver`], and read
//! off the in-degree and two-variable polynomials as [`FormalSum`]s.

pub mod biquandle;
pub mod bracket;
pub mod coloring;
pub mod diagram;
pub mod quiver;
pub mod rings;

pub use biquandle::{validate_biquandle, Axiom, Biquandle, BiquandleError, BqMap, Violation};
pub use bracket::{
    cocycle_bracket, evaluate_bracket, hadamard_product, state_circles, validate_bracket, BiquandleBracket, BracketData,
    BracketError, BracketViolation, Normalization,
};
pub use coloring::{apply_endomorphism, counting_invariant, enumerate_colorings, is_valid_coloring, Coloring};
pub use diagram::{parse_diagram_file, Crossing, DiagramError, LinkDiagram, NamedDiagram, RawCrossing, Sign};
pub use quiver::{build_quiver, quivers_isomorphic, BracketQuiver, Edge, QuiverError};
pub use rings::{ExponentKind, FormalSum, KeyPart, RingElement, RingError, RingSpec};
