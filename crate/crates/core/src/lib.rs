//! Symbolic rewriting over the group ring Z₂F of a free group F, modulo the
//! two-sided ideal generated by the trinomial `1 + v + vw`.
//!
//! The engine works with a fixed pair of words: a short cyclically reduced
//! primitive `w` and the long aperiodic word
//! `v = x^α y x^{α+1} y ⋯ x^{β−1} y`.  It recognizes generalized fractional
//! powers (subwords of monomials over `v`, `w`) as paths in the v-diagram,
//! computes charts and covering statistics of words, performs multi-turn
//! rewrites whose correctness is witnessed by explicit ideal-membership
//! certificates, reduces ring elements to λ-semicanonical form, and multiplies
//! S̃_λ words while recording thin-triangle diagrams.
//!
//! Everything is exact: measures are rationals with denominator β−α and no
//! floating point is used anywhere.

pub mod chart;
pub mod construction;
pub mod freegroup;
pub mod gfp;
pub mod multiturn;
pub mod quotient;
pub mod ratfun;

pub use chart::{Chart, CoverStats, FChar, Relation};
pub use construction::{Params, RawParams, VWord};
pub use freegroup::{Alphabet, Letter, Word};
pub use gfp::{ArcKind, Fragment, GfpPath, Occurrence, PathPoint, PathType, SpineStep};
pub use multiturn::{Certificate, Frame, Support};
pub use quotient::{Diagram, RingElement, TensorChoice};
pub use ratfun::{LaurentPoly2, Poly2, Rat2};
