//! Colored Jones function at roots of unity from (1,1)-tangle state sums,
//! with the numerics that tie its growth rate to hyperbolic volume for the
//! figure-eight knot.
//!
//! The crate has three layers:
//!
//! * [`phase`] — exact quarter-phase arithmetic at `q = exp(2πi/N)` and the
//!   q-symbol tables `(q)_k`, `(q̄)_k`, `g_k`, `log g_k`;
//! * [`tangle`] + [`statesum`] — a text format and data model for
//!   (1,1)-tangle diagrams with oriented crossings and extrema, constraint
//!   reduction of the Kronecker deltas, and evaluation of `J_N(K)`;
//! * [`fig8`] + [`special`] + [`asymptotic`] — closed forms for the
//!   figure-eight knot, the Lobachevsky/Clausen/dilogarithm functions, and
//!   three independent computations of
//!   `2π lim_N log J_N(4_1)/N = 6Λ(π/3) = 2.02988...`, the volume of the
//!   figure-eight knot complement.

pub mod asymptotic;
mod dd;
pub mod error;
pub mod fig8;
pub mod phase;
pub mod special;
pub mod statesum;
pub mod tangle;

pub use error::{Error, Result};
pub use phase::{phase_value, q_binomial, q_symbol_table, QSymbolTable, RootContext};
pub use statesum::{
    crossing_weight, evaluate, evaluate_serial, extremum_weight, reduce_constraints, LabelScheme,
    StateSumResult,
};
pub use tangle::{builtin_diagram, parse_tangle, serialize, validate, TangleDiagram};
