//! Exact arithmetic for polyseries, balanced prime fields, Catalan numbers,
//! and Catalan-series roots of quadratic congruences modulo `t^n`.
//!
//! * [`seq`]: memoized polyseries `[a_1, a_2, ...⟩` and their procedures,
//!   including the polyseries of primes.
//! * [`field`]: F_p with canonical residues and the balanced view `|a|_p`.
//! * [`catalan`]: Catalan numbers by three independent recurrences.
//! * [`trunc`]: the ring F_p[t]/(t^n) and the evaluation `t = p` into Z/p^n.
//! * [`solver`]: roots of `t + a*x + x^2 = 0 (mod t^n)` and their oracles.
//! * [`report`], [`cli`]: JSON/text rendering and the command-line surface.

pub mod catalan;
pub mod cli;
pub mod field;
pub mod report;
pub mod seq;
pub mod solver;
pub mod trunc;

pub use field::{Half, Prime, Residue};
pub use seq::Polyseries;
pub use solver::{solve, Form, QuadraticProblem, SolveOptions, SolveReport};
pub use trunc::{PrimePowerInt, TruncSeries};
