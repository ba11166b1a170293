//! Solvers for weighted linear equations over F2 judged above the average.
//!
//! A system of equations `Π_{i∈I_j} x_i = b_j` with positive weights `w_j`
//! always has an assignment satisfying half its total weight `W`. The
//! question answered here is whether some assignment reaches `W/2 + k`,
//! equivalently whether the maximum *excess* (satisfied minus falsified
//! weight) is at least `2k`.
//!
//! Modules, bottom up:
//!
//! - [`gf2`]: dense F2 linear algebra.
//! - [`linsystem`]: the system model, excess, the two reduction rules and
//!   witness lifting.
//! - [`algoh`]: Algorithm H and witness completion.
//! - [`sumfree`]: sum-free subsets of spanning vector families.
//! - [`solver`]: the search tree, both kernelizations and the
//!   guaranteed-excess assignment.
//! - [`pseudobool`]: pseudo-boolean functions and their rank lower bound.
//! - [`graphapps`]: Edwards-Erdős cuts and balanced-subgraph colorings.
//! - [`testkit`]: brute-force oracles and instance generators.
//! - [`format`]: the `.lin2`, `.pbf` and `.bsg`/`.cut` text formats.

pub mod algoh;
pub mod format;
pub mod gf2;
pub mod graphapps;
pub mod linsystem;
pub mod pseudobool;
pub mod solver;
pub mod sumfree;
pub mod testkit;

pub use gf2::{BitMatrix, BitVector};
pub use linsystem::{Assignment, Equation, LinearSystem, Sign, TransformLog, Weight};
