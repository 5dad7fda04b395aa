//! Exact mixed moments of quantum random matrices.
//!
//! Weingarten calculus over the field `Q(N)`, monotone walk counts, reduction
//! of Biasimirs to higher Casimirs, classical/quantum moment decompositions and
//! the finite-`N` Littlewood-Richardson process.

pub mod algebra;
pub mod biasimir;
pub mod cli;
pub mod lr_process;
pub mod moments;
pub mod monotone_walks;
pub mod permutations;
pub mod weingarten;
