//! Exact commutative algebra and numerical residue calculus for experiments with
//! Artin–Rees type containments.

pub mod artin_rees;
pub mod cli;
pub mod complexes;
pub mod groebner;
pub mod homotopy;
pub mod poly;
pub mod residue;
