//! Termination analysis for single-variable linear-constraint loops over the integers.

pub mod analyzer;
pub mod collatz;
pub mod lattice;
pub mod loopio;
pub mod oracle;
pub mod poly2;
