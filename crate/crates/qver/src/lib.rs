//! SMT-backed verification of Hoare triples over quantum circuits.

pub mod circuit;
pub mod cli;
pub mod encode;
pub mod oracle;
pub mod smt;
pub mod vcgen;
