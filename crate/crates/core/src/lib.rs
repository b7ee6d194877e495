//! Bi-intuitionistic first-order logic over constant-domain Kripke models,
//! bi-asimulation games, ultimately periodic subsets of ℕ and the symbolic
//! quasi-partition models refuting Craig interpolation.

pub mod syntax;
pub mod periodic;
pub mod kripke;
pub mod asim;
pub mod counterexample;
