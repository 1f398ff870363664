//! Symbolic model checking of lossy channel systems with guarded fixpoint
//! terms over regular regions.

pub mod automata;
pub mod compile;
pub mod lcs;
pub mod mu;
pub mod oracle;
pub mod region;
