//! Analysis of mapping tori `F ⋊_Φ ℤ` of free-group automorphisms.

pub mod word;
pub mod train_track;
pub mod cayley;
pub mod thickness;
pub mod cli;
