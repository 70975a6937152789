//! Exact graph-homology calculus for Jacobi diagrams and polywheels, and the
//! Rozansky–Witten invariant pipeline built on it.

pub mod cli;
pub mod coeffring;
pub mod diagrams;
pub mod partitions;
pub mod polywheels;
pub mod reference;
pub mod rw;
pub mod series;
pub mod verify;
