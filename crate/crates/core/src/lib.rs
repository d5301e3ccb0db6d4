//! Quasi-periodic Floquet dynamics of quadratic Hamiltonians.
//!
//! Classical propagators of quadratic Hamiltonians are 2×2 real matrices of
//! unit determinant. A time-dependent Hamiltonian built from a finite set of
//! intervals evolves by products of these matrices, so a sequence of
//! intervals is a word in the free group on the interval labels.
//!
//! - [`symplectic`]: matrices, elementary propagators, classification.
//! - [`free_group`]: reduced words in F2, automorphisms, the Fibonacci words.
//! - [`trace_map`]: the half-trace recursion and its conserved cubic.
//! - [`floquet`]: bands and gaps of the periodically kicked oscillator,
//!   Floquet indices and characters.
//! - [`quasiperiodic`]: the Fibonacci-kicked oscillator.
//!
//! Products are composed with the earliest interval as the rightmost factor.

pub mod error;
pub mod floquet;
pub mod free_group;
pub mod quasiperiodic;
pub mod symplectic;
pub mod trace_map;

pub use error::{Error, Escape, Result};
pub use free_group::{Automorphism, Generator, Letter, Word};
pub use symplectic::{PhasePoint, SymplecticMatrix};
