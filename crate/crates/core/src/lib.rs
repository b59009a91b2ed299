//! Complete population transfer (CPT) between maximally entangled states of
//! two coupled spins.
//!
//! Two spin-(n-1)/2 Hamiltonians `2ΔJ₃ + 2ΩJ₁`, with detunings and Rabi
//! frequencies generated from a Pythagorean triple, are combined into a
//! tensor-product Hamiltonian on `n²` levels. Rotating into a basis of
//! vectorized Pauli tensor products gives a sparse "lab frame" Hamiltonian in
//! which `|1⟩` is transferred completely to `|n²-n+1⟩` at `τ = π/√(2c)`.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices, Kronecker products, vectorization and
//!   Hermitian propagators.
//! - [`su2`]: spin generators, the Σ set and `Y = exp(iπJ₂)`.
//! - [`pythagorean`]: triples and the coupling parameters derived from them.
//! - [`frames`]: the symmetric orthogonal entangled frames `W`.
//! - [`dynamics`]: Hamiltonians, propagation, CPT certificates, coupling graphs.
//! - [`retrograde`]: piecewise-constant schedules and the retrograde canon.

pub mod dynamics;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod pythagorean;
pub mod retrograde;
pub mod su2;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, Tolerances};
pub use num_complex::Complex64 as C64;
