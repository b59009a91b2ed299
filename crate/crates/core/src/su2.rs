//! Irreducible spin representations of su(2) and the Σ matrices.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{matexp_unitary, CMatrix, ZERO};

/// The `n`-dimensional (spin `j = (n-1)/2`) irreducible representation.
///
/// The J₃ eigenbasis is ordered by descending eigenvalue: `j, j-1, …, -j`.
/// `j1` is real symmetric, `j2` purely imaginary, `j3` real diagonal.
#[derive(Clone, Debug)]
pub struct SpinRep {
    pub n: usize,
    pub spin: f64,
    pub j1: CMatrix,
    pub j2: CMatrix,
    pub j3: CMatrix,
}

pub fn spin_generators(n: usize) -> Result<SpinRep> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("spin representation needs n ≥ 2, got {n}")));
    }
    let j = (n as f64 - 1.0) / 2.0;
    let m = |k: usize| j - k as f64;

    // (J+)_{m', m} = sqrt(j(j+1) - m(m+1)) δ_{m', m+1}: index k-1 holds m+1.
    let mut raise = CMatrix::zeros(n, n);
    for k in 1..n {
        let mk = m(k);
        raise[(k - 1, k)] = C64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let j1 = (&raise + &lower).scale(0.5);
    let j2 = (&raise - &lower).map(|z| z / C64::new(0.0, 2.0));
    let j3 = CMatrix::from_fn(n, n, |a, b| if a == b { C64::new(m(a), 0.0) } else { ZERO });
    Ok(SpinRep { n, spin: j, j1, j2, j3 })
}

impl SpinRep {
    /// Dimensionless Hamiltonian `2Δ J₃ + 2Ω J₁`.
    pub fn drive(&self, delta: f64, omega: f64) -> CMatrix {
        self.j3.scale(2.0 * delta) + self.j1.scale(2.0 * omega)
    }

    pub fn casimir(&self) -> CMatrix {
        &self.j1 * &self.j1 + &self.j2 * &self.j2 + &self.j3 * &self.j3
    }
}

/// `Y = exp(iπ J₂)`, the image of a π rotation about the 2-axis.
///
/// For even `n` it is real with alternating `±1` on the anti-diagonal; for odd
/// `n` the central anti-diagonal entry sits on the diagonal and `tr Y = ±1`.
pub fn y_matrix(rep: &SpinRep) -> CMatrix {
    // exp(iπJ₂) = exp(-i J₂ t) at t = -π. J₂ is Hermitian by construction.
    matexp_unitary(&rep.j2, -std::f64::consts::PI).expect("J₂ is Hermitian")
}

/// Σ₀ = I, Σ₁ = σ₁, Σ₂ = iσ₂, Σ₃ = σ₃ as exact integer matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaSet {
    pub mats: [[[i8; 2]; 2]; 4],
}

pub const SIGMA: SigmaSet = SigmaSet {
    mats: [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, 1], [-1, 0]],
        [[1, 0], [0, -1]],
    ],
};

pub fn sigma_set() -> SigmaSet {
    SIGMA
}

impl SigmaSet {
    pub fn get(&self, k: usize) -> CMatrix {
        let m = self.mats[k];
        CMatrix::from_fn(2, 2, |i, j| C64::new(m[i][j] as f64, 0.0))
    }
}
