//! Pythagorean triples from odd pairs, and the detunings, Rabi frequencies
//! and transfer time they induce.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Odd integers `p > q ≥ 1` generating `((p²-q²)/2, pq, (p²+q²)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OddPair {
    p: i64,
    q: i64,
}

impl OddPair {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let reason = if q < 1 {
            Some("q must be ≥ 1")
        } else if p % 2 == 0 || q % 2 == 0 {
            Some("p and q must both be odd")
        } else if p <= q {
            Some("p must exceed q")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidPair { p, q, reason }),
            None => Ok(Self { p, q }),
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `(p²+q²)/2`, the hypotenuse of the generated triple.
    pub fn c(&self) -> i64 {
        (self.p * self.p + self.q * self.q) / 2
    }

    pub fn is_primitive(&self) -> bool {
        self.p.gcd(&self.q) == 1
    }

    /// `(-1)^{(p+q)/2}`: the sign of the two-segment pulse's full propagator.
    pub fn parity_sign(&self) -> f64 {
        if ((self.p + self.q) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PythTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub primitive: bool,
}

impl PythTriple {
    /// `a² + b² - c²`; exactly zero for integer triples.
    pub fn defect(&self) -> f64 {
        self.a * self.a + self.b * self.b - self.c * self.c
    }
}

/// Sign applied to a triple leg.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

pub fn triple_from_pair(pair: OddPair, sign_a: Sign, sign_b: Sign) -> PythTriple {
    let (p, q) = (pair.p, pair.q);
    let a = sign_a.value() * (p * p - q * q) / 2;
    let b = sign_b.value() * p * q;
    PythTriple { a: a as f64, b: b as f64, c: pair.c() as f64, primitive: pair.is_primitive() }
}

/// All coprime odd pairs with `(p²+q²)/2 ≤ limit_c`, ordered by `c` then `p`.
pub fn enumerate_primitive_pairs(limit_c: f64) -> Vec<OddPair> {
    let mut pairs = Vec::new();
    let mut p = 3i64;
    // Smallest c for a given p is (p² + 1)/2.
    while ((p * p + 1) / 2) as f64 <= limit_c {
        let mut q = 1i64;
        while q < p {
            let pair = OddPair { p, q };
            if pair.c() as f64 <= limit_c && pair.is_primitive() {
                pairs.push(pair);
            }
            q += 2;
        }
        p += 2;
    }
    pairs.sort_by_key(|pr| (pr.c(), pr.p));
    pairs
}

/// Detunings, Rabi frequencies and transfer time of the two coupled spins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingParams {
    pub delta1: f64,
    pub omega1: f64,
    pub delta2: f64,
    pub omega2: f64,
    pub k: f64,
    pub tau: f64,
}

impl CouplingParams {
    /// Parameters not determined by a triple; `tau` must still be positive.
    pub fn raw(delta1: f64, omega1: f64, delta2: f64, omega2: f64, tau: f64) -> Self {
        Self { delta1, omega1, delta2, omega2, k: 0.0, tau }
    }

    /// Names of the four couplings that vanish. Such parameter sets are still
    /// well defined but fall outside the nonzero-coupling family.
    pub fn zero_couplings(&self) -> Vec<&'static str> {
        [
            ("delta1", self.delta1),
            ("omega1", self.omega1),
            ("delta2", self.delta2),
            ("omega2", self.omega2),
        ]
        .into_iter()
        .filter(|(_, v)| v.abs() < 1e-12)
        .map(|(name, _)| name)
        .collect()
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.delta1, self.omega1, self.delta2, self.omega2]
    }
}

/// The CPT family:
///
/// ```text
/// Δ₁ = ½ (k(c-a) + b)/√(1+k²)    Ω₁ = ½ (c - a - kb)/√(1+k²)
/// Δ₂ = ½ (k(c+a) - b)/√(1+k²)    Ω₂ = ½ (c + a + kb)/√(1+k²)
/// τ  = π/√(2c)
/// ```
pub fn coupling_params(triple: &PythTriple, k: f64) -> CouplingParams {
    let PythTriple { a, b, c, .. } = *triple;
    let norm = 2.0 * (1.0 + k * k).sqrt();
    CouplingParams {
        delta1: (k * (c - a) + b) / norm,
        omega1: (c - a - k * b) / norm,
        delta2: (k * (c + a) - b) / norm,
        omega2: (c + a + k * b) / norm,
        k,
        tau: PI / (2.0 * c).sqrt(),
    }
}

/// Nearest-neighbour couplings of the four-level lab Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LabCouplings {
    pub v12: f64,
    pub v23: f64,
    pub v34: f64,
    pub v14: f64,
}

pub fn lab_couplings(params: &CouplingParams) -> LabCouplings {
    LabCouplings {
        v12: params.omega1 + params.omega2,
        v23: params.delta1 - params.delta2,
        v34: -params.omega1 + params.omega2,
        v14: params.delta1 + params.delta2,
    }
}

impl LabCouplings {
    /// Inverse of [`lab_couplings`] (the transfer time is not recoverable).
    pub fn to_params(&self, tau: f64) -> CouplingParams {
        CouplingParams::raw(
            (self.v23 + self.v14) / 2.0,
            (self.v12 - self.v34) / 2.0,
            (self.v14 - self.v23) / 2.0,
            (self.v12 + self.v34) / 2.0,
            tau,
        )
    }
}
