//! Dense complex linear algebra: Kronecker products, column-stacking
//! vectorization and exact propagators of Hermitian generators.
//!
//! Matrices are [`nalgebra::DMatrix`] values, which store entries in
//! column-major order. That makes `vectorize`/`unvectorize` plain reinterpretations
//! of the storage with no arithmetic involved.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds shared by the whole crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Max elementwise `|h - h†|` accepted as Hermitian.
    pub hermitian: f64,
    /// Max elementwise `|U†U - I|` accepted as unitary.
    pub unitary: f64,
    /// `1 - F` below which a transfer counts as complete.
    pub cpt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hermitian: 1e-12, unitary: 1e-10, cpt: 1e-9 }
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The `i`-th standard basis vector (0-based) of dimension `dim`.
pub fn basis(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = ONE;
    v
}

/// Builds a complex matrix from real rows.
pub fn from_real_rows(rows: &[Vec<f64>]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(nrows, ncols, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn max_abs(entries: &[C64]) -> f64 {
    entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of a matrix or vector.
pub trait EntryMax {
    fn entry_max(&self) -> f64;
}

impl<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<C64, R, C>> EntryMax
    for nalgebra::Matrix<C64, R, C, S>
{
    fn entry_max(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Max elementwise `|a - b|`; `f64::INFINITY` if the shapes differ.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermitian_deviation(h: &CMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    max_diff(h, &h.adjoint())
}

pub fn unitary_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

/// Max elementwise `|WᵀW - I|`; only meaningful for real `W`.
pub fn orthogonal_deviation(w: &CMatrix) -> f64 {
    if !w.is_square() {
        return f64::INFINITY;
    }
    let imag = w.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    max_diff(&(w.transpose() * w), &identity(w.nrows())).max(imag)
}

/// Kronecker product: block `(i, j)` of the result is `a[(i, j)] · b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for l in 0..bc {
                for k in 0..br {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors, `|a⟩ ⊗ |b⟩`.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i * b.len() + k] = x * y;
        }
    }
    out
}

/// Column-stacking `V(X)`: component `m·j + i` is `x[(i, j)]` (0-based).
pub fn vectorize(x: &CMatrix) -> CVector {
    CVector::from_column_slice(x.as_slice())
}

/// Inverse of [`vectorize`] for an `m × n` target shape.
pub fn unvectorize(y: &CVector, m: usize, n: usize) -> Result<CMatrix> {
    if y.len() != m * n {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {m}·{n} = {}", m * n),
            got: format!("vector of length {}", y.len()),
        });
    }
    Ok(CMatrix::from_column_slice(m, n, y.as_slice()))
}

/// Spectral decomposition `h = V diag(λ) V†` of a Hermitian matrix.
///
/// Propagators at many times reuse the same decomposition.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        Self::with_tolerance(h, Tolerances::default().hermitian)
    }

    pub fn with_tolerance(h: &CMatrix, hermitian_tol: f64) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}×{}", h.nrows(), h.ncols()),
            });
        }
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let deviation = hermitian_deviation(h);
        if deviation > hermitian_tol {
            return Err(Error::NotHermitian { deviation });
        }
        // The QR iteration reads one triangle; average to use both.
        let sym = (h + h.adjoint()).scale(0.5);
        let eig = sym.try_symmetric_eigen(f64::EPSILON, 100_000).ok_or(Error::EigenFailed)?;
        Ok(Self { values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors })
    }

    /// `exp(-i h t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let phases: Vec<C64> = self.values.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect();
        let mut scaled = self.vectors.clone();
        for (j, ph) in phases.iter().enumerate() {
            for z in scaled.column_mut(j).iter_mut() {
                *z *= *ph;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i h t) ψ` without forming the full propagator.
    pub fn evolve(&self, psi: &CVector, t: f64) -> CVector {
        let mut coeffs = self.vectors.adjoint() * psi;
        for (c, &l) in coeffs.iter_mut().zip(&self.values) {
            *c *= C64::from_polar(1.0, -l * t);
        }
        &self.vectors * coeffs
    }
}

/// `exp(-i h t)` for Hermitian `h`, by diagonalization.
pub fn matexp_unitary(h: &CMatrix, t: f64) -> Result<CMatrix> {
    matexp_unitary_with(h, t, &Tolerances::default())
}

pub fn matexp_unitary_with(h: &CMatrix, t: f64, tol: &Tolerances) -> Result<CMatrix> {
    let u = HermitianEigen::with_tolerance(h, tol.hermitian)?.propagator(t);
    let deviation = unitary_deviation(&u);
    if deviation > tol.unitary {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}

/// Extends real orthonormal `rows` to a full real orthogonal matrix.
///
/// The given rows come first, in order. The rest come from Gram–Schmidt over
/// `e₁, e₂, …` in index order, skipping candidates whose residual norm is
/// below `1e-8`, with each new row's first nonzero entry made positive.
pub fn complete_orthogonal(rows: &[CVector]) -> Result<CMatrix> {
    let dim = rows.first().map(|r| r.len()).ok_or_else(|| {
        Error::InvalidDimension("complete_orthogonal needs at least one row".into())
    })?;
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: format!("rows of length {dim}"),
            got: format!("row of length {}", bad.len()),
        });
    }
    if rows.len() > dim {
        return Err(Error::InvalidDimension(format!("{} rows exceed dimension {dim}", rows.len())));
    }
    let imag = rows.iter().flat_map(|r| r.iter()).map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut basis_rows: Vec<Vec<f64>> =
        rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();

    let mut deviation = imag;
    for (a, ra) in basis_rows.iter().enumerate() {
        for (b, rb) in basis_rows.iter().enumerate() {
            let dot: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            deviation = deviation.max((dot - target).abs());
        }
    }
    if deviation > 1e-10 {
        return Err(Error::NotOrthonormal { deviation });
    }

    for k in 0..dim {
        if basis_rows.len() == dim {
            break;
        }
        let mut cand = vec![0.0; dim];
        cand[k] = 1.0;
        // Two passes of modified Gram–Schmidt keep the result orthogonal to
        // machine precision even after many projections.
        for _ in 0..2 {
            for r in &basis_rows {
                let dot: f64 = r.iter().zip(&cand).map(|(x, y)| x * y).sum();
                cand.iter_mut().zip(r).for_each(|(c, x)| *c -= dot * x);
            }
        }
        let norm = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        let lead = cand.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        cand.iter_mut().for_each(|x| *x *= sign / norm);
        basis_rows.push(cand);
    }
    Ok(from_real_rows(&basis_rows))
}

/// Best global phase aligning `a` with `b`, and what is left over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseMatch {
    /// `θ` such that `a ≈ e^{iθ} b`.
    pub phase: f64,
    /// Max elementwise `|a - e^{iθ} b|`.
    pub residual: f64,
}

/// Aligns `a ≈ e^{iθ} b` with `θ = arg⟨b, a⟩`. Slices must have equal length.
pub fn phase_match(a: &[C64], b: &[C64]) -> PhaseMatch {
    assert_eq!(a.len(), b.len(), "phase_match on slices of different length");
    let overlap: C64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 1e-300 { overlap.arg() } else { 0.0 };
    let rot = C64::from_polar(1.0, phase);
    let residual = a.iter().zip(b).map(|(x, y)| (x - rot * y).norm()).fold(0.0, f64::max);
    PhaseMatch { phase, residual }
}

/// `⟨a|b⟩`.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.dotc(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn real(rows: &[&[f64]]) -> CMatrix {
        from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&a + a.adjoint()).scale(0.5)
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));

        let sz = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let expected = CMatrix::from_diagonal(&CVector::from_vec(
            [1.0, 1.0, -1.0, -1.0].iter().map(|&x| C64::new(x, 0.0)).collect(),
        ));
        assert_eq!(kron(&sz, &identity(2)), expected);

        let sx = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let anti = CMatrix::from_fn(4, 4, |i, j| if i + j == 3 { ONE } else { ZERO });
        assert_eq!(kron(&sx, &sx), anti);
    }

    #[test]
    fn kron_rectangular_shape() {
        let a = CMatrix::from_element(2, 3, ONE);
        let b = CMatrix::from_element(4, 1, ONE);
        assert_eq!(kron(&a, &b).shape(), (8, 3));
    }

    #[test]
    fn kron_vec_matches_matrix_kron() {
        let a = CVector::from_vec(vec![ONE, I]);
        let b = CVector::from_vec(vec![C64::new(2.0, 0.0), ZERO, -ONE]);
        let m = kron(&CMatrix::from_column_slice(2, 1, a.as_slice()), &CMatrix::from_column_slice(3, 1, b.as_slice()));
        assert_eq!(kron_vec(&a, &b).as_slice(), m.as_slice());
    }

    #[test]
    fn vectorize_examples() {
        let (a, b, c, d) = (C64::new(1.0, 0.0), C64::new(2.0, 1.0), C64::new(3.0, 0.0), C64::new(0.0, 4.0));
        let x = CMatrix::from_row_slice(2, 2, &[a, c, b, d]);
        assert_eq!(vectorize(&x).as_slice(), &[a, b, c, d]);

        let sigma2 = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let v = vectorize(&sigma2);
        assert_eq!(v.as_slice(), real(&[&[0.0, -1.0, 1.0, 0.0]]).as_slice());
        assert_eq!(unvectorize(&v, 2, 2).unwrap(), sigma2);

        let v3 = vectorize(&identity(3));
        let expect: Vec<f64> = vec![1., 0., 0., 0., 1., 0., 0., 0., 1.];
        assert_eq!(v3.iter().map(|z| z.re).collect::<Vec<_>>(), expect);

        let v = CVector::from_vec(vec![ONE, ZERO, ZERO, ONE]);
        assert_eq!(unvectorize(&v, 2, 2).unwrap(), identity(2));
    }

    #[test]
    fn unvectorize_rejects_bad_length() {
        let err = unvectorize(&CVector::zeros(5), 2, 3).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2·3 = 6") && msg.contains("length 5"), "{msg}");
    }

    #[test]
    fn unvectorize_random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = CMatrix::from_fn(3, 5, |_, _| C64::new(rng.random(), rng.random()));
        assert_eq!(unvectorize(&vectorize(&r), 3, 5).unwrap(), r);
    }

    #[test]
    fn matexp_examples() {
        let z = CMatrix::zeros(3, 3);
        assert!(max_diff(&matexp_unitary(&z, 1.7).unwrap(), &identity(3)) < 1e-15);

        let sz = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let u = matexp_unitary(&sz, PI).unwrap();
        assert!(max_diff(&u, &(-identity(2))) < 1e-14);

        // cos(t) I - i sin(t) σx at t = π/2
        let sx = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let u = matexp_unitary(&sx, PI / 2.0).unwrap();
        assert!(max_diff(&u, &sx.map(|z| -I * z)) < 1e-14);
    }

    #[test]
    fn matexp_rejects_non_hermitian() {
        let m = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        match matexp_unitary(&m, 1.0) {
            Err(Error::NotHermitian { deviation }) => assert_eq!(deviation, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matexp_group_property_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 5, 9, 16] {
            let h = random_hermitian(&mut rng, n);
            let (t, s) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let lhs = matexp_unitary(&h, t).unwrap() * matexp_unitary(&h, s).unwrap();
            let rhs = matexp_unitary(&h, t + s).unwrap();
            assert!(max_diff(&lhs, &rhs) < 1e-10, "n = {n}");
            assert!(unitary_deviation(&rhs) < 1e-10);
        }
    }

    #[test]
    fn evolve_matches_propagator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 6);
        let eig = HermitianEigen::new(&h).unwrap();
        let psi = basis(6, 2);
        let a = eig.evolve(&psi, 0.8);
        let b = eig.propagator(0.8) * &psi;
        assert!((a - b).entry_max() < 1e-13);
    }

    #[test]
    fn complete_orthogonal_examples() {
        let q = complete_orthogonal(&[basis(3, 0)]).unwrap();
        assert!(max_diff(&q, &identity(3)) < 1e-15);

        let r = CVector::from_vec(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]);
        let q = complete_orthogonal(&[r]).unwrap();
        let expect = real(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]);
        assert!(max_diff(&q, &expect) < 1e-15);
    }

    #[test]
    fn complete_orthogonal_random_seeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [3, 6, 10] {
            // Orthonormal seeds from a random real orthogonal matrix.
            let a = nalgebra::DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
            let q = a.qr().q();
            let seeds: Vec<CVector> = (0..2)
                .map(|k| CVector::from_iterator(dim, q.column(k).iter().map(|&x| C64::new(x, 0.0))))
                .collect();
            let full = complete_orthogonal(&seeds).unwrap();
            assert!(max_diff(&(&full * full.transpose()), &identity(dim)) < 1e-10);
            for (k, s) in seeds.iter().enumerate() {
                assert!((full.row(k).transpose() - s).entry_max() < 1e-15);
            }
        }
    }

    #[test]
    fn complete_orthogonal_rejects_non_orthonormal() {
        let r = CVector::from_vec(vec![ONE, ONE]);
        assert!(matches!(complete_orthogonal(&[r]), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn phase_match_recovers_sign() {
        let a = [ONE, -I];
        let b = [-ONE, I];
        let m = phase_match(&a, &b);
        assert!((m.phase.abs() - PI).abs() < 1e-15);
        assert!(m.residual < 1e-15);
    }
}
