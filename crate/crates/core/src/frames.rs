//! Maximally entangled lab frames.
//!
//! For `n = 2^N` the frame `W` has one column per label `d₁d₂…d_N` over
//! `{0,1,2,3}`: the row-major stacking of `Σ_{d₁} ⊗ … ⊗ Σ_{d_N}` scaled by
//! `2^{-N/2}`. Row-major stacking of `K` equals the column-stacking `V(Kᵀ)`; it
//! is the convention under which the canonical orderings give a symmetric `W`.
//! Every column is a maximally entangled state of the `n ⊗ n` bipartition.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthogonal, max_diff, orthogonal_deviation, unvectorize, vectorize, CMatrix, CVector,
    HermitianEigen,
};
use crate::su2::{spin_generators, y_matrix, SIGMA};

/// A word over `{0,1,2,3}` naming a tensor product of Σ matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub struct SigmaLabel(Vec<u8>);

impl SigmaLabel {
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        s.chars()
            .map(|ch| match ch {
                '0'..='3' => Ok(ch as u8 - b'0'),
                _ => Err(Error::InvalidLabel(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(SigmaLabel)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Entries of the unscaled column, each in `{-1, 0, 1}`.
    pub fn signs(&self) -> Vec<i8> {
        let depth = self.0.len();
        let n = 1usize << depth;
        let mut out = vec![0i8; n * n];
        // Row-major read of K = ⊗Σ: component a·n + b holds K[a][b].
        for a in 0..n {
            for b in 0..n {
                let mut v = 1i8;
                for (t, &d) in self.0.iter().enumerate() {
                    let shift = depth - 1 - t;
                    v *= SIGMA.mats[d as usize][(a >> shift) & 1][(b >> shift) & 1];
                    if v == 0 {
                        break;
                    }
                }
                out[a * n + b] = v;
            }
        }
        out
    }
}

impl fmt::Display for SigmaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl From<SigmaLabel> for String {
    fn from(l: SigmaLabel) -> String {
        l.to_string()
    }
}

/// Normalized frame column for `label`.
pub fn label_to_column(label: &SigmaLabel) -> CVector {
    let scale = (2f64).powf(-(label.depth() as f64) / 2.0);
    CVector::from_iterator(
        1 << (2 * label.depth()),
        label.signs().into_iter().map(|s| C64::new(s as f64 * scale, 0.0)),
    )
}

pub const LABELS_N1: [&str; 4] = ["0", "1", "2", "3"];

pub const LABELS_N2: [&str; 16] = [
    "00", "01", "10", "11", "31", "30", "21", "20", "23", "22", "33", "32", "12", "13", "02", "03",
];

pub const LABELS_N3: [&str; 64] = [
    "000", "001", "010", "011", "100", "101", "110", "111", //
    "031", "030", "021", "020", "131", "130", "121", "120", //
    "313", "312", "303", "302", "213", "212", "203", "202", //
    "322", "323", "332", "333", "222", "223", "232", "233", //
    "230", "231", "220", "221", "330", "331", "320", "321", //
    "201", "200", "211", "210", "301", "300", "311", "310", //
    "123", "122", "133", "132", "023", "022", "033", "032", //
    "112", "113", "102", "103", "012", "013", "002", "003", //
];

#[derive(Clone, Debug, Serialize)]
pub struct EntangledFrame {
    /// Tensor depth `N`.
    pub depth: usize,
    /// Local dimension `n = 2^N`.
    pub n: usize,
    /// Full dimension `n²`.
    pub dim: usize,
    pub labels: Vec<SigmaLabel>,
    #[serde(skip)]
    pub w: CMatrix,
    /// Set for frames found by [`search_w`] rather than the canonical tables.
    pub experimental: bool,
}

impl EntangledFrame {
    pub fn from_labels(labels: Vec<SigmaLabel>, experimental: bool) -> Result<Self> {
        let depth = labels.first().map(SigmaLabel::depth).unwrap_or(0);
        let n = 1usize << depth;
        let dim = n * n;
        if depth == 0 || labels.len() != dim || labels.iter().any(|l| l.depth() != depth) {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim} labels of length {depth}"),
                got: format!("{} labels", labels.len()),
            });
        }
        let mut w = CMatrix::zeros(dim, dim);
        for (j, l) in labels.iter().enumerate() {
            w.set_column(j, &label_to_column(l));
        }
        Ok(Self { depth, n, dim, labels, w, experimental })
    }

    /// `W · 2^{N/2}` as exact integers.
    pub fn numerators(&self) -> Vec<Vec<i8>> {
        let cols: Vec<Vec<i8>> = self.labels.iter().map(SigmaLabel::signs).collect();
        (0..self.dim).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_frame(&self.w)
    }
}

/// Canonical frame for `N ∈ {1, 2, 3}`.
pub fn build_w(depth: usize) -> Result<EntangledFrame> {
    let table: &[&str] = match depth {
        1 => &LABELS_N1,
        2 => &LABELS_N2,
        3 => &LABELS_N3,
        _ => return Err(Error::UnsupportedDepth { depth }),
    };
    let labels = table.iter().map(|s| SigmaLabel::parse(s)).collect::<Result<Vec<_>>>()?;
    EntangledFrame::from_labels(labels, false)
}

/// Structural checks on a candidate frame of dimension `n²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    /// (a) the first `n` columns have no negative entries.
    pub first_columns_nonnegative: bool,
    /// (b) the diagonal is positive on its first half and negative on the second.
    pub diagonal_split: bool,
    /// (c) the last column holds equal-magnitude entries of alternating sign, plus zeros.
    pub last_column_alternating: bool,
    pub symmetry_residual: f64,
    pub orthogonality_residual: f64,
}

impl ValidationReport {
    pub fn demands_pass(&self) -> bool {
        self.first_columns_nonnegative && self.diagonal_split && self.last_column_alternating
    }

    pub fn all_pass(&self) -> bool {
        self.demands_pass() && self.symmetry_residual <= 1e-14 && self.orthogonality_residual <= 1e-12
    }
}

pub fn validate_frame(w: &CMatrix) -> ValidationReport {
    const EPS: f64 = 1e-12;
    let dim = w.nrows();
    let n = (dim as f64).sqrt().round() as usize;
    let re = |i: usize, j: usize| w[(i, j)].re;

    let first_columns_nonnegative =
        (0..n.min(w.ncols())).all(|j| (0..dim).all(|i| re(i, j) >= -EPS));
    let diagonal_split = w.is_square()
        && (0..dim).all(|i| if i < dim / 2 { re(i, i) > EPS } else { re(i, i) < -EPS });
    let last_column_alternating = dim > 0 && {
        let nz: Vec<f64> = (0..dim).map(|i| re(i, dim - 1)).filter(|x| x.abs() > EPS).collect();
        !nz.is_empty()
            && nz.iter().all(|x| (x.abs() - nz[0].abs()).abs() < 1e-10)
            && nz.windows(2).all(|p| p[0].signum() != p[1].signum())
    };
    ValidationReport {
        first_columns_nonnegative,
        diagonal_split,
        last_column_alternating,
        symmetry_residual: max_diff(w, &w.transpose()),
        orthogonality_residual: orthogonal_deviation(w),
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { frame: EntangledFrame, nodes: u64 },
    Exhausted { nodes: u64, deepest: usize },
}

/// Depth-first search over label orderings for a symmetric frame meeting
/// demands (a)–(c). Labels are tried in lexicographic order, so the result is
/// deterministic. `budget` caps the number of candidate placements examined.
pub fn search_w(depth: usize, budget: u64) -> Result<SearchOutcome> {
    if depth == 0 {
        return Err(Error::InvalidDimension("search_w needs N ≥ 1".into()));
    }
    if depth == 1 {
        return Ok(SearchOutcome::Found { frame: build_w(1)?, nodes: 0 });
    }
    if depth > 6 {
        return Err(Error::InvalidDimension(format!("search_w supports N ≤ 6, got {depth}")));
    }
    let n = 1usize << depth;
    let dim = n * n;
    let labels: Vec<SigmaLabel> = (0..dim)
        .map(|code| SigmaLabel((0..depth).rev().map(|t| ((code >> (2 * t)) & 3) as u8).collect()))
        .collect();
    let cols: Vec<Vec<i8>> = labels.iter().map(SigmaLabel::signs).collect();
    let nonneg: Vec<bool> = cols.iter().map(|c| c.iter().all(|&x| x >= 0)).collect();

    let mut search = Search {
        n,
        dim,
        cols: &cols,
        nonneg: &nonneg,
        order: Vec::with_capacity(dim),
        used: vec![false; dim],
        last_sign: Vec::with_capacity(dim),
        nodes: 0,
        budget,
        deepest: 0,
    };
    match search.descend() {
        Some(true) => {
            let chosen = search.order.iter().map(|&k| labels[k].clone()).collect();
            Ok(SearchOutcome::Found {
                frame: EntangledFrame::from_labels(chosen, true)?,
                nodes: search.nodes,
            })
        }
        _ => Ok(SearchOutcome::Exhausted { nodes: search.nodes, deepest: search.deepest }),
    }
}

struct Search<'a> {
    n: usize,
    dim: usize,
    cols: &'a [Vec<i8>],
    nonneg: &'a [bool],
    order: Vec<usize>,
    used: Vec<bool>,
    /// Sign of the latest nonzero entry of the last row, per depth.
    last_sign: Vec<i8>,
    nodes: u64,
    budget: u64,
    deepest: usize,
}

impl Search<'_> {
    /// `Some(true)` on success, `Some(false)` when this subtree is infeasible,
    /// `None` when the budget ran out.
    fn descend(&mut self) -> Option<bool> {
        let j = self.order.len();
        self.deepest = self.deepest.max(j);
        if j == self.dim {
            return Some(true);
        }
        let prev_sign = self.last_sign.last().copied().unwrap_or(0);
        for cand in 0..self.dim {
            if self.used[cand] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let col = &self.cols[cand];
            let diag_ok = if j < self.dim / 2 { col[j] > 0 } else { col[j] < 0 };
            if !diag_ok || (j < self.n && !self.nonneg[cand]) {
                continue;
            }
            // W[dim-1][j] = W[j][dim-1]: the last column is built up row by row.
            let tail = col[self.dim - 1];
            if tail != 0 && tail == prev_sign {
                continue;
            }
            if !self.order.iter().enumerate().all(|(i, &k)| col[i] == self.cols[k][j]) {
                continue;
            }
            self.used[cand] = true;
            self.order.push(cand);
            self.last_sign.push(if tail != 0 { tail } else { prev_sign });
            match self.descend() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.last_sign.pop();
            self.order.pop();
            self.used[cand] = false;
        }
        Some(false)
    }
}

/// An `n² × n²` real orthogonal frame for even `n` whose first row is
/// `V(Iₙ)ᵀ/√n` and whose row `n²-n+1` (1-based) is `V(Yₙ)ᵀ/√n`.
pub fn general_even_frame(n: usize) -> Result<CMatrix> {
    let rep = spin_generators(n)?;
    let y = y_matrix(&rep);
    if n % 2 == 1 {
        return Err(Error::OddDimension { n, trace: y.trace().re });
    }
    let scale = 1.0 / (n as f64).sqrt();
    let first = vectorize(&CMatrix::identity(n, n)).scale(scale);
    let second = vectorize(&y).map(|z| C64::new(z.re, 0.0)).scale(scale);
    let q = complete_orthogonal(&[first, second])?;

    let dim = n * n;
    let target = dim - n;
    let mut rows: Vec<usize> = (0..dim).filter(|&r| r != 1).collect();
    rows.insert(target, 1);
    Ok(CMatrix::from_fn(dim, dim, |i, j| q[(rows[i], j)]))
}

/// Von Neumann entropy of the reduced state of a pure state on `n ⊗ n`,
/// with the state read as the column-stacking of an `n × n` matrix.
pub fn entanglement_entropy(column: &CVector, n: usize) -> Result<f64> {
    let norm = column.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let m = unvectorize(column, n, n)?;
    let rho = &m * m.adjoint();
    let rho = (&rho + rho.adjoint()).scale(0.5);
    let eig = HermitianEigen::with_tolerance(&rho, f64::INFINITY)?;
    Ok(eig.values.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum())
}
