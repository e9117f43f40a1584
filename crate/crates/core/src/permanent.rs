//! Matrix permanents and Fock-basis matrix elements of passive networks.
//!
//! For a mode unitary `Λ` the amplitude `⟨m|Û|n⟩` equals the permanent of
//! the submatrix whose rows repeat mode `i` exactly `m_i` times and whose
//! columns repeat mode `j` exactly `n_j` times, scaled by
//! `(Π m_i! Π n_j!)^{-1/2}`.

use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::fock::{FockState, C64};

/// Largest photon number for which matrix elements are evaluated.
pub const MAX_PHOTONS: usize = 12;

const FACTORIALS: [f64; MAX_PHOTONS + 1] = {
    let mut table = [1.0; MAX_PHOTONS + 1];
    let mut i = 1;
    while i <= MAX_PHOTONS {
        table[i] = table[i - 1] * i as f64;
        i += 1;
    }
    table
};

pub fn factorial(n: usize) -> Result<f64> {
    FACTORIALS
        .get(n)
        .copied()
        .ok_or(Error::TooManyPhotons { photons: n, max: MAX_PHOTONS })
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NonSquare { rows: dim, row: i, cols: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![C64::default(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Largest entrywise deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.adjoint() * self;
        let id = Self::identity(self.dim);
        prod.entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Submatrix with the given (possibly repeated) row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        debug_assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for &r in rows {
            for &c in cols {
                entries.push(self[(r, c)]);
            }
        }
        Self { dim: k, entries }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Permanent via Ryser's inclusion–exclusion formula in Gray-code order,
/// `O(2^d d)`. The empty matrix has permanent 1.
pub fn permanent(m: &ComplexMatrix) -> C64 {
    let n = m.dim();
    match n {
        0 => return C64::new(1.0, 0.0),
        1 => return m[(0, 0)],
        2 => return m[(0, 0)] * m[(1, 1)] + m[(0, 1)] * m[(1, 0)],
        _ => {}
    }
    let mut row_sums = vec![C64::default(); n];
    let mut total = C64::default();
    let mut gray = 0usize;
    for k in 1usize..(1 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, j)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, j)];
            }
        }
        let prod = row_sums.iter().fold(C64::new(1.0, 0.0), |acc, &s| acc * s);
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Permanent as the literal sum over all `d!` permutations (Heap's
/// algorithm). Reference implementation for small matrices.
pub fn permanent_naive(m: &ComplexMatrix) -> C64 {
    let n = m.dim();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let term = |perm: &[usize]| {
        perm.iter()
            .enumerate()
            .fold(C64::new(1.0, 0.0), |acc, (i, &j)| acc * m[(i, j)])
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut total = term(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            total += term(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    total
}

fn repeated_indices(occ: &FockState) -> Vec<usize> {
    occ.occupations()
        .iter()
        .enumerate()
        .flat_map(|(mode, &count)| std::iter::repeat_n(mode, count))
        .collect()
}

fn check_modes(lambda: &ComplexMatrix, occ: &FockState) -> Result<()> {
    if occ.modes() != lambda.dim() {
        return Err(Error::ModeCountMismatch { expected: lambda.dim(), found: occ.modes() });
    }
    Ok(())
}

/// The `k×k` matrix `Λ[(1^{m_1},…)|(1^{n_1},…)]`: rows repeat mode `i`
/// `m_i` times and columns repeat mode `j` `n_j` times, ascending.
pub fn expand_multi_index(
    lambda: &ComplexMatrix,
    out_occ: &FockState,
    in_occ: &FockState,
) -> Result<ComplexMatrix> {
    check_modes(lambda, out_occ)?;
    check_modes(lambda, in_occ)?;
    let (m, n) = (out_occ.total_photons(), in_occ.total_photons());
    if m != n {
        return Err(Error::PhotonNumberMismatch { output: m, input: n });
    }
    if n == 0 {
        return Err(Error::EmptyMultiIndex);
    }
    Ok(lambda.select(&repeated_indices(out_occ), &repeated_indices(in_occ)))
}

/// `⟨out|Û|in⟩` for the passive network with mode unitary `Λ`.
///
/// Returns zero when photon totals differ and one for vacuum to vacuum.
pub fn matrix_element(lambda: &ComplexMatrix, out_occ: &FockState, in_occ: &FockState) -> Result<C64> {
    check_modes(lambda, out_occ)?;
    check_modes(lambda, in_occ)?;
    let total = in_occ.total_photons();
    if out_occ.total_photons() != total {
        return Ok(C64::default());
    }
    if total > MAX_PHOTONS {
        return Err(Error::TooManyPhotons { photons: total, max: MAX_PHOTONS });
    }
    let mut norm = 1.0;
    for &k in out_occ.occupations().iter().chain(in_occ.occupations()) {
        norm *= factorial(k)?;
    }
    let sub = lambda.select(&repeated_indices(out_occ), &repeated_indices(in_occ));
    Ok(permanent(&sub) / norm.sqrt())
}
