//! Integral spectra with exact certificates.
//!
//! Floating-point eigenvalues only nominate integer candidates. Each
//! candidate `t` is certified by the exact nullity of `A - tI`, computed by
//! fraction-free (Bareiss) elimination over arbitrary-precision integers.
//! For a symmetric matrix the eigenspaces of distinct eigenvalues are
//! independent, so certified nullities summing to `n` prove the spectrum is
//! integral and complete.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

/// Absolute distance within which a float eigenvalue nominates an integer.
pub const CANDIDATE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralSpectrum {
    /// `(eigenvalue, multiplicity)`, eigenvalues decreasing.
    pub pairs: Vec<(i64, usize)>,
}

impl IntegralSpectrum {
    pub fn eigenvalues(&self) -> BTreeSet<i64> {
        self.pairs.iter().map(|&(l, _)| l).collect()
    }

    pub fn multiplicity(&self, eigenvalue: i64) -> usize {
        self.pairs.iter().find(|&&(l, _)| l == eigenvalue).map_or(0, |&(_, m)| m)
    }

    pub fn dimension(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// `sum lambda * mult`, the trace of the adjacency matrix.
    pub fn trace(&self) -> i64 {
        self.pairs.iter().map(|&(l, m)| l * m as i64).sum()
    }

    /// `sum lambda^2 * mult`, the number of closed 2-walks.
    pub fn second_moment(&self) -> i64 {
        self.pairs.iter().map(|&(l, m)| l * l * m as i64).sum()
    }

    pub fn trace_checks(&self, g: &Graph) -> TraceChecks {
        let arcs: usize = (0..g.n()).map(|u| g.degree(u)).sum();
        TraceChecks {
            multiplicities_sum_to_n: self.dimension() == g.n(),
            trace_is_zero: self.trace() == 0,
            second_moment_matches_arcs: self.second_moment() == arcs as i64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceChecks {
    pub multiplicities_sum_to_n: bool,
    pub trace_is_zero: bool,
    /// `sum lambda^2 m` equals the arc count, `n k` when `k`-regular.
    pub second_moment_matches_arcs: bool,
}

impl TraceChecks {
    pub fn all(&self) -> bool {
        self.multiplicities_sum_to_n && self.trace_is_zero && self.second_moment_matches_arcs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonIntegral {
    /// Integer eigenvalues that were certified, with multiplicities.
    pub certified: Vec<(i64, usize)>,
    /// `n` minus the certified dimension.
    pub residual_dimension: usize,
}

impl std::fmt::Display for NonIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "spectrum is not integral: {} dimensions uncertified", self.residual_dimension)
    }
}

impl std::error::Error for NonIntegral {}

/// Rank of an integer matrix by Bareiss elimination with row pivoting.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let height = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(pivot) = (rank..height).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = &prow[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..width {
                let v = p * &row[j] - &factor * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = prow[col].clone();
        rank += 1;
    }
    rank
}

pub fn adjacency_rows(g: &Graph) -> Vec<Vec<i64>> {
    (0..g.n()).map(|u| (0..g.n()).map(|v| i64::from(g.has_arc(u, v))).collect()).collect()
}

/// `dim ker(A - tI)` over the rationals.
pub fn exact_nullity(g: &Graph, t: i64) -> usize {
    let mut rows = adjacency_rows(g);
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] -= t;
    }
    g.n() - exact_rank(&rows)
}

/// Float eigenvalues of the symmetric adjacency matrix, ascending.
pub fn numeric_eigenvalues(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_arc(i, j) { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Certified integral spectrum, or the certified part and the residual.
pub fn integral_spectrum(g: &Graph) -> Result<std::result::Result<IntegralSpectrum, NonIntegral>> {
    if g.is_directed() || !g.is_symmetric() {
        return Err(Error::InvalidInput("spectrum needs an undirected graph".into()));
    }
    let candidates: BTreeSet<i64> = numeric_eigenvalues(g)
        .into_iter()
        .filter(|x| (x - x.round()).abs() <= CANDIDATE_TOLERANCE)
        .map(|x| x.round() as i64)
        .collect();
    let mut pairs: Vec<(i64, usize)> =
        candidates.into_iter().rev().map(|t| (t, exact_nullity(g, t))).filter(|&(_, m)| m > 0).collect();
    pairs.sort_by_key(|&(l, _)| std::cmp::Reverse(l));
    let dim: usize = pairs.iter().map(|&(_, m)| m).sum();
    if dim == g.n() {
        Ok(Ok(IntegralSpectrum { pairs }))
    } else {
        Ok(Err(NonIntegral { certified: pairs, residual_dimension: g.n() - dim }))
    }
}

/// `{2(k+1), 2(k-1), -2(k-1), 2, -2}`.
pub fn expected_family_spectrum(k: usize) -> Result<BTreeSet<i64>> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
    }
    let k = k as i64;
    Ok(BTreeSet::from([2 * (k + 1), 2 * (k - 1), -2 * (k - 1), 2, -2]))
}
