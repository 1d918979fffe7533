//! Invertible-closed subspaces of matrices: the Radon–Hurwitz number and the
//! real-field μ table, explicit witnesses of dimension n over finite fields,
//! the block construction `S(n) ⊇ {(0 A; Aᵀ 0)}`, and exhaustive and greedy
//! searches on tiny instances.
//!
//! A subspace is *invertible-closed* when every nonzero member is invertible.
//! `τ_n(K)` and `μ_n(K)` are the largest dimensions of such subspaces inside
//! all n×n matrices and inside the symmetric ones.

mod search;

use serde::Serialize;

pub use search::{exhaustive_search, gaussian_binomial, greedy_search, GREEDY_ATTEMPTS};

use crate::error::{Error, Result};
use crate::exactla::{Mat, Subspace};
use crate::ffield::{BaseField, FieldTower};
use crate::formspace::{gram, rank_histogram, EnumConfig, EnumerationMode};

/// `n = odd_part · 2^(c + 4d)` with `0 ≤ c ≤ 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RhoDecomposition {
    pub n: u64,
    pub odd_part: u64,
    pub c: u32,
    pub d: u32,
}

impl RhoDecomposition {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDegree("n must be at least 1".into()));
        }
        let v = n.trailing_zeros();
        Ok(RhoDecomposition { n, odd_part: n >> v, c: v % 4, d: v / 4 })
    }

    /// `2^c + 8d`.
    pub fn rho(&self) -> u64 {
        (1u64 << self.c) + 8 * self.d as u64
    }
}

/// The Radon–Hurwitz number.
pub fn rho(n: u64) -> Result<u64> {
    Ok(RhoDecomposition::new(n)?.rho())
}

/// A closed integer interval; serializes as `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval(pub u64, pub u64);

/// The bracket for `μ_n(ℝ)` given by the printed table: `[1, 1]` for odd n,
/// the single value `8d` for `c = 0`, and `[2^(c-1) + 8d, 2^c + 8d]` otherwise.
pub fn real_mu_interval(n: u64) -> Result<Interval> {
    let r = RhoDecomposition::new(n)?;
    if n % 2 == 1 {
        return Ok(Interval(1, 1));
    }
    let base = 8 * r.d as u64;
    Ok(match r.c {
        0 => Interval(base, base),
        c => Interval((1 << (c - 1)) + base, (1 << c) + base),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// All n×n matrices.
    Tau,
    /// Symmetric n×n matrices.
    Mu,
}

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMode {
    Construction,
    /// Depth-first search over canonical echelon bases; `nodes` subspaces
    /// were tested.
    Exhaustive {
        nodes: u64,
    },
    Greedy {
        seed: u64,
        restarts: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub target: Target,
    pub n: usize,
    pub q: u32,
    pub best_dim: usize,
    /// Canonical echelon basis (row-major flattening) of the witness.
    pub witness_basis: Vec<Mat>,
    pub mode: SearchMode,
    /// How the nonzero members of the witness were checked.
    pub verification: EnumerationMode,
    /// Every checked member was invertible.
    pub all_invertible: bool,
    /// `all_invertible` on an exhaustive check.
    pub verified: bool,
}

/// Canonical echelon basis of the span of some n×n matrices.
pub(crate) fn canonical_basis(f: &BaseField, n: usize, mats: &[Mat]) -> Result<Vec<Mat>> {
    let flat: Vec<Vec<u32>> = mats.iter().map(|m| m.data().to_vec()).collect();
    let space = Subspace::span(f, n * n, &flat)?;
    space.basis().iter().map(|v| Mat::from_vec(n, n, v.clone())).collect()
}

impl SearchResult {
    /// Check the members of the span of `mats` and package the result.
    pub fn checked(
        f: &BaseField,
        target: Target,
        n: usize,
        mats: &[Mat],
        mode: SearchMode,
        cfg: &EnumConfig,
    ) -> Result<Self> {
        let witness_basis = canonical_basis(f, n, mats)?;
        let prof = rank_histogram(f, &witness_basis, cfg)?;
        let all_invertible = prof.histogram.keys().all(|&r| r == n);
        Ok(SearchResult {
            target,
            n,
            q: f.q(),
            best_dim: witness_basis.len(),
            witness_basis,
            mode,
            verification: prof.mode,
            all_invertible,
            verified: all_invertible && prof.mode.is_exhaustive(),
        })
    }
}

/// The regular representation `a ↦ (y ↦ ay)` of L: an n-dimensional
/// invertible-closed subspace of `M(n, K)`, so `τ_n(K) = n`.
pub fn construct_regular_rep_subspace(tower: &FieldTower, cfg: &EnumConfig) -> Result<SearchResult> {
    let n = tower.degree();
    let mats: Vec<Mat> = (0..n).map(|j| tower.multiplication_matrix(&tower.basis_element(j))).collect();
    SearchResult::checked(tower.base(), Target::Tau, n, &mats, SearchMode::Construction, cfg)
}

/// The trace forms `A^0 = {tr(2bxy)}`: an n-dimensional invertible-closed
/// subspace of `S(n, K)`, so `μ_n(K) = n`.
pub fn construct_symmetric_witness(tower: &FieldTower, cfg: &EnumConfig) -> Result<SearchResult> {
    let n = tower.degree();
    let mats = (0..n)
        .map(|j| gram(tower, &tower.basis_element(j), 0).map(|s| s.gram))
        .collect::<Result<Vec<_>>>()?;
    SearchResult::checked(tower.base(), Target::Mu, n, &mats, SearchMode::Construction, cfg)
}

/// `(0 A; Aᵀ 0)`.
pub fn block_matrix(a: &Mat) -> Mat {
    let h = a.rows();
    let mut out = Mat::zeros(2 * h, 2 * h);
    for r in 0..h {
        for c in 0..h {
            out.set(r, h + c, a.get(r, c));
            out.set(h + c, r, a.get(r, c));
        }
    }
    out
}

/// `μ_{2h} ≥ τ_h`: the blocks `(0 A; Aᵀ 0)` for A in a verified
/// invertible-closed subspace of `M(h, K)` form an invertible-closed subspace
/// of `S(2h, K)` of the same dimension.
pub fn block_construction(f: &BaseField, u: &SearchResult, cfg: &EnumConfig) -> Result<SearchResult> {
    if !u.verified {
        return Err(Error::Unverified);
    }
    if u.q != f.q() {
        return Err(Error::Shape(format!("witness is over GF({}), not GF({})", u.q, f.q())));
    }
    let blocks: Vec<Mat> = u.witness_basis.iter().map(block_matrix).collect();
    SearchResult::checked(f, Target::Mu, 2 * u.n, &blocks, SearchMode::Construction, cfg)
}

#[cfg(test)]
mod tests;
