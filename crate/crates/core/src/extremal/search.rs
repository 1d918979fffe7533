//! Searches for invertible-closed subspaces of `M(n, K)` and `S(n, K)`.
//!
//! Both searches grow a subspace one vector at a time and keep the list of
//! all its members: `v` extends `W` iff `v + w` is invertible for every
//! `w ∈ W` (the other new members are nonzero multiples of these).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactla::{rank_in_place, Mat};
use crate::extremal::{SearchMode, SearchResult, Target};
use crate::ffield::{BaseField, PrimePower};
use crate::formspace::{derive_seed, sym_dim, EnumConfig};

/// Random candidates tried per greedy step when the ambient space is too
/// large to scan.
pub const GREEDY_ATTEMPTS: u64 = 4096;

/// Ambient spaces with at most this many vectors are scanned in full (in a
/// shuffled order) at every greedy step.
const SCAN_LIMIT: u64 = 1 << 17;

/// Number of k-dimensional subspaces of `GF(q)^dim`, saturating.
pub fn gaussian_binomial(dim: usize, k: usize, q: u64) -> u128 {
    if k > dim {
        return 0;
    }
    // row[j] = [m choose j]_q, built up over m via [m j] = [m-1 j-1] + q^j [m-1 j]
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=dim {
        for j in (1..=k.min(m)).rev() {
            let qj = (q as u128).checked_pow(j as u32).unwrap_or(u128::MAX);
            row[j] = row[j - 1].saturating_add(qj.saturating_mul(row[j]));
        }
    }
    row[k]
}

struct Ambient<'a> {
    f: &'a BaseField,
    target: Target,
    n: usize,
    dim: usize,
}

impl<'a> Ambient<'a> {
    fn new(f: &'a BaseField, target: Target, n: usize) -> Self {
        let dim = match target {
            Target::Tau => n * n,
            Target::Mu => sym_dim(n),
        };
        Ambient { f, target, n, dim }
    }

    /// Row-major n×n entries of a coordinate vector.
    fn entries(&self, v: &[u32]) -> Vec<u32> {
        match self.target {
            Target::Tau => v.to_vec(),
            Target::Mu => Mat::from_upper_triangle(self.n, v).expect("coordinate length").data().to_vec(),
        }
    }

    fn invertible(&self, v: &[u32]) -> bool {
        let mut m = self.entries(v);
        rank_in_place(self.f, &mut m, self.n, self.n) == self.n
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.f.add(x, y)).collect()
    }

    fn extends(&self, members: &[Vec<u32>], v: &[u32]) -> bool {
        members.iter().all(|w| self.invertible(&self.add(w, v)))
    }

    /// Members of `W + K·v` given the members of `W`.
    fn grow(&self, members: &[Vec<u32>], v: &[u32]) -> Vec<Vec<u32>> {
        let mut out = members.to_vec();
        for lam in 1..self.f.q() {
            let lv: Vec<u32> = v.iter().map(|&x| self.f.mul(lam, x)).collect();
            out.extend(members.iter().map(|w| self.add(w, &lv)));
        }
        out
    }

    fn decode(&self, mut code: u64) -> Vec<u32> {
        let q = self.f.q() as u64;
        (0..self.dim)
            .map(|_| {
                let d = (code % q) as u32;
                code /= q;
                d
            })
            .collect()
    }

    fn matrices(&self, basis: &[Vec<u32>]) -> Vec<Mat> {
        basis.iter().map(|v| Mat::from_vec(self.n, self.n, self.entries(v)).expect("square")).collect()
    }
}

fn base_field(q: u64) -> Result<BaseField> {
    let pp = PrimePower::from_order(q)?;
    BaseField::new(pp.p() as u64, pp.s())
}

struct Dfs<'a> {
    amb: Ambient<'a>,
    cap: usize,
    nodes: u64,
    best: Vec<Vec<u32>>,
}

impl Dfs<'_> {
    /// `rows` is a reduced echelon basis whose pivots decrease in push order,
    /// so a new row with a smaller pivot, zeros on the existing pivots and
    /// free entries elsewhere keeps it reduced: each subspace is visited once.
    fn visit(&mut self, rows: &mut Vec<Vec<u32>>, pivots: &mut Vec<usize>, members: &[Vec<u32>]) {
        self.nodes += 1;
        if rows.len() > self.best.len() {
            self.best = rows.clone();
        }
        if rows.len() == self.cap {
            return;
        }
        let q = self.amb.f.q();
        let top = pivots.last().copied().unwrap_or(self.amb.dim);
        for p in (0..top).rev() {
            let free: Vec<usize> = (p + 1..self.amb.dim).filter(|c| !pivots.contains(c)).collect();
            let mut v = vec![0u32; self.amb.dim];
            v[p] = 1;
            loop {
                if self.amb.extends(members, &v) {
                    let grown = self.amb.grow(members, &v);
                    rows.push(v.clone());
                    pivots.push(p);
                    self.visit(rows, pivots, &grown);
                    rows.pop();
                    pivots.pop();
                }
                // odometer over the free entries
                let mut k = 0;
                while k < free.len() {
                    let c = free[k];
                    v[c] += 1;
                    if v[c] < q {
                        break;
                    }
                    v[c] = 0;
                    k += 1;
                }
                if k == free.len() {
                    break;
                }
            }
        }
    }
}

/// Exact maximum dimension of an invertible-closed subspace of `M(n, GF(q))`
/// (`Tau`) or `S(n, GF(q))` (`Mu`), with the first witness met in a fixed
/// depth-first order.
///
/// Subspaces of dimension up to `n + 1` are explored, so a result of n also
/// certifies that no `(n+1)`-dimensional candidate is invertible-closed.
/// Refuses when the number of candidate subspaces exceeds the budget.
pub fn exhaustive_search(target: Target, n: usize, q: u64, cfg: &EnumConfig) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::InvalidDegree("n must be at least 1".into()));
    }
    let f = base_field(q)?;
    let amb = Ambient::new(&f, target, n);
    let cap = (n + 1).min(amb.dim);
    let candidates = (0..=cap).map(|k| gaussian_binomial(amb.dim, k, q)).fold(0u128, u128::saturating_add);
    if candidates > cfg.budget as u128 {
        return Err(Error::BudgetExceeded { needed: candidates, budget: cfg.budget });
    }
    let mut dfs = Dfs { amb, cap, nodes: 0, best: Vec::new() };
    let zero = vec![vec![0u32; dfs.amb.dim]];
    dfs.visit(&mut Vec::new(), &mut Vec::new(), &zero);
    let mats = dfs.amb.matrices(&dfs.best);
    let mode = SearchMode::Exhaustive { nodes: dfs.nodes };
    SearchResult::checked(&f, target, n, &mats, mode, cfg)
}

fn greedy_pass(amb: &Ambient, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let q = amb.f.q() as u64;
    let total = q.checked_pow(amb.dim as u32);
    let mut members = vec![vec![0u32; amb.dim]];
    let mut basis = Vec::new();
    while basis.len() < amb.dim {
        let found = match total {
            Some(t) if t <= SCAN_LIMIT => {
                let mut order: Vec<u64> = (1..t).collect();
                order.shuffle(rng);
                order.into_iter().map(|c| amb.decode(c)).find(|v| amb.extends(&members, v))
            }
            _ => (0..GREEDY_ATTEMPTS)
                .map(|_| (0..amb.dim).map(|_| rng.gen_range(0..q as u32)).collect::<Vec<_>>())
                .find(|v| amb.extends(&members, v)),
        };
        let Some(v) = found else { break };
        members = amb.grow(&members, &v);
        basis.push(v);
    }
    basis
}

/// Randomized greedy growth of an invertible-closed subspace, repeated
/// `restarts` more times with seeds derived from `seed`; the best pass wins
/// (ties go to the earliest). `restarts = 0` runs only the first pass.
///
/// Growth stops only when no candidate extends the subspace, so a result
/// larger than n would contradict `τ_n ≤ n`; that is asserted.
pub fn greedy_search(
    target: Target,
    n: usize,
    q: u64,
    seed: u64,
    restarts: u32,
    cfg: &EnumConfig,
) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::InvalidDegree("n must be at least 1".into()));
    }
    let f = base_field(q)?;
    let amb = Ambient::new(&f, target, n);
    let passes: Vec<Vec<Vec<u32>>> = (0..=restarts as u64)
        .into_par_iter()
        .map(|r| greedy_pass(&amb, &mut ChaCha8Rng::seed_from_u64(derive_seed(seed, r))))
        .collect();
    let best = passes.into_iter().rev().max_by_key(Vec::len).expect("at least one pass");
    assert!(best.len() <= n, "invertible-closed subspace of dimension {} > n = {n}", best.len());
    let mats = amb.matrices(&best);
    SearchResult::checked(&f, target, n, &mats, SearchMode::Greedy { seed, restarts }, cfg)
}
