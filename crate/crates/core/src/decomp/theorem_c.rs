//! The eigenspace refinement of `A^1` over a finite field in which -1 is not
//! a square, and its case analysis in terms of the 2-adic valuations of
//! `q + 1` and n.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::decomp::verify::{audit, eigenspace, param_piece, splits_l};
use crate::decomp::{Certificate, Claim, Instance};
use crate::error::{Error, Result};
use crate::exactla::Subspace;
use crate::ffield::FieldTower;
use crate::formspace::{family, rank_profile, EnumConfig, FormSubspace, Twist};

/// `x = 2^e · odd`.
fn split_two(mut x: u128) -> (u32, u128) {
    let mut e = 0;
    while x % 2 == 0 {
        x /= 2;
        e += 1;
    }
    (e, x)
}

/// `q + 1 = 2^a · l` and `n = 2^alpha · k` with l, k odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCParams {
    pub q: u128,
    pub a: u32,
    pub l: u128,
    pub alpha: u32,
    pub k: u128,
}

impl TheoremCParams {
    /// Requires `q ≡ 3 (mod 4)` (so -1 is not a square in GF(q)) and `4 | n`.
    pub fn new(q: u128, n: usize) -> Result<Self> {
        if q % 4 != 3 {
            return Err(Error::Hypothesis(format!("-1 is a square in GF({q}); need q = 3 (mod 4)")));
        }
        if n == 0 || n % 4 != 0 {
            return Err(Error::Hypothesis(format!("n = {n} is not divisible by 4")));
        }
        let (a, l) = split_two(q + 1);
        let (alpha, k) = split_two(n as u128);
        Ok(TheoremCParams { q, a, l, alpha, k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCCase {
    /// `alpha ≤ a + 1`: every `ℰ_i` is an n-subspace.
    Case1,
    /// `alpha > a + 1` and `l = 1`: `ℰ_i` is an n-subspace for `i ≤ a` and an
    /// `(n-2)`-subspace beyond.
    Case2,
    /// `alpha > a + 1` and `l > 1`: no constant-rank statement.
    Outside,
}

pub fn theorem_c_case(params: &TheoremCParams) -> TheoremCCase {
    if params.alpha <= params.a + 1 {
        TheoremCCase::Case1
    } else if params.l == 1 {
        TheoremCCase::Case2
    } else {
        TheoremCCase::Outside
    }
}

pub(super) struct Pow4Chain {
    pub claims: Vec<Claim>,
    pub forms: Vec<FormSubspace>,
    /// Case of the relative statement over `L_g`, `g = n/ord(σ^i)`; `None`
    /// when -1 is a square in `L_g`.
    pub case: Option<TheoremCCase>,
    pub splits: bool,
}

/// `A^i = 𝒱_1^i ⊕ 𝒱_2^i ⊕ ℰ_1^i ⊕ ... ⊕ ℰ_{β-1}^i` for `d = ord(σ^i) = 2^β k'`
/// with `β ≥ 2`.
///
/// `σ^i` generates `Gal(L/L_g)`, and the degeneracy of `φ_{b,σ^i}` depends only
/// on the action of `σ^i` on `L_{2g}`, where it agrees with `σ^g`. So the
/// constant-rank statements are those of the theorem over `L_g` (of size
/// `q^g`), with the degenerate rank `n - 2n/d`. When -1 is a square in `L_g`
/// only the two-valued rank law is claimed.
pub(super) fn pow4_pieces(tower: &FieldTower, i: usize, cfg: &EnumConfig) -> Result<Pow4Chain> {
    let n = tower.degree();
    let d = tower.order_of_power(i);
    debug_assert!(d % 4 == 0);
    let (beta, kp) = split_two(d as u128);
    let kp = kp as usize;
    let g = n / d;
    let deg = n - 2 * n / d;
    let params = (tower.q() as u128).checked_pow(g as u32).and_then(|qq| TheoremCParams::new(qq, d).ok());
    let case = params.as_ref().map(theorem_c_case);
    let both = [deg, n];

    let v1 = eigenspace(tower, i * kp, 1)?;
    let v2 = eigenspace(tower, i * kp, -1)?;
    let mut claims = Vec::new();
    let mut forms = Vec::new();
    let mut parts: Vec<Subspace> = Vec::new();
    for (name, space) in [("V1", v1), ("V2", v2)] {
        let (c, fs) = param_piece(tower, format!("A{i}.{name}"), i, &space, cfg)?;
        let c = match case {
            Some(TheoremCCase::Case1 | TheoremCCase::Case2) => c.with_ranks([deg]),
            _ => c.with_ranks(both),
        };
        claims.push(c.with_dim(kp * n / d).settle());
        forms.push(fs);
        parts.push(space);
    }
    for t in 1..beta {
        let space = eigenspace(tower, i * (d >> t), -1)?;
        let (c, fs) = param_piece(tower, format!("A{i}.E{t}"), i, &space, cfg)?;
        let c = match (case, params) {
            (Some(TheoremCCase::Case1), _) => c.with_ranks([n]),
            (Some(TheoremCCase::Case2), Some(p)) if t <= p.a => c.with_ranks([n]),
            (Some(TheoremCCase::Case2), _) => c.with_ranks([deg]),
            _ => c.with_ranks(both),
        };
        // the dimension n/2^t is asserted for A^1 only
        let c = if i == 1 { c.with_dim(n >> t) } else { c };
        claims.push(c.settle());
        forms.push(fs);
        parts.push(space);
    }
    let refs: Vec<&Subspace> = parts.iter().collect();
    let splits = splits_l(tower, &refs)?;
    Ok(Pow4Chain { claims, forms, case, splits })
}

/// The refinement `A^1 = 𝒱_1 ⊕ 𝒱_2 ⊕ ℰ_1 ⊕ ... ⊕ ℰ_{α-1}` with rank claims
/// according to [`theorem_c_case`]. Instances in the `Outside` case are still
/// measured; their certificate carries the histograms and the verdict
/// `outside_hypotheses`.
///
/// Errors when `q ≢ 3 (mod 4)` or `4 ∤ n`.
pub fn refine_a1_pow4(tower: &FieldTower, cfg: &EnumConfig) -> Result<Certificate> {
    let n = tower.degree();
    let params = TheoremCParams::new(tower.q() as u128, n)?;
    let case = theorem_c_case(&params);
    let chain = pow4_pieces(tower, 1, cfg)?;

    let mut claims = chain.claims;
    let deg = n - 2;
    let whole = rank_profile(tower, &Subspace::full(n), 1, cfg)?;
    claims.push(
        Claim::new("A1", Twist::Power(1), n)
            .with_dim(n)
            .with_ranks([deg, n])
            .with_required([deg, n])
            .with_profile(whole)
            .settle(),
    );
    let checks = BTreeMap::from([("L = V1 + V2 + E".to_string(), chain.splits)]);
    let direct = audit(tower, &chain.forms, &family(tower, 1)?.space())?;
    let inst = Instance::of(tower)
        .with("q", params.q as u64)
        .with("a", params.a)
        .with("l", params.l as u64)
        .with("alpha", params.alpha)
        .with("k", params.k as u64)
        .with("case", serde_json::to_value(case).expect("case serializes"));
    Ok(Certificate::conclude("theorem-c", inst, claims, checks, direct, case == TheoremCCase::Outside))
}
