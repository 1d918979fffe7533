use std::collections::BTreeMap;

use serde_json::Value;

use crate::decomp::theorem_c::pow4_pieces;
use crate::decomp::{Certificate, Claim, Instance};
use crate::error::{Error, Result};
use crate::exactla::{eigenspace_of_power, is_direct_sum, sum_all, Subspace};
use crate::ffield::{FieldElement, FieldTower};
use crate::formspace::{
    degenerate_rank_value, family, forms_over, nonzero_count, rank_histogram, rank_profile, sym_dim,
    EnumConfig, FormSubspace, Twist,
};

/// Number of inverse pairs `{σ^i, σ^{n-i}}` with `σ^i` neither the identity
/// nor an involution; representatives are `1..=m`.
pub fn inverse_pair_count(n: usize) -> usize {
    if n % 2 == 0 {
        (n / 2).saturating_sub(1)
    } else {
        (n - 1) / 2
    }
}

/// `ker(σ^t - sign)` with `t` taken modulo n.
pub(super) fn eigenspace(tower: &FieldTower, t: usize, sign: i8) -> Result<Subspace> {
    let n = tower.degree();
    let t = match t % n {
        0 => n,
        r => r,
    };
    eigenspace_of_power(tower, t, sign)
}

/// First canonical basis vector of the (-1)-eigenspace of `σ^i`.
pub(super) fn minus_one_eigenvector(tower: &FieldTower, i: usize) -> Result<FieldElement> {
    let e = eigenspace(tower, i, -1)?;
    let v =
        e.basis().first().ok_or_else(|| Error::Hypothesis(format!("sigma^{i} has no (-1)-eigenvector")))?;
    tower.element(v.clone())
}

/// `{φ_{b,σ^i} : b ∈ params}` with the rank profile over nonzero `b`.
/// The claim's observed dimension is that of the parameter subspace.
pub(super) fn param_piece(
    tower: &FieldTower,
    name: String,
    i: usize,
    params: &Subspace,
    cfg: &EnumConfig,
) -> Result<(Claim, FormSubspace)> {
    let forms = forms_over(tower, params, i)?;
    let prof = rank_profile(tower, params, i, cfg)?;
    Ok((Claim::new(name, Twist::Power(i), params.dim()).with_profile(prof), forms))
}

/// The pieces are independent and together span `target`.
pub(super) fn audit(tower: &FieldTower, pieces: &[FormSubspace], target: &Subspace) -> Result<bool> {
    let f = tower.base();
    let spaces: Vec<Subspace> = pieces.iter().map(FormSubspace::space).collect();
    let refs: Vec<&Subspace> = spaces.iter().collect();
    Ok(is_direct_sum(f, &refs)? && sum_all(f, target.ambient(), &refs)? == *target)
}

/// `L = W_1 ⊕ ... ⊕ W_r` inside L.
pub(super) fn splits_l(tower: &FieldTower, parts: &[&Subspace]) -> Result<bool> {
    let f = tower.base();
    let n = tower.degree();
    Ok(is_direct_sum(f, parts)? && sum_all(f, n, parts)?.dim() == n)
}

/// `𝒰_i ⊕ 𝒱_i` for `ord(σ^i) ≡ 2 (mod 4)`, `ord(σ^i) ≠ 2`; `None` otherwise.
struct Mod2Split {
    claims: Vec<Claim>,
    forms: Vec<FormSubspace>,
    j: FieldElement,
    splits: bool,
}

fn mod2_split(tower: &FieldTower, i: usize, cfg: &EnumConfig) -> Result<Option<Mod2Split>> {
    let n = tower.degree();
    let d = tower.order_of_power(i);
    if d % 4 != 2 || d == 2 {
        return Ok(None);
    }
    let u = eigenspace(tower, i * (d / 2), 1)?;
    let j = minus_one_eigenvector(tower, i)?;
    let v = tower.scale_subspace(&j, &u);
    let deg = degenerate_rank_value(tower, i)?;
    let (cu, fu) = param_piece(tower, format!("A{i}.U"), i, &u, cfg)?;
    let (cv, fv) = param_piece(tower, format!("A{i}.V"), i, &v, cfg)?;
    Ok(Some(Mod2Split {
        claims: vec![
            cu.with_dim(n / 2).with_ranks([n]).settle(),
            cv.with_dim(n / 2).with_ranks([deg]).settle(),
        ],
        forms: vec![fu, fv],
        splits: splits_l(tower, &[&u, &v])?,
        j,
    }))
}

/// The global decomposition of Sym_K(L): `A^0 ⊕ A^1 ⊕ ... ⊕ A^m`, with
/// `B^1 = A^{n/2}` prepended when n is even.
pub fn verify_global(tower: &FieldTower) -> Result<Certificate> {
    let n = tower.degree();
    let f = tower.base();
    let m = inverse_pair_count(n);
    let mut pieces: Vec<(String, usize, FormSubspace)> = Vec::new();
    if n % 2 == 0 {
        pieces.push(("B1".into(), n / 2, family(tower, n / 2)?));
    }
    pieces.push(("A0".into(), n, family(tower, 0)?));
    for i in 1..=m {
        pieces.push((format!("A{i}"), n, family(tower, i)?));
    }
    let mut claims: Vec<Claim> = pieces
        .iter()
        .map(|(name, d, fs)| Claim::new(name.clone(), fs.i, fs.dim).with_dim(*d).settle())
        .collect();
    let spaces: Vec<Subspace> = pieces.iter().map(|p| p.2.space()).collect();
    let refs: Vec<&Subspace> = spaces.iter().collect();
    let direct = is_direct_sum(f, &refs)?;
    let total = sum_all(f, sym_dim(n), &refs)?.dim();
    claims.push(Claim::new("Sym", Twist::Mixed, total).with_dim(sym_dim(n)).settle());
    let inst = Instance::of(tower).with("m", m);
    Ok(Certificate::conclude("global-decomposition", inst, claims, BTreeMap::new(), direct, false))
}

/// The rank laws for every representative `σ^i`, `0 ≤ i ≤ n/2`, over all of L:
/// odd order gives only rank n; an involution gives rank 0 exactly on its
/// (-1)-eigenspace and rank n elsewhere; order `2r > 2` gives both ranks
/// `n - n/r` and n and nothing else.
pub fn verify_rank_laws(tower: &FieldTower, cfg: &EnumConfig) -> Result<Certificate> {
    let n = tower.degree();
    let q = tower.q();
    let full = Subspace::full(n);
    let total = u64::try_from(nonzero_count(q, n)).ok();
    let mut claims = Vec::new();
    for i in 0..=n / 2 {
        let order = tower.order_of_power(i);
        let prof = rank_profile(tower, &full, i, cfg)?;
        let mut c = Claim::new(format!("A{i}"), Twist::Power(i), n).with_profile(prof);
        if order % 2 == 1 {
            c = c.with_ranks([n]);
            if let Some(t) = total {
                c = c.with_histogram(BTreeMap::from([(n, t)]));
            }
        } else if order == 2 {
            c = c.with_ranks([0, n]);
            if let Some(t) = total {
                let zero = nonzero_count(q, n / 2) as u64;
                c = c.with_histogram(BTreeMap::from([(0, zero), (n, t - zero)]));
            }
        } else {
            let deg = degenerate_rank_value(tower, i)?;
            c = c.with_ranks([deg, n]).with_required([deg, n]);
        }
        claims.push(c.settle());
    }
    Ok(Certificate::conclude("rank-laws", Instance::of(tower), claims, BTreeMap::new(), true, false))
}

/// `A^1 = 𝒰_1 ⊕ 𝒱_1` for n = 2k with k odd: `U = L_k` gives only
/// non-degenerate forms, `V = jU` only forms of rank n - 2.
pub fn refine_a1_2k(tower: &FieldTower, cfg: &EnumConfig) -> Result<Certificate> {
    const ID: &str = "refine-a1-2k";
    let n = tower.degree();
    let inst = Instance::of(tower);
    if n % 4 != 2 {
        return Ok(Certificate::outside(ID, inst));
    }
    let k = n / 2;
    let u = eigenspace(tower, k, 1)?;
    let j = minus_one_eigenvector(tower, 1)?;
    let v = tower.scale_subspace(&j, &u);
    let (cu, fu) = param_piece(tower, "A1.U".into(), 1, &u, cfg)?;
    let (cv, fv) = param_piece(tower, "A1.V".into(), 1, &v, cfg)?;
    let claims = vec![cu.with_dim(k).with_ranks([n]).settle(), cv.with_dim(k).with_ranks([n - 2]).settle()];

    let sj = tower.frobenius_apply(1, &j);
    let ratio = tower.div(&sj, &j)?;
    let minus_one = tower.neg(&tower.one());
    let mut checks = BTreeMap::new();
    checks.insert("L = U + V".to_string(), splits_l(tower, &[&u, &v])?);
    checks.insert("N(sigma(j)/j) = -1".to_string(), tower.norm_rel(2, &ratio)? == minus_one);

    let direct = audit(tower, &[fu, fv], &family(tower, 1)?.space())?;
    let inst = inst.with("k", k).with("j", j.coeffs().to_vec());
    Ok(Certificate::conclude(ID, inst, claims, checks, direct, false))
}

/// `A^i = 𝒰_i ⊕ 𝒱_i` when `d = ord(σ^i) ≡ 2 (mod 4)` and `d ≠ 2`, with ranks
/// n on `𝒰_i` and `n - 2n/d` on `𝒱_i`.
pub fn refine_ai_mod2(tower: &FieldTower, i: usize, cfg: &EnumConfig) -> Result<Certificate> {
    const ID: &str = "refine-ai-mod2";
    let n = tower.degree();
    if i >= n {
        return Err(Error::PowerOutOfRange { i, n });
    }
    let d = tower.order_of_power(i);
    let inst = Instance::of(tower).with("i", i).with("order", d);
    let Some(split) = mod2_split(tower, i, cfg)? else {
        return Ok(Certificate::outside(ID, inst));
    };
    let checks = BTreeMap::from([("L = U + V".to_string(), split.splits)]);
    let direct = audit(tower, &split.forms, &family(tower, i)?.space())?;
    let inst = inst.with("j", split.j.coeffs().to_vec());
    Ok(Certificate::conclude(ID, inst, split.claims, checks, direct, false))
}

/// The fully refined decomposition of Sym_K(L) for even n: `B^1`, `A^0`,
/// whole `A^i` for odd order, `𝒰_i ⊕ 𝒱_i` for order ≡ 2 (mod 4), and the
/// eigenspace chain for order ≡ 0 (mod 4).
pub fn verify_full_refined(tower: &FieldTower, cfg: &EnumConfig) -> Result<Certificate> {
    const ID: &str = "full-refined";
    let n = tower.degree();
    let f = tower.base();
    let mut inst = Instance::of(tower);
    if n % 2 == 1 {
        return Ok(Certificate::outside(ID, inst));
    }
    let full = Subspace::full(n);
    let mut claims = Vec::new();
    let mut forms = Vec::new();
    let mut checks = BTreeMap::new();

    let b1 = family(tower, n / 2)?;
    let prof = rank_histogram(f, &b1.basis_matrices(), cfg)?;
    claims.push(Claim::new("B1", b1.i, b1.dim).with_dim(n / 2).with_ranks([n]).with_profile(prof).settle());
    forms.push(b1);

    let (c, fs) = param_piece(tower, "A0".into(), 0, &full, cfg)?;
    claims.push(c.with_dim(n).with_ranks([n]).settle());
    forms.push(fs);

    let mut cases = BTreeMap::new();
    for i in 1..=inverse_pair_count(n) {
        let d = tower.order_of_power(i);
        if d % 2 == 1 {
            let (c, fs) = param_piece(tower, format!("A{i}"), i, &full, cfg)?;
            claims.push(c.with_dim(n).with_ranks([n]).settle());
            forms.push(fs);
        } else if let Some(split) = mod2_split(tower, i, cfg)? {
            checks.insert(format!("L = U + V for A{i}"), split.splits);
            claims.extend(split.claims);
            forms.extend(split.forms);
        } else {
            let chain = pow4_pieces(tower, i, cfg)?;
            checks.insert(format!("L = V1 + V2 + E for A{i}"), chain.splits);
            let case = chain.case.map_or(Value::Null, |c| serde_json::to_value(c).expect("case"));
            cases.insert(format!("A{i}"), case);
            claims.extend(chain.claims);
            forms.extend(chain.forms);
        }
    }
    if !cases.is_empty() {
        inst = inst.with("cases", serde_json::Map::from_iter(cases));
    }

    let direct = audit(tower, &forms, &Subspace::full(sym_dim(n)))?;
    Ok(Certificate::conclude(ID, inst, claims, checks, direct, false))
}

/// Every nonzero form in `A^1 ⊕ ... ⊕ A^kk` has rank at least `n - 2kk`.
pub fn min_rank_lower_bound(tower: &FieldTower, kk: usize, cfg: &EnumConfig) -> Result<Certificate> {
    let n = tower.degree();
    let f = tower.base();
    let m = inverse_pair_count(n);
    if kk == 0 || kk > m {
        return Err(Error::Hypothesis(format!("kk = {kk} must lie in 1..={m} for n = {n}")));
    }
    let fams = (1..=kk).map(|i| family(tower, i)).collect::<Result<Vec<_>>>()?;
    let spaces: Vec<Subspace> = fams.iter().map(FormSubspace::space).collect();
    let refs: Vec<&Subspace> = spaces.iter().collect();
    let direct = is_direct_sum(f, &refs)?;
    let sum = sum_all(f, sym_dim(n), &refs)?;
    let gens = FormSubspace::from_space(Twist::Mixed, n, &sum).basis_matrices();
    let prof = rank_histogram(f, &gens, cfg)?;
    let bound = n - 2 * kk;
    let name = (1..=kk).map(|i| format!("A{i}")).collect::<Vec<_>>().join("+");
    let claim = Claim::new(name, Twist::Mixed, sum.dim())
        .with_dim(kk * n)
        .with_ranks(bound..=n)
        .with_profile(prof)
        .settle();
    let inst = Instance::of(tower).with("kk", kk).with("bound", bound);
    Ok(Certificate::conclude("min-rank", inst, vec![claim], BTreeMap::new(), direct, false))
}
