//! The twisted trace forms `φ_{b,σ^i}(x, y) = tr(b(x σ^i(y) + σ^i(x) y))`,
//! their families `A^i = {φ_{b,σ^i} : b ∈ L}`, and two independent ways of
//! deciding degeneracy: the rank of the Gram matrix, and the relative norm
//! criterion.
//!
//! Symmetric Gram matrices are identified with their upper triangles, so a
//! subspace of forms lives in a coordinate space of dimension n(n+1)/2.

mod profile;

use serde::{Serialize, Serializer};

pub use profile::{
    derive_seed, nonzero_count, rank_histogram, run_with_workers, EnumConfig, EnumerationMode, Policy,
    RankProfile, DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED,
};

use crate::error::{Error, Result};
use crate::exactla::{kernel, rank, Mat, Subspace};
use crate::ffield::{gcd, FieldElement, FieldTower};

/// A Gram matrix together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymForm {
    pub b: FieldElement,
    pub i: usize,
    pub gram: Mat,
}

impl SymForm {
    pub fn rank(&self, tower: &FieldTower) -> usize {
        rank(tower.base(), &self.gram)
    }

    /// `coeffs(x)ᵀ · gram · coeffs(y)`.
    pub fn evaluate(&self, tower: &FieldTower, x: &FieldElement, y: &FieldElement) -> u32 {
        let f = tower.base();
        let gy = self.gram.mul_vec(f, y.coeffs());
        x.coeffs().iter().zip(&gy).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }
}

fn check_power(tower: &FieldTower, i: usize) -> Result<()> {
    if i >= tower.degree() {
        return Err(Error::PowerOutOfRange { i, n: tower.degree() });
    }
    Ok(())
}

/// Dimension of the space of symmetric n×n matrices.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Gram matrix of `φ_{b,σ^i}` in the power basis.
///
/// With `X[j][k] = tr(b x^j σ^i(x^k))`, the Gram matrix is `X + Xᵀ`, and
/// `X = Bᵀ T S` for the multiplication matrix `B` of `b`, the trace form `T`
/// and the Frobenius matrix `S`.
pub fn gram(tower: &FieldTower, b: &FieldElement, i: usize) -> Result<SymForm> {
    check_power(tower, i)?;
    let f = tower.base();
    let bm = tower.multiplication_matrix(b);
    let x = bm.transpose().mul(f, tower.trace_form()).mul(f, tower.frobenius_matrix(i));
    let gram = x.add(f, &x.transpose());
    Ok(SymForm { b: b.clone(), i, gram })
}

/// The same Gram matrix built from the one-sided form
/// `φ(x, y) = tr((σ^{-i}(bx) + bσ^i(x)) · y)`, using only element arithmetic.
pub fn gram_alt(tower: &FieldTower, b: &FieldElement, i: usize) -> Result<SymForm> {
    check_power(tower, i)?;
    let n = tower.degree();
    let mut gram = Mat::zeros(n, n);
    for j in 0..n {
        let ej = tower.basis_element(j);
        let left = tower.frobenius_apply(n - i, &tower.mul(b, &ej));
        let right = tower.mul(b, &tower.frobenius_apply(i, &ej));
        let kernel_elt = tower.add(&left, &right);
        for k in 0..n {
            let v = tower.trace(&tower.mul(&kernel_elt, &tower.basis_element(k)));
            gram.set(j, k, v);
        }
    }
    Ok(SymForm { b: b.clone(), i, gram })
}

/// `φ_{b,σ^i}(x, y)` straight from the defining trace expression.
pub fn evaluate_direct(
    tower: &FieldTower,
    b: &FieldElement,
    i: usize,
    x: &FieldElement,
    y: &FieldElement,
) -> u32 {
    let sx = tower.frobenius_apply(i, x);
    let sy = tower.frobenius_apply(i, y);
    let inner = tower.add(&tower.mul(x, &sy), &tower.mul(&sx, y));
    tower.trace(&tower.mul(b, &inner))
}

/// The radical `{x : φ(x, ·) = 0}` as a K-subspace of L.
pub fn radical(tower: &FieldTower, form: &SymForm) -> Subspace {
    kernel(tower.base(), &form.gram)
}

/// Norm criterion: for `b ≠ 0` and `ord(σ^i) > 2`, `φ_{b,σ^i}` is degenerate iff
/// `N_{L/L_{2i}}(-σ^i(b)/b) = 1`, where `L_{2i}` is the fixed field of `σ^{2i}`.
pub fn degenerate_by_norm(tower: &FieldTower, b: &FieldElement, i: usize) -> Result<bool> {
    check_power(tower, i)?;
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let order = tower.order_of_power(i);
    if order <= 2 {
        return Err(Error::UnsupportedOrder { i, order });
    }
    let n = tower.degree();
    let ratio = tower.div(&tower.neg(&tower.frobenius_apply(i, b)), b)?;
    let t = gcd(n, 2 * i);
    Ok(tower.norm_rel(t, &ratio)? == tower.one())
}

/// The rank `n - n/r` of every degenerate nonzero form in `A^i`, `ord(σ^i) = 2r`.
pub fn degenerate_rank_value(tower: &FieldTower, i: usize) -> Result<usize> {
    check_power(tower, i)?;
    let order = tower.order_of_power(i);
    if order % 2 == 1 {
        return Err(Error::OddOrder { i, order });
    }
    let n = tower.degree();
    Ok(n - n / (order / 2))
}

/// Which automorphism a subspace of forms is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Power(usize),
    Mixed,
}

impl Serialize for Twist {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Twist::Power(i) => s.serialize_u64(*i as u64),
            Twist::Mixed => s.serialize_str("mixed"),
        }
    }
}

/// A K-subspace of Sym_K(L), stored as upper-triangle coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSubspace {
    pub i: Twist,
    pub n: usize,
    pub dim: usize,
    pub basis: Vec<Vec<u32>>,
}

impl FormSubspace {
    pub fn from_matrices(tower: &FieldTower, i: Twist, mats: &[Mat]) -> Result<Self> {
        let n = tower.degree();
        let flat: Vec<Vec<u32>> = mats.iter().map(Mat::upper_triangle).collect();
        let space = Subspace::span(tower.base(), sym_dim(n), &flat)?;
        Ok(FormSubspace::from_space(i, n, &space))
    }

    pub fn from_space(i: Twist, n: usize, space: &Subspace) -> Self {
        FormSubspace { i, n, dim: space.dim(), basis: space.basis().to_vec() }
    }

    pub fn space(&self) -> Subspace {
        Subspace::from_canonical(sym_dim(self.n), self.basis.clone())
    }

    pub fn basis_matrices(&self) -> Vec<Mat> {
        self.basis
            .iter()
            .map(|v| Mat::from_upper_triangle(self.n, v).expect("flattened symmetric matrix"))
            .collect()
    }
}

/// Gram matrices `φ_{β,σ^i}` for every basis vector `β` of a parameter subspace.
pub fn generators(tower: &FieldTower, params: &Subspace, i: usize) -> Result<Vec<Mat>> {
    if params.ambient() != tower.degree() {
        return Err(Error::AmbientMismatch(tower.degree(), params.ambient()));
    }
    params.basis().iter().map(|v| gram(tower, &tower.element(v.clone())?, i).map(|s| s.gram)).collect()
}

/// `{φ_{b,σ^i} : b ∈ params}` as a subspace of Sym_K(L).
pub fn forms_over(tower: &FieldTower, params: &Subspace, i: usize) -> Result<FormSubspace> {
    let gens = generators(tower, params, i)?;
    FormSubspace::from_matrices(tower, Twist::Power(i), &gens)
}

/// The family `A^i = {φ_{b,σ^i} : b ∈ L}`.
pub fn family(tower: &FieldTower, i: usize) -> Result<FormSubspace> {
    check_power(tower, i)?;
    forms_over(tower, &Subspace::full(tower.degree()), i)
}

/// Kernel of `b ↦ φ_{b,σ^i}`.
pub fn family_kernel(tower: &FieldTower, i: usize) -> Result<Subspace> {
    check_power(tower, i)?;
    let n = tower.degree();
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|j| gram(tower, &tower.basis_element(j), i).map(|s| s.gram.upper_triangle()))
        .collect::<Result<_>>()?;
    Ok(kernel(tower.base(), &Mat::from_columns(sym_dim(n), &cols)))
}

/// Dimension of `A^i` predicted by the order of `σ^i`: n, or n/2 for involutions.
pub fn expected_family_dim(tower: &FieldTower, i: usize) -> usize {
    let n = tower.degree();
    if tower.order_of_power(i) == 2 {
        n / 2
    } else {
        n
    }
}

/// Rank histogram of `φ_{b,σ^i}` over the nonzero `b` in a parameter subspace.
pub fn rank_profile(
    tower: &FieldTower,
    params: &Subspace,
    i: usize,
    cfg: &EnumConfig,
) -> Result<RankProfile> {
    check_power(tower, i)?;
    let gens = generators(tower, params, i)?;
    rank_histogram(tower.base(), &gens, cfg)
}
