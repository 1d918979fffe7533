use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Mat, Subspace};
use crate::ffield::fq::BaseField;
use crate::ffield::poly;

/// An element of L = GF(q^n): coefficients in the power basis `1, x, ..., x^(n-1)`,
/// each a base-field code. Serializes as a little-endian JSON array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(Vec<u32>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// True when the element lies in the base field K (only the constant term is set).
    pub fn in_base_field(&self) -> bool {
        self.0.iter().skip(1).all(|&c| c == 0)
    }
}

/// Serialized form of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u32,
    pub s: u32,
    pub n: usize,
    pub base_poly: Vec<u32>,
    pub ext_poly: Vec<u32>,
}

/// The cyclic extension L = GF(q^n) over K = GF(q), q = p^s, with the
/// canonical defining polynomials and all Frobenius powers precomputed as
/// K-linear matrices acting on coefficient columns.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    n: usize,
    ext_poly: Vec<u32>,
    /// `x^k mod ext_poly` for `k in n..2n-1`.
    reduction: Vec<Vec<u32>>,
    frobenius: Vec<Mat>,
    /// `tr(x^c)` for every basis element.
    trace_vector: Vec<u32>,
    /// `tr(x^a x^c)`: the trace form in the power basis.
    trace_form: Mat,
}

impl FieldTower {
    pub fn new(p: u64, s: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDegree("extension degree must be at least 1".into()));
        }
        let base = BaseField::new(p, s)?;
        let ext_poly = poly::find_irreducible(&base, n);
        Ok(FieldTower::with_polynomial(base, ext_poly))
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<Self> {
        let tower = FieldTower::new(spec.p as u64, spec.s, spec.n)?;
        if tower.spec() != *spec {
            return Err(Error::Parse("tower polynomials differ from the canonical choice".into()));
        }
        Ok(tower)
    }

    fn with_polynomial(base: BaseField, ext_poly: Vec<u32>) -> Self {
        let n = ext_poly.len() - 1;
        let f = &base;
        let mut reduction = Vec::with_capacity(n.saturating_sub(1));
        for k in n..2 * n - 1 {
            let mut mono = vec![0; k + 1];
            mono[k] = 1;
            let mut r = poly::rem(f, &mono, &ext_poly);
            r.resize(n, 0);
            reduction.push(r);
        }
        let mut tower = FieldTower {
            base,
            n,
            ext_poly,
            reduction,
            frobenius: Vec::new(),
            trace_vector: Vec::new(),
            trace_form: Mat::zeros(0, 0),
        };

        // σ(x^j) = (x^q)^j
        let mut xq = poly::powmod(&tower.base, &[0, 1], tower.base.q() as u64, &tower.ext_poly);
        xq.resize(n, 0);
        let xq = FieldElement(xq);
        let mut cols = Vec::with_capacity(n);
        let mut cur = tower.one();
        for _ in 0..n {
            cols.push(cur.0.clone());
            cur = tower.mul(&cur, &xq);
        }
        let sigma = Mat::from_columns(n, &cols);
        let mut mats = vec![Mat::identity(n)];
        for i in 1..n {
            let next = sigma.mul(&tower.base, &mats[i - 1]);
            mats.push(next);
        }
        tower.frobenius = mats;

        tower.trace_vector = (0..n)
            .map(|c| (0..n).fold(0, |acc, j| tower.base.add(acc, tower.frobenius[j].get(0, c))))
            .collect();
        let mut tf = Mat::zeros(n, n);
        for a in 0..n {
            for c in a..n {
                let v = tower.trace(&tower.mul(&tower.basis_element(a), &tower.basis_element(c)));
                tf.set(a, c, v);
                tf.set(c, a, v);
            }
        }
        tower.trace_form = tf;
        tower
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn ext_poly(&self) -> &[u32] {
        &self.ext_poly
    }

    pub fn spec(&self) -> TowerSpec {
        TowerSpec {
            p: self.base.p(),
            s: self.base.s(),
            n: self.n,
            base_poly: self.base.modulus().to_vec(),
            ext_poly: self.ext_poly.clone(),
        }
    }

    /// Number of elements of L, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.n as u32)
    }

    /// Build an element from coefficient codes, checking length and range.
    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement> {
        if coeffs.len() != self.n {
            return Err(Error::Parse(format!(
                "element has {} coefficients, expected {}",
                coeffs.len(),
                self.n
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| !self.base.is_valid(c)) {
            return Err(Error::Parse(format!("coefficient {c} is not below q = {}", self.q())));
        }
        Ok(FieldElement(coeffs))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.n])
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    pub fn from_base(&self, k: u32) -> FieldElement {
        let mut c = vec![0; self.n];
        c[0] = k;
        FieldElement(c)
    }

    /// The power-basis element `x^j`.
    pub fn basis_element(&self, j: usize) -> FieldElement {
        let mut c = vec![0; self.n];
        c[j] = 1;
        FieldElement(c)
    }

    /// Every element of L in odometer order (coefficient 0 fastest).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.q();
        let total = self.order().expect("field too large to enumerate");
        (0..total).map(move |mut idx| {
            FieldElement(
                (0..self.n)
                    .map(|_| {
                        let d = (idx % q as u128) as u32;
                        idx /= q as u128;
                        d
                    })
                    .collect(),
            )
        })
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    pub fn scale(&self, k: u32, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|&x| self.base.mul(k, x)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let f = &self.base;
        let n = self.n;
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        let mut out = prod[..n].to_vec();
        for k in n..2 * n - 1 {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduction[k - n]) {
                *o = f.add(*o, f.mul(c, r));
            }
        }
        FieldElement(out)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// `a^(q^i)` by repeated q-th powering; independent of the Frobenius matrices.
    pub fn frobenius_by_powering(&self, i: usize, a: &FieldElement) -> FieldElement {
        (0..i).fold(a.clone(), |acc, _| self.pow(&acc, self.q() as u128))
    }

    /// Matrix of σ^i, σ = (b ↦ b^q); `i` is taken mod n.
    pub fn frobenius_matrix(&self, i: usize) -> &Mat {
        &self.frobenius[i % self.n]
    }

    /// σ^i(a); `i` is taken mod n, so σ^(-i) is `frobenius_apply(n - i, a)`.
    pub fn frobenius_apply(&self, i: usize, a: &FieldElement) -> FieldElement {
        FieldElement(self.frobenius_matrix(i).mul_vec(&self.base, &a.0))
    }

    /// Multiplicative order of σ^i, i.e. `n / gcd(n, i)`.
    pub fn order_of_power(&self, i: usize) -> usize {
        self.n / gcd(self.n, i % self.n)
    }

    fn check_divisor(&self, t: usize) -> Result<()> {
        if t == 0 || self.n % t != 0 {
            return Err(Error::NotADivisor { t, n: self.n });
        }
        Ok(())
    }

    /// Relative trace from L to the fixed field of σ^t, `t | n`.
    pub fn trace_rel(&self, t: usize, a: &FieldElement) -> Result<FieldElement> {
        self.check_divisor(t)?;
        Ok((0..self.n / t).fold(self.zero(), |acc, j| self.add(&acc, &self.frobenius_apply(t * j, a))))
    }

    /// Relative norm from L to the fixed field of σ^t, `t | n`.
    pub fn norm_rel(&self, t: usize, a: &FieldElement) -> Result<FieldElement> {
        self.check_divisor(t)?;
        Ok((0..self.n / t).fold(self.one(), |acc, j| self.mul(&acc, &self.frobenius_apply(t * j, a))))
    }

    /// Absolute trace tr^L_K as a base-field code.
    pub fn trace(&self, a: &FieldElement) -> u32 {
        a.0.iter().zip(&self.trace_vector).fold(0, |acc, (&x, &t)| self.base.add(acc, self.base.mul(x, t)))
    }

    pub fn trace_vector(&self) -> &[u32] {
        &self.trace_vector
    }

    /// Gram matrix of `(x, y) ↦ tr(xy)` in the power basis.
    pub fn trace_form(&self) -> &Mat {
        &self.trace_form
    }

    /// Inverse via `a^(-1) = σ(a)···σ^(n-1)(a) / N(a)`.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let rest = (1..self.n).fold(self.one(), |acc, j| self.mul(&acc, &self.frobenius_apply(j, a)));
        let norm = self.mul(a, &rest);
        debug_assert!(norm.in_base_field());
        Ok(self.scale(self.base.inv(norm.0[0]), &rest))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Matrix of `y ↦ b·y` in the power basis (columns `b·x^j`).
    pub fn multiplication_matrix(&self, b: &FieldElement) -> Mat {
        let cols: Vec<Vec<u32>> = (0..self.n).map(|j| self.mul(b, &self.basis_element(j)).0).collect();
        Mat::from_columns(self.n, &cols)
    }

    /// Fixed field of σ^t as a K-subspace of L.
    pub fn fixed_field(&self, t: usize) -> Subspace {
        let f = &self.base;
        crate::exactla::kernel(f, &self.frobenius_matrix(t).sub(f, &Mat::identity(self.n)))
    }

    /// `b·W` for a K-subspace W of L.
    pub fn scale_subspace(&self, b: &FieldElement, w: &Subspace) -> Subspace {
        w.map(&self.base, self.n, |v| self.mul(b, &FieldElement(v.to_vec())).0).expect("products stay in L")
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
