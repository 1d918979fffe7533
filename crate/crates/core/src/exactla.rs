//! Exact dense linear algebra over GF(q).
//!
//! Every subspace is kept in reduced row-echelon form with unit pivots, so two
//! [`Subspace`] values describe the same space exactly when they compare equal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{BaseField, FieldTower};

/// A dense row-major matrix of base-field codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<u32>>", try_from = "Vec<Vec<u32>>")]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl From<Mat> for Vec<Vec<u32>> {
    fn from(m: Mat) -> Self {
        m.to_rows()
    }
}

impl TryFrom<Vec<Vec<u32>>> for Mat {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        Mat::from_rows(&rows)
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Mat::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, f: &BaseField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &BaseField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &BaseField, k: u32) -> Mat {
        let data = self.data.iter().map(|&a| f.mul(a, k)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, f: &BaseField, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &BaseField, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn pow(&self, f: &BaseField, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        acc
    }

    /// Upper triangle of a square matrix, row-major: the coordinates of a
    /// symmetric matrix in a space of dimension n(n+1)/2.
    pub fn upper_triangle(&self) -> Vec<u32> {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for r in 0..n {
            out.extend_from_slice(&self.data[r * n + r..(r + 1) * n]);
        }
        out
    }

    /// Inverse of [`Mat::upper_triangle`].
    pub fn from_upper_triangle(n: usize, v: &[u32]) -> Result<Mat> {
        if v.len() != n * (n + 1) / 2 {
            return Err(Error::Shape(format!("{} coordinates for a symmetric {n}x{n} matrix", v.len())));
        }
        let mut m = Mat::zeros(n, n);
        let mut k = 0;
        for r in 0..n {
            for c in r..n {
                m.set(r, c, v[k]);
                m.set(c, r, v[k]);
                k += 1;
            }
        }
        Ok(m)
    }
}

/// Rank of a row-major matrix held in a scratch buffer; the buffer is destroyed.
pub fn rank_in_place(f: &BaseField, a: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for k in c..cols {
                a.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = f.inv(a[rank * cols + c]);
        for r in rank + 1..rows {
            let lead = a[r * cols + c];
            if lead == 0 {
                continue;
            }
            let factor = f.neg(f.mul(lead, inv));
            for k in c..cols {
                let pv = a[rank * cols + k];
                if pv != 0 {
                    a[r * cols + k] = f.add(a[r * cols + k], f.mul(factor, pv));
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(f: &BaseField, m: &Mat) -> usize {
    let mut scratch = m.data.clone();
    rank_in_place(f, &mut scratch, m.rows, m.cols)
}

pub fn is_invertible(f: &BaseField, m: &Mat) -> bool {
    m.is_square() && rank(f, m) == m.rows
}

/// Reduced row-echelon form with unit pivots; returns the nonzero rows and their pivot columns.
fn rref(f: &BaseField, vectors: &[Vec<u32>], dim: usize) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut rows: Vec<Vec<u32>> = vectors.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(piv) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for k in 0..rows.len() {
            if k == r || rows[k][c] == 0 {
                continue;
            }
            let factor = f.neg(rows[k][c]);
            for j in c..dim {
                let pv = rows[r][j];
                if pv != 0 {
                    rows[k][j] = f.add(rows[k][j], f.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace of K^ambient in canonical reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Span of arbitrary vectors.
    pub fn span(f: &BaseField, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::AmbientMismatch(ambient, v.len()));
        }
        let (basis, _) = rref(f, vectors, ambient);
        Ok(Subspace { ambient, basis })
    }

    /// Wraps a basis that is already in canonical reduced echelon form.
    pub(crate) fn from_canonical(ambient: usize, basis: Vec<Vec<u32>>) -> Self {
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn contains(&self, f: &BaseField, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::AmbientMismatch(self.ambient, v.len()));
        }
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        Ok(rref(f, &all, self.ambient).0.len() == self.dim())
    }

    pub fn sum(&self, f: &BaseField, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(f, self.ambient, &all)
    }

    /// Vectors orthogonal to every basis vector under the coordinate dot product.
    pub fn annihilator(&self, f: &BaseField) -> Subspace {
        let m = Mat::from_vec(self.dim(), self.ambient, self.basis.concat())
            .expect("basis vectors have the ambient length");
        kernel(f, &m)
    }

    /// `A ∩ B = ann(ann(A) + ann(B))`.
    pub fn intersect(&self, f: &BaseField, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let both = self.annihilator(f).sum(f, &other.annihilator(f))?;
        Ok(both.annihilator(f))
    }

    /// Image of every basis vector under `g`, re-echelonized.
    pub fn map(&self, f: &BaseField, ambient: usize, g: impl Fn(&[u32]) -> Vec<u32>) -> Result<Subspace> {
        let imgs: Vec<Vec<u32>> = self.basis.iter().map(|v| g(v)).collect();
        Subspace::span(f, ambient, &imgs)
    }
}

/// Right kernel `{v : m v = 0}`.
pub fn kernel(f: &BaseField, m: &Mat) -> Subspace {
    let cols = m.cols;
    let (rows, pivots) = rref(f, &m.to_rows(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0; cols];
        v[fc] = 1;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = f.neg(row[fc]);
        }
        basis.push(v);
    }
    Subspace::span(f, cols, &basis).expect("kernel vectors have the right length")
}

/// True iff the sum of the parts is direct, i.e. the dimensions add up.
pub fn is_direct_sum(f: &BaseField, parts: &[&Subspace]) -> Result<bool> {
    let Some(first) = parts.first() else { return Ok(true) };
    let mut total = Subspace::zero(first.ambient);
    let mut dims = 0;
    for p in parts {
        total = total.sum(f, p)?;
        dims += p.dim();
    }
    Ok(total.dim() == dims)
}

/// Sum of all parts (ambient taken from the first).
pub fn sum_all(f: &BaseField, ambient: usize, parts: &[&Subspace]) -> Result<Subspace> {
    parts.iter().try_fold(Subspace::zero(ambient), |acc, p| acc.sum(f, p))
}

/// Kernel of `σ^t - sign·I` acting on L: the ±1 eigenspace of a Frobenius power.
pub fn eigenspace_of_power(tower: &FieldTower, t: usize, sign: i8) -> Result<Subspace> {
    let n = tower.degree();
    if t == 0 || t > n {
        return Err(Error::PowerOutOfRange { i: t, n });
    }
    let f = tower.base();
    let frob = tower.frobenius_matrix(t % n);
    let shift = if sign >= 0 { Mat::identity(n) } else { Mat::identity(n).scale(f, f.neg(1)) };
    Ok(kernel(f, &frob.sub(f, &shift)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> BaseField {
        BaseField::prime(p).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let f = gf(3);
        assert_eq!(rank(&f, &Mat::identity(5)), 5);
        assert_eq!(rank(&f, &Mat::zeros(4, 6)), 0);
        assert!(kernel(&f, &Mat::identity(3)).is_zero());
        assert_eq!(kernel(&f, &Mat::zeros(3, 3)), Subspace::full(3));
    }

    #[test]
    fn direct_sum_edge_cases() {
        let f = gf(5);
        let w = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 4]]).unwrap();
        assert!(is_direct_sum(&f, &[&w, &Subspace::zero(3)]).unwrap());
        assert!(!is_direct_sum(&f, &[&w, &w]).unwrap());
        assert!(matches!(is_direct_sum(&f, &[&w, &Subspace::zero(4)]), Err(Error::AmbientMismatch(3, 4))));
    }

    #[test]
    fn symmetric_flattening_round_trips() {
        let m = Mat::from_rows(&[vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]]).unwrap();
        let v = m.upper_triangle();
        assert_eq!(v, vec![1, 2, 0, 0, 1, 2]);
        assert_eq!(Mat::from_upper_triangle(3, &v).unwrap(), m);
    }

    #[test]
    fn matrix_json_is_nested_arrays() {
        let m = Mat::from_rows(&[vec![1, 0], vec![2, 1]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,0],[2,1]]");
        let back: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Mat>("[[1,0],[2]]").is_err());
    }

    fn vectors(p: u32, dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0..p, dim), 0..max)
    }

    fn matrix(p: u32) -> impl Strategy<Value = Mat> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |d| Mat::from_vec(r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix(5)) {
            let f = gf(5);
            let k = kernel(&f, &m);
            prop_assert_eq!(k.dim() + rank(&f, &m), m.cols());
            for v in k.basis() {
                prop_assert!(m.mul_vec(&f, v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn echelon_form_is_canonical(vs in vectors(3, 5, 6), seed in any::<u64>()) {
            let f = gf(3);
            let a = Subspace::span(&f, 5, &vs).unwrap();
            let mut shuffled = vs.clone();
            let len = shuffled.len();
            if len > 1 {
                shuffled.rotate_left((seed as usize) % len);
                shuffled.swap(0, (seed as usize / 7) % len);
            }
            prop_assert_eq!(&a, &Subspace::span(&f, 5, &shuffled).unwrap());
            prop_assert_eq!(&a, &Subspace::span(&f, 5, a.basis()).unwrap());
        }

        #[test]
        fn grassmann_dimension_formula(xs in vectors(3, 5, 4), ys in vectors(3, 5, 4)) {
            let f = gf(3);
            let a = Subspace::span(&f, 5, &xs).unwrap();
            let b = Subspace::span(&f, 5, &ys).unwrap();
            let s = a.sum(&f, &b).unwrap();
            let i = a.intersect(&f, &b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            for v in i.basis() {
                prop_assert!(a.contains(&f, v).unwrap());
                prop_assert!(b.contains(&f, v).unwrap());
            }
        }
    }
}
