//! Dense exact linear algebra over [`Scalar`]: row reduction, kernels,
//! hermitian forms, orthogonal projections and an LDL-style PSD decision.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Scalar::zero(); n])
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Vector::zeros(n);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    /// Bilinear pairing `Σ xᵢyᵢ` (no conjugation).
    pub fn dot(&self, other: &Vector) -> Scalar {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn conj(&self) -> Vector {
        Vector(self.0.iter().map(Scalar::conj).collect())
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Vector(v)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    fn check_same(&self, other: &Vector) {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.check_same(rhs);
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.check_same(rhs);
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, &Scalar::one())
    }

    /// `c·I` of size `n`.
    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dims("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    /// Matrix whose columns are the given vectors, all of length `n`.
    pub fn from_columns(n: usize, cols: &[Vector]) -> Self {
        let mut m = Matrix::zeros(n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), n, "column dimension mismatch");
            for i in 0..n {
                m[(i, j)] = v[i].clone();
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

    pub fn row(&self, i: usize) -> Vector {
        Vector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        Vector(
            (0..self.rows)
                .map(|i| {
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(&v.0)
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Matrix {
        (0..k).fold(Matrix::identity(self.rows), |acc, _| &acc * self)
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    /// Gauss-Jordan reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for j in col..m.cols {
                let v = &m[(row, j)] * &inv;
                m[(row, j)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    if m[(row, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] - &(&factor * &m[(row, j)]);
                    m[(r, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = Vector::zeros(self.cols);
                x.0[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    x.0[p] = -&r[(row, f)];
                }
                x
            })
            .collect()
    }

    /// A maximal linearly independent subset of the columns, in order.
    pub fn column_space(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&j| self.column(j)).collect()
    }

    /// Solve `Mx = rhs` exactly.
    pub fn solve(&self, rhs: &Vector) -> Result<Solution> {
        if rhs.dim() != self.rows {
            return Err(Error::dims(format!(
                "right-hand side has length {}, expected {}",
                rhs.dim(),
                self.rows
            )));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            // Farkas-type alternative: some y with yᵀM = 0 and yᵀb ≠ 0.
            let certificate = self
                .transpose()
                .kernel()
                .into_iter()
                .find(|y| !y.dot(rhs).is_zero())
                .expect("inconsistent system has a separating left-kernel vector");
            return Ok(Solution::Infeasible { certificate });
        }
        let mut x = Vector::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x.0[p] = r[(row, self.cols)].clone();
        }
        Ok(Solution::Feasible {
            particular: x,
            kernel: self.kernel(),
        })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::dims("inverse of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for j in col..n {
                    let v = &m[(r, j)] - &(&factor * &m[(col, j)]);
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Top-left `k×k` block.
    pub fn leading(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Feasible {
        particular: Vector,
        kernel: Vec<Vector>,
    },
    /// `certificate` satisfies `certificateᵀ·M = 0` and `certificateᵀ·rhs ≠ 0`.
    Infeasible { certificate: Vector },
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Solution::Feasible { .. })
    }
}

/// Non-degenerate hermitian form `⟨v,w⟩ = conj(v)ᵗ·G·w`, conjugate-linear in
/// the first slot.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianForm {
    gram: Matrix,
    gram_inv: Matrix,
    definite: bool,
}

impl HermitianForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::dims("Gram matrix must be square"));
        }
        if !gram.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let gram_inv = gram.inverse()?;
        let definite = (1..=gram.rows()).all(|k| {
            gram.leading(k).determinant().real_sign() == Some(1)
        });
        Ok(HermitianForm {
            gram,
            gram_inv,
            definite,
        })
    }

    /// The standard form with Gram matrix `I_n`.
    pub fn standard(n: usize) -> Self {
        HermitianForm {
            gram: Matrix::identity(n),
            gram_inv: Matrix::identity(n),
            definite: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_definite(&self) -> bool {
        self.definite
    }

    pub fn require_definite(&self) -> Result<()> {
        if self.definite {
            Ok(())
        } else {
            Err(Error::IndefiniteForm)
        }
    }

    fn check_vec(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::dims(format!(
                "vector of length {} for a form of dimension {}",
                v.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn inner(&self, v: &Vector, w: &Vector) -> Result<Scalar> {
        self.check_vec(v)?;
        self.check_vec(w)?;
        Ok(self.inner_unchecked(v, w))
    }

    pub(crate) fn inner_unchecked(&self, v: &Vector, w: &Vector) -> Scalar {
        let gw = self.gram.mul_vec(w);
        v.0.iter()
            .zip(&gw.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `G⁻¹·m*·G`, the adjoint with respect to this form.
    pub fn adjoint(&self, m: &Matrix) -> Result<Matrix> {
        if !m.is_square() || m.rows() != self.dim() {
            return Err(Error::dims("adjoint needs a square matrix of the form's dimension"));
        }
        Ok(&(&self.gram_inv * &m.conj_transpose()) * &self.gram)
    }

    pub fn is_self_adjoint(&self, m: &Matrix) -> bool {
        self.adjoint(m).is_ok_and(|a| a == *m)
    }

    /// `m† m = I`.
    pub fn is_unitary(&self, m: &Matrix) -> bool {
        self.adjoint(m).is_ok_and(|a| (&a * m).is_identity())
    }

    /// The form pulled back along the columns of `basis`: Gram `B*GB`.
    pub fn restrict(&self, basis: &[Vector]) -> Result<HermitianForm> {
        let b = Matrix::from_columns(self.dim(), basis);
        HermitianForm::new(&(&b.conj_transpose() * &self.gram) * &b)
    }

    /// Basis of `{w : ⟨b,w⟩ = 0 for all b in basis}`.
    pub fn orthogonal_complement(&self, basis: &[Vector]) -> Vec<Vector> {
        if basis.is_empty() {
            return (0..self.dim()).map(|i| Vector::unit(self.dim(), i)).collect();
        }
        let b = Matrix::from_columns(self.dim(), basis);
        (&b.conj_transpose() * &self.gram).kernel()
    }

    /// Orthogonal projection onto `span(basis)`; requires a definite form.
    /// Dependent vectors in `basis` are discarded.
    pub fn orthogonal_projection(&self, basis: &[Vector]) -> Result<Matrix> {
        self.require_definite()?;
        for v in basis {
            self.check_vec(v)?;
        }
        let n = self.dim();
        let indep = Matrix::from_columns(n, basis).column_space();
        if indep.is_empty() {
            return Ok(Matrix::zeros(n, n));
        }
        let b = Matrix::from_columns(n, &indep);
        let bstar_g = &b.conj_transpose() * &self.gram;
        let m = &bstar_g * &b;
        Ok(&(&b * &m.inverse()?) * &bstar_g)
    }
}

impl fmt::Debug for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianForm")
            .field("gram", &self.gram)
            .field("definite", &self.definite)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsdVerdict {
    Psd { rank: usize },
    /// `conj(witness)ᵗ·G·witness < 0`.
    NotPsd { witness: Vector, value: Scalar },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }
}

/// Exact positive-semidefiniteness test by symmetric pivoting: congruence
/// transformations `T*GT` that eliminate against positive diagonal pivots.
pub fn psd_check(g: &Matrix) -> Result<PsdVerdict> {
    if !g.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = g.rows();
    let mut t = Matrix::identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    let quad = |v: &Vector| -> Scalar {
        let gv = g.mul_vec(v);
        v.conj().dot(&gv)
    };
    loop {
        let cur = &(&t.conj_transpose() * g) * &t;
        if let Some(&i) = active.iter().find(|&&i| cur[(i, i)].real_sign() == Some(-1)) {
            let witness = t.column(i);
            let value = quad(&witness);
            return Ok(PsdVerdict::NotPsd { witness, value });
        }
        if let Some(pos) = active
            .iter()
            .position(|&k| cur[(k, k)].real_sign() == Some(1))
        {
            let k = active.remove(pos);
            let tk = t.column(k);
            for &j in &active {
                if cur[(k, j)].is_zero() {
                    continue;
                }
                let c = &cur[(k, j)] / &cur[(k, k)];
                for r in 0..n {
                    let v = &t[(r, j)] - &(&c * &tk[r]);
                    t[(r, j)] = v;
                }
            }
            rank += 1;
            continue;
        }
        // Remaining diagonal is zero; any off-diagonal entry gives a witness.
        for (a, &i) in active.iter().enumerate() {
            for &j in &active[a + 1..] {
                if !cur[(i, j)].is_zero() {
                    let s = -cur[(i, j)].conj();
                    let witness = &t.column(i) + &t.column(j).scale(&s);
                    let value = quad(&witness);
                    return Ok(PsdVerdict::NotPsd { witness, value });
                }
            }
        }
        return Ok(PsdVerdict::Psd { rank });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|x| s(x)).collect()).collect()).unwrap()
    }

    fn j_form() -> HermitianForm {
        HermitianForm::new(m(&[&["1", "0"], &["0", "-1"]])).unwrap()
    }

    #[test]
    fn inner_examples() {
        let id = HermitianForm::standard(2);
        assert_eq!(
            id.inner(&Vector::from_ints(&[1, 0]), &Vector::from_ints(&[0, 1])).unwrap(),
            Scalar::zero()
        );
        let v = Vector::from_ints(&[0, 1]);
        assert_eq!(j_form().inner(&v, &v).unwrap(), Scalar::from_int(-1));
        let one = HermitianForm::standard(1);
        let vi = Vector(vec![Scalar::i()]);
        assert_eq!(one.inner(&vi, &Vector::from_ints(&[1])).unwrap(), s("-i"));
        assert!(id.inner(&Vector::from_ints(&[1]), &v).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let id = HermitianForm::standard(2);
        let a = m(&[&["1", "i"], &["2", "3-i"]]);
        assert_eq!(id.adjoint(&a).unwrap(), a.conj_transpose());
        let px = m(&[&["0", "1"], &["-1", "0"]]);
        // J·[[0,-1],[1,0]]·J
        assert_eq!(j_form().adjoint(&px).unwrap(), px);
        assert_eq!(j_form().adjoint(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn definiteness_flag() {
        assert!(HermitianForm::standard(3).is_definite());
        assert!(!j_form().is_definite());
        assert!(HermitianForm::new(m(&[&["2", "i"], &["-i", "1"]])).unwrap().is_definite());
        assert_eq!(HermitianForm::new(m(&[&["1", "1"], &["1", "1"]])), Err(Error::Singular));
        assert_eq!(HermitianForm::new(m(&[&["1", "i"], &["i", "1"]])), Err(Error::NotHermitian));
    }

    #[test]
    fn solve_kernel_examples() {
        let id = Matrix::identity(3);
        let b = Vector(vec![s("1"), s("i"), s("-1/2")]);
        match id.solve(&b).unwrap() {
            Solution::Feasible { particular, kernel } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
            }
            other => panic!("{other:?}"),
        }
        // p2 exponent-sum rows.
        let e = Matrix::from_int_rows(&[&[0, 0, 2], &[2, 0, 2], &[0, 2, 2]]);
        assert_eq!(e.rank(), 3);
        assert!(e.kernel().is_empty());
        let z = Matrix::zeros(1, 2);
        match z.solve(&Vector::from_ints(&[1])).unwrap() {
            Solution::Infeasible { certificate } => {
                assert!(!certificate.dot(&Vector::from_ints(&[1])).is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let a = Matrix::from_int_rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v).is_zero());
        }
    }

    #[test]
    fn projection_examples() {
        let id = HermitianForm::standard(2);
        let full = [Vector::unit(2, 0), Vector::unit(2, 1), Vector::from_ints(&[1, 1])];
        assert_eq!(id.orthogonal_projection(&full).unwrap(), Matrix::identity(2));
        assert_eq!(id.orthogonal_projection(&[]).unwrap(), Matrix::zeros(2, 2));
        let p = id.orthogonal_projection(&[Vector::from_ints(&[1, 1])]).unwrap();
        assert_eq!(p, m(&[&["1/2", "1/2"], &["1/2", "1/2"]]));
        assert_eq!(&p * &p, p);
        assert_eq!(
            j_form().orthogonal_projection(&[Vector::unit(2, 0)]),
            Err(Error::IndefiniteForm)
        );
    }

    #[test]
    fn projection_nonstandard_form() {
        let form = HermitianForm::new(m(&[&["2", "i"], &["-i", "1"]])).unwrap();
        let b = Vector(vec![s("1"), s("1+i")]);
        let p = form.orthogonal_projection(&[b.clone()]).unwrap();
        assert_eq!(&p * &p, p);
        assert_eq!(form.adjoint(&p).unwrap(), p);
        assert_eq!(p.mul_vec(&b), b);
    }

    #[test]
    fn psd_examples() {
        assert_eq!(psd_check(&Matrix::identity(3)).unwrap(), PsdVerdict::Psd { rank: 3 });
        match psd_check(&m(&[&["1", "0"], &["0", "-1"]])).unwrap() {
            PsdVerdict::NotPsd { witness, value } => {
                assert_eq!(witness, Vector::from_ints(&[0, 1]));
                assert_eq!(value, Scalar::from_int(-1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            psd_check(&m(&[&["1", "i"], &["-i", "1"]])).unwrap(),
            PsdVerdict::Psd { rank: 1 }
        );
        assert_eq!(psd_check(&m(&[&["1", "i"], &["i", "1"]])), Err(Error::NotHermitian));
    }

    #[test]
    fn psd_zero_diagonal_witness() {
        let g = m(&[&["0", "2-i"], &["2+i", "0"]]);
        match psd_check(&g).unwrap() {
            PsdVerdict::NotPsd { witness, value } => {
                assert_eq!(value.real_sign(), Some(-1));
                assert_eq!(witness.conj().dot(&g.mul_vec(&witness)), value);
            }
            other => panic!("{other:?}"),
        }
    }
}
