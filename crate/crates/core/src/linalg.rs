//! Exact dense linear algebra over the rationals and prime fields.
//!
//! Every scalar is stored as a [`BigRational`]. Over `F_p` the stored value is
//! always the canonical integer representative in `0..p`, so equality of
//! matrices is equality of field elements in either case. Elimination over a
//! prime field runs on machine integers and converts back.
//!
//! Pivoting is deterministic: the pivot of a column is the first row (top to
//! bottom) with a nonzero entry, so every basis returned here is reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Parses `Q`, `Fp:7`, `F7` or `F_7`.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::Document(format!("unknown field {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Document(format!("unknown field {s:?}")))?;
        Field::prime(p)
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F_{p}"),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Elem {
        Elem::zero()
    }

    pub fn one(&self) -> Elem {
        Elem::one()
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.reduce(Elem::from_integer(BigInt::from(v)))
    }

    /// Maps an arbitrary rational into the field. Panics over `F_p` when the
    /// denominator is divisible by `p`; use [`Field::try_reduce`] otherwise.
    pub fn reduce(&self, v: Elem) -> Elem {
        self.try_reduce(v).expect("denominator divisible by the characteristic")
    }

    pub fn try_reduce(&self, v: Elem) -> Option<Elem> {
        match self {
            Field::Rational => Some(v),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = v.numer().mod_floor(&pb).to_u64()?;
                let den = v.denom().mod_floor(&pb).to_u64()?;
                if den == 0 {
                    return None;
                }
                let r = ((num as u128 * inv_mod(den, *p) as u128) % *p as u128) as u64;
                Some(Elem::from_integer(BigInt::from(r)))
            }
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(a.recip()),
            Field::Prime(p) => {
                let v = to_u64(a);
                Some(Elem::from_integer(BigInt::from(inv_mod(v, *p))))
            }
        }
    }

    /// Parses an entry string such as `"2"`, `"-3/7"`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        let bad = || Error::BadScalar(s.to_string());
        let v = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Elem::new(n, d)
            }
            None => Elem::from_integer(t.parse::<BigInt>().map_err(|_| bad())?),
        };
        self.try_reduce(v).ok_or_else(bad)
    }

    pub fn format_elem(&self, v: &Elem) -> String {
        if v.is_integer() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    }

    /// All field elements, for finite fields.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..*p).map(|i| Elem::from_integer(BigInt::from(i))).collect()),
        }
    }
}

fn to_u64(v: &Elem) -> u64 {
    debug_assert!(v.is_integer() && !v.is_negative());
    v.numer().to_u64().expect("canonical prime-field representative")
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

trait Ops<T> {
    fn is_zero(&self, a: &T) -> bool;
    fn inv(&self, a: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    /// `a - b * c`
    fn sub_mul(&self, a: &T, b: &T, c: &T) -> T;
}

struct QOps;

impl Ops<Elem> for QOps {
    fn is_zero(&self, a: &Elem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Elem) -> Elem {
        a.recip()
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        a * b
    }
    fn sub_mul(&self, a: &Elem, b: &Elem, c: &Elem) -> Elem {
        a - b * c
    }
}

struct POps(u64);

impl Ops<u64> for POps {
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let bc = self.mul(b, c);
        (a + self.0 - bc) % self.0
    }
}

/// In-place reduced row echelon form; returns pivot columns.
fn rref_in_place<T: Clone, O: Ops<T>>(data: &mut [T], rows: usize, cols: usize, ops: &O) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ops.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ops.inv(&data[r * cols + c]);
        for j in c..cols {
            data[r * cols + j] = ops.mul(&data[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || ops.is_zero(&data[i * cols + c]) {
                continue;
            }
            let factor = data[i * cols + c].clone();
            for j in c..cols {
                let v = ops.sub_mul(&data[i * cols + j], &factor, &data[r * cols + j]);
                data[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![Elem::zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::one();
        }
        m
    }

    /// Builds a matrix from row vectors; entries are reduced into the field.
    pub fn from_rows(field: Field, rows: usize, cols: usize, entries: Vec<Vec<Elem>>) -> Result<Matrix> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!("expected {rows}x{cols} matrix")));
        }
        let data = entries
            .into_iter()
            .flatten()
            .map(|v| field.try_reduce(v).ok_or_else(|| Error::BadScalar("denominator".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(f(i, j)));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Elem>]) -> Matrix {
        Matrix::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let (n, k, m) = (self.rows, self.cols, other.cols);
        match self.field {
            Field::Rational => {
                let mut out = Matrix::zeros(self.field, n, m);
                for i in 0..n {
                    for t in 0..k {
                        let a = self.get(i, t);
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let b = other.get(t, j);
                            if !b.is_zero() {
                                out.data[i * m + j] += a * b;
                            }
                        }
                    }
                }
                out
            }
            Field::Prime(p) => {
                let a: Vec<u64> = self.data.iter().map(to_u64).collect();
                let b: Vec<u64> = other.data.iter().map(to_u64).collect();
                let mut acc = vec![0u128; n * m];
                for i in 0..n {
                    for t in 0..k {
                        let x = a[i * k + t] as u128;
                        if x == 0 {
                            continue;
                        }
                        for j in 0..m {
                            acc[i * m + j] = (acc[i * m + j] + x * b[t * m + j] as u128) % p as u128;
                        }
                    }
                }
                Matrix {
                    field: self.field,
                    rows: n,
                    cols: m,
                    data: acc.into_iter().map(|v| Elem::from_integer(BigInt::from(v as u64))).collect(),
                }
            }
        }
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut s = Elem::zero();
                for j in 0..self.cols {
                    s += self.get(i, j) * &v[j];
                }
                self.field.reduce(s)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Horizontal concatenation; all parts must have `rows` rows.
    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            for i in 0..rows {
                for j in 0..p.cols {
                    out.data[i * cols + off + j] = p.get(i, j).clone();
                }
            }
            off += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts must have `cols` columns.
    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            assert_eq!(p.cols, cols);
            data.extend(p.data.iter().cloned());
        }
        Matrix { field, rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.data[(r0 + i) * cols + c0 + j] = p.get(i, j).clone();
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.field {
            Field::Rational => {
                let mut data = self.data.clone();
                let piv = rref_in_place(&mut data, self.rows, self.cols, &QOps);
                (Matrix { field: self.field, rows: self.rows, cols: self.cols, data }, piv)
            }
            Field::Prime(p) => {
                let mut data: Vec<u64> = self.data.iter().map(to_u64).collect();
                let piv = rref_in_place(&mut data, self.rows, self.cols, &POps(p));
                let data = data.into_iter().map(|v| Elem::from_integer(BigInt::from(v))).collect();
                (Matrix { field: self.field, rows: self.rows, cols: self.cols, data }, piv)
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let (r, piv) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in piv.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Elem::zero(); self.cols];
            v[free] = Elem::one();
            for (row, &c) in piv.iter().enumerate() {
                v[c] = self.field.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.cols, &self.kernel())
    }

    /// Columns of `self` at the pivot positions: a basis of the column space.
    pub fn column_space(&self) -> Matrix {
        let (_, piv) = self.rref();
        self.select_cols(&piv)
    }

    /// Solves `self * X = rhs`, returning one solution if any exists.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Matrix::hstack(self.field, self.rows, &[self, rhs]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (row, &c) in piv.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[c * rhs.cols + j] = r.get(row, self.cols + j).clone();
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let rhs = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        self.solve(&rhs).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let id = Matrix::identity(self.field, self.rows);
        if self.rank() != self.rows {
            return None;
        }
        self.solve(&id)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| self.field.format_elem(v)).collect())
            .collect()
    }

    pub fn from_strings(field: Field, rows: usize, cols: usize, entries: &[Vec<String>]) -> Result<Matrix> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "expected {rows}x{cols}, got {}x{}",
                entries.len(),
                entries.first().map_or(0, |r| r.len())
            )));
        }
        let mut m = Matrix::zeros(field, rows, cols);
        for (i, r) in entries.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                m.data[i * cols + j] = field.parse_elem(s)?;
            }
        }
        Ok(m)
    }
}

/// A linear subspace of `field^ambient`, stored by a canonical basis
/// (the nonzero rows of the reduced echelon form of any spanning set).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    /// `ambient x dim`, columns are the canonical basis.
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Matrix::zeros(field, ambient, 0) }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Matrix::identity(field, ambient) }
    }

    /// Span of the columns of `m`.
    pub fn span_columns(m: &Matrix) -> Subspace {
        let field = m.field();
        let (r, piv) = m.transpose().rref();
        let k = piv.len();
        let basis = Matrix::from_fn(field, m.rows(), k, |i, j| r.get(j, i).clone());
        Subspace { field, ambient: m.rows(), basis }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<Elem>]) -> Subspace {
        Subspace::span_columns(&Matrix::from_columns(field, ambient, vectors))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        self.basis.solve_vec(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let m = Matrix::hstack(self.field, self.ambient, &[&self.basis, &other.basis]);
        Subspace::span_columns(&m)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field, self.ambient);
        }
        let neg = other.basis.scale(&self.field.from_i64(-1));
        let m = Matrix::hstack(self.field, self.ambient, &[&self.basis, &neg]);
        let k = self.dim();
        let vecs: Vec<Vec<Elem>> = m
            .kernel()
            .into_iter()
            .map(|x| self.basis.apply(&x[..k]))
            .collect();
        Subspace::span(self.field, self.ambient, &vecs)
    }

    /// Image of this subspace under `map` (`map.cols() == ambient`).
    pub fn image(&self, map: &Matrix) -> Subspace {
        Subspace::span_columns(&map.mul(&self.basis))
    }

    /// Quotient data for `ambient / self`: a projection `q` of shape
    /// `(ambient - dim) x ambient` and a section `s` with `q s = I`, `q B = 0`.
    /// The complement is spanned by the first standard vectors not already in
    /// the span, in index order.
    pub fn quotient_maps(&self) -> (Matrix, Matrix) {
        let n = self.ambient;
        let mut cols: Vec<Vec<Elem>> = self.basis.columns();
        let mut chosen = Vec::new();
        let mut rank = cols.len();
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = vec![Elem::zero(); n];
            e[i] = Elem::one();
            cols.push(e);
            let r = Matrix::from_columns(self.field, n, &cols).rank();
            if r > rank {
                rank = r;
                chosen.push(i);
            } else {
                cols.pop();
            }
        }
        let full = Matrix::from_columns(self.field, n, &cols);
        let inv = full.inverse().expect("extended basis is invertible");
        let k = self.dim();
        let q = inv.select_rows(&(k..n).collect::<Vec<_>>());
        let s = full.select_cols(&(k..n).collect::<Vec<_>>());
        (q, s)
    }
}

/// Serialized matrix: rows of exact entry strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct MatrixDoc(pub Vec<Vec<String>>);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Elem {
        Elem::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_and_format_round_trip() {
        let f = Field::Rational;
        let v = f.parse_elem("-3/7").unwrap();
        assert_eq!(v, q(-3, 7));
        assert_eq!(f.format_elem(&v), "-3/7");
        assert_eq!(f.format_elem(&f.parse_elem("4/2").unwrap()), "2");
        let f5 = Field::prime(5).unwrap();
        // -3/7 = -3 * 3 = -9 = 1 mod 5
        assert_eq!(f5.format_elem(&f5.parse_elem("-3/7").unwrap()), "1");
        assert!(f5.parse_elem("1/5").is_err());
        assert!(Field::prime(4).is_err());
        assert_eq!(Field::parse("Fp:3").unwrap(), Field::Prime(3));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
    }

    #[test]
    fn kernel_and_rank_over_q() {
        let f = Field::Rational;
        let m = Matrix::from_fn(f, 2, 3, |i, j| f.from_i64((i * 3 + j + 1) as i64));
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_over_f2() {
        let f = Field::prime(2).unwrap();
        let m = Matrix::from_fn(f, 2, 2, |i, j| f.from_i64(if i == 0 || j == 1 { 1 } else { 0 }));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let sing = Matrix::from_fn(f, 2, 2, |_, _| f.one());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn subspace_intersection_and_quotient() {
        let f = Field::Rational;
        let e = |v: [i64; 3]| v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let a = Subspace::span(f, 3, &[e([1, 0, 0]), e([0, 1, 0])]);
        let b = Subspace::span(f, 3, &[e([0, 1, 0]), e([0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e([0, 5, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
        let (qm, s) = a.quotient_maps();
        assert_eq!((qm.rows(), qm.cols()), (1, 3));
        assert!(qm.mul(&s).is_identity());
        assert!(qm.mul(a.basis()).is_zero());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = Field::Rational;
        let m = Matrix::from_fn(f, 2, 1, |_, _| f.one());
        assert!(m.solve_vec(&[f.one(), f.zero()]).is_none());
        assert_eq!(m.solve_vec(&[q(1, 2), q(1, 2)]).unwrap(), vec![q(1, 2)]);
    }
}
