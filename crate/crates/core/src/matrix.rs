//! Dense matrices over GF(q), stored row-major.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.0.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Whether prefix vectors are rows or columns of the completed matrix.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Orientation {
    Rows,
    Columns,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, Elem::ONE)
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Matrix {
        Matrix::diagonal(field, &vec![c; n])
    }

    pub fn diagonal(field: &Field, diag: &[Elem]) -> Matrix {
        let n = diag.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// The `rows x cols` matrix unit with a single 1 at `(i, j)`.
    pub fn unit(field: &Field, rows: usize, cols: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        m.set(i, j, Elem::ONE);
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|&&e| !field.contains(e)) {
            return Err(Error::Parse(format!("entry {bad} outside {field:?}")));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Convenience constructor from row-major encodings.
    pub fn from_u32(field: &Field, rows: usize, cols: usize, data: &[u32]) -> Result<Matrix> {
        Matrix::from_vec(field, rows, cols, data.iter().map(|&x| Elem(x)).collect())
    }

    /// Column vector.
    pub fn column_vector(field: &Field, entries: &[Elem]) -> Matrix {
        Matrix { field: field.clone(), rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Number of nonzero entries.
    pub fn weight(&self) -> usize {
        self.data.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(Elem, Elem) -> Elem) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        assert!(self.field == other.field, "field mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product. Panics on incompatible shapes or fields.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert!(self.field == other.field, "field mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for (l, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(l);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of `{v : Mv = 0}` as column vectors: one per free
    /// column, in ascending column order, with that free variable set to 1.
    pub fn nullspace(&self) -> Vec<Matrix> {
        let f = &self.field;
        let Rref { matrix: red, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[free] = Elem::ONE;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(red.get(i, free));
                }
                Matrix::column_vector(f, &v)
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Elem::ONE);
        }
        let red = aug.rref();
        if red.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.matrix.get(i, n + j));
            }
        }
        Ok(inv)
    }

    /// `R^{-1} M R`.
    pub fn conjugate_by(&self, r: &Matrix) -> Result<Matrix> {
        Ok(r.inverse()?.mul(self).mul(r))
    }

    /// Characteristic polynomial `det(tI - M)`, computed without division.
    ///
    /// Berkowitz: growing leading principal blocks `[[M_r, c], [x, a]]`, the
    /// new coefficient vector (descending) is the Toeplitz convolution of the
    /// old one with `[1, -a, -x c, -x M_r c, -x M_r^2 c, ...]`.
    pub fn charpoly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut desc = vec![Elem::ONE];
        for r in 0..n {
            let a = self.get(r, r);
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(Elem::ONE);
            toeplitz.push(f.neg(a));
            let mut w: Vec<Elem> = (0..r).map(|i| self.get(i, r)).collect();
            for _ in 0..r {
                let xw = (0..r).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(self.get(r, j), w[j])));
                toeplitz.push(f.neg(xw));
                w = (0..r).map(|i| (0..r).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), w[j])))).collect();
            }
            let next: Vec<Elem> = (0..r + 2)
                .map(|i| (0..=i.min(r)).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(toeplitz[i - j], desc[j]))))
                .collect();
            desc = next;
        }
        desc.reverse();
        Ok(Poly::new(f, desc))
    }

    /// `p(M)` by Horner's scheme.
    pub fn poly_eval(&self, p: &Poly) -> Result<Matrix> {
        let n = self.require_square()?;
        if *p.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }

    /// Block-diagonal assembly; the empty sum is the 0x0 matrix.
    pub fn direct_sum(field: &Field, blocks: &[Matrix]) -> Result<Matrix> {
        if blocks.iter().any(|b| b.field != *field) {
            return Err(Error::FieldMismatch);
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Extends independent vectors to an invertible `n x n` matrix whose
    /// leading rows (or columns) are the prefix. Standard basis vectors are
    /// appended at the non-pivot positions of the prefix's RREF.
    pub fn complete_invertible(
        field: &Field,
        prefix: &[Vec<Elem>],
        n: usize,
        orientation: Orientation,
    ) -> Result<Matrix> {
        if prefix.len() > n {
            return Err(Error::DependentPrefix);
        }
        if prefix.iter().any(|v| v.len() != n) {
            return Err(Error::SizeMismatch(format!("prefix vectors must have length {n}")));
        }
        let flat: Vec<Elem> = prefix.iter().flatten().copied().collect();
        let head = Matrix::from_vec(field, prefix.len(), n, flat)?;
        let red = head.rref();
        if red.rank < prefix.len() {
            return Err(Error::DependentPrefix);
        }
        let mut rows = prefix.to_vec();
        for j in (0..n).filter(|j| !red.pivots.contains(j)) {
            let mut e = vec![Elem::ZERO; n];
            e[j] = Elem::ONE;
            rows.push(e);
        }
        let m = Matrix::from_vec(field, n, n, rows.concat())?;
        Ok(match orientation {
            Orientation::Rows => m,
            Orientation::Columns => m.transpose(),
        })
    }

    /// Re-reads a matrix over a prime field as a matrix over an extension of it.
    pub fn lift_prime_field(&self, target: &Field) -> Result<Matrix> {
        if self.field.e() != 1 || self.field.p() != target.p() {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field: target.clone(), rows: self.rows, cols: self.cols, data: self.data.clone() })
    }
}

/// Companion matrix of a monic polynomial: ones on the superdiagonal, the
/// negated low coefficients along the last row.
pub fn companion(p: &Poly) -> Result<Matrix> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let f = p.field();
    let d = p.degree().unwrap_or(0);
    let mut m = Matrix::zeros(f, d, d);
    for i in 0..d.saturating_sub(1) {
        m.set(i, i + 1, Elem::ONE);
    }
    for j in 0..d {
        m.set(d - 1, j, f.neg(p.coeff(j)));
    }
    Ok(m)
}
