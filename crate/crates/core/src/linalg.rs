//! Dense matrices over `F_q`.
//!
//! Sizes stay small (at most `2m x 2m` with `m <= 16` on the recovery
//! path), so everything is a plain row-major `Vec` and elimination picks
//! the first nonzero pivot.

use std::fmt;

use crate::ca::LocalRule;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::Polynomial;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<usize> = self.row(i).iter().map(|e| e.index()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionUnderflow(format!("{rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|e| !field.contains(**e)) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u32, q: field.q() });
        }
        Ok(Self { field: field.clone(), rows, cols, entries })
    }

    /// Builds from nested rows of element indices.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: 0 });
        }
        let entries = rows.iter().flatten().map(|&i| field.element(i)).collect::<Result<_>>()?;
        Self::new(field, rows.len(), cols, entries)
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, entries: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.index() as u32).collect()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M v`.
    pub fn mat_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(FieldElement::ZERO, |acc, (&a, &x)| f.add(acc, f.mul(a, x))))
            .collect())
    }

    /// Reduces `self` to row echelon form in place, applying the same row
    /// operations to `aug` when given. Returns the determinant of the
    /// square leading block when the matrix is square.
    fn eliminate(&mut self, mut aug: Option<&mut Matrix>, reduce: bool) -> FieldElement {
        let f = self.field.clone();
        let n = self.rows;
        let mut det = FieldElement::ONE;
        for col in 0..n.min(self.cols) {
            let Some(pivot) = (col..n).find(|&r| !self.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                self.swap_rows(pivot, col);
                if let Some(a) = aug.as_deref_mut() {
                    a.swap_rows(pivot, col);
                }
                det = f.neg(det);
            }
            let p = self.get(col, col);
            det = f.mul(det, p);
            let p_inv = f.inv(p).expect("pivot is nonzero");
            self.scale_row(col, p_inv);
            if let Some(a) = aug.as_deref_mut() {
                a.scale_row(col, p_inv);
            }
            let start = if reduce { 0 } else { col + 1 };
            for r in start..n {
                if r == col {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                self.axpy_row(r, col, f.neg(factor));
                if let Some(a) = aug.as_deref_mut() {
                    a.axpy_row(r, col, f.neg(factor));
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: FieldElement) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(r, j), c);
            self.set(r, j, v);
        }
    }

    /// row[dst] += c * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, c: FieldElement) {
        for j in 0..self.cols {
            let v = self.field.add(self.get(dst, j), self.field.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.clone().eliminate(None, false))
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut work = self.clone();
        let mut inv = Matrix::identity(&self.field, self.rows);
        if work.eliminate(Some(&mut inv), true).is_zero() {
            return Err(Error::Singular);
        }
        Ok(inv)
    }
}

/// The banded matrix of a linear rule's global map at `step`: row `k` holds
/// `a_0..a_{2r}` starting at column `k`. Its shape is
/// `(n - 2r(step+1)) x (n - 2r step)`.
pub fn transition_matrix(rule: &LocalRule, n: usize, step: usize) -> Result<Matrix> {
    let coeffs = rule.linear_coeffs().ok_or(Error::NonlinearRule)?;
    let two_r = 2 * rule.radius();
    let cols = n.checked_sub(two_r * step).filter(|&c| c > two_r).ok_or_else(|| {
        Error::DimensionUnderflow(format!("n = {n} too short for step {step} at radius {}", rule.radius()))
    })?;
    Ok(banded(rule.field(), coeffs, cols - two_r, cols))
}

fn banded(field: &FieldSpec, coeffs: &[FieldElement], rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for k in 0..rows {
        for (i, &c) in coeffs.iter().enumerate() {
            m.set(k, k + i, c);
        }
    }
    m
}

/// Sylvester matrix of two polynomials of the same degree `d >= 1`:
/// `d` shifted rows of `pf` on top of `d` shifted rows of `pg`,
/// coefficients ascending left to right.
pub fn sylvester_matrix(pf: &Polynomial, pg: &Polynomial) -> Result<Matrix> {
    if pf.field() != pg.field() {
        return Err(Error::FieldMismatch);
    }
    match (pf.degree(), pg.degree()) {
        (Some(a), Some(b)) if a != b => Err(Error::DegreeMismatch { expected: a, found: b }),
        (Some(a), Some(_)) if a >= 1 => sylvester_matrix_general(pf, pg),
        _ => Err(Error::DegreeTooSmall("Sylvester matrix needs degree >= 1".into())),
    }
}

/// Sylvester matrix for arbitrary degrees `a = deg f >= 1`, `b = deg g >= 1`:
/// `b` shifted rows of `f` followed by `a` shifted rows of `g`, giving an
/// `(a+b) x (a+b)` matrix. Equal degrees reproduce [`sylvester_matrix`].
pub fn sylvester_matrix_general(f: &Polynomial, g: &Polynomial) -> Result<Matrix> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    let (Some(a), Some(b)) = (f.degree(), g.degree()) else {
        return Err(Error::DegreeTooSmall("zero polynomial".into()));
    };
    if a == 0 || b == 0 {
        return Err(Error::DegreeTooSmall(format!("degrees {a} and {b}")));
    }
    let n = a + b;
    let mut m = Matrix::zeros(f.field(), n, n);
    for k in 0..b {
        for (i, &c) in f.coeffs().iter().enumerate() {
            m.set(k, k + i, c);
        }
    }
    for k in 0..a {
        for (i, &c) in g.coeffs().iter().enumerate() {
            m.set(b + k, k + i, c);
        }
    }
    Ok(m)
}
