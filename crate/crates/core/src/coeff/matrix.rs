use std::fmt;

use super::{CoeffError, CycloField, CycloNumber};

/// Dense matrix over a cyclotomic field; used for the images of a representation.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    field: CycloField,
    rows: usize,
    cols: usize,
    entries: Vec<CycloNumber>,
}

impl CycloMatrix {
    pub fn zeros(field: &CycloField, rows: usize, cols: usize) -> Self {
        CycloMatrix { field: field.clone(), rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &CycloField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: &CycloField, rows: Vec<Vec<CycloNumber>>) -> Result<Self, CoeffError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(CoeffError::DimensionMismatch);
        }
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(CoeffError::FieldMismatch { left: field.order(), right: bad.field().order() });
        }
        Ok(CycloMatrix { field: field.clone(), rows: r, cols: c, entries })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: &CycloField, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular integer matrix")
    }

    pub fn field(&self) -> &CycloField {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> &CycloNumber {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNumber) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CoeffError> {
        if self.cols != other.rows {
            return Err(CoeffError::DimensionMismatch);
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, CoeffError> {
        if !self.is_square() {
            return Err(CoeffError::DimensionMismatch);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(&self.field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(CoeffError::SingularMatrix)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &-&factor);
                    inv.add_row_multiple(r, col, &-&factor);
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<CycloNumber, CoeffError> {
        if !self.is_square() {
            return Err(CoeffError::DimensionMismatch);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -&det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let pinv = p.inv()?;
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let factor = a.get(r, col) * &pinv;
                    a.add_row_multiple(r, col, &-&factor);
                }
            }
        }
        Ok(det)
    }

    /// Conjugate transpose with respect to the standard hermitian form.
    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, CoeffError> {
        if self.field != other.field {
            return Err(CoeffError::FieldMismatch { left: self.field.order(), right: other.field.order() });
        }
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &CycloNumber) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.entries[idx] = &self.entries[idx] * c;
        }
    }

    // row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &CycloNumber) {
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let add = s * c;
            let idx = dst * self.cols + j;
            self.entries[idx] = &self.entries[idx] + &add;
        }
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
