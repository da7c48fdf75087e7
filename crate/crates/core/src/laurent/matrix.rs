use std::fmt;

use itertools::Itertools;

use super::{LaurentError, LaurentPoly};
use crate::coeff::{CycloField, CycloMatrix};

/// Dense matrix over `K[t^±1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    field: CycloField,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(field: &CycloField, rows: usize, cols: usize) -> Self {
        LaurentMatrix { field: field.clone(), rows, cols, entries: vec![LaurentPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: &CycloField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(field));
        }
        m
    }

    pub fn from_rows(field: &CycloField, rows: Vec<Vec<LaurentPoly>>) -> Result<Self, LaurentError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LaurentError::DimensionMismatch);
        }
        Ok(LaurentMatrix { field: field.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// `t^exp * m` for a constant matrix `m`.
    pub fn from_constant(m: &CycloMatrix, exp: i64) -> Self {
        let mut out = Self::zeros(m.field(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, LaurentPoly::monomial(m.get(i, j).clone(), exp));
            }
        }
        out
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

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub(super) fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        if self.cols != other.rows {
            return Err(LaurentError::DimensionMismatch);
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
                        let e = out.entry_mut(i, j);
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> Result<Self, LaurentError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LaurentError::DimensionMismatch);
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(LaurentMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// The submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is exact in `K[t^±1]`.
    pub fn det(&self) -> Result<LaurentPoly, LaurentError> {
        if self.rows != self.cols {
            return Err(LaurentError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one(&self.field));
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = LaurentPoly::one(&self.field);
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        negate = !negate;
                    }
                    None => return Ok(LaurentPoly::zero(&self.field)),
                }
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                let aik = a.get(i, k).clone();
                for j in k + 1..n {
                    let num = &(&pivot * a.get(i, j)) - &(&aik * a.get(k, j));
                    let v = num.exact_div(&prev).expect("Bareiss division is exact");
                    a.set(i, j, v);
                }
                a.set(i, k, LaurentPoly::zero(&self.field));
            }
            prev = pivot;
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if negate { -&d } else { d })
    }

    /// Number of `k x k` minors.
    pub fn minor_count(&self, k: usize) -> u128 {
        binomial(self.rows, k) * binomial(self.cols, k)
    }

    /// Unit-normalized gcd of all `k x k` minors.
    ///
    /// Row and column subsets are enumerated lexicographically; the scan stops as soon
    /// as the running gcd is a unit.
    pub fn minors_gcd(&self, k: usize, max_minors: Option<u64>) -> Result<LaurentPoly, LaurentError> {
        if k == 0 || k > self.rows.min(self.cols) {
            return Err(LaurentError::MinorSizeOutOfRange { k, rows: self.rows, cols: self.cols });
        }
        let count = self.minor_count(k);
        if let Some(limit) = max_minors {
            if count > limit as u128 {
                return Err(LaurentError::TooManyMinors { count, limit });
            }
        }
        let mut g = LaurentPoly::zero(&self.field);
        for rows in (0..self.rows).combinations(k) {
            for cols in (0..self.cols).combinations(k) {
                let minor = self.select(&rows, &cols).det()?;
                if minor.is_zero() {
                    continue;
                }
                g = g.gcd(&minor);
                if g.is_unit() {
                    return Ok(LaurentPoly::one(&self.field));
                }
            }
        }
        Ok(g)
    }

    pub(super) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(super) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    // row[dst] += c * row[src]
    pub(super) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let add = s * c;
            let e = self.entry_mut(dst, j);
            *e = &*e + &add;
        }
    }

    // col[dst] += c * col[src]
    pub(super) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let add = s * c;
            let e = self.entry_mut(i, dst);
            *e = &*e + &add;
        }
    }

    pub(super) fn scale_row(&mut self, r: usize, c: &LaurentPoly) {
        for j in 0..self.cols {
            let e = self.entry_mut(r, j);
            *e = &*e * c;
        }
    }

    pub(super) fn scale_col(&mut self, col: usize, c: &LaurentPoly) {
        for i in 0..self.rows {
            let e = self.entry_mut(i, col);
            *e = &*e * c;
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row = (0..self.cols).map(|j| self.get(i, j).to_string()).join(", ");
            writeln!(f, "  [{row}]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
pub(super) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&q(), s).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> LaurentMatrix {
        LaurentMatrix::from_rows(&q(), rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(mat(&[&["1 - t", "0"], &["0", "1 + t"]]).det().unwrap(), p("1 - t^2"));
        // Phi(l) - Id for rho(l) = diag(1, -1), eps(l) = 1
        let d = mat(&[&["t - 1", "0"], &["0", "-t - 1"]]).det().unwrap();
        assert!(d.assoc_eq(&p("t^2 - 1")));
        assert_eq!(mat(&[&["t^3 - 1"]]).det().unwrap(), p("t^3 - 1"));
        assert!(matches!(mat(&[&["1", "2"]]).det(), Err(LaurentError::NotSquare { .. })));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = mat(&[&["0", "t", "1"], &["1", "0", "t^-1"], &["t", "1", "0"]]);
        // first-row expansion by hand: 0 - t*(0 - t^-1*t) + 1*(1 - 0) = t + 1
        assert_eq!(m.det().unwrap(), p("t + 1"));
    }

    #[test]
    fn minors_gcd_examples() {
        assert_eq!(mat(&[&["1 - t", "t - 1"]]).minors_gcd(1, None).unwrap(), p("t - 1"));
        assert!(LaurentMatrix::identity(&q(), 2).minors_gcd(2, None).unwrap().is_one());
        assert!(LaurentMatrix::zeros(&q(), 2, 2).minors_gcd(1, None).unwrap().is_zero());
        assert!(matches!(mat(&[&["1", "2"]]).minors_gcd(2, None), Err(LaurentError::MinorSizeOutOfRange { .. })));
        assert!(matches!(
            LaurentMatrix::zeros(&q(), 6, 6).minors_gcd(3, Some(10)),
            Err(LaurentError::TooManyMinors { count: 400, limit: 10 })
        ));
    }

    fn cofactor_det(m: &LaurentMatrix) -> LaurentPoly {
        let n = m.rows();
        if n == 0 {
            return LaurentPoly::one(m.field());
        }
        let mut acc = LaurentPoly::zero(m.field());
        for j in 0..n {
            let rows: Vec<_> = (1..n).collect();
            let cols: Vec<_> = (0..n).filter(|&c| c != j).collect();
            let term = m.get(0, j) * &cofactor_det(&m.select(&rows, &cols));
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub(crate) fn arb_matrix(n: usize) -> impl Strategy<Value = LaurentMatrix> {
        prop::collection::vec((-1i64..2, prop::collection::vec(-2i64..3, 0..3)), n * n).prop_map(move |es| {
            let f = CycloField::rationals();
            let rows = es
                .chunks(n)
                .map(|row| row.iter().map(|(low, cs)| LaurentPoly::from_ints(&f, *low, cs)).collect())
                .collect();
            LaurentMatrix::from_rows(&f, rows).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_matches_cofactor_expansion(m in (1usize..5).prop_flat_map(arb_matrix)) {
            prop_assert_eq!(m.det().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn det_is_multiplicative((a, b) in (1usize..4).prop_flat_map(|n| (arb_matrix(n), arb_matrix(n)))) {
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }
    }
}
