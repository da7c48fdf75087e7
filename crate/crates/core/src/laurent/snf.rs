use super::{LaurentMatrix, LaurentPoly};

/// Smith normal form `P * M * Q = D` over `K[t^±1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, unit-normalized.
    pub invariant_factors: Vec<LaurentPoly>,
    pub rank: usize,
    /// `P`, present when transforms were requested.
    pub left: Option<LaurentMatrix>,
    /// `P^-1`.
    pub left_inv: Option<LaurentMatrix>,
    /// `Q`.
    pub right: Option<LaurentMatrix>,
}

struct Tracker {
    left: LaurentMatrix,
    left_inv: LaurentMatrix,
    right: LaurentMatrix,
}

impl LaurentMatrix {
    pub fn smith_normal_form(&self) -> SmithForm {
        self.smith(false)
    }

    /// Smith form together with the unimodular transforms `P`, `P^-1` and `Q`.
    pub fn smith_normal_form_with_transforms(&self) -> SmithForm {
        self.smith(true)
    }

    fn smith(&self, track: bool) -> SmithForm {
        let field = self.field().clone();
        let (m, n) = (self.rows(), self.cols());
        let mut a = self.clone();
        let mut tr = track.then(|| Tracker {
            left: LaurentMatrix::identity(&field, m),
            left_inv: LaurentMatrix::identity(&field, m),
            right: LaurentMatrix::identity(&field, n),
        });

        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = min_span_entry(&a, t) else { break };
            row_swap(&mut a, &mut tr, t, pi);
            col_swap(&mut a, &mut tr, t, pj);
            loop {
                let mut pivot_changed = false;
                for i in t + 1..m {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let (q, _) = a.get(i, t).div_rem(a.get(t, t)).expect("nonzero pivot");
                    row_add(&mut a, &mut tr, i, t, &-&q);
                    if !a.get(i, t).is_zero() {
                        // the remainder has smaller span than the pivot: promote it
                        row_swap(&mut a, &mut tr, t, i);
                        pivot_changed = true;
                    }
                }
                for j in t + 1..n {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let (q, _) = a.get(t, j).div_rem(a.get(t, t)).expect("nonzero pivot");
                    col_add(&mut a, &mut tr, j, t, &-&q);
                    if !a.get(t, j).is_zero() {
                        col_swap(&mut a, &mut tr, t, j);
                        pivot_changed = true;
                    }
                }
                if pivot_changed {
                    continue;
                }
                let clear = (t + 1..m).all(|i| a.get(i, t).is_zero()) && (t + 1..n).all(|j| a.get(t, j).is_zero());
                if !clear {
                    continue;
                }
                let pivot = a.get(t, t).clone();
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(a.get(i, j))));
                match offender {
                    // row t picks up a non-multiple; the row sweep reduces it next round
                    Some(i) => row_add(&mut a, &mut tr, t, i, &LaurentPoly::one(&field)),
                    None => break,
                }
            }
            let unit_inv = unit_normalizer(a.get(t, t));
            row_scale(&mut a, &mut tr, t, &unit_inv);
            t += 1;
        }

        let invariant_factors: Vec<_> = (0..t).map(|i| a.get(i, i).clone()).collect();
        debug_assert!(invariant_factors.windows(2).all(|w| w[0].divides(&w[1])));
        let rank = invariant_factors.len();
        let (left, left_inv, right) = match tr {
            Some(tr) => (Some(tr.left), Some(tr.left_inv), Some(tr.right)),
            None => (None, None, None),
        };
        SmithForm { invariant_factors, rank, left, left_inv, right }
    }
}

impl SmithForm {
    /// Product of the invariant factors: the order of the torsion part of the cokernel.
    pub fn torsion_order(&self) -> Option<LaurentPoly> {
        self.invariant_factors.iter().cloned().reduce(|a, b| &a * &b)
    }
}

// minimal span in the trailing submatrix, ties broken row-major
fn min_span_entry(a: &LaurentMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), u64)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if let Some(s) = a.get(i, j).span() {
                if best.is_none_or(|(_, b)| s < b) {
                    best = Some(((i, j), s));
                }
            }
        }
    }
    best.map(|(pos, _)| pos)
}

// the unit u^-1 with u^-1 * p normalized
fn unit_normalizer(p: &LaurentPoly) -> LaurentPoly {
    let low = p.min_exp().expect("nonzero pivot");
    let lead = p.leading_coeff().expect("nonzero pivot").inv().expect("nonzero");
    LaurentPoly::monomial(lead, -low)
}

fn row_swap(a: &mut LaurentMatrix, tr: &mut Option<Tracker>, i: usize, j: usize) {
    a.swap_rows(i, j);
    if let Some(tr) = tr {
        tr.left.swap_rows(i, j);
        tr.left_inv.swap_cols(i, j);
    }
}

fn col_swap(a: &mut LaurentMatrix, tr: &mut Option<Tracker>, i: usize, j: usize) {
    a.swap_cols(i, j);
    if let Some(tr) = tr {
        tr.right.swap_cols(i, j);
    }
}

// row[dst] += c * row[src]; the inverse transform gets col[src] -= c * col[dst]
fn row_add(a: &mut LaurentMatrix, tr: &mut Option<Tracker>, dst: usize, src: usize, c: &LaurentPoly) {
    a.add_row_multiple(dst, src, c);
    if let Some(tr) = tr {
        tr.left.add_row_multiple(dst, src, c);
        tr.left_inv.add_col_multiple(src, dst, &-c);
    }
}

fn col_add(a: &mut LaurentMatrix, tr: &mut Option<Tracker>, dst: usize, src: usize, c: &LaurentPoly) {
    a.add_col_multiple(dst, src, c);
    if let Some(tr) = tr {
        tr.right.add_col_multiple(dst, src, c);
    }
}

fn row_scale(a: &mut LaurentMatrix, tr: &mut Option<Tracker>, r: usize, unit: &LaurentPoly) {
    a.scale_row(r, unit);
    if let Some(tr) = tr {
        tr.left.scale_row(r, unit);
        tr.left_inv.scale_col(r, &unit.unit_inverse().expect("unit"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CycloField;
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
    fn snf_examples() {
        let s = mat(&[&["t - 1", "t - 1"]]).smith_normal_form();
        assert_eq!(s.invariant_factors, vec![p("t - 1")]);
        assert_eq!(s.rank, 1);

        let s = mat(&[&["t - 1", "0"], &["0", "t^2 - 1"]]).smith_normal_form();
        assert_eq!(s.invariant_factors, vec![p("t - 1"), p("t^2 - 1")]);

        let s = mat(&[&["1 - t", "t - 1"], &["0", "0"]]).smith_normal_form();
        assert_eq!(s.invariant_factors, vec![p("t - 1")]);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn snf_reorders_into_divisibility_chain() {
        let s = mat(&[&["t + 1", "0"], &["0", "t - 1"]]).smith_normal_form();
        assert_eq!(s.invariant_factors, vec![p("1"), p("t^2 - 1")]);
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert_eq!(LaurentMatrix::zeros(&q(), 0, 3).smith_normal_form().rank, 0);
        assert_eq!(LaurentMatrix::zeros(&q(), 2, 2).smith_normal_form().rank, 0);
    }

    fn check_transforms(m: &LaurentMatrix) -> Result<(), TestCaseError> {
        let s = m.smith_normal_form_with_transforms();
        let (pl, pinv, qr) = (s.left.unwrap(), s.left_inv.unwrap(), s.right.unwrap());
        prop_assert_eq!(pl.mul(&pinv).unwrap(), LaurentMatrix::identity(m.field(), m.rows()));
        let d = pl.mul(m).unwrap().mul(&qr).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected =
                    if i == j && i < s.rank { s.invariant_factors[i].clone() } else { LaurentPoly::zero(m.field()) };
                prop_assert_eq!(d.get(i, j), &expected);
            }
        }
        Ok(())
    }

    fn arb_rect() -> impl Strategy<Value = LaurentMatrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            prop::collection::vec((-1i64..2, prop::collection::vec(-2i64..3, 0..3)), r * c).prop_map(move |es| {
                let f = CycloField::rationals();
                let rows = es
                    .chunks(c)
                    .map(|row| row.iter().map(|(low, cs)| LaurentPoly::from_ints(&f, *low, cs)).collect())
                    .collect();
                LaurentMatrix::from_rows(&f, rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transforms_diagonalize(m in arb_rect()) {
            check_transforms(&m)?;
        }

        #[test]
        fn invariant_product_is_determinant(m in (1usize..4).prop_flat_map(super::super::matrix::tests::arb_matrix)) {
            let det = m.det().unwrap();
            let s = m.smith_normal_form();
            if det.is_zero() {
                prop_assert!(s.rank < m.rows());
            } else {
                prop_assert!(s.torsion_order().unwrap().assoc_eq(&det));
            }
        }

        #[test]
        fn determinantal_divisors_match_minors(m in arb_rect()) {
            let s = m.smith_normal_form();
            for k in 1..=m.rows().min(m.cols()) {
                let minors = m.minors_gcd(k, None).unwrap();
                if k <= s.rank {
                    let prefix = s.invariant_factors[..k].iter().cloned().reduce(|a, b| &a * &b).unwrap();
                    prop_assert!(minors.assoc_eq(&prefix));
                } else {
                    prop_assert!(minors.is_zero());
                }
            }
        }
    }
}
