//! Laurent polynomials `K[t, t^-1]` over a cyclotomic field, and linear algebra over them.
//!
//! `K[t^±1]` is a Euclidean domain with degree function `span = maxdeg - mindeg`.
//! Units are the monomials `c t^k`; [`LaurentPoly::normalize_assoc`] picks the
//! representative with minimal exponent 0 and leading coefficient 1.

mod fraction;
mod matrix;
mod snf;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use thiserror::Error;

use crate::coeff::{fmt_rational, CoeffError, CycloField, CycloNumber};

pub use fraction::LaurentFraction;
pub use matrix::LaurentMatrix;
pub use snf::SmithForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSizeOutOfRange { k: usize, rows: usize, cols: usize },
    #[error("{count} minors exceed the limit of {limit}")]
    TooManyMinors { count: u128, limit: u64 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A Laurent polynomial, stored densely from its lowest exponent.
///
/// Invariant: `coeffs` is empty (the zero polynomial, `low == 0`) or its first and
/// last entries are nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: CycloField,
    low: i64,
    coeffs: Vec<CycloNumber>,
}

impl LaurentPoly {
    pub fn zero(field: &CycloField) -> Self {
        LaurentPoly { field: field.clone(), low: 0, coeffs: Vec::new() }
    }

    pub fn one(field: &CycloField) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: CycloNumber, exp: i64) -> Self {
        let field = c.field().clone();
        Self::from_coeffs(&field, exp, vec![c])
    }

    /// The unit `t^exp`.
    pub fn t_pow(field: &CycloField, exp: i64) -> Self {
        Self::monomial(field.one(), exp)
    }

    /// `coeffs[i]` is the coefficient of `t^(low + i)`.
    pub fn from_coeffs(field: &CycloField, low: i64, coeffs: Vec<CycloNumber>) -> Self {
        let mut p = LaurentPoly { field: field.clone(), low, coeffs };
        p.trim();
        p
    }

    /// Integer coefficients from `t^low` upwards.
    pub fn from_ints(field: &CycloField, low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, low, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycloNumber::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of `K[t^±1]` are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// `maxdeg - mindeg`, the Euclidean degree; `None` for zero.
    pub fn span(&self) -> Option<u64> {
        (!self.is_zero()).then(|| self.coeffs.len() as u64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> CycloNumber {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&CycloNumber> {
        self.coeffs.last()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloNumber)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.low + i as i64, c))
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { field: self.field.clone(), low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::from_coeffs(&self.field, self.low, coeffs)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let c = self.coeffs[0].inv().ok()?;
        Some(Self::monomial(c, -self.low))
    }

    /// Canonical representative of the class of `self` up to units `c t^k`.
    pub fn normalize_assoc(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("leading coefficient is nonzero");
                let coeffs = self.coeffs.iter().map(|c| c * &inv).collect();
                LaurentPoly { field: self.field.clone(), low: 0, coeffs }
            }
        }
    }

    /// Equality up to multiplication by a unit.
    pub fn assoc_eq(&self, other: &Self) -> bool {
        self.normalize_assoc() == other.normalize_assoc()
    }

    /// Division with remainder for the span degree: `self = q*d + r`, `span r < span d`.
    ///
    /// Both operands are shifted to ordinary polynomials with nonzero constant term.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), LaurentError> {
        if d.is_zero() {
            return Err(LaurentError::Coeff(CoeffError::DivisionByZero));
        }
        if self.is_zero() {
            return Ok((self.clone(), self.clone()));
        }
        let (a, b) = (self.low, d.low);
        let mut rem = self.coeffs.clone();
        let den = &d.coeffs;
        let lead_inv = den.last().expect("nonzero").inv()?;
        if rem.len() < den.len() {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let qlen = rem.len() - den.len() + 1;
        let mut quot = vec![self.field.zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + den.len() - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in den.iter().enumerate() {
                if !di.is_zero() {
                    rem[k + i] = &rem[k + i] - &(&c * di);
                }
            }
            quot[k] = c;
        }
        rem.truncate(den.len() - 1);
        let q = Self::from_coeffs(&self.field, a - b, quot);
        let r = Self::from_coeffs(&self.field, a, rem);
        Ok((q, r))
    }

    /// `Some(self / d)` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// Unit-normalized gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            if b.is_unit() {
                return Self::one(&self.field);
            }
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        a.normalize_assoc()
    }

    /// Coefficient-wise conjugation combined with `t -> t^-1`.
    pub fn conj(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().rev().map(CycloNumber::conj).collect();
        let high = self.max_exp().expect("nonzero");
        LaurentPoly { field: self.field.clone(), low: -high, coeffs }
    }

    /// Parses the textual encoding, e.g. `"t^2 - t + 1"` or `"(1 + z)*t^-1 + 3"`.
    pub fn parse(field: &CycloField, text: &str) -> Result<Self, crate::expr::ExprError> {
        crate::expr::parse_laurent(field, text)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.field, other.field, "mixed cyclotomic orders");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let low = self.low.min(other.low);
        let high = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut coeffs = vec![self.field.zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let idx = (other.low - low) as usize + i;
            coeffs[idx] = if negate { &coeffs[idx] - c } else { &coeffs[idx] + c };
        }
        Self::from_coeffs(&self.field, low, coeffs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_impl(rhs, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { field: self.field.clone(), low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, rhs.field, "mixed cyclotomic orders");
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        LaurentPoly::from_coeffs(&self.field, self.low + rhs.low, coeffs)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits a coefficient into (negative, magnitude text, needs parentheses).
fn coeff_parts(c: &CycloNumber) -> (bool, String, bool) {
    if let Some(q) = c.as_rational() {
        return (q.is_negative(), fmt_rational(&q.abs()), false);
    }
    if c.term_count() == 1 {
        let s = c.to_string();
        return match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string(), false),
            None => (false, s, false),
        };
    }
    (false, format!("({c})"), true)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms: Vec<_> = self.terms().collect();
        for (exp, c) in terms.into_iter().rev() {
            let (neg, mag, _) = coeff_parts(c);
            let tpart = match exp {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            let body = match (tpart.is_empty(), mag == "1") {
                (true, _) => mag,
                (false, true) => tpart,
                (false, false) => format!("{mag}*{tpart}"),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&q(), s).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(p("2*t^2 + 2*t").normalize_assoc(), p("t + 1"));
        assert_eq!(p("-t^-1 + 1").normalize_assoc(), p("t - 1"));
        assert!(LaurentPoly::zero(&q()).normalize_assoc().is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p("t^2 - 1").gcd(&p("t - 1")), p("t - 1"));
        assert!(p("t - 1").gcd(&p("t + 1")).is_one());
        assert_eq!(LaurentPoly::zero(&q()).gcd(&p("-2*t^3 + 4*t^2")), p("t - 2"));
        assert!(LaurentPoly::zero(&q()).gcd(&LaurentPoly::zero(&q())).is_zero());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(p("t + 1").conj(), p("t^-1 + 1"));
        assert!(p("t + 1").conj().assoc_eq(&p("t + 1")));
        let f4 = CycloField::new(4).unwrap();
        let it = LaurentPoly::monomial(f4.zeta(), 1);
        assert_eq!(it.conj(), LaurentPoly::monomial(-&f4.zeta(), -1));
        assert!(p("t^2 - t + 1").conj().assoc_eq(&p("t^2 - t + 1")));
        assert!(!p("t - 2").conj().assoc_eq(&p("t - 2")));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p("t^2 - t + 1").to_string(), "t^2 - t + 1");
        assert_eq!(p("-t^-1 + 1").to_string(), "1 - t^-1");
        assert_eq!(p("1/2*t^3 - 3/4").to_string(), "1/2*t^3 - 3/4");
        let f3 = CycloField::new(3).unwrap();
        let c = LaurentPoly::parse(&f3, "(1 + 2*z)*t - z").unwrap();
        assert_eq!(c.to_string(), "(1 + 2*z)*t - z");
    }

    #[test]
    fn division_with_remainder_uses_span() {
        let (qq, r) = p("t^3 + t^-2").div_rem(&p("t + 1")).unwrap();
        assert!(r.span().unwrap_or(0) < 1);
        assert_eq!(&(&qq * &p("t + 1")) + &r, p("t^3 + t^-2"));
        assert!(p("t^2 - 1").exact_div(&p("t + 1")).is_some());
        assert!(p("t^2 + 1").exact_div(&p("t + 1")).is_none());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..3, prop::collection::vec(-4i64..5, 0..5))
            .prop_map(|(low, cs)| LaurentPoly::from_ints(&CycloField::rationals(), low, &cs))
    }

    fn arb_cyclo_poly() -> impl Strategy<Value = LaurentPoly> {
        let f = CycloField::new(6).unwrap();
        (-2i64..2, prop::collection::vec((-3i64..4, -3i64..4), 0..4)).prop_map(move |(low, cs)| {
            let coeffs = cs.into_iter().map(|(a, b)| &f.from_int(a) + &(&f.zeta() * &f.from_int(b))).collect();
            LaurentPoly::from_coeffs(&f, low, coeffs)
        })
    }

    proptest! {
        #[test]
        fn normalize_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            let lhs = (&a * &b).normalize_assoc();
            let rhs = (&a.normalize_assoc() * &b.normalize_assoc()).normalize_assoc();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
            let g = a.gcd(&b);
            prop_assert!(g.divides(&a));
            prop_assert!(g.divides(&b));
            if !a.is_zero() && !b.is_zero() {
                prop_assert!(g.span().unwrap() <= a.span().unwrap().min(b.span().unwrap()));
            }
        }

        #[test]
        fn gcd_of_common_multiples(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assume!(!c.is_zero());
            let g = (&a * &c).gcd(&(&b * &c));
            prop_assert!(c.divides(&g) || (a.is_zero() && b.is_zero()));
        }

        #[test]
        fn conj_is_multiplicative_involution(a in arb_cyclo_poly(), b in arb_cyclo_poly()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn display_parse_roundtrip(a in arb_cyclo_poly()) {
            let back = LaurentPoly::parse(a.field(), &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
