use std::fmt;

use super::{LaurentError, LaurentPoly};
use crate::coeff::CycloField;

/// An element of `K(t)` up to units: coprime numerator and denominator, both unit-normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::ZeroDenominator);
        }
        if num.is_zero() {
            let field = num.field().clone();
            return Ok(LaurentFraction { num, den: LaurentPoly::one(&field) });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides").normalize_assoc();
        let den = den.exact_div(&g).expect("gcd divides").normalize_assoc();
        Ok(LaurentFraction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let one = LaurentPoly::one(p.field());
        Self::new(p, one).expect("nonzero denominator")
    }

    pub fn one(field: &CycloField) -> Self {
        Self::from_poly(LaurentPoly::one(field))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a unit, i.e. the class contains a Laurent polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_unit()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self, LaurentError> {
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn inv(&self) -> Result<Self, LaurentError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self, LaurentError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(LaurentFraction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn conj(&self) -> Self {
        Self::new(self.num.conj(), self.den.conj()).expect("nonzero denominator")
    }

    /// Self-conjugate up to units.
    pub fn is_self_conjugate(&self) -> bool {
        self.conj() == *self
    }
}

impl fmt::Debug for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.terms().count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&CycloField::rationals(), s).unwrap()
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let f = LaurentFraction::new(p("t^2 - 1"), p("2*t - 2")).unwrap();
        assert_eq!(f.numerator(), &p("t + 1"));
        assert!(f.denominator().is_one());
        assert!(f.is_polynomial());
        assert_eq!(f.to_string(), "t + 1");
    }

    #[test]
    fn display_and_powers() {
        let f = LaurentFraction::new(p("t^2 - t + 1"), p("t - 1")).unwrap();
        assert_eq!(f.to_string(), "(t^2 - t + 1)/(t - 1)");
        let inv = f.pow(-1).unwrap();
        assert_eq!(inv.to_string(), "(t - 1)/(t^2 - t + 1)");
        assert!(f.mul(&inv).is_one());
        assert_eq!(LaurentFraction::new(p("1"), p("t - 1")).unwrap().to_string(), "1/(t - 1)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(LaurentFraction::new(p("1"), p("0")), Err(LaurentError::ZeroDenominator));
    }
}
