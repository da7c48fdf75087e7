//! Exact coefficients: the rationals and cyclotomic fields `Q(z)`, `z = exp(2*pi*i/n)`.
//!
//! Elements of `Q(z_n)` are stored densely in the power basis `1, z, ..., z^(phi(n)-1)`
//! and are always reduced modulo the n-th cyclotomic polynomial. The rationals are the
//! field of order 1 (`Phi_1 = x - 1`), so they use the same code path.

mod matrix;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use matrix::CycloMatrix;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine elements of Q(z_{left}) and Q(z_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("Q(z_{from}) does not embed in Q(z_{to})")]
    NotPromotable { from: u32, to: u32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
}

/// The n-th cyclotomic polynomial, coefficients from the constant term upwards.
///
/// Computed by dividing `x^n - 1` by `Phi_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = div_exact_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

// exact division of integer polynomials by a monic divisor
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

struct FieldData {
    order: u32,
    // Phi_n, monic, low to high
    modulus: Vec<BigInt>,
    // coordinates of z^j for j in 0..n
    powers: Vec<Vec<Rational>>,
}

/// Handle to the field `Q(z_n)`. Cheap to clone; two handles are equal iff their orders are.
#[derive(Clone)]
pub struct CycloField(Arc<FieldData>);

impl CycloField {
    pub fn new(order: u32) -> Result<Self, CoeffError> {
        if order == 0 {
            return Err(CoeffError::ZeroOrder);
        }
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..order {
            powers.push(cur.clone());
            cur = times_x_reduced(&cur, &modulus);
        }
        Ok(CycloField(Arc::new(FieldData { order, modulus, powers })))
    }

    pub fn rationals() -> Self {
        Self::new(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// `phi(n)`, the dimension over Q.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.0.modulus
    }

    pub fn zero(&self) -> CycloNumber {
        CycloNumber { field: self.clone(), coords: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycloNumber {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> CycloNumber {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(&self, q: Rational) -> CycloNumber {
        let mut z = self.zero();
        z.coords[0] = q;
        z
    }

    /// `z^k` for any integer k.
    pub fn zeta_pow(&self, k: i64) -> CycloNumber {
        let n = self.order() as i64;
        let j = k.rem_euclid(n) as usize;
        CycloNumber { field: self.clone(), coords: self.0.powers[j].clone() }
    }

    pub fn zeta(&self) -> CycloNumber {
        self.zeta_pow(1)
    }

    /// Builds an element from arbitrary-length power-basis coordinates, reducing as needed.
    pub fn from_coords(&self, coords: Vec<Rational>) -> CycloNumber {
        CycloNumber { field: self.clone(), coords: reduce(coords, self.modulus()) }
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z_{})", self.order())
    }
}

fn times_x_reduced(v: &[Rational], modulus: &[BigInt]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(Rational::zero());
    out.extend(v.iter().cloned());
    reduce(out, modulus)
}

// reduce a dense coordinate vector modulo the monic integer polynomial `modulus`
fn reduce(mut v: Vec<Rational>, modulus: &[BigInt]) -> Vec<Rational> {
    let d = modulus.len() - 1;
    while v.len() > d {
        let top = v.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = v.len() - d;
        for (i, m) in modulus[..d].iter().enumerate() {
            if !m.is_zero() {
                v[shift + i] -= &top * Rational::from_integer(m.clone());
            }
        }
    }
    v.resize(d, Rational::zero());
    v
}

/// An element of `Q(z_n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloNumber {
    field: CycloField,
    coords: Vec<Rational>,
}

impl CycloNumber {
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    /// Number of nonzero power-basis coordinates.
    pub fn term_count(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    fn check_field(&self, other: &Self) -> Result<(), CoeffError> {
        if self.field != other.field {
            return Err(CoeffError::FieldMismatch { left: self.field.order(), right: other.field.order() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(CycloNumber { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_field(other)?;
        let d = self.coords.len();
        if d == 1 {
            return Ok(self.field.from_rational(&self.coords[0] * &other.coords[0]));
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.field.from_coords(prod))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_n`.
    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(q.recip()));
        }
        let modulus: Vec<Rational> = self.field.modulus().iter().map(|c| Rational::from_integer(c.clone())).collect();
        let (g, s) = qpoly::half_ext_gcd(&self.coords, &modulus);
        // g is a nonzero constant since Phi_n is irreducible
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let coords = s.into_iter().map(|c| c * &scale).collect();
        Ok(self.field.from_coords(coords))
    }

    pub fn pow(&self, k: i64) -> Result<Self, CoeffError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field.one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Complex conjugation: `z -> z^-1`, rationals fixed.
    pub fn conj(&self) -> Self {
        let n = self.field.order() as usize;
        let mut out = vec![Rational::zero(); self.coords.len()];
        for (k, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let image = &self.field.0.powers[(n - k % n) % n];
            for (o, p) in out.iter_mut().zip(image) {
                if !p.is_zero() {
                    *o += a * p;
                }
            }
        }
        CycloNumber { field: self.field.clone(), coords: out }
    }

    /// Embeds `Q(z_n)` into `Q(z_m)` for `n | m` via `z_n = z_m^(m/n)`.
    pub fn promote(&self, target: &CycloField) -> Result<Self, CoeffError> {
        let (n, m) = (self.field.order(), target.order());
        if m % n != 0 {
            return Err(CoeffError::NotPromotable { from: n, to: m });
        }
        let step = (m / n) as i64;
        let mut acc = target.zero();
        for (k, a) in self.coords.iter().enumerate() {
            if !a.is_zero() {
                let term = &target.zeta_pow(k as i64 * step) * &target.from_rational(a.clone());
                acc = &acc + &term;
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let body = match (k, abs.is_one()) {
                (0, _) => fmt_rational(&abs),
                (1, true) => "z".to_string(),
                (_, true) => format!("z^{k}"),
                (1, false) => format!("{}*z", fmt_rational(&abs)),
                (_, false) => format!("{}*z^{k}", fmt_rational(&abs)),
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on mixed fields: a single computation fixes one ambient order.
impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_add(rhs).expect("mixed cyclotomic orders")
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_add(&-rhs).expect("mixed cyclotomic orders")
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.checked_mul(rhs).expect("mixed cyclotomic orders")
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// Dense univariate polynomials over Q, low to high. Only what inversion needs.
mod qpoly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(Rational::zero());
        }
        p
    }

    fn is_zero(p: &[Rational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (vec![Rational::zero()], r);
        }
        let lead = b.last().expect("nonzero divisor").clone();
        let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + b.len() - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &c * bi;
            }
            q[k] = c;
        }
        (trim(q), trim(r))
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect();
        trim(out)
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` and `s*a == g (mod m)`.
    pub(super) fn half_ext_gcd(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(m.to_vec()));
        let (mut s0, mut s1) = (vec![Rational::from_integer(1.into())], vec![Rational::zero()]);
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (r0, s0)
    }
}
