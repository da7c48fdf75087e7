//! Twist data `(ε, ρ)`: validation, `Φ` on words, unitarity, direct sums and rank-1 characters.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::coeff::{CoeffError, CycloField, CycloMatrix};
use crate::freegroup::{eps_of_word, Word};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::presentation::Presentation;

/// Default bound on the number of characters a scan may materialize.
pub const DEFAULT_CHARACTER_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepnError {
    #[error("representation has no generator images")]
    Empty,
    #[error("image of generator {generator} is {rows}x{cols}, expected {dim}x{dim}")]
    Shape { generator: usize, rows: usize, cols: usize, dim: usize },
    #[error("image of generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("generator images lie in different fields")]
    FieldMismatch,
    #[error("presentation has unmarked generators; characters need a component for every generator")]
    Unmarked,
    #[error("{count} characters exceed the cap {cap}")]
    TooManyCharacters { count: u128, cap: u64 },
    #[error("representations have {left} and {right} generators")]
    GeneratorCount { left: usize, right: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Integer weights of the generators, `ε(x_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epsilon {
    weights: Vec<i64>,
}

impl Epsilon {
    pub fn new(weights: Vec<i64>) -> Self {
        Epsilon { weights }
    }

    pub fn all_ones(generators: usize) -> Self {
        Epsilon { weights: vec![1; generators] }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn of_word(&self, w: &Word) -> i64 {
        eps_of_word(w, &self.weights)
    }

    /// Pulls the weights back along a map sending generator `k` to `words[k]`.
    pub fn pull_back(&self, words: &[Word]) -> Self {
        Epsilon { weights: words.iter().map(|w| self.of_word(w)).collect() }
    }
}

/// `ρ: π → GL(V)` given by invertible images of the generators; inverses are cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: CycloField,
    dim: usize,
    images: Vec<CycloMatrix>,
    inverses: Vec<CycloMatrix>,
}

impl Representation {
    pub fn new(images: Vec<CycloMatrix>) -> Result<Self, RepnError> {
        let first = images.first().ok_or(RepnError::Empty)?;
        let (field, dim) = (first.field().clone(), first.rows());
        let mut inverses = Vec::with_capacity(images.len());
        for (g, m) in images.iter().enumerate() {
            if m.field() != &field {
                return Err(RepnError::FieldMismatch);
            }
            if m.rows() != dim || m.cols() != dim || dim == 0 {
                return Err(RepnError::Shape { generator: g, rows: m.rows(), cols: m.cols(), dim });
            }
            inverses.push(m.inverse().map_err(|_| RepnError::NotInvertible(g))?);
        }
        Ok(Representation { field, dim, images, inverses })
    }

    /// The trivial representation of the given dimension.
    pub fn trivial(field: &CycloField, generators: usize, dim: usize) -> Self {
        let id = CycloMatrix::identity(field, dim);
        Representation {
            field: field.clone(),
            dim,
            images: vec![id.clone(); generators],
            inverses: vec![id; generators],
        }
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_generators(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, g: usize) -> &CycloMatrix {
        &self.images[g]
    }

    pub fn images(&self) -> &[CycloMatrix] {
        &self.images
    }

    /// `ρ(w)`.
    pub fn of_word(&self, w: &Word) -> CycloMatrix {
        let mut acc = CycloMatrix::identity(&self.field, self.dim);
        for l in w.letters() {
            let m = if l.inverse { &self.inverses[l.generator] } else { &self.images[l.generator] };
            acc = acc.mul(m).expect("square images of equal size");
        }
        acc
    }

    /// Pulls `ρ` back along a map sending generator `k` to `words[k]`.
    pub fn pull_back(&self, words: &[Word]) -> Self {
        let images: Vec<_> = words.iter().map(|w| self.of_word(w)).collect();
        let inverses = words.iter().map(|w| self.of_word(&w.inverse())).collect();
        Representation { field: self.field.clone(), dim: self.dim, images, inverses }
    }

    /// True iff every generator image satisfies `M^* M = Id` for the standard hermitian form.
    pub fn is_unitary(&self) -> bool {
        self.images.iter().all(|m| m.conj_transpose().mul(m).expect("square").is_identity())
    }

    /// Block-diagonal `ρ1 ⊕ ρ2`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, RepnError> {
        if self.field != other.field {
            return Err(CoeffError::FieldMismatch { left: self.field.order(), right: other.field.order() }.into());
        }
        if self.images.len() != other.images.len() {
            return Err(RepnError::GeneratorCount { left: self.images.len(), right: other.images.len() });
        }
        let sum = |a: &[CycloMatrix], b: &[CycloMatrix]| -> Vec<CycloMatrix> {
            a.iter().zip(b).map(|(x, y)| x.direct_sum(y).expect("same field")).collect()
        };
        Ok(Representation {
            field: self.field.clone(),
            dim: self.dim + other.dim,
            images: sum(&self.images, &other.images),
            inverses: sum(&self.inverses, &other.inverses),
        })
    }
}

/// `Φ(w) = t^{ε(w)} ρ(w)`; `t` is central so the exponent separates from the matrix part.
pub fn phi_of_word(w: &Word, eps: &Epsilon, rho: &Representation) -> LaurentMatrix {
    LaurentMatrix::from_constant(&rho.of_word(w), eps.of_word(w))
}

/// `Φ(w) - Id`.
pub fn phi_minus_identity(w: &Word, eps: &Epsilon, rho: &Representation) -> LaurentMatrix {
    let phi = phi_of_word(w, eps, rho);
    phi.sub(&LaurentMatrix::identity(rho.field(), rho.dim())).expect("square")
}

/// One failed check in a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationIssue {
    EpsilonArity {
        expected: usize,
        got: usize,
    },
    RhoArity {
        expected: usize,
        got: usize,
    },
    /// `ε(r) ≠ 0`.
    EpsilonRelator {
        relator: usize,
        text: String,
        value: i64,
    },
    /// `ρ(r) ≠ Id`.
    RhoRelator {
        relator: usize,
        text: String,
    },
    /// The weights generate `gcd·Z`, so `ε` is not onto `Z`.
    NotSurjective {
        gcd: i64,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::EpsilonArity { expected, got } => {
                write!(f, "epsilon has {got} weights for {expected} generators")
            }
            ValidationIssue::RhoArity { expected, got } => {
                write!(f, "rho has {got} images for {expected} generators")
            }
            ValidationIssue::EpsilonRelator { relator, text, value } => {
                write!(f, "relator {} ({text}) has epsilon {value}, expected 0", relator + 1)
            }
            ValidationIssue::RhoRelator { relator, text } => {
                write!(f, "relator {} ({text}) is not sent to the identity by rho", relator + 1)
            }
            ValidationIssue::NotSurjective { gcd: 0 } => write!(f, "epsilon is trivial"),
            ValidationIssue::NotSurjective { gcd } => {
                write!(f, "epsilon is not surjective: weights have gcd {gcd}")
            }
        }
    }
}

/// Every violated condition, in a fixed order: arities, surjectivity, then relators in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate(pres: &Presentation, eps: &Epsilon, rho: &Representation) -> ValidationReport {
    let m = pres.num_generators();
    let mut issues = Vec::new();
    if eps.weights().len() != m {
        issues.push(ValidationIssue::EpsilonArity { expected: m, got: eps.weights().len() });
    }
    if rho.num_generators() != m {
        issues.push(ValidationIssue::RhoArity { expected: m, got: rho.num_generators() });
    }
    if !issues.is_empty() {
        return ValidationReport { issues };
    }
    let gcd = eps.weights().iter().fold(0i64, |g, &w| g.gcd(&w));
    if gcd != 1 {
        issues.push(ValidationIssue::NotSurjective { gcd });
    }
    for (k, r) in pres.relators().iter().enumerate() {
        let value = eps.of_word(r);
        if value != 0 {
            issues.push(ValidationIssue::EpsilonRelator { relator: k, text: pres.display_word(r), value });
        }
    }
    for (k, r) in pres.relators().iter().enumerate() {
        if !rho.of_word(r).is_identity() {
            issues.push(ValidationIssue::RhoRelator { relator: k, text: pres.display_word(r) });
        }
    }
    ValidationReport { issues }
}

/// A rank-1 character sending each meridian of component `c` to `ζ_N^{exponents[c]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub order: u32,
    pub exponents: Vec<u32>,
    pub representation: Representation,
}

impl Character {
    /// `"z^k"` per component, e.g. `"(z^0, z^1)"`.
    pub fn label(&self) -> String {
        let parts: Vec<_> = self.exponents.iter().map(|k| format!("z^{k}")).collect();
        format!("({})", parts.join(", "))
    }
}

/// All characters constant on components with values in the `N`-th roots of unity, in
/// lexicographic order of exponent tuples, keeping only those that kill every relator.
pub fn rank1_characters(pres: &Presentation, order: u32, cap: u64) -> Result<Vec<Character>, RepnError> {
    if !pres.fully_marked() {
        return Err(RepnError::Unmarked);
    }
    let field = CycloField::new(order)?;
    let r = pres.components().len();
    let count = (order as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(RepnError::TooManyCharacters { count, cap });
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; r];
    loop {
        let images = pres
            .component_of()
            .iter()
            .map(|c| {
                let k = exps[c.expect("fully marked")];
                CycloMatrix::from_rows(&field, vec![vec![field.zeta_pow(k as i64)]]).expect("1x1")
            })
            .collect();
        let rep = Representation::new(images)?;
        if pres.relators().iter().all(|w| rep.of_word(w).is_identity()) {
            out.push(Character { order, exponents: exps.clone(), representation: rep });
        }
        // odometer, last component fastest
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < order {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// `det Φ(w)`, convenient for the determinant-based checks downstream.
pub fn det_phi(w: &Word, eps: &Epsilon, rho: &Representation) -> LaurentPoly {
    phi_of_word(w, eps, rho).det().expect("square")
}
