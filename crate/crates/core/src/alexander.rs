//! The twisted chain complex of a presentation and its invariants.
//!
//! Chains are row vectors. With `m` generators, `n` relators and `dim V = r`:
//! `d2` is the `nr x mr` matrix with block `(k, j) = Φ(∂r_k/∂x_j)` and `d1` is the
//! `mr x r` stack of the blocks `Φ(x_j) - Id`. The Fox identity gives `d2 · d1 = 0`.

use log::{debug, warn};
use thiserror::Error;

use crate::freegroup::{fox_derivative, Word};
use crate::laurent::{LaurentError, LaurentFraction, LaurentMatrix, LaurentPoly};
use crate::presentation::Presentation;
use crate::repn::{phi_minus_identity, Epsilon, Representation};

/// Default guard on the number of minors a Wada computation may evaluate.
pub const DEFAULT_MAX_MINORS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error("twist data has {eps} weights and {rho} images for {generators} generators")]
    Arity { generators: usize, eps: usize, rho: usize },
    #[error("internal consistency failure: d1 ∘ d2 is not zero")]
    NotAComplex,
    #[error("denominator vanishes for all generators")]
    NoValidGenerator,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub generators: usize,
    pub relators: usize,
    pub dim: usize,
    pub d2: LaurentMatrix,
    pub d1: LaurentMatrix,
}

pub fn assemble_complex(
    pres: &Presentation,
    eps: &Epsilon,
    rho: &Representation,
) -> Result<TwistedComplex, AlexanderError> {
    let (m, n, r) = (pres.num_generators(), pres.relators().len(), rho.dim());
    if eps.weights().len() != m || rho.num_generators() != m {
        return Err(AlexanderError::Arity { generators: m, eps: eps.weights().len(), rho: rho.num_generators() });
    }
    let field = rho.field();
    let mut d2 = LaurentMatrix::zeros(field, n * r, m * r);
    for (k, rel) in pres.relators().iter().enumerate() {
        for j in 0..m {
            let block = fox_image(rel, j, eps, rho);
            d2.set_block(k * r, j * r, &block);
        }
    }
    let mut d1 = LaurentMatrix::zeros(field, m * r, r);
    for j in 0..m {
        d1.set_block(j * r, 0, &phi_minus_identity(&Word::generator(j), eps, rho));
    }
    if !d2.mul(&d1)?.is_zero() {
        return Err(AlexanderError::NotAComplex);
    }
    Ok(TwistedComplex { generators: m, relators: n, dim: r, d2, d1 })
}

// Φ(∂w/∂x_j) as an r x r block
fn fox_image(w: &Word, j: usize, eps: &Epsilon, rho: &Representation) -> LaurentMatrix {
    let r = rho.dim();
    let field = rho.field();
    let mut acc = LaurentMatrix::zeros(field, r, r);
    for (prefix, c) in fox_derivative(w, j).terms() {
        let m = rho.of_word(prefix);
        let e = eps.of_word(prefix);
        let coeff = field.from_int(c);
        for a in 0..r {
            for b in 0..r {
                let entry = m.get(a, b);
                if entry.is_zero() {
                    continue;
                }
                let term = LaurentPoly::monomial(&coeff * entry, e);
                acc.set(a, b, acc.get(a, b) + &term);
            }
        }
    }
    acc
}

/// Orders of the torsion parts of `H_0, H_1, H_2` together with their free ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyOrders {
    pub delta0: LaurentPoly,
    pub delta1: LaurentPoly,
    pub delta2: LaurentPoly,
    pub rank0: usize,
    pub rank1: usize,
    pub rank2: usize,
}

impl HomologyOrders {
    pub fn h1_torsion(&self) -> bool {
        self.rank1 == 0
    }

    /// Acyclic over `K(t)`: every homology module is torsion.
    pub fn is_acyclic(&self) -> bool {
        self.rank0 == 0 && self.rank1 == 0 && self.rank2 == 0
    }
}

pub fn homology_orders(c: &TwistedComplex) -> HomologyOrders {
    let field = c.d1.field().clone();
    let product = |fs: &[LaurentPoly]| fs.iter().fold(LaurentPoly::one(&field), |a, b| &a * b);

    let s1 = c.d1.smith_normal_form_with_transforms();
    let delta0 = product(&s1.invariant_factors);
    let rank0 = c.dim - s1.rank;

    // ker(v ↦ v d1) is spanned by rows rank(d1).. of P; coordinates of im(d2) in that basis
    // are the trailing columns of d2 · P^-1, the leading ones vanish.
    let p_inv = s1.left_inv.as_ref().expect("transforms requested");
    let coords = c.d2.mul(p_inv).expect("conformable");
    let total = c.d1.rows();
    debug_assert!((0..coords.rows()).all(|i| (0..s1.rank).all(|j| coords.get(i, j).is_zero())));
    let rows: Vec<usize> = (0..coords.rows()).collect();
    let cols: Vec<usize> = (s1.rank..total).collect();
    let y = coords.select(&rows, &cols);
    let sy = y.smith_normal_form();
    let delta1 = product(&sy.invariant_factors);
    let rank1 = (total - s1.rank) - sy.rank;

    // C_2 is free and H_2 = ker d2 is a submodule of it, hence free
    let rank2 = c.d2.rows() - sy.rank;
    HomologyOrders { delta0, delta1, delta2: LaurentPoly::one(&field), rank0, rank1, rank2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WadaOptions {
    /// Evaluate every admissible deleted generator, not just the first.
    pub cross_check: bool,
    pub max_minors: Option<u64>,
}

impl Default for WadaOptions {
    fn default() -> Self {
        WadaOptions { cross_check: false, max_minors: Some(DEFAULT_MAX_MINORS) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WadaResult {
    pub value: LaurentFraction,
    /// The deleted generator (0-based): the first with `det(Φ(x_i) - Id) ≠ 0`.
    pub index: usize,
    /// The relator rows could not support a minor of size `(m-1)r`, so `Q_i = 1`.
    pub too_few_relators: bool,
    /// The `n ≥ m` reading of that case split would have decided differently.
    pub case_rule_disagrees: bool,
    /// Values for every admissible index, when cross-checking.
    pub all_choices: Vec<(usize, LaurentFraction)>,
}

impl WadaResult {
    /// `None` unless cross-checked.
    pub fn choice_independent(&self) -> Option<bool> {
        if self.all_choices.is_empty() {
            return None;
        }
        Some(self.all_choices.iter().all(|(_, v)| *v == self.value))
    }
}

/// `Q_i / det(Φ(x_i) - Id)` with `Q_i` the gcd of the `(m-1)r` minors of `d2` minus block column `i`.
pub fn wada_invariant(c: &TwistedComplex, opts: &WadaOptions) -> Result<WadaResult, AlexanderError> {
    let (m, n, r) = (c.generators, c.relators, c.dim);
    let field = c.d1.field().clone();
    let mut first: Option<WadaResult> = None;
    let mut all = Vec::new();
    for i in 0..m {
        let block_rows: Vec<usize> = (i * r..(i + 1) * r).collect();
        let all_cols: Vec<usize> = (0..r).collect();
        let denom = c.d1.select(&block_rows, &all_cols).det()?;
        if denom.is_zero() {
            continue;
        }
        let k = (m - 1) * r;
        let too_few = n * r < k;
        let case_rule_disagrees = (n >= m) == too_few && k > 0;
        if case_rule_disagrees {
            debug!("Q_{i}: minor-size rule and n >= m rule disagree (n = {n}, m = {m})");
        }
        let q = if k == 0 || too_few {
            LaurentPoly::one(&field)
        } else {
            let cols: Vec<usize> = (0..m * r).filter(|col| col / r != i).collect();
            let rows: Vec<usize> = (0..n * r).collect();
            c.d2.select(&rows, &cols).minors_gcd(k, opts.max_minors)?
        };
        let value = LaurentFraction::new(q, denom)?;
        if first.is_none() {
            first = Some(WadaResult {
                value: value.clone(),
                index: i,
                too_few_relators: too_few,
                case_rule_disagrees,
                all_choices: Vec::new(),
            });
            if !opts.cross_check {
                break;
            }
        }
        all.push((i, value));
    }
    let mut result = first.ok_or(AlexanderError::NoValidGenerator)?;
    if opts.cross_check {
        result.all_choices = all;
        if result.choice_independent() == Some(false) {
            warn!("Wada invariant depends on the deleted generator: {:?}", result.all_choices);
        }
    }
    Ok(result)
}

/// `τ = Δ¹/(Δ⁰Δ²)`, or the reason it is not defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Torsion {
    Defined(LaurentFraction),
    Undefined(&'static str),
}

pub fn torsion(h: &HomologyOrders) -> Torsion {
    if !h.h1_torsion() {
        return Torsion::Undefined("H1 not torsion");
    }
    if h.rank0 != 0 {
        return Torsion::Undefined("H0 not torsion");
    }
    let den = &h.delta0 * &h.delta2;
    Torsion::Defined(LaurentFraction::new(h.delta1.clone(), den).expect("orders are nonzero"))
}

pub fn is_acyclic(c: &TwistedComplex) -> bool {
    homology_orders(c).is_acyclic()
}

/// Everything the engine reports for one `(presentation, ε, ρ)`.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub orders: HomologyOrders,
    pub wada: Result<WadaResult, AlexanderError>,
    pub torsion: Torsion,
    /// `wada = Δ¹/Δ⁰` up to units; `None` when `H_1` is not torsion and the identity does not apply.
    pub wada_matches_orders: Option<bool>,
}

impl InvariantReport {
    pub fn delta(&self) -> Option<LaurentFraction> {
        LaurentFraction::new(self.orders.delta1.clone(), self.orders.delta0.clone()).ok()
    }

    pub fn h1_torsion(&self) -> bool {
        self.orders.h1_torsion()
    }

    pub fn acyclic(&self) -> bool {
        self.orders.is_acyclic()
    }
}

pub fn compute_invariants(
    pres: &Presentation,
    eps: &Epsilon,
    rho: &Representation,
    opts: &WadaOptions,
) -> Result<InvariantReport, AlexanderError> {
    let c = assemble_complex(pres, eps, rho)?;
    let (orders, wada) = rayon::join(|| homology_orders(&c), || wada_invariant(&c, opts));
    let wada = match wada {
        Err(AlexanderError::Laurent(e @ LaurentError::TooManyMinors { .. })) => return Err(e.into()),
        other => other,
    };
    let torsion = torsion(&orders);
    let wada_matches_orders = match (&wada, orders.h1_torsion()) {
        (Ok(w), true) => {
            let delta = LaurentFraction::new(orders.delta1.clone(), orders.delta0.clone()).ok();
            Some(delta.as_ref() == Some(&w.value))
        }
        _ => None,
    };
    Ok(InvariantReport { orders, wada, torsion, wada_matches_orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CycloField, CycloMatrix};
    use crate::presentation::parse_word;

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&q(), s).unwrap()
    }

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let n: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|s| parse_word(s, &n).unwrap()).collect();
        Presentation::new(n, rels).unwrap()
    }

    fn classical(pr: &Presentation) -> InvariantReport {
        let m = pr.num_generators();
        let rho = Representation::trivial(&q(), m, 1);
        compute_invariants(pr, &Epsilon::all_ones(m), &rho, &WadaOptions { cross_check: true, ..Default::default() })
            .unwrap()
    }

    #[test]
    fn commutator_complex() {
        let pr = pres(&["x", "y"], &["[x, y]"]);
        let c = assemble_complex(&pr, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        let d2 = LaurentMatrix::from_rows(&q(), vec![vec![p("1 - t"), p("t - 1")]]).unwrap();
        assert_eq!(c.d2, d2);
        let d1 = LaurentMatrix::from_rows(&q(), vec![vec![p("t - 1")], vec![p("t - 1")]]).unwrap();
        assert_eq!(c.d1, d1);
        let h = homology_orders(&c);
        assert_eq!((h.delta0.clone(), h.delta1.clone(), h.delta2.clone()), (p("t - 1"), p("t - 1"), p("1")));
        assert_eq!(torsion(&h), Torsion::Defined(LaurentFraction::one(&q())));
    }

    #[test]
    fn free_group_complex() {
        let pr = pres(&["x", "y"], &[]);
        let c = assemble_complex(&pr, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        assert_eq!((c.d2.rows(), c.d2.cols()), (0, 2));
        assert!(!is_acyclic(&c));
        let one = pres(&["x"], &[]);
        let r = classical(&one);
        assert_eq!(r.torsion, Torsion::Defined(LaurentFraction::new(p("1"), p("t - 1")).unwrap()));
    }

    #[test]
    fn trefoil() {
        let r = classical(&pres(&["a", "b"], &["a b a = b a b"]));
        assert_eq!(r.orders.delta0, p("t - 1"));
        assert_eq!(r.orders.delta1, p("t^2 - t + 1"));
        assert!(r.acyclic());
        let tau = LaurentFraction::new(p("t^2 - t + 1"), p("t - 1")).unwrap();
        assert_eq!(r.torsion, Torsion::Defined(tau.clone()));
        let w = r.wada.unwrap();
        assert_eq!(w.value, tau);
        assert!(w.case_rule_disagrees);
        assert_eq!(w.choice_independent(), Some(true));
    }

    #[test]
    fn weighted_zero_order() {
        // ε = (2, 3) on Z^2: Δ⁰ = gcd(t^2 - 1, t^3 - 1) = t - 1
        let pr = pres(&["x", "y"], &["[x, y]"]);
        let c = assemble_complex(&pr, &Epsilon::new(vec![2, 3]), &Representation::trivial(&q(), 2, 1)).unwrap();
        assert_eq!(homology_orders(&c).delta0, p("t - 1"));
    }

    #[test]
    fn nodal_degeneration() {
        let pr = pres(&["l", "x1", "x2"], &["[x1, x2]", "L x1 l = x2", "L x2 l = x1"]);
        let rho = Representation::new(vec![
            CycloMatrix::from_ints(&q(), &[&[1, 0], &[0, -1]]),
            CycloMatrix::from_ints(&q(), &[&[-1, 0], &[1, -1]]),
            CycloMatrix::from_ints(&q(), &[&[-1, 0], &[-1, -1]]),
        ])
        .unwrap();
        let opts = WadaOptions { cross_check: true, ..Default::default() };
        let r = compute_invariants(&pr, &Epsilon::all_ones(3), &rho, &opts).unwrap();
        let c = assemble_complex(&pr, &Epsilon::all_ones(3), &rho).unwrap();
        assert_eq!((c.d2.rows(), c.d2.cols()), (6, 6));
        let w = r.wada.as_ref().unwrap();
        assert_eq!(w.value, LaurentFraction::from_poly(p("t + 1")));
        assert_eq!(w.choice_independent(), Some(true));
        assert_eq!(r.wada_matches_orders, Some(true));
        // Euler characteristic 2 - 6 + 6 forces nonzero homology over K(t)
        assert_eq!(r.orders.rank2, 2);
        assert!(!r.acyclic());
    }

    #[test]
    fn no_valid_generator() {
        let pr = pres(&["x"], &[]);
        let c = assemble_complex(&pr, &Epsilon::new(vec![0]), &Representation::trivial(&q(), 1, 1)).unwrap();
        assert_eq!(wada_invariant(&c, &WadaOptions::default()), Err(AlexanderError::NoValidGenerator));
    }

    #[test]
    fn minor_guard() {
        let pr = pres(&["a", "b"], &["a b a = b a b"]);
        let c = assemble_complex(&pr, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        let opts = WadaOptions { cross_check: false, max_minors: Some(0) };
        assert!(matches!(wada_invariant(&c, &opts), Err(AlexanderError::Laurent(LaurentError::TooManyMinors { .. }))));
    }
}
