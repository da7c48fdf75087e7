//! Global/local checks for plane curve complements and the characteristic-variety scan.
//!
//! The residual `(α · ∏ Δ_k) / (Δ · Δ̄)` is the candidate `det φ`; it is never computed
//! from an intersection form directly.

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::alexander::{assemble_complex, homology_orders, AlexanderError, HomologyOrders, InvariantReport};
use crate::freegroup::Word;
use crate::laurent::{LaurentError, LaurentFraction, LaurentMatrix, LaurentPoly};
use crate::presentation::{LocalGroup, Presentation};
use crate::repn::{phi_of_word, rank1_characters, Character, Epsilon, RepnError, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("component '{0}' has weight q = 0")]
    ZeroWeight(String),
    #[error("component weights have gcd {0}, expected 1")]
    WeightGcd(i64),
    #[error("meridian of component '{label}' has epsilon {got}, expected q = {expected}")]
    MeridianWeight { label: String, got: i64, expected: i64 },
    #[error("meridian of component '{0}' uses an undeclared generator")]
    MeridianGenerator(String),
    #[error("expected exactly one singularity marked infinity, found {0}")]
    Infinity(usize),
    #[error("singularity '{label}' maps {got} generators, its local group has {expected}")]
    InclusionArity { label: String, got: usize, expected: usize },
    #[error("inclusion of singularity '{0}' uses an undeclared global generator")]
    InclusionGenerator(String),
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("det(Id - Φ(ν)) vanishes for component '{0}'")]
    DegenerateMeridian(String),
    #[error("corollary requires trivial rho and every q = 1; component '{0}' has q ≠ 1")]
    CorollaryWeights(String),
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error(transparent)]
    Repn(#[from] RepnError),
}

impl From<LaurentError> for CurveError {
    fn from(e: LaurentError) -> Self {
        CurveError::Alexander(e.into())
    }
}

/// An irreducible component: Euler characteristic `χ`, weight `q = ε(ν)`, a meridian word `ν`,
/// and the number `s` of singular points lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComponent {
    pub label: String,
    pub chi: i64,
    pub q: i64,
    pub meridian: Word,
    pub sing_count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub label: String,
    pub local: LocalGroup,
    pub infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub components: Vec<CurveComponent>,
    pub singularities: Vec<Singularity>,
}

impl CurveData {
    pub fn validate(&self, pres: &Presentation, eps: &Epsilon) -> Result<(), CurveError> {
        let m = pres.num_generators();
        let mut labels = std::collections::BTreeSet::new();
        for c in &self.components {
            if !labels.insert(c.label.as_str()) {
                return Err(CurveError::DuplicateLabel(c.label.clone()));
            }
            if c.q == 0 {
                return Err(CurveError::ZeroWeight(c.label.clone()));
            }
            if c.meridian.max_generator().is_some_and(|g| g >= m) {
                return Err(CurveError::MeridianGenerator(c.label.clone()));
            }
            let got = eps.of_word(&c.meridian);
            if got != c.q {
                return Err(CurveError::MeridianWeight { label: c.label.clone(), got, expected: c.q });
            }
        }
        let gcd = self.components.iter().fold(0i64, |g, c| g.gcd(&c.q));
        if gcd != 1 {
            return Err(CurveError::WeightGcd(gcd));
        }
        let infinities = self.singularities.iter().filter(|s| s.infinity).count();
        if infinities != 1 {
            return Err(CurveError::Infinity(infinities));
        }
        let mut labels = std::collections::BTreeSet::new();
        for s in &self.singularities {
            if !labels.insert(s.label.as_str()) {
                return Err(CurveError::DuplicateLabel(s.label.clone()));
            }
            let expected = s.local.presentation.num_generators();
            if s.local.inclusion.len() != expected {
                return Err(CurveError::InclusionArity {
                    label: s.label.clone(),
                    got: s.local.inclusion.len(),
                    expected,
                });
            }
            if s.local.inclusion.iter().any(|w| w.max_generator().is_some_and(|g| g >= m)) {
                return Err(CurveError::InclusionGenerator(s.label.clone()));
            }
        }
        Ok(())
    }

    /// Number of affine singular points (everything except infinity).
    pub fn finite_singularities(&self) -> usize {
        self.singularities.iter().filter(|s| !s.infinity).count()
    }

    /// `χ(C) = s - Σ (s_ℓ - χ(C_ℓ))`.
    pub fn euler_characteristic(&self) -> i64 {
        let defect: i64 = self.components.iter().map(|c| c.sing_count - c.chi).sum();
        self.finite_singularities() as i64 - defect
    }
}

/// `α = ∏ det(Id - Φ(ν_ℓ))^{s_ℓ - χ(C_ℓ)}`.
pub fn alpha_factor(curve: &CurveData, eps: &Epsilon, rho: &Representation) -> Result<LaurentFraction, CurveError> {
    let field = rho.field();
    let mut alpha = LaurentFraction::one(field);
    for c in &curve.components {
        let id = LaurentMatrix::identity(field, rho.dim());
        let det = id.sub(&phi_of_word(&c.meridian, eps, rho))?.det()?;
        if det.is_zero() {
            return Err(CurveError::DegenerateMeridian(c.label.clone()));
        }
        alpha = alpha.mul(&LaurentFraction::from_poly(det).pow(c.sing_count - c.chi)?);
    }
    Ok(alpha)
}

/// Invariants of one local link under the restricted twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariant {
    pub label: String,
    pub infinity: bool,
    pub orders: HomologyOrders,
}

impl LocalInvariant {
    pub fn h1_torsion(&self) -> bool {
        self.orders.h1_torsion()
    }

    /// `Δ_k = Δ¹/Δ⁰`, when `H_1` is torsion.
    pub fn delta(&self) -> Option<LaurentFraction> {
        if !self.h1_torsion() {
            return None;
        }
        LaurentFraction::new(self.orders.delta1.clone(), self.orders.delta0.clone()).ok()
    }
}

pub fn local_invariants(
    curve: &CurveData,
    eps: &Epsilon,
    rho: &Representation,
) -> Result<Vec<LocalInvariant>, CurveError> {
    curve
        .singularities
        .par_iter()
        .map(|s| {
            let local_eps = eps.pull_back(&s.local.inclusion);
            let local_rho = rho.pull_back(&s.local.inclusion);
            let c = assemble_complex(&s.local.presentation, &local_eps, &local_rho)?;
            Ok(LocalInvariant { label: s.label.clone(), infinity: s.infinity, orders: homology_orders(&c) })
        })
        .collect()
}

/// Outcome of the global/local divisibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub alpha: LaurentFraction,
    pub locals: Vec<LocalInvariant>,
    /// `α · ∏ Δ_k`; absent when some local `H_1` is not torsion.
    pub lhs: Option<LaurentFraction>,
    /// `Δ · Δ̄`; absent when the global `H_1` is not torsion.
    pub rhs_known: Option<LaurentFraction>,
    /// Candidate `det φ`.
    pub residual: Option<LaurentFraction>,
    /// `None` when a gate failed.
    pub divisible: Option<bool>,
    pub unitary: bool,
    pub locals_torsion: bool,
    pub global_torsion: bool,
    pub residual_self_conjugate: Option<bool>,
}

fn finish(
    alpha: LaurentFraction,
    locals: Vec<LocalInvariant>,
    lhs: Option<LaurentFraction>,
    rhs_known: Option<LaurentFraction>,
    unitary: bool,
    global_torsion: bool,
) -> Result<TheoremReport, CurveError> {
    let locals_torsion = locals.iter().all(LocalInvariant::h1_torsion);
    let residual = match (&lhs, &rhs_known) {
        (Some(l), Some(r)) if !r.is_zero() => Some(l.div(r)?),
        _ => None,
    };
    let gated = unitary && locals_torsion && global_torsion;
    let divisible = if gated { residual.as_ref().map(LaurentFraction::is_polynomial) } else { None };
    let residual_self_conjugate = residual.as_ref().map(LaurentFraction::is_self_conjugate);
    Ok(TheoremReport {
        alpha,
        locals,
        lhs,
        rhs_known,
        residual,
        divisible,
        unitary,
        locals_torsion,
        global_torsion,
        residual_self_conjugate,
    })
}

/// `α · ∏_k Δ_k` against `Δ · Δ̄` for the twist `(ε, ρ)`.
pub fn theorem_check(
    pres: &Presentation,
    curve: &CurveData,
    eps: &Epsilon,
    rho: &Representation,
) -> Result<TheoremReport, CurveError> {
    curve.validate(pres, eps)?;
    let alpha = alpha_factor(curve, eps, rho)?;
    let locals = local_invariants(curve, eps, rho)?;
    let lhs = locals.iter().map(LocalInvariant::delta).try_fold(alpha.clone(), |acc, d| d.map(|d| acc.mul(&d)));
    let global = homology_orders(&assemble_complex(pres, eps, rho)?);
    let global_torsion = global.h1_torsion();
    let rhs_known = if global_torsion {
        let delta = LaurentFraction::new(global.delta1.clone(), global.delta0.clone())?;
        Some(delta.mul(&delta.conj()))
    } else {
        None
    };
    finish(alpha, locals, lhs, rhs_known, rho.is_unitary(), global_torsion)
}

/// Classical variant: `(t-1)^{1-χ(C)} ∏ Δ¹_k` against `(Δ¹)²`, trivial ρ, all `q = 1`.
pub fn corollary_check(pres: &Presentation, curve: &CurveData, eps: &Epsilon) -> Result<TheoremReport, CurveError> {
    curve.validate(pres, eps)?;
    if let Some(c) = curve.components.iter().find(|c| c.q != 1) {
        return Err(CurveError::CorollaryWeights(c.label.clone()));
    }
    let field = crate::coeff::CycloField::rationals();
    let rho = Representation::trivial(&field, pres.num_generators(), 1);
    let t_minus_1 = LaurentFraction::from_poly(LaurentPoly::from_ints(&field, 0, &[-1, 1]));
    let alpha = t_minus_1.pow(1 - curve.euler_characteristic())?;
    let locals = local_invariants(curve, eps, &rho)?;
    let lhs = locals.iter().try_fold(alpha.clone(), |acc, l| {
        l.h1_torsion().then(|| acc.mul(&LaurentFraction::from_poly(l.orders.delta1.clone())))
    });
    let global = homology_orders(&assemble_complex(pres, eps, &rho)?);
    let global_torsion = global.h1_torsion();
    let rhs_known = global_torsion.then(|| LaurentFraction::from_poly(global.delta1.pow(2)));
    finish(alpha, locals, lhs, rhs_known, true, global_torsion)
}

/// For curves with at least two components and torsion `H_1`, `Δ` should be a polynomial.
/// `None` when the statement does not apply; `Some(false)` is a discrepancy to flag.
pub fn polynomiality_holds(components: usize, report: &InvariantReport) -> Option<bool> {
    if components < 2 || !report.h1_torsion() {
        return None;
    }
    report.delta().map(|d| d.is_polynomial())
}

/// One row of a characteristic-variety scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub character: Character,
    /// `Δ¹`, or `0` when `H_1` is not torsion.
    pub delta1: LaurentPoly,
    /// `(t - 1) | Δ¹`, zero included.
    pub membership: bool,
}

/// Scans all rank-1 characters of order `N` with `ε ≡ 1`, in enumeration order.
pub fn cv_scan(pres: &Presentation, order: u32, cap: u64) -> Result<Vec<ScanEntry>, CurveError> {
    let chars = rank1_characters(pres, order, cap)?;
    let eps = Epsilon::all_ones(pres.num_generators());
    chars
        .into_par_iter()
        .map(|character| {
            let c = assemble_complex(pres, &eps, &character.representation)?;
            let h = homology_orders(&c);
            let field = character.representation.field().clone();
            let delta1 = if h.h1_torsion() { h.delta1.normalize_assoc() } else { LaurentPoly::zero(&field) };
            let t_minus_1 = LaurentPoly::from_ints(&field, 0, &[-1, 1]);
            let membership = t_minus_1.divides(&delta1);
            Ok(ScanEntry { character, delta1, membership })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CycloField, CycloMatrix};
    use crate::presentation::{
        infinity_extraction, local_group_extraction, zvk_presentation, BraidWord, MonodromyDatum, RelationMode,
    };

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&q(), s).unwrap()
    }

    fn zvk_curve(braid: &str, components: &[(i64, i64)]) -> (Presentation, CurveData) {
        let datum =
            MonodromyDatum::new(BraidWord::parse(2, braid).unwrap(), vec![Word::identity(); 2], 2, None).unwrap();
        let pres = zvk_presentation(2, std::slice::from_ref(&datum), RelationMode::Reduced).unwrap();
        let singularities = vec![
            Singularity { label: "P".into(), local: local_group_extraction(&datum).unwrap(), infinity: false },
            Singularity { label: "inf".into(), local: infinity_extraction(2, &[datum]).unwrap(), infinity: true },
        ];
        let components = components
            .iter()
            .enumerate()
            .map(|(i, &(chi, s))| CurveComponent {
                label: format!("c{}", i + 1),
                chi,
                q: 1,
                meridian: Word::generator(i),
                sing_count: s,
            })
            .collect();
        (pres, CurveData { components, singularities })
    }

    fn two_lines() -> (Presentation, CurveData) {
        zvk_curve("s1 s1", &[(1, 1), (1, 1)])
    }

    fn cuspidal_cubic() -> (Presentation, CurveData) {
        zvk_curve("s1 s1 s1", &[(1, 1)])
    }

    #[test]
    fn alpha_examples() {
        let (pres, curve) = two_lines();
        let rho = Representation::trivial(&q(), 2, 1);
        assert!(alpha_factor(&curve, &Epsilon::all_ones(2), &rho).unwrap().is_one());

        let mut curve = curve;
        curve.components[0].sing_count = 2;
        let alpha = alpha_factor(&curve, &Epsilon::all_ones(2), &rho).unwrap();
        assert_eq!(alpha, LaurentFraction::from_poly(p("t - 1")));

        let diag = Representation::new(vec![
            CycloMatrix::from_ints(&q(), &[&[1, 0], &[0, -1]]),
            CycloMatrix::from_ints(&q(), &[&[1, 0], &[0, 1]]),
        ])
        .unwrap();
        let alpha = alpha_factor(&curve, &Epsilon::all_ones(2), &diag).unwrap();
        assert_eq!(alpha, LaurentFraction::from_poly(p("t^2 - 1")));
        let _ = pres;
    }

    #[test]
    fn alpha_only_depends_on_the_meridian_class() {
        let (_, mut curve) = two_lines();
        curve.components[0].sing_count = 3;
        let diag = Representation::new(vec![
            CycloMatrix::from_ints(&q(), &[&[1, 0], &[0, -1]]),
            CycloMatrix::from_ints(&q(), &[&[0, 1], &[1, 0]]),
        ])
        .unwrap();
        let eps = Epsilon::all_ones(2);
        let before = alpha_factor(&curve, &eps, &diag).unwrap();
        curve.components[0].meridian = Word::generator(0).conjugate_by(&Word::from_signed(&[2, -1, 2]));
        assert_eq!(alpha_factor(&curve, &eps, &diag).unwrap(), before);
    }

    #[test]
    fn local_examples() {
        let (_, curve) = cuspidal_cubic();
        let locals = local_invariants(&curve, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        for l in &locals {
            assert_eq!(l.orders.delta1, p("t^2 - t + 1"));
            assert_eq!(l.delta().unwrap(), LaurentFraction::new(p("t^2 - t + 1"), p("t - 1")).unwrap());
        }
        let (_, curve) = two_lines();
        let locals = local_invariants(&curve, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        assert_eq!(locals[0].orders.delta1, p("t - 1"));
        assert!(locals[0].delta().unwrap().is_one());
    }

    #[test]
    fn non_torsion_local_fails_the_gate() {
        let (pres, mut curve) = two_lines();
        let free = Presentation::new(vec!["y1".into(), "y2".into()], vec![]).unwrap();
        curve.singularities[0].local =
            LocalGroup { presentation: free, inclusion: vec![Word::generator(0), Word::generator(1)] };
        let r = theorem_check(&pres, &curve, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        assert!(!r.locals_torsion);
        assert_eq!(r.divisible, None);
    }

    #[test]
    fn two_lines_residuals() {
        let (pres, curve) = two_lines();
        let eps = Epsilon::all_ones(2);
        let t = theorem_check(&pres, &curve, &eps, &Representation::trivial(&q(), 2, 1)).unwrap();
        let c = corollary_check(&pres, &curve, &eps).unwrap();
        assert!(t.residual.as_ref().unwrap().is_one());
        assert!(c.residual.as_ref().unwrap().is_one());
        assert_eq!(t.divisible, Some(true));
        assert_eq!(curve.euler_characteristic(), 1);
    }

    #[test]
    fn cuspidal_cubic_residuals() {
        let (pres, curve) = cuspidal_cubic();
        let eps = Epsilon::all_ones(2);
        let t = theorem_check(&pres, &curve, &eps, &Representation::trivial(&q(), 2, 1)).unwrap();
        let c = corollary_check(&pres, &curve, &eps).unwrap();
        assert!(t.residual.as_ref().unwrap().is_one());
        assert!(c.residual.as_ref().unwrap().is_one());
        assert_eq!(t.residual_self_conjugate, Some(true));
    }

    #[test]
    fn dropped_local_is_not_divisible() {
        let (pres, mut curve) = cuspidal_cubic();
        curve.singularities.remove(0);
        let t = theorem_check(&pres, &curve, &Epsilon::all_ones(2), &Representation::trivial(&q(), 2, 1)).unwrap();
        assert_eq!(t.divisible, Some(false));
    }

    #[test]
    fn miscounted_euler_characteristic() {
        let (pres, mut curve) = two_lines();
        curve.components[0].chi = 0;
        let c = corollary_check(&pres, &curve, &Epsilon::all_ones(2)).unwrap();
        assert_eq!(c.residual.unwrap(), LaurentFraction::from_poly(p("t - 1")));
        curve.components[0].chi = 2;
        let c = corollary_check(&pres, &curve, &Epsilon::all_ones(2)).unwrap();
        assert_eq!(c.residual.clone().unwrap(), LaurentFraction::new(p("1"), p("t - 1")).unwrap());
        assert_eq!(c.divisible, Some(false));
        // t - 1 is self-conjugate up to units
        assert_eq!(c.residual_self_conjugate, Some(true));
    }

    #[test]
    fn validation_errors() {
        let (pres, mut curve) = two_lines();
        let eps = Epsilon::all_ones(2);
        curve.components[0].q = 2;
        assert!(matches!(curve.validate(&pres, &eps), Err(CurveError::MeridianWeight { .. })));
        curve.components[0].q = 0;
        assert!(matches!(curve.validate(&pres, &eps), Err(CurveError::ZeroWeight(_))));
        let (pres, mut curve) = two_lines();
        curve.singularities[0].infinity = true;
        assert_eq!(curve.validate(&pres, &eps), Err(CurveError::Infinity(2)));
        let (pres, mut curve) = two_lines();
        curve.singularities[0].local.inclusion.pop();
        assert!(matches!(curve.validate(&pres, &eps), Err(CurveError::InclusionArity { .. })));
        let (pres, mut curve) = two_lines();
        curve.components[1].q = 3;
        curve.components[0].q = 3;
        let eps3 = Epsilon::new(vec![3, 3]);
        assert_eq!(curve.validate(&pres, &eps3), Err(CurveError::WeightGcd(3)));
    }

    #[test]
    fn scan_on_a_free_abelian_group() {
        let (pres, _) = two_lines();
        let scan = cv_scan(&pres, 2, 100).unwrap();
        assert_eq!(scan.len(), 4);
        // trivial character: classical Δ¹ = t - 1
        let f2 = CycloField::new(2).unwrap();
        assert_eq!(scan[0].delta1, LaurentPoly::parse(&f2, "t - 1").unwrap());
        assert!(scan[0].membership);
        assert_eq!(cv_scan(&pres, 1, 100).unwrap().len(), 1);
    }
}
