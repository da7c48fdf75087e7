//! Job dispatch for the `twalex` command-line tool.
//!
//! Exit status: 0 on success, 1 on input or validation failure, 2 on engine failure.
//! Diagnostics go to the error stream as `CODE[ at LINE:COL]: message`.

pub mod report;

use std::path::PathBuf;

use twalex::alexander::{compute_invariants, AlexanderError, InvariantReport, Torsion, WadaOptions};
use twalex::curve::{corollary_check, cv_scan, polynomiality_holds, theorem_check, CurveError, TheoremReport};
use twalex::input::{emit_presentation, parse_document, Document, InputError};
use twalex::laurent::{LaurentError, LaurentFraction, LaurentPoly};
use twalex::presentation::{Provenance, RelationMode};
use twalex::repn::{validate, ValidationIssue, DEFAULT_CHARACTER_CAP};

pub use report::{Line, Report, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Compute,
    Braid2pres,
    Zvk,
    ScanCv,
    CheckTheorem,
    CheckCorollary,
    Validate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputMode {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub scan_order: u32,
    pub relations: RelationMode,
    pub cross_check: bool,
    pub max_minors: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            scan_order: 2,
            relations: RelationMode::Reduced,
            cross_check: false,
            max_minors: twalex::alexander::DEFAULT_MAX_MINORS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    pub output: OutputMode,
    pub options: Options,
}

/// What a run produced; the binary copies the streams and exits with `status`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub diagnostics: Vec<String>,
    /// Report printed before the failure, if any.
    pub partial: Option<Report>,
}

impl Failure {
    fn input(e: InputError) -> Self {
        Failure { status: 1, diagnostics: vec![e.to_string()], partial: None }
    }

    fn validation(code: &str, message: impl std::fmt::Display) -> Self {
        Failure { status: 1, diagnostics: vec![format!("{code}: {message}")], partial: None }
    }

    fn engine(code: &str, message: impl std::fmt::Display) -> Self {
        Failure { status: 2, diagnostics: vec![format!("{code}: {message}")], partial: None }
    }
}

pub fn run(job: &JobSpec) -> Outcome {
    match std::fs::read_to_string(&job.input) {
        Ok(text) => run_text(job, &text),
        Err(e) => Outcome {
            status: 1,
            stdout: String::new(),
            stderr: format!("E100: cannot read {}: {e}\n", job.input.display()),
        },
    }
}

/// Runs a job on document text already in memory; `job.input` is only used in messages.
pub fn run_text(job: &JobSpec, text: &str) -> Outcome {
    let result =
        parse_document(text, job.options.relations).map_err(Failure::input).and_then(|doc| dispatch(job, &doc));
    let render = |r: &Report| match job.output {
        OutputMode::Text => r.to_text(),
        OutputMode::Structured => r.to_json(),
    };
    match result {
        Ok(Rendered::Report(r)) => Outcome { status: 0, stdout: render(&r), stderr: String::new() },
        Ok(Rendered::Raw(s)) => Outcome { status: 0, stdout: s, stderr: String::new() },
        Err(f) => {
            let mut stderr = String::new();
            for d in &f.diagnostics {
                stderr.push_str(d);
                stderr.push('\n');
            }
            Outcome { status: f.status, stdout: f.partial.as_ref().map(render).unwrap_or_default(), stderr }
        }
    }
}

enum Rendered {
    Report(Report),
    Raw(String),
}

fn dispatch(job: &JobSpec, doc: &Document) -> Result<Rendered, Failure> {
    match job.command {
        Command::Validate => validate_job(doc).map(Rendered::Report),
        Command::Braid2pres => {
            emit_job(job, doc, Provenance::Closure, "braid2pres needs a [braid] table in closure mode")
        }
        Command::Zvk => emit_job(job, doc, Provenance::Zvk, "zvk needs a [braid] table with mode = \"zvk\""),
        Command::Compute => {
            check_twist(doc)?;
            compute_job(job, doc).map(Rendered::Report)
        }
        Command::ScanCv => scan_job(job, doc).map(Rendered::Report),
        Command::CheckTheorem | Command::CheckCorollary => {
            check_twist(doc)?;
            let curve =
                doc.curve.as_ref().ok_or_else(|| Failure::validation("E107", "this command needs a [curve] table"))?;
            let report = if job.command == Command::CheckTheorem {
                theorem_check(&doc.presentation, curve, &doc.epsilon, &doc.rho)
            } else {
                corollary_check(&doc.presentation, curve, &doc.epsilon)
            };
            report.map(|r| Rendered::Report(theorem_report(&r))).map_err(curve_failure)
        }
    }
}

fn issue_code(issue: &ValidationIssue) -> &'static str {
    match issue {
        ValidationIssue::EpsilonArity { .. } | ValidationIssue::RhoArity { .. } => "E204",
        ValidationIssue::EpsilonRelator { .. } => "E201",
        ValidationIssue::RhoRelator { .. } => "E202",
        ValidationIssue::NotSurjective { .. } => "E203",
    }
}

fn validation_diagnostics(doc: &Document) -> Vec<String> {
    let mut out: Vec<String> = validate(&doc.presentation, &doc.epsilon, &doc.rho)
        .issues
        .iter()
        .map(|i| format!("{}: {i}", issue_code(i)))
        .collect();
    if let Some(curve) = &doc.curve {
        if let Err(e) = curve.validate(&doc.presentation, &doc.epsilon) {
            out.push(format!("E210: {e}"));
        }
    }
    out
}

fn check_twist(doc: &Document) -> Result<(), Failure> {
    let diagnostics = validation_diagnostics(doc);
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(Failure { status: 1, diagnostics, partial: None })
    }
}

fn validate_job(doc: &Document) -> Result<Report, Failure> {
    let diagnostics = validation_diagnostics(doc);
    let mut r = Report::default();
    r.push("generators", Value::Int(doc.presentation.num_generators() as i64));
    r.push("relators", Value::Int(doc.presentation.relators().len() as i64));
    r.push("dim", Value::Int(doc.rho.dim() as i64));
    r.push("valid", Value::Bool(diagnostics.is_empty()));
    if diagnostics.is_empty() {
        Ok(r)
    } else {
        Err(Failure { status: 1, diagnostics, partial: Some(r) })
    }
}

fn emit_job(job: &JobSpec, doc: &Document, want: Provenance, missing: &str) -> Result<Rendered, Failure> {
    let p = &doc.presentation;
    if p.provenance() != want {
        return Err(Failure::validation("E107", missing));
    }
    Ok(match job.output {
        OutputMode::Text => Rendered::Raw(emit_presentation(p, doc.field.order())),
        OutputMode::Structured => {
            let mut r = Report::default();
            r.push("cyclotomic_order", Value::Int(i64::from(doc.field.order())));
            r.push("provenance", Value::text(p.provenance()));
            let gens = p
                .generators()
                .iter()
                .zip(p.component_of())
                .map(|(g, c)| {
                    let comp = c.map_or(Value::Undefined("unmarked".into()), |c| Value::text(&p.components()[c]));
                    Line::one("name", Value::text(g)).and("component", comp)
                })
                .collect();
            r.push("generators", Value::List(gens));
            let rels = p.relators().iter().map(|w| Line::one("word", Value::text(p.display_word(w)))).collect();
            r.push("relators", Value::List(rels));
            Rendered::Report(r)
        }
    })
}

fn poly(p: &LaurentPoly) -> Value {
    Value::text(p.normalize_assoc())
}

fn frac(f: &LaurentFraction) -> Value {
    Value::text(f)
}

fn alexander_failure(e: AlexanderError) -> Failure {
    match e {
        AlexanderError::Laurent(e @ LaurentError::TooManyMinors { .. }) => Failure::engine("E303", e),
        AlexanderError::NotAComplex => Failure::engine("E399", e),
        other => Failure::engine("E301", other),
    }
}

fn curve_failure(e: CurveError) -> Failure {
    match e {
        CurveError::Alexander(a) => alexander_failure(a),
        CurveError::Repn(r) => Failure::engine("E304", r),
        CurveError::ZeroWeight(_)
        | CurveError::WeightGcd(_)
        | CurveError::MeridianWeight { .. }
        | CurveError::MeridianGenerator(_)
        | CurveError::Infinity(_)
        | CurveError::InclusionArity { .. }
        | CurveError::InclusionGenerator(_)
        | CurveError::DuplicateLabel(_)
        | CurveError::CorollaryWeights(_) => Failure::validation("E210", e),
        other => Failure::engine("E302", other),
    }
}

fn compute_job(job: &JobSpec, doc: &Document) -> Result<Report, Failure> {
    let opts = WadaOptions { cross_check: job.options.cross_check, max_minors: Some(job.options.max_minors) };
    let inv = compute_invariants(&doc.presentation, &doc.epsilon, &doc.rho, &opts).map_err(alexander_failure)?;
    Ok(invariant_report(doc, &inv, job.options.cross_check))
}

/// The stable `compute` report.
pub fn invariant_report(doc: &Document, inv: &InvariantReport, cross_check: bool) -> Report {
    let p = &doc.presentation;
    let h = &inv.orders;
    let mut r = Report::default();
    r.push("generators", Value::Int(p.num_generators() as i64));
    r.push("relators", Value::Int(p.relators().len() as i64));
    r.push("dim", Value::Int(doc.rho.dim() as i64));
    r.push("cyclotomic_order", Value::Int(i64::from(doc.field.order())));
    r.push("delta0", poly(&h.delta0));
    r.push("delta1", poly(&h.delta1));
    r.push("delta2", poly(&h.delta2));
    r.push_line(
        Line::one("rank0", Value::Int(h.rank0 as i64))
            .and("rank1", Value::Int(h.rank1 as i64))
            .and("rank2", Value::Int(h.rank2 as i64)),
    );
    r.push("h1_torsion", Value::Bool(inv.h1_torsion()));
    r.push("acyclic", Value::Bool(inv.acyclic()));
    match &inv.wada {
        Ok(w) => {
            r.push("wada", frac(&w.value));
            r.push("wada_generator", Value::text(&p.generators()[w.index]));
            r.push("wada_too_few_relators", Value::Bool(w.too_few_relators));
            r.push("wada_case_rule_disagrees", Value::Bool(w.case_rule_disagrees));
            if cross_check {
                let choices = w
                    .all_choices
                    .iter()
                    .map(|(i, v)| Line::one("generator", Value::text(&p.generators()[*i])).and("wada", frac(v)))
                    .collect();
                r.push("wada_choices", Value::List(choices));
                r.push("choice_independent", Value::Bool(w.choice_independent().unwrap_or(true)));
            }
        }
        Err(e) => r.push("wada", Value::Undefined(e.to_string())),
    }
    r.push(
        "wada_matches_orders",
        inv.wada_matches_orders.map_or(Value::Undefined("H1 not torsion".into()), Value::Bool),
    );
    match &inv.torsion {
        Torsion::Defined(t) => r.push("torsion", frac(t)),
        Torsion::Undefined(reason) => r.push("torsion", Value::Undefined((*reason).into())),
    }
    if p.components().len() >= 2 {
        let verdict = polynomiality_holds(p.components().len(), inv);
        r.push("delta_polynomial", verdict.map_or(Value::Undefined("H1 not torsion".into()), Value::Bool));
    }
    r
}

fn scan_job(job: &JobSpec, doc: &Document) -> Result<Report, Failure> {
    let p = &doc.presentation;
    if !p.fully_marked() {
        return Err(Failure::validation("E205", "scan-cv needs every generator assigned to a component"));
    }
    let entries = cv_scan(p, job.options.scan_order, DEFAULT_CHARACTER_CAP).map_err(curve_failure)?;
    let mut r = Report::default();
    r.push("order", Value::Int(i64::from(job.options.scan_order)));
    r.push("components", Value::text(p.components().join(" ")));
    let rows = entries
        .iter()
        .map(|e| {
            let values: Vec<String> = (0..p.components().len())
                .map(|c| {
                    let g =
                        p.component_of().iter().position(|x| *x == Some(c)).expect("every component has a generator");
                    e.character.representation.image(g).get(0, 0).to_string()
                })
                .collect();
            Line::one("character", Value::text(e.character.label()))
                .and("value", Value::text(format!("({})", values.join(", "))))
                .and("delta1", poly(&e.delta1))
                .and("membership", Value::Bool(e.membership))
        })
        .collect();
    r.push("characters", Value::List(rows));
    Ok(r)
}

/// The stable `check-theorem` / `check-corollary` report.
pub fn theorem_report(t: &TheoremReport) -> Report {
    let missing = |what: &str| Value::Undefined(format!("{what} not torsion"));
    let mut r = Report::default();
    r.push("alpha", frac(&t.alpha));
    let locals = t
        .locals
        .iter()
        .map(|l| {
            Line::one("label", Value::text(&l.label))
                .and("infinity", Value::Bool(l.infinity))
                .and("delta1", poly(&l.orders.delta1))
                .and("delta", l.delta().filter(|_| l.h1_torsion()).map_or(missing("H1"), |d| frac(&d)))
        })
        .collect();
    r.push("locals", Value::List(locals));
    r.push("lhs", t.lhs.as_ref().map_or(missing("local H1"), frac));
    r.push("rhs_known", t.rhs_known.as_ref().map_or(missing("global H1"), frac));
    r.push_line(
        Line::one("residual", t.residual.as_ref().map_or(Value::Undefined("missing factor".into()), frac))
            .and("divisible", t.divisible.map_or(Value::Indeterminate, Value::Bool)),
    );
    r.push("unitary", Value::Bool(t.unitary));
    r.push("locals_torsion", Value::Bool(t.locals_torsion));
    r.push("global_torsion", Value::Bool(t.global_torsion));
    r.push("residual_self_conjugate", t.residual_self_conjugate.map_or(Value::Indeterminate, Value::Bool));
    r
}
