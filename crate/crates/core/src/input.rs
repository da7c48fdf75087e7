//! The TOML input document and its canonical emission.
//!
//! ```toml
//! cyclotomic_order = 1                 # coefficients in Q(ζ_n); 1 means Q
//! generators = ["a", { name = "b", component = "c2" }]
//! relators = ["a b a = b a b"]
//! epsilon = { a = 1, b = 1 }           # default: all ones
//! rho = { a = [["1", "0"], ["0", "-1"]], b = [["z", "0"], ["0", "1"]] }   # default: trivial, rank 1
//!
//! [braid]                              # instead of generators/relators
//! strands = 2
//! word = "s1 s1 s1"                    # mode = "closure" (default)
//! # mode = "zvk" with [[braid.monodromy]] entries {braid, conjugators, multiplicity, meridians?}
//!
//! [curve]
//! components = [{ label = "c1", chi = 1, q = 1, meridian = "a", sing_count = 1 }]
//! singularities = [{ label = "P", infinity = false, generators = [...], relators = [...], inclusion = { y1 = "a" } }]
//! ```
//!
//! Every error carries a stable code and, when it can be attributed, a 1-based line and column.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use toml::Spanned;

use crate::coeff::{CycloField, CycloMatrix};
use crate::curve::{CurveComponent, CurveData, Singularity};
use crate::expr::parse_coefficient;
use crate::freegroup::Word;
use crate::presentation::{
    closure_presentation, infinity_extraction, local_group_extraction, parse_word, zvk_presentation, BraidWord,
    LocalGroup, MonodromyDatum, Presentation, PresentationError, Provenance, RelationMode, WordError,
};
use crate::repn::{Epsilon, RepnError, Representation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub code: &'static str,
    pub message: String,
    /// 1-based line and column.
    pub location: Option<(usize, usize)>,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((line, col)) => write!(f, "{} at {line}:{col}: {}", self.code, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

impl std::error::Error for InputError {}

pub mod codes {
    pub const SYNTAX: &str = "E101";
    pub const UNKNOWN_GENERATOR: &str = "E102";
    pub const MALFORMED_WORD: &str = "E103";
    pub const DUPLICATE_NAME: &str = "E104";
    pub const COEFFICIENT: &str = "E105";
    pub const BRAID: &str = "E106";
    pub const MISSING: &str = "E107";
    pub const CONFLICT: &str = "E108";
    pub const INVALID_NAME: &str = "E109";
    pub const TWIST_NAMES: &str = "E110";
    pub const MATRIX: &str = "E111";
    pub const CURVE: &str = "E112";
    pub const FIELD: &str = "E113";
    pub const MONODROMY: &str = "E114";
}

/// A fully resolved input document.
#[derive(Clone, Debug)]
pub struct Document {
    pub field: CycloField,
    pub presentation: Presentation,
    pub epsilon: Epsilon,
    pub rho: Representation,
    pub curve: Option<CurveData>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    cyclotomic_order: Option<Spanned<u32>>,
    provenance: Option<Spanned<String>>,
    generators: Option<Spanned<Vec<RawGenerator>>>,
    relators: Option<Vec<Spanned<String>>>,
    braid: Option<Spanned<RawBraid>>,
    epsilon: Option<BTreeMap<Spanned<String>, i64>>,
    rho: Option<RawRho>,
    curve: Option<RawCurve>,
}

type RawRho = BTreeMap<Spanned<String>, Spanned<Vec<Vec<RawEntry>>>>;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGenerator {
    Name(String),
    Marked(MarkedGenerator),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkedGenerator {
    name: String,
    component: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum BraidMode {
    Closure,
    Zvk,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBraid {
    strands: usize,
    word: Option<Spanned<String>>,
    mode: Option<BraidMode>,
    monodromy: Option<Vec<Spanned<RawDatum>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    braid: Spanned<String>,
    conjugators: Option<Vec<Spanned<String>>>,
    multiplicity: usize,
    /// 1-based strand indices.
    meridians: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    components: Vec<Spanned<RawComponent>>,
    singularities: Option<Vec<Spanned<RawSingularity>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    label: String,
    chi: i64,
    q: i64,
    meridian: Option<Spanned<String>>,
    sing_count: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSingularity {
    label: String,
    #[serde(default)]
    infinity: bool,
    generators: Option<Vec<String>>,
    relators: Option<Vec<Spanned<String>>>,
    braid: Option<RawLocalBraid>,
    inclusion: BTreeMap<String, Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocalBraid {
    strands: usize,
    word: Spanned<String>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn location(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
        (line, col)
    }

    fn err(&self, code: &'static str, message: impl Into<String>, offset: Option<usize>) -> InputError {
        InputError { code, message: message.into(), location: offset.map(|o| self.location(o)) }
    }

    // byte offset of the first character inside a spanned string literal
    fn content_start(&self, span: std::ops::Range<usize>) -> usize {
        let rest = &self.text[span.start.min(self.text.len())..];
        if rest.starts_with("\"\"\"") || rest.starts_with("'''") {
            span.start + 3
        } else {
            span.start + 1
        }
    }

    fn word(&self, s: &Spanned<String>, names: &[String]) -> Result<Word, InputError> {
        parse_word(s.get_ref(), names).map_err(|e| {
            let at = self.content_start(s.span()) + e.offset();
            let code = match e {
                WordError::UnknownGenerator { .. } => codes::UNKNOWN_GENERATOR,
                WordError::Malformed { .. } => codes::MALFORMED_WORD,
            };
            self.err(code, e.to_string(), Some(at))
        })
    }

    fn braid(&self, strands: usize, s: &Spanned<String>) -> Result<BraidWord, InputError> {
        BraidWord::parse(strands, s.get_ref()).map_err(|e| {
            let at = match &e {
                crate::presentation::BraidError::Malformed { offset, .. } => self.content_start(s.span()) + offset,
                _ => s.span().start,
            };
            self.err(codes::BRAID, e.to_string(), Some(at))
        })
    }
}

fn presentation_error(ctx: &Ctx, e: PresentationError, at: Option<usize>) -> InputError {
    let code = match e {
        PresentationError::DuplicateGenerator(_) | PresentationError::DuplicateComponent(_) => codes::DUPLICATE_NAME,
        PresentationError::InvalidName(_) => codes::INVALID_NAME,
        _ => codes::MISSING,
    };
    ctx.err(code, e.to_string(), at)
}

/// Parses only the presentation part of a document.
pub fn parse_presentation(text: &str) -> Result<Presentation, InputError> {
    parse_document(text, RelationMode::Reduced).map(|d| d.presentation)
}

pub fn parse_document(text: &str, relations: RelationMode) -> Result<Document, InputError> {
    let ctx = Ctx { text };
    let raw: RawDocument = toml::from_str(text).map_err(|e| {
        let at = e.span().map(|s| s.start);
        ctx.err(codes::SYNTAX, e.message().trim().to_string(), at)
    })?;

    let order = raw.cyclotomic_order.as_ref().map_or(1, |o| *o.get_ref());
    let field = CycloField::new(order)
        .map_err(|e| ctx.err(codes::FIELD, e.to_string(), raw.cyclotomic_order.as_ref().map(|o| o.span().start)))?;

    let mut zvk_data: Option<(usize, Vec<MonodromyDatum>)> = None;
    let mut presentation = match (&raw.braid, &raw.relators) {
        (Some(b), Some(r)) => {
            let at = r.first().map_or(b.span().start, |s| s.span().start);
            return Err(ctx.err(codes::CONFLICT, "give either a braid or relators, not both", Some(at)));
        }
        (Some(b), None) => {
            let (pres, data) = braid_presentation(&ctx, b, relations)?;
            zvk_data = data;
            match &raw.generators {
                Some(g) => rename(&ctx, pres, g)?,
                None => pres,
            }
        }
        (None, relators) => {
            let gens = raw
                .generators
                .as_ref()
                .ok_or_else(|| ctx.err(codes::MISSING, "missing 'generators' (or a 'braid' table)", None))?;
            let (names, components, component_of) = split_generators(gens.get_ref());
            let at = Some(gens.span().start);
            // validate names before parsing words over them
            Presentation::with_components(
                names.clone(),
                components.clone(),
                component_of.clone(),
                vec![],
                Provenance::Manual,
            )
            .map_err(|e| presentation_error(&ctx, e, at))?;
            let relators = relators.iter().flatten().map(|s| ctx.word(s, &names)).collect::<Result<Vec<_>, _>>()?;
            Presentation::with_components(names, components, component_of, relators, Provenance::Manual)
                .map_err(|e| presentation_error(&ctx, e, at))?
        }
    };
    if let Some(p) = &raw.provenance {
        let prov = Provenance::parse(p.get_ref()).ok_or_else(|| {
            ctx.err(codes::SYNTAX, format!("unknown provenance '{}'", p.get_ref()), Some(p.span().start))
        })?;
        presentation = presentation.with_provenance(prov);
    }
    let names = presentation.generators().to_vec();

    let epsilon = match &raw.epsilon {
        None => Epsilon::all_ones(names.len()),
        Some(map) => {
            let mut weights = vec![None; names.len()];
            for (k, v) in map {
                let idx = names.iter().position(|n| n == k.get_ref()).ok_or_else(|| {
                    ctx.err(
                        codes::TWIST_NAMES,
                        format!("epsilon names unknown generator '{}'", k.get_ref()),
                        Some(k.span().start),
                    )
                })?;
                weights[idx] = Some(*v);
            }
            let weights = weights
                .into_iter()
                .zip(&names)
                .map(|(w, n)| {
                    w.ok_or_else(|| ctx.err(codes::TWIST_NAMES, format!("epsilon missing generator '{n}'"), None))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Epsilon::new(weights)
        }
    };

    let rho = match &raw.rho {
        None => Representation::trivial(&field, names.len(), 1),
        Some(map) => parse_rho(&ctx, &field, map, &names)?,
    };

    let curve = match &raw.curve {
        None => None,
        Some(c) => Some(parse_curve(&ctx, c, &presentation, zvk_data.as_ref())?),
    };

    Ok(Document { field, presentation, epsilon, rho, curve })
}

fn split_generators(gens: &[RawGenerator]) -> (Vec<String>, Vec<String>, Vec<Option<usize>>) {
    let mut names = Vec::new();
    let mut components: Vec<String> = Vec::new();
    let mut component_of = Vec::new();
    for g in gens {
        let (name, comp) = match g {
            RawGenerator::Name(n) => (n.clone(), None),
            RawGenerator::Marked(m) => (m.name.clone(), m.component.clone()),
        };
        names.push(name);
        component_of.push(comp.map(|c| match components.iter().position(|x| *x == c) {
            Some(i) => i,
            None => {
                components.push(c);
                components.len() - 1
            }
        }));
    }
    (names, components, component_of)
}

type ZvkData = (usize, Vec<MonodromyDatum>);

fn braid_presentation(
    ctx: &Ctx,
    b: &Spanned<RawBraid>,
    relations: RelationMode,
) -> Result<(Presentation, Option<ZvkData>), InputError> {
    let raw = b.get_ref();
    let at = Some(b.span().start);
    match raw.mode.unwrap_or(BraidMode::Closure) {
        BraidMode::Closure => {
            if raw.monodromy.is_some() {
                return Err(ctx.err(codes::CONFLICT, "'monodromy' requires mode = \"zvk\"", at));
            }
            let word = raw.word.as_ref().ok_or_else(|| ctx.err(codes::MISSING, "closure mode needs 'word'", at))?;
            let braid = ctx.braid(raw.strands, word)?;
            Ok((closure_presentation(&braid), None))
        }
        BraidMode::Zvk => {
            if let Some(w) = &raw.word {
                return Err(ctx.err(codes::CONFLICT, "zvk mode takes 'monodromy', not 'word'", Some(w.span().start)));
            }
            let d = raw.strands;
            if d == 0 {
                return Err(ctx.err(codes::BRAID, "a braid needs at least one strand", at));
            }
            let strand_names: Vec<String> = (1..=d).map(|i| format!("g{i}")).collect();
            let mut data = Vec::new();
            for datum in raw.monodromy.iter().flatten() {
                let dat = datum.get_ref();
                let braid = ctx.braid(d, &dat.braid)?;
                let conjugators = match &dat.conjugators {
                    Some(cs) => cs.iter().map(|c| ctx.word(c, &strand_names)).collect::<Result<Vec<_>, _>>()?,
                    None => vec![Word::identity(); dat.multiplicity],
                };
                let meridians = match &dat.meridians {
                    Some(ms) => Some(
                        ms.iter()
                            .map(|&i| {
                                i.checked_sub(1).ok_or_else(|| {
                                    ctx.err(codes::MONODROMY, "meridian indices are 1-based", Some(datum.span().start))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                let m = MonodromyDatum::new(braid, conjugators, dat.multiplicity, meridians)
                    .map_err(|e| ctx.err(codes::MONODROMY, e.to_string(), Some(datum.span().start)))?;
                data.push(m);
            }
            let pres =
                zvk_presentation(d, &data, relations).map_err(|e| ctx.err(codes::MONODROMY, e.to_string(), at))?;
            Ok((pres, Some((d, data))))
        }
    }
}

// explicit generator names (and optional components) for a compiled presentation
fn rename(ctx: &Ctx, pres: Presentation, gens: &Spanned<Vec<RawGenerator>>) -> Result<Presentation, InputError> {
    let at = Some(gens.span().start);
    if gens.get_ref().len() != pres.num_generators() {
        return Err(ctx.err(
            codes::CONFLICT,
            format!("{} generator names for a braid on {} strands", gens.get_ref().len(), pres.num_generators()),
            at,
        ));
    }
    let (names, components, component_of) = split_generators(gens.get_ref());
    let marked = component_of.iter().any(Option::is_some);
    let (components, component_of) =
        if marked { (components, component_of) } else { (pres.components().to_vec(), pres.component_of().to_vec()) };
    Presentation::with_components(names, components, component_of, pres.relators().to_vec(), pres.provenance())
        .map_err(|e| presentation_error(ctx, e, at))
}

fn parse_rho(ctx: &Ctx, field: &CycloField, map: &RawRho, names: &[String]) -> Result<Representation, InputError> {
    let mut images: Vec<Option<CycloMatrix>> = vec![None; names.len()];
    for (k, v) in map {
        let idx = names.iter().position(|n| n == k.get_ref()).ok_or_else(|| {
            ctx.err(codes::TWIST_NAMES, format!("rho names unknown generator '{}'", k.get_ref()), Some(k.span().start))
        })?;
        let at = Some(v.span().start);
        let rows = v
            .get_ref()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        RawEntry::Int(i) => Ok(field.from_int(*i)),
                        RawEntry::Text(s) => parse_coefficient(field, s).map_err(|err| {
                            ctx.err(codes::COEFFICIENT, format!("in rho({}): '{s}': {err}", k.get_ref()), at)
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m = CycloMatrix::from_rows(field, rows)
            .map_err(|_| ctx.err(codes::MATRIX, format!("rho({}) is not rectangular", k.get_ref()), at))?;
        images[idx] = Some(m);
    }
    let images = images
        .into_iter()
        .zip(names)
        .map(|(m, n)| m.ok_or_else(|| ctx.err(codes::TWIST_NAMES, format!("rho missing generator '{n}'"), None)))
        .collect::<Result<Vec<_>, _>>()?;
    Representation::new(images).map_err(|e| {
        let msg = match &e {
            RepnError::NotInvertible(g) => format!("rho({}) is not invertible", names[*g]),
            RepnError::Shape { generator, rows, cols, dim } => {
                format!("rho({}) is {rows}x{cols}, expected {dim}x{dim}", names[*generator])
            }
            other => other.to_string(),
        };
        ctx.err(codes::MATRIX, msg, None)
    })
}

fn parse_curve(ctx: &Ctx, raw: &RawCurve, pres: &Presentation, zvk: Option<&ZvkData>) -> Result<CurveData, InputError> {
    let names = pres.generators();
    let mut components = Vec::new();
    for c in &raw.components {
        let at = Some(c.span().start);
        let rc = c.get_ref();
        let meridian = match &rc.meridian {
            Some(w) => ctx.word(w, names)?,
            None => {
                // first generator marked with this component
                let comp = pres.components().iter().position(|l| *l == rc.label);
                let gen = comp.and_then(|ci| pres.component_of().iter().position(|c| *c == Some(ci)));
                gen.map(Word::generator).ok_or_else(|| {
                    ctx.err(codes::CURVE, format!("component '{}' needs a meridian word", rc.label), at)
                })?
            }
        };
        components.push(CurveComponent {
            label: rc.label.clone(),
            chi: rc.chi,
            q: rc.q,
            meridian,
            sing_count: rc.sing_count,
        });
    }

    let singularities = match (&raw.singularities, zvk) {
        (Some(list), _) => list.iter().map(|s| parse_singularity(ctx, s, names)).collect::<Result<Vec<_>, _>>()?,
        (None, Some((d, data))) => {
            let mut out = Vec::new();
            for (i, datum) in data.iter().enumerate() {
                let local = local_group_extraction(datum).map_err(|e| {
                    ctx.err(
                        codes::MONODROMY,
                        format!("singular point {}: {e}; give curve.singularities explicitly", i + 1),
                        None,
                    )
                })?;
                out.push(Singularity { label: format!("P{}", i + 1), local, infinity: false });
            }
            let local = infinity_extraction(*d, data).map_err(|e| ctx.err(codes::MONODROMY, e.to_string(), None))?;
            out.push(Singularity { label: "infinity".into(), local, infinity: true });
            out
        }
        (None, None) => {
            return Err(ctx.err(codes::CURVE, "curve.singularities is required unless the braid mode is zvk", None));
        }
    };
    Ok(CurveData { components, singularities })
}

fn parse_singularity(ctx: &Ctx, s: &Spanned<RawSingularity>, global: &[String]) -> Result<Singularity, InputError> {
    let at = Some(s.span().start);
    let raw = s.get_ref();
    let presentation = match (&raw.braid, &raw.generators) {
        (Some(_), Some(_)) => {
            return Err(ctx.err(
                codes::CONFLICT,
                format!("singularity '{}': give a braid or generators", raw.label),
                at,
            ));
        }
        (Some(b), None) => {
            if raw.relators.is_some() {
                return Err(ctx.err(
                    codes::CONFLICT,
                    format!("singularity '{}': relators with a braid", raw.label),
                    at,
                ));
            }
            let braid = ctx.braid(b.strands, &b.word)?;
            let closure = closure_presentation(&braid);
            let names = (1..=closure.num_generators()).map(|i| format!("y{i}")).collect();
            Presentation::with_components(
                names,
                closure.components().to_vec(),
                closure.component_of().to_vec(),
                closure.relators().to_vec(),
                Provenance::Closure,
            )
            .map_err(|e| presentation_error(ctx, e, at))?
        }
        (None, Some(gens)) => {
            Presentation::new(gens.clone(), vec![]).map_err(|e| presentation_error(ctx, e, at))?;
            let relators = raw.relators.iter().flatten().map(|r| ctx.word(r, gens)).collect::<Result<Vec<_>, _>>()?;
            Presentation::new(gens.clone(), relators).map_err(|e| presentation_error(ctx, e, at))?
        }
        (None, None) => {
            return Err(ctx.err(
                codes::MISSING,
                format!("singularity '{}' needs a braid or generators", raw.label),
                at,
            ));
        }
    };
    let mut inclusion = Vec::new();
    for name in presentation.generators() {
        let w = raw.inclusion.get(name).ok_or_else(|| {
            ctx.err(codes::CURVE, format!("singularity '{}': inclusion misses '{name}'", raw.label), at)
        })?;
        inclusion.push(ctx.word(w, global)?);
    }
    if let Some(extra) = raw.inclusion.keys().find(|k| presentation.generator_index(k).is_none()) {
        return Err(ctx.err(
            codes::CURVE,
            format!("singularity '{}': inclusion names unknown '{extra}'", raw.label),
            at,
        ));
    }
    Ok(Singularity { label: raw.label.clone(), local: LocalGroup { presentation, inclusion }, infinity: raw.infinity })
}

/// Canonical document text for a presentation; parsing it back yields an equal presentation.
pub fn emit_presentation(p: &Presentation, cyclotomic_order: u32) -> String {
    let mut out = String::new();
    out.push_str(&format!("cyclotomic_order = {cyclotomic_order}\n"));
    out.push_str(&format!("provenance = \"{}\"\n", p.provenance()));
    out.push_str("generators = [\n");
    for (g, c) in p.generators().iter().zip(p.component_of()) {
        match c {
            Some(ci) => out.push_str(&format!("  {{ name = \"{g}\", component = \"{}\" }},\n", p.components()[*ci])),
            None => out.push_str(&format!("  \"{g}\",\n")),
        }
    }
    out.push_str("]\n");
    out.push_str("relators = [\n");
    for r in p.relators() {
        out.push_str(&format!("  \"{}\",\n", p.display_word(r)));
    }
    out.push_str("]\n");
    out
}
