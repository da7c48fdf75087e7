//! Finite group presentations, the word syntax, braids and the presentation compilers.

mod braid;
mod words;
mod zvk;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::freegroup::Word;

pub use braid::{closure_presentation, BraidError, BraidWord};
pub use words::{parse_word, WordError};
pub use zvk::{
    infinity_extraction, local_group_extraction, zvk_presentation, LocalGroup, MonodromyDatum, RelationMode, ZvkError,
};

/// Where a presentation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Manual,
    Closure,
    Zvk,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Manual => "manual",
            Provenance::Closure => "closure",
            Provenance::Zvk => "zvk",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "manual" => Some(Provenance::Manual),
            "closure" => Some(Provenance::Closure),
            "zvk" => Some(Provenance::Zvk),
            _ => None,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),
    #[error("duplicate component label '{0}'")]
    DuplicateComponent(String),
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("relator {relator} uses generator index {index} but only {count} are declared")]
    UndeclaredGenerator { relator: usize, index: usize, count: usize },
    #[error("component index {index} out of range for generator '{generator}'")]
    UnknownComponent { generator: String, index: usize },
    #[error("component_of has {got} entries for {expected} generators")]
    ComponentArity { got: usize, expected: usize },
}

/// `<generators | relators>`, optionally with each generator marked as a meridian of a component.
///
/// Invariant: relators only use declared generators; every `component_of` entry indexes `components`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    components: Vec<String>,
    component_of: Vec<Option<usize>>,
    relators: Vec<Word>,
    provenance: Provenance,
}

/// Names must be usable in the word syntax: a letter followed by letters, digits or `_`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let n = generators.len();
        Self::with_components(generators, Vec::new(), vec![None; n], relators, Provenance::Manual)
    }

    pub fn with_components(
        generators: Vec<String>,
        components: Vec<String>,
        component_of: Vec<Option<usize>>,
        relators: Vec<Word>,
        provenance: Provenance,
    ) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !is_valid_name(g) {
                return Err(PresentationError::InvalidName(g.clone()));
            }
            if !seen.insert(g.as_str()) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for c in &components {
            if !is_valid_name(c) {
                return Err(PresentationError::InvalidName(c.clone()));
            }
            if !seen.insert(c.as_str()) {
                return Err(PresentationError::DuplicateComponent(c.clone()));
            }
        }
        if component_of.len() != generators.len() {
            return Err(PresentationError::ComponentArity { got: component_of.len(), expected: generators.len() });
        }
        for (g, c) in generators.iter().zip(&component_of) {
            if let Some(idx) = *c {
                if idx >= components.len() {
                    return Err(PresentationError::UnknownComponent { generator: g.clone(), index: idx });
                }
            }
        }
        for (k, r) in relators.iter().enumerate() {
            if let Some(idx) = r.max_generator() {
                if idx >= generators.len() {
                    return Err(PresentationError::UndeclaredGenerator {
                        relator: k,
                        index: idx,
                        count: generators.len(),
                    });
                }
            }
        }
        Ok(Presentation { generators, components, component_of, relators, provenance })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn component_of(&self) -> &[Option<usize>] {
        &self.component_of
    }

    /// True when every generator carries a component label.
    pub fn fully_marked(&self) -> bool {
        !self.components.is_empty() && self.component_of.iter().all(Option::is_some)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Replaces the component marking.
    pub fn relabel(self, components: Vec<String>, component_of: Vec<Option<usize>>) -> Result<Self, PresentationError> {
        Self::with_components(self.generators, components, component_of, self.relators, self.provenance)
    }

    /// Drops trivial relators. Words are already freely reduced; generators are never eliminated.
    pub fn simplify(mut self) -> Self {
        self.relators.retain(|r| !r.is_identity());
        self
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        parse_word(text, &self.generators)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_duplicates_and_undeclared() {
        assert_eq!(
            Presentation::new(names(&["a", "a"]), vec![]),
            Err(PresentationError::DuplicateGenerator("a".into()))
        );
        assert!(matches!(
            Presentation::new(names(&["a"]), vec![Word::from_signed(&[2])]),
            Err(PresentationError::UndeclaredGenerator { .. })
        ));
        assert!(Presentation::new(names(&["1a"]), vec![]).is_err());
    }

    #[test]
    fn simplify_drops_trivial_relators() {
        let p = Presentation::new(names(&["a", "b"]), vec![Word::identity(), Word::from_signed(&[1, 2])]).unwrap();
        assert_eq!(p.simplify().relators().len(), 1);
    }

    #[test]
    fn empty_relator_list_is_free() {
        let p = Presentation::new(names(&["a", "b"]), vec![]).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert!(p.relators().is_empty());
    }
}
