//! Zariski–van Kampen compilation from braid monodromy data.

use thiserror::Error;

use super::braid::cycle_components;
use super::{closure_presentation, BraidError, BraidWord, Presentation, Provenance};
use crate::freegroup::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZvkError {
    #[error("multiplicity {multiplicity} outside 1..={strands}")]
    Multiplicity { multiplicity: usize, strands: usize },
    #[error("{conjugators} conjugators given for multiplicity {multiplicity}")]
    ConjugatorCount { conjugators: usize, multiplicity: usize },
    #[error("{meridians} local meridians given for multiplicity {multiplicity}")]
    MeridianCount { meridians: usize, multiplicity: usize },
    #[error("local meridian index {index} repeated or out of range for {strands} strands")]
    MeridianIndex { index: usize, strands: usize },
    #[error("conjugator uses generator {index} beyond {strands} strands")]
    ConjugatorGenerator { index: usize, strands: usize },
    #[error("datum braid has {got} strands, expected {expected}")]
    StrandMismatch { got: usize, expected: usize },
    #[error("local meridians {0:?} are not a contiguous block of strands")]
    NotContiguous(Vec<usize>),
    #[error("braid moves strands outside its local meridians")]
    BraidLeavesBlock(#[source] BraidError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

/// Which of the monodromy relations to emit for each datum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationMode {
    /// `k = 1..m-1`; the last relation is a consequence of the others.
    #[default]
    Reduced,
    /// `k = 1..m`, kept to cross-check that redundancy.
    Full,
}

/// Local monodromy at one critical value: the braid, the conjugating words `ω_k`,
/// and the strands `γ_{idx_k}` that collapse there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyDatum {
    braid: BraidWord,
    conjugators: Vec<Word>,
    meridians: Vec<usize>,
}

impl MonodromyDatum {
    /// Without explicit meridians, the `m` strands starting at the lowest strand the braid moves.
    pub fn new(
        braid: BraidWord,
        conjugators: Vec<Word>,
        multiplicity: usize,
        meridians: Option<Vec<usize>>,
    ) -> Result<Self, ZvkError> {
        let d = braid.strands();
        if multiplicity == 0 || multiplicity > d {
            return Err(ZvkError::Multiplicity { multiplicity, strands: d });
        }
        if conjugators.len() != multiplicity {
            return Err(ZvkError::ConjugatorCount { conjugators: conjugators.len(), multiplicity });
        }
        if let Some(index) = conjugators.iter().filter_map(Word::max_generator).find(|&i| i >= d) {
            return Err(ZvkError::ConjugatorGenerator { index, strands: d });
        }
        let meridians = match meridians {
            Some(m) => m,
            None => {
                let lo = braid.touched_range().map_or(0, |(lo, _)| lo).min(d - multiplicity);
                (lo..lo + multiplicity).collect()
            }
        };
        if meridians.len() != multiplicity {
            return Err(ZvkError::MeridianCount { meridians: meridians.len(), multiplicity });
        }
        for (k, &i) in meridians.iter().enumerate() {
            if i >= d || meridians[..k].contains(&i) {
                return Err(ZvkError::MeridianIndex { index: i, strands: d });
            }
        }
        Ok(MonodromyDatum { braid, conjugators, meridians })
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn conjugators(&self) -> &[Word] {
        &self.conjugators
    }

    pub fn meridians(&self) -> &[usize] {
        &self.meridians
    }

    pub fn multiplicity(&self) -> usize {
        self.meridians.len()
    }

    /// `γ̃_k = ω_k γ_{idx_k} ω_k^-1`.
    pub fn twisted_meridian(&self, k: usize) -> Word {
        Word::generator(self.meridians[k]).conjugate_by(&self.conjugators[k])
    }
}

/// `<g1..gd | σ_i(γ̃_{i,k}) γ̃_{i,k}^-1>`. Components are the orbits of the strands under
/// the permutations of all data braids.
pub fn zvk_presentation(d: usize, data: &[MonodromyDatum], mode: RelationMode) -> Result<Presentation, ZvkError> {
    let mut relators = Vec::new();
    let mut parent: Vec<usize> = (0..d).collect();
    for datum in data {
        let b = datum.braid();
        if b.strands() != d {
            return Err(ZvkError::StrandMismatch { got: b.strands(), expected: d });
        }
        let images = b.artin_images();
        let m = datum.multiplicity();
        let count = match mode {
            RelationMode::Reduced => m - 1,
            RelationMode::Full => m,
        };
        for k in 0..count {
            let g = datum.twisted_meridian(k);
            relators.push(g.substitute(&images).mul(&g.inverse()));
        }
        for (i, &j) in b.permutation().iter().enumerate() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; d];
    for i in 0..d {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = cycles.len();
            cycles.push(Vec::new());
        }
        cycles[root_slot[r]].push(i);
    }
    let (components, component_of) = cycle_components(&cycles, d);
    let generators = (1..=d).map(|i| format!("g{i}")).collect();
    let p = Presentation::with_components(generators, components, component_of, relators, Provenance::Zvk)
        .expect("compiled presentation is well formed");
    Ok(p.simplify())
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// A local link group together with the word map into the global group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGroup {
    pub presentation: Presentation,
    /// `inclusion[k]` is the global word for local generator `k`.
    pub inclusion: Vec<Word>,
}

/// The link of the singular point: closure of the datum braid restricted to its local strands,
/// with `y_k ↦ ω_k γ_{idx_k} ω_k^-1`.
pub fn local_group_extraction(datum: &MonodromyDatum) -> Result<LocalGroup, ZvkError> {
    let m = datum.multiplicity();
    let lo = *datum.meridians().iter().min().expect("multiplicity >= 1");
    let contiguous = datum.meridians().iter().enumerate().all(|(k, &i)| i == lo + k);
    if !contiguous {
        return Err(ZvkError::NotContiguous(datum.meridians().to_vec()));
    }
    let local = datum.braid().restrict(lo, m).map_err(ZvkError::BraidLeavesBlock)?;
    let presentation = rename_local(closure_presentation(&local));
    let inclusion = (0..m).map(|k| datum.twisted_meridian(k)).collect();
    Ok(LocalGroup { presentation, inclusion })
}

/// The link at infinity: closure of the product of the data braids (in the given order),
/// assuming they are the full monodromy around every critical value. Inclusion `y_j ↦ γ_j`.
pub fn infinity_extraction(d: usize, data: &[MonodromyDatum]) -> Result<LocalGroup, ZvkError> {
    let mut total = BraidWord::identity(d)?;
    for datum in data {
        if datum.braid().strands() != d {
            return Err(ZvkError::StrandMismatch { got: datum.braid().strands(), expected: d });
        }
        total = total.mul(datum.braid());
    }
    let presentation = rename_local(closure_presentation(&total));
    let inclusion = (0..d).map(Word::generator).collect();
    Ok(LocalGroup { presentation, inclusion })
}

fn rename_local(p: Presentation) -> Presentation {
    let names = (1..=p.num_generators()).map(|i| format!("y{i}")).collect();
    Presentation::with_components(
        names,
        p.components().to_vec(),
        p.component_of().to_vec(),
        p.relators().to_vec(),
        p.provenance(),
    )
    .expect("renaming keeps validity")
}
