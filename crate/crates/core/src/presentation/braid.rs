//! Braid words and the Artin action on the free group of the strands.
//!
//! `σ_k` acts by `x_k ↦ x_k x_{k+1} x_k^-1`, `x_{k+1} ↦ x_k`, and a word acts as the
//! composite automorphism with the leftmost letter applied last: `φ_{uv} = φ_u ∘ φ_v`.

use std::fmt;

use thiserror::Error;

use super::{Presentation, Provenance};
use crate::freegroup::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("a braid needs at least one strand")]
    NoStrands,
    #[error("Artin generator {index} out of range for {strands} strands")]
    OutOfRange { index: i64, strands: usize },
    #[error("malformed braid word at offset {offset}: {message}")]
    Malformed { message: String, offset: usize },
}

/// A word in the Artin generators `σ_1..σ_{d-1}`; letter `±k` is `σ_k^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(&bad) = letters.iter().find(|&&k| k == 0 || k.unsigned_abs() as usize >= strands) {
            return Err(BraidError::OutOfRange { index: bad, strands });
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, Vec::new())
    }

    /// Parses `"s1 s2^-1 S1 s3^2"`; `S_k` is the inverse of `s_k`, `*` may separate letters.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        let bytes = text.as_bytes();
        let mut letters = Vec::new();
        let mut pos = 0;
        let malformed = |message: &str, offset| BraidError::Malformed { message: message.into(), offset };
        while pos < bytes.len() {
            let c = bytes[pos];
            if c.is_ascii_whitespace() || c == b'*' {
                pos += 1;
                continue;
            }
            let sign = match c {
                b's' => 1,
                b'S' => -1,
                _ => return Err(malformed("expected 's' or 'S'", pos)),
            };
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let k: i64 = text[start..pos].parse().map_err(|_| malformed("expected a generator index", start))?;
            let mut power = 1i64;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let neg = pos < bytes.len() && bytes[pos] == b'-';
                if neg {
                    pos += 1;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                power = text[start..pos].parse().map_err(|_| malformed("expected an exponent", start))?;
                if power > 10_000 {
                    return Err(malformed("exponent too large", start));
                }
                if neg {
                    power = -power;
                }
            }
            if k == 0 || k as usize >= strands.max(1) {
                return Err(BraidError::OutOfRange { index: k, strands });
            }
            let letter = if (sign < 0) ^ (power < 0) { -k } else { k };
            letters.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
        }
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.strands, other.strands, "braids on different strand counts");
        let letters = self.letters.iter().chain(&other.letters).copied().collect();
        BraidWord { strands: self.strands, letters }
    }

    pub fn inverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|k| -k).collect() }
    }

    /// Strand permutation: `perm[i]` is where strand `i` ends up.
    pub fn permutation(&self) -> Vec<usize> {
        let mut pos_of: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let k = k.unsigned_abs() as usize - 1;
            for p in pos_of.iter_mut() {
                if *p == k {
                    *p = k + 1;
                } else if *p == k + 1 {
                    *p = k;
                }
            }
        }
        pos_of
    }

    /// Cycles of the permutation, each listed from its smallest strand, ordered by that strand.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut out = Vec::new();
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = perm[i];
            }
            cycle.sort_unstable();
            out.push(cycle);
        }
        out
    }

    /// Smallest and largest strand (0-based) moved by some letter.
    pub fn touched_range(&self) -> Option<(usize, usize)> {
        let lo = self.letters.iter().map(|k| k.unsigned_abs() as usize - 1).min()?;
        let hi = self.letters.iter().map(|k| k.unsigned_abs() as usize).max()?;
        Some((lo, hi))
    }

    /// The same letters on `strands` strands with indices shifted down by `offset`.
    pub fn restrict(&self, offset: usize, strands: usize) -> Result<Self, BraidError> {
        let letters = self
            .letters
            .iter()
            .map(|&k| {
                let a = k.unsigned_abs() as usize;
                if a <= offset || a - offset >= strands {
                    Err(BraidError::OutOfRange { index: k, strands })
                } else {
                    Ok(k.signum() * (a - offset) as i64)
                }
            })
            .collect::<Result<_, _>>()?;
        Self::new(strands, letters)
    }

    /// Images of `x_1..x_d` under the automorphism of the whole word.
    pub fn artin_images(&self) -> Vec<Word> {
        let mut table: Vec<Word> = (0..self.strands).map(Word::generator).collect();
        for &k in &self.letters {
            let step = generator_images(self.strands, k);
            table = step.iter().map(|w| w.substitute(&table)).collect();
        }
        table
    }

    /// The image of `w` under the braid's automorphism.
    pub fn act(&self, w: &Word) -> Word {
        w.substitute(&self.artin_images())
    }
}

// images of the generators under a single σ_k^{±1}
fn generator_images(strands: usize, letter: i64) -> Vec<Word> {
    let k = letter.unsigned_abs() as usize - 1;
    let x = |i: usize| Word::generator(i);
    let mut images: Vec<Word> = (0..strands).map(x).collect();
    if letter > 0 {
        images[k] = x(k).mul(&x(k + 1)).mul(&x(k).inverse());
        images[k + 1] = x(k);
    } else {
        images[k] = x(k + 1);
        images[k + 1] = x(k + 1).inverse().mul(&x(k)).mul(&x(k + 1));
    }
    images
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &k in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", if k > 0 { 's' } else { 'S' }, k.unsigned_abs())?;
        }
        Ok(())
    }
}

/// `<g1..gd | φ_b(g_j) g_j^-1, j < d>`: the last relation is redundant and dropped.
/// Components follow the cycles of the braid permutation.
pub fn closure_presentation(b: &BraidWord) -> Presentation {
    let d = b.strands();
    let images = b.artin_images();
    let relators = (0..d.saturating_sub(1)).map(|j| images[j].mul(&Word::generator(j).inverse())).collect();
    let generators = (1..=d).map(|i| format!("g{i}")).collect();
    let (components, component_of) = cycle_components(&b.cycles(), d);
    Presentation::with_components(generators, components, component_of, relators, Provenance::Closure)
        .expect("compiled presentation is well formed")
        .simplify()
}

pub(super) fn cycle_components(cycles: &[Vec<usize>], d: usize) -> (Vec<String>, Vec<Option<usize>>) {
    let mut component_of = vec![None; d];
    for (c, cycle) in cycles.iter().enumerate() {
        for &i in cycle {
            component_of[i] = Some(c);
        }
    }
    let labels = (1..=cycles.len()).map(|i| format!("c{i}")).collect();
    (labels, component_of)
}
