//! Free groups: reduced words, the integral group ring, and Fox derivatives.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

/// A generator `x_i` or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// From 1-based signed indices: `k > 0` is `x_k`, `k < 0` is `x_|k|^-1`.
    pub fn from_signed(letters: &[i64]) -> Self {
        Self::reduce(letters.iter().map(|&k| {
            assert!(k != 0, "signed generator indices are nonzero");
            Letter::new(k.unsigned_abs() as usize - 1, k < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `c * self * c^-1`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        c.mul(self).mul(&c.inverse())
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0; generators];
        for l in &self.0 {
            sums[l.generator] += l.exponent();
        }
        sums
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.generator];
            if l.inverse {
                out.extend(img.0.iter().rev().map(|x| x.inv()));
            } else {
                out.extend(img.0.iter().copied());
            }
        }
        Self::reduce(out)
    }

    /// Renders with generator names, inverses as `name^-1`; the identity is `"1"`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        // runs of one letter print as a power
        self.0
            .iter()
            .chunk_by(|l| **l)
            .into_iter()
            .map(|(l, run)| {
                let k = run.count() as i64 * l.exponent();
                match k {
                    1 => names[l.generator].clone(),
                    _ => format!("{}^{k}", names[l.generator]),
                }
            })
            .join(" ")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s = self.0.iter().map(|l| format!("x{}{}", l.generator + 1, if l.inverse { "'" } else { "" })).join("");
        write!(f, "{s}")
    }
}

/// `eps(w)` for weights given per generator.
pub fn eps_of_word(w: &Word, weights: &[i64]) -> i64 {
    w.letters().iter().map(|l| l.exponent() * weights[l.generator]).sum()
}

/// Element of the integral group ring `Z[F]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s = self.terms().map(|(w, c)| format!("{c}*{w:?}")).join(" + ");
        write!(f, "{s}")
    }
}

/// The Fox derivative `d w / d x_j`, computed in one left-to-right pass over prefixes:
/// a letter `x_j` contributes `+prefix`, a letter `x_j^-1` contributes `-prefix * x_j^-1`.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if l.generator == j {
            if l.inverse {
                let mut term = prefix.clone();
                term.push(l);
                out.add_term(Word::reduce(term), -1);
            } else {
                out.add_term(Word::reduce(prefix.iter().copied()), 1);
            }
        }
        prefix.push(l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(terms: &[(&[i64], i64)]) -> GroupRingElement {
        let mut e = GroupRingElement::zero();
        for (w, c) in terms {
            e.add_term(Word::from_signed(w), *c);
        }
        e
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(Word::from_signed(&[1, 2, -2]), Word::from_signed(&[1]));
        assert!(Word::from_signed(&[1, -1]).is_identity());
        assert_eq!(Word::from_signed(&[1, 2, -1, 1]), Word::from_signed(&[1, 2]));
        assert!(Word::from_signed(&[1, 2, -2, -1]).is_identity());
    }

    #[test]
    fn fox_examples() {
        assert_eq!(fox_derivative(&Word::from_signed(&[1, 2]), 0), ring(&[(&[], 1)]));
        assert_eq!(fox_derivative(&Word::from_signed(&[-1]), 0), ring(&[(&[-1], -1)]));
        let comm = Word::from_signed(&[1, 2, -1, -2]);
        assert_eq!(fox_derivative(&comm, 0), ring(&[(&[], 1), (&[1, 2, -1], -1)]));
        assert_eq!(fox_derivative(&comm, 1), ring(&[(&[1], 1), (&[1, 2, -1, -2], -1)]));
        assert!(fox_derivative(&Word::from_signed(&[2, 2]), 0).is_zero());
    }

    #[test]
    fn eps_examples() {
        assert_eq!(eps_of_word(&Word::from_signed(&[1, 2]), &[1, 1]), 2);
        assert_eq!(eps_of_word(&Word::from_signed(&[1, 2, -1, -2]), &[1, 1]), 0);
        assert_eq!(eps_of_word(&Word::from_signed(&[1, 1, 1]), &[2]), 6);
    }

    #[test]
    fn display_uses_names() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(Word::from_signed(&[1, -2]).display_with(&names), "a b^-1");
        assert_eq!(Word::identity().display_with(&names), "1");
    }

    fn arb_raw(gens: i64, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec((1..=gens, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..=max_len)
    }

    proptest! {
        #[test]
        fn fundamental_identity(raw in arb_raw(3, 12)) {
            let w = Word::from_signed(&raw);
            let mut total = GroupRingElement::zero();
            for j in 0..3 {
                let xj_minus_1 = ring(&[(&[j as i64 + 1], 1), (&[], -1)]);
                total = total.add(&fox_derivative(&w, j).mul(&xj_minus_1));
            }
            let expected = GroupRingElement::from_word(w).sub(&GroupRingElement::from_word(Word::identity()));
            prop_assert_eq!(total, expected);
        }

        #[test]
        fn product_rule(u in arb_raw(3, 8), v in arb_raw(3, 8), j in 0usize..3) {
            let (u, v) = (Word::from_signed(&u), Word::from_signed(&v));
            let lhs = fox_derivative(&u.mul(&v), j);
            let rhs = fox_derivative(&u, j).add(&GroupRingElement::from_word(u.clone()).mul(&fox_derivative(&v, j)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduce_is_idempotent_and_shrinks(raw in arb_raw(3, 16)) {
            let w = Word::from_signed(&raw);
            prop_assert!(w.len() <= raw.len());
            prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
            prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inv()));
        }
    }
}
