use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ncpoly::{Coeff, GeneratorId, MonomialOrder, NCPolynomial, Word};

/// Answer of a degree-truncated query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Inconclusive => "inconclusive",
        })
    }
}

/// Which occurrences of a leading word may be rewritten.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReductionMode {
    /// Any factor `a·lw·b`: division in the two-sided ideal.
    #[default]
    TwoSided,
    /// Suffix occurrences `a·lw` only: division in the left ideal.
    LeftOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub remainder: NCPolynomial,
    /// True iff at least one rewrite happened.
    pub reduced: bool,
}

/// Hash index from leading words to element positions.
#[derive(Clone, Debug, Default)]
pub(crate) struct LeadIndex {
    map: HashMap<Vec<GeneratorId>, usize>,
    max_len: usize,
    has_constant: bool,
}

impl LeadIndex {
    pub(crate) fn insert(&mut self, lead: &[GeneratorId], idx: usize) {
        if lead.is_empty() {
            self.has_constant = true;
        }
        self.max_len = self.max_len.max(lead.len());
        self.map.insert(lead.to_vec(), idx);
    }

    pub(crate) fn remove(&mut self, lead: &[GeneratorId]) {
        self.map.remove(lead);
    }

    pub(crate) fn has_constant(&self) -> bool {
        self.has_constant
    }

    /// Leftmost-shortest occurrence of any indexed word in `w`.
    pub(crate) fn find(&self, w: &[GeneratorId], mode: ReductionMode) -> Option<(usize, usize)> {
        let n = w.len();
        match mode {
            ReductionMode::TwoSided => {
                for start in 0..n {
                    for l in 1..=self.max_len.min(n - start) {
                        if let Some(&e) = self.map.get(&w[start..start + l]) {
                            return Some((e, start));
                        }
                    }
                }
                None
            }
            ReductionMode::LeftOnly => {
                for l in 1..=self.max_len.min(n) {
                    if let Some(&e) = self.map.get(&w[n - l..]) {
                        return Some((e, n - l));
                    }
                }
                None
            }
        }
    }

    pub(crate) fn find_all(&self, w: &[GeneratorId], mode: ReductionMode) -> Vec<(usize, usize)> {
        let n = w.len();
        let mut out = Vec::new();
        match mode {
            ReductionMode::TwoSided => {
                for start in 0..n {
                    for l in 1..=self.max_len.min(n - start) {
                        if let Some(&e) = self.map.get(&w[start..start + l]) {
                            out.push((e, start));
                        }
                    }
                }
            }
            ReductionMode::LeftOnly => {
                for l in 1..=self.max_len.min(n) {
                    if let Some(&e) = self.map.get(&w[n - l..]) {
                        out.push((e, n - l));
                    }
                }
            }
        }
        out
    }
}

/// Rewrites `f` by the monic elements in `elems` located through `index`.
///
/// Terms are processed from the largest word down; rewriting `w = a·lw·b`
/// only introduces words smaller than `w`, so anything moved to the remainder
/// is final.
pub(crate) fn reduce_by<F>(
    f: &NCPolynomial,
    elems: &[NCPolynomial],
    index: &LeadIndex,
    mut pick: F,
) -> ReductionResult
where
    F: FnMut(&[GeneratorId], &LeadIndex) -> Option<(usize, usize)>,
{
    if index.has_constant() {
        return ReductionResult { remainder: NCPolynomial::zero(), reduced: !f.is_zero() };
    }
    let mut todo: BTreeMap<Word, Coeff> = f.terms.clone();
    let mut rem: BTreeMap<Word, Coeff> = BTreeMap::new();
    let mut reduced = false;
    while let Some((w, c)) = todo.pop_last() {
        match pick(w.letters(), index) {
            None => {
                rem.insert(w, c);
            }
            Some((e, pos)) => {
                reduced = true;
                let g = &elems[e];
                let lead_len = g.leading_word().map_or(0, Word::len);
                let (a, rest) = w.letters().split_at(pos);
                let b = &rest[lead_len..];
                // g is monic: its leading term cancels c·w exactly.
                for (u, k) in g.terms.iter().rev().skip(1) {
                    let word = Word::sandwich(a, u.letters(), b);
                    let delta = -(&c * k);
                    match todo.entry(word) {
                        std::collections::btree_map::Entry::Vacant(v) => {
                            v.insert(delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut o) => {
                            *o.get_mut() += delta;
                            if o.get().is_zero() {
                                o.remove();
                            }
                        }
                    }
                }
            }
        }
    }
    ReductionResult { remainder: NCPolynomial { terms: rem }, reduced }
}

/// A (possibly truncated) interreduced noncommutative Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub(crate) elements: Vec<NCPolynomial>,
    pub(crate) order: MonomialOrder,
    pub(crate) degree_bound: usize,
    pub(crate) complete: bool,
    pub(crate) index: LeadIndex,
}

impl GroebnerBasis {
    /// Assembles a basis from monic elements; builds the lead index.
    pub fn from_parts(elements: Vec<NCPolynomial>, order: MonomialOrder, degree_bound: usize, complete: bool) -> Self {
        let mut index = LeadIndex::default();
        for (k, e) in elements.iter().enumerate() {
            if let Some(lw) = e.leading_word() {
                index.insert(lw.letters(), k);
            }
        }
        GroebnerBasis { elements, order, degree_bound, complete, index }
    }

    pub fn elements(&self) -> &[NCPolynomial] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_constant(&self) -> bool {
        self.elements.iter().any(NCPolynomial::is_nonzero_constant)
    }

    pub fn leading_words(&self) -> impl Iterator<Item = &Word> {
        self.elements.iter().filter_map(NCPolynomial::leading_word)
    }

    /// True iff no leading word occurs as a factor of `w`.
    pub fn is_normal_word(&self, w: &Word) -> bool {
        !self.index.has_constant() && self.index.find(w.letters(), ReductionMode::TwoSided).is_none()
    }

    pub fn normal_form(&self, f: &NCPolynomial) -> ReductionResult {
        self.normal_form_mode(f, ReductionMode::TwoSided)
    }

    pub fn normal_form_mode(&self, f: &NCPolynomial, mode: ReductionMode) -> ReductionResult {
        reduce_by(f, &self.elements, &self.index, |w, idx| idx.find(w, mode))
    }

    /// Normal form with the rewrite site drawn uniformly from all occurrences
    /// of all leading words. For a complete basis the result does not depend
    /// on the draws.
    pub fn normal_form_randomized<R: Rng>(&self, f: &NCPolynomial, rng: &mut R) -> ReductionResult {
        reduce_by(f, &self.elements, &self.index, |w, idx| {
            let all = idx.find_all(w, ReductionMode::TwoSided);
            if all.is_empty() {
                None
            } else {
                Some(all[rng.gen_range(0..all.len())])
            }
        })
    }
}

pub fn normal_form(f: &NCPolynomial, gb: &GroebnerBasis) -> ReductionResult {
    gb.normal_form(f)
}

/// Tri-state ideal membership.
pub fn ideal_contains(f: &NCPolynomial, gb: &GroebnerBasis) -> TriState {
    if gb.normal_form(f).remainder.is_zero() {
        TriState::Yes
    } else if gb.complete {
        TriState::No
    } else {
        TriState::Inconclusive
    }
}

/// Tri-state triviality of the ideal (`1 ∈ I`).
pub fn is_trivial(gb: &GroebnerBasis) -> TriState {
    if gb.contains_constant() {
        TriState::Yes
    } else if gb.complete {
        TriState::No
    } else {
        TriState::Inconclusive
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.order == other.order
            && self.degree_bound == other.degree_bound
            && self.complete == other.complete
    }
}
