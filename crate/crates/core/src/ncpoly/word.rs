use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A hermitian projection generator `x[input, output]`, both indices 0-based.
///
/// The derived ordering is the generator precedence used by the monomial
/// order: first by input, then by output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorId {
    pub input: u16,
    pub output: u16,
}

impl GeneratorId {
    pub fn new(input: usize, output: usize) -> Self {
        GeneratorId {
            input: u16::try_from(input).expect("input index exceeds u16"),
            output: u16::try_from(output).expect("output index exceeds u16"),
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.input, self.output)
    }
}

pub(crate) type Letters = SmallVec<[GeneratorId; 6]>;

/// A monomial in the free algebra. The empty word is the identity.
///
/// `Ord` is the graded lexicographic order: shorter words are smaller, words
/// of equal length compare letter by letter from the left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub(crate) Letters);

impl Word {
    pub fn one() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(g: GeneratorId) -> Self {
        let mut v = SmallVec::new();
        v.push(g);
        Word(v)
    }

    pub fn from_letters<I: IntoIterator<Item = GeneratorId>>(it: I) -> Self {
        Word(it.into_iter().collect())
    }

    pub fn letters(&self) -> &[GeneratorId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Letters::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `a · self · b` without intermediate allocations.
    pub fn sandwich(a: &[GeneratorId], mid: &[GeneratorId], b: &[GeneratorId]) -> Word {
        let mut v = Letters::with_capacity(a.len() + mid.len() + b.len());
        v.extend_from_slice(a);
        v.extend_from_slice(mid);
        v.extend_from_slice(b);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// First position at which `factor` occurs as a contiguous subword.
    pub fn find_factor(&self, factor: &[GeneratorId]) -> Option<usize> {
        if factor.len() > self.len() {
            return None;
        }
        if factor.is_empty() {
            return Some(0);
        }
        self.0.windows(factor.len()).position(|w| w == factor)
    }

    pub fn contains_factor(&self, factor: &[GeneratorId]) -> bool {
        self.find_factor(factor).is_some()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Monomial orders available for Gröbner computations. Only the graded
/// lexicographic order with `(input, output)` generator precedence exists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    #[default]
    GradedLex,
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::GradedLex => write!(f, "deglex"),
        }
    }
}

pub fn compare_words(w1: &Word, w2: &Word, ord: MonomialOrder) -> Ordering {
    match ord {
        MonomialOrder::GradedLex => w1.cmp(w2),
    }
}
