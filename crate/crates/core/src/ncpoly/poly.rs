use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::word::{GeneratorId, Word};
use super::Coeff;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Coeff {
    Coeff::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(v))
}

/// Exact rational linear combination of words.
///
/// Terms are stored in a `BTreeMap` keyed by the graded lexicographic order, so
/// the leading term is the last entry. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCPolynomial {
    pub(crate) terms: BTreeMap<Word, Coeff>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        NCPolynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(Word::one(), c)
    }

    pub fn generator(input: usize, output: usize) -> Self {
        Self::monomial(Word::letter(GeneratorId::new(input, output)), Coeff::one())
    }

    pub fn monomial(w: Word, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPolynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Coeff)>>(it: I) -> Self {
        let mut p = NCPolynomial::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn leading_term(&self) -> Option<(&Word, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl DoubleEndedIterator<Item = &Word> {
        self.terms.keys()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Word::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains_key(&Word::one())
    }

    pub fn add_term(&mut self, w: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · a · other · b`.
    pub fn add_scaled_sandwich(&mut self, c: &Coeff, a: &[GeneratorId], other: &NCPolynomial, b: &[GeneratorId]) {
        for (w, k) in other.terms.iter() {
            self.add_term(Word::sandwich(a, w.letters(), b), c * k);
        }
    }

    pub fn scale(&self, c: &Coeff) -> NCPolynomial {
        if c.is_zero() {
            return NCPolynomial::zero();
        }
        NCPolynomial {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> NCPolynomial {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn multiply(&self, other: &NCPolynomial) -> NCPolynomial {
        let mut out = NCPolynomial::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// The involution: words reversed, rational coefficients unchanged since
    /// every generator is hermitian.
    pub fn involute(&self) -> NCPolynomial {
        NCPolynomial {
            terms: self.terms.iter().map(|(w, c)| (w.reversed(), c.clone())).collect(),
        }
    }

    pub fn commutator(&self, other: &NCPolynomial) -> NCPolynomial {
        &self.multiply(other) - &other.multiply(self)
    }

    /// Largest input and output index used, if any generator occurs.
    pub fn generator_bounds(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for w in self.terms.keys() {
            for g in w.letters() {
                let (i, a) = (g.input as usize, g.output as usize);
                best = Some(match best {
                    None => (i, a),
                    Some((bi, ba)) => (bi.max(i), ba.max(a)),
                });
            }
        }
        best
    }

    /// Replaces every occurrence of generator `g` by `image`.
    pub fn substitute(&self, g: GeneratorId, image: &NCPolynomial) -> NCPolynomial {
        let mut out = NCPolynomial::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPolynomial::constant(c.clone());
            for l in w.letters() {
                if *l == g {
                    acc = acc.multiply(image);
                } else {
                    let mut next = NCPolynomial::zero();
                    for (u, k) in acc.terms {
                        let mut v = u.0.clone();
                        v.push(*l);
                        next.add_term(Word(v), k);
                    }
                    acc = next;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Sum of absolute values of the coefficients, as an `f64`. Diagnostic only.
    pub fn l1_norm_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }
}

impl<'a> Add<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, rhs: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: &NCPolynomial) -> NCPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a NCPolynomial> for &'a NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: &NCPolynomial) -> NCPolynomial {
        self.multiply(rhs)
    }
}

impl Neg for &NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        NCPolynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        -&self
    }
}

impl Add for NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, rhs: NCPolynomial) -> NCPolynomial {
        &self + &rhs
    }
}

impl Sub for NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: NCPolynomial) -> NCPolynomial {
        &self - &rhs
    }
}

impl Mul for NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: NCPolynomial) -> NCPolynomial {
        self.multiply(&rhs)
    }
}

impl fmt::Display for NCPolynomial {
    /// Terms are printed from the leading term down, e.g.
    /// `x[0,0]*x[0,0] - x[0,0]` or `-3/2*x[1,0] + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}
