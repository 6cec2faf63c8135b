use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::games::GamePresentation;
use crate::groebner::{default_degree_bound, groebner_with, GroebnerOptions};
use crate::linalg::Echelon;
use crate::ncpoly::{Coeff, GeneratorId, NCPolynomial, Word};
use crate::sdp::{DenseSDP, Entry};

/// Involution-free words of degree ≤ k, empty word first, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub words: Vec<Word>,
    pub k: usize,
    /// Only words normal with respect to a Gröbner basis were kept.
    pub reduced: bool,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn generators(pres: &GamePresentation) -> Vec<GeneratorId> {
    let (ni, no) = (pres.game.n_inputs(), pres.game.n_outputs());
    (0..ni).flat_map(|i| (0..no).map(move |a| GeneratorId::new(i, a))).collect()
}

/// All words of degree ≤ d in increasing order.
fn words_up_to(gens: &[GeneratorId], d: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(layer.len() * gens.len());
        for w in &layer {
            for &g in gens {
                next.push(w.concat(&Word::letter(g)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn count_words(n_gens: usize, d: usize) -> usize {
    (0..=d).fold(0usize, |acc, e| acc.saturating_add(n_gens.saturating_pow(e as u32)))
}

/// Size caps for the refutation SDP.
#[derive(Clone, Copy, Debug)]
pub struct PsatzLimits {
    pub max_basis: usize,
    pub max_columns: usize,
}

impl Default for PsatzLimits {
    fn default() -> Self {
        PsatzLimits { max_basis: 400, max_columns: 250_000 }
    }
}

pub fn nc_monomial_basis(pres: &GamePresentation, k: usize, reduce: bool) -> Result<MonomialBasis> {
    let gens = generators(pres);
    let limits = PsatzLimits::default();
    if count_words(gens.len(), k) > limits.max_basis {
        return Err(Error::ResourceLimit(format!(
            "{} words of degree <= {k}, cap is {}",
            count_words(gens.len(), k),
            limits.max_basis
        )));
    }
    let mut words = words_up_to(&gens, k);
    if reduce {
        let mut opts = GroebnerOptions::new(default_degree_bound(&pres.relations).max(2 * k));
        opts.exec = Exec::default();
        let gb = groebner_with(&pres.relations, &opts)?;
        words.retain(|w| w.is_empty() || gb.is_normal_word(w));
    }
    Ok(MonomialBasis { words, k, reduced: reduce })
}

/// Which ideal term an echelon input stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Column {
    pub relation: usize,
    /// `false`: `w·h_ℓ`; `true`: `h_ℓ*·w`.
    pub right: bool,
    pub word: Word,
}

/// The refutation SDP for one degree bound.
///
/// Variables are the upper-triangle entries of `S`, numbered row by row.
/// `rows[r]·S = rhs[r]` are the independent exact constraints. The numeric
/// problem has blocks `Z` (basis size), `s` and a cap `c`, with
/// `S = Z + (s - 1)·I`, `s + c = 2` and objective `min -s`; the slack is
/// `t = s - 1` and a refutation is found when `t > 0`.
#[derive(Clone, Debug)]
pub struct SDPProblem {
    pub basis: MonomialBasis,
    pub rows: Vec<BTreeMap<usize, Coeff>>,
    pub rhs: Vec<Coeff>,
    /// The constraints are contradictory: no Gram matrix of any sign works.
    pub inconsistent: bool,
    pub dense: DenseSDP,
    pub(crate) echelon: Echelon<Word>,
    pub(crate) columns: Vec<Column>,
    pub(crate) n_relations: usize,
}

impl SDPProblem {
    pub fn psd_block_dims(&self) -> Vec<usize> {
        vec![self.basis.len(), 1, 1]
    }

    /// Ideal terms are eliminated exactly, so no free variables remain.
    pub fn free_var_count(&self) -> usize {
        0
    }

    pub fn n_vars(&self) -> usize {
        let n = self.basis.len();
        n * (n + 1) / 2
    }

    pub fn var_index(&self, u: usize, v: usize) -> usize {
        upper_index(self.basis.len(), u, v)
    }

    /// Gram polynomial `1 + Σ_{u,v} S_uv u*·v` of a full symmetric matrix.
    pub fn gram_polynomial(&self, s: &[Vec<Coeff>]) -> NCPolynomial {
        gram_polynomial(&self.basis.words, s)
    }
}

pub(crate) fn upper_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u <= v { (u, v) } else { (v, u) };
    u * n - u * (u + 1) / 2 + v
}

pub(crate) fn gram_polynomial(words: &[Word], s: &[Vec<Coeff>]) -> NCPolynomial {
    let mut p = NCPolynomial::one();
    for (u, wu) in words.iter().enumerate() {
        let ru = wu.reversed();
        for (v, wv) in words.iter().enumerate() {
            if !s[u][v].is_zero() {
                p.add_term(ru.concat(wv), s[u][v].clone());
            }
        }
    }
    p
}

fn to_map(p: &NCPolynomial) -> BTreeMap<Word, Coeff> {
    p.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

pub fn build_refutation_sdp(pres: &GamePresentation, k: usize) -> Result<SDPProblem> {
    let basis = nc_monomial_basis(pres, k, false)?;
    build_refutation_sdp_with(pres, basis, &PsatzLimits::default(), Exec::default())
}

/// Builds the SDP over a given Gram basis (e.g. a reduced one).
pub fn build_refutation_sdp_with(pres: &GamePresentation, basis: MonomialBasis, limits: &PsatzLimits, exec: Exec) -> Result<SDPProblem> {
    let k = basis.k;
    if k == 0 {
        return Err(Error::InvalidInput("degree bound k must be at least 1".into()));
    }
    if basis.words.first() != Some(&Word::one()) {
        return Err(Error::InvalidInput("monomial basis must start with the empty word".into()));
    }
    if basis.len() > limits.max_basis {
        return Err(Error::ResourceLimit(format!("basis has {} words, cap is {}", basis.len(), limits.max_basis)));
    }
    let gens = generators(pres);
    let d = 2 * k;
    let mut n_columns = 0usize;
    for h in &pres.relations {
        let dh = h.degree().unwrap_or(0);
        if dh <= d {
            n_columns = n_columns.saturating_add(2 * count_words(gens.len(), d - dh));
        }
    }
    if n_columns > limits.max_columns {
        return Err(Error::ResourceLimit(format!("{n_columns} ideal columns at degree {d}, cap is {}", limits.max_columns)));
    }

    let mut echelon: Echelon<Word> = Echelon::new(true);
    let mut columns = Vec::with_capacity(n_columns);
    let mut cache: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for (l, h) in pres.relations.iter().enumerate() {
        let dh = h.degree().unwrap_or(0);
        if dh > d {
            continue;
        }
        let ws = cache.entry(d - dh).or_insert_with(|| words_up_to(&gens, d - dh)).clone();
        let hs = h.involute();
        for w in ws {
            let wp = NCPolynomial::monomial(w.clone(), Coeff::one());
            echelon.insert(&to_map(&wp.multiply(h)));
            columns.push(Column { relation: l, right: false, word: w.clone() });
            echelon.insert(&to_map(&hs.multiply(&wp)));
            columns.push(Column { relation: l, right: true, word: w });
        }
    }

    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    let words = &basis.words;
    let echelon_ref = &echelon;
    let reduced: Vec<BTreeMap<Word, Coeff>> = exec.map(&pairs, |&(u, v)| {
        let mut p = NCPolynomial::monomial(words[u].reversed().concat(&words[v]), Coeff::one());
        if u != v {
            p.add_term(words[v].reversed().concat(&words[u]), Coeff::one());
        }
        echelon_ref.reduce(&to_map(&p)).remainder
    });
    let one_rem = echelon.reduce(&to_map(&NCPolynomial::one())).remainder;

    // one equation per surviving word: coeff_w(rem 1) + Σ S_p coeff_w(rem p) = 0
    let mut by_word: BTreeMap<Word, BTreeMap<usize, Coeff>> = BTreeMap::new();
    for (p, rem) in reduced.iter().enumerate() {
        for (w, c) in rem {
            by_word.entry(w.clone()).or_default().insert(p, c.clone());
        }
    }
    for w in one_rem.keys() {
        by_word.entry(w.clone()).or_default();
    }
    let mut indep: Echelon<usize> = Echelon::new(false);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut inconsistent = false;
    for (w, row) in by_word {
        let b = -one_rem.get(&w).cloned().unwrap_or_else(Coeff::zero);
        // augmented: rhs at key 0, variables at key p+1
        let mut aug: BTreeMap<usize, Coeff> = row.iter().map(|(&p, c)| (p + 1, c.clone())).collect();
        if !b.is_zero() {
            aug.insert(0, -&b);
        }
        let red = indep.reduce(&aug).remainder;
        match red.last_key_value() {
            None => continue,
            Some((&0, _)) => {
                inconsistent = true;
                continue;
            }
            Some(_) => {
                indep.insert(&aug);
                rows.push(row);
                rhs.push(b);
            }
        }
    }

    let dense = dense_problem(n, &pairs, &rows, &rhs);
    Ok(SDPProblem { basis, rows, rhs, inconsistent, dense, echelon, columns, n_relations: pres.relations.len() })
}

fn dense_problem(n: usize, pairs: &[(usize, usize)], rows: &[BTreeMap<usize, Coeff>], rhs: &[Coeff]) -> DenseSDP {
    let f = |c: &Coeff| c.to_f64().unwrap_or(f64::NAN);
    let mut cons = Vec::with_capacity(rows.len() + 1);
    let mut b = Vec::with_capacity(rows.len() + 1);
    for (row, r) in rows.iter().zip(rhs) {
        let scale = row.values().map(|c| f(&c.abs())).fold(0.0, f64::max).max(1e-300);
        let mut entries = Vec::with_capacity(row.len() + 1);
        let mut tr = 0.0;
        for (&p, c) in row {
            let (u, v) = pairs[p];
            let a = f(c) / scale;
            if u == v {
                tr += a;
                entries.push(Entry { block: 0, row: u, col: v, value: a });
            } else {
                entries.push(Entry { block: 0, row: u, col: v, value: a / 2.0 });
            }
        }
        if tr != 0.0 {
            entries.push(Entry { block: 1, row: 0, col: 0, value: tr });
        }
        cons.push(entries);
        b.push(f(r) / scale + tr);
    }
    cons.push(vec![Entry { block: 1, row: 0, col: 0, value: 1.0 }, Entry { block: 2, row: 0, col: 0, value: 1.0 }]);
    b.push(2.0);
    let obj = vec![Entry { block: 1, row: 0, col: 0, value: -1.0 }];
    DenseSDP::new(vec![n, 1, 1], cons, b, obj).expect("refutation SDP is well formed")
}

/// `S = Z + (s - 1)·I` from a numeric solution.
pub(crate) fn gram_from_solution(n: usize, x: &[DMatrix<f64>]) -> (DMatrix<f64>, f64) {
    let t = x[1][(0, 0)] - 1.0;
    let mut s = x[0].clone();
    for i in 0..n {
        s[(i, i)] += t;
    }
    (s, t)
}
