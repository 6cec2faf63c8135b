use std::cmp::Reverse;
use std::collections::BinaryHeap;

use log::debug;
use num_traits::One;

use super::basis::{reduce_by, GroebnerBasis, LeadIndex, ReductionMode};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ncpoly::{Coeff, GeneratorId, MonomialOrder, NCPolynomial, Word};

/// Knobs for [`groebner_with`].
#[derive(Clone, Debug)]
pub struct GroebnerOptions {
    pub order: MonomialOrder,
    /// Overlaps whose word is longer than this are left pending.
    pub d_max: usize,
    /// Abort with [`Error::ResourceLimit`] once this many live elements exist.
    pub max_elements: usize,
    /// Reduce each same-degree batch of obstructions concurrently.
    pub exec: Exec,
}

impl GroebnerOptions {
    pub fn new(d_max: usize) -> Self {
        GroebnerOptions { order: MonomialOrder::GradedLex, d_max, max_elements: 50_000, exec: Exec::default() }
    }
}

/// `2·(max relation degree) + 4`.
pub fn default_degree_bound(relations: &[NCPolynomial]) -> usize {
    2 * relations.iter().filter_map(NCPolynomial::degree).max().unwrap_or(0) + 4
}

/// Mora/Buchberger completion truncated at overlap degree `d_max`.
pub fn groebner_truncated(relations: &[NCPolynomial], ord: MonomialOrder, d_max: usize) -> Result<GroebnerBasis> {
    let mut opts = GroebnerOptions::new(d_max);
    opts.order = ord;
    groebner_with(relations, &opts)
}

/// An overlap `lead(i) = A·K`, `lead(j) = K·B` with `|K| = overlap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Obstruction {
    degree: usize,
    seq: u64,
    i: usize,
    j: usize,
    overlap: usize,
}

struct Elem {
    poly: NCPolynomial,
    alive: bool,
}

struct Builder {
    elems: Vec<Elem>,
    // Parallel to `elems`; dead entries keep their polynomial but leave the index.
    polys: Vec<NCPolynomial>,
    index: LeadIndex,
    queue: BinaryHeap<Reverse<Obstruction>>,
    seq: u64,
    live: usize,
    collapsed: bool,
    max_elements: usize,
}

impl Builder {
    fn new(max_elements: usize) -> Self {
        Builder {
            elems: Vec::new(),
            polys: Vec::new(),
            index: LeadIndex::default(),
            queue: BinaryHeap::new(),
            seq: 0,
            live: 0,
            collapsed: false,
            max_elements,
        }
    }

    fn lead(&self, k: usize) -> &[GeneratorId] {
        self.elems[k].poly.leading_word().map(Word::letters).unwrap_or(&[])
    }

    fn reduce(&self, f: &NCPolynomial) -> NCPolynomial {
        reduce_by(f, &self.polys, &self.index, |w, idx| idx.find(w, ReductionMode::TwoSided)).remainder
    }

    fn push_overlaps(&mut self, a: usize, b: usize) {
        let la = self.lead(a).len();
        let lb = self.lead(b).len();
        for k in 1..la.min(lb) {
            if self.lead(a)[la - k..] == self.lead(b)[..k] {
                self.seq += 1;
                let ob = Obstruction { degree: la + lb - k, seq: self.seq, i: a, j: b, overlap: k };
                self.queue.push(Reverse(ob));
            }
        }
    }

    /// Reduces `p` and inserts it together with anything its lead displaces.
    fn insert(&mut self, p: NCPolynomial) -> Result<()> {
        let mut work = vec![p];
        while let Some(p) = work.pop() {
            if self.collapsed {
                return Ok(());
            }
            let r = self.reduce(&p);
            if r.is_zero() {
                continue;
            }
            if r.as_constant().is_some() {
                self.collapse();
                return Ok(());
            }
            let r = r.monic();
            let lw = r.leading_word().expect("nonzero").clone();
            for k in 0..self.elems.len() {
                if self.elems[k].alive && self.lead(k).len() > lw.len() {
                    let w = self.elems[k].poly.leading_word().expect("live element");
                    if w.contains_factor(lw.letters()) {
                        let lead = w.letters().to_vec();
                        self.elems[k].alive = false;
                        self.live -= 1;
                        self.index.remove(&lead);
                        work.push(self.elems[k].poly.clone());
                    }
                }
            }
            let idx = self.elems.len();
            self.index.insert(lw.letters(), idx);
            self.polys.push(r.clone());
            self.elems.push(Elem { poly: r, alive: true });
            self.live += 1;
            if self.live > self.max_elements {
                return Err(Error::ResourceLimit(format!(
                    "Groebner basis exceeded {} elements",
                    self.max_elements
                )));
            }
            for k in 0..idx {
                if self.elems[k].alive {
                    self.push_overlaps(k, idx);
                    self.push_overlaps(idx, k);
                }
            }
            self.push_overlaps(idx, idx);
        }
        Ok(())
    }

    fn collapse(&mut self) {
        self.collapsed = true;
        self.queue.clear();
        for e in &mut self.elems {
            e.alive = false;
        }
    }

    fn s_polynomial(&self, ob: &Obstruction) -> NCPolynomial {
        let gi = &self.elems[ob.i].poly;
        let gj = &self.elems[ob.j].poly;
        let li = self.lead(ob.i);
        let lj = self.lead(ob.j);
        let left = &li[..li.len() - ob.overlap];
        let right = &lj[ob.overlap..];
        let one = Coeff::one();
        let mut s = NCPolynomial::zero();
        s.add_scaled_sandwich(&one, &[], gi, right);
        s.add_scaled_sandwich(&-one, left, gj, &[]);
        s
    }

    fn is_live(&self, ob: &Obstruction) -> bool {
        self.elems[ob.i].alive && self.elems[ob.j].alive
    }
}

/// Truncated completion with explicit options.
///
/// Obstructions are processed lowest degree first. All obstructions of the
/// current degree are reduced against a snapshot of the basis (concurrently
/// under `Exec::Parallel`) and then inserted one at a time in creation order,
/// each insertion re-reducing against the updated basis.
pub fn groebner_with(relations: &[NCPolynomial], opts: &GroebnerOptions) -> Result<GroebnerBasis> {
    if relations.iter().any(NCPolynomial::is_zero) {
        return Err(Error::InvalidInput("zero relation".into()));
    }
    let mut b = Builder::new(opts.max_elements);
    let mut sorted: Vec<&NCPolynomial> = relations.iter().collect();
    sorted.sort_by(|p, q| p.leading_word().cmp(&q.leading_word()));
    for r in sorted {
        b.insert(r.clone())?;
    }

    let mut processed = 0usize;
    while !b.collapsed {
        let Some(Reverse(first)) = b.queue.peek().copied() else { break };
        if first.degree > opts.d_max {
            break;
        }
        let mut batch = Vec::new();
        while let Some(Reverse(ob)) = b.queue.peek().copied() {
            if ob.degree != first.degree {
                break;
            }
            b.queue.pop();
            if b.is_live(&ob) {
                batch.push(ob);
            }
        }
        processed += batch.len();
        let reduced: Vec<NCPolynomial> = {
            let snapshot = &b;
            opts.exec.map(&batch, |ob| snapshot.reduce(&snapshot.s_polynomial(ob)))
        };
        for r in reduced {
            if !r.is_zero() {
                b.insert(r)?;
                if b.collapsed {
                    break;
                }
            }
        }
    }

    let complete = b.collapsed || !b.queue.iter().any(|Reverse(ob)| b.is_live(ob));
    debug!(
        "groebner: {} live elements, {} obstructions processed, complete = {}",
        b.live, processed, complete
    );

    let elements = if b.collapsed {
        vec![NCPolynomial::one()]
    } else {
        let live: Vec<NCPolynomial> =
            b.elems.iter().filter(|e| e.alive).map(|e| e.poly.clone()).collect();
        tail_reduce(live, opts.exec)
    };
    Ok(GroebnerBasis::from_parts(elements, opts.order, opts.d_max, complete))
}

/// Reduces every non-leading term against the other elements and sorts the
/// result by leading word. Leading words are untouched because the input is
/// already interreduced at the level of leading words.
pub(crate) fn tail_reduce(mut elems: Vec<NCPolynomial>, exec: Exec) -> Vec<NCPolynomial> {
    elems.sort_by(|p, q| p.leading_word().cmp(&q.leading_word()));
    let mut index = LeadIndex::default();
    for (k, e) in elems.iter().enumerate() {
        index.insert(e.leading_word().expect("nonzero").letters(), k);
    }
    let out = exec.map_range(elems.len(), |k| {
        let e = &elems[k];
        let (lw, lc) = e.leading_term().expect("nonzero");
        let mut tail = e.clone();
        tail.terms.remove(lw);
        let r = reduce_by(&tail, &elems, &index, |w, idx| idx.find(w, ReductionMode::TwoSided)).remainder;
        let mut out = r;
        out.add_term(lw.clone(), lc.clone());
        out
    });
    out
}

/// Interreduces an arbitrary list of polynomials at the level of leading
/// words, then tail-reduces. Idempotent on its own output.
pub fn interreduce(polys: &[NCPolynomial]) -> Vec<NCPolynomial> {
    let mut b = Builder::new(usize::MAX);
    let mut sorted: Vec<&NCPolynomial> = polys.iter().filter(|p| !p.is_zero()).collect();
    sorted.sort_by(|p, q| p.leading_word().cmp(&q.leading_word()));
    for p in sorted {
        b.insert(p.clone()).expect("no element cap");
    }
    if b.collapsed {
        return vec![NCPolynomial::one()];
    }
    let live = b.elems.iter().filter(|e| e.alive).map(|e| e.poly.clone()).collect();
    tail_reduce(live, Exec::Sequential)
}

/// Substitutes `x[i, n_outputs-1] := 1 - Σ_{a < n_outputs-1} x[i, a]` in every
/// relation and drops the ones that vanish.
pub fn eliminate_last_output(relations: &[NCPolynomial], n_inputs: usize, n_outputs: usize) -> Vec<NCPolynomial> {
    assert!(n_outputs >= 1);
    let last = n_outputs - 1;
    let mut out: Vec<NCPolynomial> = relations.to_vec();
    for i in 0..n_inputs {
        let mut image = NCPolynomial::one();
        for a in 0..last {
            image = &image - &NCPolynomial::generator(i, a);
        }
        let g = GeneratorId::new(i, last);
        out = out.iter().map(|p| p.substitute(g, &image)).collect();
    }
    out.retain(|p| !p.is_zero());
    out
}
