use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::ncpoly::Coeff;

/// Sparse row echelon form keyed by an ordered column type.
///
/// Each stored row is monic in its largest key (its pivot) and carries its
/// expression as a combination of the inserted inputs.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone + Hash> {
    rows: Vec<BTreeMap<K, Coeff>>,
    provenance: Vec<BTreeMap<usize, Coeff>>,
    pivots: HashMap<K, usize>,
    inserted: usize,
    track: bool,
}

/// `v = Σ_r coeffs[r]·row_r + remainder` with remainder free of pivot keys.
#[derive(Clone, Debug)]
pub struct Reduction<K: Ord> {
    pub remainder: BTreeMap<K, Coeff>,
    /// Combination of the *inputs* that was subtracted, i.e.
    /// `v - remainder = Σ_i input_weights[i]·input_i`. Empty unless tracking.
    pub input_weights: BTreeMap<usize, Coeff>,
}

fn axpy<K: Ord + Clone>(dst: &mut BTreeMap<K, Coeff>, c: &Coeff, src: &BTreeMap<K, Coeff>) {
    for (k, v) in src {
        let delta = c * v;
        match dst.get_mut(k) {
            Some(e) => {
                *e += delta;
                if e.is_zero() {
                    dst.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    dst.insert(k.clone(), delta);
                }
            }
        }
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    /// `track_provenance` records each row as a combination of inputs.
    pub fn new(track_provenance: bool) -> Self {
        Echelon { rows: Vec::new(), provenance: Vec::new(), pivots: HashMap::new(), inserted: 0, track: track_provenance }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    /// Eliminates pivot keys from largest to smallest.
    pub fn reduce(&self, v: &BTreeMap<K, Coeff>) -> Reduction<K> {
        let mut rem: BTreeMap<K, Coeff> = BTreeMap::new();
        let mut todo = v.clone();
        let mut weights = BTreeMap::new();
        while let Some((k, c)) = todo.pop_last() {
            match self.pivots.get(&k) {
                None => {
                    rem.insert(k, c);
                }
                Some(&r) => {
                    let row = &self.rows[r];
                    // row is monic at k; subtract c·row (minus its pivot, already popped)
                    let neg = -&c;
                    for (kk, vv) in row.iter().rev().skip(1) {
                        let delta = &neg * vv;
                        match todo.get_mut(kk) {
                            Some(e) => {
                                *e += delta;
                                if e.is_zero() {
                                    todo.remove(kk);
                                }
                            }
                            None => {
                                todo.insert(kk.clone(), delta);
                            }
                        }
                    }
                    if self.track {
                        axpy(&mut weights, &c, &self.provenance[r]);
                    }
                }
            }
        }
        Reduction { remainder: rem, input_weights: weights }
    }

    /// Inserts input number `self.inserted`; returns true if it raised the rank.
    pub fn insert(&mut self, v: &BTreeMap<K, Coeff>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let red = self.reduce(v);
        let Some((pivot, lead)) = red.remainder.last_key_value() else { return false };
        let pivot = pivot.clone();
        let inv = Coeff::one() / lead;
        let row: BTreeMap<K, Coeff> = red.remainder.iter().map(|(k, c)| (k.clone(), c * &inv)).collect();
        if self.track {
            // row = (v - Σ w_i input_i) / lead
            let mut prov = BTreeMap::new();
            prov.insert(idx, inv.clone());
            axpy(&mut prov, &-&inv, &red.input_weights);
            self.provenance.push(prov);
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(row);
        true
    }
}
