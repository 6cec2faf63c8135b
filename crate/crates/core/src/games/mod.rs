//! Synchronous games, their relation lists and graph-game constructors.
//!
//! Queries about hereditary strategies are answered by the C* routines in
//! [`crate::psatz`]; the two models coincide for synchronous games, so no
//! separate hereditary computation exists.

mod clique;
mod io;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::ncpoly::NCPolynomial;

pub use clique::{
    alg_check, alg_clique_number, lc_clique_number, lc_dimension, AlgCheck, AlgCliqueNumber, CliqueStep, StepSource,
};
pub use io::{read_game, write_game};

/// Quadruple `(i, j, a, b)`: answering `a` to `i` and `b` to `j` loses.
pub type Forbidden = (usize, usize, usize, usize);

/// A synchronous game stored as its explicit losing set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SynchronousGame {
    n_inputs: usize,
    n_outputs: usize,
    forbidden: BTreeSet<Forbidden>,
}

impl SynchronousGame {
    /// Adds every synchrony quadruple `(i, i, a, b)`, `a != b`, to `forbidden`.
    pub fn new(n_inputs: usize, n_outputs: usize, forbidden: impl IntoIterator<Item = Forbidden>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j, a, b) in forbidden {
            if i >= n_inputs || j >= n_inputs || a >= n_outputs || b >= n_outputs {
                return Err(Error::InvalidInput(format!(
                    "quadruple ({i}, {j}, {a}, {b}) out of range for {n_inputs} inputs, {n_outputs} outputs"
                )));
            }
            set.insert((i, j, a, b));
        }
        for i in 0..n_inputs {
            for a in 0..n_outputs {
                for b in 0..n_outputs {
                    if a != b {
                        set.insert((i, i, a, b));
                    }
                }
            }
        }
        Ok(SynchronousGame { n_inputs, n_outputs, forbidden: set })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    /// Sorted losing quadruples, synchrony included.
    pub fn forbidden(&self) -> &BTreeSet<Forbidden> {
        &self.forbidden
    }

    pub fn forbids(&self, i: usize, j: usize, a: usize, b: usize) -> bool {
        self.forbidden.contains(&(i, j, a, b))
    }

    /// True iff the deterministic strategy `answer[i]` never loses.
    pub fn accepts_classical(&self, answer: &[usize]) -> bool {
        self.forbidden.iter().all(|&(i, j, a, b)| answer[i] != a || answer[j] != b)
    }

    /// A perfect deterministic strategy, by exhaustive search.
    pub fn classical_strategy(&self) -> Option<Vec<usize>> {
        fn go(g: &SynchronousGame, cur: &mut Vec<usize>) -> bool {
            let i = cur.len();
            if i == g.n_inputs {
                return true;
            }
            for a in 0..g.n_outputs {
                let ok = (0..i).all(|j| !g.forbids(i, j, a, cur[j]) && !g.forbids(j, i, cur[j], a))
                    && !g.forbids(i, i, a, a);
                if ok {
                    cur.push(a);
                    if go(g, cur) {
                        return true;
                    }
                    cur.pop();
                }
            }
            false
        }
        let mut cur = Vec::new();
        go(self, &mut cur).then_some(cur)
    }
}

/// The ideal generators of a game.
///
/// Order: idempotents `x[i,a]^2 - x[i,a]` (row-major), completeness
/// `Σ_a x[i,a] - 1` per input, then `x[i,a]*x[j,b]` per losing quadruple in
/// sorted order.
pub fn relations_of(game: &SynchronousGame) -> Vec<NCPolynomial> {
    let mut out = Vec::new();
    for i in 0..game.n_inputs {
        for a in 0..game.n_outputs {
            let x = NCPolynomial::generator(i, a);
            out.push(&x.multiply(&x) - &x);
        }
    }
    for i in 0..game.n_inputs {
        let mut s = -NCPolynomial::one();
        for a in 0..game.n_outputs {
            s = &s + &NCPolynomial::generator(i, a);
        }
        out.push(s);
    }
    for &(i, j, a, b) in &game.forbidden {
        out.push(NCPolynomial::generator(i, a).multiply(&NCPolynomial::generator(j, b)));
    }
    out
}

/// Homomorphism game `G → H`: adjacent inputs must receive adjacent outputs
/// (equal outputs count as non-adjacent); non-adjacent distinct inputs are
/// unconstrained.
pub fn hom_game(g: &Graph, h: &Graph) -> SynchronousGame {
    let mut forbidden = Vec::new();
    for (a, b) in g.edges() {
        for u in 0..h.n_vertices() {
            for v in 0..h.n_vertices() {
                if !h.has_edge(u, v) {
                    forbidden.push((a, b, u, v));
                    forbidden.push((b, a, u, v));
                }
            }
        }
    }
    SynchronousGame::new(g.n_vertices(), h.n_vertices(), forbidden).expect("indices in range")
}

/// `Hom(K_n, G)`.
pub fn clique_game(n: usize, g: &Graph) -> SynchronousGame {
    hom_game(&Graph::complete(n), g)
}

/// `Hom(G, K_c)`.
pub fn coloring_game(g: &Graph, c: usize) -> SynchronousGame {
    hom_game(g, &Graph::complete(c))
}

/// A game with its generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GamePresentation {
    pub game: SynchronousGame,
    pub relations: Vec<NCPolynomial>,
    pub lc_extended: bool,
}

impl GamePresentation {
    pub fn new(game: SynchronousGame) -> Self {
        let relations = relations_of(&game);
        GamePresentation { game, relations, lc_extended: false }
    }

    pub fn n_generators(&self) -> usize {
        self.game.n_inputs * self.game.n_outputs
    }
}

/// Adds `x[i,u]*x[j,v] - x[j,v]*x[i,u]` for every edge `u < v` of `g` and all
/// inputs `i, j`. Requires `pres` to be `Hom(K_n, g)`; a second call is a no-op.
pub fn lc_extend(pres: &GamePresentation, g: &Graph) -> Result<GamePresentation> {
    let n = pres.game.n_inputs;
    if pres.game != clique_game(n, g) {
        return Err(Error::InvalidInput("locally commuting extension needs the clique game Hom(K_n, G)".into()));
    }
    if pres.lc_extended {
        return Ok(pres.clone());
    }
    let mut out = pres.clone();
    for (u, v) in g.edges() {
        for i in 0..n {
            for j in 0..n {
                let a = NCPolynomial::generator(i, u);
                let b = NCPolynomial::generator(j, v);
                out.relations.push(a.commutator(&b));
            }
        }
    }
    out.lc_extended = true;
    Ok(out)
}
