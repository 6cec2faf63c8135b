use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{clique_game, GamePresentation, SynchronousGame};
use crate::error::Result;
use crate::exec::Exec;
use crate::graphs::{clique_number, cliques_of_size, common_neighbourhood, Graph};
use crate::groebner::{default_degree_bound, groebner_with, is_trivial, GroebnerBasis, GroebnerOptions, TriState};

/// Triviality of a game algebra by truncated Gröbner basis.
#[derive(Clone, Debug)]
pub struct AlgCheck {
    /// `yes` means the algebra is (0): no perfect alg-strategy.
    pub trivial: TriState,
    pub basis: GroebnerBasis,
}

pub fn alg_check(game: &SynchronousGame, d_max: Option<usize>, exec: Exec) -> Result<AlgCheck> {
    let pres = GamePresentation::new(game.clone());
    let d_max = d_max.unwrap_or_else(|| default_degree_bound(&pres.relations));
    let mut opts = GroebnerOptions::new(d_max);
    opts.exec = exec;
    let basis = groebner_with(&pres.relations, &opts)?;
    Ok(AlgCheck { trivial: is_trivial(&basis), basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepSource {
    /// `n ≤ ω(G)`: a classical homomorphism exists, so the algebra is nonzero.
    Classical,
    Groebner { complete: bool, basis_len: usize },
}

/// Outcome for one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueStep {
    pub n: usize,
    /// Triviality of `A(Hom(K_n, G))`.
    pub trivial: TriState,
    pub source: StepSource,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgCliqueNumber {
    /// `G` contains `K_4`, hence the algebraic clique number is infinite.
    pub infinite: bool,
    /// Largest `n ≤ n_max` certified nontrivial.
    pub lower_bound: usize,
    /// Set when `lower_bound + 1` is certified trivial.
    pub exact: Option<usize>,
    pub steps: Vec<CliqueStep>,
}

/// Per-`n` triviality of `Hom(K_n, G)` for `n = 1..=n_max`.
///
/// A `K_4` subgraph short-circuits to the infinite flag. Values `n ≤ ω(G)` are
/// settled classically; the rest run truncated Gröbner bases concurrently
/// under `exec` and are merged by `n`.
pub fn alg_clique_number(g: &Graph, n_max: usize, d_max: Option<usize>, exec: Exec) -> Result<AlgCliqueNumber> {
    assert!(n_max >= 1);
    if !cliques_of_size(g, 4).is_empty() {
        return Ok(AlgCliqueNumber { infinite: true, lower_bound: n_max, exact: None, steps: Vec::new() });
    }
    let omega = clique_number(g);
    let ns: Vec<usize> = (1..=n_max).collect();
    let steps: Vec<Result<CliqueStep>> = exec.map(&ns, |&n| {
        if n <= omega {
            return Ok(CliqueStep { n, trivial: TriState::No, source: StepSource::Classical });
        }
        // The outer map already spreads work; keep each basis build sequential.
        let check = alg_check(&clique_game(n, g), d_max, Exec::Sequential)?;
        Ok(CliqueStep {
            n,
            trivial: check.trivial,
            source: StepSource::Groebner { complete: check.basis.is_complete(), basis_len: check.basis.len() },
        })
    });
    let steps = steps.into_iter().collect::<Result<Vec<_>>>()?;
    let lower_bound = steps.iter().filter(|s| s.trivial == TriState::No).map(|s| s.n).max().unwrap_or(0);
    let exact = steps
        .iter()
        .find(|s| s.n == lower_bound + 1)
        .filter(|s| s.trivial == TriState::Yes)
        .map(|_| lower_bound);
    Ok(AlgCliqueNumber { infinite: false, lower_bound, exact, steps })
}

/// Largest `n` such that some `(n-1)`-clique has a nonempty common
/// neighbourhood; the locally commuting algebra is nonzero exactly then.
pub fn lc_clique_number(g: &Graph) -> usize {
    let mut n = 0;
    loop {
        let found = cliques_of_size(g, n).iter().any(|s| !common_neighbourhood(g, s).is_empty());
        if !found {
            return n;
        }
        n += 1;
    }
}

/// `Σ_S |N_S| · (n-1)!` over `(n-1)`-cliques `S`.
pub fn lc_dimension(g: &Graph, n: usize) -> BigUint {
    assert!(n >= 1);
    let fact: BigUint = (1..n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k));
    let mut total = BigUint::zero();
    for s in cliques_of_size(g, n - 1) {
        total += BigUint::from(common_neighbourhood(g, &s).len()) * &fact;
    }
    total
}
