//! SAT to clique-game compilation: the clause-cluster gadget, its
//! neighbourhood-rule contraction, and Gröbner checks of the identities the
//! contracted gadget must satisfy.

mod cnf;
mod gadget;

pub use cnf::{parse_dimacs_cnf, CNFFormula};
pub use gadget::{
    classical_gadget, quantum_gadget, quantum_gadget_shuffled, quantum_gadget_with, read_gadget, rule_violations,
    write_gadget, Contraction, GadgetGraph, RuleViolation,
};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::games::{clique_game, GamePresentation};
use crate::groebner::{groebner_with, ideal_contains, GroebnerBasis, GroebnerOptions, TriState};
use crate::ncpoly::NCPolynomial;

/// `(G_φ*, m, Hom(K_m, G_φ*))`.
pub fn reduce_to_clique_game(phi: &CNFFormula) -> (GadgetGraph, usize, GamePresentation) {
    reduce_to_clique_game_with(phi, Contraction::Intersect)
}

pub fn reduce_to_clique_game_with(phi: &CNFFormula, mode: Contraction) -> (GadgetGraph, usize, GamePresentation) {
    let g = quantum_gadget_with(&classical_gadget(phi), mode);
    let m = phi.n_clauses();
    let pres = GamePresentation::new(clique_game(m, &g.graph));
    (g, m, pres)
}

/// `Σ_j Σ_{v∈S} x[j,v]` for a vertex set `S`.
pub fn weight(m: usize, vertices: &[usize]) -> NCPolynomial {
    let mut p = NCPolynomial::zero();
    for j in 0..m {
        for &v in vertices {
            p = &p + &NCPolynomial::generator(j, v);
        }
    }
    p
}

/// `1 − Σ_j Σ_{v∈S_i} x[j,v]`.
pub fn cluster_identity(m: usize, cluster: &[usize]) -> NCPolynomial {
    &NCPolynomial::one() - &weight(m, cluster)
}

/// Adjacent pairs `u < v` with equal closed neighbourhoods.
pub fn twin_pairs(g: &GadgetGraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (u, v) in g.graph.edges() {
        if g.closed_neighbourhood(u) == g.closed_neighbourhood(v) {
            out.push((u.min(v), u.max(v)));
        }
    }
    out.sort_unstable();
    out
}

fn check_presentation(pres: &GamePresentation, g: &GadgetGraph) -> Result<usize> {
    let m = pres.game.n_inputs();
    if m != g.n_clusters() || pres.game != clique_game(m, &g.graph) {
        return Err(Error::InvalidInput("presentation is not Hom(K_m, G) over the given gadget".into()));
    }
    Ok(m)
}

/// Ideal membership of the gadget identities against one basis.
#[derive(Clone, Debug)]
pub struct GadgetIdentities {
    pub basis: GroebnerBasis,
    /// Per cluster: `1 − Σ_j Σ_{v∈S_i} x[j,v] ∈ 𝓘`.
    pub clusters: Vec<TriState>,
    /// Per twin pair: `Σ_j x[j,u] − Σ_j x[j,v] ∈ 𝓘`.
    pub twins: Vec<((usize, usize), TriState)>,
}

impl GadgetIdentities {
    pub fn compute(pres: &GamePresentation, g: &GadgetGraph, d_max: usize, exec: Exec) -> Result<Self> {
        let m = check_presentation(pres, g)?;
        let mut opts = GroebnerOptions::new(d_max);
        opts.exec = exec;
        let basis = groebner_with(&pres.relations, &opts)?;
        let clusters = g.clusters.iter().map(|c| ideal_contains(&cluster_identity(m, c), &basis)).collect();
        let twins = twin_pairs(g)
            .into_iter()
            .map(|(u, v)| ((u, v), ideal_contains(&(&weight(m, &[u]) - &weight(m, &[v])), &basis)))
            .collect();
        Ok(GadgetIdentities { basis, clusters, twins })
    }

    pub fn all_yes(&self) -> bool {
        self.clusters.iter().chain(self.twins.iter().map(|(_, t)| t)).all(|&t| t == TriState::Yes)
    }

    pub fn any_no(&self) -> bool {
        self.clusters.iter().chain(self.twins.iter().map(|(_, t)| t)).any(|&t| t == TriState::No)
    }
}

/// Whether the cluster identity for cluster `i` lies in the game ideal.
pub fn check_cluster_identity(pres: &GamePresentation, g: &GadgetGraph, i: usize, d_max: usize) -> Result<TriState> {
    let m = check_presentation(pres, g)?;
    let cluster = g.clusters.get(i).ok_or_else(|| Error::InvalidInput(format!("no cluster {i}")))?;
    let basis = groebner_with(&pres.relations, &GroebnerOptions::new(d_max))?;
    Ok(ideal_contains(&cluster_identity(m, cluster), &basis))
}

/// Whether `Σ_j x[j,u] − Σ_j x[j,v]` lies in the game ideal.
pub fn check_twin_identity(pres: &GamePresentation, g: &GadgetGraph, u: usize, v: usize, d_max: usize) -> Result<TriState> {
    let m = check_presentation(pres, g)?;
    let basis = groebner_with(&pres.relations, &GroebnerOptions::new(d_max))?;
    Ok(ideal_contains(&(&weight(m, &[u]) - &weight(m, &[v])), &basis))
}
