use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use super::cnf::CNFFormula;
use crate::error::{Error, Result};
use crate::graphs::{parse_dimacs, Graph};

/// Clause-cluster graph: one vertex per literal occurrence, numbered cluster
/// by cluster in clause order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub clusters: Vec<Vec<usize>>,
    pub literals: Vec<i32>,
}

impl GadgetGraph {
    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.clusters.iter().position(|c| c.contains(&v)).expect("every vertex lies in a cluster")
    }

    /// Structural invariants: clusters partition the vertices, no edge inside
    /// a cluster, one literal label per vertex.
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n_vertices();
        if self.literals.len() != n {
            return Err(Error::InvalidInput(format!("{} labels for {n} vertices", self.literals.len())));
        }
        let mut seen = vec![false; n];
        for (i, c) in self.clusters.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidInput(format!("cluster {i} is empty")));
            }
            for &v in c {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidInput(format!("cluster {i}: vertex {v} out of range or repeated")));
                }
                if self.literals[v] == 0 {
                    return Err(Error::InvalidInput(format!("vertex {v} has no literal")));
                }
            }
            for (a, &u) in c.iter().enumerate() {
                for &v in &c[a + 1..] {
                    if self.graph.has_edge(u, v) {
                        return Err(Error::InvalidInput(format!("edge {u}-{v} inside cluster {i}")));
                    }
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("vertex {v} is in no cluster")));
        }
        Ok(())
    }

    /// True iff some `m`-clique exists (necessarily one vertex per cluster).
    pub fn has_full_clique(&self) -> bool {
        let mut chosen = Vec::with_capacity(self.clusters.len());
        self.extend_clique(&mut chosen)
    }

    fn extend_clique(&self, chosen: &mut Vec<usize>) -> bool {
        let Some(c) = self.clusters.get(chosen.len()) else { return true };
        for &v in c {
            if chosen.iter().all(|&u| self.graph.has_edge(u, v)) {
                chosen.push(v);
                if self.extend_clique(chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// Closed neighbourhood as a set.
    pub fn closed_neighbourhood(&self, v: usize) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.graph.neighbours(v).into_iter().collect();
        s.insert(v);
        s
    }
}

/// Edges exactly between literals of distinct clauses that are not negations
/// of each other.
pub fn classical_gadget(phi: &CNFFormula) -> GadgetGraph {
    let mut clusters = Vec::new();
    let mut literals = Vec::new();
    for c in &phi.clauses {
        clusters.push((literals.len()..literals.len() + c.len()).collect::<Vec<_>>());
        literals.extend_from_slice(c);
    }
    let mut graph = Graph::empty(literals.len());
    for (i, ci) in clusters.iter().enumerate() {
        for cj in &clusters[i + 1..] {
            for &u in ci {
                for &v in cj {
                    if literals[u] != -literals[v] {
                        graph.add_edge(u, v).expect("distinct vertices");
                    }
                }
            }
        }
    }
    GadgetGraph { graph, clusters, literals }
}

/// How the negated-literal rule deletes edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Contraction {
    /// Delete the symmetric difference of both sides, so the set equation
    /// holds exactly at the fixpoint.
    #[default]
    Intersect,
    /// Delete only edges at `u` (those `u–w` with `w ∉ N(T)`), so at the
    /// fixpoint only `N[u] ⊆ N(T) ∪ (N(u) ∩ T)` is guaranteed.
    SourceOnly,
}

/// One failing set equation at a vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleViolation {
    /// `1` for the same-literal rule, `2` for the negated-literal rule.
    pub rule: u8,
    pub u: usize,
    pub v: usize,
    /// Vertices on exactly one side of the equation.
    pub difference: Vec<usize>,
}

/// Rule (i) at an adjacent same-literal pair: `N[u] = N[v]`.
/// Returns `None` when the rule does not apply.
fn rule_one_sides(g: &GadgetGraph, u: usize, v: usize) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    if g.literals[u] != g.literals[v] || !g.graph.has_edge(u, v) {
        return None;
    }
    Some((g.closed_neighbourhood(u), g.closed_neighbourhood(v)))
}

/// Rule (ii) at a negated-literal pair, with `T` the cluster of `v` minus `v`:
/// `N[u] = N(T) ∪ (N(u) ∩ T)`. Applies only when `u` has a neighbour in `T`,
/// since otherwise `u` is missing from the right side and no deletion helps.
fn rule_two_sides(g: &GadgetGraph, u: usize, v: usize) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    if g.literals[u] != -g.literals[v] {
        return None;
    }
    let t: Vec<usize> = g.clusters[g.cluster_of(v)].iter().copied().filter(|&w| w != v).collect();
    if !t.iter().any(|&w| g.graph.has_edge(u, w)) {
        return None;
    }
    let lhs = g.closed_neighbourhood(u);
    let mut rhs: BTreeSet<usize> = t.iter().flat_map(|&w| g.graph.neighbours(w)).collect();
    rhs.extend(t.iter().copied().filter(|&w| g.graph.has_edge(u, w)));
    Some((lhs, rhs))
}

fn sym_diff(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Vec<usize> {
    a.symmetric_difference(b).copied().collect()
}

/// Every applicable pair whose set equation fails. Under
/// [`Contraction::SourceOnly`] the negated-literal rule is checked as the
/// inclusion that mode guarantees.
pub fn rule_violations(g: &GadgetGraph, mode: Contraction) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for (u, v) in ordered_pairs(g) {
        if let Some((l, r)) = rule_one_sides(g, u, v) {
            if l != r {
                out.push(RuleViolation { rule: 1, u, v, difference: sym_diff(&l, &r) });
            }
        }
        if let Some((l, r)) = rule_two_sides(g, u, v) {
            let difference: Vec<usize> = match mode {
                Contraction::Intersect => sym_diff(&l, &r),
                Contraction::SourceOnly => l.difference(&r).copied().collect(),
            };
            if !difference.is_empty() {
                out.push(RuleViolation { rule: 2, u, v, difference });
            }
        }
    }
    out
}

/// Ordered pairs in distinct clusters whose literals share a variable,
/// sorted by (cluster, position) of `u` then of `v`.
fn ordered_pairs(g: &GadgetGraph) -> Vec<(usize, usize)> {
    let order: Vec<usize> = g.clusters.iter().flatten().copied().collect();
    let mut out = Vec::new();
    for &u in &order {
        for &v in &order {
            if u != v && g.literals[u].abs() == g.literals[v].abs() && g.cluster_of(u) != g.cluster_of(v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Deletes the edges that make rule (i) fail at `(u, v)`.
fn apply_rule_one(g: &mut GadgetGraph, u: usize, v: usize) -> usize {
    let Some((nu, nv)) = rule_one_sides(g, u, v) else { return 0 };
    let mut deleted = 0;
    for w in sym_diff(&nu, &nv) {
        // w ∉ {u, v} because u ~ v puts both in both sets
        let end = if nu.contains(&w) { u } else { v };
        deleted += usize::from(g.graph.remove_edge(end, w));
    }
    deleted
}

/// Deletes the edges that make rule (ii) fail at `(u, v)`: `u–w` when `w` is
/// not adjacent to `T`, and (when intersecting) all `T–w` edges when `w` is
/// not adjacent to `u`.
fn apply_rule_two(g: &mut GadgetGraph, u: usize, v: usize, mode: Contraction) -> usize {
    let Some((lhs, rhs)) = rule_two_sides(g, u, v) else { return 0 };
    let t: Vec<usize> = g.clusters[g.cluster_of(v)].iter().copied().filter(|&w| w != v).collect();
    let mut deleted = 0;
    for w in sym_diff(&lhs, &rhs) {
        if lhs.contains(&w) {
            deleted += usize::from(g.graph.remove_edge(u, w));
        } else if mode == Contraction::Intersect {
            for &x in &t {
                deleted += usize::from(g.graph.remove_edge(x, w));
            }
        }
    }
    deleted
}

fn sweep(g: &mut GadgetGraph, pairs: &[(usize, usize)], mode: Contraction) -> usize {
    let mut deleted = 0;
    for &(u, v) in pairs {
        deleted += apply_rule_one(g, u, v);
    }
    for &(u, v) in pairs {
        deleted += apply_rule_two(g, u, v, mode);
    }
    deleted
}

/// Deletion-only contraction to the fixpoint of both neighbourhood rules.
///
/// Each sweep scans ordered pairs (by cluster, then position), applying the
/// same-literal rule to all pairs before the negated-literal rule; sweeps
/// repeat until one deletes nothing.
pub fn quantum_gadget(g: &GadgetGraph) -> GadgetGraph {
    quantum_gadget_with(g, Contraction::Intersect)
}

pub fn quantum_gadget_with(g: &GadgetGraph, mode: Contraction) -> GadgetGraph {
    let mut out = g.clone();
    let pairs = ordered_pairs(&out);
    while sweep(&mut out, &pairs, mode) > 0 {}
    out
}

/// As [`quantum_gadget`] but with the pair order reshuffled every sweep.
/// The contraction is not known to be order-independent; this exists to
/// compare outcomes.
pub fn quantum_gadget_shuffled<R: Rng>(g: &GadgetGraph, mode: Contraction, rng: &mut R) -> GadgetGraph {
    let mut out = g.clone();
    let mut pairs = ordered_pairs(&out);
    loop {
        pairs.shuffle(rng);
        if sweep(&mut out, &pairs, mode) == 0 {
            return out;
        }
    }
}

/// DIMACS graph with `c cluster <i> <vertices…>` and `c literal <v> <±x>`
/// comment lines (1-based vertices, as in the edge lines).
pub fn write_gadget(g: &GadgetGraph) -> String {
    let mut s = String::new();
    for (i, c) in g.clusters.iter().enumerate() {
        let _ = write!(s, "c cluster {i}");
        for v in c {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for (v, l) in g.literals.iter().enumerate() {
        let _ = writeln!(s, "c literal {} {l}", v + 1);
    }
    s.push_str(&g.graph.to_dimacs());
    s
}

pub fn read_gadget(text: &str) -> Result<GadgetGraph> {
    let graph = parse_dimacs(text)?;
    let n = graph.n_vertices();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut literals = vec![0i32; n];
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<i64> { s.parse().map_err(|_| Error::parse(ln, format!("bad number '{s}'"))) };
        let vertex = |s: &str| -> Result<usize> {
            let v = num(s)?;
            if v < 1 || v as usize > n {
                return Err(Error::parse(ln, format!("vertex {v} out of range")));
            }
            Ok(v as usize - 1)
        };
        match f.as_slice() {
            ["c", "cluster", idx, vs @ ..] => {
                if num(idx)? as usize != clusters.len() {
                    return Err(Error::parse(ln, "clusters must be listed in order"));
                }
                clusters.push(vs.iter().map(|s| vertex(s)).collect::<Result<_>>()?);
            }
            ["c", "literal", v, l] => {
                let v = vertex(v)?;
                literals[v] = i32::try_from(num(l)?).map_err(|_| Error::parse(ln, "literal out of range"))?;
            }
            ["c", "cluster", ..] | ["c", "literal", ..] => return Err(Error::parse(ln, "malformed gadget line")),
            _ => {}
        }
    }
    let g = GadgetGraph { graph, clusters, literals };
    g.validate()?;
    Ok(g)
}
