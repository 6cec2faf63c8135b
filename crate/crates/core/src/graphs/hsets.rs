use super::cliques::{clique_core, cliques_of_size};
use super::Graph;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest core accepted by the exhaustive subset search.
pub const H_SET_VERTEX_CAP: usize = 24;

/// A vertex set meeting every `n`-clique of the core in exactly `m` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSet {
    /// Original vertex ids, ascending.
    pub vertices: Vec<usize>,
    pub m: usize,
    /// No nonempty proper subset has constant intersection.
    pub inclusion_minimal: bool,
    /// Not a disjoint union of two nonempty constant-intersection sets.
    pub indecomposable: bool,
}

/// Every constant-intersection set over the core of `(g, n)` that is both
/// inclusion-minimal and indecomposable, sorted by size then vertex list.
///
/// Over the core every vertex lies in some clique, so a nonempty set never
/// meets all cliques in zero vertices. Removing a constant subset from a
/// constant set therefore leaves a constant set, and the two filters select
/// the same sets. Both are still computed and reported.
pub fn minimal_h_sets(g: &Graph, n: usize, size_cap: usize, exec: Exec) -> Result<Vec<HSet>> {
    let core = clique_core(g, n);
    let q = core.vertices.len();
    if q == 0 {
        return Err(Error::InvalidInput(format!("graph has no {n}-clique")));
    }
    if q > size_cap.min(H_SET_VERTEX_CAP) {
        return Err(Error::ResourceLimit(format!(
            "core has {q} vertices, cap is {}",
            size_cap.min(H_SET_VERTEX_CAP)
        )));
    }
    let cliques: Vec<u32> = cliques_of_size(&core.graph, n)
        .iter()
        .map(|c| c.iter().fold(0u32, |acc, &v| acc | (1 << v)))
        .collect();
    let constant = |h: u32| -> Option<usize> {
        let m = (h & cliques[0]).count_ones();
        cliques.iter().all(|&c| (h & c).count_ones() == m).then_some(m as usize)
    };

    // Scan all nonempty subsets in chunks.
    let total: u64 = 1u64 << q;
    let chunk = 1u64 << q.saturating_sub(6).min(16);
    let n_chunks = total.div_ceil(chunk) as usize;
    let found: Vec<Vec<(u32, usize)>> = exec.map_range(n_chunks, |c| {
        let lo = (c as u64 * chunk).max(1);
        let hi = ((c as u64 + 1) * chunk).min(total);
        (lo..hi).filter_map(|h| constant(h as u32).map(|m| (h as u32, m))).collect()
    });
    let mut all: Vec<(u32, usize)> = found.into_iter().flatten().collect();
    all.sort_by_key(|&(h, _)| (h.count_ones(), h));

    let mut minimal: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    for &(h, m) in &all {
        let inclusion_minimal = !minimal.iter().any(|&s| s & h == s);
        if !inclusion_minimal {
            continue;
        }
        minimal.push(h);
        let indecomposable = indecomposable(h, &constant);
        if indecomposable {
            let vertices = (0..q).filter(|&v| h >> v & 1 == 1).map(|v| core.vertices[v]).collect();
            out.push(HSet { vertices, m, inclusion_minimal, indecomposable });
        }
    }
    out.sort_by(|a, b| a.vertices.len().cmp(&b.vertices.len()).then_with(|| a.vertices.cmp(&b.vertices)));
    Ok(out)
}

fn indecomposable(h: u32, constant: &impl Fn(u32) -> Option<usize>) -> bool {
    // Proper nonempty submasks containing the lowest bit, so each split is seen once.
    let low = h & h.wrapping_neg();
    let rest = h ^ low;
    let mut sub = rest;
    loop {
        let part = sub | low;
        if part != h && constant(part).is_some() && constant(h ^ part).is_some() {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & rest;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(g: &Graph, n: usize) -> Vec<(Vec<usize>, usize)> {
        minimal_h_sets(g, n, 20, Exec::Sequential).unwrap().into_iter().map(|h| (h.vertices, h.m)).collect()
    }

    #[test]
    fn complete_graph_gives_singletons() {
        for n in 2..6 {
            let expected: Vec<_> = (0..n).map(|v| (vec![v], 1)).collect();
            assert_eq!(sets(&Graph::complete(n), n), expected);
        }
    }

    #[test]
    fn two_triangles_give_nine_pairs() {
        let g = Graph::complete(3).disjoint_union(&Graph::complete(3));
        let got = sets(&g, 3);
        let mut expected = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                expected.push((vec![a, b], 1));
            }
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn odd_cycle_needs_everything() {
        assert_eq!(sets(&Graph::cycle(5), 2), vec![((0..5).collect(), 2)]);
        assert_eq!(sets(&Graph::cycle(7), 2), vec![((0..7).collect(), 2)]);
    }

    #[test]
    fn every_set_meets_every_clique_equally() {
        for g in Graph::random_corpus(40, 8, 5) {
            for n in 2..4 {
                let Ok(hs) = minimal_h_sets(&g, n, 20, Exec::Parallel) else { continue };
                let cliques = cliques_of_size(&g, n);
                for h in &hs {
                    assert!(h.inclusion_minimal && h.indecomposable);
                    for c in &cliques {
                        assert_eq!(c.iter().filter(|v| h.vertices.contains(v)).count(), h.m);
                    }
                }
            }
        }
    }

    #[test]
    fn limits() {
        assert!(minimal_h_sets(&Graph::cycle(5), 3, 20, Exec::Sequential).is_err());
        assert!(matches!(
            minimal_h_sets(&Graph::complete(6), 3, 5, Exec::Sequential),
            Err(Error::ResourceLimit(_))
        ));
    }
}
