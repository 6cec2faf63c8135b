use super::cliques::clique_number;
use super::Graph;
use crate::error::{Error, Result};

/// Vertex cap for [`exact_invariants`].
pub const EXACT_VERTEX_CAP: usize = 12;

/// Exact `(ω, χ)` by exhaustive search.
pub fn exact_invariants(g: &Graph) -> Result<(usize, usize)> {
    if g.n_vertices() > EXACT_VERTEX_CAP {
        return Err(Error::ResourceLimit(format!(
            "{} vertices exceeds the exact-invariant cap {EXACT_VERTEX_CAP}",
            g.n_vertices()
        )));
    }
    Ok((clique_number(g), chromatic_number(g)))
}

/// Smallest `k` admitting a proper `k`-colouring, by backtracking.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.n_vertices();
    if n == 0 {
        return 0;
    }
    // Colour high-degree vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let lower = clique_number(g).max(1);
    (lower..=n).find(|&k| colourable(g, &order, k)).expect("n colours always suffice")
}

fn colourable(g: &Graph, order: &[usize], k: usize) -> bool {
    let mut colour = vec![usize::MAX; g.n_vertices()];
    fn go(g: &Graph, order: &[usize], k: usize, idx: usize, colour: &mut [usize], used: usize) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        // Symmetry breaking: at most one fresh colour per step.
        for c in 0..k.min(used + 1) {
            if (0..g.n_vertices()).all(|u| colour[u] != c || !g.has_edge(u, v)) {
                colour[v] = c;
                if go(g, order, k, idx + 1, colour, used.max(c + 1)) {
                    return true;
                }
                colour[v] = usize::MAX;
            }
        }
        false
    }
    go(g, order, k, 0, &mut colour, 0)
}

/// Number of graph homomorphisms `G → H`, by exhaustive search.
pub fn homomorphisms(g: &Graph, h: &Graph) -> u64 {
    fn go(g: &Graph, h: &Graph, v: usize, map: &mut Vec<usize>) -> u64 {
        if v == g.n_vertices() {
            return 1;
        }
        let mut total = 0;
        for t in 0..h.n_vertices() {
            if (0..v).all(|u| !g.has_edge(u, v) || h.has_edge(map[u], t)) {
                map.push(t);
                total += go(g, h, v + 1, map);
                map.pop();
            }
        }
        total
    }
    go(g, h, 0, &mut Vec::new())
}
