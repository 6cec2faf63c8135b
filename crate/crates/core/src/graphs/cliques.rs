use super::Graph;

/// All maximal cliques by Bron–Kerbosch with Tomita pivoting. Each clique is
/// sorted; the list is sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let p: Vec<usize> = (0..g.n_vertices()).collect();
    bron_kerbosch(g, &mut Vec::new(), p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(g: &Graph, r: &mut Vec<usize>, mut p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
        .expect("p is nonempty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    for v in candidates {
        r.push(v);
        let np = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let nx = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

pub fn clique_number(g: &Graph) -> usize {
    maximal_cliques(g).iter().map(Vec::len).max().unwrap_or(0)
}

/// Every clique with exactly `k` vertices, each sorted ascending, in
/// lexicographic order. `k = 0` yields the single empty clique.
///
/// Cliques are grown in increasing vertex order so each appears once; the
/// maximal-clique routine would report `k`-subsets repeatedly.
pub fn cliques_of_size(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..g.n_vertices()).collect();
    extend(g, k, &mut Vec::new(), &all, &mut out);
    out
}

fn extend(g: &Graph, k: usize, cur: &mut Vec<usize>, cand: &[usize], out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let need = k - cur.len();
    for (idx, &v) in cand.iter().enumerate() {
        if cand.len() - idx < need {
            break;
        }
        let next: Vec<usize> = cand[idx + 1..].iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        cur.push(v);
        extend(g, k, cur, &next, out);
        cur.pop();
    }
}

/// Vertices outside `s` adjacent to every vertex of `s`.
pub fn common_neighbourhood(g: &Graph, s: &[usize]) -> Vec<usize> {
    (0..g.n_vertices()).filter(|v| !s.contains(v) && s.iter().all(|&u| g.has_edge(u, *v))).collect()
}

/// The subgraph of vertices and edges lying in some `n`-clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCore {
    /// Relabelled core graph on `0..vertices.len()`.
    pub graph: Graph,
    /// `vertices[q]` is the original vertex behind core vertex `q`, ascending.
    pub vertices: Vec<usize>,
}

pub fn clique_core(g: &Graph, n: usize) -> CliqueCore {
    let cliques = cliques_of_size(g, n);
    let mut keep = vec![false; g.n_vertices()];
    let mut keep_edge = Graph::empty(g.n_vertices());
    for c in &cliques {
        for (a, &u) in c.iter().enumerate() {
            keep[u] = true;
            for &v in &c[a + 1..] {
                keep_edge.add_edge(u, v).expect("clique edge");
            }
        }
    }
    let vertices: Vec<usize> = (0..g.n_vertices()).filter(|&v| keep[v]).collect();
    CliqueCore { graph: keep_edge.induced(&vertices), vertices }
}
