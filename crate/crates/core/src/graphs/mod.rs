//! Simple undirected graphs, DIMACS I/O, cliques and brute-force invariants.

mod cliques;
mod hsets;
mod invariants;

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use cliques::{clique_core, clique_number, cliques_of_size, common_neighbourhood, maximal_cliques, CliqueCore};
pub use hsets::{minimal_h_sets, HSet, H_SET_VERTEX_CAP};
pub use invariants::{chromatic_number, exact_invariants, homomorphisms, EXACT_VERTEX_CAP};

/// Loopless undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![false; n * n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set(u, v, true);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.set(u, (u + 1) % n, true);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.set(i, (i + 1) % 5, true);
            g.set(5 + i, 5 + (i + 2) % 5, true);
            g.set(i, 5 + i, true);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.set(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set(u + self.n, v + self.n, true);
        }
        g
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.adj[u * self.n + v] = on;
        self.adj[v * self.n + u] = on;
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range for {} vertices", self.n)));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("loop at vertex {u}")));
        }
        self.set(u, v, true);
        Ok(())
    }

    /// Returns whether the edge was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let had = self.has_edge(u, v);
        if had {
            self.set(u, v, false);
        }
        had
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u * self.n + v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[v * self.n + u]).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.adj[v * self.n + u]).count()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                g.set(u, v, !self.has_edge(u, v));
            }
        }
        g
    }

    /// Subgraph induced on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.set(a, b, true);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(a, &u)| vs[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// `G(n, p)` sample.
    pub fn random<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.set(u, v, true);
                }
            }
        }
        g
    }

    /// `count` graphs with `1..=max_n` vertices and edge density drawn from
    /// `[0.1, 0.9]`, deterministic in `seed`.
    pub fn random_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let n = rng.gen_range(1..=max_n);
                let p = rng.gen_range(0.1..0.9);
                Graph::random(n, p, &mut rng)
            })
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut s = format!("p edge {} {}\n", self.n, edges.len());
        for (u, v) in edges {
            let _ = writeln!(s, "e {} {}", u + 1, v + 1);
        }
        s
    }

    /// `v: n1 n2 ...` per vertex, 0-based.
    pub fn to_adjacency_list(&self) -> String {
        let mut s = String::new();
        for v in 0..self.n {
            let ns: Vec<String> = self.neighbours(v).iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{v}: {}", ns.join(" "));
        }
        s
    }
}

/// Reads the DIMACS edge format: `c` comments, one `p edge n m` header, then
/// 1-indexed `e u v` lines. Duplicate edges are collapsed.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let ln = ln + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if g.is_some() {
                    return Err(Error::parse(ln, "duplicate header"));
                }
                if toks.len() != 4 || !matches!(toks[1], "edge" | "col") {
                    return Err(Error::parse(ln, "expected 'p edge <n> <m>'"));
                }
                let n: usize = toks[2].parse().map_err(|_| Error::parse(ln, "bad vertex count"))?;
                let _m: usize = toks[3].parse().map_err(|_| Error::parse(ln, "bad edge count"))?;
                g = Some(Graph::empty(n));
            }
            "e" => {
                let graph = g.as_mut().ok_or_else(|| Error::parse(ln, "edge before header"))?;
                if toks.len() != 3 {
                    return Err(Error::parse(ln, "expected 'e <u> <v>'"));
                }
                let u: usize = toks[1].parse().map_err(|_| Error::parse(ln, "bad vertex index"))?;
                let v: usize = toks[2].parse().map_err(|_| Error::parse(ln, "bad vertex index"))?;
                if u == 0 || v == 0 || u > graph.n || v > graph.n {
                    return Err(Error::parse(ln, format!("vertex index out of range 1..={}", graph.n)));
                }
                if u == v {
                    return Err(Error::parse(ln, format!("loop at vertex {u}")));
                }
                graph.set(u - 1, v - 1, true);
            }
            other => return Err(Error::parse(ln, format!("unknown line type '{other}'"))),
        }
    }
    g.ok_or_else(|| Error::parse(1, "missing 'p edge' header"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_examples() {
        let k3 = parse_dimacs("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(k3, Graph::complete(3));
        let e2 = parse_dimacs("p edge 2 0\n").unwrap();
        assert_eq!(e2, Graph::empty(2));
        let err = parse_dimacs("p edge 2 1\ne 1 1\n").unwrap_err();
        assert!(err.to_string().contains("loop"));
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("p edge x 1\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
    }

    #[test]
    fn dimacs_round_trip_and_duplicates() {
        let g = parse_dimacs("c hello\np edge 4 3\ne 1 2\ne 2 1\ne 3 4\n").unwrap();
        assert_eq!(g.n_edges(), 2);
        assert_eq!(parse_dimacs(&g.to_dimacs()).unwrap(), g);
        let p = Graph::petersen();
        assert_eq!(parse_dimacs(&p.to_dimacs()).unwrap(), p);
    }

    #[test]
    fn petersen_is_cubic() {
        let p = Graph::petersen();
        assert_eq!(p.n_edges(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn complement_involution_on_corpus() {
        for g in Graph::random_corpus(50, 9, 7) {
            assert_eq!(g.complement().complement(), g);
        }
        assert_eq!(Graph::complete(5).complement(), Graph::empty(5));
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(Graph::random_corpus(20, 9, 3), Graph::random_corpus(20, 9, 3));
    }
}
