//! Lovász theta and the exact locally-commuting Gram witness.
//!
//! `lovasz_theta(g)` solves `max ⟨S, J⟩ s.t. S_uv = 0 for u ~ v in g,
//! Tr S = 1, S ⪰ 0`. The edges of the argument are zeroed, so the sandwich
//! `ω(G) ≤ ϑ(Ḡ) ≤ χ(G)` is evaluated as `lovasz_theta(&g.complement())`.

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphs::{clique_core, minimal_h_sets, Graph, H_SET_VERTEX_CAP};
use crate::linalg::{ldlt_psd, RatMatrix};
use crate::ncpoly::Coeff;
use crate::sdp::{solve_with, DenseSDP, Entry, SolverOptions, Status};

/// Largest argument accepted by [`lovasz_theta`].
pub const THETA_VERTEX_CAP: usize = 200;

#[derive(Clone, Debug)]
pub struct ThetaResult {
    pub value: f64,
    pub witness: DMatrix<f64>,
    pub achieved_tolerance: f64,
    pub iterations: usize,
}

pub fn theta_sdp(g: &Graph) -> DenseSDP {
    let n = g.n_vertices();
    let mut cons: Vec<Vec<Entry>> = g.edges().into_iter().map(|(u, v)| vec![Entry { block: 0, row: u, col: v, value: 1.0 }]).collect();
    let mut rhs = vec![0.0; cons.len()];
    cons.push((0..n).map(|v| Entry { block: 0, row: v, col: v, value: 1.0 }).collect());
    rhs.push(1.0);
    let mut obj = Vec::new();
    for u in 0..n {
        for v in u..n {
            // upper triangle only: off-diagonal entries stand for both halves
            obj.push(Entry { block: 0, row: u, col: v, value: -1.0 });
        }
    }
    DenseSDP::new(vec![n], cons, rhs, obj).expect("theta SDP is well formed")
}

pub fn lovasz_theta(g: &Graph) -> Result<ThetaResult> {
    lovasz_theta_with(g, &SolverOptions::default())
}

pub fn lovasz_theta_with(g: &Graph, opts: &SolverOptions) -> Result<ThetaResult> {
    let n = g.n_vertices();
    if n == 0 {
        return Ok(ThetaResult { value: 0.0, witness: DMatrix::zeros(0, 0), achieved_tolerance: 0.0, iterations: 0 });
    }
    if n > THETA_VERTEX_CAP {
        return Err(Error::ResourceLimit(format!("{n} vertices, cap is {THETA_VERTEX_CAP}")));
    }
    let sol = solve_with(&theta_sdp(g), opts);
    if sol.status != Status::Optimal {
        return Err(Error::Solver(format!("theta SDP ended with status {:?}", sol.status)));
    }
    Ok(ThetaResult {
        value: -sol.primal_objective,
        witness: sol.x[0].clone(),
        achieved_tolerance: sol.achieved_tolerance,
        iterations: sol.iterations,
    })
}

/// Exact Gram witness for `ϑ(Ḡ) ≥ n` built from a largest constant-intersection
/// set `H_max` with `m = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct LcWitness {
    /// Vertices of `H_max`, ascending; coordinate `i` of each image is vertex `h_max[i]`.
    pub h_max: Vec<usize>,
    /// `τ(e_v)` for every vertex of the graph; vertices outside the core map to zero.
    pub images: Vec<Vec<u8>>,
    /// Vertices outside the clique core (zero rows of the Gram matrix).
    pub outside_core: Vec<usize>,
    #[serde(skip)]
    pub gram: RatMatrix,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Coeff,
}

fn ser_ratio<S: serde::Serializer>(r: &Coeff, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl LcWitness {
    pub fn h(&self) -> usize {
        self.h_max.len()
    }

    /// `τ(1)`: the all-ones vector.
    pub fn unit_image(&self) -> Vec<u8> {
        vec![1; self.h()]
    }

    pub fn trace(&self) -> Coeff {
        (0..self.gram.len()).map(|i| self.gram[i][i].clone()).sum()
    }

    pub fn total(&self) -> Coeff {
        self.gram.iter().flatten().sum()
    }

    /// Independent re-check: 0/1 images, Gram consistency, zero pattern on
    /// non-adjacent pairs of `g`, exact PSD, and the ratio `n`.
    pub fn verify(&self, g: &Graph, n: usize) -> bool {
        let nv = g.n_vertices();
        if self.images.len() != nv || self.gram.len() != nv || self.images.iter().any(|v| v.len() != self.h() || v.iter().any(|&b| b > 1)) {
            return false;
        }
        for u in 0..nv {
            for v in 0..nv {
                let dot: u64 = self.images[u].iter().zip(&self.images[v]).map(|(&a, &b)| u64::from(a * b)).sum();
                if self.gram[u][v] != Coeff::from_integer(dot.into()) {
                    return false;
                }
                if u != v && !g.has_edge(u, v) && !self.gram[u][v].is_zero() {
                    return false;
                }
            }
        }
        let tr = self.trace();
        !tr.is_zero()
            && ldlt_psd(&self.gram).psd
            && self.total() / &tr == Coeff::from_integer(n.into())
            && self.ratio == Coeff::from_integer(n.into())
    }
}

pub fn lc_theta_witness(g: &Graph, n: usize) -> Result<LcWitness> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let sets = minimal_h_sets(g, n, H_SET_VERTEX_CAP, Exec::default())?;
    if let Some(bad) = sets.iter().find(|h| h.m != 1) {
        return Err(Error::Unsupported(format!(
            "constant-intersection set {:?} meets every {n}-clique in m = {} vertices; the witness needs m = 1",
            bad.vertices, bad.m
        )));
    }
    // largest, then lexicographically smallest
    let h_max = sets
        .iter()
        .map(|h| &h.vertices)
        .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("no {n}-clique")))?;
    let core = clique_core(g, n);
    let in_core = |v: usize| core.vertices.binary_search(&v).is_ok();
    let q_adj = |u: usize, v: usize| {
        let (Ok(a), Ok(b)) = (core.vertices.binary_search(&u), core.vertices.binary_search(&v)) else {
            return false;
        };
        core.graph.has_edge(a, b)
    };
    let nv = g.n_vertices();
    let h = h_max.len();
    let mut images = vec![vec![0u8; h]; nv];
    for v in 0..nv {
        if !in_core(v) {
            continue;
        }
        for (i, &k) in h_max.iter().enumerate() {
            if k == v || q_adj(v, k) {
                images[v][i] = 1;
            }
        }
    }
    let gram: RatMatrix = (0..nv)
        .map(|u| {
            (0..nv)
                .map(|v| {
                    let dot: u64 = images[u].iter().zip(&images[v]).map(|(&a, &b)| u64::from(a * b)).sum();
                    Coeff::from_integer(dot.into())
                })
                .collect()
        })
        .collect();
    let mut w = LcWitness {
        h_max,
        images,
        outside_core: (0..nv).filter(|&v| !in_core(v)).collect(),
        gram,
        ratio: Coeff::zero(),
    };
    let tr = w.trace();
    w.ratio = if tr.is_zero() { Coeff::zero() } else { w.total() / tr };
    if !w.verify(g, n) {
        return Err(Error::Unsupported(format!("the Gram construction does not reach ratio {n} on this graph (got {})", w.ratio)));
    }
    Ok(w)
}
