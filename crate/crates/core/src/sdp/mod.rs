//! Small dense semidefinite programs in standard primal form
//!
//! ```text
//! minimize ⟨C, X⟩  subject to  ⟨A_i, X⟩ = b_i,  X ⪰ 0 (block diagonal)
//! maximize bᵀy     subject to  C - Σ y_i A_i = S ⪰ 0
//! ```

mod sdpa;
mod solver;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sdpa::{export_sdpa, import_sdpa};
pub use solver::{solve, solve_with, SolverOptions};

/// One upper-triangle entry (`row <= col`) of a symmetric block matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// Block-diagonal SDP data with sparse symmetric matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSDP {
    block_dims: Vec<usize>,
    constraints: Vec<Vec<Entry>>,
    rhs: Vec<f64>,
    objective: Vec<Entry>,
}

fn normalize(entries: Vec<Entry>, dims: &[usize], what: &str) -> Result<Vec<Entry>> {
    let mut map = std::collections::BTreeMap::new();
    for e in entries {
        let n = *dims
            .get(e.block)
            .ok_or_else(|| Error::DimensionMismatch(format!("{what}: block {} does not exist", e.block)))?;
        if e.row >= n || e.col >= n {
            return Err(Error::DimensionMismatch(format!(
                "{what}: entry ({}, {}) outside block {} of size {n}",
                e.row, e.col, e.block
            )));
        }
        if !e.value.is_finite() {
            return Err(Error::InvalidInput(format!("{what}: non-finite entry")));
        }
        let key = (e.block, e.row.min(e.col), e.row.max(e.col));
        *map.entry(key).or_insert(0.0) += e.value;
    }
    Ok(map
        .into_iter()
        .filter(|(_, v)| *v != 0.0)
        .map(|((block, row, col), value)| Entry { block, row, col, value })
        .collect())
}

impl DenseSDP {
    /// Entries may be given in either triangle; duplicates are summed.
    pub fn new(block_dims: Vec<usize>, constraints: Vec<Vec<Entry>>, rhs: Vec<f64>, objective: Vec<Entry>) -> Result<Self> {
        if constraints.len() != rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint matrices but {} right-hand sides",
                constraints.len(),
                rhs.len()
            )));
        }
        if block_dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("empty block".into()));
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite right-hand side".into()));
        }
        let constraints = constraints
            .into_iter()
            .enumerate()
            .map(|(i, c)| normalize(c, &block_dims, &format!("constraint {i}")))
            .collect::<Result<Vec<_>>>()?;
        let objective = normalize(objective, &block_dims, "objective")?;
        Ok(DenseSDP { block_dims, constraints, rhs, objective })
    }

    /// From dense block matrices; rejects non-symmetric input.
    pub fn from_dense(block_dims: Vec<usize>, a: &[Vec<DMatrix<f64>>], b: Vec<f64>, c: &[DMatrix<f64>]) -> Result<Self> {
        let to_entries = |mats: &[DMatrix<f64>], what: &str| -> Result<Vec<Entry>> {
            if mats.len() != block_dims.len() {
                return Err(Error::DimensionMismatch(format!("{what}: wrong number of blocks")));
            }
            let mut out = Vec::new();
            for (blk, m) in mats.iter().enumerate() {
                if m.nrows() != block_dims[blk] || m.ncols() != block_dims[blk] {
                    return Err(Error::DimensionMismatch(format!("{what}: block {blk} has the wrong shape")));
                }
                for i in 0..m.nrows() {
                    for j in i..m.ncols() {
                        if m[(i, j)] != m[(j, i)] {
                            return Err(Error::InvalidInput(format!("{what}: block {blk} is not symmetric")));
                        }
                        out.push(Entry { block: blk, row: i, col: j, value: m[(i, j)] });
                    }
                }
            }
            Ok(out)
        };
        let cons = a
            .iter()
            .enumerate()
            .map(|(i, m)| to_entries(m, &format!("constraint {i}")))
            .collect::<Result<Vec<_>>>()?;
        let obj = to_entries(c, "objective")?;
        DenseSDP::new(block_dims, cons, b, obj)
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn n_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn constraints(&self) -> &[Vec<Entry>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn objective(&self) -> &[Entry] {
        &self.objective
    }

    /// `⟨M, X⟩` for a sparse upper-triangle `M`.
    pub fn inner(entries: &[Entry], x: &[DMatrix<f64>]) -> f64 {
        entries
            .iter()
            .map(|e| {
                let v = e.value * x[e.block][(e.row, e.col)];
                if e.row == e.col {
                    v
                } else {
                    2.0 * v
                }
            })
            .sum()
    }

    /// Dense blocks of a sparse symmetric matrix.
    pub fn dense(&self, entries: &[Entry]) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.block_dims.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for e in entries {
            out[e.block][(e.row, e.col)] += e.value;
            if e.row != e.col {
                out[e.block][(e.col, e.row)] += e.value;
            }
        }
        out
    }

    /// Max-norm residuals of a candidate primal-dual pair, computed from the
    /// problem data alone.
    pub fn residuals(&self, x: &[DMatrix<f64>], y: &DVector<f64>, s: &[DMatrix<f64>]) -> Residuals {
        let primal = self
            .constraints
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (DenseSDP::inner(a, x) - b).abs())
            .fold(0.0, f64::max);
        let mut dual_mat = self.dense(&self.objective);
        for (i, a) in self.constraints.iter().enumerate() {
            for e in a {
                dual_mat[e.block][(e.row, e.col)] -= y[i] * e.value;
                if e.row != e.col {
                    dual_mat[e.block][(e.col, e.row)] -= y[i] * e.value;
                }
            }
        }
        let dual = dual_mat.iter().zip(s).map(|(d, s)| (d - s).amax()).fold(0.0, f64::max);
        let pobj = DenseSDP::inner(&self.objective, x);
        let dobj: f64 = self.rhs.iter().zip(y.iter()).map(|(b, y)| b * y).sum();
        let min_eig = |ms: &[DMatrix<f64>]| {
            ms.iter().map(|m| m.clone().symmetric_eigenvalues().min()).fold(f64::INFINITY, f64::min)
        };
        Residuals { primal, dual, primal_objective: pobj, dual_objective: dobj, min_eig_x: min_eig(x), min_eig_s: min_eig(s) }
    }
}

/// Independently recomputed feasibility measures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// `max_i |⟨A_i, X⟩ - b_i|`.
    pub primal: f64,
    /// `max |C - Σ y_i A_i - S|`.
    pub dual: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub min_eig_x: f64,
    pub min_eig_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    /// `y` is a Farkas ray: `bᵀy = 1` and `-Σ y_i A_i ⪰ 0` to tolerance.
    PrimalInfeasible,
    /// `X` is an improving ray: `⟨C, X⟩ = -1` and `⟨A_i, X⟩ = 0` to tolerance.
    DualInfeasible,
    /// Iteration limit or numerical breakdown; never read as infeasibility.
    NumericalFailure,
}

impl Status {
    pub fn is_infeasibility_certificate(self) -> bool {
        matches!(self, Status::PrimalInfeasible | Status::DualInfeasible)
    }
}

/// Per-iteration trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterInfo {
    /// `(⟨X, S⟩ + τκ) / (n + 1)` of the embedding.
    pub mu: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub relative_gap: f64,
    pub tau: f64,
    pub kappa: f64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub status: Status,
    pub x: Vec<DMatrix<f64>>,
    pub y: DVector<f64>,
    pub s: Vec<DMatrix<f64>>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    /// Largest of the relative primal, dual and gap measures at exit.
    pub achieved_tolerance: f64,
    pub history: Vec<IterInfo>,
}
