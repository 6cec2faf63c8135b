//! Primal-dual interior point on the homogeneous self-dual embedding
//!
//! ```text
//! A(X) - bτ = 0,   A*(y) + S - Cτ = 0,   ⟨C, X⟩ - bᵀy + κ = 0,
//! X, S ⪰ 0,   τ, κ ≥ 0
//! ```
//!
//! with Nesterov–Todd scaling and Mehrotra predictor-corrector steps, started
//! from `X = S = I`, `y = 0`, `τ = κ = 1`. A limit point with `τ > 0` yields an
//! optimal pair; `τ → 0` with `κ > 0` yields an infeasibility certificate.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::{DenseSDP, Entry, IterInfo, Solution, Status};

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the boundary taken per step.
    pub step_fraction: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-8, max_iter: 200, step_fraction: 0.98 }
    }
}

pub fn solve(sdp: &DenseSDP, tol: f64, max_iter: usize) -> Solution {
    solve_with(sdp, &SolverOptions { tol, max_iter, ..SolverOptions::default() })
}

type Blocks = Vec<DMatrix<f64>>;

/// Per-block NT scaling `W = G Gᵀ` with `G⁻¹ X G⁻ᵀ = Gᵀ S G = diag(λ)`.
struct Scaling {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    w: DMatrix<f64>,
    lambda: DVector<f64>,
}

fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<Scaling> {
    let lx = Cholesky::new(x.clone())?.unpack();
    let ls = Cholesky::new(s.clone())?.unpack();
    let svd = (ls.transpose() * &lx).svd(true, true);
    let u = svd.u?;
    let vt = svd.v_t?;
    let sigma = svd.singular_values;
    if sigma.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
        return None;
    }
    let n = x.nrows();
    let inv_sqrt = DMatrix::from_diagonal(&sigma.map(|v| 1.0 / v.sqrt()));
    let g = &lx * vt.transpose() * &inv_sqrt;
    let g_inv = &inv_sqrt * u.transpose() * ls.transpose();
    let w = &g * g.transpose();
    debug_assert_eq!(w.nrows(), n);
    Some(Scaling { g, g_inv, w, lambda: sigma })
}

/// Full symmetric expansion of the constraint matrices, grouped by block.
struct Data {
    dims: Vec<usize>,
    m: usize,
    b: DVector<f64>,
    c: Blocks,
    /// Per constraint: `(block, r, s, v)` for both triangles.
    full: Vec<Vec<(usize, usize, usize, f64)>>,
    /// Per block: `(constraint, r, s, v)` for both triangles.
    by_block: Vec<Vec<(usize, usize, usize, f64)>>,
}

impl Data {
    fn new(sdp: &DenseSDP) -> Self {
        let dims = sdp.block_dims().to_vec();
        let expand = |e: &Entry| {
            let mut v = vec![(e.block, e.row, e.col, e.value)];
            if e.row != e.col {
                v.push((e.block, e.col, e.row, e.value));
            }
            v
        };
        let full: Vec<Vec<_>> = sdp.constraints().iter().map(|a| a.iter().flat_map(expand).collect()).collect();
        let mut by_block = vec![Vec::new(); dims.len()];
        for (i, a) in full.iter().enumerate() {
            for &(blk, r, s, v) in a {
                by_block[blk].push((i, r, s, v));
            }
        }
        Data {
            m: sdp.n_constraints(),
            b: DVector::from_column_slice(sdp.rhs()),
            c: sdp.dense(sdp.objective()),
            full,
            by_block,
            dims,
        }
    }

    fn op(&self, x: &Blocks) -> DVector<f64> {
        DVector::from_iterator(self.m, self.full.iter().map(|a| a.iter().map(|&(b, r, s, v)| v * x[b][(r, s)]).sum()))
    }

    fn adj(&self, y: &DVector<f64>) -> Blocks {
        let mut out: Blocks = self.dims.iter().map(|&n| DMatrix::zeros(n, n)).collect();
        for (i, a) in self.full.iter().enumerate() {
            if y[i] == 0.0 {
                continue;
            }
            for &(b, r, s, v) in a {
                out[b][(r, s)] += y[i] * v;
            }
        }
        out
    }

    /// `M_ij = ⟨A_i, W A_j W⟩`.
    fn schur(&self, sc: &[Scaling]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.m, self.m);
        for (blk, entries) in self.by_block.iter().enumerate() {
            let n = self.dims[blk];
            let w = &sc[blk].w;
            let mut per_con: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); self.m];
            for &(i, r, s, v) in entries {
                per_con[i].push((r, s, v));
            }
            let total = entries.len();
            for (j, aj) in per_con.iter().enumerate() {
                if aj.is_empty() {
                    continue;
                }
                if total < n * n {
                    for &(i, r, s, v) in entries {
                        let mut acc = 0.0;
                        for &(p, q, u) in aj {
                            acc += u * w[(r, p)] * w[(q, s)];
                        }
                        m[(i, j)] += v * acc;
                    }
                } else {
                    let mut a = DMatrix::zeros(n, n);
                    for &(p, q, u) in aj {
                        a[(p, q)] += u;
                    }
                    let waw = w * a * w;
                    for &(i, r, s, v) in entries {
                        m[(i, j)] += v * waw[(r, s)];
                    }
                }
            }
        }
        (&m + m.transpose()) * 0.5
    }
}

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.component_mul(y).sum()).sum()
}

fn max_abs(a: &Blocks) -> f64 {
    a.iter().map(|m| m.amax()).fold(0.0, f64::max)
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Largest `α ≤ 1/0` with `diag(λ) + α·d ⪰ 0`, where `d` is in scaled space.
fn max_step_scaled(lambda: &DVector<f64>, d: &DMatrix<f64>) -> f64 {
    let inv_sqrt = lambda.map(|v| 1.0 / v.sqrt());
    let mut t = d.clone();
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            t[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let lmin = SymmetricEigen::new(sym(t)).eigenvalues.min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn ratio_step(v: f64, dv: f64) -> f64 {
    if dv < 0.0 {
        -v / dv
    } else {
        f64::INFINITY
    }
}

struct Direction {
    dx: Blocks,
    dy: DVector<f64>,
    ds: Blocks,
    dtau: f64,
    dkappa: f64,
}

struct Point {
    x: Blocks,
    y: DVector<f64>,
    s: Blocks,
    tau: f64,
    kappa: f64,
}

struct Newton<'a> {
    d: &'a Data,
    sc: &'a [Scaling],
    chol: Cholesky<f64, nalgebra::Dyn>,
    a_w: DVector<f64>,
    wcw: Blocks,
    /// `(b - a)ᵀ M⁻¹ (a + b) + ⟨C, WCW⟩ + κ/τ`, assembled from nonnegative parts.
    denom: f64,
    rp: DVector<f64>,
    rd: Blocks,
    rg: f64,
    tau: f64,
    kappa: f64,
}

impl Newton<'_> {
    /// Solves the linearized system for complementarity target `rc` (scaled
    /// space, per block), `τκ` target `r_tk`, and residual weight `eta`.
    fn solve(&self, rc: &[DMatrix<f64>], r_tk: f64, eta: f64) -> Direction {
        let d = self.d;
        let mut t: Blocks = Vec::with_capacity(d.dims.len());
        for (blk, sc) in self.sc.iter().enumerate() {
            let n = d.dims[blk];
            let mut dm = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    dm[(i, j)] = 2.0 * rc[blk][(i, j)] / (sc.lambda[i] + sc.lambda[j]);
                }
            }
            let tb = &sc.g * dm * sc.g.transpose() + (&sc.w * &self.rd[blk] * &sc.w) * eta;
            t.push(sym(tb));
        }
        let r1 = -(&self.rp * eta) - d.op(&t);
        let r2 = eta * self.rg + inner(&d.c, &t) + r_tk / self.tau;
        let p = self.chol.solve(&r1);
        let ab = &self.a_w + &d.b;
        let q = self.chol.solve(&ab);
        let bma = &d.b - &self.a_w;
        let denom = self.denom;
        let dtau = (r2 - bma.dot(&p)) / denom;
        let dy = &p + &q * dtau;
        let aty = d.adj(&dy);
        let mut ds = Vec::with_capacity(t.len());
        let mut dx = Vec::with_capacity(t.len());
        for blk in 0..d.dims.len() {
            ds.push(-&aty[blk] + &d.c[blk] * dtau - &self.rd[blk] * eta);
            let w = &self.sc[blk].w;
            dx.push(sym(&t[blk] + w * &aty[blk] * w - &self.wcw[blk] * dtau));
        }
        let dkappa = (r_tk - self.kappa * dtau) / self.tau;
        Direction { dx, dy, ds, dtau, dkappa }
    }

    fn scaled(&self, dir: &Direction) -> (Blocks, Blocks) {
        let mut sx = Vec::new();
        let mut ss = Vec::new();
        for (blk, sc) in self.sc.iter().enumerate() {
            sx.push(sym(&sc.g_inv * &dir.dx[blk] * sc.g_inv.transpose()));
            ss.push(sym(sc.g.transpose() * &dir.ds[blk] * &sc.g));
        }
        (sx, ss)
    }

    fn max_step(&self, dir: &Direction) -> f64 {
        let (sx, ss) = self.scaled(dir);
        let mut a = ratio_step(self.tau, dir.dtau).min(ratio_step(self.kappa, dir.dkappa));
        for (blk, sc) in self.sc.iter().enumerate() {
            a = a.min(max_step_scaled(&sc.lambda, &sx[blk])).min(max_step_scaled(&sc.lambda, &ss[blk]));
        }
        a
    }
}

fn step(pt: &Point, dir: &Direction, a: f64) -> Point {
    Point {
        x: pt.x.iter().zip(&dir.dx).map(|(x, d)| sym(x + d * a)).collect(),
        y: &pt.y + &dir.dy * a,
        s: pt.s.iter().zip(&dir.ds).map(|(s, d)| sym(s + d * a)).collect(),
        tau: pt.tau + a * dir.dtau,
        kappa: pt.kappa + a * dir.dkappa,
    }
}

/// Relative residual below which a constraint counts as a combination of
/// earlier ones.
const DEPENDENCE_TOL: f64 = 1e-10;

enum Presolve {
    Independent,
    /// Rows to keep, in order; the dropped ones are consistent combinations.
    Reduced(Vec<usize>),
    /// Farkas ray over all rows: `Σ y_i A_i = 0`, `bᵀy = 1`.
    Inconsistent(DVector<f64>),
}

/// Finds linearly dependent constraints by an incremental Cholesky
/// factorization of the Gram matrix `⟨A_i, A_j⟩`, scanning rows in order.
fn presolve(sdp: &DenseSDP) -> Presolve {
    use std::collections::HashMap;
    let m = sdp.n_constraints();
    let mut by_key: HashMap<(usize, usize, usize), Vec<(usize, f64)>> = HashMap::new();
    for (i, a) in sdp.constraints().iter().enumerate() {
        for e in a {
            let w = if e.row == e.col { 1.0 } else { 2f64.sqrt() };
            by_key.entry((e.block, e.row, e.col)).or_default().push((i, e.value * w));
        }
    }
    let mut gram = DMatrix::<f64>::zeros(m, m);
    for list in by_key.values() {
        for &(i, a) in list {
            for &(j, b) in list {
                gram[(i, j)] += a * b;
            }
        }
    }
    let b = sdp.rhs();
    let mut kept: Vec<usize> = Vec::new();
    // rows of L for the kept constraints, in kept order
    let mut l: Vec<Vec<f64>> = Vec::new();
    for r in 0..m {
        let g: Vec<f64> = kept.iter().map(|&k| gram[(k, r)]).collect();
        let mut z = vec![0.0; kept.len()];
        for i in 0..kept.len() {
            let acc: f64 = (0..i).map(|j| l[i][j] * z[j]).sum();
            z[i] = (g[i] - acc) / l[i][i];
        }
        let resid = gram[(r, r)] - z.iter().map(|v| v * v).sum::<f64>();
        if resid > DEPENDENCE_TOL * gram[(r, r)].max(f64::MIN_POSITIVE) {
            let mut row = z;
            row.push(resid.sqrt());
            l.push(row);
            kept.push(r);
            continue;
        }
        // A_r = Σ c_k A_k over kept rows: solve Lᵀ c = z
        let mut c = vec![0.0; kept.len()];
        for i in (0..kept.len()).rev() {
            let acc: f64 = (i + 1..kept.len()).map(|j| l[j][i] * c[j]).sum();
            c[i] = (z[i] - acc) / l[i][i];
        }
        let delta = b[r] - kept.iter().zip(&c).map(|(&k, ck)| ck * b[k]).sum::<f64>();
        let scale = 1.0 + b[r].abs() + kept.iter().zip(&c).map(|(&k, ck)| (ck * b[k]).abs()).sum::<f64>();
        if delta.abs() > 1e-9 * scale {
            let mut y = DVector::zeros(m);
            y[r] = 1.0 / delta;
            for (&k, ck) in kept.iter().zip(&c) {
                y[k] = -ck / delta;
            }
            return Presolve::Inconsistent(y);
        }
    }
    if kept.len() == m {
        Presolve::Independent
    } else {
        Presolve::Reduced(kept)
    }
}

/// Solves after removing dependent constraints; `y` is reported over the
/// original rows with zeros at the removed ones.
pub fn solve_with(sdp: &DenseSDP, opts: &SolverOptions) -> Solution {
    match presolve(sdp) {
        Presolve::Independent => solve_independent(sdp, opts),
        Presolve::Reduced(kept) => {
            let reduced = DenseSDP::new(
                sdp.block_dims().to_vec(),
                kept.iter().map(|&k| sdp.constraints()[k].clone()).collect(),
                kept.iter().map(|&k| sdp.rhs()[k]).collect(),
                sdp.objective().to_vec(),
            )
            .expect("rows of a valid problem");
            let mut sol = solve_independent(&reduced, opts);
            let mut y = DVector::zeros(sdp.n_constraints());
            for (i, &k) in kept.iter().enumerate() {
                y[k] = sol.y[i];
            }
            sol.y = y;
            sol
        }
        Presolve::Inconsistent(y) => {
            let zeros: Blocks = sdp.block_dims().iter().map(|&n| DMatrix::zeros(n, n)).collect();
            Solution {
                status: Status::PrimalInfeasible,
                x: zeros.clone(),
                dual_objective: sdp.rhs().iter().zip(y.iter()).map(|(b, y)| b * y).sum(),
                y,
                s: zeros,
                primal_objective: 0.0,
                iterations: 0,
                achieved_tolerance: 0.0,
                history: Vec::new(),
            }
        }
    }
}

fn solve_independent(sdp: &DenseSDP, opts: &SolverOptions) -> Solution {
    let d = Data::new(sdp);
    let nu = d.dims.iter().sum::<usize>() as f64 + 1.0;
    let norm_b = d.b.amax();
    let norm_c = max_abs(&d.c);
    let mut pt = Point {
        x: d.dims.iter().map(|&n| DMatrix::identity(n, n)).collect(),
        y: DVector::zeros(d.m),
        s: d.dims.iter().map(|&n| DMatrix::identity(n, n)).collect(),
        tau: 1.0,
        kappa: 1.0,
    };
    let mut history = Vec::new();
    let finish = |pt: &Point, status: Status, iterations: usize, history: Vec<IterInfo>, achieved: f64| {
        let (scale, xs) = match status {
            Status::PrimalInfeasible => (d.b.dot(&pt.y), false),
            Status::DualInfeasible => (-inner(&d.c, &pt.x), true),
            _ => (pt.tau, true),
        };
        let scale = if scale.abs() > 0.0 { scale } else { 1.0 };
        let x: Blocks = pt.x.iter().map(|m| m / if xs { scale } else { 1.0 }).collect();
        let y = &pt.y / scale;
        let s: Blocks = pt.s.iter().map(|m| m / scale).collect();
        Solution {
            status,
            primal_objective: inner(&d.c, &x),
            dual_objective: d.b.dot(&y),
            x,
            y,
            s,
            iterations,
            achieved_tolerance: achieved,
            history,
        }
    };

    for iter in 0..=opts.max_iter {
        let ax = d.op(&pt.x);
        let rp = &ax - &d.b * pt.tau;
        let aty = d.adj(&pt.y);
        let rd: Blocks = (0..d.dims.len()).map(|k| &aty[k] + &pt.s[k] - &d.c[k] * pt.tau).collect();
        let cx = inner(&d.c, &pt.x);
        let by = d.b.dot(&pt.y);
        let rg = cx - by + pt.kappa;
        let mu = (inner(&pt.x, &pt.s) + pt.tau * pt.kappa) / nu;

        let pinf = rp.amax() / pt.tau / (1.0 + norm_b);
        let dinf = max_abs(&rd) / pt.tau / (1.0 + norm_c);
        let gap = (cx - by).abs() / pt.tau / (1.0 + (cx / pt.tau).abs() + (by / pt.tau).abs());
        history.push(IterInfo {
            mu,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            relative_gap: gap,
            tau: pt.tau,
            kappa: pt.kappa,
        });
        let achieved = pinf.max(dinf).max(gap);
        if achieved <= opts.tol {
            return finish(&pt, Status::Optimal, iter, history, achieved);
        }
        if by > 0.0 {
            let ray: Blocks = (0..d.dims.len()).map(|k| &aty[k] + &pt.s[k]).collect();
            if max_abs(&ray) / by <= opts.tol {
                return finish(&pt, Status::PrimalInfeasible, iter, history, max_abs(&ray) / by);
            }
        }
        if cx < 0.0 && ax.amax() / -cx <= opts.tol {
            return finish(&pt, Status::DualInfeasible, iter, history, ax.amax() / -cx);
        }
        if iter == opts.max_iter || !mu.is_finite() {
            return finish(&pt, Status::NumericalFailure, iter, history, achieved);
        }

        let Some(sc) = pt.x.iter().zip(&pt.s).map(|(x, s)| nt_scaling(x, s)).collect::<Option<Vec<_>>>() else {
            return finish(&pt, Status::NumericalFailure, iter, history, achieved);
        };
        let mmat = d.schur(&sc);
        let chol = match Cholesky::new(mmat.clone()) {
            Some(c) => c,
            None => {
                let reg = 1e-12 * (1.0 + mmat.diagonal().amax());
                match Cholesky::new(mmat + DMatrix::identity(d.m, d.m) * reg) {
                    Some(c) => c,
                    None => return finish(&pt, Status::NumericalFailure, iter, history, achieved),
                }
            }
        };
        let wcw: Blocks = sc.iter().zip(&d.c).map(|(s, c)| sym(&s.w * c * &s.w)).collect();
        let a_w = d.op(&wcw);
        // ⟨C,WCW⟩ - aᵀM⁻¹a = ‖C - A*(M⁻¹a)‖²_W; the direct form cancels badly near the optimum
        let z = chol.solve(&a_w);
        let atz = d.adj(&z);
        let proj: f64 = (0..d.dims.len())
            .map(|k| {
                let r = &d.c[k] - &atz[k];
                (sc[k].g.transpose() * r * &sc[k].g).norm_squared()
            })
            .sum();
        let denom = d.b.dot(&chol.solve(&d.b)) + proj + pt.kappa / pt.tau;
        let newton = Newton { d: &d, sc: &sc, chol, a_w, wcw, denom, rp, rd, rg, tau: pt.tau, kappa: pt.kappa };

        // predictor
        let lam2: Blocks = sc.iter().map(|s| DMatrix::from_diagonal(&s.lambda.map(|v| -v * v))).collect();
        let aff = newton.solve(&lam2, -pt.tau * pt.kappa, 1.0);
        let a_aff = newton.max_step(&aff).min(1.0);
        let trial = step(&pt, &aff, a_aff);
        let mu_aff = (inner(&trial.x, &trial.s) + trial.tau * trial.kappa) / nu;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let (ax_s, as_s) = newton.scaled(&aff);
        let rc: Blocks = sc
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let n = s.lambda.len();
                let cross = sym(&ax_s[k] * &as_s[k]);
                DMatrix::identity(n, n) * (sigma * mu) - DMatrix::from_diagonal(&s.lambda.map(|v| v * v)) - cross
            })
            .collect();
        let r_tk = sigma * mu - pt.tau * pt.kappa - aff.dtau * aff.dkappa;
        let dir = newton.solve(&rc, r_tk, 1.0 - sigma);
        let a = (opts.step_fraction * newton.max_step(&dir)).min(1.0);
        if !(a > 0.0) {
            return finish(&pt, Status::NumericalFailure, iter, history, achieved);
        }
        pt = step(&pt, &dir, a);
    }
    unreachable!("loop returns at max_iter")
}
