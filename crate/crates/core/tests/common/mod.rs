//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use syncgame::ncpoly::{rat, GeneratorId, NCPolynomial, Word};
use syncgame::sdp::{DenseSDP, Solution};

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

pub fn sym(n: usize, vals: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = vals[k % vals.len()];
            m[(j, i)] = m[(i, j)];
            k += 1;
        }
    }
    m
}

pub fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// A problem with known strictly feasible primal and dual points, so an
/// optimum exists.
pub fn feasible_sdp(dims: &[usize], m: usize, vals: &[f64]) -> (DenseSDP, Vec<Vec<DMatrix<f64>>>, Vec<f64>, Vec<DMatrix<f64>>) {
    let mut k = 0;
    let mut next = |n: usize| {
        k += 7;
        let shifted: Vec<f64> = vals.iter().cycle().skip(k).take(n * (n + 1) / 2).copied().collect();
        sym(n, &shifted)
    };
    let a: Vec<Vec<DMatrix<f64>>> = (0..m).map(|_| dims.iter().map(|&n| next(n)).collect()).collect();
    let x0: Vec<DMatrix<f64>> = dims.iter().map(|&n| {
        let r = next(n);
        &r * r.transpose() + DMatrix::identity(n, n)
    }).collect();
    let b: Vec<f64> = a.iter().map(|ai| ai.iter().zip(&x0).map(|(aa, xx)| frob(aa, xx)).sum()).collect();
    let y0: Vec<f64> = (0..m).map(|i| vals[i % vals.len()]).collect();
    let c: Vec<DMatrix<f64>> = dims
        .iter()
        .enumerate()
        .map(|(blk, &n)| {
            let r = next(n);
            let mut s0 = &r * r.transpose() + DMatrix::identity(n, n);
            for i in 0..m {
                s0 += &a[i][blk] * y0[i];
            }
            s0
        })
        .collect();
    (DenseSDP::from_dense(dims.to_vec(), &a, b.clone(), &c).unwrap(), a, b, c)
}

pub fn min_eig(ms: &[DMatrix<f64>]) -> f64 {
    ms.iter().map(|m| m.clone().symmetric_eigenvalues().min()).fold(f64::INFINITY, f64::min)
}

/// Recomputes feasibility and duality from the dense data, without the
/// solver's or the problem type's own residual code.
pub fn reverify(a: &[Vec<DMatrix<f64>>], b: &[f64], c: &[DMatrix<f64>], sol: &Solution, tol: f64) -> Result<(), String> {
    let x = &sol.x;
    let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (ai, bi) in a.iter().zip(b) {
        let lhs: f64 = ai.iter().zip(x).map(|(aa, xx)| frob(aa, xx)).sum();
        check((lhs - bi).abs() <= tol * scale, format!("primal residual {}", (lhs - bi).abs()))?;
    }
    let s: Vec<DMatrix<f64>> = c
        .iter()
        .enumerate()
        .map(|(blk, cb)| {
            let mut s = cb.clone();
            for (i, ai) in a.iter().enumerate() {
                s -= &ai[blk] * sol.y[i];
            }
            s
        })
        .collect();
    check(min_eig(x) >= -tol, format!("X not PSD: {}", min_eig(x)))?;
    check(min_eig(&s) >= -tol * (1.0 + sol.y.amax()), format!("S not PSD: {}", min_eig(&s)))?;
    let pobj: f64 = c.iter().zip(x).map(|(cc, xx)| frob(cc, xx)).sum();
    let dobj: f64 = b.iter().zip(sol.y.iter()).map(|(bb, yy)| bb * yy).sum();
    // weak duality: the gap equals ⟨X, S⟩ ≥ 0
    let xs: f64 = x.iter().zip(&s).map(|(xx, ss)| frob(xx, ss)).sum();
    check(pobj - dobj >= -tol * (1.0 + pobj.abs()), format!("negative gap {}", pobj - dobj))?;
    check((pobj - dobj - xs).abs() <= 1e-5 * (1.0 + pobj.abs()), format!("gap {} but <X, S> = {xs}", pobj - dobj))?;
    check((pobj - sol.primal_objective).abs() <= 1e-7 * (1.0 + pobj.abs()), format!("reported objective {} but data give {pobj}", sol.primal_objective))?;
    Ok(())
}

/// Dense data of a problem, for [`reverify`].
pub fn dense_data(sdp: &DenseSDP) -> (Vec<Vec<DMatrix<f64>>>, Vec<f64>, Vec<DMatrix<f64>>) {
    let a = sdp.constraints().iter().map(|e| sdp.dense(e)).collect();
    (a, sdp.rhs().to_vec(), sdp.dense(sdp.objective()))
}

/// `max ⟨J, X⟩` over circulant `X` with `Tr X = 1`, zero on the cycle's
/// edges: for `C_n` the free parameters are the distances `2..=n/2`. Grid
/// search over `|a| ≤ 1/n` followed by coordinate refinement; PSD by
/// eigenvalues.
pub fn circulant_theta(n: usize, steps: usize) -> f64 {
    assert!(n <= 6, "coordinate refinement is only reliable with one free distance");
    let free: Vec<usize> = (2..=n / 2).collect();
    let build = |a: &[f64]| {
        let mut x = DMatrix::from_element(n, n, 0.0);
        for i in 0..n {
            x[(i, i)] = 1.0 / n as f64;
            for (k, &d) in free.iter().enumerate() {
                x[(i, (i + d) % n)] = a[k];
                x[((i + d) % n, i)] = a[k];
            }
        }
        x
    };
    let value = |a: &[f64]| {
        let x = build(a);
        if x.clone().symmetric_eigenvalues().min() < -1e-12 { f64::NEG_INFINITY } else { x.sum() }
    };
    let mut best = vec![0.0; free.len()];
    let mut best_v = value(&best);
    let mut idx = vec![0usize; free.len()];
    loop {
        let a: Vec<f64> = idx.iter().map(|&i| (2.0 * i as f64 / steps as f64 - 1.0) / n as f64).collect();
        let v = value(&a);
        if v > best_v {
            best_v = v;
            best = a;
        }
        let Some(p) = idx.iter().position(|&i| i < steps) else { break };
        idx[p] += 1;
        for q in 0..p {
            idx[q] = 0;
        }
    }
    let mut h = 1.0 / (n as f64 * steps as f64);
    while h > 1e-12 {
        let mut moved = false;
        for k in 0..best.len() {
            for dir in [1.0, -1.0] {
                let mut a = best.clone();
                a[k] += dir * h;
                let v = value(&a);
                if v > best_v {
                    best_v = v;
                    best = a;
                    moved = true;
                }
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    best_v
}

/// A random polynomial in `x_{i,a}`, `i < n`, `a < m`, words of length ≤ 4.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, m: usize) -> NCPolynomial {
    let mut p = NCPolynomial::zero();
    for _ in 0..rng.gen_range(1..=6) {
        let len = rng.gen_range(0..=4);
        let w = Word::from_letters((0..len).map(|_| GeneratorId::new(rng.gen_range(0..n), rng.gen_range(0..m))));
        p.add_term(w, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
    }
    p
}

pub fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..3, 0usize..3), 0..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(i, a)| GeneratorId::new(i, a))))
}

pub fn arb_poly() -> impl Strategy<Value = NCPolynomial> {
    prop::collection::vec((arb_word(3), -4i64..=4, 1i64..=3), 0..5)
        .prop_map(|ts| NCPolynomial::from_terms(ts.into_iter().map(|(w, n, d)| (w, rat(n, d)))))
}
