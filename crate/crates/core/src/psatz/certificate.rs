use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;

use super::build::{build_refutation_sdp_with, gram_from_solution, gram_polynomial, nc_monomial_basis, PsatzLimits, SDPProblem};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::games::GamePresentation;
use crate::groebner::TriState;
use crate::linalg::{ldlt_psd, project_affine, round_to_grid, RatMatrix};
use crate::ncpoly::{Coeff, NCPolynomial, Word};
use crate::sdp::{solve_with, Solution, SolverOptions, Status};

/// Smallest slack `t = λ_min(S)` accepted as a numeric refutation.
pub const SLACK_THRESHOLD: f64 = 1e-6;

/// Gram diagonal entries below this (relative) are treated as zero when the
/// slack is pinned at zero and the basis is shrunk to the supporting words.
const FACE_TOL: f64 = 1e-7;
const FACE_ROUNDS: usize = 6;

const FIRST_DENOMINATOR: u64 = 1_000_000;
const LAST_DENOMINATOR: u64 = 1_000_000_000_000;

/// `1 + [x]* S [x] = Σ_ℓ f_ℓ h_ℓ + Σ_ℓ h_ℓ* g_ℓ` with `S ⪰ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub words: Vec<Word>,
    pub s: RatMatrix,
    pub f: Vec<NCPolynomial>,
    pub g: Vec<NCPolynomial>,
}

impl RefutationCertificate {
    pub fn degree_bound(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// Rounds a numeric Gram matrix onto the grid `Z/D`, projects it onto the exact constraints and
/// reads off the ideal coefficients. `D` doubles from 10⁶ to 10¹²
/// while the projection is not PSD.
pub fn certificate_from_gram(problem: &SDPProblem, s_num: &DMatrix<f64>) -> Result<RefutationCertificate> {
    let n = problem.basis.len();
    if s_num.nrows() != n || s_num.ncols() != n {
        return Err(Error::DimensionMismatch(format!("Gram matrix is {}x{}, basis has {n} words", s_num.nrows(), s_num.ncols())));
    }
    if problem.inconsistent {
        return Err(Error::NumericOnly("the degree-bounded constraints are inconsistent".into()));
    }
    let mut den = FIRST_DENOMINATOR;
    loop {
        let s: RatMatrix = (0..n)
            .map(|u| (0..n).map(|v| round_to_grid(0.5 * (s_num[(u, v)] + s_num[(v, u)]), den)).collect())
            .collect();
        match certificate_from_rational(problem, &s) {
            Err(Error::NumericOnly(msg)) if msg == NOT_PSD && den < LAST_DENOMINATOR => den = (den * 2).min(LAST_DENOMINATOR),
            Err(Error::NumericOnly(msg)) if msg == NOT_PSD => {
                return Err(Error::NumericOnly(format!("projected Gram matrix is not PSD for denominators up to {den}")))
            }
            other => return other,
        }
    }
}

const NOT_PSD: &str = "projected Gram matrix is not PSD";

/// Projects an exact symmetric matrix onto the constraints (a no-op when it
/// already satisfies them) and completes the certificate if the result is PSD.
pub fn certificate_from_rational(problem: &SDPProblem, s: &RatMatrix) -> Result<RefutationCertificate> {
    let n = problem.basis.len();
    if s.len() != n || s.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("Gram matrix is not {n}x{n}")));
    }
    if problem.inconsistent {
        return Err(Error::NumericOnly("the degree-bounded constraints are inconsistent".into()));
    }
    let mut x = vec![Coeff::zero(); problem.n_vars()];
    for u in 0..n {
        for v in u..n {
            x[problem.var_index(u, v)] = s[u][v].clone();
        }
    }
    let Some(p) = project_affine(&x, &problem.rows, &problem.rhs) else {
        return Err(Error::NumericOnly("affine constraints are inconsistent".into()));
    };
    let mut out = vec![vec![Coeff::zero(); n]; n];
    for u in 0..n {
        for v in u..n {
            let c = p[problem.var_index(u, v)].clone();
            out[v][u] = c.clone();
            out[u][v] = c;
        }
    }
    if !ldlt_psd(&out).psd {
        return Err(Error::NumericOnly(NOT_PSD.into()));
    }
    finish(problem, out)
}

fn finish(problem: &SDPProblem, s: RatMatrix) -> Result<RefutationCertificate> {
    let target = gram_polynomial(&problem.basis.words, &s);
    let map = target.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    let red = problem.echelon.reduce(&map);
    if !red.remainder.is_empty() {
        return Err(Error::NumericOnly("Gram polynomial is outside the degree-bounded ideal span".into()));
    }
    let mut f = vec![NCPolynomial::zero(); problem.n_relations];
    let mut g = vec![NCPolynomial::zero(); problem.n_relations];
    for (idx, c) in red.input_weights {
        let col = &problem.columns[idx];
        let dst = if col.right { &mut g[col.relation] } else { &mut f[col.relation] };
        dst.add_term(col.word.clone(), c);
    }
    Ok(RefutationCertificate { words: problem.basis.words.clone(), s, f, g })
}

/// Extracts an exact certificate from a solver run on `problem.dense`.
pub fn extract_certificate(problem: &SDPProblem, sol: &Solution) -> Result<RefutationCertificate> {
    if sol.status != Status::Optimal {
        return Err(Error::Solver(format!("refutation SDP ended with status {:?}", sol.status)));
    }
    let (s, t) = gram_from_solution(problem.basis.len(), &sol.x);
    if t <= SLACK_THRESHOLD {
        return Err(Error::InvalidInput(format!("slack {t:.3e} does not exceed the threshold {SLACK_THRESHOLD:e}")));
    }
    certificate_from_gram(problem, &s)
}

/// Exact check of the identity in the free algebra and of `S ⪰ 0`.
pub fn verify_certificate(cert: &RefutationCertificate, pres: &GamePresentation) -> Result<bool> {
    let n = cert.words.len();
    if cert.s.len() != n || cert.s.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("S is not {n}x{n}")));
    }
    let l = pres.relations.len();
    if cert.f.len() != l || cert.g.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "certificate has {} left and {} right coefficients, presentation has {l} relations",
            cert.f.len(),
            cert.g.len()
        )));
    }
    let (ni, no) = (pres.game.n_inputs(), pres.game.n_outputs());
    let in_range = |w: &Word| w.letters().iter().all(|x| usize::from(x.input) < ni && usize::from(x.output) < no);
    let polys_in_range = cert.f.iter().chain(&cert.g).all(|p| p.words().all(in_range));
    if !cert.words.iter().all(in_range) || !polys_in_range {
        return Err(Error::DimensionMismatch("certificate uses generators outside the game".into()));
    }
    for u in 0..n {
        for v in 0..u {
            if cert.s[u][v] != cert.s[v][u] {
                return Ok(false);
            }
        }
    }
    if !ldlt_psd(&cert.s).psd {
        return Ok(false);
    }
    let lhs = gram_polynomial(&cert.words, &cert.s);
    let mut rhs = NCPolynomial::zero();
    for (h, (f, g)) in pres.relations.iter().zip(cert.f.iter().zip(&cert.g)) {
        rhs = &rhs + &f.multiply(h);
        rhs = &rhs + &h.involute().multiply(g);
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug)]
pub struct RefuteOptions {
    pub solver: SolverOptions,
    pub limits: PsatzLimits,
    /// Restrict the Gram basis to Gröbner-normal words.
    pub reduce_basis: bool,
    pub exec: Exec,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions { solver: SolverOptions::default(), limits: PsatzLimits::default(), reduce_basis: false, exec: Exec::default() }
    }
}

/// What happened at one degree bound.
#[derive(Clone, Debug, Serialize)]
pub struct KAttempt {
    pub k: usize,
    pub basis_size: usize,
    pub constraints: usize,
    pub status: Option<String>,
    /// `t = s - 1` at the numeric optimum.
    pub slack: Option<f64>,
    pub iterations: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RefuteOutcome {
    /// `Yes` means no perfect C*-strategy; `No` is never reported.
    pub answer: TriState,
    pub certificate: Option<RefutationCertificate>,
    pub attempts: Vec<KAttempt>,
}

pub fn cstar_refute(pres: &GamePresentation, k_max: usize) -> Result<RefuteOutcome> {
    cstar_refute_with(pres, k_max, &RefuteOptions::default())
}

/// Tries `k = 1..=k_max` in turn and stops at the first verified certificate.
pub fn cstar_refute_with(pres: &GamePresentation, k_max: usize, opts: &RefuteOptions) -> Result<RefuteOutcome> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let mut attempts = Vec::new();
    for k in 1..=k_max {
        match refute_at_degree(pres, k, opts) {
            Ok((at, Some(cert))) => {
                attempts.push(at);
                return Ok(RefuteOutcome { answer: TriState::Yes, certificate: Some(cert), attempts });
            }
            Ok((at, None)) => attempts.push(at),
            Err(e @ Error::ResourceLimit(_)) => {
                let note = Some(e.to_string());
                attempts.push(KAttempt { k, basis_size: 0, constraints: 0, status: None, slack: None, iterations: 0, note });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RefuteOutcome { answer: TriState::Inconclusive, certificate: None, attempts })
}

/// One degree bound: build, solve, and when the slack is positive, extract
/// and verify. The certificate is returned only if it verified exactly.
///
/// A slack pinned at zero means every optimal Gram matrix is singular, which
/// happens when a lower-degree certificate is padded with zeros. The search
/// then restricts the Gram basis to a face (words whose diagonal does not
/// vanish, else words of smaller length) and solves again, so a certificate
/// found at `k` is found again at `k + 1`.
pub fn refute_at_degree(
    pres: &GamePresentation,
    k: usize,
    opts: &RefuteOptions,
) -> Result<(KAttempt, Option<RefutationCertificate>)> {
    let mut at = KAttempt { k, basis_size: 0, constraints: 0, status: None, slack: None, iterations: 0, note: None };
    let mut basis = nc_monomial_basis(pres, k, opts.reduce_basis)?;
    at.basis_size = basis.len();
    for round in 0..=FACE_ROUNDS {
        let problem = build_refutation_sdp_with(pres, basis.clone(), &opts.limits, opts.exec)?;
        if round == 0 {
            at.constraints = problem.rows.len();
        }
        if problem.inconsistent {
            at.note = Some("constraints inconsistent at this degree".into());
            return Ok((at, None));
        }
        let sol = solve_with(&problem.dense, &opts.solver);
        at.status = Some(format!("{:?}", sol.status));
        at.iterations += sol.iterations;
        if sol.status != Status::Optimal {
            at.note = Some("solver did not reach optimality".into());
            return Ok((at, None));
        }
        let (s, t) = gram_from_solution(problem.basis.len(), &sol.x);
        at.slack = Some(t);
        if t > SLACK_THRESHOLD {
            match certificate_from_gram(&problem, &s) {
                Ok(cert) => {
                    if verify_certificate(&cert, pres)? {
                        return Ok((at, Some(cert)));
                    }
                    at.note = Some("extracted certificate failed verification".into());
                }
                Err(e) => at.note = Some(e.to_string()),
            }
            return Ok((at, None));
        }
        // Slack pinned at zero: the optimal face may be a smaller Gram basis.
        if t < -SLACK_THRESHOLD {
            return Ok((at, None));
        }
        let z = &sol.x[0];
        let scale = z.diagonal().max().max(1.0);
        let keep: Vec<Word> = basis
            .words
            .iter()
            .enumerate()
            .filter(|&(i, w)| w.is_empty() || z[(i, i)] > FACE_TOL * scale)
            .map(|(_, w)| w.clone())
            .collect();
        let keep = if keep.len() < basis.len() {
            keep
        } else {
            // no vanishing diagonal: fall back to the nested face of shorter words
            let longest = basis.words.iter().map(Word::len).max().unwrap_or(0);
            if longest <= 1 {
                return Ok((at, None));
            }
            basis.words.iter().filter(|w| w.len() < longest).cloned().collect()
        };
        at.note = Some(format!("restricted to a face of {} words", keep.len()));
        basis.words = keep;
    }
    Ok((at, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::hom_game;
    use crate::graphs::Graph;
    use crate::psatz::build_refutation_sdp;
    use num_traits::One;

    fn hom(n: usize, m: usize) -> GamePresentation {
        GamePresentation::new(hom_game(&Graph::complete(n), &Graph::complete(m)))
    }

    #[test]
    fn k5_to_k4_refuted_at_degree_one() {
        let pres = hom(5, 4);
        let out = cstar_refute(&pres, 1).unwrap();
        assert_eq!(out.answer, TriState::Yes, "{:?}", out.attempts);
        let cert = out.certificate.unwrap();
        assert_eq!(cert.words.len(), 21);
        assert!(verify_certificate(&cert, &pres).unwrap());

        let mut bad = cert.clone();
        let l = bad.f.iter().position(|p| !p.is_zero()).unwrap();
        let (w, c) = bad.f[l].terms().next().map(|(w, c)| (w.clone(), c.clone())).unwrap();
        bad.f[l].add_term(w, c);
        assert!(!verify_certificate(&bad, &pres).unwrap());

        let mut neg = cert.clone();
        for row in &mut neg.s {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        assert!(!verify_certificate(&neg, &pres).unwrap());
    }

    #[test]
    fn perfect_strategy_means_no_slack() {
        for n in 2..=3 {
            let problem = build_refutation_sdp(&hom(n, n), 1).unwrap();
            let sol = solve_with(&problem.dense, &SolverOptions::default());
            assert_eq!(sol.status, Status::Optimal);
            let (_, t) = gram_from_solution(problem.basis.len(), &sol.x);
            assert!(t <= SLACK_THRESHOLD, "n={n}: t={t}");
        }
    }

    #[test]
    fn indefinite_gram_is_numeric_only() {
        use num_traits::ToPrimitive;
        let problem = build_refutation_sdp(&hom(5, 4), 1).unwrap();
        let sol = solve_with(&problem.dense, &SolverOptions::default());
        let n = problem.basis.len();
        let (s, _) = gram_from_solution(n, &sol.x);
        // push along a direction the projection cannot undo (constraint null space)
        let nv = problem.n_vars();
        let a = DMatrix::from_fn(problem.rows.len(), nv, |r, j| problem.rows[r].get(&j).map_or(0.0, |c| c.to_f64().unwrap()));
        let eig = nalgebra::SymmetricEigen::new(s.clone());
        let i = eig.eigenvalues.imin();
        let q = eig.eigenvectors.column(i).into_owned();
        let mut d = nalgebra::DVector::zeros(nv);
        for u in 0..n {
            for v in u..n {
                d[problem.var_index(u, v)] = -q[u] * q[v];
            }
        }
        let d = &d - a.transpose() * (&a * a.transpose()).pseudo_inverse(1e-12).unwrap() * (&a * &d);
        let dm = DMatrix::from_fn(n, n, |u, v| d[problem.var_index(u, v)]);
        let lmin = |alpha: f64| nalgebra::SymmetricEigen::new(&s + &dm * alpha).eigenvalues.min();
        let (mut lo, mut hi) = (0.0, 1.0);
        while lmin(hi) > -1e-3 {
            hi *= 2.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if lmin(mid) > -1e-3 { lo = mid } else { hi = mid }
        }
        let bad = &s + &dm * hi;
        assert!((lmin(hi) + 1e-3).abs() < 1e-6);
        assert!(matches!(certificate_from_gram(&problem, &bad), Err(Error::NumericOnly(_))));
    }

    #[test]
    fn rational_feasible_point_is_kept() {
        let pres = hom(5, 4);
        let cert = cstar_refute(&pres, 1).unwrap().certificate.unwrap();
        let problem = build_refutation_sdp(&pres, 1).unwrap();
        let again = certificate_from_rational(&problem, &cert.s).unwrap();
        assert_eq!(again.s, cert.s);
        assert!(verify_certificate(&again, &pres).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let pres = hom(5, 4);
        let cert = RefutationCertificate { words: vec![Word::one()], s: vec![vec![Coeff::one()]], f: vec![], g: vec![] };
        assert!(verify_certificate(&cert, &pres).is_err());
    }
}
