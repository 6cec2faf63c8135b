use std::path::Path;

use serde_json::json;

use syncgame::games::{self, clique_game, lc_clique_number, lc_dimension, GamePresentation, SynchronousGame};
use syncgame::graphs::{exact_invariants, Graph};
use syncgame::groebner::{default_degree_bound, write_basis, TriState};
use syncgame::psatz::{self, read_certificate, verify_certificate, write_certificate, RefuteOptions};
use syncgame::reduction::{reduce_to_clique_game_with, write_gadget, CNFFormula, Contraction, GadgetGraph, GadgetIdentities};
use syncgame::sdp::{export_sdpa, SolverOptions};
use syncgame::theta::lovasz_theta_with;

use crate::{write_text, CmdResult, Report, RunConfig};

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn solver(cfg: &RunConfig) -> SolverOptions {
    SolverOptions { tol: cfg.tol, ..SolverOptions::default() }
}

pub fn alg_check(cfg: &RunConfig, game: &SynchronousGame, d_max: Option<usize>, out: Option<&Path>) -> CmdResult {
    let check = games::alg_check(game, d_max, cfg.exec).map_err(err)?;
    let gb = &check.basis;
    if let Some(p) = out {
        write_text(p, &write_basis(gb))?;
    }
    let verdict = match check.trivial {
        TriState::Yes => "trivial: no perfect algebraic strategy",
        TriState::No => "nontrivial",
        TriState::Inconclusive => "inconclusive at this degree bound",
    };
    let text = vec![
        format!("trivial: {}", check.trivial),
        format!("{verdict} ({} elements, degree bound {}, complete: {})", gb.len(), gb.degree_bound(), gb.is_complete()),
    ];
    let summary = json!({
        "trivial": check.trivial.to_string(),
        "basis_len": gb.len(),
        "degree_bound": gb.degree_bound(),
        "complete": gb.is_complete(),
    });
    Ok(Report::tri(check.trivial, text, summary))
}

pub fn clique_alg(cfg: &RunConfig, g: &Graph, n_max: usize, d_max: Option<usize>) -> CmdResult {
    let r = games::alg_clique_number(g, n_max, d_max, cfg.exec).map_err(err)?;
    if r.infinite {
        return Ok(Report::definite(vec!["infinite (contains K4)".into()], json!({ "infinite": true })));
    }
    let mut text = Vec::new();
    for s in &r.steps {
        text.push(format!("n = {}: trivial {} ({:?})", s.n, s.trivial, s.source));
    }
    let headline = match r.exact {
        Some(v) => format!("algebraic clique number: {v}"),
        None => format!("algebraic clique number: at least {}", r.lower_bound),
    };
    text.insert(0, headline);
    let steps: Vec<_> = r.steps.iter().map(|s| json!({ "n": s.n, "trivial": s.trivial.to_string() })).collect();
    let summary = json!({ "infinite": false, "lower_bound": r.lower_bound, "exact": r.exact, "steps": steps });
    Ok(Report { text, json: summary, definite: r.exact.is_some() })
}

pub fn clique_lc(g: &Graph, dimension: Option<usize>) -> CmdResult {
    let w = lc_clique_number(g);
    let mut text = vec![format!("locally commuting clique number: {w}")];
    let mut summary = json!({ "lc_clique_number": w });
    if let Some(n) = dimension {
        let d = lc_dimension(g, n);
        text.push(format!("dimension for n = {n}: {d}"));
        summary["dimension"] = json!({ "n": n, "value": d.to_string() });
    }
    Ok(Report::definite(text, summary))
}

pub fn cstar_refute(cfg: &RunConfig, pres: &GamePresentation, k: usize, reduce_basis: bool, out: Option<&Path>) -> CmdResult {
    let opts = RefuteOptions { solver: solver(cfg), reduce_basis, exec: cfg.exec, ..RefuteOptions::default() };
    let r = psatz::cstar_refute_with(pres, k, &opts).map_err(err)?;
    let mut text = Vec::new();
    for a in &r.attempts {
        let slack = a.slack.map_or("-".to_string(), |t| format!("{t:.3e}"));
        let mut line = format!("k = {}: basis {}, constraints {}, slack {slack}", a.k, a.basis_size, a.constraints);
        if let Some(note) = &a.note {
            line.push_str(&format!(" ({note})"));
        }
        text.push(line);
    }
    let mut written = None;
    match &r.certificate {
        Some(cert) => {
            text.push(format!("refuted: no perfect C*-strategy (certificate of degree {})", cert.degree_bound()));
            if let Some(p) = out {
                write_text(p, &write_certificate(cert))?;
                text.push(format!("wrote {}", p.display()));
                written = Some(p.to_path_buf());
            }
        }
        None => text.push(format!("inconclusive: no certificate up to k = {k}")),
    }
    let summary = json!({
        "refuted": r.answer.to_string(),
        "attempts": r.attempts,
        "certificate": written,
    });
    Ok(Report::tri(r.answer, text, summary))
}

pub fn verify_cert(text: &str, pres: &GamePresentation) -> CmdResult {
    let cert = read_certificate(text).map_err(err)?;
    if !verify_certificate(&cert, pres).map_err(err)? {
        return Err("certificate does not verify".into());
    }
    Ok(Report::definite(
        vec![format!("valid: exact identity and PSD Gram matrix ({} words)", cert.words.len())],
        json!({ "valid": true, "words": cert.words.len() }),
    ))
}

pub fn theta(cfg: &RunConfig, g: &Graph, witness: bool) -> CmdResult {
    let t = lovasz_theta_with(g, &solver(cfg)).map_err(err)?;
    let mut text = vec![format!("{:.7}", t.value)];
    if witness {
        for i in 0..t.witness.nrows() {
            let row: Vec<String> = t.witness.row(i).iter().map(|v| format!("{v:.6}")).collect();
            text.push(row.join(" "));
        }
    }
    let mut summary = json!({ "theta": t.value, "achieved_tolerance": t.achieved_tolerance, "iterations": t.iterations });
    if witness {
        let rows: Vec<Vec<f64>> = (0..t.witness.nrows()).map(|i| t.witness.row(i).iter().copied().collect()).collect();
        summary["witness"] = json!(rows);
    }
    Ok(Report::definite(text, summary))
}

pub fn sandwich(cfg: &RunConfig, graphs: &[Graph]) -> CmdResult {
    let opts = solver(cfg);
    let rows = cfg.exec.map(graphs, |g| -> Result<_, String> {
        let (omega, chi) = exact_invariants(g).map_err(err)?;
        let th = lovasz_theta_with(&g.complement(), &opts).map_err(err)?.value;
        let lc = lc_clique_number(g);
        let ok = omega as f64 <= th + 1e-6 && th <= chi as f64 + 1e-6 && lc == omega;
        Ok((g.n_vertices(), g.n_edges(), omega, th, chi, lc, ok))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut text = Vec::new();
    let mut items = Vec::new();
    for (i, &(n, m, omega, th, chi, lc, ok)) in rows.iter().enumerate() {
        let verdict = if ok { "pass" } else { "FAIL" };
        text.push(format!("graph {i} ({n} vertices, {m} edges): omega {omega}  theta(complement) {th:.7}  chi {chi}  lc {lc}  {verdict}"));
        items.push(json!({ "vertices": n, "edges": m, "omega": omega, "theta_complement": th, "chi": chi, "lc": lc, "pass": ok }));
    }
    let failures = rows.iter().filter(|r| !r.6).count();
    if failures > 0 {
        // a violated inequality is a bug, not an answer
        for line in &text {
            eprintln!("{line}");
        }
        return Err(format!("sandwich violated on {failures} of {} graphs", rows.len()));
    }
    text.push(format!("all {} graphs pass", rows.len()));
    Ok(Report::definite(text, json!({ "graphs": items, "pass": true })))
}

pub fn reduce_sat(phi: &CNFFormula, mode: Contraction, gadget_out: Option<&Path>, game_out: Option<&Path>) -> CmdResult {
    let (g, m, pres) = reduce_to_clique_game_with(phi, mode);
    if let Some(p) = gadget_out {
        write_text(p, &write_gadget(&g))?;
    }
    if let Some(p) = game_out {
        write_text(p, &games::write_game(&pres.game))?;
    }
    let sat = phi.brute_force_sat().is_some();
    let clique = g.has_full_clique();
    let text = vec![
        format!("clusters m = {m}, vertices {}, edges {}", g.graph.n_vertices(), g.graph.n_edges()),
        format!("clique game: {} inputs, {} outputs", pres.game.n_inputs(), pres.game.n_outputs()),
        format!("satisfiable (brute force): {sat}; {m}-clique in contracted gadget: {clique}"),
    ];
    let summary = json!({
        "m": m,
        "vertices": g.graph.n_vertices(),
        "edges": g.graph.n_edges(),
        "contraction": format!("{mode:?}"),
        "satisfiable": sat,
        "has_clique": clique,
    });
    Ok(Report::definite(text, summary))
}

pub fn check_gadget(cfg: &RunConfig, g: &GadgetGraph, d_max: Option<usize>) -> CmdResult {
    g.validate().map_err(err)?;
    let m = g.n_clusters();
    let pres = GamePresentation::new(clique_game(m, &g.graph));
    let d = d_max.unwrap_or_else(|| default_degree_bound(&pres.relations));
    let ids = GadgetIdentities::compute(&pres, g, d, cfg.exec).map_err(err)?;
    let mut text = Vec::new();
    for (i, t) in ids.clusters.iter().enumerate() {
        text.push(format!("cluster {i}: {t}"));
    }
    for ((u, v), t) in &ids.twins {
        text.push(format!("closed neighbourhoods of {u} and {v}: {t}"));
    }
    let answer = if ids.any_no() {
        TriState::No
    } else if ids.all_yes() {
        TriState::Yes
    } else {
        TriState::Inconclusive
    };
    text.push(format!("all identities hold: {answer} (basis of {} elements at degree {d})", ids.basis.len()));
    let summary = json!({
        "holds": answer.to_string(),
        "clusters": ids.clusters.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "twins": ids.twins.iter().map(|((u, v), t)| json!({ "u": u, "v": v, "in_ideal": t.to_string() })).collect::<Vec<_>>(),
        "degree_bound": d,
    });
    Ok(Report::tri(answer, text, summary))
}

pub fn export_sdpa_cmd(pres: &GamePresentation, k: usize, out: &Path) -> CmdResult {
    let problem = psatz::build_refutation_sdp(pres, k).map_err(err)?;
    write_text(out, &export_sdpa(&problem.dense))?;
    let text = vec![format!(
        "wrote {} ({} constraints, Gram basis of {} words)",
        out.display(),
        problem.dense.n_constraints(),
        problem.basis.len()
    )];
    let summary = json!({ "out": out, "constraints": problem.dense.n_constraints(), "basis": problem.basis.len() });
    Ok(Report::definite(text, summary))
}

