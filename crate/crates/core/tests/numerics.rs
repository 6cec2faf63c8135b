//! SDP solver properties, theta values against independent oracles, and the
//! sandwich inequalities on a random corpus.

use nalgebra::DMatrix;
use proptest::prelude::*;
use syncgame::games::lc_clique_number;
use syncgame::graphs::{chromatic_number, clique_number, Graph};
use syncgame::sdp::{solve, DenseSDP, Status};
use syncgame::theta::{lc_theta_witness, lovasz_theta};

mod common;
use common::{circulant_theta, feasible_sdp, reverify};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(44), ..ProptestConfig::default() })]

    #[test]
    fn solver_weak_duality_and_residuals(
        dims in prop::collection::vec(1usize..5, 1..4),
        m in 1usize..6,
        vals in prop::collection::vec(-1.0f64..1.0, 8..40),
    ) {
        let (sdp, a, b, c) = feasible_sdp(&dims, m, &vals);
        let sol = solve(&sdp, 1e-8, 200);
        prop_assert_eq!(sol.status, Status::Optimal);
        let r = reverify(&a, &b, &c, &sol, 1e-6);
        prop_assert!(r.is_ok(), "{:?}", r);
        for w in sol.history.windows(2) {
            prop_assert!(w[1].mu <= w[0].mu * (1.0 + 1e-9));
        }
    }
}

#[test]
fn theta_of_cycles_matches_circulant_oracle() {
    let oracle = circulant_theta(5, 200);
    assert!((oracle - 5f64.sqrt()).abs() < 1e-6);
    let r = lovasz_theta(&Graph::cycle(5)).unwrap();
    assert!((r.value - oracle).abs() < 1e-5, "{} vs {oracle}", r.value);
    // odd cycles: n cos(π/n) / (1 + cos(π/n)); even cycles: n/2
    for (n, want) in [(6, 3.0), (7, 7.0 * (std::f64::consts::PI / 7.0).cos() / (1.0 + (std::f64::consts::PI / 7.0).cos()))] {
        let r = lovasz_theta(&Graph::cycle(n)).unwrap();
        assert!((r.value - want).abs() < 1e-6, "C{n}: {} vs {want}", r.value);
    }
}

#[test]
fn theta_witness_is_feasible() {
    let g = Graph::petersen();
    let r = lovasz_theta(&g).unwrap();
    assert!((r.value - 4.0).abs() < 1e-6);
    for (u, v) in g.edges() {
        assert!(r.witness[(u, v)].abs() < 1e-7);
    }
    assert!((r.witness.trace() - 1.0).abs() < 1e-7);
    assert!(r.witness.clone().symmetric_eigenvalues().min() > -1e-7);
    assert!((r.witness.sum() - r.value).abs() < 1e-6);
}

#[test]
fn sandwich_on_small_corpus() {
    for g in Graph::random_corpus(40, 8, 2024) {
        let omega = clique_number(&g);
        let chi = chromatic_number(&g);
        let th = lovasz_theta(&g.complement()).unwrap().value;
        assert!(omega as f64 <= th + 1e-6 && th <= chi as f64 + 1e-6, "{g:?}: {omega} {th} {chi}");
        assert_eq!(lc_clique_number(&g), omega);
        if omega >= 1 {
            if let Ok(w) = lc_theta_witness(&g, omega) {
                assert!(w.verify(&g, omega));
                assert!(th >= omega as f64 - 1e-4);
            }
        }
    }
}

#[test]
fn infeasible_theta_style_problem_is_flagged() {
    // X_00 = -1 with X ⪰ 0
    let sdp = DenseSDP::from_dense(vec![1], &[vec![DMatrix::from_element(1, 1, 1.0)]], vec![-1.0], &[DMatrix::zeros(1, 1)]).unwrap();
    let sol = solve(&sdp, 1e-8, 200);
    assert_eq!(sol.status, Status::PrimalInfeasible);
}
