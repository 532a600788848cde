mod common;

use num_complex::Complex64;

use arlab::artin_rees::{min_mu, ArtinReesInstance};
use arlab::complexes::koszul_complex;
use arlab::groebner::{Engine, SubmoduleSpec};
use arlab::homotopy::{dbar_sigma_fd, dbar_sigma_koszul, sample_points_away_from, sigma_at, FD_STEP};
use arlab::poly::{MonomialOrder, Ring};
use arlab::residue::{pv_action, residue_action, CutoffProfile, EpsilonSchedule, TestForm};

use common::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn monomial_oracle_known_values() {
    assert_eq!(mono_min_mu(&vec![vec![1]], &vec![vec![2]], 1, 4, 8), Some(2));
    assert_eq!(mono_min_mu(&vec![vec![1, 0], vec![0, 1]], &vec![vec![1, 0]], 2, 4, 8), Some(1));
    assert_eq!(mono_min_mu(&vec![vec![3]], &vec![vec![2]], 1, 4, 8), Some(1));
}

#[test]
fn min_mu_matches_monomial_oracle_on_mixed_instances() {
    let vars = ["x", "y"];
    let ring = Ring::new(&vars, MonomialOrder::grevlex());
    let cases: Vec<(MonoIdeal, MonoIdeal)> = vec![
        (vec![vec![2, 0], vec![0, 1]], vec![vec![1, 1]]),
        (vec![vec![1, 1]], vec![vec![2, 0], vec![0, 2]]),
        (vec![vec![1, 0], vec![0, 2]], vec![vec![3, 0], vec![1, 1]]),
    ];
    let engine = Engine::new(MonomialOrder::grevlex());
    for (i, n) in cases {
        let parse = |m: &MonoIdeal| {
            m.iter()
                .map(|e| ring.parse(&mono_to_string(e, &vars)).unwrap())
                .collect::<Vec<_>>()
        };
        let inst = ArtinReesInstance::new(
            "case",
            SubmoduleSpec::ideal(&ring, parse(&i)).unwrap(),
            SubmoduleSpec::ideal(&ring, parse(&n)).unwrap(),
            3,
            8,
        )
        .unwrap();
        let got = min_mu(&engine, &inst).unwrap().mu;
        assert_eq!(got, mono_min_mu(&i, &n, 2, 3, 8), "I={i:?} N={n:?}");
    }
}

#[test]
fn finite_difference_dbar_sigma_matches_pinv_derivative() {
    let ring = Ring::new(&["x", "y"], MonomialOrder::grevlex());
    let gens = vec![ring.parse("x^2 - y").unwrap(), ring.parse("x*y + 1").unwrap(), ring.parse("y").unwrap()];
    let k = koszul_complex(&ring, &gens).unwrap();
    for p in sample_points_away_from(&gens, 2, 6, 11, 0.2) {
        let fd = dbar_sigma_fd(&k, &p, FD_STEP).unwrap();
        let exact = dbar_sigma_koszul(&gens, &p).unwrap();
        let sigma = sigma_at(&k, &p).unwrap();
        for (lv, (s, ds)) in analytic_sigma(&k, &p).into_iter().enumerate() {
            let got = sigma.get(lv + 1, lv, 0).unwrap();
            assert!((got - &s).norm() < 1e-10);
            for (j, d) in ds.iter().enumerate() {
                let mask = 1 << j;
                let fd_block = fd.get(lv + 1, lv, mask).unwrap();
                assert!((fd_block - d).norm() < 1e-6, "fd level {lv} var {j}");
                let ex_block = exact.get(lv + 1, lv, mask).unwrap();
                assert!((ex_block - d).norm() < 1e-10, "quotient rule level {lv} var {j}");
            }
        }
    }
}

#[test]
fn dbar_sigma_of_coordinate_pair_at_unit_point() {
    let ring = Ring::new(&["z1", "z2"], MonomialOrder::grevlex());
    let gens = vec![ring.var(0), ring.var(1)];
    let k = koszul_complex(&ring, &gens).unwrap();
    let p = [c(1.0, 0.0), c(0.0, 0.0)];
    let exact = dbar_sigma_koszul(&gens, &p).unwrap();
    let fd = dbar_sigma_fd(&k, &p, 1e-5).unwrap();
    assert!(exact.sub(&fd).max_abs() < 1e-6);
    let (_, ds) = &analytic_sigma(&k, &p)[0];
    // σ_1 = ā/|a|^2, so ∂̄_1 σ_1 = (0, 0) and ∂̄_2 σ_1 = (0, 1)^T at (1, 0)
    assert!(ds[0].norm() < 1e-12);
    assert!((ds[1][(1, 0)] - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn general_complex_derivative_on_a_resolution() {
    let ring = Ring::new(&["x", "y", "z"], MonomialOrder::grevlex());
    let n = SubmoduleSpec::ideal(
        &ring,
        vec![ring.parse("x*y").unwrap(), ring.parse("x*z").unwrap(), ring.parse("y*z").unwrap()],
    )
    .unwrap();
    let res = Engine::new(MonomialOrder::grevlex()).free_resolution(&n, 4).unwrap();
    let gens = n.ideal_generators();
    for p in sample_points_away_from(&gens, 3, 4, 5, 0.3) {
        let fd = dbar_sigma_fd(&res.complex, &p, FD_STEP).unwrap();
        for (lv, (_, ds)) in analytic_sigma(&res.complex, &p).into_iter().enumerate() {
            for (j, d) in ds.iter().enumerate() {
                let got = fd.get(lv + 1, lv, 1 << j).unwrap();
                assert!((got - d).norm() < 1e-6, "level {lv} var {j}: {}", (got - d).norm());
            }
        }
    }
}

#[test]
fn test_form_derivative_oracle_agrees_with_differences() {
    let phi = TestForm::new(0.7, vec![(c(1.0, 0.5), 0, 0), (c(-0.3, 0.0), 1, 2), (c(0.2, 0.1), 0, 1)]).unwrap();
    let h = 1e-6;
    for z in [c(0.1, 0.2), c(-0.4, 0.3), c(0.5, -0.45), c(0.0, 0.01)] {
        let dx = (oracle_phi(&phi, z + h) - oracle_phi(&phi, z - h)) / (2.0 * h);
        let dy = (oracle_phi(&phi, z + c(0.0, h)) - oracle_phi(&phi, z - c(0.0, h))) / (2.0 * h);
        let fd = (dx + c(0.0, 1.0) * dy) * 0.5;
        assert!((fd - oracle_dbar_phi(&phi, z)).norm() < 1e-7);
        assert!((phi.eval(z) - oracle_phi(&phi, z)).norm() < 1e-14);
    }
}

#[test]
fn residue_actions_match_integration_by_parts() {
    let sched = EpsilonSchedule::default();
    let forms = [
        TestForm::new(1.0, vec![(c(1.0, 0.0), 0, 0), (c(0.5, 0.5), 1, 0), (c(0.25, 0.0), 1, 1)]).unwrap(),
        TestForm::new(0.6, vec![(c(-0.7, 0.2), 0, 0), (c(1.0, 0.0), 0, 1), (c(0.3, 0.0), 2, 0)]).unwrap(),
        TestForm::bump_monomial(1.3, 1, 0),
    ];
    for phi in &forms {
        for k in [1, 2] {
            let oracle = oracle_residue(k, phi);
            for chi in CutoffProfile::ALL {
                let got = residue_action(k, phi, chi, &sched).unwrap().value;
                if oracle.norm() < 1e-12 {
                    assert!(got.norm() < 1e-8, "k={k} {chi}: {got}");
                } else {
                    assert!(rel_err(got, oracle) < 1e-6, "k={k} {chi}: {got} vs {oracle}");
                }
            }
        }
    }
}

#[test]
fn principal_values_match_excised_quadrature() {
    let sched = EpsilonSchedule::default();
    for (k, phi) in [
        (1, TestForm::bump_monomial(1.0, 1, 0)),
        (2, TestForm::bump_monomial(0.8, 2, 0)),
        (1, TestForm::new(0.9, vec![(c(1.0, 0.0), 0, 0), (c(0.4, -0.1), 1, 0), (c(0.2, 0.0), 2, 1)]).unwrap()),
    ] {
        let oracle = oracle_pv(k, &phi);
        assert!(oracle.norm() > 1e-3);
        for chi in CutoffProfile::ALL {
            let got = pv_action(k, &phi, chi, &sched).unwrap().value;
            assert!(rel_err(got, oracle) < 1e-6, "k={k} {chi}: {got} vs {oracle}");
        }
    }
    // z̄ against 1/z integrates to zero over every circle
    for k in [1, 2] {
        let phi = TestForm::bump_monomial(1.0, 0, 1);
        assert!(oracle_pv(k, &phi).norm() < 1e-10);
        assert!(pv_action(k, &phi, CutoffProfile::Smoothstep, &sched).unwrap().value.norm() < 1e-10);
    }
}
