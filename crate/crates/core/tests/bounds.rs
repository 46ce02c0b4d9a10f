use proptest::prelude::*;
use qpdnls::bounds::*;
use qpdnls::lattice::{LatticePoint, TruncationBox};
use qpdnls::solver::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn unit_constants() {
    let c = compute_constants(DecayProfile::new(1.0, 1.0).unwrap(), 1, 1.0).unwrap();
    assert!(rel(c.c, 18.0) <= 1e-15);
    assert!(rel(c.t2, 4.0 / 139968.0) <= 1e-15);
    assert!(rel(c.t3, 1.0 / (12.0 * std::f64::consts::E * 324.0 * 13824.0)) <= 1e-15);
    assert!((c.t3 - 6.84e-9).abs() < 1e-11);
    assert_eq!(c.t1, c.t2.min(c.t3));
    assert!(c.t4 <= c.t1);
}

#[test]
fn decay_persists_on_the_t2_window() {
    let ex = compute_constants(DecayProfile::new(1.0, 1.0).unwrap(), 1, 1.0).unwrap();
    for seed in [1, 2, 3] {
        let cfg = ProblemConfig::from_json(&format!(
            r#"{{"nu":1,"omega":[1.0],"box_radius":10,"t_end":{},"steps":20,"scheme":"rk4_interaction",
                "initial":{{"random":{{"B":1.0,"kappa":1.0,"seed":{seed}}}}}}}"#,
            ex.t2
        ))
        .unwrap();
        let traj = integrate(&cfg.initial_state().unwrap(), &cfg).unwrap();
        let cert = check_decay(&traj, 0.5, ex.c).unwrap();
        assert!(cert.pass, "{cert:?}");
        assert_eq!(cert.time_window, (0.0, ex.t2));
        // The initial data also honours the generator's own profile.
        let cert0 = check_decay(&Trajectory { states: vec![traj.states[0].clone()] }, 1.0, 1.0).unwrap();
        assert!(cert0.pass);
    }
}

#[test]
fn plane_wave_certificate_is_constant_in_time() {
    let cfg = ProblemConfig::from_json(
        r#"{"nu":2,"omega":[1.0,1.4142135623730951],"box_radius":4,"t_end":1.0,"steps":100,"scheme":"rk4_interaction",
            "initial":{"modes":[{"n":[1,-2],"re":0.3,"im":0.4}]}}"#,
    )
    .unwrap();
    let traj = integrate(&cfg.initial_state().unwrap(), &cfg).unwrap();
    let cert = check_decay(&traj, 0.7, 10.0).unwrap();
    assert!(rel(cert.fitted_constant, 0.5 * (0.7f64 * 3.0).exp()) < 1e-14);
    assert_eq!(cert.worst_mode, LatticePoint::new(vec![1, -2]).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_data_honours_its_profile(seed in any::<u64>(), b in 0.01f64..4.0, kappa in 0.05f64..1.0, nu in 1usize..=2) {
        let bx = TruncationBox::new(nu, 5).unwrap();
        let s = random_state(bx, b, kappa, seed);
        let cert = check_decay(&Trajectory { states: vec![s] }, kappa, b.sqrt()).unwrap();
        prop_assert!(cert.pass);
    }

    #[test]
    fn t2_is_monotone(b in 0.1f64..10.0, kappa in 0.1f64..0.9, w in 0.1f64..10.0, nu in 1usize..=3) {
        let base = compute_constants(DecayProfile::new(b, kappa).unwrap(), nu, w).unwrap();
        let more_k = compute_constants(DecayProfile::new(b, kappa + 0.05).unwrap(), nu, w).unwrap();
        let more_b = compute_constants(DecayProfile::new(b * 1.1, kappa).unwrap(), nu, w).unwrap();
        let more_w = compute_constants(DecayProfile::new(b, kappa).unwrap(), nu, w * 1.1).unwrap();
        prop_assert!(more_k.t2 > base.t2);
        prop_assert!(more_b.t2 < base.t2);
        prop_assert!(more_w.t2 < base.t2);
        prop_assert_eq!(base.t1, base.t2.min(base.t3));
        prop_assert!(base.t4 <= base.t1);
    }
}

#[test]
fn lattice_sums_grow_with_the_radius_and_stay_below_the_bound() {
    let r = lattice_sum_suite().unwrap();
    assert!(r.rows.len() > 200);
    let bad: Vec<_> = r.failures().map(|f| f.summary_line()).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn constrained_sum_matches_a_direct_double_sum() {
    // r = 2 in one dimension: Σ_{m₁ − m₂ = n} |m₁| e^{−κ(|m₁|+|m₂|)}.
    let kappa = 0.5;
    let n = 3i64;
    let radius = 12i64;
    let mut want = 0.0;
    for m1 in -radius..=radius {
        let m2 = m1 - n;
        if m2.abs() <= radius {
            want += m1.abs() as f64 * (-kappa * (m1.abs() + m2.abs()) as f64).exp();
        }
    }
    let alpha = qpdnls::combinatorics::MultiIndex(vec![1, 0]);
    let c = lattice_sum_check(&alpha, kappa, &LatticePoint::new(vec![n]).unwrap(), radius as u32, 1000).unwrap();
    assert!(rel(c.sum, want) < 1e-14);
    assert!(c.monotone && c.pass);
}

#[test]
fn scalar_inequalities_hold() {
    let r = scalar_bound_checks();
    assert!(r.all_pass());
}

#[test]
fn factorial_grid_fails_exactly_at_the_small_n_corner() {
    let r = factorial_sum_suite().unwrap();
    assert_eq!(r.rows.len(), 64);
    let bad: Vec<String> = r.failures().map(|f| f.instance.clone()).collect();
    assert_eq!(bad, ["N=1,L=4", "N=1,L=5", "N=1,L=6", "N=1,L=7", "N=1,L=8", "N=2,L=8"]);
}

#[test]
fn cauchy_factor_is_linear() {
    let ex = compute_constants(DecayProfile::new(1.0, 1.0).unwrap(), 1, 1.0).unwrap();
    assert!(rel(ex.cauchy_factor(ex.t3), 1.0) < 1e-14);
    assert!(rel(ex.cauchy_bound(2, ex.t3 / 2.0), ex.c_prime / 4.0) < 1e-14);
    assert!(ex.c_dprime_at(ex.t3).is_none());
}
