//! Coherence, Gram structure, grid conditions and closed-form bounds.

use std::f64::consts::PI;

use csfmcw::guarantees::*;
use csfmcw::linalg::CMatrix;
use csfmcw::scene::*;
use csfmcw::solvers::{build_angle_dictionary, build_doppler_dictionary};
use csfmcw::Complex64;

/// Reference values from `scipy.special.k1`.
const K1_REFERENCE: [(f64, f64); 11] = [
    (0.01, 99.97389411829623),
    (0.1, 9.853844780870606),
    (0.5, 1.6564411200033007),
    (1.0, 0.6019072301972346),
    (1.5, 0.2773878004568438),
    (2.0, 0.13986588181652246),
    (2.5, 0.07389081634774705),
    (3.0, 0.04015643112819419),
    (5.0, 0.004044613445452163),
    (10.0, 1.8648773453825585e-05),
    (20.0, 5.883057969557038e-10),
];

#[test]
fn bessel_k1_matches_reference_values() {
    for (x, want) in K1_REFERENCE {
        let got = bessel_k1(x);
        assert!(((got - want) / want).abs() < 1e-12, "K1({x}) = {got}, want {want}");
    }
    assert!(bessel_k1(0.0).is_nan());
    assert!(bessel_k1(-1.0).is_nan());
}

#[test]
fn discrete_char_fn_matches_the_dirichlet_kernel() {
    let p = 32usize;
    for k in 1..200 {
        let u = 0.0137 * k as f64;
        let closed = Complex64::from_polar(1.0, 0.5 * (p as f64 - 1.0) * u)
            * ((p as f64 * u / 2.0).sin() / (p as f64 * (u / 2.0).sin()));
        assert!((char_fn_discrete_uniform(u, p) - closed).norm() < 1e-12);
    }
}

#[test]
fn continuous_char_fn_zeros() {
    for k in 1..10 {
        assert!(char_fn_uniform(2.0 * PI * k as f64).abs() < 1e-14);
        assert!(char_fn_uniform_width(PI * k as f64 / 0.25, 0.25).abs() < 1e-14);
    }
    assert!((char_fn_uniform_width(1e-10, 1.0) - 1.0).abs() < 1e-15);
}

fn random_dictionary(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut r = csfmcw::rng::stream(seed, "dict", 0);
    use rand::Rng;
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI))
    })
}

#[test]
fn kronecker_coherence_is_the_larger_factor_coherence() {
    for s in 0..5 {
        let b = random_dictionary(6, 5, s);
        let c = random_dictionary(4, 7, 100 + s);
        let summary = coherence(&b, &c).unwrap();
        let direct = mutual_coherence(&b.kron(&c));
        assert!((summary.mu - direct).abs() < 1e-12);
        assert!((summary.mu - summary.mu_b.max(summary.mu_c)).abs() < 1e-15);
    }
}

#[test]
fn factor_grams_are_toeplitz_on_uniform_grids() {
    let c = RadarConfig::automotive_24ghz();
    let g = build_grids(&c, &GridRequest::guarantee_full(&c)).unwrap();
    for seed in 0..5 {
        let sched = sample_chirp_schedule(10, 32, seed).unwrap();
        let b = build_doppler_dictionary(&sched, &g.doppler_grid_mps, &c)
            .unwrap()
            .matrix;
        let a = build_angle_dictionary(&sample_sla(&c, seed), &g.angle_grid_rad, &c)
            .unwrap()
            .matrix;
        let s = coherence(&b, &a).unwrap();
        assert!(s.toeplitz_deviation_b < 1e-10, "{}", s.toeplitz_deviation_b);
        assert!(s.toeplitz_deviation_c < 1e-10, "{}", s.toeplitz_deviation_c);
        for i in 0..b.cols() {
            assert!((s.q_b.get(i, i).re - 10.0).abs() < 1e-12);
        }
    }
    // A non-uniform grid breaks the structure.
    let sched = sample_chirp_schedule(10, 32, 1).unwrap();
    let b = build_doppler_dictionary(&sched, &[0.0, 3.0, 11.0, 12.0], &c)
        .unwrap()
        .matrix;
    assert!(toeplitz_deviation(&b.gram()) > 1e-3);
}

fn guarantee_grid(c: &RadarConfig, doppler_points: usize) -> ParamGrids {
    let v = c.max_velocity_mps();
    let dv = c.velocity_resolution_mps();
    build_grids(
        c,
        &GridRequest::Guarantee {
            velocity_mps: (-v, -v + (doppler_points - 1) as f64 * dv),
            sin_angle: (-1.0, 1.0),
            range: RangeGridSpec::default(),
        },
    )
    .unwrap()
}

#[test]
fn doubled_lags_alias_beyond_half_the_doppler_span() {
    let c = RadarConfig::automotive_24ghz();
    let short = guarantee_grid(&c, 16);
    assert!(check_grid_conditions(&short, &c, ConditionMode::Uniform).unwrap().pass);
    let full = guarantee_grid(&c, 32);
    let r = check_grid_conditions(&full, &c, ConditionMode::Uniform).unwrap();
    assert!(!r.pass);
    assert_eq!(r.worst_location, "doppler lag 16 at 2u");
    assert!(
        check_grid_conditions(&full, &c, ConditionMode::Nonuniform)
            .unwrap()
            .pass
    );
    // 33 points reach lag 32, where the discrete characteristic function is 1.
    let wide = guarantee_grid(&c, 33);
    let r = check_grid_conditions(&wide, &c, ConditionMode::Nonuniform).unwrap();
    assert!(!r.pass);
    assert!((r.worst_violation - 1.0).abs() < 1e-9);
}

#[test]
fn half_spacing_violates_isotropy() {
    let c = RadarConfig::automotive_24ghz();
    let mut g = guarantee_grid(&c, 32);
    let dv = c.velocity_resolution_mps() / 2.0;
    g.doppler_grid_mps = (0..32).map(|k| -c.max_velocity_mps() + k as f64 * dv).collect();
    let r = check_grid_conditions(&g, &c, ConditionMode::Nonuniform).unwrap();
    assert!(!r.pass);
    assert!(r.worst_violation > 0.5);
}

#[test]
fn non_uniform_grids_are_rejected() {
    let c = RadarConfig::automotive_24ghz();
    let mut g = guarantee_grid(&c, 8);
    g.doppler_grid_mps[3] += 0.5;
    assert!(check_grid_conditions(&g, &c, ConditionMode::Uniform).is_err());
}

#[test]
fn uniform_bounds_by_hand() {
    let b = uniform_measurement_bounds(1, 33, 13, 0.05, 0.05, ArrayCase::Independent).unwrap();
    // 18.69 · 0.25 · ln 660 = 30.335.
    assert!((b.p_min_exact - 30.334990629133152).abs() < 1e-9);
    assert_eq!(b.p_min, 31);
    // L = ln(13√π / 0.1) = 5.43990, 4.67 · 0.25 · (L + ½ ln 2L)² = 51.372.
    assert!((b.element_min_exact - 51.37160597311508).abs() < 1e-9);
    assert_eq!(b.ntnr_min, Some(52));
    assert_eq!(b.nt_min, None);
    let t = uniform_measurement_bounds(1, 33, 13, 0.05, 0.05, ArrayCase::Transceiver).unwrap();
    // 4.32 · 0.5 · ln 260 = 12.011.
    assert!((t.element_min_exact - 12.01107232299354).abs() < 1e-9);
    assert_eq!(t.nt_min, Some(13));
    assert!(uniform_measurement_bounds(0, 33, 13, 0.05, 0.05, ArrayCase::Independent).is_err());
    assert!(uniform_measurement_bounds(1, 33, 13, 0.6, 0.5, ArrayCase::Independent).is_err());
}

#[test]
fn nonuniform_bound_by_hand() {
    let b = nonuniform_measurement_bound(1, 33, 13, 0.1, 10, 2, 4).unwrap();
    // 2.87e6 · ln²(6 · 429 / 0.1).
    assert!((b.pntnr_min / 296012671.6894038 - 1.0).abs() < 1e-12);
    assert!((b.error_factor - 23.513 / 80f64.sqrt()).abs() < 1e-12);
    let five = nonuniform_measurement_bound(5, 33, 13, 0.1, 10, 2, 4).unwrap();
    assert!((five.error_factor - 5.87825).abs() < 1e-5);
    assert!(nonuniform_measurement_bound(1, 33, 13, 1.5, 10, 2, 4).is_err());
}

#[test]
fn coherence_tail_bound_reference_values() {
    let ind = coherence_tail_bound(0.5, 32, 4, 8, 33, 13, ArrayCase::Independent).unwrap();
    assert!((ind - 0.13439470520706664).abs() < 1e-12);
    let tr = coherence_tail_bound(0.5, 32, 8, 8, 33, 13, ArrayCase::Transceiver).unwrap();
    assert!((tr - 0.2074993610374214).abs() < 1e-12);
    let mut prev = 1.0;
    for k in 1..20 {
        let v = coherence_tail_bound(0.05 * k as f64, 32, 4, 8, 33, 13, ArrayCase::Independent).unwrap();
        assert!((0.0..=1.0).contains(&v));
        assert!(v <= prev + 1e-15);
        prev = v;
    }
    assert!(coherence_tail_bound(1.0, 32, 4, 8, 33, 13, ArrayCase::Independent).is_err());
}

#[test]
fn empirical_gram_approaches_identity_on_a_compliant_grid() {
    let c = RadarConfig::automotive_24ghz();
    let g = guarantee_grid(&c, 32);
    let few = empirical_gram(&c, &g, ArrayCase::Independent, 200, 5, 1).unwrap();
    let many = empirical_gram(&c, &g, ArrayCase::Independent, 5000, 5, 1).unwrap();
    assert!(many.max_deviation < few.max_deviation);
    assert!(many.max_deviation < 0.1, "{}", many.max_deviation);
    assert!(many.max_toeplitz_deviation_b < 1e-10);
    assert!(many.max_toeplitz_deviation_c < 1e-10);
    assert_eq!(many.toeplitz_draws_checked, 5);
}

#[test]
fn first_lag_coherence_is_rayleigh_with_replacement() {
    let c = RadarConfig::automotive_24ghz();
    let g = guarantee_grid(&c, 32);
    let setup = TailSetup {
        case: ArrayCase::Independent,
        with_replacement: true,
        draws: 20_000,
        thetas: vec![0.2, 0.4],
        seed: 3,
    };
    let mc = coherence_tail_monte_carlo(&c, &g, &setup).unwrap();
    // Kolmogorov distance of a 20000-sample empirical law: about 1.36/√n at 5%.
    assert!(mc.rayleigh_ks_distance < 0.03, "{}", mc.rayleigh_ks_distance);
    for e in &mc.estimates {
        assert!(e.mu <= e.mu_bound + 3.0 * e.mu_se);
    }
}

#[test]
fn report_is_deterministic_and_serialisable() {
    let c = RadarConfig::automotive_24ghz();
    let g = guarantee_grid(&c, 32);
    let req = ReportRequest {
        gram_draws: 100,
        tail_draws: 100,
        seed: 9,
        ..ReportRequest::default()
    };
    let a = guarantee_report(&c, &g, &req).unwrap();
    let b = guarantee_report(&c, &g, &req).unwrap();
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    let back: GuaranteeReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.bounds.uniform, a.bounds.uniform);
    assert_eq!(a.inputs.g_d, 32);
    assert!(!a.flags.measurements_meet_uniform_bound);
}
