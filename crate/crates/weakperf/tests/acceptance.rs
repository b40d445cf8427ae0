//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see
//! the criterion lines.

use std::f64::consts::PI;
use std::time::Instant;
use weakperf::cantor::{build_log_cantor_tree, CantorIntervalSet, DiscTree, MassDistribution};
use weakperf::cli::{cmd_verify_theorems, VerifyArgs};
use weakperf::content::{
    content_upper, converse_content_probe, forward_content_certificate,
    validate_disc_mass_inequality, ContentFamily,
};
use weakperf::gauges::GaugeFunction;
use weakperf::geometry::{PlanarSetSample, Point};
use weakperf::harmonic::{
    annulus_comparison_phi, chen_upper_bound, loglog_ratio_shift, CapacityProfile,
};
use weakperf::kernels::{
    bergman_annulus, bergman_upper_bound, check_bp_estimate, poincare_density,
    AnnulusKernelQuery, PoincareDomain, PoincareQuery,
};
use weakperf::perfectness::{
    fit_condition_parameters, test_h_perfectness, ConditionFamily, ProbeSpec, SetRepr,
};

fn verdict(criterion: u32, passed: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion:2} {}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: the closed-form bound dominates the series on the stated
/// grid with margin >= -1e-10, the t = 1/2 constant is exact to 1e-12,
/// and the sweep completes within 2 s.
#[test]
fn criterion_01_bergman_bound() {
    let start = Instant::now();
    let r_grid = [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
    let t_grid = [0.1, 0.25, 0.5];
    let mut min_margin = f64::INFINITY;
    for &r in &r_grid {
        for &t in &t_grid {
            let q = AnnulusKernelQuery::new(
                r,
                Point {
                    x: r.powf(t),
                    y: 0.0,
                },
            )
            .unwrap();
            let (value, _) = bergman_annulus(&q, 1e-12).unwrap();
            let bound = bergman_upper_bound(r, t).unwrap();
            min_margin = min_margin.min(bound - value);
        }
    }
    let mut max_dev: f64 = 0.0;
    for &r in &r_grid {
        let b = bergman_upper_bound(r, 0.5).unwrap();
        let explicit = 1.0 / (2.0 * PI * r * (1.0 / r).ln()) + 32.0 / (3.0 * PI);
        max_dev = max_dev.max((b - explicit).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        1,
        min_margin >= -1e-10 && max_dev <= 1e-12 && elapsed < 2.0,
        &format!("min margin {min_margin:.3e}, t=1/2 deviation {max_dev:.3e}, {elapsed:.2}s"),
    );
}

/// Criterion 2: truncated kernel vs brute-force +-2000 summation within
/// max(tail_bound, 1e-10) on 50 seeded random queries, within 5 s.
#[test]
fn criterion_02_series_correctness() {
    use rand::{Rng, SeedableRng};
    let start = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5EED);
    let mut worst_slack = f64::INFINITY;
    for _ in 0..50 {
        let r: f64 = rng.gen_range(0.05..0.5);
        let t: f64 = rng.gen_range(0.1..0.9);
        let abs_z = r.powf(t);
        let q = AnnulusKernelQuery::new(r, Point { x: abs_z, y: 0.0 }).unwrap();
        let (value, tail) = bergman_annulus(&q, 1e-12).unwrap();
        // independent long summation of the defining series
        let mut brute = 1.0 / (2.0 * PI * abs_z * abs_z * (1.0 / r).ln());
        for n in 1..=2000 {
            let q1 = abs_z.powi(2 * n);
            let q2 = (r / abs_z).powi(2 * n);
            brute += n as f64 * (q1 + q2) / ((1.0 - r.powi(2 * n)) * PI * abs_z * abs_z);
        }
        worst_slack = worst_slack.min(tail.max(1e-10) - (value - brute).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        2,
        worst_slack >= 0.0 && elapsed < 5.0,
        &format!("worst slack {worst_slack:.3e} over 50 queries, {elapsed:.2}s"),
    );
}

/// Criterion 3: the two annulus density forms agree to relative 1e-12 on
/// a 20-point radial grid, and the punctured-disk identity
/// rho |z| log(1/|z|) = 1 holds to 1e-14 down to |z| = e^-20.
#[test]
fn criterion_03_poincare_consistency() {
    let mut worst_rel: f64 = 0.0;
    for i in 0..20 {
        let r = 0.1 + 1.9 * i as f64 / 19.0;
        let m = 0.3 + 1.2 * i as f64 / 19.0;
        let centered = poincare_density(&PoincareQuery {
            domain: PoincareDomain::CenteredAnnulus { r, m },
            z: Point { x: r, y: 0.0 },
        })
        .unwrap();
        let symmetric = poincare_density(&PoincareQuery {
            domain: PoincareDomain::SymmetricAnnulus { big_r: m.exp() },
            z: Point { x: 1.0, y: 0.0 },
        })
        .unwrap()
            / r;
        worst_rel = worst_rel.max((centered / symmetric - 1.0).abs());
    }
    let mut worst_id: f64 = 0.0;
    for k in 1..=20 {
        let abs_z = (-(k as f64)).exp();
        let rho = poincare_density(&PoincareQuery {
            domain: PoincareDomain::PuncturedDisk,
            z: Point { x: abs_z, y: 0.0 },
        })
        .unwrap();
        worst_id = worst_id.max((rho * abs_z * (1.0 / abs_z).ln() - 1.0).abs());
    }
    verdict(
        3,
        worst_rel < 1e-12 && worst_id < 1e-14,
        &format!("annulus form deviation {worst_rel:.3e}, punctured identity {worst_id:.3e}"),
    );
}

/// Criterion 4: the Beardon-Pommerenke comparability ratio on the
/// punctured disk stays in [0.4, 1.1] for z = e^-k, k = 2..20. The exact
/// endpoints are k/(k+1) at the extreme k, frozen as regression values.
#[test]
fn criterion_04_bp_band() {
    let s = PlanarSetSample::circle_with_origin(512).unwrap();
    let z_seq: Vec<Point> = (2..=20)
        .map(|k| Point {
            x: (-(k as f64)).exp(),
            y: 0.0,
        })
        .collect();
    let report = check_bp_estimate(&z_seq, &PoincareDomain::PuncturedDisk, &s, 1.0).unwrap();
    let in_band = report.min_ratio >= 0.4 && report.max_ratio <= 1.1;
    let regression = (report.min_ratio - 2.0 / 3.0).abs() < 1e-12
        && (report.max_ratio - 20.0 / 21.0).abs() < 1e-12;
    verdict(
        4,
        in_band && regression,
        &format!(
            "ratio range [{:.12}, {:.12}]",
            report.min_ratio, report.max_ratio
        ),
    );
}

/// Radial finite-difference solve of the Dirichlet problem on the
/// annulus: u'' + u'/s = 0, u(a) = 0, u(b) = 1, second-order central
/// differences on a uniform grid, Thomas elimination. Independent oracle
/// for the comparison function.
fn fd_laplace_radial(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / (n as f64 + 1.0);
    let s: Vec<f64> = (1..=n).map(|i| a + h * i as f64).collect();
    // tridiagonal coefficients for u_{i-1}, u_i, u_{i+1}
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        sub[i] = 1.0 / (h * h) - 1.0 / (2.0 * h * s[i]);
        diag[i] = -2.0 / (h * h);
        sup[i] = 1.0 / (h * h) + 1.0 / (2.0 * h * s[i]);
    }
    // boundary conditions: u(a) = 0 contributes nothing, u(b) = 1
    rhs[n - 1] = -sup[n - 1];
    // Thomas
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut u = vec![0.0; n];
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = (rhs[i] - sup[i] * u[i + 1]) / diag[i];
    }
    (s, u)
}

/// Criterion 5: phi matches the finite-difference Laplace solve on three
/// annuli to 1e-4, and the shrunken-circle limit ratios are reproduced to
/// 1e-6 at r = 1e-12.
#[test]
fn criterion_05_phi_exactness() {
    let mut worst_fd: f64 = 0.0;
    for &(a, b) in &[(0.2, 1.0), (0.1, 0.9), (1.5, 3.2)] {
        let (s_grid, u) = fd_laplace_radial(a, b, 8000);
        for (s, u_fd) in s_grid.iter().zip(&u) {
            let phi = annulus_comparison_phi(a, b, *s).unwrap();
            worst_fd = worst_fd.max((phi - u_fd).abs());
        }
    }

    let r: f64 = 1e-12;
    let phi1 = annulus_comparison_phi(r.powf(3.0), r, r.powf(2.0)).unwrap();
    let want1 = (3.0 - 2.0) / (3.0 - 1.0);
    // log-power case: inner = r (log 1/r)^-3, probe circle at
    // s = r (log 1/r)^-1; ratio tends to (beta'-beta)/beta' = 2/3
    let lam = (1.0f64 / r).ln();
    let phi2 = annulus_comparison_phi(r * lam.powi(-3), r, r * lam.powi(-1)).unwrap();
    let want2 = (3.0 - 1.0) / 3.0;
    let dev = (phi1 - want1).abs().max((phi2 - want2).abs());
    verdict(
        5,
        worst_fd < 1e-4 && dev < 1e-6,
        &format!("FD deviation {worst_fd:.3e}, limit-ratio deviation {dev:.3e}"),
    );
}

/// Criterion 6: quadrature of the decay integral matches the symbolic
/// antiderivative to relative 1e-6 on 20 seeded parameter draws.
#[test]
fn criterion_06_chen_vs_antiderivative() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC4E2);
    let mut worst_rel: f64 = 0.0;
    for _ in 0..20 {
        let alpha: f64 = rng.gen_range(1.1..1.9);
        let c: f64 = rng.gen_range(0.1..1.2);
        let kappa: f64 = rng.gen_range(0.005..0.0624);
        let r: f64 = rng.gen_range(0.05..0.5);
        let cap = CapacityProfile::power_law(c, alpha, 1.0).unwrap();
        let upper = kappa * r / 2.0;
        if upper > cap.valid_r0() {
            continue;
        }
        let z = upper * (10f64).powf(-rng.gen_range(0.5..6.0));
        let got = chen_upper_bound(z, r, kappa, &cap, 1.0).unwrap();
        let a = 1.0 / (2.0 - alpha) - 1.0;
        let b = (1.0 / (2.0 * kappa * c)).ln();
        let integral = ((a * (1.0 / z).ln() + b).ln() - (a * (1.0 / upper).ln() + b).ln()) / a;
        let want = (-integral).exp();
        worst_rel = worst_rel.max((got / want - 1.0).abs());
    }
    verdict(
        6,
        worst_rel < 1e-6,
        &format!("worst relative error {worst_rel:.3e}"),
    );
}

/// Criterion 7: |I(r) + beta| strictly decreasing along
/// r = 1e-8, 1e-16, 1e-32, 1e-64 for beta in {1, 3, 10}, with the final
/// value below beta/4.
#[test]
fn criterion_07_iterated_log_limit() {
    let mut monotone = true;
    let mut worst_final: f64 = 0.0;
    let mut details = String::new();
    for &beta in &[1.0, 3.0, 10.0] {
        let mut prev = f64::INFINITY;
        let mut last = 0.0;
        for &e in &[8i32, 16, 32, 64] {
            let v = (loglog_ratio_shift((10f64).powi(-e), beta).unwrap() + beta).abs();
            monotone &= v < prev;
            prev = v;
            last = v;
        }
        worst_final = worst_final.max(last / beta);
        details.push_str(&format!("beta={beta}: |I+beta|/beta={:.4}; ", last / beta));
    }
    verdict(7, monotone && worst_final < 0.25, &details);
}

/// Criterion 8: the Bernoulli mass is a probability measure with exact
/// dyadic additivity to depth 12; the factor-18 disc-mass inequality
/// passes 1000 seeded trials on the depth-10 log-space tree, and the
/// doubled-exponent control produces violations.
#[test]
fn criterion_08_mass_distribution() {
    // additivity at depth 12, exact dyadic arithmetic
    let set12 = CantorIntervalSet::build_u1(0.1, 2.0, 18).unwrap();
    let tree12 = build_log_cantor_tree(&set12, 0.5, 0.05, 0.4, 12).unwrap();
    let m12 = MassDistribution::new(&tree12);
    let mut additive = true;
    for k in 0..12 {
        additive &= m12.node_mass(k) == 2.0 * m12.node_mass(k + 1);
        additive &= (1u64 << k) as f64 * m12.node_mass(k) == 1.0;
    }
    let mut leaf_sum = 0.0;
    for _ in 0..(1u64 << 12) {
        leaf_sum += m12.node_mass(12);
    }
    additive &= leaf_sum == 1.0;

    // trials on the depth-10 tree
    let set = CantorIntervalSet::build_u1(0.1, 2.0, 16).unwrap();
    let tree = build_log_cantor_tree(&set, 0.5, 0.05, 0.4, 10).unwrap();
    let m = MassDistribution::new(&tree);
    let c2 = 0.4 * 0.5 * 0.25; // c~ C0 2^-alpha, alpha = 2
    let gauge = GaugeFunction::log_gauge(1.0, c2, 0.2)
        .unwrap()
        .monotone_extension();
    let report = validate_disc_mass_inequality(&m, &gauge, 18.0, 1000, 0xACCE55).unwrap();

    let wrong = GaugeFunction::log_gauge(2.0, c2, 0.2)
        .unwrap()
        .monotone_extension();
    let control = validate_disc_mass_inequality(&m, &wrong, 18.0, 1000, 0xACCE55).unwrap();

    verdict(
        8,
        additive && report.passed && control.violations >= 1,
        &format!(
            "additivity exact; worst ratio {:.3e}; control violations {}",
            report.worst_ratio, control.violations
        ),
    );
}

/// Criterion 9: the forward certificate's lower bound (1/18) g(2r) stays
/// below the cover upper bound on the same tree, and the level cover
/// value at (l0 = 0.1, alpha = 2, gamma = 0.01, j = 10) vanishes below
/// 1e-6, matching the extended-precision reference 5.8925e-8.
#[test]
fn criterion_09_forward_certificate_and_vanishing() {
    let set = CantorIntervalSet::build_u1(0.1, 2.0, 16).unwrap();
    let tree = build_log_cantor_tree(&set, 0.5, 0.05, 0.4, 10).unwrap();
    let est = forward_content_certificate(&tree, 1000, 0xACCE55).unwrap();

    let v = set.content_upper_bound_levels(0.01, 10).unwrap();
    let reference = 5.892504958332487e-8;
    verdict(
        9,
        est.lower > 0.0
            && est.lower <= est.upper + 1e-12
            && v < 1e-6
            && (v / reference - 1.0).abs() < 1e-10,
        &format!(
            "lower {:.6e} <= upper {:.6e}; vanishing value {v:.6e}",
            est.lower, est.upper
        ),
    );
}

/// Criterion 10: the converse probe returns alpha = 2 with a finite
/// threshold for A = 0.9, gamma = 1, C = 1, and the log-power family scan
/// terminates within the doubling budget.
#[test]
fn criterion_10_converse_probe() {
    let g1 = GaugeFunction::log_gauge(1.0, 2.0, 0.25).unwrap(); // C = scale/2 = 1
    let p1 = converse_content_probe(&g1, 0.9, ContentFamily::U1).unwrap();
    let g2 = GaugeFunction::log_log_gauge(1.0, 0.25).unwrap();
    let p2 = converse_content_probe(&g2, 0.5, ContentFamily::U2).unwrap();
    verdict(
        10,
        p1.exponent == 2.0 && p1.r1 > 0.0 && p1.r1 < 1.0 && p2.exponent >= 1.0,
        &format!(
            "U1: alpha = {} with r1 = {:.1e}; U2: beta = {} with r1 = {:.1e}",
            p1.exponent, p1.r1, p2.exponent, p2.r1
        ),
    );
}

/// Criterion 11: fitted exponents land in the stated windows, the segment
/// passes classical uniform perfectness at C = 0.5, and the full
/// verify-theorems suite passes in under 60 s.
#[test]
fn criterion_11_perfectness_fits_and_full_suite() {
    let start = Instant::now();

    let u1 = CantorIntervalSet::build_u1(0.1, 2.0, 10).unwrap();
    let fit1 = fit_condition_parameters(SetRepr::Cantor(&u1), ConditionFamily::U1).unwrap();

    let u2 = CantorIntervalSet::build_u2((-100.0f64).exp(), 3.0, 10).unwrap();
    let fit2 = fit_condition_parameters(SetRepr::Cantor(&u2), ConditionFamily::U2).unwrap();

    let seg = PlanarSetSample::segment(200).unwrap();
    let h = GaugeFunction::power(1.0, 0.5).unwrap();
    let cert = test_h_perfectness(&seg, &h, 0.4, &ProbeSpec::default()).unwrap();

    let args = VerifyArgs {
        checks: ["kernel", "poincare", "harmonic", "content", "perfectness"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        trials: 1000,
        seed: 0xC0FFEE,
        negative_control: true,
        out_json: None,
        out_csv: None,
    };
    let mut sink = Vec::new();
    let report = cmd_verify_theorems(&args, &mut sink).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    verdict(
        11,
        (1.8..=2.2).contains(&fit1.exponent)
            && (2.5..=3.5).contains(&fit2.exponent)
            && cert.verdict
            && report.failed == 0
            && elapsed < 60.0,
        &format!(
            "alpha_hat {:.4}, beta_hat {:.4}, segment pass, suite {}/{} in {elapsed:.1}s",
            fit1.exponent, fit2.exponent, report.passed, report.total
        ),
    );
}

/// The consistency pair behind criterion 9: the mass lower bound never
/// exceeds the independent cover upper bound computed on the interval set
/// itself (not just the tree's own covers).
#[test]
fn forward_lower_bound_vs_interval_cover_upper() {
    let set = CantorIntervalSet::build_u1(0.1, 2.0, 16).unwrap();
    let tree = build_log_cantor_tree(&set, 0.5, 0.05, 0.4, 8).unwrap();
    let est = forward_content_certificate(&tree, 400, 5).unwrap();
    // cover the whole interval set with the certificate's own gauge
    let DiscTree::LogCantor(t) = &tree else {
        panic!()
    };
    let gamma = est.derived.iter().find(|(k, _)| k == "gamma").unwrap().1;
    let c2 = t.c_tilde * t.c0 * 0.25;
    let g = GaugeFunction::log_gauge(gamma, c2, 0.2)
        .unwrap()
        .monotone_extension();
    let (upper_set, _) = content_upper(SetRepr::Cantor(&set), &g, 1 << 16).unwrap();
    assert!(
        est.lower <= upper_set + 1e-12,
        "tree lower bound {} exceeds interval-set cover bound {}",
        est.lower,
        upper_set
    );
}
