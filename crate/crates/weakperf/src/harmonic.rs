//! Harmonic-measure machinery: the annulus comparison function, the
//! integral upper bound driven by parametric capacity profiles, the local
//! harmonic-measure decay (LHMD) closed forms, the shrunken-circle
//! condition probe, and the iterated-logarithm limit behind the log-power
//! gauge case.
//!
//! Capacity itself is never computed; it enters only as a named
//! lower-bound profile, exactly as the estimates consume it.

use crate::extended::Dd;
use crate::gauges::GaugeFunction;
use crate::geometry::Point;
use crate::{Error, Result};
use serde::Serialize;

/// Parametric lower-bound profile for the capacity of the complement
/// inside a disc of radius `t`.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum CapacityProfile {
    /// `Cap(K_t) >= C t^(1/(2-alpha))` with alpha in (1, 2).
    PowerLaw { c: f64, alpha: f64, valid_r0: f64 },
    /// `Cap(K_t) >= C t (log 1/t)^-beta`.
    LogCorrected { c: f64, beta: f64, valid_r0: f64 },
}

impl CapacityProfile {
    pub fn power_law(c: f64, alpha: f64, r0: f64) -> Result<CapacityProfile> {
        if !(alpha > 1.0 && alpha < 2.0) || !(c > 0.0) || !(r0 > 0.0) {
            return Err(Error::Domain(format!(
                "power-law profile needs alpha in (1,2), C > 0, r0 > 0; got alpha={alpha}, C={c}, r0={r0}"
            )));
        }
        // keep Cap_lower(t) <= t: C t^(1/(2-alpha)) <= t iff t <= C^(-(2-alpha)/(alpha-1))
        let cap = c.powf(-(2.0 - alpha) / (alpha - 1.0));
        Ok(CapacityProfile::PowerLaw {
            c,
            alpha,
            valid_r0: r0.min(cap).min(1.0),
        })
    }

    pub fn log_corrected(c: f64, beta: f64, r0: f64) -> Result<CapacityProfile> {
        if !(beta > 0.0) || !(c > 0.0) || !(r0 > 0.0) {
            return Err(Error::Domain(format!(
                "log-corrected profile needs beta > 0, C > 0, r0 > 0; got beta={beta}, C={c}, r0={r0}"
            )));
        }
        let cap = (-c.powf(1.0 / beta)).exp();
        Ok(CapacityProfile::LogCorrected {
            c,
            beta,
            valid_r0: r0.min(cap).min(0.3),
        })
    }

    pub fn valid_r0(&self) -> f64 {
        match *self {
            CapacityProfile::PowerLaw { valid_r0, .. } => valid_r0,
            CapacityProfile::LogCorrected { valid_r0, .. } => valid_r0,
        }
    }

    /// The profile value at `t`.
    pub fn lower_bound(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= self.valid_r0()) {
            return Err(Error::Domain(format!(
                "profile argument {t} outside (0, {}]",
                self.valid_r0()
            )));
        }
        Ok(match *self {
            CapacityProfile::PowerLaw { c, alpha, .. } => c * t.powf(1.0 / (2.0 - alpha)),
            CapacityProfile::LogCorrected { c, beta, .. } => c * t * (1.0 / t).ln().powf(-beta),
        })
    }
}

/// The harmonic function of `log|z|` on the annulus `inner < |z-a| < outer`
/// with boundary values 0 and 1, evaluated on the circle `|z-a| = s`:
/// `log(s/inner)/log(outer/inner)`. For the annulus itself this is the
/// exact harmonic measure of the outer circle.
pub fn annulus_comparison_phi(inner: f64, outer: f64, s: f64) -> Result<f64> {
    if !(inner > 0.0 && inner < s && s < outer) {
        return Err(Error::Domain(format!(
            "phi needs 0 < inner < s < outer, got inner={inner}, s={s}, outer={outer}"
        )));
    }
    let v = Dd::from_f64(s)
        .div(Dd::from_f64(inner))
        .ln()
        .div(Dd::from_f64(outer).div(Dd::from_f64(inner)).ln())
        .to_f64();
    Ok(v)
}

/// Integrand of the decay integral in the log variable `u = log t`:
/// `1/(t log(t/(2 kappa Cap(K_t)))) dt = du / D(u)` where the denominator
/// is affine (power-law profile) or iterated-log (log-corrected) in `u`.
fn chen_integrand_log(u: f64, kappa: f64, cap: &CapacityProfile) -> f64 {
    match *cap {
        CapacityProfile::PowerLaw { c, alpha, .. } => {
            let a = 1.0 / (2.0 - alpha) - 1.0;
            let b = (1.0 / (2.0 * kappa * c)).ln();
            1.0 / (b - a * u)
        }
        CapacityProfile::LogCorrected { c, beta, .. } => {
            let b = (1.0 / (2.0 * kappa * c)).ln();
            1.0 / (beta * (-u).ln() + b)
        }
    }
}

// Gauss-Kronrod 7-15 pair on [-1, 1].
const GK_NODES: [f64; 15] = [
    -0.991455371120813,
    -0.949107912342759,
    -0.864864423359769,
    -0.741531185599394,
    -0.586087235467691,
    -0.405845151377397,
    -0.207784955007898,
    0.0,
    0.207784955007898,
    0.405845151377397,
    0.586087235467691,
    0.741531185599394,
    0.864864423359769,
    0.949107912342759,
    0.991455371120813,
];
const K15_WEIGHTS: [f64; 15] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
    0.204432940075298,
    0.190350578064785,
    0.169004726639267,
    0.140653259715525,
    0.104790010322250,
    0.063092092629979,
    0.022935322010529,
];
const G7_WEIGHTS: [f64; 7] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
    0.381830050505119,
    0.279705391489277,
    0.129484966168870,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k = 0.0;
    let mut g = 0.0;
    for (i, &x) in GK_NODES.iter().enumerate() {
        let v = f(mid + half * x);
        k += K15_WEIGHTS[i] * v;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * v;
        }
    }
    (k * half, (k - g).abs() * half)
}

/// Adaptive Gauss-Kronrod refinement to the requested relative tolerance.
fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (whole, _) = gk15(f, a, b);
    let abs_tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 {
            return val;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, tol * 0.5, depth + 1) + recurse(f, mid, b, tol * 0.5, depth + 1)
    }
    recurse(f, a, b, abs_tol, 0)
}

/// Upper bound for the harmonic measure at distance `z_dist` from the
/// boundary point, using the integral decay estimate with the capacity
/// profile's lower bound and the conventional upper limit `kappa r / 2`.
pub fn chen_upper_bound(
    z_dist: f64,
    r: f64,
    kappa: f64,
    cap: &CapacityProfile,
    c_kappa: f64,
) -> Result<f64> {
    chen_upper_bound_with_limit(z_dist, kappa * r / 2.0, kappa, cap, c_kappa)
}

/// Same bound with an explicit upper integration limit (the estimate is
/// stated with `kappa r_1`; its applications use `kappa r / 2`, so the
/// limit is a parameter here).
pub fn chen_upper_bound_with_limit(
    z_dist: f64,
    upper: f64,
    kappa: f64,
    cap: &CapacityProfile,
    c_kappa: f64,
) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0 / 16.0) {
        return Err(Error::Domain(format!(
            "kappa must lie in (0, 1/16), got {kappa}"
        )));
    }
    if !(c_kappa > 0.0) {
        return Err(Error::Domain(format!(
            "C_kappa must be positive, got {c_kappa}"
        )));
    }
    if !(z_dist > 0.0 && z_dist < upper) {
        return Err(Error::Domain(format!(
            "need 0 < z_dist < upper limit, got z_dist={z_dist}, upper={upper}"
        )));
    }
    if upper > cap.valid_r0() {
        return Err(Error::BoundInapplicable(format!(
            "integration range reaches {upper}, beyond the profile validity {}",
            cap.valid_r0()
        )));
    }
    // the integrand must be positive on the whole range; its denominator
    // is monotone in log t, so checking both endpoints suffices
    for u in [z_dist.ln(), upper.ln()] {
        let v = chen_integrand_log(u, kappa, cap);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::BoundInapplicable(
                "integrand nonpositive on the range (capacity profile too large)".into(),
            ));
        }
    }
    let f = |u: f64| chen_integrand_log(u, kappa, cap);
    let integral = adaptive_gk(&f, z_dist.ln(), upper.ln(), 1e-8);
    Ok((-c_kappa * integral).exp().clamp(0.0, 1.0))
}

/// `C3 (log(1/z_dist) / log(1/r))^-gamma`, clamped to [0, 1].
pub fn lhmd1_bound(z_dist: f64, r: f64, gamma: f64, c3: f64) -> Result<f64> {
    if !(r < 1.0) {
        return Err(Error::Domain(format!("lhmd1 needs r < 1, got {r}")));
    }
    if !(z_dist > 0.0 && z_dist <= r) {
        return Err(Error::Domain(format!(
            "lhmd1 needs 0 < z_dist <= r, got z_dist={z_dist}, r={r}"
        )));
    }
    if !(gamma > 0.0 && c3 > 0.0) {
        return Err(Error::Domain(format!(
            "lhmd1 needs gamma, C3 > 0, got {gamma}, {c3}"
        )));
    }
    let ratio = Dd::from_f64(z_dist).ln().div(Dd::from_f64(r).ln());
    let v = ratio.ln().mul_f64(-gamma).exp().mul_f64(c3).to_f64();
    Ok(v.clamp(0.0, 1.0))
}

const E_TO_MINUS_E: f64 = 0.06598803584531254; // e^-e

/// `C3 exp(-eta (F(z_dist) - F(r)))` with `F(t) = log(1/t)/log log(1/t)`,
/// clamped to [0, 1]. Requires `z_dist <= r < e^-e` so the iterated log
/// stays above 1.
pub fn lhmd2_bound(z_dist: f64, r: f64, eta: f64, c3: f64) -> Result<f64> {
    if !(r < E_TO_MINUS_E) {
        return Err(Error::Domain(format!("lhmd2 needs r < e^-e, got {r}")));
    }
    if !(z_dist > 0.0 && z_dist <= r) {
        return Err(Error::Domain(format!(
            "lhmd2 needs 0 < z_dist <= r, got z_dist={z_dist}, r={r}"
        )));
    }
    if !(eta > 0.0 && c3 > 0.0) {
        return Err(Error::Domain(format!(
            "lhmd2 needs eta, C3 > 0, got {eta}, {c3}"
        )));
    }
    let f = |t: f64| {
        let lam = Dd::from_f64(t).ln().neg();
        lam.div(lam.ln())
    };
    let v = f(z_dist).sub(f(r)).mul_f64(-eta).exp().mul_f64(c3).to_f64();
    Ok(v.clamp(0.0, 1.0))
}

/// The checkable core of the shrunken-circle conditions: with the annulus
/// model (exact harmonic measure = phi), does the measure on the circle
/// `|z - a| = h(outer_r)` stay at most `1 - epsilon` when the empty gap
/// floor sits at `inner_scale`?
pub fn delta_condition_probe(
    h: &GaugeFunction,
    inner_scale: f64,
    outer_r: f64,
    epsilon: f64,
) -> Result<bool> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    let s = h.evaluate(outer_r)?;
    if !(s < outer_r) {
        return Err(Error::Domain(format!(
            "gauge must contract: h({outer_r}) = {s} not below outer radius"
        )));
    }
    if !(inner_scale < s) {
        return Err(Error::Domain(format!(
            "gap floor {inner_scale} must sit below the probe circle {s}"
        )));
    }
    let phi = annulus_comparison_phi(inner_scale, outer_r, s)?;
    Ok(phi <= 1.0 - epsilon)
}

/// Shift of the iterated-log ratio `F(t) = log t / log log(1/t)` when a
/// radius contracts through the log-power gauge: with
/// `h(r) = r (log 1/r)^-beta`,
///
/// ```text
/// I(r) = F(h(r)) - F(r)
///      = (log r - beta log log(1/r)) / log(log(1/r) + beta log log(1/r))
///        - log r / log log(1/r)
/// ```
///
/// which tends to `-beta` as `r -> 0`. Evaluated in double-double
/// arithmetic by default, meaningful down to r = 1e-300; the
/// plain-double mode exists for precision comparisons.
pub fn loglog_ratio_shift(r: f64, beta: f64) -> Result<f64> {
    loglog_ratio_shift_in(r, beta, crate::PrecisionMode::Extended)
}

pub fn loglog_ratio_shift_in(r: f64, beta: f64, mode: crate::PrecisionMode) -> Result<f64> {
    if !(r > 0.0 && r < E_TO_MINUS_E) {
        return Err(Error::Domain(format!("I(r) needs 0 < r < e^-e, got {r}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::Domain(format!(
            "beta must be nonnegative, got {beta}"
        )));
    }
    match mode {
        crate::PrecisionMode::Extended => {
            let ln_r = Dd::from_f64(r).ln();
            let big_l = ln_r.neg();
            let ll = big_l.ln();
            let num = ln_r.sub(ll.mul_f64(beta));
            let den = big_l.add(ll.mul_f64(beta)).ln();
            Ok(num.div(den).sub(ln_r.div(ll)).to_f64())
        }
        crate::PrecisionMode::Double => {
            let ln_r = r.ln();
            let big_l = -ln_r;
            let ll = big_l.ln();
            Ok((ln_r - beta * ll) / (big_l + beta * ll).ln() - ln_r / ll)
        }
    }
}

/// Constants of the power-law decay pipeline, derived constructively from
/// the inequality chain instead of the bare existence claim: `gamma` is
/// the floor of `C_kappa / (a + b/log(1/t))` over the integration range,
/// `C1` absorbs the upper-limit shift, `C2` floors the comparison on the
/// outer band, and `C3 = max(C1, 1/C2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Lhmd1Constants {
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

pub fn lhmd1_constants_from_chen(
    kappa: f64,
    r1: f64,
    alpha: f64,
    c: f64,
    c_kappa: f64,
) -> Result<Lhmd1Constants> {
    if !(kappa > 0.0 && kappa < 1.0 / 16.0) {
        return Err(Error::Domain(format!(
            "kappa must lie in (0, 1/16), got {kappa}"
        )));
    }
    if !(r1 > 0.0 && r1 < E_TO_MINUS_E) {
        return Err(Error::Domain(format!("r1 must lie in (0, e^-e), got {r1}")));
    }
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (1, 2), got {alpha}"
        )));
    }
    let a = 1.0 / (2.0 - alpha) - 1.0;
    let b = (1.0 / (2.0 * kappa * c)).ln();
    if b < 0.0 {
        return Err(Error::BoundInapplicable(
            "capacity constant too large for the chosen kappa (log(1/(2 kappa C)) < 0)".into(),
        ));
    }
    // floor of the denominator comparison over t <= kappa r1 / 2
    let t_max = kappa * r1 / 2.0;
    let gamma = c_kappa / (a + b / (1.0 / t_max).ln());
    let ll = |x: f64| x.ln().ln();
    let c1 = (gamma * (ll(2.0 / (kappa * r1)) - ll(1.0 / r1))).exp();
    let c2 = ((2.0f64 / (kappa * r1)).ln() / (1.0 / r1).ln()).powf(-gamma);
    Ok(Lhmd1Constants {
        gamma,
        c1,
        c2,
        c3: c1.max(1.0 / c2),
    })
}

/// One row of a harmonic-bound report.
#[derive(Debug, Clone, Serialize)]
pub struct HarmonicBoundReport {
    pub a: Point,
    pub r: f64,
    pub z_dist: f64,
    pub method: String,
    pub bound_value: f64,
    pub params: Vec<(String, f64)>,
    pub clamped: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_log_midpoint_is_half() {
        let inner: f64 = 0.01;
        let outer: f64 = 0.4;
        let s = (inner * outer).sqrt();
        let v = annulus_comparison_phi(inner, outer, s).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn phi_limit_ratio_power_case() {
        // inner = r^3, outer = r, s = r^2 at C = C' = 1: phi = 1/2 exactly
        let r: f64 = 0.1;
        let v = annulus_comparison_phi(r.powi(3), r, r.powi(2)).unwrap();
        assert!((v - 0.5).abs() < 1e-13);
    }

    #[test]
    fn phi_increasing_in_s() {
        let mut prev = 0.0;
        for i in 1..20 {
            let s = 0.01 + 0.39 * i as f64 / 20.0;
            let v = annulus_comparison_phi(0.01, 0.4, s).unwrap();
            assert!(v > prev && v < 1.0);
            prev = v;
        }
    }

    #[test]
    fn phi_rejects_bad_ordering() {
        assert!(annulus_comparison_phi(0.4, 0.2, 0.3).is_err());
        assert!(annulus_comparison_phi(0.1, 0.4, 0.05).is_err());
    }

    /// Closed-form antiderivative of the power-law integrand:
    /// (1/a) [log(a log(1/t) + b)] evaluated between the limits.
    fn power_law_integral_closed_form(z: f64, upper: f64, kappa: f64, c: f64, alpha: f64) -> f64 {
        let a = 1.0 / (2.0 - alpha) - 1.0;
        let b = (1.0 / (2.0 * kappa * c)).ln();
        ((a * (1.0 / z).ln() + b).ln() - (a * (1.0 / upper).ln() + b).ln()) / a
    }

    #[test]
    fn chen_quadrature_matches_antiderivative() {
        let kappa = 0.04;
        let c = 0.5;
        let alpha = 1.5;
        let cap = CapacityProfile::power_law(c, alpha, 0.5).unwrap();
        let r = 0.3;
        let upper = kappa * r / 2.0;
        for &z in &[upper * 1e-6, upper * 1e-3, upper * 0.5] {
            let got = chen_upper_bound(z, r, kappa, &cap, 1.0).unwrap();
            let want = (-power_law_integral_closed_form(z, upper, kappa, c, alpha)).exp();
            assert!(
                (got / want - 1.0).abs() < 1e-7,
                "z={z}: quadrature {got} vs closed form {want}"
            );
        }
    }

    #[test]
    fn chen_limits() {
        let cap = CapacityProfile::power_law(0.5, 1.5, 0.5).unwrap();
        let kappa = 0.04;
        let r = 0.3;
        let upper = kappa * r / 2.0;
        // z_dist -> upper: integral -> 0, bound -> 1
        let near = chen_upper_bound(upper * (1.0 - 1e-12), r, kappa, &cap, 1.0).unwrap();
        assert!((near - 1.0).abs() < 1e-9);
        // shrinking z_dist strictly decreases the bound
        let mut prev = 2.0;
        for k in 1..8 {
            let z = upper * (10.0f64).powi(-k);
            let v = chen_upper_bound(z, r, kappa, &cap, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn chen_log_corrected_profile_runs() {
        let cap = CapacityProfile::log_corrected(0.5, 2.0, 0.2).unwrap();
        let kappa = 0.05;
        let r = 0.2;
        let v = chen_upper_bound(1e-8, r, kappa, &cap, 1.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn lhmd1_examples() {
        // z_dist = r gives C3
        assert!((lhmd1_bound(0.05, 0.05, 1.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        // gamma=1, C3=1, r=0.1, z=0.01: (2)^-1 = 0.5
        assert!((lhmd1_bound(0.01, 0.1, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        // decreasing as z_dist shrinks
        let mut prev = 2.0;
        for k in 1..10 {
            let v = lhmd1_bound((0.1f64).powi(k), 0.1, 1.0, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn lhmd2_examples() {
        let r = (-(std::f64::consts::E * std::f64::consts::E)).exp(); // e^-e^2
                                                                      // z_dist = r gives C3
        assert!((lhmd2_bound(r, r, 1.0, 0.9).unwrap() - 0.9).abs() < 1e-15);
        // eta=1, C3=1, r=e^-e^2, z=e^-e^3: exponent e^3/3 - e^2/2,
        // value 0.049754671269027151... (40-digit reference)
        let z = (-std::f64::consts::E.powi(3)).exp();
        let v = lhmd2_bound(z, r, 1.0, 1.0).unwrap();
        assert!((v / 0.04975467126902715 - 1.0).abs() < 1e-13);
        // monotone under shrinking z_dist
        let v_smaller = lhmd2_bound(z * 1e-4, r, 1.0, 1.0).unwrap();
        assert!(v_smaller < v);
    }

    #[test]
    fn bounds_clamped_to_unit_interval() {
        // C3 > 1 at z_dist = r would exceed 1 without clamping
        assert_eq!(lhmd1_bound(0.05, 0.05, 1.0, 3.0).unwrap(), 1.0);
        let r = (-(std::f64::consts::E * std::f64::consts::E)).exp();
        assert_eq!(lhmd2_bound(r, r, 1.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn delta_probe_limit_ratios() {
        // inner = r^alpha', s = h(r) = r^alpha: phi -> (alpha'-alpha)/(alpha'-1)
        let h = GaugeFunction::power(2.0, 1.0).unwrap();
        let r: f64 = 1e-6;
        let inner = r.powf(3.0);
        // phi = 1/2: passes for eps <= 1/2, fails beyond
        assert!(delta_condition_probe(&h, inner, r, 0.4).unwrap());
        assert!(!delta_condition_probe(&h, inner, r, 0.6).unwrap());
        // eps = 0 is always true
        assert!(delta_condition_probe(&h, inner, r, 0.0).unwrap());
    }

    #[test]
    fn delta_probe_log_power_ratio() {
        // log-power family: gap floor at r (log 1/r)^-beta', probe circle
        // at h(r) = r (log 1/r)^-beta; the ratio tends to (beta'-beta)/beta'
        let h = GaugeFunction::log_power(1.0, 1.0).unwrap();
        let r: f64 = 1e-9;
        let lam = (1.0f64 / r).ln();
        let inner = r * lam.powi(-3);
        // phi = 2/3 here: passes for eps below 1/3, fails above
        assert!(delta_condition_probe(&h, inner, r, 0.32).unwrap());
        assert!(!delta_condition_probe(&h, inner, r, 0.35).unwrap());
    }

    #[test]
    fn loglog_shift_limit_examples() {
        // beta = 0: identically zero
        assert_eq!(loglog_ratio_shift(1e-10, 0.0).unwrap(), 0.0);
        // reference values (40-digit): I(1e-8, 1) = -0.648658...,
        // I(1e-64, 10) = -7.818275...
        let v = loglog_ratio_shift(1e-8, 1.0).unwrap();
        assert!((v - (-0.648658)).abs() < 1e-5);
        let v = loglog_ratio_shift(1e-64, 10.0).unwrap();
        assert!((v - (-7.818275)).abs() < 1e-5);
        // negative for small r, beta > 0
        for k in [8, 16, 32, 64] {
            assert!(loglog_ratio_shift((10.0f64).powi(-k), 3.0).unwrap() < 0.0);
        }
    }

    #[test]
    fn chen_bound_below_derived_lhmd1() {
        // the derivation chain: the integral bound with the power-law
        // profile is dominated by the lhmd1 form with the constructive
        // gamma, C3, for z_dist < kappa r / 2
        let kappa = 0.04;
        let r1 = 0.05;
        let alpha = 1.5;
        let c = 0.5;
        let consts = lhmd1_constants_from_chen(kappa, r1, alpha, c, 1.0).unwrap();
        let cap = CapacityProfile::power_law(c, alpha, 1.0).unwrap();
        let r = r1;
        let upper = kappa * r / 2.0;
        for k in 1..12 {
            let z = upper * (10.0f64).powi(-k);
            let chen = chen_upper_bound(z, r, kappa, &cap, 1.0).unwrap();
            let lhmd = lhmd1_bound(z, r, consts.gamma, consts.c3).unwrap();
            assert!(
                chen <= lhmd + 1e-12,
                "chain violated at z={z}: chen {chen} > lhmd {lhmd}"
            );
        }
    }

    #[test]
    fn profile_stays_below_identity() {
        let p = CapacityProfile::power_law(1.5, 1.5, 1.0).unwrap();
        let r0 = p.valid_r0();
        for i in 1..=10 {
            let t = r0 * i as f64 / 10.0 * 0.999;
            assert!(p.lower_bound(t).unwrap() <= t * (1.0 + 1e-12));
        }
    }
}
