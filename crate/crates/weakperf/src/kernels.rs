//! On-diagonal Bergman kernel of the annulus `{r < |z| < 1}` with a
//! certified truncation bound, the closed-form upper bound for
//! `r, t <= 1/2`, Poincare densities of annuli and the punctured disk,
//! and the Beardon-Pommerenke quantity with its two-sided comparability
//! check.
//!
//! The kernel series on the diagonal at `|z| = r^t` is
//!
//! ```text
//! K(z) = 1/(2 pi |z|^2 log(1/r))
//!      + 1/(pi |z|^2) * sum_{n>=1} n (q1^n + q2^n) / (1 - r^(2n))
//! ```
//!
//! with `q1 = |z|^2` and `q2 = (r/|z|)^2` (the negative-index terms fold
//! into the `q2` powers). All terms are positive; truncation after `N`
//! terms is controlled by the geometric tail
//!
//! ```text
//! sum_{n>N} n q^n = q^(N+1) ((N+1) - N q) / (1-q)^2
//! ```
//!
//! applied to both ratios with the crude `1 - r^(2n) >= 1 - r^2`.

use crate::extended::neumaier_sum;
use crate::geometry::{PlanarSetSample, Point};
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Diagonal kernel query on the normalized annulus `{r < |z| < 1}`.
#[derive(Debug, Clone, Copy)]
pub struct AnnulusKernelQuery {
    pub inner_ratio: f64,
    pub z: Point,
}

impl AnnulusKernelQuery {
    /// `r <= 0.9` keeps the series conditioning sane.
    pub fn new(inner_ratio: f64, z: Point) -> Result<AnnulusKernelQuery> {
        let abs_z = (z.x * z.x + z.y * z.y).sqrt();
        if !(inner_ratio > 0.0 && inner_ratio <= 0.9) {
            return Err(Error::Domain(format!(
                "inner ratio must lie in (0, 0.9], got {inner_ratio}"
            )));
        }
        if !(abs_z > inner_ratio && abs_z < 1.0) {
            return Err(Error::Domain(format!(
                "query point must satisfy r < |z| < 1, got |z| = {abs_z}"
            )));
        }
        Ok(AnnulusKernelQuery { inner_ratio, z })
    }

    pub fn abs_z(&self) -> f64 {
        (self.z.x * self.z.x + self.z.y * self.z.y).sqrt()
    }

    /// Radial position exponent `t = log|z| / log r`, in (0, 1).
    pub fn t(&self) -> f64 {
        self.abs_z().ln() / self.inner_ratio.ln()
    }
}

fn geometric_tail(q: f64, n: usize) -> f64 {
    let nf = n as f64;
    q.powi(n as i32 + 1) * ((nf + 1.0) - nf * q) / ((1.0 - q) * (1.0 - q))
}

/// Evaluates the diagonal kernel by symmetric partial summation, choosing
/// the smallest truncation index whose analytic tail bound is below
/// `tol`. Returns the truncated value and that tail bound.
pub fn bergman_annulus(q: &AnnulusKernelQuery, tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let r = q.inner_ratio;
    let abs_z = q.abs_z();
    let q1 = abs_z * abs_z;
    let q2 = (r / abs_z) * (r / abs_z);
    let prefactor = 1.0 / (PI * abs_z * abs_z);
    let denom_floor = 1.0 - r * r;

    let tail_at =
        |n: usize| prefactor * (geometric_tail(q1, n) + geometric_tail(q2, n)) / denom_floor;

    // smallest N with tail < tol: grow then binary search
    let mut hi = 1usize;
    while tail_at(hi) >= tol {
        hi *= 2;
        if hi > 100_000_000 {
            return Err(Error::Domain(format!(
                "tolerance {tol} unreachable (|z| or r/|z| too close to 1)"
            )));
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if tail_at(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n_trunc = if tail_at(1) < tol { 1 } else { hi };

    let r2 = r * r;
    let mut p1 = 1.0f64;
    let mut p2 = 1.0f64;
    let mut pr = 1.0f64;
    let terms = (1..=n_trunc).map(|n| {
        p1 *= q1;
        p2 *= q2;
        pr *= r2;
        n as f64 * (p1 + p2) / (1.0 - pr)
    });
    let series = prefactor * neumaier_sum(terms);
    let principal = 1.0 / (2.0 * PI * abs_z * abs_z * (1.0 / r).ln());
    Ok((principal + series, tail_at(n_trunc)))
}

/// Right side of the closed-form bound for `r, t` in `(0, 1/2]`:
/// `1/(2 pi r^(2t) log(1/r)) + (8/(3 pi)) (1 - 2^(-2t))^(-2)`.
pub fn bergman_upper_bound(r: f64, t: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 0.5 && t > 0.0 && t <= 0.5) {
        return Err(Error::Domain(format!(
            "bound needs r, t in (0, 1/2], got r={r}, t={t}"
        )));
    }
    let principal = 1.0 / (2.0 * PI * r.powf(2.0 * t) * (1.0 / r).ln());
    let c = 1.0 - (2f64).powf(-2.0 * t);
    Ok(principal + 8.0 / (3.0 * PI) / (c * c))
}

/// Kernel transport under the affine map with `|T'| = scale`:
/// `K_A(z) = K_R(T z) |T'|^2`.
pub fn bergman_transport(k_value: f64, scale: f64) -> f64 {
    k_value * scale * scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PoincareDomain {
    /// `{1/R < |z| < R}` with R > 1.
    SymmetricAnnulus { big_r: f64 },
    /// `{r e^-m < |z| < r e^m}` with r, m > 0.
    CenteredAnnulus { r: f64, m: f64 },
    /// `{0 < |z| < 1}`.
    PuncturedDisk,
}

#[derive(Debug, Clone, Copy)]
pub struct PoincareQuery {
    pub domain: PoincareDomain,
    pub z: Point,
}

/// Closed-form Poincare density (curvature -1 normalization).
///
/// The symmetric annulus uses the cosine formula; the centered annulus
/// uses `pi/(2 r m)` on its geometric-mean circle and reduces to the
/// symmetric formula by scaling elsewhere, so the two closed forms are
/// genuinely distinct code paths that the tests compare.
pub fn poincare_density(q: &PoincareQuery) -> Result<f64> {
    let abs_z = (q.z.x * q.z.x + q.z.y * q.z.y).sqrt();
    match q.domain {
        PoincareDomain::SymmetricAnnulus { big_r } => {
            if !(big_r > 1.0) {
                return Err(Error::Domain(format!(
                    "symmetric annulus needs R > 1, got {big_r}"
                )));
            }
            if !(abs_z > 1.0 / big_r && abs_z < big_r) {
                return Err(Error::Domain(format!(
                    "point with |z| = {abs_z} outside {{1/R < |z| < R}}, R = {big_r}"
                )));
            }
            let lr = big_r.ln();
            Ok(PI / (2.0 * lr) / (abs_z * (PI * abs_z.ln() / (2.0 * lr)).cos()))
        }
        PoincareDomain::CenteredAnnulus { r, m } => {
            if !(r > 0.0 && m > 0.0) {
                return Err(Error::Domain(format!(
                    "centered annulus needs r, m > 0, got r={r}, m={m}"
                )));
            }
            if !(abs_z > r * (-m).exp() && abs_z < r * m.exp()) {
                return Err(Error::Domain(format!(
                    "point with |z| = {abs_z} outside {{r e^-m < |z| < r e^m}}"
                )));
            }
            if ((abs_z - r) / r).abs() <= 1e-12 {
                Ok(PI / (2.0 * r * m))
            } else {
                // rescale w = z/r onto the symmetric annulus R = e^m
                let inner = poincare_density(&PoincareQuery {
                    domain: PoincareDomain::SymmetricAnnulus { big_r: m.exp() },
                    z: Point {
                        x: abs_z / r,
                        y: 0.0,
                    },
                })?;
                Ok(inner / r)
            }
        }
        PoincareDomain::PuncturedDisk => {
            if !(abs_z > 0.0 && abs_z < 1.0) {
                return Err(Error::Domain(format!(
                    "punctured disk needs 0 < |z| < 1, got |z| = {abs_z}"
                )));
            }
            Ok(1.0 / (abs_z * (1.0 / abs_z).ln()))
        }
    }
}

/// Exact boundary distance for the supported domains.
pub fn boundary_distance(domain: &PoincareDomain, z: &Point) -> Result<f64> {
    let abs_z = (z.x * z.x + z.y * z.y).sqrt();
    let d = match domain {
        PoincareDomain::SymmetricAnnulus { big_r } => (abs_z - 1.0 / big_r).min(big_r - abs_z),
        PoincareDomain::CenteredAnnulus { r, m } => {
            (abs_z - r * (-m).exp()).min(r * m.exp() - abs_z)
        }
        PoincareDomain::PuncturedDisk => abs_z.min(1.0 - abs_z),
    };
    if !(d > 0.0) {
        return Err(Error::Domain(format!(
            "point on or outside the boundary (delta = {d})"
        )));
    }
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct BetaQuery<'a> {
    pub z: Point,
    pub boundary: &'a PlanarSetSample,
    /// relative tolerance for "a attains the boundary distance"
    pub nearest_tolerance: f64,
}

impl<'a> BetaQuery<'a> {
    pub fn new(z: Point, boundary: &'a PlanarSetSample) -> BetaQuery<'a> {
        BetaQuery {
            z,
            boundary,
            nearest_tolerance: 1e-9,
        }
    }
}

/// Beardon-Pommerenke quantity on a boundary sample: minimum of
/// `|log(|z-a| / |b-a|)|` over nearest points `a` (within the relative
/// tolerance of attaining the boundary distance) and all other sample
/// points `b`.
pub fn beta_omega(q: &BetaQuery) -> Result<f64> {
    let pts = &q.boundary.points;
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    let delta = pts
        .iter()
        .map(|p| q.z.dist(p))
        .fold(f64::INFINITY, f64::min);
    if !(delta > 0.0) {
        return Err(Error::Domain(
            "beta undefined on the boundary itself".into(),
        ));
    }
    let cutoff = delta * (1.0 + q.nearest_tolerance);
    let mut best = f64::INFINITY;
    let mut found_b = false;
    for a in pts.iter().filter(|p| q.z.dist(p) <= cutoff) {
        let da = q.z.dist(a);
        for b in pts {
            if b == a {
                continue;
            }
            let dba = a.dist(b);
            if dba == 0.0 {
                continue;
            }
            found_b = true;
            let v = (da / dba).ln().abs();
            if v < best {
                best = v;
            }
        }
    }
    if !found_b {
        return Err(Error::DegenerateBoundary);
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct BpRow {
    pub z: Point,
    pub rho: f64,
    pub delta: f64,
    pub beta: f64,
    /// BP estimate over exact density: `1 / (rho delta (beta + C))`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BpReport {
    pub c_probe: f64,
    pub rows: Vec<BpRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Two-sided comparability check of the Beardon-Pommerenke estimate on a
/// domain with exactly computable density: for each point the ratio of
/// the BP form `1/(delta (beta + C))` to the exact density is recorded;
/// comparability means the ratios stay inside a fixed positive band.
pub fn check_bp_estimate(
    z_seq: &[Point],
    domain: &PoincareDomain,
    boundary: &PlanarSetSample,
    c_probe: f64,
) -> Result<BpReport> {
    if !(c_probe > 0.0) {
        return Err(Error::Domain(format!(
            "C probe must be positive, got {c_probe}"
        )));
    }
    let mut rows = Vec::with_capacity(z_seq.len());
    for &z in z_seq {
        let rho = poincare_density(&PoincareQuery { domain: *domain, z })?;
        let delta = boundary_distance(domain, &z)?;
        let beta = beta_omega(&BetaQuery::new(z, boundary))?;
        let ratio = 1.0 / (rho * delta * (beta + c_probe));
        rows.push(BpRow {
            z,
            rho,
            delta,
            beta,
            ratio,
        });
    }
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BpReport {
        c_probe,
        rows,
        min_ratio,
        max_ratio,
    })
}
