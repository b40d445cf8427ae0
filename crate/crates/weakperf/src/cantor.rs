//! Cantor-type set constructions and the Bernoulli mass distribution.
//!
//! Two length profiles are built: `l_j = l_0^(alpha^j)` and the implicit
//! profile `l_j = l_{j-1} (log 1/l_j)^-beta`. Both shrink so fast that
//! doubles underflow around ten levels, so every scale is carried
//! primarily as `log(1/l_j)` and plain-double views are derived where
//! they exist. The same applies to the nested disc trees whose radii are
//! the gauge iterates `h~^k(r)`, and to the signed positions of interval
//! endpoints ([`LogReal`]).

use crate::extended::Dd;
use crate::gauges::GaugeFunction;
use crate::geometry::{Disc, PlanarSetSample, Point};
use crate::{fmt_f64, Error, Result};
use serde::Serialize;
use std::io::Write;

const LN_2: f64 = std::f64::consts::LN_2;

/// Signed real number stored as `sign * exp(ln_abs)`. Addition uses
/// log-sum-exp, so sums of terms separated by hundreds of orders of
/// magnitude stay exact at the leading scale instead of flushing to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogReal {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_ln(ln_abs: f64) -> LogReal {
        LogReal { sign: 1, ln_abs }
    }

    pub fn from_f64(x: f64) -> LogReal {
        if x == 0.0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            ..self
        }
    }

    pub fn abs(self) -> LogReal {
        LogReal {
            sign: self.sign.abs(),
            ..self
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn add(self, other: LogReal) -> LogReal {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        if self.sign == other.sign {
            let (hi, lo) = if self.ln_abs >= other.ln_abs {
                (self.ln_abs, other.ln_abs)
            } else {
                (other.ln_abs, self.ln_abs)
            };
            LogReal {
                sign: self.sign,
                ln_abs: hi + (lo - hi).exp().ln_1p(),
            }
        } else {
            if self.ln_abs == other.ln_abs {
                return LogReal::ZERO;
            }
            let (sign, hi, lo) = if self.ln_abs > other.ln_abs {
                (self.sign, self.ln_abs, other.ln_abs)
            } else {
                (other.sign, other.ln_abs, self.ln_abs)
            };
            LogReal {
                sign,
                ln_abs: hi + (-((lo - hi).exp())).ln_1p(),
            }
        }
    }

    pub fn sub(self, other: LogReal) -> LogReal {
        self.add(other.neg())
    }

    /// Total order consistent with the represented reals.
    pub fn cmp_value(self, other: LogReal) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self.sign, other.sign) {
            (0, 0) => Equal,
            (a, b) if a < b => Less,
            (a, b) if a > b => Greater,
            (1, 1) => self.ln_abs.partial_cmp(&other.ln_abs).unwrap_or(Equal),
            _ => other.ln_abs.partial_cmp(&self.ln_abs).unwrap_or(Equal),
        }
    }

    pub fn le(self, other: LogReal) -> bool {
        self.cmp_value(other) != std::cmp::Ordering::Greater
    }
}

/// Which length profile a Cantor set was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CantorFamily {
    U1 { l0: f64, alpha: f64 },
    U2 { l0: f64, beta: f64 },
}

/// `l_j = l_0^(alpha^j)`, plain doubles. Errors if a level underflows the
/// double range or breaks `l_{j+1} < l_j / 2`; deeper constructions go
/// through [`build_u1_ln_inv_lengths`].
pub fn build_u1_lengths(l0: f64, alpha: f64, depth: usize) -> Result<Vec<f64>> {
    build_u1_ln_inv_lengths(l0, alpha, depth)?; // validation
    let lam0 = Dd::from_f64(l0).ln().neg();
    let alpha_dd = Dd::from_f64(alpha);
    let mut pow = Dd::ONE;
    let mut out = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let lam = lam0.mul(pow);
        if lam.hi() > 690.0 {
            return Err(Error::Construction {
                level: j,
                msg: format!(
                    "length underflows double precision (log(1/l)={:.3}); use the log-space mode",
                    lam.hi()
                ),
            });
        }
        out.push(lam.neg().exp().to_f64());
        pow = pow.mul(alpha_dd);
    }
    Ok(out)
}

/// `log(1/l_j) = alpha^j log(1/l_0)`, valid at any depth `<= 60`.
pub fn build_u1_ln_inv_lengths(l0: f64, alpha: f64, depth: usize) -> Result<Vec<f64>> {
    if !(l0 > 0.0 && l0 < 1.0) {
        return Err(Error::Domain(format!("u1 needs l0 in (0,1), got {l0}")));
    }
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("u1 needs alpha > 1, got {alpha}")));
    }
    if depth > 60 {
        return Err(Error::Domain(format!(
            "depth {depth} exceeds the supported 60"
        )));
    }
    let lam0 = Dd::from_f64(l0).ln().neg();
    let alpha_dd = Dd::from_f64(alpha);
    let mut out = Vec::with_capacity(depth + 1);
    let mut pow = Dd::ONE;
    for j in 0..=depth {
        let lam = lam0.mul(pow).to_f64();
        if let Some(&prev) = out.last() {
            if lam < prev + LN_2 {
                return Err(Error::Construction {
                    level: j,
                    msg: format!(
                        "l_{j} >= l_{}/2 (log(1/l) step {:.6} < log 2)",
                        j - 1,
                        lam - prev
                    ),
                });
            }
        }
        out.push(lam);
        pow = pow.mul(alpha_dd);
    }
    Ok(out)
}

/// `l_j` solving `x = l_{j-1} (log 1/x)^-beta`, plain doubles.
pub fn build_u2_lengths(l0: f64, beta: f64, depth: usize) -> Result<Vec<f64>> {
    let lams = build_u2_ln_inv_lengths(l0, beta, depth)?;
    lams.iter()
        .enumerate()
        .map(|(j, &lam)| {
            if lam > 690.0 {
                Err(Error::Construction {
                    level: j,
                    msg: "length underflows double precision; use the log-space mode".into(),
                })
            } else {
                Ok((-lam).exp())
            }
        })
        .collect()
}

/// Log-space u2 solver. Writing `lam = log(1/x)`, the implicit equation
/// becomes the fixed point `lam = c + beta log lam` with `c = log(1/l_{j-1})`,
/// a contraction for `lam > beta`; iterate it, with bisection as fallback.
pub fn build_u2_ln_inv_lengths(l0: f64, beta: f64, depth: usize) -> Result<Vec<f64>> {
    if !(l0 > 0.0 && l0 < 1.0) {
        return Err(Error::Domain(format!("u2 needs l0 in (0,1), got {l0}")));
    }
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("u2 needs beta > 0, got {beta}")));
    }
    let lam0 = -l0.ln();
    if lam0 <= beta.max(std::f64::consts::E) {
        return Err(Error::Domain(format!(
            "l0 too large for the implicit u2 profile (log(1/l0) = {lam0:.3} <= max(beta, e))"
        )));
    }
    let mut out = vec![lam0];
    for j in 1..=depth {
        let c = out[j - 1];
        let lam = solve_u2_level(c, beta).ok_or_else(|| Error::Construction {
            level: j,
            msg: "fixed-point iteration and bisection both failed".into(),
        })?;
        if lam < c + LN_2 {
            return Err(Error::Construction {
                level: j,
                msg: format!(
                    "no solution below l_{}/2 (log(1/l) step {:.6} < log 2)",
                    j - 1,
                    lam - c
                ),
            });
        }
        out.push(lam);
    }
    Ok(out)
}

fn solve_u2_level(c: f64, beta: f64) -> Option<f64> {
    let mut lam = c + beta * c.ln();
    let mut converged = false;
    for _ in 0..200 {
        let next = c + beta * lam.ln();
        if (next - lam).abs() <= 1e-15 * lam.abs() {
            lam = next;
            converged = true;
            break;
        }
        lam = next;
    }
    if !converged || !(lam - c - beta * lam.ln()).abs().is_finite() {
        // bisection on f(lam) = lam - c - beta log lam over [c, c + beta log(2c) + 10]
        let f = |x: f64| x - c - beta * x.ln();
        let mut lo = c.max(beta + 1.0);
        let mut hi = c + beta * (2.0 * c).ln() + 10.0;
        if f(lo) > 0.0 || f(hi) < 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lam = 0.5 * (lo + hi);
    }
    // residual contract: relative 1e-14 in log space
    if (lam - c - beta * lam.ln()).abs() <= 1e-13 * lam.abs() {
        Some(lam)
    } else {
        None
    }
}

/// Level-indexed interval tree on the real axis. Level `j` holds `2^j`
/// closed intervals of length `l_j`; each contains the two level-(j+1)
/// intervals sharing its endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct CantorIntervalSet {
    pub family: CantorFamily,
    pub depth: usize,
    /// `log(1/l_j)` for j = 0..=depth, the primary representation.
    pub ln_inv_lengths: Vec<f64>,
    /// `l_j` where representable in doubles.
    pub lengths: Vec<Option<f64>>,
}

impl CantorIntervalSet {
    pub fn build_u1(l0: f64, alpha: f64, depth: usize) -> Result<CantorIntervalSet> {
        let lams = build_u1_ln_inv_lengths(l0, alpha, depth)?;
        Ok(Self::from_lams(CantorFamily::U1 { l0, alpha }, depth, lams))
    }

    pub fn build_u2(l0: f64, beta: f64, depth: usize) -> Result<CantorIntervalSet> {
        let lams = build_u2_ln_inv_lengths(l0, beta, depth)?;
        Ok(Self::from_lams(CantorFamily::U2 { l0, beta }, depth, lams))
    }

    fn from_lams(family: CantorFamily, depth: usize, lams: Vec<f64>) -> CantorIntervalSet {
        let lengths = lams
            .iter()
            .map(|&lam| {
                if lam <= 690.0 {
                    Some((-lam).exp())
                } else {
                    None
                }
            })
            .collect();
        CantorIntervalSet {
            family,
            depth,
            ln_inv_lengths: lams,
            lengths,
        }
    }

    pub fn length(&self, j: usize) -> Option<f64> {
        self.lengths.get(j).copied().flatten()
    }

    /// True when every level length is a normal double, so plain
    /// geometric views (intervals, samples) exist.
    pub fn is_f64_representable(&self) -> bool {
        self.lengths.iter().all(|l| l.is_some())
    }

    /// The `(left, length)` pairs of the 2^j level-j intervals, in
    /// left-to-right order. Requires a double-representable set.
    pub fn intervals_at(&self, j: usize) -> Result<Vec<(f64, f64)>> {
        if j > self.depth {
            return Err(Error::Domain(format!(
                "level {j} beyond depth {}",
                self.depth
            )));
        }
        if !self.is_f64_representable() {
            return Err(Error::Domain(
                "interval coordinates underflow doubles; use log-space accessors".into(),
            ));
        }
        let l: Vec<f64> = self.lengths.iter().map(|x| x.unwrap()).collect();
        let mut out = Vec::with_capacity(1 << j);
        for k in 0..(1usize << j) {
            let mut left = 0.0;
            for level in 1..=j {
                let bit = (k >> (j - level)) & 1;
                if bit == 1 {
                    left += l[level - 1] - l[level];
                }
            }
            out.push((left, l[j]));
        }
        Ok(out)
    }

    /// Point sample at the deepest level: the `2^depth` interval
    /// endpoints plus midpoints. The resolution is `l_depth / 4` floored
    /// at the position-rounding scale `8 eps l_0`: endpoint coordinates
    /// are sums of lengths, so structure below a few ulps of `l_0` is not
    /// representable and the declared resolution must say so.
    pub fn sample(&self) -> Result<PlanarSetSample> {
        let leaves = self.intervals_at(self.depth)?;
        let l_deep = self.length(self.depth).unwrap();
        let mut points = Vec::with_capacity(3 * leaves.len());
        for (left, len) in leaves {
            points.push(Point { x: left, y: 0.0 });
            points.push(Point {
                x: left + len / 2.0,
                y: 0.0,
            });
            points.push(Point {
                x: left + len,
                y: 0.0,
            });
        }
        let l0 = self.length(0).unwrap();
        let resolution = (l_deep / 4.0).max(8.0 * f64::EPSILON * l0);
        PlanarSetSample::new(points, resolution, l0)
    }

    /// Exact maximal empty annuli around the left endpoint: around scale
    /// `l_j` the set has no point at distance in `(l_{j+1}, l_j - l_{j+1})`.
    /// Returns `(ln r, ln s)` pairs with `r` the outer and `s` the inner
    /// radius, deepest level last.
    pub fn gap_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for j in 0..self.depth {
            let lam_j = self.ln_inv_lengths[j];
            let lam_next = self.ln_inv_lengths[j + 1];
            let ln_s = -lam_next;
            // ln(l_j - l_{j+1})
            let ln_r = -lam_j + (-((lam_j - lam_next).exp())).ln_1p();
            out.push((ln_r, ln_s));
        }
        out
    }

    /// `2^j * l_j^gamma`, the level-j cover value for the plain power
    /// gauge, computed in log space so deep levels do not underflow
    /// prematurely.
    pub fn content_upper_bound_levels(&self, gamma: f64, j: usize) -> Result<f64> {
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if j > self.depth {
            return Err(Error::Domain(format!(
                "level {j} beyond depth {}",
                self.depth
            )));
        }
        let lam = Dd::from_f64(self.ln_inv_lengths[j]);
        let exponent = Dd::from_f64(j as f64)
            .mul(Dd::from_f64(2.0).ln())
            .sub(lam.mul_f64(gamma));
        Ok(exponent.exp().to_f64())
    }

    /// Writes the lengths dump: `j l_j log_inv_l_j` per line.
    pub fn write_lengths<W: Write>(&self, w: &mut W) -> Result<()> {
        for j in 0..=self.depth {
            let l = self.length(j).unwrap_or(0.0);
            writeln!(
                w,
                "{} {} {}",
                j,
                fmt_f64(l),
                fmt_f64(self.ln_inv_lengths[j])
            )?;
        }
        Ok(())
    }
}

/// A node of a plain-double disc tree.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TreeNode {
    pub center: Point,
    pub radius: f64,
}

/// Nested disc tree from the half-radius annulus construction: each node
/// at depth k has radius `h~^k(r)` where `h~(r) = c~ h(r/2)`, one child
/// keeps the parent center and the other is centered at a set point found
/// in the annulus `h(s/2) <= |z - c| <= s/2`.
#[derive(Debug, Clone, Serialize)]
pub enum DiscTree {
    Sampled(SampledDiscTree),
    LogCantor(LogCantorTree),
}

#[derive(Debug, Clone, Serialize)]
pub struct SampledDiscTree {
    pub c_tilde: f64,
    pub h: GaugeFunction,
    pub root_scale: f64,
    pub depth: usize,
    /// `levels[k]` holds the 2^k nodes at depth k in path order (bit 0 =
    /// center-keeping child, bit 1 = witness child).
    pub levels: Vec<Vec<TreeNode>>,
    /// Witness points accepted per depth transition.
    pub witnesses: Vec<Vec<Point>>,
}

/// Analytic log-space tree over a [`CantorIntervalSet`]. All nodes at a
/// given depth share the same radius and the same witness offset, so the
/// geometry is carried by per-depth constants; centers are subset sums of
/// the offsets.
#[derive(Debug, Clone, Serialize)]
pub struct LogCantorTree {
    pub c_tilde: f64,
    /// coefficient C0 of the gauge h matching the set family
    pub c0: f64,
    pub family: CantorFamily,
    pub root_scale: f64,
    pub depth: usize,
    /// `log(1/s_k)` for k = 0..=depth, s_0 = r.
    pub ln_inv_scales: Vec<f64>,
    /// `ln(d_k)` for k = 0..depth: distance from a parent center at depth
    /// k to its witness child center.
    pub ln_witness_offsets: Vec<f64>,
    /// interval level backing each witness offset
    pub witness_levels: Vec<usize>,
}

impl DiscTree {
    pub fn depth(&self) -> usize {
        match self {
            DiscTree::Sampled(t) => t.depth,
            DiscTree::LogCantor(t) => t.depth,
        }
    }

    pub fn root_scale(&self) -> f64 {
        match self {
            DiscTree::Sampled(t) => t.root_scale,
            DiscTree::LogCantor(t) => t.root_scale,
        }
    }

    /// `log(1/rad)` at a given depth.
    pub fn ln_inv_radius(&self, k: usize) -> f64 {
        match self {
            DiscTree::Sampled(t) => -t.levels[k][0].radius.ln(),
            DiscTree::LogCantor(t) => t.ln_inv_scales[k],
        }
    }

    /// Deterministic fingerprint tying validation reports to a tree.
    pub fn fingerprint(&self) -> String {
        match self {
            DiscTree::Sampled(t) => format!(
                "sampled;depth={};r={};c~={};h={}",
                t.depth,
                fmt_f64(t.root_scale),
                fmt_f64(t.c_tilde),
                t.h.literal()
            ),
            DiscTree::LogCantor(t) => format!(
                "logcantor;depth={};r={};c~={};c0={};family={:?}",
                t.depth,
                fmt_f64(t.root_scale),
                fmt_f64(t.c_tilde),
                fmt_f64(t.c0),
                t.family
            ),
        }
    }
}

/// Builds a sampled disc tree by witness search. The witness in each
/// annulus is the sample point whose distance to the annulus center is
/// closest to the geometric mean of the annulus bounds (most interior
/// witness), ties broken by lexicographic point order.
pub fn build_disc_tree(
    s: &PlanarSetSample,
    a: Point,
    r: f64,
    h: &GaugeFunction,
    c_tilde: f64,
    depth: usize,
) -> Result<DiscTree> {
    if !(c_tilde > 0.0 && c_tilde < 0.5) {
        return Err(Error::Domain(format!(
            "c_tilde must lie in (0, 1/2), got {c_tilde}"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "root scale must be positive, got {r}"
        )));
    }
    if !s.points.iter().any(|p| p == &a) {
        return Err(Error::Domain("root center must be a sample point".into()));
    }
    let mut levels = vec![vec![TreeNode {
        center: a,
        radius: r,
    }]];
    let mut witnesses = Vec::new();
    let mut scale = r;
    for _k in 0..depth {
        let half = scale / 2.0;
        let inner = h.evaluate(half)?;
        if !(inner < half) {
            return Err(Error::Domain(format!(
                "gauge does not contract at scale {scale}: h({half}) = {inner}"
            )));
        }
        let child_radius = c_tilde * inner;
        let parents = levels.last().unwrap().clone();
        let mut next = Vec::with_capacity(parents.len() * 2);
        let mut level_witnesses = Vec::with_capacity(parents.len());
        for node in &parents {
            let b = find_witness(s, &node.center, inner, half)?;
            level_witnesses.push(b);
            next.push(TreeNode {
                center: node.center,
                radius: child_radius,
            });
            next.push(TreeNode {
                center: b,
                radius: child_radius,
            });
        }
        levels.push(next);
        witnesses.push(level_witnesses);
        scale = child_radius;
    }
    Ok(DiscTree::Sampled(SampledDiscTree {
        c_tilde,
        h: *h,
        root_scale: r,
        depth,
        levels,
        witnesses,
    }))
}

fn find_witness(s: &PlanarSetSample, center: &Point, inner: f64, outer: f64) -> Result<Point> {
    let target = (inner * outer).sqrt();
    let mut best: Option<(f64, Point)> = None;
    for p in &s.points {
        let d = center.dist(p);
        if d < inner || d > outer {
            continue;
        }
        let score = (d - target).abs();
        let better = match best {
            None => true,
            Some((bs, bp)) => score < bs || (score == bs && (p.x, p.y) < (bp.x, bp.y)),
        };
        if better {
            best = Some((score, *p));
        }
    }
    best.map(|(_, p)| p).ok_or(Error::EmptyWitnessAnnulus {
        cx: center.x,
        cy: center.y,
        inner,
        outer,
    })
}

/// Builds the analytic log-space tree over a Cantor interval set. The
/// root sits at the left endpoint 0; at each depth the witness is the
/// left endpoint of the right child of the deepest interval level whose
/// length fits under half the current scale.
pub fn build_log_cantor_tree(
    set: &CantorIntervalSet,
    c0: f64,
    r: f64,
    c_tilde: f64,
    depth: usize,
) -> Result<DiscTree> {
    if !(c_tilde > 0.0 && c_tilde < 0.5) {
        return Err(Error::Domain(format!(
            "c_tilde must lie in (0, 1/2), got {c_tilde}"
        )));
    }
    if !(c0 > 0.0) {
        return Err(Error::Domain(format!(
            "gauge coefficient must be positive, got {c0}"
        )));
    }
    if !(r > 0.0 && r <= set.length(0).map_or(f64::INFINITY, |l| l)) {
        return Err(Error::Domain(format!(
            "root scale {r} must be positive and at most l_0"
        )));
    }
    let lams = &set.ln_inv_lengths;
    let mut ln_inv_scales = vec![-r.ln()];
    let mut ln_witness_offsets = Vec::with_capacity(depth);
    let mut witness_levels = Vec::with_capacity(depth);
    let mut prev_level: Option<usize> = None;
    for k in 0..depth {
        let lam_s = ln_inv_scales[k];
        // log(1/(s/2)) and log of the annulus inner radius h(s/2)
        let lam_half = lam_s + LN_2;
        let lam_inner = match set.family {
            CantorFamily::U1 { alpha, .. } => alpha * lam_half - c0.ln(),
            CantorFamily::U2 { beta, .. } => lam_half + beta * lam_half.ln() - c0.ln(),
        };
        // witness level: smallest j with l_j <= s/2 and j+1 <= depth of the set
        let j = lams
            .iter()
            .position(|&lam| lam >= lam_half)
            .ok_or_else(|| Error::Construction {
                level: k,
                msg: format!("no interval level at or below scale s_k/2 (log(1/s_k) = {lam_s:.3})"),
            })?;
        if j + 1 > set.depth {
            return Err(Error::Construction {
                level: k,
                msg: format!(
                    "tree depth {depth} needs interval levels beyond set depth {}",
                    set.depth
                ),
            });
        }
        if let Some(p) = prev_level {
            if j <= p {
                return Err(Error::Construction {
                    level: k,
                    msg: format!("witness levels must strictly deepen ({j} after {p})"),
                });
            }
        }
        // d_j = l_j - l_{j+1} in log space
        let ln_d = -lams[j] + (-((lams[j] - lams[j + 1]).exp())).ln_1p();
        // annulus membership h(s/2) <= d_j <= s/2
        if ln_d < -lam_inner {
            return Err(Error::EmptyWitnessAnnulus {
                cx: 0.0,
                cy: 0.0,
                inner: (-lam_inner).exp(),
                outer: (-lam_half).exp(),
            });
        }
        if ln_d > -lam_half {
            return Err(Error::Construction {
                level: k,
                msg: "witness offset exceeds half the scale".into(),
            });
        }
        ln_witness_offsets.push(ln_d);
        witness_levels.push(j);
        prev_level = Some(j);
        // s_{k+1} = c_tilde * h(s_k/2)
        ln_inv_scales.push(lam_inner - c_tilde.ln());
    }
    Ok(DiscTree::LogCantor(LogCantorTree {
        c_tilde,
        c0,
        family: set.family,
        root_scale: r,
        depth,
        ln_inv_scales,
        ln_witness_offsets,
        witness_levels,
    }))
}

impl LogCantorTree {
    /// 1-D center coordinate of the node reached by `path` (one bit per
    /// depth, bit 1 = witness child).
    pub fn center(&self, path: &[u8]) -> LogReal {
        let mut c = LogReal::ZERO;
        for (k, &bit) in path.iter().enumerate() {
            if bit == 1 {
                c = c.add(LogReal::from_ln(self.ln_witness_offsets[k]));
            }
        }
        c
    }

    /// Signed distance between two leaf centers given as bit paths.
    pub fn center_distance(&self, p: &[u8], q: &[u8]) -> LogReal {
        let mut d = LogReal::ZERO;
        for k in 0..p.len().max(q.len()) {
            let pb = p.get(k).copied().unwrap_or(0) as i8;
            let qb = q.get(k).copied().unwrap_or(0) as i8;
            let diff = pb - qb;
            if diff != 0 {
                let term = LogReal {
                    sign: diff,
                    ln_abs: self.ln_witness_offsets[k],
                };
                d = d.add(term);
            }
        }
        d.abs()
    }
}

/// The Bernoulli mass distribution over a disc tree: each node at depth k
/// carries mass `2^-k`.
#[derive(Debug, Clone, Copy)]
pub struct MassDistribution<'a> {
    pub tree: &'a DiscTree,
}

/// A disc query against a log-space tree: the center is anchored at a
/// leaf and shifted along the axis, the radius lives in log space.
#[derive(Debug, Clone)]
pub struct LogDiscQuery {
    pub anchor_path: Vec<u8>,
    /// signed axial offset from the anchor center
    pub offset: LogReal,
    /// ln(1/rho)
    pub ln_inv_radius: f64,
}

impl<'a> MassDistribution<'a> {
    pub fn new(tree: &'a DiscTree) -> MassDistribution<'a> {
        MassDistribution { tree }
    }

    pub fn node_mass(&self, depth: usize) -> f64 {
        (2f64).powi(-(depth as i32))
    }

    /// Certified bounds on the limit-set mass inside disc `A`: `lo` sums
    /// the deepest-level nodes entirely inside, `hi` those intersecting.
    pub fn mass_of_disc(&self, a: &Disc) -> Result<(f64, f64)> {
        match self.tree {
            DiscTree::Sampled(t) => {
                let leaves = t.levels.last().unwrap();
                let mass = self.node_mass(t.depth);
                let mut lo = 0.0;
                let mut hi = 0.0;
                for leaf in leaves {
                    let d = a.center.dist(&leaf.center);
                    if d + leaf.radius <= a.radius {
                        lo += mass;
                    }
                    if d <= a.radius + leaf.radius {
                        hi += mass;
                    }
                }
                Ok((lo, hi))
            }
            DiscTree::LogCantor(t) => {
                // express the f64 disc as a log query anchored at the
                // root; the tree lives on the real axis, so the query
                // reduces to the axial distance
                if a.center.y.abs() > a.radius {
                    return Ok((0.0, 0.0));
                }
                let q = LogDiscQuery {
                    anchor_path: vec![0; t.depth],
                    offset: LogReal::from_f64(a.center.x),
                    ln_inv_radius: -a.radius.ln(),
                };
                let (lo, hi) = self.mass_of_disc_log(&q)?;
                // off-axis centers shrink true containment: the axial
                // reduction stays certified only for the hi side there
                if a.center.y == 0.0 {
                    Ok((lo, hi))
                } else {
                    Ok((0.0, hi))
                }
            }
        }
    }

    /// Log-space version of [`Self::mass_of_disc`] for deep trees.
    pub fn mass_of_disc_log(&self, q: &LogDiscQuery) -> Result<(f64, f64)> {
        let DiscTree::LogCantor(t) = self.tree else {
            return Err(Error::Domain(
                "log disc queries need a log-space tree".into(),
            ));
        };
        let mass = self.node_mass(t.depth);
        let rho = LogReal::from_ln(-q.ln_inv_radius);
        let rad_leaf = LogReal::from_ln(-t.ln_inv_scales[t.depth]);
        let touch = rho.add(rad_leaf);
        let mut lo = 0.0;
        let mut hi = 0.0;
        let mut path = vec![0u8; t.depth];
        loop {
            // signed leaf-center position relative to the anchor center,
            // then shift by the query offset
            let mut signed = LogReal::ZERO;
            for ((&pb, &qb), &ln_off) in path.iter().zip(&q.anchor_path).zip(&t.ln_witness_offsets)
            {
                if pb != qb {
                    signed = signed.add(LogReal {
                        sign: pb as i8 - qb as i8,
                        ln_abs: ln_off,
                    });
                }
            }
            let dist = signed.sub(q.offset).abs();
            if dist.le(touch) {
                hi += mass;
            }
            if dist.add(rad_leaf).le(rho) {
                lo += mass;
            }
            // next path in binary order
            let mut i = t.depth;
            loop {
                if i == 0 {
                    return Ok((lo, hi));
                }
                i -= 1;
                if path[i] == 0 {
                    path[i] = 1;
                    for b in path.iter_mut().skip(i + 1) {
                        *b = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl SampledDiscTree {
    /// Writes the tree dump: `depth index center_x center_y radius mass`.
    pub fn write_dump<W: Write>(&self, w: &mut W) -> Result<()> {
        for (k, level) in self.levels.iter().enumerate() {
            let mass = (2f64).powi(-(k as i32));
            for (i, node) in level.iter().enumerate() {
                writeln!(
                    w,
                    "{} {} {} {} {} {}",
                    k,
                    i,
                    fmt_f64(node.center.x),
                    fmt_f64(node.center.y),
                    fmt_f64(node.radius),
                    fmt_f64(mass)
                )?;
            }
        }
        Ok(())
    }
}
