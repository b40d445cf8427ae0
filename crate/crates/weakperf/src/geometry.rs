//! Planar primitives: points, closed discs, annuli, and finite set
//! representations with an explicit resolution guarantee.
//!
//! Uncountable sets enter the crate only as [`PlanarSetSample`]s: a finite
//! point cloud plus a bound `resolution` such that every true set point
//! lies within `resolution` of a sample point. All predicates inflate by
//! that bound and report whether the answer is margin-robust.

use crate::{fmt_f64, Error, Result};
use serde::Serialize;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Point> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("non-finite point ({x}, {y})")));
        }
        Ok(Point { x, y })
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Closed (or open) disc with positive radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
    pub closed: bool,
}

impl Disc {
    pub fn closed(center: Point, radius: f64) -> Result<Disc> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        Ok(Disc {
            center,
            radius,
            closed: true,
        })
    }

    #[inline]
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        let d = self.center.dist(p);
        if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        }
    }

    /// Disc-in-disc containment (closed reading).
    #[inline]
    pub fn contains_disc(&self, other: &Disc) -> bool {
        self.center.dist(&other.center) + other.radius <= self.radius
    }

    #[inline]
    pub fn intersects_disc(&self, other: &Disc) -> bool {
        self.center.dist(&other.center) <= self.radius + other.radius
    }
}

/// Annulus `inner <= |z - center| <= outer` with `0 <= inner < outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    pub center: Point,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(center: Point, inner: f64, outer: f64) -> Result<Annulus> {
        if !(inner >= 0.0 && outer > inner) || !outer.is_finite() {
            return Err(Error::Domain(format!(
                "annulus needs 0 <= inner < outer, got [{inner}, {outer}]"
            )));
        }
        Ok(Annulus {
            center,
            inner,
            outer,
        })
    }
}

/// Finite point cloud with a resolution guarantee: every point of the true
/// set lies within `resolution` of some sample point.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarSetSample {
    pub points: Vec<Point>,
    pub resolution: f64,
    pub diameter: f64,
    #[serde(skip)]
    grid: Option<GridIndex>,
}

/// Exhaustive scan below this size; uniform-grid index above. The index
/// must return bit-identical results to the scan.
const GRID_THRESHOLD: usize = 10_000;

impl PlanarSetSample {
    pub fn new(points: Vec<Point>, resolution: f64, diameter: f64) -> Result<PlanarSetSample> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(resolution > 0.0 && diameter > 0.0 && resolution < diameter) {
            return Err(Error::Domain(format!(
                "need 0 < resolution < diameter, got resolution {resolution}, diameter {diameter}"
            )));
        }
        let grid = if points.len() >= GRID_THRESHOLD {
            Some(GridIndex::build(&points))
        } else {
            None
        };
        Ok(PlanarSetSample {
            points,
            resolution,
            diameter,
            grid,
        })
    }

    /// Uniform sample of the segment [0, 1] on the real axis.
    pub fn segment(n: usize) -> Result<PlanarSetSample> {
        if n < 2 {
            return Err(Error::Domain("segment sample needs n >= 2".into()));
        }
        let h = 1.0 / (n as f64 - 1.0);
        let points = (0..n)
            .map(|i| Point {
                x: i as f64 * h,
                y: 0.0,
            })
            .collect();
        PlanarSetSample::new(points, h / 2.0, 1.0)
    }

    /// `{0}` union `n` equispaced unit-circle samples.
    pub fn circle_with_origin(n: usize) -> Result<PlanarSetSample> {
        let mut points = vec![Point { x: 0.0, y: 0.0 }];
        for k in 0..n {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            points.push(Point {
                x: th.cos(),
                y: th.sin(),
            });
        }
        let spacing = 2.0 * std::f64::consts::PI / n as f64;
        PlanarSetSample::new(points, spacing / 2.0, 2.0)
    }
}

/// Minimum Euclidean distance from `z` to the sample points. Exact for the
/// sample; within `resolution` of the true boundary distance.
pub fn dist_to_set(z: &Point, s: &PlanarSetSample) -> Result<f64> {
    if s.points.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(match &s.grid {
        Some(grid) => grid.min_dist(z, &s.points),
        None => scan_min_dist(z, &s.points),
    })
}

fn scan_min_dist(z: &Point, points: &[Point]) -> f64 {
    points
        .iter()
        .map(|p| z.dist(p))
        .fold(f64::INFINITY, f64::min)
}

/// Result of a resolution-inflated annulus membership test.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnnulusHit {
    pub hit: bool,
    /// True when the hit relied on the resolution inflation, i.e. no
    /// sample point lies in the uninflated annulus.
    pub inflated_only: bool,
    /// Log-scale slack of the best hit towards the annulus edges;
    /// negative when only the inflated annulus is hit.
    pub margin: f64,
    pub witness: Option<Point>,
}

/// Does the annulus meet the sampled set? The test inflates both edges by
/// the sample resolution, so a `false` is reliable for the true set while
/// a `true` may be an artifact of discretization (flagged).
pub fn annulus_hits_set(a: &Annulus, s: &PlanarSetSample) -> AnnulusHit {
    let lo = (a.inner - s.resolution).max(0.0);
    let hi = a.outer + s.resolution;
    let mut best: Option<(f64, Point)> = None;
    let mut inflated_only = true;
    for p in &s.points {
        let d = a.center.dist(p);
        if d < lo || d > hi {
            continue;
        }
        let in_core = d >= a.inner && d <= a.outer;
        if in_core {
            inflated_only = false;
        }
        // log-scale slack towards both edges; guard inner = 0
        let m_in = if a.inner > 0.0 {
            (d / a.inner).ln()
        } else {
            f64::INFINITY
        };
        let m_out = (a.outer / d.max(f64::MIN_POSITIVE)).ln();
        let m = m_in.min(m_out);
        if best.is_none_or(|(bm, _)| m > bm) {
            best = Some((m, *p));
        }
    }
    match best {
        Some((m, w)) => AnnulusHit {
            hit: true,
            inflated_only,
            margin: m,
            witness: Some(w),
        },
        None => AnnulusHit {
            hit: false,
            inflated_only: false,
            margin: f64::NEG_INFINITY,
            witness: None,
        },
    }
}

/// Uniform-grid spatial index over the bounding box of the points.
#[derive(Debug, Clone)]
struct GridIndex {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl GridIndex {
    fn build(points: &[Point]) -> GridIndex {
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
        let target = (points.len() as f64).sqrt().ceil() as usize;
        let n = target.clamp(1, 1024);
        let cell = span / n as f64;
        let nx = (((xmax - xmin) / cell).floor() as usize + 1).max(1);
        let ny = (((ymax - ymin) / cell).floor() as usize + 1).max(1);
        let mut cells = vec![Vec::new(); nx * ny];
        for (i, p) in points.iter().enumerate() {
            let cx = (((p.x - xmin) / cell).floor() as usize).min(nx - 1);
            let cy = (((p.y - ymin) / cell).floor() as usize).min(ny - 1);
            cells[cy * nx + cx].push(i as u32);
        }
        GridIndex {
            x0: xmin,
            y0: ymin,
            cell,
            nx,
            ny,
            cells,
        }
    }

    /// Expanding-ring search. Pruning only skips cells whose nearest
    /// possible distance strictly exceeds the current best, so the
    /// returned minimum is the same value the exhaustive scan produces.
    fn min_dist(&self, z: &Point, points: &[Point]) -> f64 {
        let cx = ((z.x - self.x0) / self.cell)
            .floor()
            .clamp(0.0, (self.nx - 1) as f64) as isize;
        let cy = ((z.y - self.y0) / self.cell)
            .floor()
            .clamp(0.0, (self.ny - 1) as f64) as isize;
        let mut best = f64::INFINITY;
        let max_ring = self.nx.max(self.ny) as isize;
        for ring in 0..=max_ring {
            // closest possible distance from z to any cell in this ring
            if ring > 1 {
                let ring_min = (ring - 1) as f64 * self.cell;
                if ring_min > best {
                    break;
                }
            }
            let mut visit = |ix: isize, iy: isize| {
                if ix < 0 || iy < 0 || ix >= self.nx as isize || iy >= self.ny as isize {
                    return;
                }
                for &i in &self.cells[iy as usize * self.nx + ix as usize] {
                    let d = z.dist(&points[i as usize]);
                    if d < best {
                        best = d;
                    }
                }
            };
            if ring == 0 {
                visit(cx, cy);
            } else {
                for dx in -ring..=ring {
                    visit(cx + dx, cy - ring);
                    visit(cx + dx, cy + ring);
                }
                for dy in (1 - ring)..ring {
                    visit(cx - ring, cy + dy);
                    visit(cx + ring, cy + dy);
                }
            }
        }
        best
    }
}

/// Writes the point-cloud format: header `# resolution <r> diameter <d>`,
/// then one `x y` pair per line.
pub fn write_point_cloud<W: Write>(w: &mut W, s: &PlanarSetSample) -> Result<()> {
    writeln!(
        w,
        "# resolution {} diameter {}",
        fmt_f64(s.resolution),
        fmt_f64(s.diameter)
    )?;
    for p in &s.points {
        writeln!(w, "{} {}", fmt_f64(p.x), fmt_f64(p.y))?;
    }
    Ok(())
}

pub fn read_point_cloud<R: BufRead>(r: R) -> Result<PlanarSetSample> {
    let mut resolution = None;
    let mut diameter = None;
    let mut points = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let mut i = 0;
            while i + 1 < toks.len() {
                match toks[i] {
                    "resolution" => {
                        resolution =
                            Some(toks[i + 1].parse::<f64>().map_err(|e| {
                                Error::Config(format!("bad resolution in header: {e}"))
                            })?)
                    }
                    "diameter" => {
                        diameter =
                            Some(toks[i + 1].parse::<f64>().map_err(|e| {
                                Error::Config(format!("bad diameter in header: {e}"))
                            })?)
                    }
                    _ => {}
                }
                i += 2;
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let x: f64 = it
            .next()
            .ok_or_else(|| Error::Config("missing x".into()))?
            .parse()
            .map_err(|e| Error::Config(format!("bad x: {e}")))?;
        let y: f64 = it
            .next()
            .ok_or_else(|| Error::Config("missing y".into()))?
            .parse()
            .map_err(|e| Error::Config(format!("bad y: {e}")))?;
        points.push(Point::new(x, y)?);
    }
    let resolution = resolution.ok_or_else(|| Error::Config("missing resolution header".into()))?;
    let diameter = diameter.ok_or_else(|| Error::Config("missing diameter header".into()))?;
    PlanarSetSample::new(points, resolution, diameter)
}
