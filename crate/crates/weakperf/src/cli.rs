//! Command runners behind the `weakperf` binary: set generation,
//! perfectness testing, kernel/density/harmonic profiles, content
//! estimates, and the theorem verification harness. Every command emits
//! CSV data rows and a JSON-shaped summary; outputs are deterministic for
//! a fixed config and seed.

use crate::cantor::{
    build_disc_tree, build_log_cantor_tree, CantorIntervalSet, DiscTree, MassDistribution,
};
use crate::config::{RawConfig, SectionReader};
use crate::content::{
    content_upper, converse_content_probe, forward_content_certificate,
    validate_disc_mass_inequality, ContentFamily,
};
use crate::extended::Dd;
use crate::gauges::{parse_gauge, GaugeFunction};
use crate::geometry::{read_point_cloud, write_point_cloud, PlanarSetSample, Point};
use crate::harmonic::{
    annulus_comparison_phi, chen_upper_bound, lhmd1_bound, lhmd2_bound, loglog_ratio_shift_in,
    CapacityProfile, HarmonicBoundReport,
};
use crate::kernels::{
    bergman_annulus, bergman_transport, bergman_upper_bound, check_bp_estimate,
    poincare_density, AnnulusKernelQuery, PoincareDomain, PoincareQuery,
};
use crate::perfectness::{
    fit_condition_parameters, test_h_perfectness, test_h_perfectness_cantor, ConditionFamily,
    ProbeSpec, SetRepr,
};
use crate::report::Report;
use crate::{fmt_f64, Error, PrecisionMode, Result};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

/// A set specification: `u1:l0=0.1,alpha=2,depth=6`,
/// `u2:l0=4.5e-5,beta=3,depth=8`, `segment:n=200`, `circle:n=256`, or
/// `file:<path>` for a point-cloud file.
pub enum BuiltSet {
    Cantor(CantorIntervalSet),
    Sample(PlanarSetSample),
}

impl BuiltSet {
    pub fn as_repr(&self) -> SetRepr<'_> {
        match self {
            BuiltSet::Cantor(c) => SetRepr::Cantor(c),
            BuiltSet::Sample(s) => SetRepr::Sample(s),
        }
    }

    pub fn to_sample(&self) -> Result<PlanarSetSample> {
        match self {
            BuiltSet::Cantor(c) => c.sample(),
            BuiltSet::Sample(s) => Ok(s.clone()),
        }
    }
}

pub fn parse_set_spec(spec: &str) -> Result<BuiltSet> {
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("set spec `{spec}` missing `:`")))?;
    if head == "file" {
        let file = std::fs::File::open(rest)?;
        return Ok(BuiltSet::Sample(read_point_cloud(
            std::io::BufReader::new(file),
        )?));
    }
    let mut kv = BTreeMap::new();
    for part in rest.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("set spec field `{part}` missing `=`")))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get_f64 = |kv: &BTreeMap<String, String>, k: &str| -> Result<f64> {
        kv.get(k)
            .ok_or_else(|| Error::Config(format!("set spec `{spec}` missing `{k}`")))?
            .parse()
            .map_err(|e| Error::Config(format!("set spec `{k}`: {e}")))
    };
    let get_usize = |kv: &BTreeMap<String, String>, k: &str| -> Result<usize> {
        kv.get(k)
            .ok_or_else(|| Error::Config(format!("set spec `{spec}` missing `{k}`")))?
            .parse()
            .map_err(|e| Error::Config(format!("set spec `{k}`: {e}")))
    };
    // construction failures here are parse-stage config rejections
    let as_config = |e: Error| match e {
        Error::Config(_) => e,
        other => Error::Config(format!("invalid set spec `{spec}`: {other}")),
    };
    match head {
        "u1" => Ok(BuiltSet::Cantor(
            CantorIntervalSet::build_u1(
                get_f64(&kv, "l0")?,
                get_f64(&kv, "alpha")?,
                get_usize(&kv, "depth")?,
            )
            .map_err(as_config)?,
        )),
        "u2" => Ok(BuiltSet::Cantor(
            CantorIntervalSet::build_u2(
                get_f64(&kv, "l0")?,
                get_f64(&kv, "beta")?,
                get_usize(&kv, "depth")?,
            )
            .map_err(as_config)?,
        )),
        "segment" => Ok(BuiltSet::Sample(
            PlanarSetSample::segment(get_usize(&kv, "n")?).map_err(as_config)?,
        )),
        "circle" => Ok(BuiltSet::Sample(
            PlanarSetSample::circle_with_origin(get_usize(&kv, "n")?).map_err(as_config)?,
        )),
        other => Err(Error::Config(format!("unknown set kind `{other}`"))),
    }
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// `generate`: builds a Cantor set, writes the point cloud, interval
/// lengths, and (for representable sets) a sampled disc-tree dump.
pub struct GenerateArgs {
    pub set: String,
    pub tree_depth: usize,
    pub c0: f64,
    pub c_tilde: f64,
    pub root_scale: Option<f64>,
    pub out_prefix: String,
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let set = parse_set_spec(&args.set)?;
    let BuiltSet::Cantor(cantor) = &set else {
        return Err(Error::Config("generate needs a u1 or u2 set spec".into()));
    };
    let prefix = &args.out_prefix;
    let mut lw = create(Path::new(&format!("{prefix}.lengths")))?;
    cantor.write_lengths(&mut lw)?;
    writeln!(out, "wrote {prefix}.lengths ({} levels)", cantor.depth + 1)?;

    if cantor.is_f64_representable() {
        let sample = cantor.sample()?;
        let mut pw = create(Path::new(&format!("{prefix}.points")))?;
        write_point_cloud(&mut pw, &sample)?;
        writeln!(
            out,
            "wrote {prefix}.points ({} points)",
            sample.points.len()
        )?;

        if args.tree_depth > 0 {
            let r = args.root_scale.unwrap_or(cantor.length(0).unwrap() / 2.0);
            let h = match cantor.family {
                crate::cantor::CantorFamily::U1 { alpha, .. } => {
                    GaugeFunction::power(alpha, args.c0)?
                }
                crate::cantor::CantorFamily::U2 { beta, .. } => {
                    GaugeFunction::log_power(beta, args.c0)?
                }
            };
            let tree = build_disc_tree(
                &sample,
                Point { x: 0.0, y: 0.0 },
                r,
                &h,
                args.c_tilde,
                args.tree_depth,
            )?;
            let DiscTree::Sampled(t) = &tree else {
                unreachable!()
            };
            let mut tw = create(Path::new(&format!("{prefix}.tree")))?;
            t.write_dump(&mut tw)?;
            let n_nodes: usize = t.levels.iter().map(|l| l.len()).sum();
            writeln!(out, "wrote {prefix}.tree ({n_nodes} nodes)")?;
        }
    } else {
        writeln!(
            out,
            "set is log-space only (lengths below the double range); skipped points/tree dumps"
        )?;
    }
    Ok(())
}

/// `test-perfectness`: fits parameters when none are given, runs the
/// probe grid, writes the certificate JSON.
pub struct TestPerfectnessArgs {
    pub set: String,
    pub gauge: Option<String>,
    pub family: Option<String>,
    pub r0: Option<f64>,
    pub out_json: Option<String>,
}

pub fn cmd_test_perfectness(args: &TestPerfectnessArgs, out: &mut dyn Write) -> Result<i32> {
    let set = parse_set_spec(&args.set)?;
    let default_r0 = match &set {
        BuiltSet::Cantor(c) => (-c.ln_inv_lengths[0]).exp() / 2.0,
        BuiltSet::Sample(s) => s.diameter / 4.0,
    };
    let (gauge, r0) = match (&args.gauge, &args.family) {
        (Some(lit), _) => (parse_gauge(lit)?, args.r0.unwrap_or(default_r0)),
        (None, Some(fam)) => {
            let family = match fam.as_str() {
                "u1" => ConditionFamily::U1,
                "u2" => ConditionFamily::U2,
                other => return Err(Error::Config(format!("unknown family `{other}`"))),
            };
            let fit = fit_condition_parameters(set.as_repr(), family)?;
            writeln!(
                out,
                "fitted: exponent={} C={} r0={} vacuous={}",
                fmt_f64(fit.exponent),
                fmt_f64(fit.c),
                fmt_f64(fit.r0),
                fit.vacuous
            )?;
            (fit.gauge(family)?, args.r0.unwrap_or(fit.r0))
        }
        (None, None) => {
            return Err(Error::Config("need either --gauge or --family".into()));
        }
    };
    // interval sets get the exact log-space tester (valid at any depth);
    // point clouds get the resolution-inflated probe grid
    let cert = match &set {
        BuiltSet::Cantor(c) => test_h_perfectness_cantor(c, &gauge, r0, 0.5)?,
        BuiltSet::Sample(s) => test_h_perfectness(s, &gauge, r0, &ProbeSpec::default())?,
    };
    if let Some(path) = &args.out_json {
        let mut w = create(Path::new(path))?;
        writeln!(
            w,
            "{}",
            serde_json::to_string_pretty(&cert).expect("serialize")
        )?;
    }
    writeln!(
        out,
        "{} gauge={} probes={} worst_margin={} resolution_caveat={}",
        if cert.verdict { "PASS" } else { "FAIL" },
        cert.gauge_literal,
        cert.probes.len(),
        fmt_f64(cert.worst_margin),
        cert.resolution_caveat
    )?;
    Ok(if cert.verdict {
        0
    } else {
        crate::report::EXIT_CHECK_FAILURE
    })
}

/// `kernel-profile`: CSV rows
/// `r,t,abs_z,series_value,tail_bound,upper_bound_21,margin`.
pub fn cmd_kernel_profile(
    r_grid: &[f64],
    t_grid: &[f64],
    tol: f64,
    w: &mut dyn Write,
) -> Result<()> {
    writeln!(w, "r,t,abs_z,series_value,tail_bound,upper_bound_21,margin")?;
    for &r in r_grid {
        for &t in t_grid {
            let abs_z = r.powf(t);
            let q = AnnulusKernelQuery::new(r, Point { x: abs_z, y: 0.0 })?;
            let (value, tail) = bergman_annulus(&q, tol)?;
            let bound = bergman_upper_bound(r, t)?;
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_f64(r),
                fmt_f64(t),
                fmt_f64(abs_z),
                fmt_f64(value),
                fmt_f64(tail),
                fmt_f64(bound),
                fmt_f64(bound - value)
            )?;
        }
    }
    Ok(())
}

/// `poincare-profile`: CSV rows `domain,abs_z,density`.
pub fn cmd_poincare_profile(domain_spec: &str, n_points: usize, w: &mut dyn Write) -> Result<()> {
    let domain = parse_domain_spec(domain_spec)?;
    let (lo, hi) = match domain {
        PoincareDomain::SymmetricAnnulus { big_r } => (1.0 / big_r, big_r),
        PoincareDomain::CenteredAnnulus { r, m } => (r * (-m).exp(), r * m.exp()),
        PoincareDomain::PuncturedDisk => (0.0, 1.0),
    };
    writeln!(w, "domain,abs_z,density")?;
    for i in 1..=n_points {
        let fr = i as f64 / (n_points as f64 + 1.0);
        let abs_z = lo + (hi - lo) * fr;
        let rho = poincare_density(&PoincareQuery {
            domain,
            z: Point { x: abs_z, y: 0.0 },
        })?;
        writeln!(w, "{},{},{}", domain_spec, fmt_f64(abs_z), fmt_f64(rho))?;
    }
    Ok(())
}

pub fn parse_domain_spec(spec: &str) -> Result<PoincareDomain> {
    if spec == "punct" {
        return Ok(PoincareDomain::PuncturedDisk);
    }
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("domain spec `{spec}` missing `:`")))?;
    let mut kv = BTreeMap::new();
    for part in rest.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("domain field `{part}` missing `=`")))?;
        let x: f64 = v
            .parse()
            .map_err(|e| Error::Config(format!("domain field `{part}`: {e}")))?;
        kv.insert(k.trim().to_string(), x);
    }
    match head {
        "sym" => Ok(PoincareDomain::SymmetricAnnulus {
            big_r: *kv
                .get("R")
                .ok_or_else(|| Error::Config("sym domain needs R".into()))?,
        }),
        "cen" => Ok(PoincareDomain::CenteredAnnulus {
            r: *kv
                .get("r")
                .ok_or_else(|| Error::Config("cen domain needs r".into()))?,
            m: *kv
                .get("m")
                .ok_or_else(|| Error::Config("cen domain needs m".into()))?,
        }),
        other => Err(Error::Config(format!("unknown domain kind `{other}`"))),
    }
}

/// `harmonic-bound`: CSV rows `method,a_x,a_y,r,z_dist,bound,params`.
pub struct HarmonicBoundArgs {
    pub method: String,
    pub r: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub c: f64,
    pub c_kappa: f64,
    pub gamma: f64,
    pub eta: f64,
    pub c3: f64,
    pub points: usize,
}

pub fn cmd_harmonic_bound(args: &HarmonicBoundArgs, w: &mut dyn Write) -> Result<()> {
    let a = Point { x: 0.0, y: 0.0 };
    let r = args.r;
    let mut rows: Vec<HarmonicBoundReport> = Vec::new();
    match args.method.as_str() {
        "phi" => {
            let inner = r / 100.0;
            for i in 1..=args.points {
                let s = inner + (r - inner) * i as f64 / (args.points as f64 + 1.0);
                let v = annulus_comparison_phi(inner, r, s)?;
                rows.push(HarmonicBoundReport {
                    a,
                    r,
                    z_dist: s,
                    method: "phi".into(),
                    bound_value: v,
                    params: vec![("inner".into(), inner)],
                    clamped: false,
                });
            }
        }
        "chen" => {
            let cap = CapacityProfile::power_law(args.c, args.alpha, 1.0)?;
            let upper = args.kappa * r / 2.0;
            for i in 1..=args.points {
                let z = upper * (10f64).powi(-(i as i32));
                let v = chen_upper_bound(z, r, args.kappa, &cap, args.c_kappa)?;
                rows.push(HarmonicBoundReport {
                    a,
                    r,
                    z_dist: z,
                    method: "chen".into(),
                    bound_value: v,
                    params: vec![
                        ("kappa".into(), args.kappa),
                        ("alpha".into(), args.alpha),
                        ("C".into(), args.c),
                        ("C_kappa".into(), args.c_kappa),
                    ],
                    clamped: v >= 1.0,
                });
            }
        }
        "lhmd1" => {
            for i in 1..=args.points {
                let z = r * (10f64).powi(-(i as i32));
                let v = lhmd1_bound(z, r, args.gamma, args.c3)?;
                rows.push(HarmonicBoundReport {
                    a,
                    r,
                    z_dist: z,
                    method: "lhmd1".into(),
                    bound_value: v,
                    params: vec![("gamma".into(), args.gamma), ("C3".into(), args.c3)],
                    clamped: v >= 1.0,
                });
            }
        }
        "lhmd2" => {
            for i in 1..=args.points {
                let z = r * (10f64).powi(-(i as i32));
                let v = lhmd2_bound(z, r, args.eta, args.c3)?;
                rows.push(HarmonicBoundReport {
                    a,
                    r,
                    z_dist: z,
                    method: "lhmd2".into(),
                    bound_value: v,
                    params: vec![("eta".into(), args.eta), ("C3".into(), args.c3)],
                    clamped: v >= 1.0,
                });
            }
        }
        other => return Err(Error::Config(format!("unknown harmonic method `{other}`"))),
    }
    writeln!(w, "method,a_x,a_y,r,z_dist,bound,params,clamped")?;
    let clamp_count = rows.iter().filter(|x| x.clamped).count();
    for row in &rows {
        let params = row
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_f64(*v)))
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            row.method,
            fmt_f64(row.a.x),
            fmt_f64(row.a.y),
            fmt_f64(row.r),
            fmt_f64(row.z_dist),
            fmt_f64(row.bound_value),
            params,
            row.clamped
        )?;
    }
    writeln!(w, "# clamped rows: {clamp_count}")?;
    Ok(())
}

/// `content`: CSV rows `quantity,value,witness`.
pub struct ContentArgs {
    pub gauge: String,
    pub set: String,
    pub tree_depth: usize,
    pub trials: u64,
    pub seed: u64,
    pub factor: f64,
}

pub fn cmd_content(args: &ContentArgs, w: &mut dyn Write) -> Result<()> {
    let gauge = parse_gauge(&args.gauge)?;
    let set = parse_set_spec(&args.set)?;
    writeln!(w, "quantity,value,witness")?;

    let (upper, cover) = content_upper(set.as_repr(), &gauge, 1 << 20)?;
    let witness = match &cover.witness {
        crate::content::CoverWitness::Discs(d) => format!("{} discs", d.len()),
        crate::content::CoverWitness::TreeLevel { level, count, .. } => {
            format!("level {level} cover ({count} discs)")
        }
        crate::content::CoverWitness::DegeneratePoint => "degenerate point (infimum)".to_string(),
    };
    writeln!(w, "content_upper,{},{}", fmt_f64(upper), witness)?;

    if let BuiltSet::Cantor(cantor) = &set {
        let r = (-cantor.ln_inv_lengths[0]).exp() / 2.0;
        let c0 = match cantor.family {
            crate::cantor::CantorFamily::U1 { .. } => 0.5,
            crate::cantor::CantorFamily::U2 { .. } => 0.25,
        };
        let tree = build_log_cantor_tree(cantor, c0, r, 0.4, args.tree_depth)?;
        let m = MassDistribution::new(&tree);
        let validation =
            validate_disc_mass_inequality(&m, &gauge, args.factor, args.trials, args.seed)?;
        writeln!(
            w,
            "validation_worst_ratio,{},{} trials seed {}",
            fmt_f64(validation.worst_ratio),
            validation.trials,
            validation.seed
        )?;
        writeln!(
            w,
            "smallest_passing_factor,{},packing factor {}",
            fmt_f64(validation.smallest_passing_factor),
            fmt_f64(args.factor)
        )?;
        if validation.passed {
            let lb = crate::content::mass_lower_bound(&m, &gauge, args.factor, &validation)?;
            writeln!(
                w,
                "mass_lower_bound,{},{}",
                fmt_f64(lb),
                validation.tree_fingerprint
            )?;
        } else {
            writeln!(
                w,
                "mass_lower_bound,nan,validation failed: {}",
                validation
                    .first_violation
                    .clone()
                    .unwrap_or_default()
                    .replace(',', ";")
            )?;
        }
    }
    Ok(())
}

/// Configuration for the `verify-theorems` harness.
pub struct VerifyArgs {
    pub checks: Vec<String>,
    pub trials: u64,
    pub seed: u64,
    pub negative_control: bool,
    pub out_json: Option<String>,
    pub out_csv: Option<String>,
}

impl VerifyArgs {
    pub fn from_config(cfg: &RawConfig) -> Result<VerifyArgs> {
        let mut rd = SectionReader::new(cfg, "verify-theorems");
        let checks = match rd.get_str("checks") {
            None => vec!["kernel", "poincare", "harmonic", "content", "perfectness"]
                .into_iter()
                .map(String::from)
                .collect(),
            Some(s) if s.trim().is_empty() => Vec::new(),
            Some(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
        };
        for c in &checks {
            if !["kernel", "poincare", "harmonic", "content", "perfectness"].contains(&c.as_str()) {
                return Err(Error::Config(format!("unknown check group `{c}`")));
            }
        }
        let trials = rd.get_u64("trials", (1, 1_000_000))?.unwrap_or(1000);
        let seed = rd.get_u64("seed", (0, u64::MAX))?.unwrap_or(0xC0FFEE);
        let negative_control = rd.get_bool("negative_control")?.unwrap_or(true);
        let out_json = rd.get_str("out_json");
        let out_csv = rd.get_str("out_csv");
        rd.finish()?;
        Ok(VerifyArgs {
            checks,
            trials,
            seed,
            negative_control,
            out_json,
            out_csv,
        })
    }
}

/// Runs the whole verification harness and assembles the report; the
/// caller decides what to do with the exit code.
pub fn cmd_verify_theorems(args: &VerifyArgs, out: &mut dyn Write) -> Result<Report> {
    let start = std::time::Instant::now();
    let mode = PrecisionMode::from_env();
    let mut echo = BTreeMap::new();
    echo.insert("checks".into(), args.checks.join(","));
    echo.insert("trials".into(), args.trials.to_string());
    echo.insert("seed".into(), args.seed.to_string());
    echo.insert("negative_control".into(), args.negative_control.to_string());
    let mut report = Report::new("verify-theorems", mode.label(), echo);

    for group in &args.checks {
        match group.as_str() {
            "kernel" => verify_kernel(&mut report)?,
            "poincare" => verify_poincare(&mut report)?,
            "harmonic" => verify_harmonic(&mut report, mode)?,
            "content" => verify_content(&mut report, args)?,
            "perfectness" => verify_perfectness(&mut report)?,
            _ => unreachable!("validated in from_config"),
        }
    }
    report.finalize(start.elapsed().as_millis() as u64);

    if let Some(path) = &args.out_json {
        let mut w = create(Path::new(path))?;
        report.write_json(&mut w)?;
    }
    if let Some(path) = &args.out_csv {
        let mut w = create(Path::new(path))?;
        report.write_csv(&mut w)?;
    }
    report.print_summary(out)?;
    Ok(report)
}

const R_GRID: [f64; 7] = [0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
const T_GRID: [f64; 3] = [0.1, 0.25, 0.5];

fn verify_kernel(report: &mut Report) -> Result<()> {
    // bound dominance over the full grid
    let mut worst = f64::INFINITY;
    for &r in &R_GRID {
        for &t in &T_GRID {
            let q = AnnulusKernelQuery::new(
                r,
                Point {
                    x: r.powf(t),
                    y: 0.0,
                },
            )?;
            let (value, _) = bergman_annulus(&q, 1e-12)?;
            let bound = bergman_upper_bound(r, t)?;
            worst = worst.min(bound - value);
        }
    }
    report.push(
        "kernel.bound_dominance",
        worst >= -1e-10,
        worst,
        format!(
            "min(bound - series) over {}x{} grid",
            R_GRID.len(),
            T_GRID.len()
        ),
    );

    // t = 1/2 closed form
    let mut worst_diff: f64 = 0.0;
    for &r in &R_GRID {
        let b = bergman_upper_bound(r, 0.5)?;
        let explicit = 1.0 / (2.0 * PI * r * (1.0 / r).ln()) + 32.0 / (3.0 * PI);
        worst_diff = worst_diff.max((b - explicit).abs());
    }
    report.push(
        "kernel.t_half_constant",
        worst_diff <= 1e-12,
        1e-12 - worst_diff,
        "bound at t=1/2 equals 1/(2 pi r log(1/r)) + 32/(3 pi)".into(),
    );

    // truncation honesty on seeded queries
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let mut worst_slack = f64::INFINITY;
    for _ in 0..10 {
        let r = rng.gen_range(0.05..0.5);
        let t = rng.gen_range(0.15..0.85);
        let q = AnnulusKernelQuery::new(
            r,
            Point {
                x: r.powf(t),
                y: 0.0,
            },
        )?;
        let (value, tail) = bergman_annulus(&q, 1e-12)?;
        let brute = brute_force_kernel(r, r.powf(t), 2000);
        let allowed = tail.max(1e-10);
        worst_slack = worst_slack.min(allowed - (value - brute).abs());
    }
    report.push(
        "kernel.series_vs_brute",
        worst_slack >= 0.0,
        worst_slack,
        "truncated kernel vs +-2000-term summation".into(),
    );

    // transport round trip
    let rt = bergman_transport(bergman_transport(1.7, 3.0), 1.0 / 3.0);
    report.push(
        "kernel.transport_roundtrip",
        (rt - 1.7).abs() < 1e-12,
        1e-12 - (rt - 1.7).abs(),
        "transport by s then 1/s is the identity".into(),
    );

    // domain monotonicity on nested annuli
    let z = Point { x: 0.55, y: 0.0 };
    let (k_small, _) = bergman_annulus(&AnnulusKernelQuery::new(0.4, z)?, 1e-12)?;
    let (k_large, _) = bergman_annulus(&AnnulusKernelQuery::new(0.2, z)?, 1e-12)?;
    report.push(
        "kernel.domain_monotonicity",
        k_small >= k_large,
        k_small - k_large,
        "smaller annulus has the larger kernel".into(),
    );
    Ok(())
}

fn brute_force_kernel(r: f64, abs_z: f64, n_max: i32) -> f64 {
    let mut sum = 1.0 / (2.0 * PI * abs_z * abs_z * (1.0 / r).ln());
    for n in 1..=n_max {
        let q1 = abs_z.powi(2 * n);
        let q2 = (r / abs_z).powi(2 * n);
        sum += n as f64 * (q1 + q2) / ((1.0 - r.powi(2 * n)) * PI * abs_z * abs_z);
    }
    sum
}

fn verify_poincare(report: &mut Report) -> Result<()> {
    // the two closed forms on 20 annuli instances
    let mut worst_rel: f64 = 0.0;
    for i in 0..20 {
        let r = 0.1 + 1.9 * i as f64 / 19.0;
        let m = 0.3 + 1.2 * i as f64 / 19.0;
        let via_32 = poincare_density(&PoincareQuery {
            domain: PoincareDomain::CenteredAnnulus { r, m },
            z: Point { x: r, y: 0.0 },
        })?;
        let via_32p = poincare_density(&PoincareQuery {
            domain: PoincareDomain::SymmetricAnnulus { big_r: m.exp() },
            z: Point { x: 1.0, y: 0.0 },
        })? / r;
        worst_rel = worst_rel.max((via_32 / via_32p - 1.0).abs());
    }
    report.push(
        "poincare.formula_consistency",
        worst_rel < 1e-12,
        1e-12 - worst_rel,
        "centered closed form vs rescaled symmetric form, 20 instances".into(),
    );

    // punctured-disk identity rho |z| log(1/|z|) = 1
    let mut worst_dev: f64 = 0.0;
    for k in 1..=20 {
        let abs_z = (-(k as f64)).exp();
        let rho = poincare_density(&PoincareQuery {
            domain: PoincareDomain::PuncturedDisk,
            z: Point { x: abs_z, y: 0.0 },
        })?;
        worst_dev = worst_dev.max((rho * abs_z * (1.0 / abs_z).ln() - 1.0).abs());
    }
    report.push(
        "poincare.punctured_identity",
        worst_dev < 1e-14,
        1e-14 - worst_dev,
        "rho |z| log(1/|z|) = 1 for |z| = e^-1..e^-20".into(),
    );

    // BP band on the punctured disk
    let s = PlanarSetSample::circle_with_origin(512)?;
    let z_seq: Vec<Point> = (2..=20)
        .map(|k| Point {
            x: (-(k as f64)).exp(),
            y: 0.0,
        })
        .collect();
    let bp = check_bp_estimate(&z_seq, &PoincareDomain::PuncturedDisk, &s, 1.0)?;
    let in_band = bp.min_ratio >= 0.4 && bp.max_ratio <= 1.1;
    report.push(
        "poincare.bp_band",
        in_band,
        (bp.min_ratio - 0.4).min(1.1 - bp.max_ratio),
        format!(
            "ratios in [{}, {}]",
            fmt_f64(bp.min_ratio),
            fmt_f64(bp.max_ratio)
        ),
    );
    Ok(())
}

fn verify_harmonic(report: &mut Report, mode: PrecisionMode) -> Result<()> {
    // phi stays in [0, 1] and hits 1/2 at the log midpoint
    let mut ok = true;
    for i in 1..50 {
        let s = 0.01 + (0.5 - 0.01) * i as f64 / 50.0;
        let v = annulus_comparison_phi(0.01, 0.5, s)?;
        ok &= (0.0..=1.0).contains(&v);
    }
    let mid = annulus_comparison_phi(0.01, 0.5, (0.01f64 * 0.5).sqrt())?;
    report.push(
        "harmonic.phi_bounds",
        ok && (mid - 0.5).abs() < 1e-12,
        0.5 - (mid - 0.5).abs(),
        "maximum principle surrogate and log midpoint".into(),
    );

    // limit ratios at r = 1e-12 (C = C' = 1)
    let r: f64 = 1e-12;
    let (alpha, alpha_p) = (2.0, 3.0);
    let phi1 = annulus_comparison_phi(r.powf(alpha_p), r, r.powf(alpha))?;
    let want1 = (alpha_p - alpha) / (alpha_p - 1.0);
    let (beta, beta_p) = (1.0, 3.0);
    let lam = Dd::from_f64(r).ln().neg();
    let inner2 = lam
        .ln()
        .mul_f64(-beta_p)
        .exp()
        .mul(Dd::from_f64(r))
        .to_f64();
    let s2 = lam.ln().mul_f64(-beta).exp().mul(Dd::from_f64(r)).to_f64();
    let phi2 = annulus_comparison_phi(inner2, r, s2)?;
    let want2 = (beta_p - beta) / beta_p;
    let dev = (phi1 - want1).abs().max((phi2 - want2).abs());
    report.push(
        "harmonic.shrunken_circle_ratios",
        dev < 1e-6,
        1e-6 - dev,
        "shrunken-circle ratios (alpha'-alpha)/(alpha'-1), (beta'-beta)/beta'".into(),
    );

    // I(r) -> -beta monotonically along the acceptance grid
    let mut monotone = true;
    let mut final_ratio: f64 = 0.0;
    for &beta in &[1.0, 3.0, 10.0] {
        let mut prev = f64::INFINITY;
        for &e in &[8i32, 16, 32, 64] {
            let v = (loglog_ratio_shift_in((10f64).powi(-e), beta, mode)? + beta).abs();
            monotone &= v < prev;
            prev = v;
        }
        final_ratio = final_ratio.max(prev / beta);
    }
    report.push(
        "harmonic.loglog_shift_limit",
        monotone && final_ratio < 0.25,
        0.25 - final_ratio,
        "|I(r) + beta| decreasing along r = 1e-8..1e-64".into(),
    );

    // quadrature vs the symbolic antiderivative
    let kappa = 0.05;
    let c = 0.5;
    let alpha_cap = 1.5;
    let cap = CapacityProfile::power_law(c, alpha_cap, 1.0)?;
    let r_chen = 0.2;
    let upper = kappa * r_chen / 2.0;
    let a = 1.0 / (2.0 - alpha_cap) - 1.0;
    let b = (1.0 / (2.0 * kappa * c)).ln();
    let mut worst_rel: f64 = 0.0;
    for k in 1..=8 {
        let z = upper * (10f64).powi(-k);
        let got = chen_upper_bound(z, r_chen, kappa, &cap, 1.0)?;
        let integral = ((a * (1.0 / z).ln() + b).ln() - (a * (1.0 / upper).ln() + b).ln()) / a;
        let want = (-integral).exp();
        worst_rel = worst_rel.max((got / want - 1.0).abs());
    }
    report.push(
        "harmonic.chen_antiderivative",
        worst_rel < 1e-6,
        1e-6 - worst_rel,
        "integral bound vs closed form, power-law profile".into(),
    );
    Ok(())
}

fn verify_content(report: &mut Report, args: &VerifyArgs) -> Result<()> {
    // forward certificate on the u1 tree
    let set = CantorIntervalSet::build_u1(0.1, 2.0, 16)?;
    let tree = build_log_cantor_tree(&set, 0.5, 0.05, 0.4, 10)?;
    let est = forward_content_certificate(&tree, args.trials, args.seed)?;
    report.push(
        "content.forward_u1",
        est.lower <= est.upper + 1e-12 && est.lower > 0.0 && est.validation.passed,
        est.upper - est.lower,
        format!(
            "lower {} <= upper {} (worst trial ratio {})",
            fmt_f64(est.lower),
            fmt_f64(est.upper),
            fmt_f64(est.validation.worst_ratio)
        ),
    );

    if args.negative_control {
        let m = MassDistribution::new(&tree);
        let c2 = 0.4 * 0.5 * 0.25;
        let wrong = GaugeFunction::log_gauge(2.0, c2, 0.2)?.monotone_extension();
        let control = validate_disc_mass_inequality(&m, &wrong, 18.0, args.trials, args.seed)?;
        report.push(
            "content.negative_control",
            control.violations >= 1,
            control.violations as f64,
            format!(
                "doubled gamma produced {} violations (expected >= 1)",
                control.violations
            ),
        );
    }

    // converse probes
    let g1 = GaugeFunction::log_gauge(1.0, 2.0, 0.25)?;
    let probe1 = converse_content_probe(&g1, 0.9, ContentFamily::U1)?;
    report.push(
        "content.converse_u1",
        probe1.exponent == 2.0 && probe1.r1 > 0.0,
        probe1.r1,
        format!("alpha = {}, r1 = {}", probe1.exponent, fmt_f64(probe1.r1)),
    );
    let g2 = GaugeFunction::log_log_gauge(1.0, 0.25)?;
    let probe2 = converse_content_probe(&g2, 0.5, ContentFamily::U2)?;
    report.push(
        "content.converse_u2",
        probe2.exponent >= 1.0,
        probe2.exponent,
        format!("beta = {}, r1 = {}", probe2.exponent, fmt_f64(probe2.r1)),
    );

    // vanishing level bound at the tiny-exponent instance
    let v = set.content_upper_bound_levels(0.01, 10)?;
    report.push(
        "content.vanishing_level_bound",
        v < 1e-6 && (v / 5.892504958332487e-8 - 1.0).abs() < 1e-10,
        1e-6 - v,
        format!("2^10 l_10^0.01 = {}", fmt_f64(v)),
    );
    Ok(())
}

fn verify_perfectness(report: &mut Report) -> Result<()> {
    let set = CantorIntervalSet::build_u1(0.1, 2.0, 10)?;
    let fit = fit_condition_parameters(SetRepr::Cantor(&set), ConditionFamily::U1)?;
    report.push(
        "perfectness.fit_u1",
        fit.exponent > 1.8 && fit.exponent < 2.2,
        (fit.exponent - 1.8).min(2.2 - fit.exponent),
        format!("alpha_hat = {}", fmt_f64(fit.exponent)),
    );

    let set2 = CantorIntervalSet::build_u2((-100.0f64).exp(), 3.0, 10)?;
    let fit2 = fit_condition_parameters(SetRepr::Cantor(&set2), ConditionFamily::U2)?;
    report.push(
        "perfectness.fit_u2",
        fit2.exponent > 2.5 && fit2.exponent < 3.5,
        (fit2.exponent - 2.5).min(3.5 - fit2.exponent),
        format!("beta_hat = {}", fmt_f64(fit2.exponent)),
    );

    let seg = PlanarSetSample::segment(200)?;
    let h = GaugeFunction::power(1.0, 0.5)?;
    let cert = test_h_perfectness(&seg, &h, 0.4, &ProbeSpec::default())?;
    report.push(
        "perfectness.segment_classical",
        cert.verdict,
        cert.worst_margin,
        "segment passes uniform perfectness at C = 0.5".into(),
    );

    // fit -> test roundtrip on a representable sample
    let small = CantorIntervalSet::build_u1(0.1, 2.0, 6)?;
    let fit3 = fit_condition_parameters(SetRepr::Cantor(&small), ConditionFamily::U1)?;
    let cert3 = test_h_perfectness(
        &small.sample()?,
        &fit3.gauge(ConditionFamily::U1)?,
        fit3.r0,
        &ProbeSpec::default(),
    )?;
    report.push(
        "perfectness.fit_roundtrip",
        cert3.verdict,
        cert3.worst_margin,
        "fitted parameters yield a passing certificate".into(),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_spec_parsing() {
        assert!(matches!(
            parse_set_spec("u1:l0=0.1,alpha=2,depth=4"),
            Ok(BuiltSet::Cantor(_))
        ));
        assert!(matches!(
            parse_set_spec("segment:n=100"),
            Ok(BuiltSet::Sample(_))
        ));
        assert!(parse_set_spec("u1:l0=0.1").is_err());
        assert!(parse_set_spec("nope:x=1").is_err());
        // alpha = 1 rejected at parse stage through the builder
        assert!(parse_set_spec("u1:l0=0.1,alpha=1,depth=4").is_err());
    }

    #[test]
    fn kernel_profile_csv_shape() {
        let mut buf = Vec::new();
        cmd_kernel_profile(&[0.1, 0.2], &[0.25, 0.5], 1e-10, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("r,t,abs_z"));
        // margins all positive
        for line in &lines[1..] {
            let margin: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert!(margin > 0.0);
        }
    }

    #[test]
    fn verify_harness_empty_check_list() {
        let args = VerifyArgs {
            checks: vec![],
            trials: 10,
            seed: 1,
            negative_control: false,
            out_json: None,
            out_csv: None,
        };
        let mut sink = Vec::new();
        let report = cmd_verify_theorems(&args, &mut sink).unwrap();
        assert_eq!(report.total, 0);
        assert_eq!(report.exit_code, 0);
    }

    #[test]
    fn verify_args_reject_unknown_keys() {
        let cfg = crate::config::parse_config("[verify-theorems]\nbogus = 1\n").unwrap();
        assert!(VerifyArgs::from_config(&cfg).is_err());
        let cfg = crate::config::parse_config("[verify-theorems]\nchecks = kernel\n").unwrap();
        let args = VerifyArgs::from_config(&cfg).unwrap();
        assert_eq!(args.checks, vec!["kernel"]);
    }
}
