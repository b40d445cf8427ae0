//! Weakly uniformly perfect planar sets: constructions and numerical
//! certification of the conformal-invariant estimates they satisfy.
//!
//! The crate builds Cantor-type test sets with prescribed gap profiles,
//! evaluates the closed-form quantities those sets are compared against
//! (annulus Bergman kernel series with certified truncation, Poincare
//! densities, harmonic-measure comparison functions, gauge Hausdorff
//! content), and wraps the whole chain in machine-checkable certificates
//! with explicit resolution caveats.
//!
//! Modules follow the pipeline order: [`geometry`] holds the planar
//! primitives, [`gauges`] the gauge-function algebra, [`cantor`] the set
//! constructions and the Bernoulli mass distribution, [`perfectness`] the
//! gap testers, [`kernels`] and [`harmonic`] the conformal-invariant
//! formulas, [`content`] the two-sided content estimates, and [`cli`] the
//! command-line harness.
//!
//! Validation deliberately uses negated comparisons (`!(x > 0.0)`) so
//! NaN inputs fail closed, and the compensated number types expose named
//! arithmetic methods with mixed-precision variants rather than operator
//! traits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::should_implement_trait)]

pub mod cantor;
pub mod cli;
pub mod config;
pub mod content;
pub mod extended;
pub mod gauges;
pub mod geometry;
pub mod harmonic;
pub mod kernels;
pub mod perfectness;
pub mod report;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("construction error at level {level}: {msg}")]
    Construction { level: usize, msg: String },

    #[error("no witness point in annulus [{inner:e}, {outer:e}] around ({cx}, {cy})")]
    EmptyWitnessAnnulus {
        cx: f64,
        cy: f64,
        inner: f64,
        outer: f64,
    },

    #[error("grid finer than sample resolution")]
    GridBelowResolution,

    #[error("degenerate boundary sample")]
    DegenerateBoundary,

    #[error("degenerate regression: fewer than 2 distinct scales")]
    DegenerateRegression,

    #[error("bound inapplicable: {0}")]
    BoundInapplicable(String),

    #[error("validation not run for this tree/gauge/factor combination")]
    ValidationNotRun,

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("scan budget exhausted: {0}")]
    ScanBudget(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Precision mode for the evaluation kernels that support both plain
/// double and compensated double-double arithmetic.
///
/// Selected by the `WEAKPERF_PRECISION` environment variable on the CLI
/// (`double` or `extended`); extended is the default everywhere because
/// several acceptance checks involve `log log` of numbers near 1e-64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionMode {
    Double,
    Extended,
}

impl PrecisionMode {
    pub fn from_env() -> Self {
        match std::env::var("WEAKPERF_PRECISION").as_deref() {
            Ok("double") => PrecisionMode::Double,
            _ => PrecisionMode::Extended,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PrecisionMode::Double => "double",
            PrecisionMode::Extended => "extended",
        }
    }
}

/// Formats a float with 17 significant digits so that reports round-trip
/// exactly through text.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
