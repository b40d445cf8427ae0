//! Symbolic gauge functions and their algebra.
//!
//! Five kinds are supported, each strictly increasing on `(0, domain_cap)`
//! with limit 0 at 0:
//!
//! * `Power(alpha)`         — `C t^alpha` (alpha = 1 is the classical
//!   linear gauge of uniform perfectness)
//! * `LogPower(beta)`       — `C t (log 1/t)^-beta`
//! * `LogGauge(gamma, C2)`  — `(log(2/(C2 t)))^-gamma`
//! * `LogLogGauge(eta)`     — `exp(-eta log(2/t) / log log(4/t))`
//! * `PlainPower(gamma)`    — `C t^gamma`
//!
//! Above `domain_cap` the closed forms may lose monotonicity, so an
//! explicitly extended gauge continues with the constant value at the cap.
//! Constant continuation keeps the gauge nondecreasing and never weakens a
//! lower-bound certificate. Evaluation goes through double-double
//! arithmetic; there is also a log-domain entry point for arguments far
//! below the double underflow threshold.

use crate::extended::Dd;
use crate::{Error, PrecisionMode, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GaugeKind {
    /// C t^alpha with alpha >= 1.
    Power { alpha: f64 },
    /// C t (log 1/t)^-beta with beta > 0.
    LogPower { beta: f64 },
    /// (log(2/(scale t)))^-gamma; `scale` is the C2 of the mass-bound
    /// pipeline. The Theorem-style (log 1/(Ct))^-gamma family is the same
    /// gauge with C = scale/2.
    LogGauge { gamma: f64, scale: f64 },
    /// exp(-eta log(2/t)/log log(4/t)).
    LogLogGauge { eta: f64 },
    /// C t^gamma with gamma > 0 (plain Hausdorff-content gauge).
    PlainPower { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeFunction {
    pub kind: GaugeKind,
    pub coefficient: f64,
    pub domain_cap: f64,
    /// Whether the gauge has been monotone-extended beyond the cap.
    pub extended: bool,
}

const E_INV: f64 = 0.36787944117144233; // 1/e
const FOUR_E_MINUS_E: f64 = 0.26360654989673255; // 4 e^-e, monotonicity cap of g_2

impl GaugeFunction {
    pub fn power(alpha: f64, coefficient: f64) -> Result<GaugeFunction> {
        if !(alpha >= 1.0) || !(coefficient > 0.0) {
            return Err(Error::Domain(format!(
                "power gauge needs alpha >= 1 and C > 0, got alpha={alpha}, C={coefficient}"
            )));
        }
        // cap where C t^alpha <= t still holds
        let cap = if alpha > 1.0 {
            coefficient.powf(-1.0 / (alpha - 1.0)).min(1.0)
        } else {
            1.0
        };
        Ok(GaugeFunction {
            kind: GaugeKind::Power { alpha },
            coefficient,
            domain_cap: cap,
            extended: false,
        })
    }

    pub fn log_power(beta: f64, coefficient: f64) -> Result<GaugeFunction> {
        if !(beta > 0.0) || !(coefficient > 0.0) {
            return Err(Error::Domain(format!(
                "log-power gauge needs beta > 0 and C > 0, got beta={beta}, C={coefficient}"
            )));
        }
        // keep -log t > 1 and h(t) <= t, i.e. t <= exp(-C^(1/beta))
        let cap = E_INV.min((-coefficient.powf(1.0 / beta)).exp());
        Ok(GaugeFunction {
            kind: GaugeKind::LogPower { beta },
            coefficient,
            domain_cap: cap,
            extended: false,
        })
    }

    pub fn log_gauge(gamma: f64, scale: f64, cap: f64) -> Result<GaugeFunction> {
        if !(gamma > 0.0) || !(scale > 0.0) || !(cap > 0.0) {
            return Err(Error::Domain(format!(
                "log gauge needs gamma, C2, cap > 0, got gamma={gamma}, C2={scale}, cap={cap}"
            )));
        }
        // keep log(2/(scale t)) >= 1 on the closed-form range
        let cap = cap.min(2.0 / (std::f64::consts::E * scale));
        Ok(GaugeFunction {
            kind: GaugeKind::LogGauge { gamma, scale },
            coefficient: 1.0,
            domain_cap: cap,
            extended: false,
        })
    }

    pub fn log_log_gauge(eta: f64, cap: f64) -> Result<GaugeFunction> {
        if !(eta > 0.0) || !(cap > 0.0) {
            return Err(Error::Domain(format!(
                "loglog gauge needs eta > 0 and cap > 0, got eta={eta}, cap={cap}"
            )));
        }
        let cap = cap.min(FOUR_E_MINUS_E);
        Ok(GaugeFunction {
            kind: GaugeKind::LogLogGauge { eta },
            coefficient: 1.0,
            domain_cap: cap,
            extended: false,
        })
    }

    pub fn plain_power(gamma: f64, coefficient: f64) -> Result<GaugeFunction> {
        if !(gamma > 0.0) || !(coefficient > 0.0) {
            return Err(Error::Domain(format!(
                "plain power gauge needs gamma > 0 and C > 0, got gamma={gamma}, C={coefficient}"
            )));
        }
        Ok(GaugeFunction {
            kind: GaugeKind::PlainPower { gamma },
            coefficient,
            domain_cap: f64::INFINITY,
            extended: false,
        })
    }

    /// Extends the gauge to all of (0, inf) by constant continuation at
    /// the cap. Idempotent.
    pub fn monotone_extension(&self) -> GaugeFunction {
        GaugeFunction {
            extended: true,
            ..*self
        }
    }

    /// Closed-form value at `t`, computed in double-double arithmetic.
    /// Beyond the cap an extended gauge continues with the cap value; an
    /// unextended one reports a domain error.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.evaluate_in(t, PrecisionMode::Extended)
    }

    pub fn evaluate_in(&self, t: f64, mode: PrecisionMode) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!(
                "gauge argument must be positive, got {t}"
            )));
        }
        let t_eff = if t >= self.domain_cap {
            if !self.extended {
                return Err(Error::Domain(format!(
                    "gauge argument {t} beyond domain cap {}; apply monotone_extension first",
                    self.domain_cap
                )));
            }
            self.domain_cap
        } else {
            t
        };
        Ok(match mode {
            PrecisionMode::Extended => self.value_dd(t_eff).to_f64(),
            PrecisionMode::Double => self.value_f64(t_eff),
        })
    }

    /// Value from `log(1/t)` instead of `t`, for arguments far below the
    /// double underflow threshold (deep Cantor levels store exactly this).
    pub fn evaluate_ln_inv(&self, ln_inv_t: f64) -> Result<f64> {
        if !ln_inv_t.is_finite() {
            return Err(Error::Domain(format!(
                "log(1/t) must be finite, got {ln_inv_t}"
            )));
        }
        let ln_inv_cap = -self.domain_cap.ln(); // -inf when cap is infinite
        let lam = if ln_inv_t <= ln_inv_cap {
            if !self.extended {
                return Err(Error::Domain(
                    "gauge argument beyond domain cap; apply monotone_extension first".into(),
                ));
            }
            ln_inv_cap
        } else {
            ln_inv_t
        };
        let lam_dd = Dd::from_f64(lam);
        let v = match self.kind {
            GaugeKind::Power { alpha } => lam_dd.mul_f64(-alpha).exp().mul_f64(self.coefficient),
            GaugeKind::PlainPower { gamma } => {
                lam_dd.mul_f64(-gamma).exp().mul_f64(self.coefficient)
            }
            GaugeKind::LogPower { beta } => {
                // C e^-lam lam^-beta
                let lnlam = lam_dd.ln();
                lam_dd
                    .neg()
                    .sub(lnlam.mul_f64(beta))
                    .exp()
                    .mul_f64(self.coefficient)
            }
            GaugeKind::LogGauge { gamma, scale } => {
                // (log 2 - log scale + lam)^-gamma
                let arg = lam_dd.add_f64(std::f64::consts::LN_2 - scale.ln());
                arg.ln().mul_f64(-gamma).exp()
            }
            GaugeKind::LogLogGauge { eta } => {
                let l2 = lam_dd.add_f64(std::f64::consts::LN_2);
                let l4 = lam_dd.add_f64(2.0 * std::f64::consts::LN_2);
                l2.div(l4.ln()).mul_f64(-eta).exp()
            }
        };
        Ok(v.to_f64())
    }

    /// Log of the gauge value from `log(1/t)`, immune to value underflow.
    /// Used by the exact interval-arithmetic testers at depths where the
    /// value itself is far below the double range.
    pub fn ln_value_ln_inv(&self, ln_inv_t: f64) -> Result<f64> {
        if !ln_inv_t.is_finite() {
            return Err(Error::Domain(format!(
                "log(1/t) must be finite, got {ln_inv_t}"
            )));
        }
        let ln_inv_cap = -self.domain_cap.ln();
        let lam = if ln_inv_t <= ln_inv_cap {
            if !self.extended {
                return Err(Error::Domain(
                    "gauge argument beyond domain cap; apply monotone_extension first".into(),
                ));
            }
            ln_inv_cap
        } else {
            ln_inv_t
        };
        let lam_dd = Dd::from_f64(lam);
        let v = match self.kind {
            GaugeKind::Power { alpha } => lam_dd.mul_f64(-alpha).add_f64(self.coefficient.ln()),
            GaugeKind::PlainPower { gamma } => {
                lam_dd.mul_f64(-gamma).add_f64(self.coefficient.ln())
            }
            GaugeKind::LogPower { beta } => lam_dd
                .neg()
                .sub(lam_dd.ln().mul_f64(beta))
                .add_f64(self.coefficient.ln()),
            GaugeKind::LogGauge { gamma, scale } => {
                let arg = lam_dd.add_f64(std::f64::consts::LN_2 - scale.ln());
                arg.ln().mul_f64(-gamma)
            }
            GaugeKind::LogLogGauge { eta } => {
                let l2 = lam_dd.add_f64(std::f64::consts::LN_2);
                let l4 = lam_dd.add_f64(2.0 * std::f64::consts::LN_2);
                l2.div(l4.ln()).mul_f64(-eta)
            }
        };
        Ok(v.to_f64())
    }

    fn value_dd(&self, t: f64) -> Dd {
        let t_dd = Dd::from_f64(t);
        let ln_t = t_dd.ln();
        match self.kind {
            GaugeKind::Power { alpha } => ln_t.mul_f64(alpha).exp().mul_f64(self.coefficient),
            GaugeKind::PlainPower { gamma } => ln_t.mul_f64(gamma).exp().mul_f64(self.coefficient),
            GaugeKind::LogPower { beta } => {
                let lam = ln_t.neg(); // log(1/t) > 1 on the valid range
                t_dd.mul(lam.ln().mul_f64(-beta).exp())
                    .mul_f64(self.coefficient)
            }
            GaugeKind::LogGauge { gamma, scale } => {
                let arg = Dd::from_f64(2.0 / scale).ln().sub(ln_t);
                arg.ln().mul_f64(-gamma).exp()
            }
            GaugeKind::LogLogGauge { eta } => {
                let l2 = Dd::from_f64(2.0).ln().sub(ln_t);
                let l4 = Dd::from_f64(4.0).ln().sub(ln_t);
                l2.div(l4.ln()).mul_f64(-eta).exp()
            }
        }
    }

    fn value_f64(&self, t: f64) -> f64 {
        match self.kind {
            GaugeKind::Power { alpha } => self.coefficient * t.powf(alpha),
            GaugeKind::PlainPower { gamma } => self.coefficient * t.powf(gamma),
            GaugeKind::LogPower { beta } => self.coefficient * t * (1.0 / t).ln().powf(-beta),
            GaugeKind::LogGauge { gamma, scale } => (2.0 / (scale * t)).ln().powf(-gamma),
            GaugeKind::LogLogGauge { eta } => (-eta * (2.0 / t).ln() / (4.0 / t).ln().ln()).exp(),
        }
    }

    /// CLI literal, e.g. `h1:alpha=2,C=1`.
    pub fn literal(&self) -> String {
        match self.kind {
            GaugeKind::Power { alpha } => format!("h1:alpha={alpha},C={}", self.coefficient),
            GaugeKind::LogPower { beta } => format!("h2:beta={beta},C={}", self.coefficient),
            GaugeKind::LogGauge { gamma, scale } => {
                format!("g1:gamma={gamma},C2={scale},cap={}", self.domain_cap)
            }
            GaugeKind::LogLogGauge { eta } => format!("g2:eta={eta},cap={}", self.domain_cap),
            GaugeKind::PlainPower { gamma } => format!("pow:gamma={gamma},C={}", self.coefficient),
        }
    }
}

/// Upper bound for the inverse of an `h_2` gauge: for `h(t) = C t (log
/// 1/t)^-beta` the inverse satisfies `h^-1(t) <= (1/C) t (log 1/t)^beta`
/// for `t` below `exp(-C^(1/beta))`. Returns the bound and that validity
/// threshold.
pub fn inverse_upper_bound(h: &GaugeFunction, t: f64) -> Result<(f64, f64)> {
    let GaugeKind::LogPower { beta } = h.kind else {
        return Err(Error::Domain(
            "inverse_upper_bound needs a LogPower gauge".into(),
        ));
    };
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "inverse bound needs 0 < t < 1, got {t}"
        )));
    }
    let c = h.coefficient;
    let threshold = (-c.powf(1.0 / beta)).exp();
    let t_dd = Dd::from_f64(t);
    let lam = t_dd.ln().neg();
    let value = t_dd.mul(lam.ln().mul_f64(beta).exp()).mul_f64(1.0 / c);
    Ok((value.to_f64(), threshold))
}

/// Parses the gauge literal syntax:
/// `h1:alpha=2,C=1` | `h2:beta=3,C=0.5` | `g1:gamma=1,C2=1,cap=0.25` |
/// `g2:eta=0.7,cap=0.25` | `pow:gamma=1,C=1`.
pub fn parse_gauge(s: &str) -> Result<GaugeFunction> {
    let (head, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("gauge literal `{s}` missing `:`")))?;
    let mut kv = std::collections::BTreeMap::new();
    for part in rest.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("gauge literal field `{part}` missing `=`")))?;
        let val: f64 = v
            .trim()
            .parse()
            .map_err(|e| Error::Config(format!("gauge literal field `{part}`: {e}")))?;
        kv.insert(k.trim().to_string(), val);
    }
    let get = |k: &str| -> Result<f64> {
        kv.get(k)
            .copied()
            .ok_or_else(|| Error::Config(format!("gauge literal `{s}` missing key `{k}`")))
    };
    let known: &[&str] = match head {
        "h1" => &["alpha", "C"],
        "h2" => &["beta", "C"],
        "g1" => &["gamma", "C2", "cap"],
        "g2" => &["eta", "cap"],
        "pow" => &["gamma", "C"],
        other => return Err(Error::Config(format!("unknown gauge kind `{other}`"))),
    };
    for k in kv.keys() {
        if !known.contains(&k.as_str()) {
            return Err(Error::Config(format!(
                "unknown key `{k}` in gauge literal `{s}`"
            )));
        }
    }
    match head {
        "h1" => GaugeFunction::power(get("alpha")?, kv.get("C").copied().unwrap_or(1.0)),
        "h2" => GaugeFunction::log_power(get("beta")?, kv.get("C").copied().unwrap_or(1.0)),
        "g1" => GaugeFunction::log_gauge(
            get("gamma")?,
            kv.get("C2").copied().unwrap_or(1.0),
            kv.get("cap").copied().unwrap_or(0.25),
        ),
        "g2" => GaugeFunction::log_log_gauge(get("eta")?, kv.get("cap").copied().unwrap_or(0.25)),
        "pow" => GaugeFunction::plain_power(get("gamma")?, kv.get("C").copied().unwrap_or(1.0)),
        _ => unreachable!(),
    }
}
