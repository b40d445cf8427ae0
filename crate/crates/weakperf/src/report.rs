//! Check reports: deterministic per-row records plus a JSON-shaped
//! summary. Reports with the same config and seed are byte-identical
//! except for the wall-time field.

use crate::fmt_f64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 2;
pub const EXIT_CONFIG_ERROR: i32 = 3;
pub const EXIT_NUMERIC_ERROR: i32 = 4;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub id: String,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub schema_version: u32,
    pub precision_mode: String,
    pub config_echo: BTreeMap<String, String>,
    pub rows: Vec<CheckRow>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_margin: f64,
    pub exit_code: i32,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(
        command: &str,
        precision_mode: &str,
        config_echo: BTreeMap<String, String>,
    ) -> Report {
        Report {
            command: command.to_string(),
            schema_version: crate::config::SCHEMA_VERSION,
            precision_mode: precision_mode.to_string(),
            config_echo,
            rows: Vec::new(),
            total: 0,
            passed: 0,
            failed: 0,
            worst_margin: f64::INFINITY,
            exit_code: EXIT_OK,
            wall_ms: 0,
        }
    }

    pub fn push(&mut self, id: &str, passed: bool, margin: f64, detail: String) {
        self.rows.push(CheckRow {
            id: id.to_string(),
            passed,
            margin,
            detail,
        });
    }

    pub fn finalize(&mut self, wall_ms: u64) {
        // rows are assembled by check id regardless of evaluation order
        self.rows.sort_by(|a, b| a.id.cmp(&b.id));
        self.total = self.rows.len();
        self.passed = self.rows.iter().filter(|r| r.passed).count();
        self.failed = self.total - self.passed;
        self.worst_margin = self
            .rows
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min);
        self.exit_code = if self.failed == 0 {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILURE
        };
        self.wall_ms = wall_ms;
    }

    pub fn write_json<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("report serialization");
        writeln!(w, "{json}")
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "id,passed,margin,detail")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                r.id,
                r.passed,
                fmt_f64(r.margin),
                r.detail.replace(',', ";")
            )?;
        }
        Ok(())
    }

    pub fn print_summary<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        for r in &self.rows {
            writeln!(
                w,
                "{} {} margin={} {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                fmt_f64(r.margin),
                r.detail
            )?;
        }
        writeln!(
            w,
            "{}/{} checks passed ({} failed), precision={}, wall={}ms",
            self.passed, self.total, self.failed, self.precision_mode, self.wall_ms
        )
    }
}
