//! Check records, the report and its JSON/CSV encodings.

use std::io::Write;
use std::path::Path;

use fivefold::convergence::Refinement;
use serde::{Deserialize, Serialize};

/// Pass rule of a check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Criterion {
    /// Single residual at most `tol`.
    AtMost { tol: f64 },
    /// Single value strictly above `bound` (negative controls).
    Above { bound: f64 },
    /// Observed order on the finest pair at least `min_order`, or exact.
    Converges { min_order: f64 },
    /// Negative control: the study neither converges at `min_order` nor is exact.
    Stalls { min_order: f64 },
}

/// One executed check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub suite: String,
    pub id: String,
    /// What the check reproduces, in words.
    pub anchor: String,
    /// Refinement levels (points per refined axis); empty for single-shot checks.
    pub levels: Vec<usize>,
    pub residuals: Vec<f64>,
    /// Order between the two finest levels.
    pub order: Option<f64>,
    pub criterion: Criterion,
    pub pass: bool,
    /// Seconds.
    pub wall_time: f64,
}

impl Check {
    fn new(
        id: &str,
        anchor: &str,
        levels: Vec<usize>,
        residuals: Vec<f64>,
        order: Option<f64>,
        criterion: Criterion,
        pass: bool,
    ) -> Self {
        Check {
            suite: String::new(),
            id: id.into(),
            anchor: anchor.into(),
            levels,
            residuals,
            order,
            criterion,
            pass,
            wall_time: 0.0,
        }
    }

    pub fn at_most(id: &str, anchor: &str, residual: f64, tol: f64) -> Self {
        let pass = residual.is_finite() && residual <= tol;
        Self::new(
            id,
            anchor,
            vec![],
            vec![residual],
            None,
            Criterion::AtMost { tol },
            pass,
        )
    }

    pub fn above(id: &str, anchor: &str, value: f64, bound: f64) -> Self {
        let pass = value.is_finite() && value > bound;
        Self::new(
            id,
            anchor,
            vec![],
            vec![value],
            None,
            Criterion::Above { bound },
            pass,
        )
    }

    pub fn converges(id: &str, anchor: &str, study: Refinement, min_order: f64) -> Self {
        let pass = study.converges(min_order);
        let order = study.final_order();
        Self::new(
            id,
            anchor,
            study.levels,
            study.residuals,
            order,
            Criterion::Converges { min_order },
            pass,
        )
    }

    pub fn stalls(id: &str, anchor: &str, study: Refinement, min_order: f64) -> Self {
        let pass = !study.converges(min_order) && !study.exact();
        let order = study.final_order();
        Self::new(
            id,
            anchor,
            study.levels,
            study.residuals,
            order,
            Criterion::Stalls { min_order },
            pass,
        )
    }

    /// Per-level orders, `None` at the first level.
    pub fn level_orders(&self) -> Vec<Option<f64>> {
        let mut out = vec![None];
        out.extend(self.residuals.windows(2).map(|w| {
            if w[0] < fivefold::convergence::ROUNDOFF_FLOOR
                && w[1] < fivefold::convergence::ROUNDOFF_FLOOR
            {
                None
            } else {
                Some((w[0] / w[1]).log2())
            }
        }));
        out.truncate(self.residuals.len());
        out
    }
}

/// Outcome of a `verify` run.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<String>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report with wall times zeroed; identical across runs with the same seed.
    pub fn numeric_payload(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time = 0.0;
        }
        r.to_json()
    }

    /// One row per (check, level): suite, id, anchor, level, residual, order, pass.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "suite", "id", "anchor", "level", "residual", "order", "pass",
        ])?;
        for c in &self.checks {
            let orders = c.level_orders();
            for (i, r) in c.residuals.iter().enumerate() {
                let level = c.levels.get(i).map(|l| l.to_string()).unwrap_or_default();
                let order = orders[i].map(|o| format!("{o:.4}")).unwrap_or_default();
                out.write_record([
                    c.suite.as_str(),
                    c.id.as_str(),
                    c.anchor.as_str(),
                    &level,
                    &sci(*r),
                    &order,
                    if c.pass { "true" } else { "false" },
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("utf-8")
    }

    /// Writes `report.json` and `report.csv` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("report.csv"), self.csv_string())
    }
}

/// Scientific notation with twelve significant digits after the point.
pub fn sci(x: f64) -> String {
    format!("{x:.12e}")
}
