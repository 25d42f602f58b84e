//! The verification suites. Each suite returns its checks in a fixed order.

mod adjoint;
mod algebraic;
mod curvature;
pub(crate) mod electro;
mod gauge;
mod gravity;

use std::time::Instant;

use fivefold::connections::{ContorsionField, Geometry};
use fivefold::lattice::{Grid4, MetricPreset};
use fivefold::testfields::{contorsion_field, random_contorsion_form, FieldFactory};

use crate::config::{Settings, TorsionPreset};
use crate::report::{Check, Report};
pub use electro::evolved_frequency;

/// Suite names in execution order.
pub const SUITES: [&str; 9] = [
    "torsion-bijection",
    "poincare-algebra",
    "curvature-family",
    "jacobi-bianchi",
    "gravity-identities",
    "field-equations",
    "gauge",
    "electrodynamics",
    "adjoint-integration",
];

/// Fields vary along the two refined axes.
pub(crate) const AXES: [bool; 4] = [true, true, false, false];

/// Runs the selected suites in canonical order.
pub fn run_suite(s: &Settings) -> Report {
    let mut checks = vec![];
    for name in SUITES.iter().filter(|n| s.suites.iter().any(|x| x == *n)) {
        let mut sc = SuiteChecks::new(name);
        match *name {
            "torsion-bijection" => algebraic::torsion_bijection(s, &mut sc),
            "poincare-algebra" => algebraic::poincare_algebra(s, &mut sc),
            "curvature-family" => curvature::curvature_family(s, &mut sc),
            "jacobi-bianchi" => curvature::jacobi_bianchi(s, &mut sc),
            "gravity-identities" => gravity::identities(s, &mut sc),
            "field-equations" => gravity::field_equations(s, &mut sc),
            "gauge" => gauge::gauge(s, &mut sc),
            "electrodynamics" => electro::electrodynamics(s, &mut sc),
            "adjoint-integration" => adjoint::adjoint_integration(s, &mut sc),
            _ => unreachable!("suite names are validated"),
        }
        checks.extend(sc.checks);
    }
    let pass = checks.iter().all(|c| c.pass);
    Report {
        seed: s.seed,
        suites: SUITES
            .iter()
            .filter(|n| s.suites.iter().any(|x| x == *n))
            .map(|n| n.to_string())
            .collect(),
        checks,
        pass,
    }
}

/// Collects timed checks for one suite.
pub(crate) struct SuiteChecks {
    suite: String,
    checks: Vec<Check>,
}

impl SuiteChecks {
    fn new(suite: &str) -> Self {
        SuiteChecks {
            suite: suite.into(),
            checks: vec![],
        }
    }

    /// Runs `f`, stamps the suite name and elapsed time.
    pub(crate) fn run(&mut self, f: impl FnOnce() -> Check) {
        let t = Instant::now();
        let mut c = f();
        c.wall_time = t.elapsed().as_secs_f64();
        c.suite = self.suite.clone();
        self.checks.push(c);
    }
}

impl Settings {
    pub(crate) fn grid(&self, n: usize) -> Grid4<f64> {
        Grid4::torus([n, n, self.transverse, self.transverse]).expect("validated grid")
    }

    pub(crate) fn geometry_with(&self, preset: &MetricPreset<f64>, n: usize) -> Geometry<f64> {
        Geometry::new(preset.sample(&self.grid(n)).expect("validated metric"))
    }

    pub(crate) fn geometry(&self, n: usize) -> Geometry<f64> {
        self.geometry_with(&self.metric, n)
    }

    pub(crate) fn coarsest(&self) -> usize {
        self.levels[0]
    }

    pub(crate) fn curved(&self) -> bool {
        self.metric != MetricPreset::Flat
    }

    /// Contorsion field of the configured family; the same smooth field at every level.
    pub(crate) fn contorsion(&self, grid: &Grid4<f64>, salt: u64) -> ContorsionField<f64> {
        match self.torsion {
            TorsionPreset::Zero | TorsionPreset::Constant(0.0) | TorsionPreset::Trig(0.0) => {
                ContorsionField::zero(grid)
            }
            TorsionPreset::Constant(a) => {
                let form = random_contorsion_form(self.factory(salt).rng(), a);
                ContorsionField::from_fn(grid, |_| form)
            }
            TorsionPreset::Trig(a) => {
                contorsion_field(grid, &self.factory(salt).polys::<f64>(80, a))
            }
        }
    }

    pub(crate) fn factory(&self, salt: u64) -> FieldFactory {
        FieldFactory::new(self.seed.wrapping_mul(1_000_003) ^ salt, AXES)
    }
}

/// A conformal background used where a curved metric is required regardless of the config.
pub(crate) fn reference_conformal() -> MetricPreset<f64> {
    MetricPreset::Conformal {
        amplitude: 0.1,
        wave: [1.0, 1.0, 0.0, 0.0],
    }
}
