//! Dispersion and evolution scenarios and their table encodings.

use std::io::Write;

use fivefold::electro::{dispersion_spectrum, Branch};
use serde::Serialize;

use crate::config::Settings;
use crate::report::sci;
use crate::suites::evolved_frequency;

/// One dispersion branch as written to CSV.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DispersionRow {
    pub branch: String,
    pub kappa: f64,
    pub mass_sq: f64,
    pub multiplicity: usize,
    pub ratio: Option<f64>,
    pub longitudinal: bool,
}

/// Branches of the plane-wave spectrum along `kvec`, named by their mass.
pub fn dispersion_rows(kappa: f64, kvec: [f64; 3]) -> Result<Vec<DispersionRow>, fivefold::Error> {
    let d = dispersion_spectrum(kvec, kappa)?;
    Ok(d.branches
        .iter()
        .map(|b| {
            let m = b.mass_sq / (kappa * kappa);
            let name = [Branch::Photon, Branch::KaluzaKlein, Branch::Massive]
                .into_iter()
                .min_by(|x, y| {
                    let dx = (x.mass_sq_over_kappa_sq() - m).abs();
                    let dy = (y.mass_sq_over_kappa_sq() - m).abs();
                    dx.total_cmp(&dy)
                })
                .map(|b| b.name())
                .unwrap_or("unknown");
            DispersionRow {
                branch: name.into(),
                kappa,
                mass_sq: b.mass_sq,
                multiplicity: b.multiplicity,
                ratio: b.ratio,
                longitudinal: b.longitudinal,
            }
        })
        .collect())
}

/// CSV with columns `branch, kappa, mass_sq, multiplicity, ratio, longitudinal`.
pub fn write_dispersion_csv<W: Write>(rows: &[DispersionRow], w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "branch",
        "kappa",
        "mass_sq",
        "multiplicity",
        "ratio",
        "longitudinal",
    ])?;
    for r in rows {
        out.write_record([
            r.branch.clone(),
            sci(r.kappa),
            sci(r.mass_sq),
            r.multiplicity.to_string(),
            r.ratio.map(sci).unwrap_or_default(),
            r.longitudinal.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Output of the `evolve` subcommand.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EvolutionReport {
    pub branch: String,
    pub kappa: f64,
    pub wavenumber: f64,
    pub points: usize,
    pub dt: f64,
    pub steps: usize,
    pub expected_frequency: f64,
    pub measured_frequency: f64,
    pub relative_error: f64,
    /// Largest relative energy deviation from the initial value.
    pub energy_drift: f64,
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
}

/// Evolves a single plane wave of the configured branch and measures its frequency.
pub fn run_evolution(s: &Settings) -> Result<EvolutionReport, fivefold::Error> {
    let e = &s.evolution;
    let kappa = s.constants.kappa;
    let (measured, expected, traj) = evolved_frequency(
        s.evolution_branch,
        e.wavenumber,
        kappa,
        e.points,
        e.dt,
        e.steps,
    )?;
    let e0 = traj.energies[0];
    let drift = traj
        .energies
        .iter()
        .map(|h| ((h - e0) / e0).abs())
        .fold(0.0, f64::max);
    let keep = |v: &[f64]| v.iter().step_by(e.every).copied().collect::<Vec<_>>();
    Ok(EvolutionReport {
        branch: s.evolution_branch.name().into(),
        kappa,
        wavenumber: e.wavenumber,
        points: e.points,
        dt: e.dt,
        steps: e.steps,
        expected_frequency: expected,
        measured_frequency: measured,
        relative_error: (measured - expected).abs() / expected,
        energy_drift: drift,
        times: keep(&traj.times),
        energies: keep(&traj.energies),
    })
}
