//! Electrodynamics: Lagrangian coefficients, dispersion branches and the 1+1D evolver.

use fivefold::electro::*;

use super::SuiteChecks;
use crate::config::Settings;
use crate::report::Check;

/// Measured angular frequency of a single-branch evolution and its expected value.
pub fn evolved_frequency(
    branch: Branch,
    q: f64,
    kappa: f64,
    points: usize,
    dt: f64,
    steps: usize,
) -> Result<(f64, f64, Trajectory), fivefold::Error> {
    let w = PlaneWave::on_branch(branch, [0.0, 0.0, q], [1.0, 0.0, 0.0], kappa, 0.0)?;
    let state = Em1d::from_waves(
        points,
        std::f64::consts::TAU,
        std::slice::from_ref(&w),
        kappa,
    )?;
    let traj = evolve(&state, dt, steps, 1)?;
    let expected = (branch.mass_sq_over_kappa_sq() * kappa * kappa + q * q).sqrt();
    let measured = if q == 0.0 {
        // largest component of the branch's polarization is the probe
        let sig: Vec<f64> = match branch {
            Branch::KaluzaKlein => {
                let (p, _) = PAIRS4
                    .iter()
                    .enumerate()
                    .map(|(i, &(m, n))| (i, w.e[m][n].abs()))
                    .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
                traj.states.iter().map(|s| s.e[p][0]).collect()
            }
            _ => traj.states.iter().map(|s| s.a[1][0]).collect(),
        };
        zero_crossing_frequency(&traj.times, &sig)
    } else {
        let amps: Vec<(f64, f64)> = traj
            .states
            .iter()
            .map(|s| s.fourier_amplitude(&s.a[1], q))
            .collect();
        phase_frequency(&traj.times, &amps)
    };
    let measured = measured
        .ok_or_else(|| fivefold::Error::Precondition("signal has too few oscillations".into()))?;
    Ok((measured, expected, traj))
}

pub(crate) fn electrodynamics(s: &Settings, sc: &mut SuiteChecks) {
    let kappa = s.constants.kappa;
    sc.run(|| {
        let p = lagrangian_coefficients(s.constants.epsilon_sign).expect("sign is ±1");
        let want = [
            (-1, 4),
            (1, 4),
            (-1, 1),
            (2 * s.constants.epsilon_sign as i64, 1),
            (-3, 2),
        ];
        let exact = (*p.epsilon_sq.numer(), *p.epsilon_sq.denom()) == (1, 1)
            && p.coefficients
                .iter()
                .zip(want)
                .all(|(c, (n, d))| *c.numer() == n && *c.denom() == d);
        Check::at_most(
            "lagrangian-coefficients",
            "quadratic Lagrangian coefficients (-1/4, 1/4, -1, 2κ/ε, -3κ²/2) at ε² = 1",
            if exact { 0.0 } else { 1.0 },
            0.0,
        )
    });
    let spectrum = dispersion_spectrum([0.3, -0.5, 1.0], kappa);
    sc.run(|| {
        let worst = match &spectrum {
            Ok(d) if d.branches.len() == 3 => {
                let want = [0.0, 6.0, 10.0];
                d.branches
                    .iter()
                    .zip(want)
                    .map(|(b, m)| (b.mass_sq - m * kappa * kappa).abs())
                    .fold(0.0, f64::max)
            }
            _ => f64::INFINITY,
        };
        Check::at_most(
            "dispersion-masses",
            "branch masses squared 0, 6κ², 10κ²",
            worst,
            1e-10,
        )
    });
    sc.run(|| {
        let v = match &spectrum {
            Ok(d) => d.branches[0]
                .ratio
                .map_or(f64::INFINITY, |r| (r - 2.0 / (3.0 * kappa)).abs()),
            Err(_) => f64::INFINITY,
        };
        Check::at_most(
            "ratio-massless",
            "amplitude ratio of the massless branch equals 2/(3κ)",
            v,
            1e-10,
        )
    });
    sc.run(|| {
        let v = match &spectrum {
            Ok(d) => d.branches[2]
                .ratio
                .map_or(f64::INFINITY, |r| (r - 0.25 / kappa).abs()),
            Err(_) => f64::INFINITY,
        };
        Check::at_most(
            "ratio-massive",
            "amplitude ratio of the 10κ² branch equals 1/(4κ)",
            v,
            1e-10,
        )
    });
    let e = &s.evolution;
    for (branch, q, id, anchor) in [
        (
            Branch::Massive,
            0.0,
            "evolver-massive",
            "evolved frequency of the 10κ² branch",
        ),
        (
            Branch::KaluzaKlein,
            0.0,
            "evolver-kaluza-klein",
            "evolved frequency of the 6κ² branch",
        ),
        (
            Branch::Photon,
            4.0,
            "evolver-photon",
            "evolved frequency of the massless branch",
        ),
    ] {
        sc.run(|| {
            let steps = if q == 0.0 { e.steps } else { e.steps.min(800) };
            let rel = match evolved_frequency(branch, q, kappa, e.points, e.dt, steps) {
                Ok((m, want, _)) => (m - want).abs() / want,
                Err(_) => f64::INFINITY,
            };
            Check::at_most(id, anchor, rel, 0.01)
        });
    }
}
