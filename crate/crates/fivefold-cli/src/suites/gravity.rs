//! Differential identities of the gravity sector, the `Y` closed forms and manufactured solutions.

use fivefold::algebra::I5;
use fivefold::connections::{
    contorsion_from_torsion, read5x3, ContorsionField, ContorsionForm, Geometry,
};
use fivefold::convergence::Refinement;
use fivefold::gravity::*;
use fivefold::lattice::{minkowski, MetricPreset};

use super::SuiteChecks;
use crate::config::Settings;
use crate::report::Check;

fn identity_study(s: &Settings, einstein: bool, zero_torsion: bool) -> Refinement {
    Refinement::run(&s.levels, |n| {
        let geo = s.geometry(n);
        let sf = if zero_torsion {
            ContorsionField::zero(geo.grid())
        } else {
            s.contorsion(geo.grid(), 21)
        };
        let f = GravityFields::new(&geo, &sf);
        let r = if einstein {
            identity_einstein_divergence(&geo, &f)
        } else {
            identity_tmod_divergence(&geo, &f)
        };
        r.expect("consistent lattice fields").max_abs()
    })
}

pub(crate) fn identities(s: &Settings, sc: &mut SuiteChecks) {
    sc.run(|| {
        Check::converges(
            "torsion-divergence",
            "dual divergence of the modified torsion equals the antisymmetric Einstein part",
            identity_study(s, false, false),
            1.9,
        )
    });
    sc.run(|| {
        Check::converges(
            "einstein-divergence",
            "divergence identity of the torsionful Einstein tensor",
            identity_study(s, true, false),
            1.9,
        )
    });
    sc.run(|| {
        Check::converges(
            "contracted-bianchi",
            "zero torsion: Einstein divergence reduces to the contracted Bianchi identity",
            identity_study(s, true, true),
            1.9,
        )
    });
}

/// Largest deviation of the dual-contraction `Y` from its closed form over a lattice.
fn y_closed_form_deviation(
    geo: &Geometry<f64>,
    sf: &ContorsionField<f64>,
    s: &Settings,
) -> (f64, f64) {
    let c = &s.constants;
    let f = GravityFields::new(geo, sf);
    let fs = FiveSector::new(geo, sf, c.h55(), c.xi_sign).expect("valid constants");
    let (mut dev, mut row5) = (0.0f64, 0.0f64);
    // the closed form is stated for ξ = +1; ξ = −1 flips Y
    let sign = c.xi_sign as f64;
    for p in 0..geo.grid().len() {
        let y = read5x3(fs.y.at(p));
        let cf = y_closed_form(&f.einstein_at(p), &modified_torsion(&f.torsion_at(p)));
        for a in 0..5 {
            for b in 0..5 {
                for d in 0..5 {
                    dev = dev.max((y[a][b][d] - sign * cf[a][b][d]).abs());
                }
            }
        }
        for b in 0..5 {
            for d in 0..5 {
                row5 = row5.max(y[I5][b][d].abs());
            }
        }
    }
    (dev, row5)
}

fn sample_point(s: &Settings, salt: u64) -> GravityPoint<f64> {
    let mut ff = s.factory(salt);
    let mut e = [[0.0; 4]; 4];
    for v in e.iter_mut().flatten() {
        *v = ff.uniform();
    }
    let mut s5 = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a + 1..4 {
            let v = ff.uniform();
            s5[a][b] = v;
            s5[b][a] = -v;
        }
    }
    let g = ff.lorentzian_metric(0.2);
    GravityPoint::closed_form(g, e, ff.torsion(), s5).expect("invertible metric")
}

pub(crate) fn field_equations(s: &Settings, sc: &mut SuiteChecks) {
    let flat_constant = || {
        let geo = s.geometry_with(&MetricPreset::Flat, s.coarsest());
        let mut ff = s.factory(31);
        let t = ff.torsion();
        let mut s5 = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in a + 1..4 {
                let v = ff.uniform();
                s5[a][b] = v;
                s5[b][a] = -v;
            }
        }
        let form = ContorsionForm {
            s4: contorsion_from_torsion(&t, &minkowski(), &minkowski()),
            s5,
        };
        let sf = ContorsionField::from_fn(geo.grid(), |_| form);
        (geo, sf, t)
    };
    sc.run(|| {
        let (geo, sf, _) = flat_constant();
        let (dev, _) = y_closed_form_deviation(&geo, &sf, s);
        Check::at_most(
            "y-closed-form-flat",
            "Y blocks equal Einstein tensor and modified torsion, flat metric with constant torsion",
            dev,
            1e-12,
        )
    });
    sc.run(|| {
        let (geo, sf, t) = flat_constant();
        let c = &s.constants;
        let fs = FiveSector::new(&geo, &sf, c.h55(), c.xi_sign).expect("valid constants");
        let tm = modified_torsion(&t);
        let sign = c.xi_sign as f64;
        let mut worst = 0.0f64;
        for p in [0, geo.grid().len() / 2] {
            let y = read5x3(fs.y.at(p));
            for a in 0..4 {
                for m in 0..4 {
                    for n in 0..4 {
                        worst = worst.max((y[a][m][n] + sign * 2.0 * tm[a][m][n]).abs());
                    }
                }
            }
        }
        Check::at_most(
            "y-torsion-block-flat",
            "four-index Y block equals minus twice the modified torsion, constant torsion",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let geo = s.geometry(s.coarsest());
        let sf = s.contorsion(geo.grid(), 11);
        let (dev, _) = y_closed_form_deviation(&geo, &sf, s);
        Check::at_most(
            "y-closed-form-lattice",
            "Y from the dual contraction equals its closed form on the configured lattice",
            dev,
            1e-12,
        )
    });
    sc.run(|| {
        let geo = s.geometry(s.coarsest());
        let sf = s.contorsion(geo.grid(), 11);
        let (_, row5) = y_closed_form_deviation(&geo, &sf, s);
        Check::at_most(
            "y-fifth-row-zero",
            "fifth-row blocks of Y vanish",
            row5,
            1e-12,
        )
    });
    sc.run(|| {
        let other = Constants::new(2.0, 0.5, -1.5, -1, 0.0, 1).expect("valid");
        let mut worst = 0.0f64;
        for salt in 0..20 {
            let pt = sample_point(s, 100 + salt);
            for c in [s.constants, other] {
                let src = manufactured_sources(&pt, &c);
                worst = worst.max(field_equation_residuals(&pt, &src, &c).max());
            }
        }
        Check::at_most(
            "manufactured-point",
            "field equations with manufactured sources at random points",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let pt = sample_point(s, 100);
        let c = s.constants;
        let mut bad = manufactured_sources(&pt, &c);
        bad.theta[0][1] += 1e-3;
        Check::above(
            "manufactured-perturbed",
            "negative control: a perturbed source violates the field equations",
            field_equation_residuals(&pt, &bad, &c).max(),
            1e-4,
        )
    });
    sc.run(|| {
        let geo = s.geometry(s.coarsest());
        let sf = s.contorsion(geo.grid(), 8);
        let c = s.constants;
        let f = GravityFields::new(&geo, &sf);
        let fs = FiveSector::new(&geo, &sf, c.h55(), c.xi_sign).expect("valid constants");
        let mut worst = 0.0f64;
        for p in (0..geo.grid().len()).step_by(7) {
            let mut pt =
                GravityPoint::closed_form(geo.g(p), f.einstein_at(p), f.torsion_at(p), sf.at(p).s5)
                    .expect("invertible metric");
            pt.y = read5x3(fs.y.at(p));
            let src = manufactured_sources(&pt, &c);
            worst = worst.max(field_equation_residuals(&pt, &src, &c).max());
        }
        Check::at_most(
            "manufactured-lattice",
            "field equations with manufactured sources on the configured lattice",
            worst,
            1e-12,
        )
    });
}
