//! Pointwise algebra: the torsion/contorsion bijection and the Poincaré closure of `G`.

use fivefold::algebra::{poincare_algebra_check, FiveMetric, E_SLOTS};
use fivefold::connections::{
    bivector_connection_g, contorsion_from_torsion, torsion_from_contorsion, Arr3, GConvention,
    Local,
};
use fivefold::lattice::minkowski;
use fivefold::scalar::invert;

use super::SuiteChecks;
use crate::config::Settings;
use crate::report::Check;

fn max_diff(a: &Arr3<f64>, b: &Arr3<f64>) -> f64 {
    a.iter()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub(crate) fn torsion_bijection(s: &Settings, sc: &mut SuiteChecks) {
    sc.run(|| {
        let mut ff = s.factory(1);
        let mut worst = 0.0f64;
        for _ in 0..s.samples {
            let g = ff.lorentzian_metric(0.2);
            let gi = invert(&g).expect("small perturbation of Minkowski");
            let t = ff.torsion();
            let back = torsion_from_contorsion(&contorsion_from_torsion(&t, &g, &gi), &g);
            worst = worst.max(max_diff(&t.0, &back.0));
        }
        Check::at_most(
            "torsion-roundtrip",
            "torsion to contorsion and back",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let mut ff = s.factory(2);
        let mut worst = 0.0f64;
        for _ in 0..s.samples {
            let g = ff.lorentzian_metric(0.2);
            let gi = invert(&g).expect("small perturbation of Minkowski");
            let c = ff.contorsion();
            let back = contorsion_from_torsion(&torsion_from_contorsion(&c, &g), &g, &gi);
            worst = worst.max(max_diff(&c.0, &back.0));
        }
        Check::at_most(
            "contorsion-roundtrip",
            "contorsion to torsion and back",
            worst,
            1e-12,
        )
    });
}

pub(crate) fn poincare_algebra(s: &Settings, sc: &mut SuiteChecks) {
    let fg = FiveMetric::poincare(minkowski::<f64>(), s.constants.kappa);
    let flat = Local::<f64>::flat();
    sc.run(|| {
        let m = bivector_connection_g(&flat, GConvention::WithTranslation);
        Check::at_most(
            "with-translation",
            "commutators of the bivector connection coefficients at flat metric, translations included",
            poincare_algebra_check(&m, &fg),
            1e-12,
        )
    });
    sc.run(|| {
        let m = bivector_connection_g(&flat, GConvention::RotationOnly);
        Check::at_most(
            "rotation-only",
            "commutators of the bivector connection coefficients at flat metric, rotation-only",
            poincare_algebra_check(&m, &fg),
            1e-12,
        )
    });
    sc.run(|| {
        let m = bivector_connection_g(&flat, GConvention::RotationOnly);
        let t = E_SLOTS
            .iter()
            .flat_map(|&i| m[i].iter().flatten())
            .fold(0.0f64, |a, v| a.max(v.abs()));
        Check::at_most(
            "rotation-only-translations",
            "translation generators vanish in the rotation-only convention",
            t,
            0.0,
        )
    });
}
