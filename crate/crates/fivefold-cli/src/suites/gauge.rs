//! Bivector gauge fields: field strength closed form, gauge Bianchi identity and `dF = 0`.

use fivefold::algebra::E_SLOTS;
use fivefold::connections::Geometry;
use fivefold::convergence::Refinement;
use fivefold::curvature::Triple;
use fivefold::gauge::*;
use fivefold::lattice::{gradient, Field, Grid4, MetricPreset};
use fivefold::testfields::{bivector_field, contorsion_field};

use super::SuiteChecks;
use crate::config::Settings;
use crate::report::Check;

/// Smooth random gauge fields `C_𝔄` (n×n) with slots outside `keep` set to zero.
fn random_gauge(
    s: &Settings,
    grid: &Grid4<f64>,
    n: usize,
    salt: u64,
    amp: f64,
    keep: impl Fn(usize) -> bool,
) -> GaugeConnection<f64> {
    let polys = s.factory(salt).polys::<f64>(n * n * 10, amp);
    GaugeConnection::from_fn(grid, n, |x| {
        std::array::from_fn(|a| {
            (0..n * n)
                .map(|i| {
                    if keep(a) {
                        polys[i * 10 + a].eval(x)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
    })
}

fn triple(s: &Settings, grid: &Grid4<f64>, salt: u64, e_only: bool) -> [Field<f64>; 3] {
    let mut ff = s.factory(salt);
    std::array::from_fn(|_| {
        let mut f = bivector_field(grid, &ff.polys::<f64>(10, 0.5));
        if e_only {
            for p in 0..grid.len() {
                for (k, v) in f.at_mut(p).iter_mut().enumerate() {
                    if !E_SLOTS.contains(&k) {
                        *v = 0.0;
                    }
                }
            }
        }
        f
    })
}

fn bianchi(s: &Settings, geo: &Geometry<f64>, n: usize, e_only: bool, sign: f64) -> f64 {
    let grid = geo.grid();
    let keep = |k: usize| !e_only || E_SLOTS.contains(&k);
    let c = random_gauge(s, grid, n, 101, 0.5, keep);
    let f = gauge_field_strength(&c, geo).expect("same grid");
    let [a, b, d] = triple(s, grid, 102, e_only);
    let t = Triple {
        a: &a,
        b: &b,
        c: &d,
    };
    gauge_bianchi_residual(&f, &c, &t, geo, sign)
        .expect("same grid")
        .max_abs()
}

fn df_study(s: &Settings, n: usize) -> Refinement {
    Refinement::run(&s.levels, |np| {
        let grid = s.grid(np);
        let c = random_gauge(s, &grid, n, 121, 0.5, |_| true);
        let sf = contorsion_field(&grid, &s.factory(122).polys::<f64>(80, 0.3));
        let b = five_gauge_from_bivector(&c, &sf).expect("same grid");
        df_zero_check(&b)
            .expect("five-vector gauge field")
            .max_abs()
    })
}

pub(crate) fn gauge(s: &Settings, sc: &mut SuiteChecks) {
    sc.run(|| {
        let geo = s.geometry(s.coarsest());
        let c = random_gauge(s, geo.grid(), 2, 41, 0.6, |_| true);
        let f = gauge_field_strength(&c, &geo).expect("same grid");
        let dc = gradient(c.field());
        let mut worst = f.antisymmetry_defect();
        for p in 0..geo.grid().len() {
            let d: [GaugePoint<f64>; 4] = std::array::from_fn(|k| {
                let v = dc[k].at(p);
                std::array::from_fn(|a| (0..4).map(|i| v[i * 10 + a]).collect())
            });
            let closed = field_strength_closed_form(&c.at(p), &d, &geo.local(p), 2);
            for (x, y) in f.field().at(p).iter().zip(&closed) {
                worst = worst.max((x - y).abs());
            }
        }
        Check::at_most(
            "field-strength-closed-form",
            "gauge field strength equals its three block closed forms",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let study = Refinement::run(&s.levels, |n| {
            bianchi(s, &s.geometry_with(&MetricPreset::Flat, n), 1, true, 1.0)
        });
        Check::converges(
            "gauge-bianchi-abelian",
            "gauge Bianchi identity, abelian translation fields on flat space",
            study,
            1.9,
        )
    });
    sc.run(|| {
        let study = Refinement::run(&s.levels, |n| bianchi(s, &s.geometry(n), 2, false, 1.0));
        Check::converges(
            "gauge-bianchi",
            "gauge Bianchi identity with the defect term, two-dimensional bundle",
            study,
            1.9,
        )
    });
    if s.curved() {
        sc.run(|| {
            let study = Refinement::run(&s.levels, |n| bianchi(s, &s.geometry(n), 2, false, 0.0));
            Check::stalls(
                "gauge-bianchi-without-defect",
                "negative control: gauge Bianchi identity without the defect term",
                study,
                1.9,
            )
        });
    }
    sc.run(|| {
        let geo = s.geometry_with(&MetricPreset::Flat, s.coarsest());
        let c = GaugeConnection::zeros(geo.grid(), 2);
        let f = gauge_field_strength(&c, &geo).expect("same grid");
        let [a, b, d] = triple(s, geo.grid(), 81, false);
        let t = Triple {
            a: &a,
            b: &b,
            c: &d,
        };
        let r = gauge_bianchi_residual(&f, &c, &t, &geo, 1.0).expect("same grid");
        Check::at_most(
            "gauge-bianchi-trivial",
            "gauge Bianchi identity without gauge fields on flat space",
            r.max_abs(),
            1e-12,
        )
    });
    sc.run(|| {
        Check::converges(
            "df-abelian",
            "exterior derivative of the five-vector field strength vanishes, abelian",
            df_study(s, 1),
            1.9,
        )
    });
    sc.run(|| {
        Check::converges(
            "df-nonabelian",
            "exterior derivative of the five-vector field strength vanishes, two-dimensional bundle",
            df_study(s, 2),
            1.9,
        )
    });
}
