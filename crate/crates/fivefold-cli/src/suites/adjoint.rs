//! Adjoint-form integration: reparametrization invariance, duality and the Stokes decomposition.

use fivefold::adjoint::*;
use fivefold::convergence::Refinement;
use fivefold::lattice::minkowski;
use fivefold::testfields::{random_contorsion_form, smooth_adjoint_form, smooth_contorsion_form};

use super::SuiteChecks;
use crate::config::Settings;
use crate::report::Check;

fn x(a: f64, b: f64) -> [f64; 4] {
    [a, b, 0.3 * (a * b).sin(), 0.2 * a * a - 0.1 * b]
}

fn jx(a: f64, b: f64) -> Vec<[f64; 4]> {
    vec![
        [1.0, 0.0, 0.3 * b * (a * b).cos(), 0.4 * a],
        [0.0, 1.0, 0.3 * a * (a * b).cos(), -0.1],
    ]
}

/// The same curved 2-surface under three parametrizations: base, affine and nonlinear.
fn surfaces() -> Vec<ParametrizedSurface<'static, f64>> {
    vec![
        ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], |l| x(l[0], l[1]))
            .expect("valid ranges")
            .with_jacobian(|l| jx(l[0], l[1])),
        ParametrizedSurface::new(vec![(1.0, 3.0), (-1.0, 2.0)], |l| {
            x((l[0] - 1.0) / 2.0, (l[1] + 1.0) / 3.0)
        })
        .expect("valid ranges")
        .with_jacobian(|l| {
            let j = jx((l[0] - 1.0) / 2.0, (l[1] + 1.0) / 3.0);
            vec![j[0].map(|v| v / 2.0), j[1].map(|v| v / 3.0)]
        }),
        ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], |l| {
            x(l[0] * l[0], l[1].powi(3))
        })
        .expect("valid ranges")
        .with_jacobian(|l| {
            let j = jx(l[0] * l[0], l[1].powi(3));
            vec![
                j[0].map(|v| v * 2.0 * l[0]),
                j[1].map(|v| v * 3.0 * l[1] * l[1]),
            ]
        }),
    ]
}

const BOX: [(f64, f64); 4] = [(0.0, 1.0), (-0.5, 0.5), (0.0, 0.8), (0.2, 1.0)];

pub(crate) fn adjoint_integration(s: &Settings, sc: &mut SuiteChecks) {
    let seed = s.seed;
    sc.run(|| {
        let sg = smooth_contorsion_form(seed + 2, 0.4);
        let n = smooth_adjoint_form(2, seed + 4);
        let surf = surfaces();
        let a = integral_first_kind(&n, &surf[0], &sg, 16).expect("rank 2 on a 2-surface");
        let b = integral_first_kind(&n, &surf[1], &sg, 16).expect("rank 2 on a 2-surface");
        Check::at_most(
            "reparametrization-affine",
            "first-kind integral is unchanged by an affine reparametrization",
            (a - b).abs(),
            1e-10,
        )
    });
    sc.run(|| {
        let sg = smooth_contorsion_form(seed + 2, 0.4);
        let n = smooth_adjoint_form(2, seed + 4);
        let surf = surfaces();
        let study = Refinement::run(&[8, 16, 32], |c| {
            (integral_first_kind(&n, &surf[0], &sg, c).expect("rank 2")
                - integral_first_kind(&n, &surf[2], &sg, c).expect("rank 2"))
            .abs()
        });
        Check::converges(
            "reparametrization-nonlinear",
            "first-kind integral under a nonlinear reparametrization (midpoint cells per axis)",
            study,
            1.9,
        )
    });
    sc.run(|| {
        let mut worst = 0.0f64;
        for m in 1..=3usize {
            let sg = smooth_contorsion_form(seed + 10 + m as u64, 0.5);
            let n = smooth_adjoint_form(m, seed + 20 + m as u64);
            let surf = ParametrizedSurface::new(vec![(0.0, 1.0); m], move |l| {
                let mut x = [0.1, 0.2, 0.3, 0.4];
                for (k, v) in l.iter().enumerate() {
                    x[k] += v;
                    x[(k + 1) % 4] += 0.3 * v * v;
                }
                x
            })
            .expect("valid ranges");
            let a = integral_first_kind(&n, &surf, &sg, 5).expect("matching rank");
            let b = five_form_integral_first_kind(&n, &surf, &sg, 5).expect("matching rank");
            worst = worst.max((a - b).abs() / (1.0 + a.abs()));
        }
        Check::at_most(
            "duality-first-kind",
            "adjoint form and dual five-vector form give the same first-kind integrals",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let mut worst = 0.0f64;
        for m in 1..=2usize {
            let sg = smooth_contorsion_form(seed + 30 + m as u64, 0.5);
            let n = smooth_adjoint_form(m + 1, seed + 40 + m as u64);
            let surf = ParametrizedSurface::new(vec![(0.0, 1.0); m], move |l| {
                let mut x = [0.0; 4];
                for (k, v) in l.iter().enumerate() {
                    x[k] += v;
                    x[3] += 0.5 * v * v;
                }
                x
            })
            .expect("valid ranges");
            let flat = |_| minkowski();
            let curved = |x: [f64; 4]| {
                let c = 1.0 + 0.3 * x[0].sin();
                minkowski::<f64>().map(|r| r.map(|v| v * c))
            };
            let one = |_| unit_five();
            let a = integral_second_kind(&n, &surf, &sg, &flat, &one, 6).expect("matching rank");
            let b = five_form_integral_second_kind(&n, &surf, &sg, &flat, &one, 6)
                .expect("matching rank");
            let c = integral_second_kind(&n, &surf, &sg, &curved, &one, 6).expect("matching rank");
            worst = worst
                .max((a - b).abs() / (1.0 + a.abs()))
                .max((a - c).abs() / (1.0 + a.abs()));
        }
        Check::at_most(
            "duality-second-kind",
            "second-kind integrals agree between both paths and across metrics",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let n = fivefold::testfields::random_adjoint_form(3, seed + 9);
        let mut ff = s.factory(9);
        let sg = random_contorsion_form(ff.rng(), 0.6);
        let rep = stokes_residual(&|_| n.clone(), &|_| sg, BOX, 3).expect("rank 3");
        Check::at_most(
            "stokes-constant",
            "Stokes decomposition balances for constant fields",
            rep.residual().abs(),
            1e-10,
        )
    });
    sc.run(|| {
        let sg = smooth_contorsion_form(seed + 50, 0.5);
        let n = smooth_adjoint_form(3, seed + 60);
        let study = Refinement::run(&[2, 4, 8], |c| {
            stokes_residual(&n, &sg, BOX, c)
                .expect("rank 3")
                .residual()
                .abs()
        });
        Check::converges(
            "stokes-varying",
            "boundary integral equals the two volume terms (midpoint cells per axis)",
            study,
            1.9,
        )
    });
}
