//! Curvature family closed forms, the commuting-basis theorem, Jacobi and Bianchi.

use fivefold::algebra::{adj_index, m_matrix_4, AdjointIndex, Bivector5, I5};
use fivefold::connections::{bivector_connection_g, GConvention, Geometry};
use fivefold::convergence::Refinement;
use fivefold::curvature::*;
use fivefold::lattice::{minkowski, MetricPreset};
use fivefold::testfields::{bivector_field, reference_riemann};

use super::{reference_conformal, SuiteChecks};
use crate::config::Settings;
use crate::report::Check;

fn idx(k: usize, l: usize) -> usize {
    adj_index(k, l).expect("distinct indices").0
}

fn zz_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|k| (k + 1..4).map(move |l| (k, l)))
}

fn m_pair(k: usize, l: usize, g: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    match adj_index(k, l) {
        None => [[0.0; 4]; 4],
        Some((i, s)) => {
            m_matrix_4(AdjointIndex::new(i).expect("slot"), g).map(|r| r.map(|v| v * s as f64))
        }
    }
}

/// `g_{κμ}M_{λν} − g_{λμ}M_{κν} − g_{κν}M_{λμ} + g_{λν}M_{κμ}`.
fn zz_closed_form(k: usize, l: usize, m: usize, n: usize, g: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let (a, b, c, d) = (
        m_pair(l, n, g),
        m_pair(k, n, g),
        m_pair(l, m, g),
        m_pair(k, m, g),
    );
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            g[k][m] * a[i][j] - g[l][m] * b[i][j] - g[k][n] * c[i][j] + g[l][n] * d[i][j]
        })
    })
}

/// Largest deviation of the 𝒵𝒵 block of `r4` from `scale` times the closed form.
fn zz_deviation(r4: &[[[[f64; 10]; 10]; 4]; 4], scale: f64) -> f64 {
    let eta = minkowski::<f64>();
    let mut worst = 0.0f64;
    for (k, l) in zz_pairs() {
        for (m, n) in zz_pairs() {
            let cf = zz_closed_form(k, l, m, n, &eta);
            for a in 0..4 {
                for b in 0..4 {
                    let v = r4[a][b][idx(k, l)][idx(m, n)];
                    worst = worst.max((v - scale * cf[a][b]).abs());
                }
            }
        }
    }
    worst
}

/// Sampling stride that keeps per-level cost bounded.
const STRIDE: usize = 13;

pub(crate) fn curvature_family(s: &Settings, sc: &mut SuiteChecks) {
    let flat = s.geometry_with(&MetricPreset::Flat, 5.max(s.transverse));
    sc.run(|| {
        let study = Refinement::run(&s.levels, |n| {
            let geo = s.geometry(n);
            let fam = CurvatureFamily::new(&geo, CommutatorConvention::Halved);
            let mut err = 0.0f64;
            for p in (0..geo.grid().len()).step_by(STRIDE) {
                let r = fam.r4_at(p);
                let exact = reference_riemann(&s.metric, geo.grid().coord(p));
                for a in 0..4 {
                    for b in 0..4 {
                        for k in 0..4 {
                            for m in 0..4 {
                                let v = r[a][b][idx(k, I5)][idx(m, I5)];
                                err = err.max((v - exact[a][b][k][m]).abs());
                            }
                        }
                    }
                }
            }
            err
        });
        Check::converges(
            "riemann-block",
            "translation/translation block equals the Riemann tensor",
            study,
            1.9,
        )
    });
    sc.run(|| {
        let geo = s.geometry(s.coarsest());
        let mut worst = 0.0f64;
        for conv in [
            CommutatorConvention::Plain,
            CommutatorConvention::Corrected,
            CommutatorConvention::Halved,
        ] {
            let fam = CurvatureFamily::new(&geo, conv);
            for p in (0..geo.grid().len()).step_by(STRIDE) {
                let r = fam.r4_at(p);
                for a in 0..4 {
                    for b in 0..4 {
                        for k in 0..4 {
                            for (m, n) in zz_pairs() {
                                worst = worst.max(r[a][b][idx(k, I5)][idx(m, n)].abs());
                                worst = worst.max(r[a][b][idx(m, n)][idx(k, I5)].abs());
                            }
                        }
                    }
                }
            }
        }
        Check::at_most(
            "mixed-block-zero",
            "translation/rotation block vanishes",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let r4 = CurvatureFamily::new(&flat, s.printed_zz_block).r4_at(0);
        Check::at_most(
            "printed-zz-block",
            "rotation/rotation block equals the generator commutator closed form",
            zz_deviation(&r4, 1.0),
            1e-12,
        )
    });
    sc.run(|| {
        let local = flat.local(0);
        let gt = bivector_connection_g(&local, GConvention::WithTranslation);
        let r5 = curvature_from_g(
            &gt,
            &[[[[0.0; 5]; 5]; 10]; 4],
            &[[Bivector5([0.0; 10]); 10]; 10],
        );
        let r4 = std::array::from_fn(|a| std::array::from_fn(|b| r5[a][b]));
        Check::at_most(
            "zz-block-without-bracket",
            "rotation/rotation block of the operator commutator without bracket term",
            zz_deviation(&r4, 1.0),
            1e-12,
        )
    });
    sc.run(|| {
        let r4 = CurvatureFamily::new(&flat, CommutatorConvention::Plain).r4_at(0);
        Check::at_most(
            "plain-zz-block",
            "plain commutator flips the sign of the rotation/rotation block",
            zz_deviation(&r4, -1.0),
            1e-12,
        )
    });
    sc.run(|| {
        let r4 = CurvatureFamily::new(&flat, CommutatorConvention::Halved).r4_at(0);
        Check::at_most(
            "halved-zz-block-flat",
            "halved commutator: rotation/rotation block vanishes",
            zz_deviation(&r4, 0.0),
            0.0,
        )
    });
    sc.run(|| {
        let study = Refinement::run(&s.levels, |n| {
            let geo = s.geometry(n);
            let fam = CurvatureFamily::new(&geo, CommutatorConvention::Halved);
            let mut err = 0.0f64;
            for p in (0..geo.grid().len()).step_by(STRIDE) {
                let r = fam.r4_at(p);
                for a in 0..4 {
                    for b in 0..4 {
                        for (k, l) in zz_pairs() {
                            for (m, n) in zz_pairs() {
                                err = err.max(r[a][b][idx(k, l)][idx(m, n)].abs());
                            }
                        }
                    }
                }
            }
            err
        });
        Check::converges(
            "halved-zz-block",
            "halved commutator: rotation/rotation block vanishes on the configured metric",
            study,
            1.9,
        )
    });
    sc.run(|| {
        let r = CurvatureFamily::new(&flat, CommutatorConvention::Halved).r5_at(0);
        let mut worst = 0.0f64;
        for b in 0..4 {
            for k in 0..4 {
                for m in 0..4 {
                    worst = worst.max(r[I5][b][idx(k, I5)][idx(m, I5)].abs());
                }
            }
        }
        Check::at_most(
            "fifth-row-translation-block",
            "fifth row of the five-vector curvature, translation/translation block vanishes",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let r = CurvatureFamily::new(&flat, CommutatorConvention::Halved).r5_at(0);
        let g = minkowski::<f64>();
        let mut worst = 0.0f64;
        for b in 0..4 {
            for k in 0..4 {
                for (m, n) in zz_pairs() {
                    let want = g[k][m] * g[n][b] - g[k][n] * g[m][b];
                    worst = worst.max((r[I5][b][idx(k, I5)][idx(m, n)] - want).abs());
                }
            }
        }
        Check::at_most(
            "fifth-row-metric-block",
            "fifth row of the five-vector curvature, mixed block equals products of metrics",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let grid = flat.grid();
        // boost along x¹ composed with a rotation in the (x², x³) plane
        let (ch, sh) = (0.3f64.cosh(), 0.3f64.sinh());
        let (c, sn) = (0.7f64.cos(), 0.7f64.sin());
        let boost = [
            [ch, sh, 0.0, 0.0],
            [sh, ch, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let rot = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, c, -sn],
            [0.0, 0.0, sn, c],
        ];
        let lam = fivefold::algebra::matmul(&boost, &rot);
        let mut worst = 0.0f64;
        for basis in [coordinate_basis(grid), transformed_basis(grid, &lam)] {
            let rep = flatness_commuting_basis_check(
                &basis,
                &flat,
                CommutatorConvention::Corrected,
                1e-12,
            )
            .expect("ten fields");
            worst = worst.max(rep.max_commutator);
        }
        Check::at_most(
            "commuting-basis-flat",
            "Lorentz-chart basis bivectors commute on flat space",
            worst,
            1e-12,
        )
    });
    sc.run(|| {
        let geo = s.geometry_with(&reference_conformal(), s.coarsest());
        let rep = flatness_commuting_basis_check(
            &coordinate_basis(geo.grid()),
            &geo,
            CommutatorConvention::Corrected,
            1e-12,
        )
        .expect("ten fields");
        Check::above(
            "commuting-basis-curved",
            "the same basis fails to commute on a conformal metric",
            rep.max_commutator,
            1e-3,
        )
    });
}

fn triple(s: &Settings, geo: &Geometry<f64>) -> [fivefold::lattice::Field<f64>; 3] {
    let mut ff = s.factory(7);
    std::array::from_fn(|_| bivector_field(geo.grid(), &ff.polys::<f64>(10, 1.0)))
}

fn jacobi_study(s: &Settings, with_defect: bool) -> Refinement {
    Refinement::run(&s.levels, |n| {
        let geo = s.geometry(n);
        let [a, b, c] = triple(s, &geo);
        let t = Triple {
            a: &a,
            b: &b,
            c: &c,
        };
        jacobi_residual(&t, &geo, s.commutator, with_defect)
            .expect("bivector fields")
            .max_abs()
    })
}

fn bianchi_study(s: &Settings, sign: f64) -> Refinement {
    Refinement::run(&s.levels, |n| {
        let geo = s.geometry(n);
        let [a, b, c] = triple(s, &geo);
        let t = Triple {
            a: &a,
            b: &b,
            c: &c,
        };
        let fam = CurvatureFamily::new(&geo, s.commutator);
        bianchi_residual(&t, &fam, sign)
            .expect("bivector fields")
            .max_abs()
    })
}

pub(crate) fn jacobi_bianchi(s: &Settings, sc: &mut SuiteChecks) {
    sc.run(|| {
        Check::converges(
            "jacobi-with-defect",
            "cyclic double commutator plus the curvature defect vanishes",
            jacobi_study(s, true),
            1.9,
        )
    });
    if s.curved() {
        sc.run(|| {
            Check::stalls(
                "jacobi-without-defect",
                "negative control: cyclic double commutator alone does not vanish",
                jacobi_study(s, false),
                1.9,
            )
        });
    }
    sc.run(|| {
        Check::converges(
            "bianchi-with-defect",
            "Bianchi analog with the defect rotation term",
            bianchi_study(s, 1.0),
            1.9,
        )
    });
    if s.curved() {
        sc.run(|| {
            Check::stalls(
                "bianchi-flipped-defect",
                "negative control: Bianchi analog with the defect term of opposite sign",
                bianchi_study(s, -1.0),
                1.9,
            )
        });
    }
    sc.run(|| {
        let geo = s.geometry_with(&MetricPreset::Flat, s.coarsest());
        let [a, b, c] = triple(s, &geo);
        let t = Triple {
            a: &a,
            b: &b,
            c: &c,
        };
        let fam = CurvatureFamily::new(&geo, s.commutator);
        let r = bianchi_residual(&t, &fam, 1.0).expect("bivector fields");
        Check::at_most(
            "bianchi-flat",
            "Bianchi analog on flat space",
            r.max_abs(),
            1e-12,
        )
    });
}
