use fivefold::algebra::{adj_index, E_SLOTS};
use fivefold::connections::*;
use fivefold::convergence::Refinement;
use fivefold::curvature::Triple;
use fivefold::gauge::*;
use fivefold::lattice::*;
use fivefold::testfields::*;
use fivefold::Error;

const AXES: [bool; 4] = [true, true, false, false];

fn curved(grid: &Grid4<f64>) -> Geometry<f64> {
    let m = MetricPreset::Conformal {
        amplitude: 0.1,
        wave: [1.0, 1.0, 0.0, 0.0],
    };
    Geometry::new(m.sample(grid).unwrap())
}

fn flat(grid: &Grid4<f64>) -> Geometry<f64> {
    Geometry::new(MetricPreset::Flat.sample(grid).unwrap())
}

/// Smooth random `C` with an optional mask on the adjoint slots.
fn random_gauge(
    grid: &Grid4<f64>,
    n: usize,
    seed: u64,
    amp: f64,
    keep: impl Fn(usize) -> bool,
) -> GaugeConnection<f64> {
    let mut ff = FieldFactory::new(seed, AXES);
    let polys = ff.polys::<f64>(n * n * 10, amp);
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

/// `Λ = e^φ R(θ) + ε S` with smooth `φ, θ` and a small symmetric `S`.
fn random_lambda(grid: &Grid4<f64>, n: usize, seed: u64) -> Field<f64> {
    let mut ff = FieldFactory::new(seed, AXES);
    let ps = ff.polys::<f64>(5, 0.4);
    Field::from_fn(
        grid,
        &[IndexKind::Bundle(n), IndexKind::Bundle(n)],
        |x, out| {
            let phi = ps[0].eval(x);
            if n == 1 {
                out[0] = phi.exp();
                return;
            }
            let th = ps[1].eval(x);
            let (s, c) = th.sin_cos();
            let e = phi.exp();
            let sym = [ps[2].eval(x), ps[3].eval(x), ps[4].eval(x)];
            out[0] = e * c + 0.2 * sym[0];
            out[1] = -e * s + 0.2 * sym[1];
            out[2] = e * s + 0.2 * sym[1];
            out[3] = e * c + 0.2 * sym[2];
        },
    )
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn derivative_of_constant_field_without_gauge_fields_vanishes() {
    let grid = Grid4::<f64>::torus([6, 5, 5, 5]).unwrap();
    let c = GaugeConnection::zeros(&grid, 2);
    let u = Field::from_fn(&grid, &[IndexKind::Bundle(2)], |_, o| {
        o[0] = 1.5;
        o[1] = -0.5;
    });
    let mut ff = FieldFactory::new(3, AXES);
    let a = bivector_field(&grid, &ff.polys::<f64>(10, 1.0));
    let d = gauge_bivector_derivative(&u, &a, &c).unwrap();
    assert_eq!(d.max_abs(), 0.0);
}

#[test]
fn derivative_along_basis_bivectors() {
    let grid = Grid4::<f64>::torus([8, 8, 5, 5]).unwrap();
    let c = random_gauge(&grid, 2, 11, 0.5, |_| true);
    let mut ff = FieldFactory::new(12, AXES);
    let up = ff.polys::<f64>(2, 1.0);
    let u = sample(&grid, &[IndexKind::Bundle(2)], &up);
    let du = gradient(&u);
    for k in 0..10 {
        let a = Field::from_fn(&grid, &[IndexKind::Adjoint], |_, o| o[k] = 1.0);
        let d = gauge_bivector_derivative(&u, &a, &c).unwrap();
        let e_dir = E_SLOTS.iter().position(|&s| s == k);
        for p in 0..grid.len() {
            let cm = &c.at(p)[k];
            let uu = u.at(p);
            for i in 0..2 {
                let mut expect = cm[i * 2] * uu[0] + cm[i * 2 + 1] * uu[1];
                if let Some(mu) = e_dir {
                    expect += du[mu].at(p)[i];
                }
                assert!((d.at(p)[i] - expect).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn derivative_rejects_mismatched_dimensions() {
    let grid = Grid4::<f64>::torus([5, 5, 5, 5]).unwrap();
    let c = GaugeConnection::zeros(&grid, 2);
    let u = Field::zeros(&grid, &[IndexKind::Bundle(3)]);
    let a = Field::zeros(&grid, &[IndexKind::Adjoint]);
    assert!(matches!(
        gauge_bivector_derivative(&u, &a, &c),
        Err(Error::Shape(_))
    ));
    let bad = Field::zeros(&grid, &[IndexKind::Bundle(2), IndexKind::Adjoint]);
    assert!(GaugeConnection::new(bad, false).is_err());
}

#[test]
fn antihermitian_flag_is_enforced() {
    let grid = Grid4::<f64>::torus([5, 5, 5, 5]).unwrap();
    let c = random_gauge(&grid, 2, 5, 1.0, |_| true);
    assert!(matches!(
        GaugeConnection::new(c.field().clone(), true),
        Err(Error::Precondition(_))
    ));
    let mut f = c.field().clone();
    for p in 0..grid.len() {
        let v = f.at_mut(p);
        for a in 0..10 {
            let (x, y) = (v[10 + a], v[20 + a]);
            v[a] = 0.0;
            v[30 + a] = 0.0;
            v[10 + a] = 0.5 * (x - y);
            v[20 + a] = -0.5 * (x - y);
        }
    }
    assert!(GaugeConnection::new(f, true).is_ok());
}

#[test]
fn identity_transformation_changes_nothing() {
    let grid = Grid4::<f64>::torus([6, 6, 5, 5]).unwrap();
    let c = random_gauge(&grid, 2, 1, 1.0, |_| true);
    let id = Field::from_fn(
        &grid,
        &[IndexKind::Bundle(2), IndexKind::Bundle(2)],
        |_, o| {
            o[0] = 1.0;
            o[3] = 1.0;
        },
    );
    let c2 = gauge_transform(&c, &id).unwrap();
    assert!(max_diff(c.field().data(), c2.field().data()) < 1e-15);
}

#[test]
fn singular_transformation_is_rejected() {
    let grid = Grid4::<f64>::torus([5, 5, 5, 5]).unwrap();
    let c = GaugeConnection::zeros(&grid, 2);
    let l = Field::from_fn(
        &grid,
        &[IndexKind::Bundle(2), IndexKind::Bundle(2)],
        |_, o| {
            o.copy_from_slice(&[1.0, 2.0, 2.0, 4.0]);
        },
    );
    assert!(matches!(
        gauge_transform(&c, &l),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn pure_gauge_from_rotation() {
    // Λ = exp(x⁰ J): C′_{05} = J up to the stencil error, every other slot zero
    let study = Refinement::run(&[16, 32, 64], |n| {
        let grid = Grid4::<f64>::torus([n, 5, 5, 5]).unwrap();
        let c = GaugeConnection::zeros(&grid, 2);
        let l = Field::from_fn(
            &grid,
            &[IndexKind::Bundle(2), IndexKind::Bundle(2)],
            |x, o| {
                let (s, c) = x[0].sin_cos();
                o.copy_from_slice(&[c, -s, s, c]);
            },
        );
        let c2 = gauge_transform(&c, &l).unwrap();
        let mut err = 0.0f64;
        for p in 0..grid.len() {
            let m = c2.at(p);
            for (k, mk) in m.iter().enumerate() {
                let expect = if k == E_SLOTS[0] {
                    [0.0, -1.0, 1.0, 0.0]
                } else {
                    [0.0; 4]
                };
                if k != E_SLOTS[0] {
                    assert!(mk.iter().all(|v| v.abs() < 1e-15));
                }
                err = err.max(max_diff(mk, &expect));
            }
        }
        err
    });
    assert!(study.converges(1.9), "{study:?}");
}

#[test]
fn bivector_slots_transform_tensorially() {
    let grid = Grid4::<f64>::torus([8, 8, 5, 5]).unwrap();
    let c = random_gauge(&grid, 2, 21, 1.0, |_| true);
    let l = random_lambda(&grid, 2, 22);
    let c2 = gauge_transform(&c, &l).unwrap();
    for p in 0..grid.len() {
        let li = fivefold::scalar::invert_dyn(l.at(p), 2).unwrap();
        let (a, b) = (c.at(p), c2.at(p));
        for k in 0..10 {
            if E_SLOTS.contains(&k) {
                continue;
            }
            let expect = mat_mul(&mat_mul(&li, &a[k], 2), l.at(p), 2);
            assert!(max_diff(&b[k], &expect) < 1e-13);
        }
    }
}

#[test]
fn five_gauge_fields_without_torsion_are_the_translation_slots() {
    let grid = Grid4::<f64>::torus([6, 6, 5, 5]).unwrap();
    let c = random_gauge(&grid, 2, 31, 1.0, |_| true);
    let b = five_gauge_from_bivector(&c, &ContorsionField::zero(&grid)).unwrap();
    for p in 0..grid.len() {
        let cp = c.at(p);
        let v = b.at(p);
        for i in 0..4 {
            for a in 0..4 {
                assert_eq!(v[i * 5 + a], cp[E_SLOTS[a]][i]);
            }
            assert_eq!(v[i * 5 + 4], 0.0);
        }
    }
}

#[test]
fn five_gauge_fields_ignore_torsion_when_rotation_slots_vanish() {
    let grid = Grid4::<f64>::torus([6, 6, 5, 5]).unwrap();
    let c = random_gauge(&grid, 1, 32, 1.0, |k| E_SLOTS.contains(&k));
    let mut ff = FieldFactory::new(33, AXES);
    let s = contorsion_field(&grid, &ff.polys::<f64>(80, 1.0));
    let b1 = five_gauge_from_bivector(&c, &s).unwrap();
    let b0 = five_gauge_from_bivector(&c, &ContorsionField::zero(&grid)).unwrap();
    assert_eq!(b1.data(), b0.data());
}

#[test]
fn single_rotation_slot_feeds_the_time_component() {
    let c = 0.7;
    let mut s = ContorsionForm::<f64>::zero();
    s.s4.0[1][2][0] = c;
    s.s4.0[2][1][0] = -c;
    let (k12, _) = adj_index(1, 2).unwrap();
    let mut cp: GaugePoint<f64> = std::array::from_fn(|_| vec![0.0]);
    cp[k12] = vec![2.0];
    cp[E_SLOTS[0]] = vec![0.25];
    let b = five_gauge_point(&cp, &s, 1);
    assert!((b[0][0] - (0.25 + c * 2.0)).abs() < 1e-15);
    for a in 1..5 {
        assert_eq!(b[a][0], 0.0);
    }
}

#[test]
fn field_strength_is_antisymmetric_and_matches_closed_form() {
    let grid = Grid4::<f64>::torus([12, 12, 5, 5]).unwrap();
    let geo = curved(&grid);
    let c = random_gauge(&grid, 2, 41, 0.6, |_| true);
    let f = gauge_field_strength(&c, &geo).unwrap();
    assert_eq!(f.antisymmetry_defect(), 0.0);
    let dc = gradient(c.field());
    let mut worst = 0.0f64;
    for p in 0..grid.len() {
        let d: [GaugePoint<f64>; 4] = std::array::from_fn(|s| {
            let v = dc[s].at(p);
            std::array::from_fn(|a| (0..4).map(|i| v[i * 10 + a]).collect())
        });
        let closed = field_strength_closed_form(&c.at(p), &d, &geo.local(p), 2);
        worst = worst.max(max_diff(f.field().at(p), &closed));
    }
    assert!(worst < 1e-12, "closed form mismatch {worst}");
}

#[test]
fn abelian_translation_fields_give_the_ordinary_field_strength() {
    let grid = Grid4::<f64>::torus([10, 10, 5, 5]).unwrap();
    let geo = curved(&grid);
    let c = random_gauge(&grid, 1, 51, 1.0, |k| E_SLOTS.contains(&k));
    let f = gauge_field_strength(&c, &geo).unwrap();
    let dc = gradient(c.field());
    for p in 0..grid.len() {
        for i in 0..10 {
            for j in 0..10 {
                let v = f.block(p, i, j)[0];
                let (ei, ej) = (
                    E_SLOTS.iter().position(|&s| s == i),
                    E_SLOTS.iter().position(|&s| s == j),
                );
                let expect = match (ei, ej) {
                    (Some(k), Some(m)) => dc[k].at(p)[E_SLOTS[m]] - dc[m].at(p)[E_SLOTS[k]],
                    _ => 0.0,
                };
                assert!((v - expect).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn constant_rotation_fields_on_flat_space() {
    let grid = Grid4::<f64>::torus([5, 5, 5, 5]).unwrap();
    let geo = flat(&grid);
    let mut ff = FieldFactory::new(61, [false; 4]);
    let vals: Vec<f64> = (0..10).map(|_| ff.uniform()).collect();
    let c = GaugeConnection::from_fn(&grid, 1, |_| {
        std::array::from_fn(|k| vec![if E_SLOTS.contains(&k) { 0.0 } else { vals[k] }])
    });
    let f = gauge_field_strength(&c, &geo).unwrap();
    let eta = minkowski::<f64>();
    let e = |m: usize, n: usize| -> f64 {
        if m == n {
            0.0
        } else {
            let (k, s) = adj_index(m, n).unwrap();
            vals[k] * s as f64
        }
    };
    for i in 0..10 {
        for j in 0..10 {
            let v = f.block(0, i, j)[0];
            let (ki, li) = fivefold::algebra::ADJ_PAIRS[i];
            let (kj, lj) = fivefold::algebra::ADJ_PAIRS[j];
            let expect = if li == 4 || lj == 4 {
                0.0
            } else {
                let (k, l, m, n) = (ki, li, kj, lj);
                -eta[k][m] * e(l, n) + eta[k][n] * e(l, m) + eta[l][m] * e(k, n)
                    - eta[l][n] * e(k, m)
            };
            assert!((v - expect).abs() < 1e-14, "{i} {j}: {v} vs {expect}");
        }
    }
}

#[test]
fn field_strength_is_gauge_covariant() {
    for n in [1, 2] {
        let study = Refinement::run(&[16, 32, 64], |np| {
            let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
            let geo = curved(&grid);
            let c = random_gauge(&grid, n, 71, 0.5, |_| true);
            let l = random_lambda(&grid, n, 72);
            let c2 = gauge_transform(&c, &l).unwrap();
            let f = gauge_field_strength(&c, &geo).unwrap();
            let f2 = gauge_field_strength(&c2, &geo).unwrap();
            let mut err = 0.0f64;
            for p in 0..grid.len() {
                let li = fivefold::scalar::invert_dyn(l.at(p), n).unwrap();
                for i in 0..10 {
                    for j in 0..10 {
                        let conj = mat_mul(&mat_mul(&li, &f.block(p, i, j), n), l.at(p), n);
                        err = err.max(max_diff(&f2.block(p, i, j), &conj));
                    }
                }
            }
            err
        });
        assert!(study.converges(1.9), "n = {n}: {study:?}");
    }
}

fn triple_fields(grid: &Grid4<f64>, seed: u64, e_only: bool) -> [Field<f64>; 3] {
    let mut ff = FieldFactory::new(seed, AXES);
    std::array::from_fn(|_| {
        let polys = ff.polys::<f64>(10, 0.5);
        let mut f = bivector_field(grid, &polys);
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

#[test]
fn gauge_bianchi_is_trivial_without_gauge_fields() {
    let grid = Grid4::<f64>::torus([6, 6, 5, 5]).unwrap();
    let geo = flat(&grid);
    let c = GaugeConnection::zeros(&grid, 2);
    let f = gauge_field_strength(&c, &geo).unwrap();
    let [a, b, d] = triple_fields(&grid, 81, false);
    let t = Triple {
        a: &a,
        b: &b,
        c: &d,
    };
    let r = gauge_bianchi_residual(&f, &c, &t, &geo, 1.0).unwrap();
    assert_eq!(r.max_abs(), 0.0);
}

#[test]
fn abelian_gauge_bianchi_is_the_classical_identity() {
    // flat space, n = 1, translation slots only: Σ_cyc a^κ b^μ c^ν ∂_κF_{μν}
    let study = Refinement::run(&[16, 32, 64], |np| {
        let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
        let geo = flat(&grid);
        let c = random_gauge(&grid, 1, 91, 0.5, |k| E_SLOTS.contains(&k));
        let f = gauge_field_strength(&c, &geo).unwrap();
        let [a, b, d] = triple_fields(&grid, 92, true);
        let t = Triple {
            a: &a,
            b: &b,
            c: &d,
        };
        gauge_bianchi_residual(&f, &c, &t, &geo, 1.0)
            .unwrap()
            .max_abs()
    });
    assert!(study.converges(1.9), "{study:?}");
}

#[test]
fn nonabelian_gauge_bianchi_converges_on_curved_space() {
    let study = Refinement::run(&[16, 32, 64], |np| {
        let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
        let geo = curved(&grid);
        let c = random_gauge(&grid, 2, 101, 0.5, |_| true);
        let f = gauge_field_strength(&c, &geo).unwrap();
        let [a, b, d] = triple_fields(&grid, 102, false);
        let t = Triple {
            a: &a,
            b: &b,
            c: &d,
        };
        gauge_bianchi_residual(&f, &c, &t, &geo, 1.0)
            .unwrap()
            .max_abs()
    });
    assert!(study.converges(1.9), "{study:?}");
}

#[test]
fn gauge_bianchi_needs_the_defect_term() {
    let run = |sign: f64| {
        Refinement::run(&[16, 32, 64], |np| {
            let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
            let geo = curved(&grid);
            let c = random_gauge(&grid, 2, 101, 0.5, |_| true);
            let f = gauge_field_strength(&c, &geo).unwrap();
            let [a, b, d] = triple_fields(&grid, 102, false);
            let t = Triple {
                a: &a,
                b: &b,
                c: &d,
            };
            gauge_bianchi_residual(&f, &c, &t, &geo, sign)
                .unwrap()
                .max_abs()
        })
    };
    let without = run(0.0);
    let flipped = run(-1.0);
    assert!(!without.converges(1.0), "{without:?}");
    assert!(!flipped.converges(1.0), "{flipped:?}");
}

fn five_gauge(grid: &Grid4<f64>, n: usize, seed: u64) -> Field<f64> {
    let c = random_gauge(grid, n, seed, 0.5, |_| true);
    let mut ff = FieldFactory::new(seed + 1, AXES);
    let s = contorsion_field(grid, &ff.polys::<f64>(80, 0.3));
    five_gauge_from_bivector(&c, &s).unwrap()
}

#[test]
fn pure_gauge_has_vanishing_five_field_strength() {
    let study = Refinement::run(&[16, 32, 64], |np| {
        let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
        let l = random_lambda(&grid, 2, 111);
        let c = gauge_transform(&GaugeConnection::zeros(&grid, 2), &l).unwrap();
        let b = five_gauge_from_bivector(&c, &ContorsionField::zero(&grid)).unwrap();
        let f = five_field_strength(&b).unwrap();
        let d = df_zero_check(&b).unwrap();
        f.max_abs().max(d.max_abs())
    });
    assert!(study.converges(1.9), "{study:?}");
}

#[test]
fn abelian_df_vanishes_with_torsion() {
    let study = Refinement::run(&[16, 32, 64], |np| {
        let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
        df_zero_check(&five_gauge(&grid, 1, 121)).unwrap().max_abs()
    });
    assert!(study.converges(1.9), "{study:?}");
}

#[test]
fn nonabelian_df_converges() {
    let study = Refinement::run(&[16, 32, 64], |np| {
        let grid = Grid4::<f64>::torus([np, np, 5, 5]).unwrap();
        df_zero_check(&five_gauge(&grid, 2, 131)).unwrap().max_abs()
    });
    assert!(!study.exact() && study.converges(1.9), "{study:?}");
}
