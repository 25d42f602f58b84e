use fivefold::adjoint::*;
use fivefold::algebra::{AdjointArray, Bivector5};
use fivefold::connections::{sigma_map, ContorsionForm};
use fivefold::convergence::Refinement;
use fivefold::lattice::minkowski;
use fivefold::testfields::*;
use fivefold::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn single_torsion(c: f64) -> ContorsionForm<f64> {
    let mut s = ContorsionForm::zero();
    s.s4.0[0][1][2] = c;
    s.s4.0[1][0][2] = -c;
    s
}

fn line(u: [f64; 4]) -> ParametrizedSurface<'static, f64> {
    ParametrizedSurface::new(vec![(0.0, 1.0)], move |l| u.map(|v| v * l[0]))
        .unwrap()
        .with_jacobian(move |_| vec![u])
}

#[test]
fn tangent_without_torsion_is_ordinary() {
    let u = [1.0, 0.3, -0.2, 0.5];
    let a = adjoint_tangent(&line(u), &|_| ContorsionForm::zero(), &|_| minkowski(), 0.5).unwrap();
    let (e, z) = a.split();
    assert_eq!(e, u);
    assert!(z.iter().flatten().all(|&v| v == 0.0));
}

#[test]
fn tangent_single_torsion_component() {
    let c = 0.37;
    let a = adjoint_tangent(
        &line([0.0, 0.0, 1.0, 0.0]),
        &|_| single_torsion(c),
        &|_| minkowski(),
        0.2,
    )
    .unwrap();
    assert_eq!(a.get(0, 1), c);
    assert_eq!(a.get(1, 0), -c);
    assert_eq!(a.e_part(), [0.0, 0.0, 1.0, 0.0]);
    let z = a.z_only();
    assert_eq!(z.max_abs(), c);
}

#[test]
fn tangent_is_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = random_contorsion_form(&mut rng, 0.5);
    let u = [0.4, 1.0, -0.3, 0.2];
    let a1 = adjoint_tangent(&line(u), &|_| s, &|_| minkowski(), 0.5).unwrap();
    let a2 = adjoint_tangent(&line(u.map(|v| 2.0 * v)), &|_| s, &|_| minkowski(), 0.25).unwrap();
    assert!((a2 - a1 * 2.0).max_abs() < 1e-14);
}

#[test]
fn tangent_errors() {
    let s = |_| ContorsionForm::zero();
    let g = |_| minkowski();
    assert!(matches!(
        adjoint_tangent(&line([0.0; 4]), &s, &g, 0.5),
        Err(Error::Precondition(_))
    ));
    let patch =
        ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], |l| [l[0], l[1], 0.0, 0.0]).unwrap();
    assert!(matches!(
        adjoint_tangent(&patch, &s, &g, 0.5),
        Err(Error::Shape(_))
    ));
    assert!(ParametrizedSurface::<f64>::new(vec![(1.0, 0.0)], |_| [0.0; 4]).is_err());
    assert!(ParametrizedSurface::<f64>::new(vec![], |_| [0.0; 4]).is_err());
}

#[test]
fn zero_form_integrates_to_zero() {
    let s = smooth_contorsion_form(1, 0.3);
    let surf = ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 2.0)], |l| {
        [l[0], l[1], l[0] * l[1], 0.0]
    })
    .unwrap();
    let v = integral_first_kind(&|_| AdjointArray::zeros(2), &surf, &s, 8).unwrap();
    assert_eq!(v, 0.0);
    let v2 = integral_second_kind(
        &|_| AdjointArray::zeros(3),
        &surf,
        &s,
        &|_| minkowski(),
        &|_| unit_five(),
        8,
    )
    .unwrap();
    assert_eq!(v2, 0.0);
}

#[test]
fn rank_mismatch_rejected() {
    let s = smooth_contorsion_form(1, 0.3);
    let n = smooth_adjoint_form(2, 3);
    let curve = line([1.0, 0.0, 0.0, 0.0]);
    assert!(matches!(
        integral_first_kind(&n, &curve, &s, 4),
        Err(Error::Shape(_))
    ));
    assert!(matches!(
        integral_second_kind(
            &n,
            &ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], |l| [l[0], l[1], 0.0, 0.0])
                .unwrap(),
            &s,
            &|_| minkowski(),
            &|_| unit_five(),
            4
        ),
        Err(Error::Shape(_))
    ));
}

/// A curved 2-surface under three parametrizations: the base one, an affine one and a
/// nonlinear one.
fn surfaces() -> Vec<ParametrizedSurface<'static, f64>> {
    let x = |a: f64, b: f64| [a, b, 0.3 * (a * b).sin(), 0.2 * a * a - 0.1 * b];
    let jx = |a: f64, b: f64| {
        vec![
            [1.0, 0.0, 0.3 * b * (a * b).cos(), 0.4 * a],
            [0.0, 1.0, 0.3 * a * (a * b).cos(), -0.1],
        ]
    };
    vec![
        ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], move |l| x(l[0], l[1]))
            .unwrap()
            .with_jacobian(move |l| jx(l[0], l[1])),
        ParametrizedSurface::new(vec![(1.0, 3.0), (-1.0, 2.0)], move |l| {
            x((l[0] - 1.0) / 2.0, (l[1] + 1.0) / 3.0)
        })
        .unwrap()
        .with_jacobian(move |l| {
            let j = jx((l[0] - 1.0) / 2.0, (l[1] + 1.0) / 3.0);
            vec![j[0].map(|v| v / 2.0), j[1].map(|v| v / 3.0)]
        }),
        ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], move |l| {
            x(l[0] * l[0], l[1].powi(3))
        })
        .unwrap()
        .with_jacobian(move |l| {
            let j = jx(l[0] * l[0], l[1].powi(3));
            vec![
                j[0].map(|v| v * 2.0 * l[0]),
                j[1].map(|v| v * 3.0 * l[1] * l[1]),
            ]
        }),
    ]
}

#[test]
fn first_kind_affine_reparametrization_exact() {
    let s = smooth_contorsion_form(2, 0.4);
    let n = smooth_adjoint_form(2, 4);
    let surf = surfaces();
    let a = integral_first_kind(&n, &surf[0], &s, 16).unwrap();
    let b = integral_first_kind(&n, &surf[1], &s, 16).unwrap();
    assert!(a.abs() > 1e-3);
    assert!((a - b).abs() < 1e-10, "{a} {b}");
}

#[test]
fn first_kind_nonlinear_reparametrization_converges() {
    let s = smooth_contorsion_form(2, 0.4);
    let n = smooth_adjoint_form(2, 4);
    let surf = surfaces();
    let r = Refinement::run(&[8, 16, 32], |c| {
        (integral_first_kind(&n, &surf[0], &s, c).unwrap()
            - integral_first_kind(&n, &surf[2], &s, c).unwrap())
        .abs()
    });
    assert!(r.converges(1.8), "{:?}", r.residuals);
}

#[test]
fn sampled_tangents_match_analytic() {
    let s = smooth_contorsion_form(2, 0.4);
    let n = smooth_adjoint_form(2, 4);
    let surf = surfaces();
    let sampled = ParametrizedSurface::new(vec![(0.0, 1.0), (0.0, 1.0)], |l: &[f64]| {
        [
            l[0],
            l[1],
            0.3 * (l[0] * l[1]).sin(),
            0.2 * l[0] * l[0] - 0.1 * l[1],
        ]
    })
    .unwrap();
    let a = integral_first_kind(&n, &surf[0], &s, 8).unwrap();
    let b = integral_first_kind(&n, &sampled, &s, 8).unwrap();
    assert!((a - b).abs() < 1e-8, "{a} {b}");
}

#[test]
fn first_kind_duality() {
    for m in 1..=3 {
        let s = smooth_contorsion_form(10 + m as u64, 0.5);
        let n = smooth_adjoint_form(m, 20 + m as u64);
        let surf = ParametrizedSurface::new(vec![(0.0, 1.0); m], move |l| {
            let mut x = [0.1, 0.2, 0.3, 0.4];
            for (k, v) in l.iter().enumerate() {
                x[k] += v;
                x[(k + 1) % 4] += 0.3 * v * v;
            }
            x
        })
        .unwrap();
        let a = integral_first_kind(&n, &surf, &s, 5).unwrap();
        let b = five_form_integral_first_kind(&n, &surf, &s, 5).unwrap();
        assert!(a.abs() > 1e-4);
        assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "m={m}: {a} {b}");
    }
}

#[test]
fn second_kind_duality_and_metric_independence() {
    for m in 1..=2 {
        let s = smooth_contorsion_form(30 + m as u64, 0.5);
        let n = smooth_adjoint_form(m + 1, 40 + m as u64);
        let surf = ParametrizedSurface::new(vec![(0.0, 1.0); m], move |l| {
            let mut x = [0.0; 4];
            for (k, v) in l.iter().enumerate() {
                x[k] += v;
                x[3] += 0.5 * v * v;
            }
            x
        })
        .unwrap();
        let flat = |_| minkowski();
        let curved = |x: [f64; 4]| {
            let mut g = minkowski();
            let c = 1.0 + 0.3 * x[0].sin();
            for r in g.iter_mut() {
                for v in r.iter_mut() {
                    *v *= c;
                }
            }
            g
        };
        let one = |_| unit_five();
        let a = integral_second_kind(&n, &surf, &s, &flat, &one, 6).unwrap();
        let b = five_form_integral_second_kind(&n, &surf, &s, &flat, &one, 6).unwrap();
        let c = integral_second_kind(&n, &surf, &s, &curved, &one, 6).unwrap();
        assert!(a.abs() > 1e-4);
        assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{a} {b}");
        assert!((a - c).abs() < 1e-12 * (1.0 + a.abs()), "{a} {c}");
    }
}

#[test]
fn second_kind_needs_nonzero_sigma_one() {
    let n = smooth_adjoint_form(2, 1);
    let curve = line([1.0, 0.5, 0.0, 0.0]);
    // torsion without a fifth-slot block leaves σ(e_5) = 0
    let s = |_| single_torsion(0.3);
    assert!(matches!(
        integral_second_kind(&n, &curve, &s, &|_| minkowski(), &|_| unit_five(), 4),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        five_form_integral_second_kind(&n, &curve, &s, &|_| minkowski(), &|_| unit_five(), 4),
        Err(Error::Precondition(_))
    ));
    let mut with5 = single_torsion(0.3);
    with5.s5[1][2] = 0.2;
    with5.s5[2][1] = -0.2;
    assert!(integral_second_kind(
        &n,
        &curve,
        &|_| with5,
        &|_| minkowski(),
        &|_| unit_five(),
        4
    )
    .is_ok());
}

const BOX: [(f64, f64); 4] = [(0.0, 1.0), (-0.5, 0.5), (0.0, 0.8), (0.2, 1.0)];

#[test]
fn stokes_trivial() {
    let n = random_adjoint_form(3, 9);
    let rep = stokes_residual(&|_| n.clone(), &|_| ContorsionForm::zero(), BOX, 3).unwrap();
    assert!(rep.boundary.abs() < 1e-12);
    assert_eq!(rep.product_term, 0.0);
    assert_eq!(rep.derivative_term, 0.0);
}

#[test]
fn stokes_constant_torsion_balances() {
    let n = random_adjoint_form(3, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_contorsion_form(&mut rng, 0.6);
    let rep = stokes_residual(&|_| n.clone(), &|_| s, BOX, 3).unwrap();
    assert!(rep.residual().abs() < 1e-10, "{rep:?}");
    assert!(rep.product_term.abs() < 1e-12);
}

#[test]
fn stokes_varying_fields_converge() {
    let s = smooth_contorsion_form(50, 0.5);
    let n = smooth_adjoint_form(3, 60);
    let reps: Vec<StokesReport<f64>> = [2, 4, 8]
        .iter()
        .map(|&c| stokes_residual(&n, &s, BOX, c).unwrap())
        .collect();
    assert!(reps[2].product_term.abs() > 1e-3);
    assert!(reps[2].derivative_term.abs() > 1e-3);
    let r = Refinement {
        levels: vec![2, 4, 8],
        residuals: reps.iter().map(|r| r.residual().abs()).collect(),
    };
    assert!(r.converges(1.8), "{:?}", r.residuals);
}

#[test]
fn adjoint_array_validation() {
    assert!(matches!(
        AdjointArray::<f64>::from_data(2, vec![0.0; 10]),
        Err(Error::Shape(_))
    ));
    let mut d = vec![0.0; 100];
    d[1] = 1.0;
    assert!(matches!(
        AdjointArray::from_data(2, d.clone()),
        Err(Error::Precondition(_))
    ));
    d[10] = -1.0;
    assert!(AdjointArray::from_data(2, d).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_of_nonzero_z_vector_never_vanishes(seed in 0u64..10_000, u in prop::array::uniform4(-1.0f64..1.0)) {
        prop_assume!(u.iter().any(|v| v.abs() > 1e-6));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_contorsion_form(&mut rng, 5.0);
        let b: Bivector5<f64> = sigma_map(&s, &[u[0], u[1], u[2], u[3], 0.0]);
        prop_assert!(b.max_abs() > 0.0);
        prop_assert_eq!(b.e_part(), u);
    }

    #[test]
    fn wedge_pairing_is_multilinear(seed in 0u64..1000, c in -3.0f64..3.0) {
        let s = smooth_contorsion_form(seed, 0.4);
        let n = smooth_adjoint_form(1, seed + 1);
        let curve = line([0.3, 1.0, -0.2, 0.1]);
        let a = integral_first_kind(&n, &curve, &s, 4).unwrap();
        let scaled = move |x| n(x).scaled(c);
        let b = integral_first_kind(&scaled, &curve, &s, 4).unwrap();
        prop_assert!((b - c * a).abs() < 1e-12 * (1.0 + a.abs()));
    }
}
