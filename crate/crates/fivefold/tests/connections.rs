use fivefold::algebra::*;
use fivefold::connections::*;
use fivefold::lattice::*;
use fivefold::scalar::invert;
use fivefold::testfields::FieldFactory;
use proptest::prelude::*;

fn max_diff(a: &Arr3<f64>, b: &Arr3<f64>) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                m = m.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    m
}

#[test]
fn torsion_contorsion_bijection_on_random_instances() {
    let mut ff = FieldFactory::new(2024, [false; 4]);
    let (mut worst_t, mut worst_s) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let g = ff.lorentzian_metric(0.2);
        let gi = invert(&g).unwrap();
        let t = ff.torsion();
        let back = torsion_from_contorsion(&contorsion_from_torsion(&t, &g, &gi), &g);
        worst_t = worst_t.max(max_diff(&t.0, &back.0));
        let s = ff.contorsion();
        let again = contorsion_from_torsion(&torsion_from_contorsion(&s, &g), &g, &gi);
        worst_s = worst_s.max(max_diff(&s.0, &again.0));
    }
    assert!(worst_t < 1e-12, "{worst_t}");
    assert!(worst_s < 1e-12, "{worst_s}");
}

#[test]
fn contorsion_is_antisymmetric_in_upper_pair() {
    let mut ff = FieldFactory::new(5, [false; 4]);
    let g = ff.lorentzian_metric(0.1);
    let s = contorsion_from_torsion(&ff.torsion(), &g, &invert(&g).unwrap());
    for a in 0..4 {
        for b in 0..4 {
            for m in 0..4 {
                assert!((s.0[a][b][m] + s.0[b][a][m]).abs() < 1e-14);
            }
        }
    }
}

fn g_mats(conv: GConvention) -> [[[f64; 5]; 5]; 10] {
    bivector_connection_g(&Local::flat(), conv)
}

#[test]
fn bivector_coefficients_close_into_poincare_algebra() {
    for kappa in [0.5, 1.0, 3.0] {
        let fg = FiveMetric::poincare(minkowski::<f64>(), kappa);
        let with = g_mats(GConvention::WithTranslation);
        assert!(poincare_algebra_check(&with, &fg) < 1e-12);
        let rot = g_mats(GConvention::RotationOnly);
        assert!(poincare_algebra_check(&rot, &fg) < 1e-12);
        for i in E_SLOTS {
            assert_eq!(rot[i], [[0.0; 5]; 5]);
            assert_ne!(with[i], [[0.0; 5]; 5]);
        }
    }
}

#[test]
fn poincare_check_detects_perturbation_and_nondegenerate_metric() {
    let fg = FiveMetric::poincare(minkowski::<f64>(), 1.0);
    let mut m = g_mats(GConvention::WithTranslation);
    m[E_SLOTS[1]][I5][2] += 1e-3;
    assert!(poincare_algebra_check(&m, &fg) > 1e-4);
    // with g55 = κ² the translations no longer close
    let full = FiveMetric::new(minkowski::<f64>(), 1.0);
    assert!(poincare_algebra_check(&g_mats(GConvention::WithTranslation), &full) > 0.5);
}

#[test]
fn g_table_rotation_block_equals_generators() {
    let local = Local::<f64>::flat();
    let t = bivector_connection_g(&local, GConvention::WithTranslation);
    for a in AdjointIndex::all().filter(|a| !a.is_e()) {
        let m = m_matrix_4(a, &local.g);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t[a.position()][i][j], m[i][j]);
            }
        }
    }
}

#[test]
fn sigma_map_of_spatial_direction_is_its_bivector() {
    let s = ContorsionForm::<f64>::zero();
    for mu in 0..4 {
        let mut u = [0.0; 5];
        u[mu] = 1.0;
        let b = sigma_map(&s, &u);
        assert_eq!(b.0, Bivector5::basis(E_SLOTS[mu]).0);
    }
}

#[test]
fn levi_civita_is_exact_on_flat_and_symmetric() {
    let grid = Grid4::<f64>::torus([8, 8, 5, 5]).unwrap();
    let flat = Geometry::new(MetricPreset::Flat.sample(&grid).unwrap());
    assert_eq!(flat.levi_civita.coeffs.max_abs(), 0.0);
    assert_eq!(flat.riemann.max_abs(), 0.0);
    let geo = Geometry::new(
        MetricPreset::Conformal {
            amplitude: 0.1,
            wave: [1.0, 1.0, 0.0, 0.0],
        }
        .sample(&grid)
        .unwrap(),
    );
    for p in [0, 9, 200] {
        let gam = geo.gamma(p);
        for a in 0..4 {
            for b in 0..4 {
                for m in 0..4 {
                    assert!((gam[a][b][m] - gam[a][m][b]).abs() < 1e-15);
                }
            }
        }
        let r = geo.riemann_at(p);
        for a in 0..4 {
            for b in 0..4 {
                for k in 0..4 {
                    for m in 0..4 {
                        assert!((r[a][b][k][m] + r[a][b][m][k]).abs() < 1e-14);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bijection_holds_for_any_seed(seed in 0u64..u64::MAX, eps in 0.0f64..0.3) {
        let mut ff = FieldFactory::new(seed, [false; 4]);
        let g = ff.lorentzian_metric(eps);
        let gi = invert(&g).unwrap();
        let t = ff.torsion();
        let back = torsion_from_contorsion(&contorsion_from_torsion(&t, &g, &gi), &g);
        prop_assert!(max_diff(&t.0, &back.0) < 1e-12);
    }

    #[test]
    fn adjoint_index_roundtrip(k in 0usize..5, l in 0usize..5) {
        prop_assume!(k != l);
        let (i, s) = adj_index(k, l).unwrap();
        let (a, b) = ADJ_PAIRS[i];
        prop_assert_eq!(if s > 0 { (a, b) } else { (b, a) }, (k, l));
    }
}
