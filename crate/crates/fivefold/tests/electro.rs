use fivefold::convergence::Refinement;
use fivefold::electro::*;
use fivefold::lattice::*;
use fivefold::Error;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

const KAPPA: f64 = 0.7;

fn antisym(rng: &mut ChaCha8Rng, amp: f64) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i + 1..4 {
            let v = rng.gen_range(-amp..amp);
            m[i][j] = v;
            m[j][i] = -v;
        }
    }
    m
}

type Terms = ([[f64; 4]; 4], [[[f64; 4]; 4]; 4], [[f64; 4]; 4]);

fn random_terms(seed: u64) -> Terms {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = antisym(&mut rng, 1.0);
    let de = std::array::from_fn(|_| antisym(&mut rng, 1.0));
    let e = antisym(&mut rng, 1.0);
    (f, de, e)
}

fn inv4(g: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let flat: Vec<f64> = g.iter().flatten().copied().collect();
    let inv = fivefold::scalar::invert_dyn(&flat, 4).unwrap();
    std::array::from_fn(|i| std::array::from_fn(|j| inv[i * 4 + j]))
}

fn perturbed_metric(seed: u64) -> [[f64; 4]; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = minkowski::<f64>();
    for i in 0..4 {
        for j in i..4 {
            let v = rng.gen_range(-0.1..0.1);
            g[i][j] += v;
            if i != j {
                g[j][i] += v;
            }
        }
    }
    g
}

fn invariants_direct(a: f64, b: f64, g: &[[f64; 4]; 4], kappa: f64, seed: u64) -> (f64, f64) {
    let (f, de, e) = random_terms(seed);
    let strength = em_strength_point(&f, &de, &e, g);
    let ginv = inv4(g);
    let (i1, i2) = scalar_invariants(&strength, &five_inverse(&ginv, kappa));
    let q = QuadraticTerms::new(&f, &de, &e, &ginv);
    (a * i1 + b * i2, invariant_expansion(a, b, &q, kappa))
}

#[test]
fn invariant_expansion_flat() {
    for seed in 0..5 {
        let (lhs, rhs) = invariants_direct(0.3, -1.1, &minkowski(), KAPPA, seed);
        assert!(
            (lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()),
            "{lhs} vs {rhs}"
        );
    }
}

#[test]
fn invariant_expansion_curved_metric() {
    for seed in 0..5 {
        let g = perturbed_metric(100 + seed);
        for (a, b) in [(1.0, 0.0), (0.0, 1.0), (0.25, 2.0)] {
            let (lhs, rhs) = invariants_direct(a, b, &g, 1.3, seed);
            assert!(
                (lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()),
                "{lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn strength_pair_antisymmetry() {
    let (f, de, e) = random_terms(3);
    let s = em_strength_point(&f, &de, &e, &minkowski());
    let idx = |k: usize, l: usize, m: usize, n: usize| ((k * 5 + l) * 5 + m) * 5 + n;
    for k in 0..5 {
        for l in 0..5 {
            for m in 0..5 {
                for n in 0..5 {
                    let v = s[idx(k, l, m, n)];
                    assert_eq!(v, -s[idx(l, k, m, n)]);
                    assert_eq!(v, -s[idx(k, l, n, m)]);
                }
            }
        }
    }
    assert_eq!(s[idx(1, 4, 2, 4)], f[1][2]);
    assert_eq!(s[idx(0, 4, 1, 3)], de[0][1][3]);
    assert_eq!(s[idx(1, 3, 0, 4)], -de[0][1][3]);
}

#[test]
fn pipeline_values() {
    let p = lagrangian_coefficients(1).unwrap();
    let r = Rational64::new;
    assert_eq!(p.a, r(1, 16));
    assert_eq!(p.d, r(1, 2));
    assert_eq!(p.epsilon_sq, r(1, 1));
    assert_eq!(p.third_term, r(-1, 1));
    assert_eq!(p.third_term_printed, r(-1, 1));
    assert_eq!(
        p.coefficients,
        [r(-1, 4), r(1, 4), r(-1, 1), r(2, 1), r(-3, 2)]
    );
    let c = p.evaluate(2.0f64);
    assert_eq!(c.as_array(), [-0.25, 0.25, -1.0, 4.0, -6.0]);
    let m = lagrangian_coefficients(-1).unwrap();
    assert_eq!(m.coefficients[3], r(-2, 1));
    assert!(matches!(lagrangian_coefficients(0), Err(Error::Config(_))));
}

#[test]
fn pipeline_reproduces_rescaled_invariants() {
    let p = lagrangian_coefficients(1).unwrap();
    let k: f64 = 1.7;
    let a = k.powi(4) * 0.0625;
    let b = k.powi(4) * 0.5;
    let c = p.evaluate(k);
    let ginv = minkowski::<f64>();
    for seed in 0..4 {
        let (f, de, e) = random_terms(seed);
        let s = 1.0 / k;
        let de_old = de.map(|m| m.map(|r| r.map(|v| v * s)));
        let e_old = e.map(|r| r.map(|v| v * s));
        let lhs = invariant_expansion(a, b, &QuadraticTerms::new(&f, &de_old, &e_old, &ginv), k);
        let rhs = c.density(&QuadraticTerms::new(&f, &de, &e, &ginv));
        assert!(
            (lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()),
            "{lhs} vs {rhs}"
        );
    }
}

fn wave_along_x(branch: Branch, q: f64, pol: [f64; 3]) -> PlaneWave {
    PlaneWave::on_branch(branch, [q, 0.0, 0.0], pol, KAPPA, 0.3).unwrap()
}

#[test]
fn branch_waves_solve_vacuum_equations() {
    let dirs = [[1.0, 0.0, 0.0], [0.3, -1.2, 0.5], [0.0, 0.0, 2.0]];
    let pols = [[0.2, 1.0, -0.4], [1.0, 0.1, 0.7]];
    for b in [Branch::Photon, Branch::Massive, Branch::KaluzaKlein] {
        for q in dirs {
            for pol in pols {
                let w = PlaneWave::on_branch(b, q, pol, KAPPA, 0.0).unwrap();
                assert!(w.residual(KAPPA) < 1e-12, "{b:?} {q:?}");
                let m2 = b.mass_sq_over_kappa_sq() * KAPPA * KAPPA;
                assert!((w.k_sq() - m2).abs() < 1e-12);
                match b {
                    Branch::Photon => {
                        assert!((w.ratio().unwrap() - 2.0 / (3.0 * KAPPA)).abs() < 1e-12)
                    }
                    Branch::Massive => {
                        assert!((w.ratio().unwrap() - 0.25 / KAPPA).abs() < 1e-12)
                    }
                    Branch::KaluzaKlein => {
                        assert!(w.ratio().is_none());
                        assert!(w.c_hat().iter().all(|c| c.abs() < 1e-12));
                    }
                }
            }
        }
    }
}

#[test]
fn off_shell_wave_is_not_a_solution() {
    let mut w = wave_along_x(Branch::Massive, 1.0, [0.0, 1.0, 0.0]);
    w.k[0] *= 1.1;
    assert!(w.residual(KAPPA) > 1e-2);
    let mut p = wave_along_x(Branch::Photon, 1.0, [0.0, 1.0, 0.0]);
    for r in p.e.iter_mut() {
        for v in r.iter_mut() {
            *v *= 1.5;
        }
    }
    assert!(p.residual(KAPPA) > 1e-2);
}

#[test]
fn branch_errors() {
    assert!(PlaneWave::on_branch(Branch::Photon, [0.0; 3], [1.0, 0.0, 0.0], 1.0, 0.0).is_err());
    assert!(
        PlaneWave::on_branch(Branch::Photon, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 1.0, 0.0).is_err()
    );
    assert!(PlaneWave::on_branch(Branch::Massive, [1.0, 0.0, 0.0], [0.0; 3], 1.0, 0.0).is_err());
    assert!(
        PlaneWave::on_branch(Branch::Massive, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 0.0, 0.0).is_err()
    );
    assert_eq!(Branch::from_name("kk").unwrap(), Branch::KaluzaKlein);
    assert!(Branch::from_name("tachyon").is_err());
}

/// Torus whose time and x lengths fit one period of the wave.
fn fitted_grid(w: &PlaneWave, n: usize) -> Grid4<f64> {
    Grid4::periodic_box(
        [n, n, 5, 5],
        [TAU / w.k[0].abs(), TAU / w.k[1].abs(), 1.0, 1.0],
    )
    .unwrap()
}

fn lattice_residual(w: &PlaneWave, n: usize) -> f64 {
    let grid = fitted_grid(w, n);
    let st = EmState::from_waves(&grid, std::slice::from_ref(w), KAPPA).unwrap();
    let (r1, r2) = vacuum_residual(&st);
    r1.max_abs().max(r2.max_abs())
}

#[test]
fn lattice_vacuum_residual_converges() {
    for (b, pol) in [
        (Branch::Photon, [0.0, 1.0, 0.3]),
        (Branch::Massive, [0.4, 1.0, 0.0]),
        (Branch::KaluzaKlein, [0.0, 0.2, 1.0]),
    ] {
        let w = wave_along_x(b, 1.3, pol);
        let r = Refinement::run(&[16, 32, 64], |n| lattice_residual(&w, n));
        assert!(r.converges(1.9), "{b:?}: {:?}", r.residuals);
    }
}

#[test]
fn analytic_field_tensor_matches() {
    let w = wave_along_x(Branch::Massive, 1.0, [0.0, 1.0, 0.0]);
    let r = Refinement::run(&[16, 32, 64], |n| {
        let grid = fitted_grid(&w, n);
        let st = EmState::from_waves(&grid, std::slice::from_ref(&w), KAPPA).unwrap();
        let f = st.field_tensor();
        let mut err = 0.0f64;
        for p in 0..grid.len() {
            let (_, fa, _) = w.fields_at(grid.coord(p));
            for m in 0..4 {
                for nn in 0..4 {
                    err = err.max((f.at(p)[m * 4 + nn] - fa[m][nn]).abs());
                }
            }
        }
        err
    });
    assert!(r.converges(1.9), "{:?}", r.residuals);
}

/// Off-shell wave with the exact residual supplied as a source.
#[test]
fn manufactured_sources_converge() {
    let mut w = wave_along_x(Branch::Massive, 1.0, [0.3, 1.0, 0.0]);
    w.k[0] *= 1.2;
    w.e[0][2] += 0.4;
    w.e[2][0] -= 0.4;
    let (r1, r2) = plane_wave_residual(&w.k, &w.f_hat(), &w.e, KAPPA);
    assert!(r1.iter().chain(r2.iter().flatten()).any(|v| v.abs() > 1e-2));
    let r = Refinement::run(&[16, 32, 64], |n| {
        let grid = fitted_grid(&w, n);
        let st = EmState::from_waves(&grid, std::slice::from_ref(&w), KAPPA).unwrap();
        let phase = |x: [f64; 4]| (0..4).map(|i| w.k[i] * x[i]).sum::<f64>() + w.phase;
        let j1 = Field::from_fn(&grid, &[IndexKind::Four], |x, out| {
            let s = phase(x).sin();
            for b in 0..4 {
                out[b] = -r1[b] * s;
            }
        });
        let j2 = Field::from_fn(&grid, &[IndexKind::Four, IndexKind::Four], |x, out| {
            let c = phase(x).cos();
            for a in 0..4 {
                for b in 0..4 {
                    out[a * 4 + b] = KAPPA * r2[a][b] * c;
                }
            }
        });
        let (s1, s2) = sourced_residual(&st, &j1, &j2).unwrap();
        s1.max_abs().max(s2.max_abs())
    });
    assert!(r.converges(1.9), "{:?}", r.residuals);
}

#[test]
fn symmetric_tensor_source_rejected() {
    let grid = Grid4::torus([5, 5, 5, 5]).unwrap();
    let st = EmState::from_fn(&grid, 1.0, |_| ([0.0; 4], [[0.0; 4]; 4])).unwrap();
    let j1 = Field::zeros(&grid, &[IndexKind::Four]);
    let mut j2 = Field::zeros(&grid, &[IndexKind::Four, IndexKind::Four]);
    j2.at_mut(3)[1] = 1.0;
    j2.at_mut(3)[4] = 1.0;
    assert!(matches!(
        sourced_residual(&st, &j1, &j2),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn state_validation() {
    let grid = Grid4::torus([5, 5, 5, 5]).unwrap();
    let a = Field::zeros(&grid, &[IndexKind::Four]);
    let mut e = Field::zeros(&grid, &[IndexKind::Four, IndexKind::Four]);
    assert!(EmState::new(a.clone(), e.clone(), 0.0).is_err());
    e.at_mut(0)[1] = 1.0;
    assert!(matches!(
        EmState::new(a.clone(), e.clone(), 1.0),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        EmState::new(e.clone(), a, 1.0),
        Err(Error::Shape(_))
    ));
}

#[test]
fn single_precision_lattice_residual() {
    let w = wave_along_x(Branch::Photon, 1.0, [0.0, 1.0, 0.0]);
    let g = fitted_grid(&w, 32);
    let gf = Grid4::<f32>::periodic_box(
        [32, 32, 5, 5],
        [
            g.spacing()[0] as f32 * 32.0,
            g.spacing()[1] as f32 * 32.0,
            1.0,
            1.0,
        ],
    )
    .unwrap();
    let st = EmState::<f32>::from_waves(&gf, &[w], KAPPA as f32).unwrap();
    let (r1, r2) = vacuum_residual(&st);
    assert!(r1.max_abs() < 0.05 && r2.max_abs() < 0.05);
}

#[test]
fn dispersion_spectrum_branches() {
    for dir in [[0.0, 0.0, 1.0], [1.0, 2.0, -0.5]] {
        let d = dispersion_spectrum(dir, 1.0).unwrap();
        let masses: Vec<f64> = d.branches.iter().map(|b| b.mass_sq).collect();
        assert_eq!(masses.len(), 3, "{:?}", d.branches);
        let photon = &d.branches[0];
        assert_eq!(photon.mass_sq, 0.0);
        assert_eq!(photon.multiplicity, 2);
        assert!((photon.ratio.unwrap() - 2.0 / 3.0).abs() < 1e-10);
        let kk = &d.branches[1];
        assert!((kk.mass_sq - 6.0).abs() < 1e-10);
        assert_eq!(kk.multiplicity, 3);
        assert!(kk.ratio.is_none());
        assert!(!kk.longitudinal);
        let massive = &d.branches[2];
        assert!((massive.mass_sq - 10.0).abs() < 1e-10);
        assert_eq!(massive.multiplicity, 3);
        assert!((massive.ratio.unwrap() - 0.25).abs() < 1e-10);
        assert!(massive.longitudinal);
        assert_eq!(d.mode_count(), 8);
    }
}

#[test]
fn dispersion_scales_with_kappa() {
    let d = dispersion_spectrum([0.0, 1.0, 0.0], 2.0).unwrap();
    let masses: Vec<f64> = d.branches.iter().map(|b| b.mass_sq).collect();
    assert!((masses[0]).abs() < 1e-12);
    assert!((masses[1] - 24.0).abs() < 1e-9);
    assert!((masses[2] - 40.0).abs() < 1e-9);
    assert!((d.branches[0].ratio.unwrap() - 1.0 / 3.0).abs() < 1e-10);
    assert!((d.branches[2].ratio.unwrap() - 0.125).abs() < 1e-10);
    let small = dispersion_spectrum([0.0, 1.0, 0.0], 1e-3).unwrap();
    assert!(small.branches.iter().all(|b| b.mass_sq < 1e-4));
}

#[test]
fn dispersion_rejects_bad_input() {
    assert!(matches!(
        dispersion_spectrum([0.0, 0.0, 1.0], 0.0),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        dispersion_spectrum([0.0, 0.0, 1.0], -1.0),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        dispersion_spectrum([0.0; 3], 1.0),
        Err(Error::Config(_))
    ));
}

fn random_superposition(seed: u64) -> Vec<PlaneWave> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::new();
    for b in [Branch::Photon, Branch::Massive, Branch::KaluzaKlein] {
        for _ in 0..2 {
            let q: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let pol: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            v.push(PlaneWave::on_branch(b, q, pol, KAPPA, rng.gen_range(0.0..TAU)).unwrap());
        }
    }
    v
}

#[test]
fn decomposition_recovers_branches() {
    let waves = random_superposition(11);
    let d = mode_decompose(&waves, KAPPA, 1e-10).unwrap();
    assert_eq!(d.photon.len(), 2);
    assert_eq!(d.massive.len(), 2);
    assert_eq!(d.kaluza_klein.len(), 2);
    for (i, b) in [Branch::Photon, Branch::Massive, Branch::KaluzaKlein]
        .iter()
        .enumerate()
    {
        for (j, w) in d.branch(*b).iter().enumerate() {
            assert_eq!(w, &waves[2 * i + j]);
        }
    }
    for w in &d.photon {
        assert!((w.ratio().unwrap() - 2.0 / (3.0 * KAPPA)).abs() < 1e-8);
    }
    for w in &d.massive {
        assert!((w.ratio().unwrap() - 0.25 / KAPPA).abs() < 1e-8);
    }
    assert!(d.c_equation_residual(KAPPA) < 1e-8);
}

#[test]
fn decomposition_merges_equal_covectors() {
    let a = PlaneWave::on_branch(
        Branch::Massive,
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        KAPPA,
        0.0,
    )
    .unwrap();
    let b = PlaneWave::on_branch(
        Branch::Massive,
        [0.0, 0.0, 1.0],
        [0.0, 1.0, 0.0],
        KAPPA,
        0.0,
    )
    .unwrap();
    let d = mode_decompose(&[a, b], KAPPA, 1e-10).unwrap();
    assert_eq!(d.massive.len(), 1);
}

#[test]
fn decomposition_rejects_non_vacuum() {
    let mut w = wave_along_x(Branch::Photon, 1.0, [0.0, 1.0, 0.0]);
    w.e[0][1] += 0.1;
    w.e[1][0] -= 0.1;
    assert!(matches!(
        mode_decompose(&[w], KAPPA, 1e-8),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn evolver_massive_frequency() {
    let kappa = 1.0;
    let w = PlaneWave::on_branch(Branch::Massive, [0.0; 3], [1.0, 0.0, 0.0], kappa, 0.0).unwrap();
    let st = Em1d::from_waves(256, TAU, &[w], kappa).unwrap();
    let dt = 0.005;
    let traj = evolve(&st, dt, 6000, 1).unwrap();
    let sig: Vec<f64> = traj.states.iter().map(|s| s.a[1][0]).collect();
    let om = zero_crossing_frequency(&traj.times, &sig).unwrap();
    assert!((om - 10f64.sqrt()).abs() < 0.01 * 10f64.sqrt(), "{om}");
}

#[test]
fn evolver_kaluza_klein_frequency() {
    let kappa = 1.0;
    let w =
        PlaneWave::on_branch(Branch::KaluzaKlein, [0.0; 3], [1.0, 0.0, 0.0], kappa, 0.0).unwrap();
    let st = Em1d::from_waves(256, TAU, std::slice::from_ref(&w), kappa).unwrap();
    let (p, _) = PAIRS4
        .iter()
        .enumerate()
        .map(|(i, &(m, n))| (i, w.e[m][n].abs()))
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap();
    let traj = evolve(&st, 0.005, 6000, 1).unwrap();
    let sig: Vec<f64> = traj.states.iter().map(|s| s.e[p][0]).collect();
    let om = zero_crossing_frequency(&traj.times, &sig).unwrap();
    assert!((om - 6f64.sqrt()).abs() < 0.01 * 6f64.sqrt(), "{om}");
}

#[test]
fn evolver_photon_speed() {
    let kappa = 1.0;
    let q = 4.0;
    let w =
        PlaneWave::on_branch(Branch::Photon, [0.0, 0.0, q], [1.0, 0.0, 0.0], kappa, 0.0).unwrap();
    let st = Em1d::from_waves(256, TAU, &[w], kappa).unwrap();
    let traj = evolve(&st, 0.01, 800, 4).unwrap();
    let amps: Vec<(f64, f64)> = traj
        .states
        .iter()
        .map(|s| s.fourier_amplitude(&s.a[1], q))
        .collect();
    let om = phase_frequency(&traj.times, &amps).unwrap();
    assert!((om / q - 1.0).abs() < 0.01, "speed {}", om / q);
}

#[test]
fn evolver_energy_drift_second_order() {
    let kappa = 1.0;
    let waves = vec![
        PlaneWave::on_branch(Branch::Photon, [0.0, 0.0, 2.0], [1.0, 0.0, 0.0], kappa, 0.1).unwrap(),
        PlaneWave::on_branch(
            Branch::Massive,
            [0.0, 0.0, 1.0],
            [0.3, 1.0, 0.5],
            kappa,
            0.7,
        )
        .unwrap(),
        PlaneWave::on_branch(
            Branch::KaluzaKlein,
            [0.0, 0.0, -3.0],
            [0.0, 1.0, 0.2],
            kappa,
            1.9,
        )
        .unwrap(),
    ];
    let st = Em1d::from_waves(64, TAU, &waves, kappa).unwrap();
    let drift = |dt: f64| {
        let steps = (4.0 / dt).round() as usize;
        let t = evolve(&st, dt, steps, 1).unwrap();
        let e0 = t.energies[0];
        t.energies.iter().fold(0.0f64, |m, e| m.max((e - e0).abs())) / e0.abs()
    };
    let d1 = drift(0.02);
    let d2 = drift(0.01);
    assert!(d1 < 1e-2, "{d1}");
    let order = (d1 / d2).log2();
    assert!(order > 1.8, "{d1} {d2} order {order}");
}

#[test]
fn evolver_rejects_cfl_violation() {
    let st = Em1d::from_waves(64, TAU, &[], 1.0).unwrap();
    assert!(matches!(
        evolve(&st, 0.2, 10, 1),
        Err(Error::Precondition(_))
    ));
    let w =
        PlaneWave::on_branch(Branch::Photon, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1.0, 0.0).unwrap();
    assert!(Em1d::from_waves(64, TAU, &[w], 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expansion_holds_for_random_coefficients(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0, k in 0.2f64..3.0) {
        let g = perturbed_metric(seed + 7);
        let (lhs, rhs) = invariants_direct(a, b, &g, k, seed);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn branch_waves_are_vacuum(qx in -3.0f64..3.0, qy in -3.0f64..3.0, qz in 0.1f64..3.0, k in 0.1f64..3.0, b in 0usize..3) {
        let br = [Branch::Photon, Branch::Massive, Branch::KaluzaKlein][b];
        let w = PlaneWave::on_branch(br, [qx, qy, qz], [0.3, -0.7, 0.2], k, 0.0);
        if let Ok(w) = w {
            let scale = 1.0 + w.k.iter().map(|v| v * v).sum::<f64>() + k * k;
            prop_assert!(w.residual(k) < 1e-11 * scale * scale);
        }
    }

    #[test]
    fn spectrum_is_direction_independent(x in -1.0f64..1.0, y in -1.0f64..1.0, z in 0.2f64..1.0, k in 0.3f64..3.0) {
        let d = dispersion_spectrum([x, y, z], k).unwrap();
        prop_assert_eq!(d.mode_count(), 8);
        let m: Vec<f64> = d.branches.iter().map(|b| b.mass_sq / (k * k)).collect();
        prop_assert!((m[1] - 6.0).abs() < 1e-8 && (m[2] - 10.0).abs() < 1e-8);
    }
}
