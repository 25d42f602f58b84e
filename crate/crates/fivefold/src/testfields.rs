//! Seeded smooth test fields: low-order trigonometric polynomials commensurate
//! with the `2π` periodic box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Bivector5;
use crate::lattice::{Field, Grid4, IndexKind};
use crate::scalar::{lit, Scalar};

/// `c + Σ a_j sin(k_j·x + φ_j)` with integer wave vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<T> {
    pub offset: T,
    pub terms: Vec<(T, [T; 4], T)>,
}

impl<T: Scalar> TrigPoly<T> {
    pub fn constant(c: T) -> Self {
        TrigPoly {
            offset: c,
            terms: Vec::new(),
        }
    }

    /// Random polynomial varying only along the flagged axes, wave numbers in `1..=max_wave`.
    pub fn random(
        rng: &mut ChaCha8Rng,
        amplitude: f64,
        axes: [bool; 4],
        max_wave: i32,
        nterms: usize,
    ) -> Self {
        let offset = lit(amplitude * rng.gen_range(-1.0..1.0));
        let active: Vec<usize> = (0..4).filter(|&a| axes[a]).collect();
        let mut terms = Vec::with_capacity(nterms);
        if !active.is_empty() {
            for _ in 0..nterms {
                let mut k = [T::zero(); 4];
                let mut any = false;
                for &a in &active {
                    let w = rng.gen_range(-max_wave..=max_wave);
                    k[a] = lit(w as f64);
                    any |= w != 0;
                }
                if !any {
                    k[active[0]] = T::one();
                }
                let amp = lit(amplitude * rng.gen_range(-1.0..1.0));
                let ph = lit(rng.gen_range(0.0..std::f64::consts::TAU));
                terms.push((amp, k, ph));
            }
        }
        TrigPoly { offset, terms }
    }

    pub fn eval(&self, x: [T; 4]) -> T {
        self.terms.iter().fold(self.offset, |acc, (a, k, ph)| {
            acc + *a * (dot(k, &x) + *ph).sin()
        })
    }

    /// Exact gradient.
    pub fn grad(&self, x: [T; 4]) -> [T; 4] {
        let mut g = [T::zero(); 4];
        for (a, k, ph) in &self.terms {
            let c = *a * (dot(k, &x) + *ph).cos();
            for m in 0..4 {
                g[m] += c * k[m];
            }
        }
        g
    }
}

fn dot<T: Scalar>(k: &[T; 4], x: &[T; 4]) -> T {
    (0..4).fold(T::zero(), |acc, m| acc + k[m] * x[m])
}

/// Seeded generator of test fields.
pub struct FieldFactory {
    rng: ChaCha8Rng,
    /// Axes along which generated fields vary.
    pub axes: [bool; 4],
    pub max_wave: i32,
    pub nterms: usize,
}

impl FieldFactory {
    pub fn new(seed: u64, axes: [bool; 4]) -> Self {
        FieldFactory {
            rng: ChaCha8Rng::seed_from_u64(seed),
            axes,
            max_wave: 1,
            nterms: 2,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// One trigonometric polynomial.
    pub fn poly<T: Scalar>(&mut self, amplitude: f64) -> TrigPoly<T> {
        TrigPoly::random(
            &mut self.rng,
            amplitude,
            self.axes,
            self.max_wave,
            self.nterms,
        )
    }

    /// `n` independent polynomials.
    pub fn polys<T: Scalar>(&mut self, n: usize, amplitude: f64) -> Vec<TrigPoly<T>> {
        (0..n).map(|_| self.poly(amplitude)).collect()
    }

    /// Uniform random number in `[-1, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen_range(-1.0..1.0)
    }

    /// Minkowski plus a random symmetric perturbation of size `eps` (Lorentzian for small `eps`).
    pub fn lorentzian_metric(&mut self, eps: f64) -> [[f64; 4]; 4] {
        let mut g = crate::lattice::minkowski::<f64>();
        for a in 0..4 {
            for b in a..4 {
                let v = eps * self.uniform();
                g[a][b] += v;
                if a != b {
                    g[b][a] += v;
                }
            }
        }
        g
    }

    /// Random torsion `T_{μν}^α` with entries in `[-1, 1)`.
    pub fn torsion(&mut self) -> crate::connections::Torsion4<f64> {
        let x = std::array::from_fn(|_| {
            std::array::from_fn(|_| std::array::from_fn(|_| self.uniform()))
        });
        crate::connections::Torsion4::antisymmetrized(&x)
    }

    /// Random contorsion block `S^{αβ}_μ`, antisymmetric in the upper pair.
    pub fn contorsion(&mut self) -> crate::connections::Contorsion4<f64> {
        let x = std::array::from_fn(|_| {
            std::array::from_fn(|_| std::array::from_fn(|_| self.uniform()))
        });
        crate::connections::Contorsion4::antisymmetrized(&x)
    }
}

/// Samples one polynomial per component.
pub fn sample<T: Scalar>(grid: &Grid4<T>, kinds: &[IndexKind], polys: &[TrigPoly<T>]) -> Field<T> {
    Field::from_fn(grid, kinds, |x, out| {
        for (o, p) in out.iter_mut().zip(polys) {
            *o = p.eval(x);
        }
    })
}

/// Samples a bivector field from ten polynomials.
pub fn bivector_field<T: Scalar>(grid: &Grid4<T>, polys: &[TrigPoly<T>]) -> Field<T> {
    sample(grid, &[IndexKind::Adjoint], polys)
}

/// Evaluates ten polynomials as a bivector.
pub fn bivector_at<T: Scalar>(polys: &[TrigPoly<T>], x: [T; 4]) -> Bivector5<T> {
    Bivector5(std::array::from_fn(|i| polys[i].eval(x)))
}

/// Smooth contorsion field from 80 polynomials (64 for `S^{αβ}_μ`, 16 for `S^{αβ}_5`),
/// antisymmetrized in the upper pair.
pub fn contorsion_field<T: Scalar>(
    grid: &Grid4<T>,
    polys: &[TrigPoly<T>],
) -> crate::connections::ContorsionField<T> {
    crate::connections::ContorsionField::from_fn(grid, |x| contorsion_at(polys, x))
}

/// Evaluates 80 polynomials as a contorsion 1-form (not antisymmetrized).
pub fn contorsion_at<T: Scalar>(
    polys: &[TrigPoly<T>],
    x: [T; 4],
) -> crate::connections::ContorsionForm<T> {
    let mut c = crate::connections::ContorsionForm::zero();
    for i in 0..64 {
        c.s4.0[i / 16][(i / 4) % 4][i % 4] = polys[i].eval(x);
    }
    for i in 0..16 {
        c.s5[i / 4][i % 4] = polys[64 + i].eval(x);
    }
    c
}

/// Fourth-order central difference of `f` along `axis` at `x` with step `h`.
fn d4<const N: usize>(
    f: &impl Fn([f64; 4]) -> [f64; N],
    x: [f64; 4],
    axis: usize,
    h: f64,
) -> [f64; N] {
    let at = |s: f64| {
        let mut y = x;
        y[axis] += s * h;
        f(y)
    };
    let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
    std::array::from_fn(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h))
}

fn flat16(m: [[f64; 4]; 4]) -> [f64; 16] {
    std::array::from_fn(|i| m[i / 4][i % 4])
}

fn christoffel_ref(metric: &crate::lattice::MetricPreset<f64>, x: [f64; 4], h: f64) -> [f64; 64] {
    let g = |y: [f64; 4]| flat16(metric.eval(y));
    let dg: [[[f64; 4]; 4]; 4] = std::array::from_fn(|c| crate::lattice::to_mat(&d4(&g, x, c, h)));
    let ginv = crate::scalar::invert(&metric.eval(x)).expect("metric preset is invertible");
    let gam = crate::connections::christoffel(&ginv, &dg);
    std::array::from_fn(|i| gam[i / 16][(i / 4) % 4][i % 4])
}

/// Riemann tensor of a metric preset from high-order differences of the analytic metric.
///
/// Independent of the lattice stencil; accurate to about `1e-9`, which is far below the
/// discretization error of any lattice used in refinement studies.
pub fn reference_riemann(
    metric: &crate::lattice::MetricPreset<f64>,
    x: [f64; 4],
) -> crate::connections::Arr4<f64> {
    let h = 1e-3;
    let gam = christoffel_ref(metric, x, h);
    let dgam: [[[[f64; 4]; 4]; 4]; 4] = std::array::from_fn(|c| {
        let d = d4(&|y| christoffel_ref(metric, y, h), x, c, h);
        std::array::from_fn(|a| {
            std::array::from_fn(|b| std::array::from_fn(|m| d[a * 16 + b * 4 + m]))
        })
    });
    let g3 = std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|m| gam[a * 16 + b * 4 + m]))
    });
    crate::connections::riemann_point(&g3, &dgam)
}

/// Random antisymmetric adjoint array of the given rank with entries in `[-1, 1)`.
pub fn random_adjoint_form(rank: usize, seed: u64) -> crate::algebra::AdjointArray<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table: Vec<f64> = (0..10usize.pow(rank as u32))
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    crate::algebra::AdjointArray::antisymmetrize(rank, |idx| {
        table[idx.iter().fold(0, |acc, &i| acc * 10 + i)]
    })
}

/// Random constant contorsion 1-form with both blocks antisymmetric, entries in `(-amp, amp)`.
pub fn random_contorsion_form(
    rng: &mut ChaCha8Rng,
    amp: f64,
) -> crate::connections::ContorsionForm<f64> {
    let mut s4 = [[[0.0; 4]; 4]; 4];
    let mut s5 = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in a + 1..4 {
            for m in 0..4 {
                let v = rng.gen_range(-amp..amp);
                s4[a][b][m] = v;
                s4[b][a][m] = -v;
            }
            let v = rng.gen_range(-amp..amp);
            s5[a][b] = v;
            s5[b][a] = -v;
        }
    }
    crate::connections::ContorsionForm {
        s4: crate::connections::Contorsion4(s4),
        s5,
    }
}

/// Smooth contorsion: a constant random part plus a random part modulated by a plane wave.
pub fn smooth_contorsion_form(
    seed: u64,
    amp: f64,
) -> impl Fn([f64; 4]) -> crate::connections::ContorsionForm<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_contorsion_form(&mut rng, amp);
    let var = random_contorsion_form(&mut rng, amp);
    let k: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
    move |x| {
        let w = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3]).sin();
        let mut out = base;
        for a in 0..4 {
            for b in 0..4 {
                for m in 0..4 {
                    out.s4.0[a][b][m] += w * var.s4.0[a][b][m];
                }
                out.s5[a][b] += w * var.s5[a][b];
            }
        }
        out
    }
}

/// Smooth adjoint form field `A + cos(k·x) B` with random constant `A`, `B`.
pub fn smooth_adjoint_form(
    rank: usize,
    seed: u64,
) -> impl Fn([f64; 4]) -> crate::algebra::AdjointArray<f64> {
    let a = random_adjoint_form(rank, seed);
    let b = random_adjoint_form(rank, seed + 1000);
    move |x| {
        let w = (0.7 * x[0] - 1.1 * x[1] + 0.4 * x[2] + 0.9 * x[3]).cos();
        a.add(&b.scaled(w)).expect("equal ranks")
    }
}
