//! Electrodynamics with an antisymmetric companion field: the abelian reduction of
//! the bivector gauge field strength, its scalar invariants, the normalized
//! Lagrangian, lattice field-equation residuals, the Fourier-space spectrum and a
//! 1+1D time-domain evolver.

use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;

use crate::lattice::{gradient, minkowski, Field, Grid4, IndexKind};
use crate::scalar::{lit, Scalar};
use crate::Error;

/// Independent index pairs of an antisymmetric four-tensor.
pub const PAIRS4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

fn eta<T: Scalar>(i: usize) -> T {
    lit(ETA[i])
}

/// Potential `A_α` and antisymmetric field `E_{μν}` on a flat lattice.
#[derive(Clone, Debug)]
pub struct EmState<T> {
    pub a: Field<T>,
    pub e: Field<T>,
    pub kappa: T,
}

impl<T: Scalar> EmState<T> {
    /// Checks signatures, exact antisymmetry of `E` and `κ > 0`.
    pub fn new(a: Field<T>, e: Field<T>, kappa: T) -> Result<Self, Error> {
        if a.kinds() != [IndexKind::Four] || e.kinds() != [IndexKind::Four, IndexKind::Four] {
            return Err(Error::Shape(
                "expected A: [Four] and E: [Four, Four]".into(),
            ));
        }
        if a.grid().shape() != e.grid().shape() {
            return Err(Error::Shape("A and E live on different grids".into()));
        }
        if kappa <= T::zero() {
            return Err(Error::Config("kappa must be positive".into()));
        }
        for p in 0..e.grid().len() {
            let v = e.at(p);
            for m in 0..4 {
                for n in 0..4 {
                    if v[m * 4 + n] != -v[n * 4 + m] {
                        return Err(Error::Precondition("E is not antisymmetric".into()));
                    }
                }
            }
        }
        Ok(EmState { a, e, kappa })
    }

    /// Samples `f(x) = (A, E)`, keeping the antisymmetric part of `E`.
    pub fn from_fn(
        grid: &Grid4<T>,
        kappa: T,
        f: impl Fn([T; 4]) -> ([T; 4], [[T; 4]; 4]),
    ) -> Result<Self, Error> {
        let mut a = Field::zeros(grid, &[IndexKind::Four]);
        let mut e = Field::zeros(grid, &[IndexKind::Four, IndexKind::Four]);
        for p in 0..grid.len() {
            let (av, ev) = f(grid.coord(p));
            a.at_mut(p).copy_from_slice(&av);
            let o = e.at_mut(p);
            for m in 0..4 {
                for n in 0..4 {
                    o[m * 4 + n] = lit::<T>(0.5) * (ev[m][n] - ev[n][m]);
                }
            }
        }
        Self::new(a, e, kappa)
    }

    /// Superposition of plane waves sampled on the lattice.
    pub fn from_waves(grid: &Grid4<T>, waves: &[PlaneWave], kappa: T) -> Result<Self, Error> {
        Self::from_fn(grid, kappa, |x| {
            let xf: [f64; 4] = std::array::from_fn(|i| x[i].to_f64().unwrap());
            let mut a = [T::zero(); 4];
            let mut e = [[T::zero(); 4]; 4];
            for w in waves {
                let (av, _, ev) = w.fields_at(xf);
                for m in 0..4 {
                    a[m] += lit(av[m]);
                    for n in 0..4 {
                        e[m][n] += lit(ev[m][n]);
                    }
                }
            }
            (a, e)
        })
    }

    pub fn grid(&self) -> &Grid4<T> {
        self.a.grid()
    }

    /// `F_{μν} = ∂_μA_ν − ∂_νA_μ`.
    pub fn field_tensor(&self) -> Field<T> {
        let da = gradient(&self.a);
        Field::from_points(
            self.grid(),
            &[IndexKind::Four, IndexKind::Four],
            |p, out| {
                for m in 0..4 {
                    for n in 0..4 {
                        out[m * 4 + n] = da[m].at(p)[n] - da[n].at(p)[m];
                    }
                }
            },
        )
    }
}

fn mat4<T: Scalar>(v: &[T]) -> [[T; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| v[i * 4 + j]))
}

/// `𝖥_{KLMN}` (625 values, `[K][L][M][N]`) of the abelian reduction at a point:
/// `𝖥_{μ5α5} = F_{μα}`, `𝖥_{μ5αβ} = −𝖥_{αβμ5} = ∂_μE_{αβ}` and
/// `𝖥_{μναβ} = −g_{μα}E_{νβ} + g_{να}E_{μβ} + g_{μβ}E_{να} − g_{νβ}E_{μα}`.
pub fn em_strength_point<T: Scalar>(
    f: &[[T; 4]; 4],
    de: &[[[T; 4]; 4]; 4],
    e: &[[T; 4]; 4],
    g: &[[T; 4]; 4],
) -> Vec<T> {
    let mut out = vec![T::zero(); 625];
    let idx = |k: usize, l: usize, m: usize, n: usize| ((k * 5 + l) * 5 + m) * 5 + n;
    const F5: usize = 4;
    for m in 0..4 {
        for a in 0..4 {
            let v = f[m][a];
            out[idx(m, F5, a, F5)] = v;
            out[idx(F5, m, a, F5)] = -v;
            out[idx(m, F5, F5, a)] = -v;
            out[idx(F5, m, F5, a)] = v;
            for b in 0..4 {
                let d = de[m][a][b];
                out[idx(m, F5, a, b)] = d;
                out[idx(F5, m, a, b)] = -d;
                out[idx(a, b, m, F5)] = -d;
                out[idx(a, b, F5, m)] = d;
            }
        }
    }
    for m in 0..4 {
        for n in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    out[idx(m, n, a, b)] =
                        -g[m][a] * e[n][b] + g[n][a] * e[m][b] + g[m][b] * e[n][a]
                            - g[n][b] * e[m][a];
                }
            }
        }
    }
    out
}

/// `𝖥_{KLMN}` on a flat lattice, signature `[Five; 4]`.
pub fn em_strength_components<T: Scalar>(state: &EmState<T>) -> Field<T> {
    let f = state.field_tensor();
    let de = gradient(&state.e);
    let g = minkowski::<T>();
    Field::from_points(state.grid(), &[IndexKind::Five; 4], |p, out| {
        let d: [[[T; 4]; 4]; 4] = std::array::from_fn(|s| mat4(de[s].at(p)));
        out.copy_from_slice(&em_strength_point(
            &mat4(f.at(p)),
            &d,
            &mat4(state.e.at(p)),
            &g,
        ));
    })
}

/// Inverse five-metric `diag(g^{-1}, κ⁻²)`.
pub fn five_inverse<T: Scalar>(ginv: &[[T; 4]; 4], kappa: T) -> [[T; 5]; 5] {
    let mut h = [[T::zero(); 5]; 5];
    for i in 0..4 {
        for j in 0..4 {
            h[i][j] = ginv[i][j];
        }
    }
    h[4][4] = T::one() / (kappa * kappa);
    h
}

/// Raises slot `s` of a rank-4 five-tensor.
fn raise_slot<T: Scalar>(x: &[T], h: &[[T; 5]; 5], s: usize) -> Vec<T> {
    let stride = 5usize.pow(3 - s as u32);
    let mut out = vec![T::zero(); 625];
    for off in 0..625 {
        let i = (off / stride) % 5;
        let base = off - i * stride;
        let mut acc = T::zero();
        for j in 0..5 {
            let v = x[base + j * stride];
            if v != T::zero() && h[i][j] != T::zero() {
                acc += h[i][j] * v;
            }
        }
        out[off] = acc;
    }
    out
}

/// The two independent quadratic scalars `I₁ = 𝖥^{ABCD}𝖥_{ABCD}` and
/// `I₂ = 𝖥^{AC}_{AD}𝖥^{BD}_{BC}`, summed over all index values.
pub fn scalar_invariants<T: Scalar>(f: &[T], hinv: &[[T; 5]; 5]) -> (T, T) {
    let r01 = raise_slot(&raise_slot(f, hinv, 0), hinv, 1);
    let up = raise_slot(&raise_slot(&r01, hinv, 2), hinv, 3);
    let i1 = up
        .iter()
        .zip(f)
        .fold(T::zero(), |acc, (&x, &y)| acc + x * y);
    // P^C_D = 𝖥^{AC}_{AD}
    let mut p = [[T::zero(); 5]; 5];
    for c in 0..5 {
        for d in 0..5 {
            let mut s = T::zero();
            for a in 0..5 {
                s += r01[((a * 5 + c) * 5 + a) * 5 + d];
            }
            p[c][d] = s;
        }
    }
    let mut i2 = T::zero();
    for c in 0..5 {
        for d in 0..5 {
            i2 += p[c][d] * p[d][c];
        }
    }
    (i1, i2)
}

/// Four-dimensional contractions entering the invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticTerms<T> {
    /// `F^{αβ}F_{αβ}`
    pub ff: T,
    /// `∂^μE^{αβ}∂_μE_{αβ}`
    pub de_de: T,
    /// `(∂^μE_{μα})(∂_νE^{να})`
    pub div_sq: T,
    /// `F^{αβ}E_{αβ}`
    pub fe: T,
    /// `E^{αβ}E_{αβ}`
    pub ee: T,
}

impl<T: Scalar> QuadraticTerms<T> {
    pub fn new(
        f: &[[T; 4]; 4],
        de: &[[[T; 4]; 4]; 4],
        e: &[[T; 4]; 4],
        ginv: &[[T; 4]; 4],
    ) -> Self {
        let up2 = |x: &[[T; 4]; 4]| -> [[T; 4]; 4] {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| {
                    let mut s = T::zero();
                    for c in 0..4 {
                        for d in 0..4 {
                            s += ginv[a][c] * ginv[b][d] * x[c][d];
                        }
                    }
                    s
                })
            })
        };
        let dot = |x: &[[T; 4]; 4], y: &[[T; 4]; 4]| -> T {
            let mut s = T::zero();
            for a in 0..4 {
                for b in 0..4 {
                    s += x[a][b] * y[a][b];
                }
            }
            s
        };
        let fu = up2(f);
        let eu = up2(e);
        let deu: [[[T; 4]; 4]; 4] = std::array::from_fn(|m| up2(&de[m]));
        let mut de_de = T::zero();
        for m in 0..4 {
            for n in 0..4 {
                de_de += ginv[m][n] * dot(&deu[m], &de[n]);
            }
        }
        // div_α = g^{μν} ∂_ν E_{μα}
        let div: [T; 4] = std::array::from_fn(|a| {
            let mut s = T::zero();
            for m in 0..4 {
                for n in 0..4 {
                    s += ginv[m][n] * de[n][m][a];
                }
            }
            s
        });
        let mut div_sq = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                div_sq += ginv[a][b] * div[a] * div[b];
            }
        }
        QuadraticTerms {
            ff: dot(&fu, f),
            de_de,
            div_sq,
            fe: dot(&fu, e),
            ee: dot(&eu, e),
        }
    }
}

/// `aI₁ + bI₂` written through the four-dimensional contractions:
/// `(4a−b)κ⁻⁴FF + 4aκ⁻²∂E∂E − 2bκ⁻²(divE)² + 4bκ⁻²FE + (8a−4b)EE`.
pub fn invariant_expansion<T: Scalar>(a: T, b: T, q: &QuadraticTerms<T>, kappa: T) -> T {
    let k2 = T::one() / (kappa * kappa);
    let four: T = lit(4.0);
    (four * a - b) * k2 * k2 * q.ff + four * a * k2 * q.de_de - lit::<T>(2.0) * b * k2 * q.div_sq
        + four * b * k2 * q.fe
        + (lit::<T>(8.0) * a - four * b) * q.ee
}

/// Coefficients of `FF`, `∂E∂E`, `(divE)²`, `FE`, `EE` in the normalized Lagrangian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LagrangianCoefficients<T> {
    pub c_ff: T,
    pub c_dede: T,
    pub c_dive: T,
    pub c_fe: T,
    pub c_ee: T,
}

impl<T: Scalar> LagrangianCoefficients<T> {
    pub fn as_array(&self) -> [T; 5] {
        [self.c_ff, self.c_dede, self.c_dive, self.c_fe, self.c_ee]
    }

    /// Lagrangian density from the contractions.
    pub fn density(&self, q: &QuadraticTerms<T>) -> T {
        self.c_ff * q.ff
            + self.c_dede * q.de_de
            + self.c_dive * q.div_sq
            + self.c_fe * q.fe
            + self.c_ee * q.ee
    }
}

/// Exact record of the normalization chain, with `κ` factored out of every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianPipeline {
    /// `a/κ⁴`.
    pub a: Rational64,
    /// `d = b/κ⁴`.
    pub d: Rational64,
    /// `ε²` fixed by the third-term condition.
    pub epsilon_sq: Rational64,
    /// Sign chosen for `ε`.
    pub epsilon_sign: i8,
    /// Third-term coefficient after rescaling, `−2d/ε²`.
    pub third_term: Rational64,
    /// The printed form of the same condition, `−½(ε² + 1)`, at the solved `ε²`.
    pub third_term_printed: Rational64,
    /// Final coefficients as rationals; multiply by `κ^p` with `p` from `kappa_powers`.
    pub coefficients: [Rational64; 5],
    pub kappa_powers: [i32; 5],
}

impl LagrangianPipeline {
    /// Coefficients for a given `κ`.
    pub fn evaluate<T: Scalar>(&self, kappa: T) -> LagrangianCoefficients<T> {
        let c: [T; 5] = std::array::from_fn(|i| {
            let r = self.coefficients[i];
            let v = *r.numer() as f64 / *r.denom() as f64;
            lit::<T>(v) * kappa.powi(self.kappa_powers[i])
        });
        LagrangianCoefficients {
            c_ff: c[0],
            c_dede: c[1],
            c_dive: c[2],
            c_fe: c[3],
            c_ee: c[4],
        }
    }
}

/// Normalization of `aI₁ + bI₂` to the standard form.
///
/// With `a = κ⁴α`, `b = κ⁴d`: the `FF` coefficient `4α − d` is set to `−¼`; after
/// `E → (εκ)⁻¹E` the `∂E∂E` coefficient `(d − ¼)/ε²` is set to `¼` and the
/// `(divE)²` coefficient `−2d/ε²` to `−1`. Both conditions are linear in `(d, ε²)`.
pub fn lagrangian_coefficients(epsilon_sign: i8) -> Result<LagrangianPipeline, Error> {
    if epsilon_sign != 1 && epsilon_sign != -1 {
        return Err(Error::Config("epsilon sign must be +1 or -1".into()));
    }
    let r = |n: i64, d: i64| Rational64::new(n, d);
    // d − ¼ = ¼u and 2d = u, with u = ε²
    // ⇒ d = ¼ + ¼u = ½u ⇒ u(½ − ¼) = ¼
    let u = r(1, 4) / (r(1, 2) - r(1, 4));
    let d = u / 2;
    let alpha = (d - r(1, 4)) / 4;
    let eps = Rational64::from_integer(epsilon_sign as i64);
    let c_dede = (d - r(1, 4)) / u;
    let c_dive = -(d * 2) / u;
    let c_fe = d * 4 / eps;
    let c_ee = -(r(1, 2) + d * 2) / u;
    Ok(LagrangianPipeline {
        a: alpha,
        d,
        epsilon_sq: u,
        epsilon_sign,
        third_term: c_dive,
        third_term_printed: -(u + 1) / 2,
        coefficients: [r(-1, 4), c_dede, c_dive, c_fe, c_ee],
        kappa_powers: [0, 0, 0, 1, 2],
    })
}

/// Residuals of the vacuum equations on a flat lattice:
/// `∂^αF_{αβ} − 4κ∂^αE_{αβ}` and
/// `∂²E_{αβ} + 2∂^λ(∂_αE_{βλ} − ∂_βE_{αλ}) + 6κ²E_{αβ} − 4κF_{αβ}`.
pub fn vacuum_residual<T: Scalar>(state: &EmState<T>) -> (Field<T>, Field<T>) {
    let grid = state.grid();
    let k = state.kappa;
    let f = state.field_tensor();
    let df = gradient(&f);
    let de = gradient(&state.e);
    let dde: Vec<[Field<T>; 4]> = de.iter().map(gradient).collect();
    let four: T = lit(4.0);
    let r1 = Field::from_points(grid, &[IndexKind::Four], |p, out| {
        for b in 0..4 {
            let mut s = T::zero();
            for a in 0..4 {
                s += eta::<T>(a) * (df[a].at(p)[a * 4 + b] - four * k * de[a].at(p)[a * 4 + b]);
            }
            out[b] = s;
        }
    });
    let r2 = Field::from_points(grid, &[IndexKind::Four, IndexKind::Four], |p, out| {
        let e = state.e.at(p);
        let fp = f.at(p);
        for a in 0..4 {
            for b in 0..4 {
                let mut s = lit::<T>(6.0) * k * k * e[a * 4 + b] - four * k * fp[a * 4 + b];
                for m in 0..4 {
                    s += eta::<T>(m) * dde[m][m].at(p)[a * 4 + b];
                    // 2∂^λ(∂_αE_{βλ} − ∂_βE_{αλ})
                    s += lit::<T>(2.0)
                        * eta::<T>(m)
                        * (dde[m][a].at(p)[b * 4 + m] - dde[m][b].at(p)[a * 4 + m]);
                }
                out[a * 4 + b] = s;
            }
        }
    });
    (r1, r2)
}

/// Residuals with sources: the vacuum residuals minus `j_β` and `κ⁻¹j_{αβ}`.
pub fn sourced_residual<T: Scalar>(
    state: &EmState<T>,
    j1: &Field<T>,
    j2: &Field<T>,
) -> Result<(Field<T>, Field<T>), Error> {
    if j1.kinds() != [IndexKind::Four] || j2.kinds() != [IndexKind::Four, IndexKind::Four] {
        return Err(Error::Shape(
            "expected j: [Four] and j2: [Four, Four]".into(),
        ));
    }
    let tol = T::epsilon() * lit(64.0) * (T::one() + j2.max_abs());
    for p in 0..j2.grid().len() {
        let v = j2.at(p);
        for m in 0..4 {
            for n in 0..4 {
                if (v[m * 4 + n] + v[n * 4 + m]).abs() > tol {
                    return Err(Error::Precondition(
                        "tensor source must be antisymmetric".into(),
                    ));
                }
            }
        }
    }
    let (r1, r2) = vacuum_residual(state);
    Ok((r1.sub(j1)?, r2.sub(&j2.scaled(T::one() / state.kappa))?))
}

/// One real plane wave: `A = a sin θ`, `F = (k∧a) cos θ`, `E = Ê cos θ`, `θ = k_μx^μ + φ`.
/// All components carry lower indices.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWave {
    pub k: [f64; 4],
    pub a: [f64; 4],
    pub e: [[f64; 4]; 4],
    pub phase: f64,
}

/// Dispersion branch of the vacuum equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `k² = 0`, `E = ⅔κ⁻¹F`.
    Photon,
    /// `k² = 10κ²`, `E = ¼κ⁻¹F`.
    Massive,
    /// `k² = 6κ²`, divergence-free `E`, no `F`.
    KaluzaKlein,
}

impl Branch {
    /// `k²` in units of `κ²`.
    pub fn mass_sq_over_kappa_sq(self) -> f64 {
        match self {
            Branch::Photon => 0.0,
            Branch::Massive => 10.0,
            Branch::KaluzaKlein => 6.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Photon => "photon",
            Branch::Massive => "massive",
            Branch::KaluzaKlein => "kaluza-klein",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, Error> {
        match name {
            "photon" => Ok(Branch::Photon),
            "massive" => Ok(Branch::Massive),
            "kaluza-klein" | "kk" => Ok(Branch::KaluzaKlein),
            other => Err(Error::Config(format!("unknown branch '{other}'"))),
        }
    }
}

fn raise1(v: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| ETA[i] * v[i])
}

fn wedge(k: &[f64; 4], a: &[f64; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|m| std::array::from_fn(|n| k[m] * a[n] - k[n] * a[m]))
}

/// `k^α X_{αβ}`.
fn contract_first(k: &[f64; 4], x: &[[f64; 4]; 4]) -> [f64; 4] {
    let ku = raise1(k);
    std::array::from_fn(|b| (0..4).map(|a| ku[a] * x[a][b]).sum())
}

fn levi_civita4(i: usize, j: usize, k: usize, l: usize) -> f64 {
    let p = [i, j, k, l];
    if (0..4).any(|a| (a + 1..4).any(|b| p[a] == p[b])) {
        return 0.0;
    }
    crate::gravity::permutation_sign(&p) as f64
}

impl PlaneWave {
    /// `k^μk_μ`.
    pub fn k_sq(&self) -> f64 {
        let ku = raise1(&self.k);
        (0..4).map(|i| ku[i] * self.k[i]).sum()
    }

    /// Amplitude `F̂ = k∧a`.
    pub fn f_hat(&self) -> [[f64; 4]; 4] {
        wedge(&self.k, &self.a)
    }

    /// `Ĉ_β = k^αÊ_{αβ}`, the amplitude of `∂^αE_{αβ}` up to the phase factor.
    pub fn c_hat(&self) -> [f64; 4] {
        contract_first(&self.k, &self.e)
    }

    /// `(A, F, E)` at a point.
    pub fn fields_at(&self, x: [f64; 4]) -> ([f64; 4], [[f64; 4]; 4], [[f64; 4]; 4]) {
        let th: f64 = (0..4).map(|i| self.k[i] * x[i]).sum::<f64>() + self.phase;
        let (s, c) = th.sin_cos();
        let fh = self.f_hat();
        (
            std::array::from_fn(|i| self.a[i] * s),
            std::array::from_fn(|m| std::array::from_fn(|n| fh[m][n] * c)),
            std::array::from_fn(|m| std::array::from_fn(|n| self.e[m][n] * c)),
        )
    }

    /// Largest amplitude of the two vacuum residuals.
    pub fn residual(&self, kappa: f64) -> f64 {
        let (r1, r2) = plane_wave_residual(&self.k, &self.f_hat(), &self.e, kappa);
        r1.iter()
            .chain(r2.iter().flatten())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `⟨Ê,F̂⟩/⟨F̂,F̂⟩`, or `None` when `F̂` vanishes.
    pub fn ratio(&self) -> Option<f64> {
        amplitude_ratio(&self.f_hat(), &self.e)
    }

    /// Plane wave on a branch, travelling along the spatial wave vector `q` (upper index).
    ///
    /// `pol` fixes the polarization: the transverse part of `pol` for photons, the
    /// vector `b` in `E = k∧b` for the massive branch and in `E = ⋆(k∧b)` for the other.
    pub fn on_branch(
        branch: Branch,
        q: [f64; 3],
        pol: [f64; 3],
        kappa: f64,
        phase: f64,
    ) -> Result<Self, Error> {
        if kappa <= 0.0 {
            return Err(Error::Config("kappa must be positive".into()));
        }
        let q2: f64 = q.iter().map(|v| v * v).sum();
        let m2 = branch.mass_sq_over_kappa_sq() * kappa * kappa;
        let w = (q2 + m2).sqrt();
        let k = [w, -q[0], -q[1], -q[2]];
        let zero = [[0.0; 4]; 4];
        let wave = match branch {
            Branch::Photon => {
                if q2 == 0.0 {
                    return Err(Error::Config("a photon needs a nonzero wave vector".into()));
                }
                let proj: f64 = (0..3).map(|i| pol[i] * q[i]).sum::<f64>() / q2;
                let p: [f64; 3] = std::array::from_fn(|i| pol[i] - proj * q[i]);
                let a = [0.0, p[0], p[1], p[2]];
                let f = wedge(&k, &a);
                let e =
                    std::array::from_fn(|m| std::array::from_fn(|n| 2.0 / (3.0 * kappa) * f[m][n]));
                PlaneWave { k, a, e, phase }
            }
            Branch::Massive => {
                // b ⟂ k: k^μb_μ = w b_0 + q·p = 0
                let qp: f64 = (0..3).map(|i| q[i] * pol[i]).sum();
                let b = [-qp / w, pol[0], pol[1], pol[2]];
                let e = wedge(&k, &b);
                let a = std::array::from_fn(|i| 4.0 * kappa * b[i]);
                PlaneWave { k, a, e, phase }
            }
            Branch::KaluzaKlein => {
                let ku = raise1(&k);
                let bu = [0.0, pol[0], pol[1], pol[2]];
                let mut e = zero;
                for m in 0..4 {
                    for n in 0..4 {
                        let mut s = 0.0;
                        for r in 0..4 {
                            for t in 0..4 {
                                s += levi_civita4(m, n, r, t) * ku[r] * bu[t];
                            }
                        }
                        e[m][n] = s;
                    }
                }
                PlaneWave {
                    k,
                    a: [0.0; 4],
                    e,
                    phase,
                }
            }
        };
        if wave.e.iter().flatten().all(|v| v.abs() < 1e-14) {
            return Err(Error::Config("polarization gives a vanishing mode".into()));
        }
        Ok(wave)
    }
}

fn amplitude_ratio(f: &[[f64; 4]; 4], e: &[[f64; 4]; 4]) -> Option<f64> {
    let ff: f64 = f.iter().flatten().map(|v| v * v).sum();
    if ff < 1e-24 {
        return None;
    }
    let fe: f64 = f
        .iter()
        .flatten()
        .zip(e.iter().flatten())
        .map(|(a, b)| a * b)
        .sum();
    Some(fe / ff)
}

/// Fourier-space residuals for amplitudes `F̂, Ê` at wave covector `k`:
/// `k^α(F̂ − 4κÊ)_{αβ}` and `−k²Ê − 2k^λ(k_αÊ_{βλ} − k_βÊ_{αλ}) + 6κ²Ê − 4κF̂`.
pub fn plane_wave_residual(
    k: &[f64; 4],
    f: &[[f64; 4]; 4],
    e: &[[f64; 4]; 4],
    kappa: f64,
) -> ([f64; 4], [[f64; 4]; 4]) {
    let ku = raise1(k);
    let k2: f64 = (0..4).map(|i| ku[i] * k[i]).sum();
    let kf = contract_first(k, f);
    let ke = contract_first(k, e);
    let r1 = std::array::from_fn(|b| kf[b] - 4.0 * kappa * ke[b]);
    let r2 = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = -k2 * e[a][b] + 6.0 * kappa * kappa * e[a][b] - 4.0 * kappa * f[a][b];
            for l in 0..4 {
                s -= 2.0 * ku[l] * (k[a] * e[b][l] - k[b] * e[a][l]);
            }
            s
        })
    });
    (r1, r2)
}

/// Vacuum plane waves sorted by branch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeDecomposition {
    pub photon: Vec<PlaneWave>,
    pub massive: Vec<PlaneWave>,
    pub kaluza_klein: Vec<PlaneWave>,
}

impl ModeDecomposition {
    pub fn branch(&self, b: Branch) -> &[PlaneWave] {
        match b {
            Branch::Photon => &self.photon,
            Branch::Massive => &self.massive,
            Branch::KaluzaKlein => &self.kaluza_klein,
        }
    }

    /// All waves, in branch order.
    pub fn recompose(&self) -> Vec<PlaneWave> {
        self.photon
            .iter()
            .chain(&self.massive)
            .chain(&self.kaluza_klein)
            .cloned()
            .collect()
    }

    /// Largest `|(−k² + 10κ²)Ĉ|` over all waves: `∂²C + 10κ²C = 0` for the recomposed state.
    pub fn c_equation_residual(&self, kappa: f64) -> f64 {
        self.recompose()
            .iter()
            .flat_map(|w| {
                let f = -w.k_sq() + 10.0 * kappa * kappa;
                w.c_hat().map(|c| (f * c).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Splits a superposition of vacuum plane waves into the photon (`F⁽¹⁾, E⁽¹⁾`),
/// massive (`F⁽²⁾, E⁽²⁾`) and Kaluza-Klein (`E⁽³⁾`) parts.
///
/// Waves sharing a wave covector and phase are merged first. A merged wave that does not solve the
/// vacuum equations to relative tolerance `tol`, or whose `k²` is not on a branch, is an error.
pub fn mode_decompose(
    waves: &[PlaneWave],
    kappa: f64,
    tol: f64,
) -> Result<ModeDecomposition, Error> {
    if kappa <= 0.0 {
        return Err(Error::Config("kappa must be positive".into()));
    }
    let mut merged: Vec<PlaneWave> = Vec::new();
    for w in waves {
        match merged.iter_mut().find(|m| {
            m.phase == w.phase
                && (0..4).all(|i| (m.k[i] - w.k[i]).abs() <= 1e-12 * (1.0 + w.k[i].abs()))
        }) {
            Some(m) => {
                for i in 0..4 {
                    m.a[i] += w.a[i];
                    for j in 0..4 {
                        m.e[i][j] += w.e[i][j];
                    }
                }
            }
            None => merged.push(w.clone()),
        }
    }
    let mut out = ModeDecomposition::default();
    for w in merged {
        let scale =
            w.e.iter()
                .flatten()
                .chain(w.f_hat().iter().flatten())
                .fold(0.0f64, |m, v| m.max(v.abs()))
                * (1.0 + w.k_sq().abs() + kappa * kappa);
        if w.residual(kappa) > tol * scale.max(1e-300) {
            return Err(Error::Precondition(format!(
                "wave with k = {:?} does not solve the vacuum equations",
                w.k
            )));
        }
        let m2 = w.k_sq() / (kappa * kappa);
        let branch = [Branch::Photon, Branch::Massive, Branch::KaluzaKlein]
            .into_iter()
            .find(|b| (m2 - b.mass_sq_over_kappa_sq()).abs() <= 1e-8 * (1.0 + m2.abs()))
            .ok_or_else(|| Error::Precondition(format!("k² = {} is not on a branch", w.k_sq())))?;
        match branch {
            Branch::Photon => out.photon.push(w),
            Branch::Massive => out.massive.push(w),
            Branch::KaluzaKlein => out.kaluza_klein.push(w),
        }
    }
    Ok(out)
}

/// One branch of the spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersionBranch {
    pub mass_sq: f64,
    pub multiplicity: usize,
    /// `E/F` amplitude ratio; `None` when the branch carries no electromagnetic field.
    pub ratio: Option<f64>,
    /// True when `∂^αE_{αβ}` is nonzero on the branch.
    pub longitudinal: bool,
}

/// Spectrum of the vacuum equations.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersionResult {
    pub kappa: f64,
    /// Sorted by mass squared.
    pub branches: Vec<DispersionBranch>,
}

impl DispersionResult {
    /// Sum of multiplicities.
    pub fn mode_count(&self) -> usize {
        self.branches.iter().map(|b| b.multiplicity).sum()
    }
}

fn unpack(x: &[f64]) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let mut f = [[0.0; 4]; 4];
    let mut e = [[0.0; 4]; 4];
    for (i, &(m, n)) in PAIRS4.iter().enumerate() {
        f[m][n] = x[i];
        f[n][m] = -x[i];
        e[m][n] = x[6 + i];
        e[n][m] = -x[6 + i];
    }
    (f, e)
}

/// Rows of the plane-wave system on `X = (F̂, Ê)` (12 unknowns): the first-order
/// equation (4 rows), the Bianchi constraint `k_{[λ}F̂_{μν]} = 0` (4 rows) and the
/// second-order equation (6 rows).
fn system_matrix(k: &[f64; 4], kappa: f64) -> DMatrix<f64> {
    let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
    let mut s = DMatrix::zeros(14, 12);
    for j in 0..12 {
        let mut x = [0.0; 12];
        x[j] = 1.0;
        let (f, e) = unpack(&x);
        let (r1, r2) = plane_wave_residual(k, &f, &e, kappa);
        for b in 0..4 {
            s[(b, j)] = r1[b];
        }
        for (t, &(l, m, n)) in triples.iter().enumerate() {
            s[(4 + t, j)] = k[l] * f[m][n] + k[m] * f[n][l] + k[n] * f[l][m];
        }
        for (i, &(m, n)) in PAIRS4.iter().enumerate() {
            s[(8 + i, j)] = r2[m][n];
        }
    }
    s
}

/// Orthonormal basis of the null space (columns), singular values below `tol·σ_max`.
fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let ncols = m.ncols();
    // pad to at least square so that the SVD exposes every right singular vector
    let rows = m.nrows().max(ncols);
    let mut sq = DMatrix::zeros(rows, ncols);
    sq.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let smax = svd.singular_values.max().max(1e-300);
    let cols: Vec<DVector<f64>> = (0..ncols)
        .filter(|&i| svd.singular_values[i] <= tol * smax)
        .map(|i| vt.row(i).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(ncols, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

fn branch_from_vectors(mass_sq: f64, vecs: &DMatrix<f64>, k: &[f64; 4]) -> DispersionBranch {
    let mut ratio: Option<f64> = None;
    let mut longitudinal = false;
    for c in 0..vecs.ncols() {
        let x: Vec<f64> = vecs.column(c).iter().copied().collect();
        let (f, e) = unpack(&x);
        if let Some(r) = amplitude_ratio(&f, &e) {
            ratio = Some(r);
        }
        if contract_first(k, &e).iter().any(|v| v.abs() > 1e-8) {
            longitudinal = true;
        }
    }
    DispersionBranch {
        mass_sq,
        multiplicity: vecs.ncols(),
        ratio,
        longitudinal,
    }
}

/// Spectrum of the vacuum equations for propagation along `dir`.
///
/// The massless sector is the null space of the plane-wave system at the light-like
/// covector `k = (1, −n̂)`. The massive sectors come from the rest frame `k = m(1,0,0,0)`:
/// on the null space of the first-order and Bianchi rows, the second-order rows read
/// `(m²B + A)y = 0`, and the masses are the eigenvalues of `−B⁻¹A`.
pub fn dispersion_spectrum(dir: [f64; 3], kappa: f64) -> Result<DispersionResult, Error> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::Config("kappa must be positive".into()));
    }
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Config("direction must be a nonzero vector".into()));
    }
    let n: [f64; 3] = std::array::from_fn(|i| dir[i] / norm);
    let tol = 1e-10;
    let mut branches = Vec::new();

    let kl = [1.0, -n[0], -n[1], -n[2]];
    let null = null_space(&system_matrix(&kl, kappa), tol);
    if null.ncols() > 0 {
        branches.push(branch_from_vectors(0.0, &null, &kl));
    }

    let u = [1.0, 0.0, 0.0, 0.0];
    // the first-order and Bianchi rows are linear in k, so m drops out
    let constraints = system_matrix(&u, kappa).rows(0, 8).into_owned();
    let z = null_space(&constraints, tol);
    let b = system_matrix(&u, 0.0).rows(8, 6).into_owned() * &z;
    let a = system_matrix(&[0.0; 4], kappa).rows(8, 6).into_owned() * &z;
    let binv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Precondition("degenerate rest-frame operator".into()))?;
    let m = -(binv * &a);
    let eig = m.clone().complex_eigenvalues();
    let mut vals: Vec<f64> = Vec::new();
    for ev in eig.iter() {
        if ev.im.abs() > 1e-8 * (1.0 + ev.re.abs()) {
            return Err(Error::Precondition("complex mass eigenvalue".into()));
        }
        vals.push(ev.re);
    }
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut clusters: Vec<f64> = Vec::new();
    for v in vals {
        match clusters.last() {
            Some(&c) if (v - c).abs() <= 1e-8 * (1.0 + c.abs()) => {}
            _ => clusters.push(v),
        }
    }
    for m2 in clusters {
        let op = &b * m2 + &a;
        let y = null_space(&op, 1e-8);
        let x = &z * y;
        let k = [m2.max(0.0).sqrt(), 0.0, 0.0, 0.0];
        branches.push(branch_from_vectors(m2, &x, &k));
    }
    branches.sort_by(|x, y| x.mass_sq.partial_cmp(&y.mass_sq).unwrap());
    Ok(DispersionResult { kappa, branches })
}

/// State of the 1+1D reduction: fields depend on `t` and `z = x³` only, on a periodic
/// `z` grid. `E` is stored through the six pairs of [`PAIRS4`].
#[derive(Clone, Debug, PartialEq)]
pub struct Em1d {
    pub kappa: f64,
    pub length: f64,
    pub a: [Vec<f64>; 4],
    pub va: [Vec<f64>; 4],
    pub e: [Vec<f64>; 6],
    pub ve: [Vec<f64>; 6],
}

fn pair_slot(m: usize, n: usize) -> Option<(usize, f64)> {
    if m == n {
        return None;
    }
    let (lo, hi, s) = if m < n { (m, n, 1.0) } else { (n, m, -1.0) };
    PAIRS4.iter().position(|&p| p == (lo, hi)).map(|i| (i, s))
}

impl Em1d {
    /// Samples plane waves whose covectors have no `x¹`, `x²` components at `t = 0`.
    pub fn from_waves(
        n: usize,
        length: f64,
        waves: &[PlaneWave],
        kappa: f64,
    ) -> Result<Self, Error> {
        if n < 5 {
            return Err(Error::Config("at least 5 grid points are required".into()));
        }
        if !(length > 0.0) || !(kappa > 0.0) {
            return Err(Error::Config("length and kappa must be positive".into()));
        }
        if waves.iter().any(|w| w.k[1] != 0.0 || w.k[2] != 0.0) {
            return Err(Error::Config("waves must depend on t and z only".into()));
        }
        let h = length / n as f64;
        let zeros = || vec![0.0; n];
        let mut st = Em1d {
            kappa,
            length,
            a: std::array::from_fn(|_| zeros()),
            va: std::array::from_fn(|_| zeros()),
            e: std::array::from_fn(|_| zeros()),
            ve: std::array::from_fn(|_| zeros()),
        };
        for w in waves {
            for i in 0..n {
                let th = w.k[3] * (i as f64 * h) + w.phase;
                let (s, c) = th.sin_cos();
                for m in 0..4 {
                    st.a[m][i] += w.a[m] * s;
                    st.va[m][i] += w.a[m] * w.k[0] * c;
                }
                for (p, &(m, nn)) in PAIRS4.iter().enumerate() {
                    st.e[p][i] += w.e[m][nn] * c;
                    st.ve[p][i] -= w.e[m][nn] * w.k[0] * s;
                }
            }
        }
        Ok(st)
    }

    pub fn len(&self) -> usize {
        self.a[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.len() as f64
    }

    /// `E_{μν}` at grid point `i`.
    pub fn e_at(&self, m: usize, n: usize, i: usize) -> f64 {
        pair_slot(m, n).map_or(0.0, |(p, s)| s * self.e[p][i])
    }

    fn d1(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let h2 = 2.0 * self.spacing();
        (0..n)
            .map(|i| (f[(i + 1) % n] - f[(i + n - 1) % n]) / h2)
            .collect()
    }

    /// Everything the field equations and the Lagrangian need at every point, with
    /// velocities scaled by `s`.
    fn derived(&self, s: f64) -> Derived {
        let n = self.len();
        let va: [Vec<f64>; 4] = std::array::from_fn(|m| self.va[m].iter().map(|v| v * s).collect());
        let ve: [Vec<f64>; 6] = std::array::from_fn(|p| self.ve[p].iter().map(|v| v * s).collect());
        let da: [Vec<f64>; 4] = std::array::from_fn(|m| self.d1(&self.a[m]));
        let de: [Vec<f64>; 6] = std::array::from_fn(|p| self.d1(&self.e[p]));
        let pick = |arr: &[Vec<f64>; 6], m: usize, nn: usize, i: usize| {
            pair_slot(m, nn).map_or(0.0, |(p, sg)| sg * arr[p][i])
        };
        // C_ν = ∂_tE_{0ν} − ∂_zE_{3ν}
        let c: [Vec<f64>; 4] = std::array::from_fn(|nu| {
            (0..n)
                .map(|i| pick(&ve, 0, nu, i) - pick(&de, 3, nu, i))
                .collect()
        });
        // ∂_μA_ν with ∂_1 = ∂_2 = 0
        let dmu =
            |arr_t: &[Vec<f64>; 4], arr_z: &[Vec<f64>; 4], mu: usize, nu: usize, i: usize| match mu
            {
                0 => arr_t[nu][i],
                3 => arr_z[nu][i],
                _ => 0.0,
            };
        let f: [Vec<f64>; 6] = std::array::from_fn(|p| {
            let (m, nn) = PAIRS4[p];
            (0..n)
                .map(|i| dmu(&va, &da, m, nn, i) - dmu(&va, &da, nn, m, i))
                .collect()
        });
        Derived {
            va,
            ve,
            da,
            de,
            c,
            f,
        }
    }

    /// Second time derivatives `(Ä, Ë)`.
    fn accelerations(&self) -> ([Vec<f64>; 4], [Vec<f64>; 6]) {
        let n = self.len();
        let k = self.kappa;
        let d = self.derived(1.0);
        let acc_a: [Vec<f64>; 4] = std::array::from_fn(|b| {
            let dd = self.d1(&d.da[b]);
            (0..n).map(|i| dd[i] + 4.0 * k * d.c[b][i]).collect()
        });
        let dde: [Vec<f64>; 6] = std::array::from_fn(|p| self.d1(&d.de[p]));
        let dc: [Vec<f64>; 4] = std::array::from_fn(|b| self.d1(&d.c[b]));
        let pick = |arr: &[Vec<f64>; 6], m: usize, nn: usize, i: usize| {
            pair_slot(m, nn).map_or(0.0, |(p, sg)| sg * arr[p][i])
        };
        let dve: [Vec<f64>; 6] = std::array::from_fn(|p| self.d1(&d.ve[p]));
        let acc_e: [Vec<f64>; 6] = std::array::from_fn(|p| {
            let (m, nn) = PAIRS4[p];
            (0..n)
                .map(|i| {
                    let e = self.e[p][i];
                    let f = d.f[p][i];
                    if m == 0 {
                        // Ë_{0ν} = −E″ + 2∂_zV_{3ν} + 2δ_{ν3}∂_zC_0 + 6κ²E − 4κF
                        let mut v =
                            -dde[p][i] + 2.0 * pick(&dve, 3, nn, i) + 6.0 * k * k * e - 4.0 * k * f;
                        if nn == 3 {
                            v += 2.0 * dc[0][i];
                        }
                        v
                    } else {
                        // Ë_{ij} = E″ + 2G_{ij} − 6κ²E + 4κF, G_{i3} = −∂_zC_i
                        let g = if nn == 3 { -dc[m][i] } else { 0.0 };
                        dde[p][i] + 2.0 * g - 6.0 * k * k * e + 4.0 * k * f
                    }
                })
                .collect()
        });
        (acc_a, acc_e)
    }

    /// Lagrangian (summed over the grid, times the spacing) with velocities scaled by `s`,
    /// in the Lorenz-gauge form whose field equations the evolver integrates:
    /// `−½∂_μA_ν∂^μA^ν + ¼∂E∂E − C_αC^α + 2κF^{αβ}E_{αβ} − (3/2)κ²E^{αβ}E_{αβ}`.
    fn lagrangian(&self, s: f64) -> f64 {
        let n = self.len();
        let k = self.kappa;
        let d = self.derived(s);
        let mut total = 0.0;
        for i in 0..n {
            let mut l = 0.0;
            for nu in 0..4 {
                // ∂_0A_ν and ∂_3A_ν
                l -= 0.5 * ETA[nu] * (d.va[nu][i].powi(2) - d.da[nu][i].powi(2));
            }
            for p in 0..6 {
                let (m, nn) = PAIRS4[p];
                let w = ETA[m] * ETA[nn];
                // each independent pair appears twice in the full sum
                l += 0.5 * w * (d.ve[p][i].powi(2) - d.de[p][i].powi(2));
                l += 4.0 * k * w * d.f[p][i] * self.e[p][i];
                l -= 3.0 * k * k * w * self.e[p][i].powi(2);
            }
            for a in 0..4 {
                l -= ETA[a] * d.c[a][i].powi(2);
            }
            total += l;
        }
        total * self.spacing()
    }

    /// Conserved energy of the Lorenz-gauge Lagrangian: `H = L₂ − L₀`, where `L₂` is the
    /// part quadratic in velocities and `L₀` the velocity-free part.
    pub fn energy(&self) -> f64 {
        let lp = self.lagrangian(1.0);
        let lm = self.lagrangian(-1.0);
        let l0 = self.lagrangian(0.0);
        let l2 = 0.5 * (lp + lm) - l0;
        l2 - l0
    }

    /// `(Re, Im)` of `(1/N) Σ_i f_i e^{iqz_i}`.
    pub fn fourier_amplitude(&self, f: &[f64], q: f64) -> (f64, f64) {
        let h = self.spacing();
        let n = f.len() as f64;
        f.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, v)| {
            let (s, c) = (q * i as f64 * h).sin_cos();
            (re + v * c / n, im + v * s / n)
        })
    }

    fn axpy(&mut self, c: f64, acc: &([Vec<f64>; 4], [Vec<f64>; 6]), vel_of: &Em1d) {
        let n = self.len();
        for m in 0..4 {
            for i in 0..n {
                self.a[m][i] += c * vel_of.va[m][i];
                self.va[m][i] += c * acc.0[m][i];
            }
        }
        for p in 0..6 {
            for i in 0..n {
                self.e[p][i] += c * vel_of.ve[p][i];
                self.ve[p][i] += c * acc.1[p][i];
            }
        }
    }
}

struct Derived {
    va: [Vec<f64>; 4],
    ve: [Vec<f64>; 6],
    da: [Vec<f64>; 4],
    de: [Vec<f64>; 6],
    c: [Vec<f64>; 4],
    f: [Vec<f64>; 6],
}

/// Snapshots of an evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Em1d>,
    pub energies: Vec<f64>,
}

/// Leapfrog integration `U^{n+1} = U^{n−1} + 2Δt·L(U^n)` of the first-order form of the
/// 1+1D field equations (first step by the midpoint rule). Keeps every `every`-th state.
///
/// Requires `Δt < h`.
pub fn evolve(state: &Em1d, dt: f64, steps: usize, every: usize) -> Result<Trajectory, Error> {
    let h = state.spacing();
    if !(dt > 0.0) || dt >= h {
        return Err(Error::Precondition(format!(
            "time step {dt} violates the CFL bound dt < h = {h}"
        )));
    }
    let every = every.max(1);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![state.clone()],
        energies: vec![state.energy()],
    };
    let mut prev = state.clone();
    // midpoint start
    let mut half = state.clone();
    half.axpy(0.5 * dt, &state.accelerations(), state);
    let mut cur = state.clone();
    cur.axpy(dt, &half.accelerations(), &half);
    for step in 1..=steps {
        if step % every == 0 {
            traj.times.push(step as f64 * dt);
            traj.states.push(cur.clone());
            traj.energies.push(cur.energy());
        }
        if step == steps {
            break;
        }
        let acc = cur.accelerations();
        let mut next = prev;
        next.axpy(2.0 * dt, &acc, &cur);
        prev = cur;
        cur = next;
    }
    Ok(traj)
}

/// Angular frequency from the zero crossings of a sampled signal.
pub fn zero_crossing_frequency(times: &[f64], values: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for i in 1..values.len() {
        let (a, b) = (values[i - 1], values[i]);
        if (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0) {
            let t = times[i - 1] + (times[i] - times[i - 1]) * a / (a - b);
            crossings.push(t);
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}

/// Angular frequency from the unwrapped phase of complex samples (least-squares slope).
pub fn phase_frequency(times: &[f64], samples: &[(f64, f64)]) -> Option<f64> {
    if times.len() < 2 || times.len() != samples.len() {
        return None;
    }
    let mut phases = Vec::with_capacity(samples.len());
    let mut last = 0.0;
    let mut offset = 0.0;
    for (i, &(re, im)) in samples.iter().enumerate() {
        let p = im.atan2(re);
        if i > 0 {
            let d = p - last;
            if d > std::f64::consts::PI {
                offset -= std::f64::consts::TAU;
            } else if d < -std::f64::consts::PI {
                offset += std::f64::consts::TAU;
            }
        }
        last = p;
        phases.push(p + offset);
    }
    let n = times.len() as f64;
    let mt = times.iter().sum::<f64>() / n;
    let mp = phases.iter().sum::<f64>() / n;
    let num: f64 = times
        .iter()
        .zip(&phases)
        .map(|(t, p)| (t - mt) * (p - mp))
        .sum();
    let den: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    Some((num / den).abs())
}
