//! Einstein tensor, modified torsion, the `Y`/`Z` five-tensors, the stress-energy-angular
//! momentum apparatus and the generalized gravitational field equations.
//!
//! Index layouts: `G^μ_α` as `[μ][α]`, `T^(mod)α_{μν}` as `[α][μ][ν]`, five-tensors
//! `X^A_{BC}` as `[A][B][C]`, and the `K` form as returned by [`k_form`].

use crate::algebra::{permutations, Bivector5, ADJ_PAIRS, I5};
use crate::connections::{
    five_connection_sigma, five_torsion, modified_divergence, modified_divergence_four, read3,
    read4, read5x3, riemann, torsion_from_contorsion, torsionful_connection, write3, Arr3, Arr4,
    Arr5x3, Connection4, ContorsionField, Geometry, Slot, Torsion4,
};
use crate::curvature::{five_curvature_point, k_form};
use crate::lattice::{gradient, to_mat, Field, IndexKind};
use crate::scalar::{delta, det4, lit, Scalar};
use crate::Error;

/// Physical constants of the gravitational sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants<T> {
    /// Einstein coupling `k`.
    pub k: T,
    /// Inverse length `κ`, with `h^{55} = κ⁻²`.
    pub kappa: T,
    /// Dimensionless coupling `ϱ` of the added Lagrangian.
    pub varrho: T,
    /// Sign `ε` of the antisymmetric-tensor kinetic term (electrodynamics).
    pub epsilon_sign: i8,
    /// Parameter `ω` of the locally symmetric connection.
    pub omega: T,
    /// `sign ξ` in the dual contractions.
    pub xi_sign: i8,
}

impl<T: Scalar> Constants<T> {
    pub fn new(
        k: T,
        kappa: T,
        varrho: T,
        epsilon_sign: i8,
        omega: T,
        xi_sign: i8,
    ) -> Result<Self, Error> {
        if !(kappa > T::zero()) {
            return Err(Error::Config("kappa must be positive".into()));
        }
        if !(k > T::zero()) {
            return Err(Error::Config("k must be positive".into()));
        }
        if epsilon_sign.abs() != 1 || xi_sign.abs() != 1 {
            return Err(Error::Config("sign parameters must be +1 or -1".into()));
        }
        Ok(Constants {
            k,
            kappa,
            varrho,
            epsilon_sign,
            omega,
            xi_sign,
        })
    }

    /// `k = 1`, `κ = 1`, `ϱ = 1`, both signs positive, `ω = 0`.
    pub fn unit() -> Self {
        Constants {
            k: T::one(),
            kappa: T::one(),
            varrho: T::one(),
            epsilon_sign: 1,
            omega: T::zero(),
            xi_sign: 1,
        }
    }

    /// `h^{55} = κ⁻²`.
    pub fn h55(&self) -> T {
        T::one() / (self.kappa * self.kappa)
    }
}

/// Ricci tensor `R_{ωα} = R^σ_{ωσα}`.
pub fn ricci<T: Scalar>(riem: &Arr4<T>) -> [[T; 4]; 4] {
    std::array::from_fn(|w| {
        std::array::from_fn(|a| (0..4).fold(T::zero(), |acc, s| acc + riem[s][w][s][a]))
    })
}

/// Scalar curvature `R = g^{ωα} R_{ωα}`.
pub fn scalar_curvature<T: Scalar>(riem: &Arr4<T>, ginv: &[[T; 4]; 4]) -> T {
    let rc = ricci(riem);
    let mut r = T::zero();
    for w in 0..4 {
        for a in 0..4 {
            r += ginv[w][a] * rc[w][a];
        }
    }
    r
}

/// `G^μ_α = g^{μω} R^σ_{ωσα} − ½ δ^μ_α R` (trace form).
pub fn einstein_trace<T: Scalar>(riem: &Arr4<T>, ginv: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    let rc = ricci(riem);
    let r = scalar_curvature(riem, ginv);
    std::array::from_fn(|m| {
        std::array::from_fn(|a| {
            let up = (0..4).fold(T::zero(), |acc, w| acc + ginv[m][w] * rc[w][a]);
            up - lit::<T>(0.5) * delta::<T>(m, a) * r
        })
    })
}

/// Levi-Civita symbol for a list of distinct indices; zero on repeats.
pub fn permutation_sign(idx: &[usize]) -> i8 {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return 0;
            }
        }
    }
    for i in 0..v.len() {
        while v[i] != i {
            let j = v[i];
            if j >= v.len() {
                return 0;
            }
            v.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Raised curvature `R^{ρω}_{στ} = g^{ωβ} R^ρ_{βστ}`.
pub fn raised_riemann<T: Scalar>(riem: &Arr4<T>, ginv: &[[T; 4]; 4]) -> Arr4<T> {
    std::array::from_fn(|r| {
        std::array::from_fn(|w| {
            std::array::from_fn(|s| {
                std::array::from_fn(|t| {
                    (0..4).fold(T::zero(), |acc, b| acc + ginv[w][b] * riem[r][b][s][t])
                })
            })
        })
    })
}

/// Double-dual form `G^μ_α = ¼ ε_{αλρω} R^{ρω}_{στ} ε^{στλμ}` with `ε_{0123} = +e` and
/// `ε^{0123} = +1/e`. Raising all four indices of `ε_{αβγδ}` with a Lorentzian metric
/// gives the opposite sign, so in terms of the metric-raised tensor this is `−¼ ε ε R`.
pub fn einstein_double_dual<T: Scalar>(riem: &Arr4<T>, ginv: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    let ru = raised_riemann(riem, ginv);
    // with ε^{0123} = +1/e the volume factors cancel and the product is the bare symbol
    let perms = permutations(4);
    let mut out = [[T::zero(); 4]; 4];
    for (lo, s1) in &perms {
        // lo = (α, λ, ρ, ω)
        let (a, l, r, w) = (lo[0], lo[1], lo[2], lo[3]);
        for (up, s2) in &perms {
            // up = (σ, τ, λ', μ)
            if up[2] != l {
                continue;
            }
            let (s, t, m) = (up[0], up[1], up[3]);
            let c = T::from_i8(*s1 * *s2).unwrap();
            out[m][a] += c * ru[r][w][s][t];
        }
    }
    let q = lit::<T>(0.25);
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= q;
        }
    }
    out
}

/// `T^(mod)α_{μν} = T_{μν}^α + δ^α_μ T_{νσ}^σ − δ^α_ν T_{μσ}^σ`, stored `[α][μ][ν]`.
pub fn modified_torsion<T: Scalar>(t: &Torsion4<T>) -> Arr3<T> {
    let tr = t.trace();
    std::array::from_fn(|a| {
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                t.0[m][n][a] + delta::<T>(a, m) * tr[n] - delta::<T>(a, n) * tr[m]
            })
        })
    })
}

/// Inverse of [`modified_torsion`]: the trace `T_{νσ}^σ = ½ T^(mod)α_{αν}` is split off first.
pub fn modified_torsion_inverse<T: Scalar>(tm: &Arr3<T>) -> Torsion4<T> {
    let tr: [T; 4] =
        std::array::from_fn(|n| lit::<T>(0.5) * (0..4).fold(T::zero(), |acc, a| acc + tm[a][a][n]));
    Torsion4(std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            std::array::from_fn(|a| {
                tm[a][m][n] - delta::<T>(a, m) * tr[n] + delta::<T>(a, n) * tr[m]
            })
        })
    }))
}

/// Totally antisymmetric five-index tensor with `ε_{01235} = √|det h|` and indices raised by `h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Epsilon5<T> {
    /// `√|det h|` of the lowered five-metric.
    pub volume: T,
    /// Sign of `det h`.
    pub det_sign: T,
    /// `sign ξ`.
    pub xi: T,
}

impl<T: Scalar> Epsilon5<T> {
    /// From the four-metric block and `h^{55}`.
    pub fn new(g4: &[[T; 4]; 4], h55: T, xi_sign: i8) -> Result<Self, Error> {
        if h55 == T::zero() {
            return Err(Error::DegenerateMetric("h55 must be nonzero".into()));
        }
        let det = det4(g4) / h55;
        if det == T::zero() {
            return Err(Error::DegenerateMetric("singular four-metric".into()));
        }
        Ok(Epsilon5 {
            volume: det.abs().sqrt(),
            det_sign: det.signum(),
            xi: T::from_i8(xi_sign.signum()).unwrap(),
        })
    }

    /// `ε_{ABCDE}` (five-index labels with `5` at position 4).
    pub fn lower(&self, idx: &[usize; 5]) -> T {
        T::from_i8(permutation_sign(idx)).unwrap() * self.volume
    }

    /// `ε^{ABCDE}`.
    pub fn upper(&self, idx: &[usize; 5]) -> T {
        T::from_i8(permutation_sign(idx)).unwrap() * self.det_sign / self.volume
    }

    /// Induced four-index `ε_{αβγδ} = ε_{αβγδ5} / √|h_{55}|`.
    pub fn lower4(&self, idx: &[usize; 4], h55: T) -> T {
        self.lower(&[idx[0], idx[1], idx[2], idx[3], I5]) * h55.abs().sqrt()
    }
}

/// Fully antisymmetric `K^{PQ}_{CD}` from the pair-indexed form (250 values).
pub fn k_full<T: Scalar>(k: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); 625];
    for (i, &(p, q)) in ADJ_PAIRS.iter().enumerate() {
        for cd in 0..25 {
            let v = k[i * 25 + cd];
            out[(p * 5 + q) * 25 + cd] = v;
            out[(q * 5 + p) * 25 + cd] = -v;
        }
    }
    out
}

/// Rank-4 tensor `Y^{AB}_{CD} = ¼ sign ξ · ε_{CDXRQ} K^{RQ}_{ST} ε^{STXAB}`, stored `[A][B][C][D]`.
pub fn y_rank4<T: Scalar>(k: &[T], eps: &Epsilon5<T>) -> Vec<T> {
    let kf = k_full(k);
    let perms = permutations(5);
    let mut out = vec![T::zero(); 625];
    let c0 = eps.xi * eps.det_sign * lit::<T>(0.25);
    for (lo, s1) in &perms {
        let (c, d, x, r, q) = (lo[0], lo[1], lo[2], lo[3], lo[4]);
        for (up, s2) in &perms {
            if up[2] != x {
                continue;
            }
            let (s, t, a, b) = (up[0], up[1], up[3], up[4]);
            let sg = T::from_i8(*s1 * *s2).unwrap();
            out[((a * 5 + b) * 5 + c) * 5 + d] += c0 * sg * kf[(r * 5 + q) * 25 + s * 5 + t];
        }
    }
    out
}

/// Extended `K^{PQ}_{RS T}`: `K^{PQ}_{μ5 T} = −K^{PQ}_{5μ T} = K^{PQ}_{μT}` and zero otherwise.
pub fn k_extended<T: Scalar>(kf: &[T], p: usize, q: usize, r: usize, s: usize, t: usize) -> T {
    if r < 4 && s == I5 {
        kf[(p * 5 + q) * 25 + r * 5 + t]
    } else if r == I5 && s < 4 {
        -kf[(p * 5 + q) * 25 + s * 5 + t]
    } else {
        T::zero()
    }
}

/// `Y^A_{BC} = ⅛ sign ξ · ε_{BCXPQ} K^{PQ}_{RST} ε^{RSTXA}` with the extended `K`.
pub fn y_tensor<T: Scalar>(k: &[T], eps: &Epsilon5<T>) -> Arr5x3<T> {
    let kf = k_full(k);
    let perms = permutations(5);
    let mut out = [[[T::zero(); 5]; 5]; 5];
    let c0 = eps.xi * eps.det_sign * lit::<T>(0.125);
    for (lo, s1) in &perms {
        let (b, c, x, p, q) = (lo[0], lo[1], lo[2], lo[3], lo[4]);
        for (up, s2) in &perms {
            if up[3] != x {
                continue;
            }
            let (r, s, t, a) = (up[0], up[1], up[2], up[4]);
            let v = k_extended(&kf, p, q, r, s, t);
            if v != T::zero() {
                out[a][b][c] += c0 * T::from_i8(*s1 * *s2).unwrap() * v;
            }
        }
    }
    out
}

/// Closed-form `Y`: `Y^α_{μ5} = −G^α_μ`, `Y^α_{μν} = −2T^(mod)α_{μν}`, `Y^5_{BC} = 0`.
pub fn y_closed_form<T: Scalar>(einstein: &[[T; 4]; 4], tmod: &Arr3<T>) -> Arr5x3<T> {
    let mut y = [[[T::zero(); 5]; 5]; 5];
    for a in 0..4 {
        for m in 0..4 {
            y[a][m][I5] = -einstein[a][m];
            y[a][I5][m] = einstein[a][m];
            for n in 0..4 {
                y[a][m][n] = lit::<T>(-2.0) * tmod[a][m][n];
            }
        }
    }
    y
}

/// `s^{|στ|}_5 s_{στ}^5` from `S^{αβ}_5` and `s_{μν}^5`.
fn s5_square<T: Scalar>(s5: &[[T; 4]; 4], s5l: &[[T; 4]; 4]) -> T {
    let mut acc = T::zero();
    for s in 0..4 {
        for t in s + 1..4 {
            acc += s5[s][t] * s5l[s][t];
        }
    }
    acc
}

/// `s_{μν}^5 = g_{μα} g_{νβ} S^{αβ}_5 h^{55}`.
pub fn s5_lower<T: Scalar>(s5: &[[T; 4]; 4], g: &[[T; 4]; 4], h55: T) -> [[T; 4]; 4] {
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut acc = T::zero();
            for a in 0..4 {
                for b in 0..4 {
                    acc += g[m][a] * g[n][b] * s5[a][b];
                }
            }
            acc * h55
        })
    })
}

/// `Z^α_{μ5} = δ^α_μ s^{|στ|}_5 s_{στ}^5`, `Z^5_{μν} = −2 s_{μν}^5`, other blocks zero.
pub fn z_tensor<T: Scalar>(s5: &[[T; 4]; 4], g: &[[T; 4]; 4], h55: T) -> Arr5x3<T> {
    let sl = s5_lower(s5, g, h55);
    let sq = s5_square(s5, &sl);
    let mut z = [[[T::zero(); 5]; 5]; 5];
    for a in 0..4 {
        z[a][a][I5] = sq;
        z[a][I5][a] = -sq;
        for n in 0..4 {
            z[I5][a][n] = lit::<T>(-2.0) * sl[a][n];
        }
    }
    z
}

/// `δ^A_{μ5} = −δ^A_{5μ} = δ^A_μ`, `δ^A_{μν} = 0`.
pub fn delta_tensor<T: Scalar>() -> Arr5x3<T> {
    let mut d = [[[T::zero(); 5]; 5]; 5];
    for m in 0..4 {
        d[m][m][I5] = T::one();
        d[m][I5][m] = -T::one();
    }
    d
}

/// `δ^A_{BC} 𝒜^{|BC|}`: the ℰ-part of a bivector as a five-vector in 𝒵.
pub fn delta_apply<T: Scalar>(b: &Bivector5<T>) -> [T; 5] {
    let d = delta_tensor::<T>();
    std::array::from_fn(|a| {
        ADJ_PAIRS
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &(k, l))| acc + d[a][k][l] * b.0[i])
    })
}

/// One matter field at a point: `∂L/∂(⊞_A U)` as `[A][component]` and
/// `D̄_{CD} U` as `[pair][component]` (`D̄_{μ5} = ⊞_μ`, `D̄_{μν} = D_{μν}`).
#[derive(Clone, Debug, PartialEq)]
pub struct MatterPanel<T> {
    pub momenta: Vec<T>,
    pub dbar: Vec<T>,
}

/// `M^A_{CD} = δ^A_{CD} L − Σ_ℓ ∂L/∂(⊞_A U_ℓ) D̄_{CD} U_ℓ`.
pub fn stress_tensor_components<T: Scalar>(
    l: T,
    panel: &[MatterPanel<T>],
) -> Result<Arr5x3<T>, Error> {
    let d = delta_tensor::<T>();
    let mut m: Arr5x3<T> =
        std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| d[a][b][c] * l)));
    for (n, f) in panel.iter().enumerate() {
        if f.momenta.len() % 5 != 0
            || f.dbar.len() % 10 != 0
            || f.momenta.len() / 5 != f.dbar.len() / 10
        {
            return Err(Error::Shape(format!(
                "matter field {n}: {} momenta vs {} derivative values",
                f.momenta.len(),
                f.dbar.len()
            )));
        }
        let nc = f.momenta.len() / 5;
        for a in 0..5 {
            for (i, &(c, dd)) in ADJ_PAIRS.iter().enumerate() {
                let v = (0..nc).fold(T::zero(), |acc, j| {
                    acc + f.momenta[a * nc + j] * f.dbar[i * nc + j]
                });
                m[a][c][dd] -= v;
                m[a][dd][c] += v;
            }
        }
    }
    Ok(m)
}

/// Panel of a real scalar field with `L = ½ g^{αβ} ∂_αφ ∂_βφ`: returns `(L, panel)`.
pub fn scalar_matter<T: Scalar>(grad: &[T; 4], ginv: &[[T; 4]; 4]) -> (T, MatterPanel<T>) {
    let up: [T; 4] =
        std::array::from_fn(|a| (0..4).fold(T::zero(), |acc, b| acc + ginv[a][b] * grad[b]));
    let l = lit::<T>(0.5) * (0..4).fold(T::zero(), |acc, a| acc + up[a] * grad[a]);
    let mut momenta = vec![T::zero(); 5];
    momenta[..4].copy_from_slice(&up);
    let mut dbar = vec![T::zero(); 10];
    for (i, &(c, d)) in ADJ_PAIRS.iter().enumerate() {
        if d == I5 {
            dbar[i] = grad[c];
        }
    }
    (l, MatterPanel { momenta, dbar })
}

/// Zeroes `M^5_{μ5}`, turning the canonical tensor into the dynamical one.
pub fn dynamical<T: Scalar>(m: &Arr5x3<T>) -> Arr5x3<T> {
    let mut out = *m;
    for mu in 0..4 {
        out[I5][mu][I5] = T::zero();
        out[I5][I5][mu] = T::zero();
    }
    out
}

/// `(✳⊞_A M)^A_{BC} − M^A_{ST} K^{|ST|}_{BC,A}` with the extended `K`.
///
/// `m` has kinds `[Five; 3]`, `h` is the five-connection and `k` the 250-component form.
pub fn conservation_residual<T: Scalar>(
    m: &Field<T>,
    h: &Field<T>,
    k: &Field<T>,
) -> Result<Field<T>, Error> {
    if k.ncomp() != 250 || h.ncomp() != 125 {
        return Err(Error::Shape(
            "expected a five-connection and a K form".into(),
        ));
    }
    let mut out = modified_divergence(m, h)?;
    for p in 0..m.grid().len() {
        let kf = k_full(k.at(p));
        let mp = m.at(p).to_vec();
        let o = out.at_mut(p);
        for b in 0..5 {
            for c in 0..5 {
                let mut acc = T::zero();
                for a in 0..5 {
                    for &(s, t) in ADJ_PAIRS.iter() {
                        acc += mp[a * 25 + s * 5 + t] * k_extended(&kf, s, t, b, c, a);
                    }
                }
                o[b * 5 + c] -= acc;
            }
        }
    }
    Ok(out)
}

/// Fields derived from a metric and a contorsion 1-form on a lattice.
#[derive(Clone, Debug)]
pub struct GravityFields<T> {
    /// Torsionful connection `Γ = Γ̇ − s`.
    pub connection: Connection4<T>,
    /// `T_{μν}^α` (64 components).
    pub torsion: Field<T>,
    /// Curvature of `Γ` (256 components).
    pub riemann: Field<T>,
    /// `G^μ_α` of `Γ`, trace form (16 components).
    pub einstein: Field<T>,
}

impl<T: Scalar> GravityFields<T> {
    pub fn new(geo: &Geometry<T>, s: &ContorsionField<T>) -> Self {
        let connection = torsionful_connection(geo, s);
        let grid = geo.grid();
        let torsion = Field::from_points(grid, &[IndexKind::Four; 3], |p, out| {
            let t = torsion_from_contorsion(&s.at(p).s4, &geo.g(p));
            write3(&t.0, out);
        });
        let riemann = riemann(&connection.coeffs);
        let einstein = Field::from_points(grid, &[IndexKind::Four; 2], |p, out| {
            let e = einstein_trace(&read4(riemann.at(p)), &geo.ginv(p));
            for m in 0..4 {
                for a in 0..4 {
                    out[m * 4 + a] = e[m][a];
                }
            }
        });
        GravityFields {
            connection,
            torsion,
            riemann,
            einstein,
        }
    }

    pub fn torsion_at(&self, p: usize) -> Torsion4<T> {
        Torsion4(read3(self.torsion.at(p)))
    }

    pub fn einstein_at(&self, p: usize) -> [[T; 4]; 4] {
        to_mat(self.einstein.at(p))
    }

    /// `T^(mod)` sampled on the lattice (64 components, `[α][μ][ν]`).
    pub fn modified_torsion_field(&self) -> Field<T> {
        Field::from_points(self.torsion.grid(), &[IndexKind::Four; 3], |p, out| {
            write3(&modified_torsion(&self.torsion_at(p)), out);
        })
    }
}

/// `(✳∇_α T^(mod))^α_{μν} − G_{[μν]}` with `G_{μν} = g_{μλ} G^λ_ν`; 16 components `[μ][ν]`.
pub fn identity_tmod_divergence<T: Scalar>(
    geo: &Geometry<T>,
    f: &GravityFields<T>,
) -> Result<Field<T>, Error> {
    let tm = f.modified_torsion_field();
    let mut out = modified_divergence_four(
        &tm,
        &[Slot::Up, Slot::Down, Slot::Down],
        &f.connection,
        &f.torsion,
    )?;
    for p in 0..geo.grid().len() {
        let g = geo.g(p);
        let e = f.einstein_at(p);
        let gl: [[T; 4]; 4] = std::array::from_fn(|m| {
            std::array::from_fn(|n| (0..4).fold(T::zero(), |acc, l| acc + g[m][l] * e[l][n]))
        });
        let o = out.at_mut(p);
        for m in 0..4 {
            for n in 0..4 {
                o[m * 4 + n] -= lit::<T>(0.5) * (gl[m][n] - gl[n][m]);
            }
        }
    }
    Ok(out)
}

/// `(✳∇_α G)^α_μ − R^{στ}_{μα} T^(mod)α_{στ} + 2 T_{μα}^σ G^α_σ`; 4 components.
pub fn identity_einstein_divergence<T: Scalar>(
    geo: &Geometry<T>,
    f: &GravityFields<T>,
) -> Result<Field<T>, Error> {
    let mut out = modified_divergence_four(
        &f.einstein,
        &[Slot::Up, Slot::Down],
        &f.connection,
        &f.torsion,
    )?;
    for p in 0..geo.grid().len() {
        let ru = raised_riemann(&read4(f.riemann.at(p)), &geo.ginv(p));
        let t = f.torsion_at(p);
        let tm = modified_torsion(&t);
        let e = f.einstein_at(p);
        let o = out.at_mut(p);
        for m in 0..4 {
            let mut rhs = T::zero();
            for a in 0..4 {
                for s in 0..4 {
                    for u in 0..4 {
                        rhs += ru[s][u][m][a] * tm[a][s][u];
                    }
                    rhs -= lit::<T>(2.0) * t.0[m][a][s] * e[a][s];
                }
            }
            o[m] -= rhs;
        }
    }
    Ok(out)
}

/// Everything the field equations need at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityPoint<T> {
    pub g: [[T; 4]; 4],
    pub ginv: [[T; 4]; 4],
    /// `G^μ_α`.
    pub einstein: [[T; 4]; 4],
    pub torsion: Torsion4<T>,
    /// `S^{αβ}_5`.
    pub s5: [[T; 4]; 4],
    /// `Y^A_{BC}`.
    pub y: Arr5x3<T>,
}

impl<T: Scalar> GravityPoint<T> {
    /// Point data with `Y` filled in from its closed-form blocks.
    pub fn closed_form(
        g: [[T; 4]; 4],
        einstein: [[T; 4]; 4],
        torsion: Torsion4<T>,
        s5: [[T; 4]; 4],
    ) -> Result<Self, Error> {
        let ginv = crate::scalar::invert(&g)
            .ok_or_else(|| Error::DegenerateMetric("singular metric".into()))?;
        let y = y_closed_form(&einstein, &modified_torsion(&torsion));
        Ok(GravityPoint {
            g,
            ginv,
            einstein,
            torsion,
            s5,
            y,
        })
    }
}

/// Matter sources at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatterSources<T> {
    /// `Θ^μ_α`, stored `[μ][α]`.
    pub theta: [[T; 4]; 4],
    /// `Σ^α_{μν}`, stored `[α][μ][ν]`.
    pub sigma: Arr3<T>,
    /// `Ξ_{μν}`.
    pub xi: [[T; 4]; 4],
}

impl<T: Scalar> MatterSources<T> {
    pub fn zero() -> Self {
        MatterSources {
            theta: [[T::zero(); 4]; 4],
            sigma: [[[T::zero(); 4]; 4]; 4],
            xi: [[T::zero(); 4]; 4],
        }
    }

    /// Dynamical `M`: `M^α_{μ5} = −Θ^α_μ`, `M^α_{μν} = Σ^α_{μν}`,
    /// `M^5_{μν} = Ξ_{μν} |h^{55}|^{1/2}`, `M^5_{μ5} = 0`.
    pub fn to_m(&self, h55: T) -> Arr5x3<T> {
        let mut m = [[[T::zero(); 5]; 5]; 5];
        let r = h55.abs().sqrt();
        for a in 0..4 {
            for mu in 0..4 {
                m[a][mu][I5] = -self.theta[a][mu];
                m[a][I5][mu] = self.theta[a][mu];
                for n in 0..4 {
                    m[a][mu][n] = self.sigma[a][mu][n];
                }
                m[I5][a][mu] = self.xi[a][mu] * r;
            }
        }
        m
    }
}

/// Maximum residual of each group of field equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldEquationResiduals<T> {
    /// Four-tensor form: Einstein, Kibble-Sciama, antisymmetric-tensor equations.
    pub four_tensor: [T; 3],
    /// Five-tensor form: the `μ5`, `μν` and `5` blocks of `Y + ϱZ = kM`.
    pub five_tensor: [T; 3],
    /// `[M^·5_·, s^·_{·5}] = 0` as matrices.
    pub commute: T,
    /// `M^5_{μν} + 2ϱ s_{μν}^5 / k`.
    pub proportionality: T,
}

impl<T: Scalar> FieldEquationResiduals<T> {
    pub fn max(&self) -> T {
        self.four_tensor
            .iter()
            .chain(self.five_tensor.iter())
            .chain([self.commute, self.proportionality].iter())
            .fold(T::zero(), |a, b| a.max(b.abs()))
    }
}

fn lower_first<T: Scalar>(g: &[[T; 4]; 4], x: &[[T; 4]; 4]) -> [[T; 4]; 4] {
    std::array::from_fn(|m| {
        std::array::from_fn(|n| (0..4).fold(T::zero(), |acc, l| acc + g[m][l] * x[l][n]))
    })
}

/// Residuals of the generalized gravitational equations at a point.
///
/// Four-tensor form, with `X^{μν} = S^{μν}_5 |h^{55}|^{1/2}`, `ε = ϱ sign h^{55}`:
/// `G_{μν} − ½ε g_{μν} X·X = kΘ_{μν}`, `T^(mod) = −½kΣ`, `X_{μν} = −½ε⁻¹kΞ_{μν}`.
/// Five-tensor form: `Y + ϱZ = kM` with the dynamical `M` built from the sources.
pub fn field_equation_residuals<T: Scalar>(
    pt: &GravityPoint<T>,
    src: &MatterSources<T>,
    c: &Constants<T>,
) -> FieldEquationResiduals<T> {
    let h55 = c.h55();
    let eps = c.varrho * h55.signum();
    let root = h55.abs().sqrt();
    let g = &pt.g;
    let x_up: [[T; 4]; 4] = std::array::from_fn(|m| std::array::from_fn(|n| pt.s5[m][n] * root));
    let x_lo = s5_lower(&x_up, g, T::one());
    let xx = (0..16).fold(T::zero(), |acc, i| {
        acc + x_up[i / 4][i % 4] * x_lo[i / 4][i % 4]
    });
    let gl = lower_first(g, &pt.einstein);
    let th = lower_first(g, &src.theta);
    let mut r1 = T::zero();
    for m in 0..4 {
        for n in 0..4 {
            let v = gl[m][n] - lit::<T>(0.5) * eps * g[m][n] * xx - c.k * th[m][n];
            r1 = r1.max(v.abs());
        }
    }
    let tm = modified_torsion(&pt.torsion);
    let mut r2 = T::zero();
    for a in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                r2 = r2.max((tm[a][m][n] + lit::<T>(0.5) * c.k * src.sigma[a][m][n]).abs());
            }
        }
    }
    let mut r3 = T::zero();
    for m in 0..4 {
        for n in 0..4 {
            let v = if eps == T::zero() {
                src.xi[m][n]
            } else {
                x_lo[m][n] + lit::<T>(0.5) * c.k * src.xi[m][n] / eps
            };
            r3 = r3.max(v.abs());
        }
    }

    let z = z_tensor(&pt.s5, g, h55);
    let m = src.to_m(h55);
    let mut f = [T::zero(); 3];
    for a in 0..5 {
        for b in 0..5 {
            for cc in 0..5 {
                let v = (pt.y[a][b][cc] + c.varrho * z[a][b][cc] - c.k * m[a][b][cc]).abs();
                let block = if a < 4 && b < 4 && cc < 4 {
                    1
                } else if a < 4 {
                    0
                } else {
                    2
                };
                f[block] = f[block].max(v);
            }
        }
    }

    // M^μ{}^5{}_ω = g^{μσ} M^5_{σω} against s^ω_{ν5} = g_{νλ} S^{ωλ}_5
    let m5: [[T; 4]; 4] = std::array::from_fn(|mu| {
        std::array::from_fn(|w| (0..4).fold(T::zero(), |acc, s| acc + pt.ginv[mu][s] * m[I5][s][w]))
    });
    let smix: [[T; 4]; 4] = std::array::from_fn(|w| {
        std::array::from_fn(|n| (0..4).fold(T::zero(), |acc, l| acc + g[n][l] * pt.s5[w][l]))
    });
    let comm = crate::algebra::matcomm(&m5, &smix);
    let commute = comm.iter().flatten().fold(T::zero(), |a, b| a.max(b.abs()));

    let sl = s5_lower(&pt.s5, g, h55);
    let mut prop = T::zero();
    for mu in 0..4 {
        for n in 0..4 {
            prop = prop.max((m[I5][mu][n] + lit::<T>(2.0) * c.varrho * sl[mu][n] / c.k).abs());
        }
    }
    FieldEquationResiduals {
        four_tensor: [r1, r2, r3],
        five_tensor: f,
        commute,
        proportionality: prop,
    }
}

/// Sources that make every field equation hold for the given geometry (manufactured solution).
pub fn manufactured_sources<T: Scalar>(pt: &GravityPoint<T>, c: &Constants<T>) -> MatterSources<T> {
    let h55 = c.h55();
    let sl = s5_lower(&pt.s5, &pt.g, h55);
    let sq = s5_square(&pt.s5, &sl);
    let tm = modified_torsion(&pt.torsion);
    let theta = std::array::from_fn(|a| {
        std::array::from_fn(|m| (pt.einstein[a][m] - delta::<T>(a, m) * c.varrho * sq) / c.k)
    });
    let sigma = std::array::from_fn(|a| {
        std::array::from_fn(|m| std::array::from_fn(|n| lit::<T>(-2.0) * tm[a][m][n] / c.k))
    });
    let r = h55.abs().sqrt();
    let xi = std::array::from_fn(|m| {
        std::array::from_fn(|n| lit::<T>(-2.0) * c.varrho * sl[m][n] / (c.k * r))
    });
    MatterSources { theta, sigma, xi }
}

/// `max |T^(mod)α_{μν} + ½ k Σ^α_{μν}|`.
pub fn kibble_sciama_residual<T: Scalar>(t: &Torsion4<T>, sigma: &Arr3<T>, k: T) -> T {
    let tm = modified_torsion(t);
    let mut r = T::zero();
    for a in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                r = r.max((tm[a][m][n] + lit::<T>(0.5) * k * sigma[a][m][n]).abs());
            }
        }
    }
    r
}

/// Torsion solving the Kibble-Sciama equation for a given spin density.
pub fn kibble_sciama_solve<T: Scalar>(sigma: &Arr3<T>, k: T) -> Torsion4<T> {
    let tm: Arr3<T> = std::array::from_fn(|a| {
        std::array::from_fn(|m| std::array::from_fn(|n| lit::<T>(-0.5) * k * sigma[a][m][n]))
    });
    modified_torsion_inverse(&tm)
}

/// `Γ^α_{[μν]}`, which equals `T_{μν}^α` for the torsionful connection.
pub fn connection_antisymmetric_part<T: Scalar>(gam: &Arr3<T>) -> Torsion4<T> {
    Torsion4(std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            std::array::from_fn(|a| lit::<T>(0.5) * (gam[a][m][n] - gam[a][n][m]))
        })
    }))
}

/// σ-compatible five-connection, its curvature `K` form and `Y` on the lattice.
#[derive(Clone, Debug)]
pub struct FiveSector<T> {
    /// `H^A_{BC}` (125 components).
    pub h: Field<T>,
    /// `K^{𝔎}_{CD}` (250 components).
    pub k: Field<T>,
    /// `Y^A_{BC}` by ε-contraction (125 components).
    pub y: Field<T>,
}

impl<T: Scalar> FiveSector<T> {
    pub fn new(
        geo: &Geometry<T>,
        s: &ContorsionField<T>,
        h55: T,
        xi_sign: i8,
    ) -> Result<Self, Error> {
        let grid = geo.grid();
        let h = Field::from_points(grid, &[IndexKind::Five; 3], |p, out| {
            crate::connections::write5x3(
                &five_connection_sigma(&geo.g(p), &s.at(p), &geo.gamma(p)),
                out,
            );
        });
        let dh = gradient(&h);
        let mut k = Field::zeros(
            grid,
            &[IndexKind::Adjoint, IndexKind::Five, IndexKind::Five],
        );
        let mut y = Field::zeros(grid, &[IndexKind::Five; 3]);
        for p in 0..grid.len() {
            let d: [Arr5x3<T>; 4] = std::array::from_fn(|c| read5x3(dh[c].at(p)));
            let r = five_curvature_point(&read5x3(h.at(p)), &d);
            let kp = k_form(&r, &geo.ginv(p));
            let eps = Epsilon5::new(&geo.g(p), h55, xi_sign)?;
            crate::connections::write5x3(&y_tensor(&kp, &eps), y.at_mut(p));
            k.at_mut(p).copy_from_slice(&kp);
        }
        Ok(FiveSector { h, k, y })
    }
}

/// Five-torsion trace `t_{AK}^K` of a connection at a point.
pub fn five_torsion_trace<T: Scalar>(h: &Arr5x3<T>) -> [T; 5] {
    let t = five_torsion(h);
    std::array::from_fn(|a| (0..5).fold(T::zero(), |acc, k| acc + t[a][k][k]))
}

/// Direct expansion of the `μν` block of the modified divergence:
/// `(∂_α + e⁻¹∂_α e) M^α_{μν} − M^A_{Kν} H^K_{μA} − M^A_{μK} H^K_{νA}`; 16 components.
pub fn spin_divergence_expanded<T: Scalar>(
    m: &Field<T>,
    h: &Field<T>,
    e: &Field<T>,
) -> Result<Field<T>, Error> {
    let dm = gradient(m);
    let de = gradient(e);
    let mut out = Field::zeros(m.grid(), &[IndexKind::Four; 2]);
    for p in 0..m.grid().len() {
        let mp = read5x3(m.at(p));
        let hp = read5x3(h.at(p));
        let ep = e.at(p)[0];
        let o = out.at_mut(p);
        for mu in 0..4 {
            for nu in 0..4 {
                let mut acc = T::zero();
                for a in 0..4 {
                    acc += dm[a].at(p)[a * 25 + mu * 5 + nu] + de[a].at(p)[0] / ep * mp[a][mu][nu];
                }
                for a in 0..5 {
                    for k in 0..5 {
                        acc -= mp[a][k][nu] * hp[k][mu][a] + mp[a][mu][k] * hp[k][nu][a];
                    }
                }
                o[mu * 4 + nu] = acc;
            }
        }
    }
    Ok(out)
}
