//! Connections: Levi-Civita, torsion and contorsion, the σ map, five-vector
//! connections, bivector connection coefficients and the derivative operators
//! built from them.

use crate::algebra::{
    bivector_action, m_hat_4, m_hat_5, Bivector5, FiveMetric, ADJ_PAIRS, E_SLOTS, I5,
};
use crate::lattice::{gradient, partial_derivative, to_mat, Field, IndexKind, MetricField};
use crate::scalar::{delta, lit, Scalar};
use crate::Error;

/// Rank-3 array over four-indices.
pub type Arr3<T> = [[[T; 4]; 4]; 4];
/// Rank-4 array over four-indices.
pub type Arr4<T> = [[[[T; 4]; 4]; 4]; 4];
/// Rank-3 array over five-indices.
pub type Arr5x3<T> = [[[T; 5]; 5]; 5];

#[inline]
pub fn read3<T: Scalar>(v: &[T]) -> Arr3<T> {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| v[a * 16 + b * 4 + c])))
}

#[inline]
pub fn read4<T: Scalar>(v: &[T]) -> Arr4<T> {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| std::array::from_fn(|d| v[a * 64 + b * 16 + c * 4 + d]))
        })
    })
}

#[inline]
pub fn read5x3<T: Scalar>(v: &[T]) -> Arr5x3<T> {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| v[a * 25 + b * 5 + c])))
}

pub fn write3<T: Scalar>(x: &Arr3<T>, out: &mut [T]) {
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a * 16 + b * 4 + c] = x[a][b][c];
            }
        }
    }
}

pub fn write4<T: Scalar>(x: &Arr4<T>, out: &mut [T]) {
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a * 64 + b * 16 + c * 4 + d] = x[a][b][c][d];
                }
            }
        }
    }
}

pub fn write5x3<T: Scalar>(x: &Arr5x3<T>, out: &mut [T]) {
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                out[a * 25 + b * 5 + c] = x[a][b][c];
            }
        }
    }
}

/// Christoffel symbols `Γ^α_{βμ}` from the inverse metric and `dg[c][a][b] = ∂_c g_{ab}`.
pub fn christoffel<T: Scalar>(ginv: &[[T; 4]; 4], dg: &Arr3<T>) -> Arr3<T> {
    let half = lit::<T>(0.5);
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|m| {
                let mut s = T::zero();
                for d in 0..4 {
                    s += ginv[a][d] * (dg[m][d][b] + dg[b][d][m] - dg[d][b][m]);
                }
                half * s
            })
        })
    })
}

/// Connection coefficients on a lattice, `Γ^α_{βμ}` stored as `[α][β][μ]`.
#[derive(Clone, Debug)]
pub struct Connection4<T> {
    pub coeffs: Field<T>,
    pub torsionfree: bool,
}

impl<T: Scalar> Connection4<T> {
    #[inline]
    pub fn at(&self, p: usize) -> Arr3<T> {
        read3(self.coeffs.at(p))
    }
}

/// Levi-Civita connection from finite-difference metric derivatives.
pub fn levi_civita<T: Scalar>(g: &MetricField<T>) -> Connection4<T> {
    let dg = gradient(g.field());
    let grid = g.grid();
    let kinds = [IndexKind::Four; 3];
    let coeffs = Field::from_points(grid, &kinds, |p, out| {
        let d: Arr3<T> = std::array::from_fn(|c| to_mat(dg[c].at(p)));
        let mut gam = christoffel(&g.inv_at(p), &d);
        for a in 0..4 {
            for b in 0..4 {
                for m in b + 1..4 {
                    let s = lit::<T>(0.5) * (gam[a][b][m] + gam[a][m][b]);
                    gam[a][b][m] = s;
                    gam[a][m][b] = s;
                }
            }
        }
        write3(&gam, out);
    });
    Connection4 {
        coeffs,
        torsionfree: true,
    }
}

/// `R^α_{βκμ} = ∂_κΓ^α_{βμ} − ∂_μΓ^α_{βκ} + Γ^α_{λκ}Γ^λ_{βμ} − Γ^α_{λμ}Γ^λ_{βκ}`.
pub fn riemann_point<T: Scalar>(gam: &Arr3<T>, dgam: &[Arr3<T>; 4]) -> Arr4<T> {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|k| {
                std::array::from_fn(|m| {
                    let mut s = dgam[k][a][b][m] - dgam[m][a][b][k];
                    for l in 0..4 {
                        s += gam[a][l][k] * gam[l][b][m] - gam[a][l][m] * gam[l][b][k];
                    }
                    s
                })
            })
        })
    })
}

/// Riemann tensor field of a connection field.
pub fn riemann<T: Scalar>(conn: &Field<T>) -> Field<T> {
    let d = gradient(conn);
    Field::from_points(conn.grid(), &[IndexKind::Four; 4], |p, out| {
        let dg: [Arr3<T>; 4] = std::array::from_fn(|c| read3(d[c].at(p)));
        write4(&riemann_point(&read3(conn.at(p)), &dg), out);
    })
}

/// Metric, Levi-Civita connection and its Riemann tensor on one lattice.
#[derive(Clone, Debug)]
pub struct Geometry<T> {
    pub metric: MetricField<T>,
    pub levi_civita: Connection4<T>,
    pub riemann: Field<T>,
}

impl<T: Scalar> Geometry<T> {
    pub fn new(metric: MetricField<T>) -> Self {
        let levi_civita = levi_civita(&metric);
        let riemann = riemann(&levi_civita.coeffs);
        Geometry {
            metric,
            levi_civita,
            riemann,
        }
    }

    pub fn grid(&self) -> &crate::lattice::Grid4<T> {
        self.metric.grid()
    }

    #[inline]
    pub fn g(&self, p: usize) -> [[T; 4]; 4] {
        self.metric.at(p)
    }

    #[inline]
    pub fn ginv(&self, p: usize) -> [[T; 4]; 4] {
        self.metric.inv_at(p)
    }

    #[inline]
    pub fn gamma(&self, p: usize) -> Arr3<T> {
        self.levi_civita.at(p)
    }

    #[inline]
    pub fn riemann_at(&self, p: usize) -> Arr4<T> {
        read4(self.riemann.at(p))
    }

    /// Local data at one point.
    pub fn local(&self, p: usize) -> Local<T> {
        Local {
            g: self.g(p),
            gamma: self.gamma(p),
        }
    }
}

/// Metric and Levi-Civita connection at a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Local<T> {
    pub g: [[T; 4]; 4],
    pub gamma: Arr3<T>,
}

impl<T: Scalar> Local<T> {
    /// Flat point: Minkowski metric, vanishing connection.
    pub fn flat() -> Self {
        Local {
            g: crate::lattice::minkowski(),
            gamma: [[[T::zero(); 4]; 4]; 4],
        }
    }
}

/// Torsion `T_{μν}^α` stored as `[μ][ν][α]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Torsion4<T>(pub Arr3<T>);

/// Four-index contorsion block `S^{αβ}_μ` stored as `[α][β][μ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contorsion4<T>(pub Arr3<T>);

impl<T: Scalar> Torsion4<T> {
    /// Antisymmetric part in the first pair of an arbitrary array.
    pub fn antisymmetrized(x: &Arr3<T>) -> Self {
        let h = lit::<T>(0.5);
        Torsion4(std::array::from_fn(|m| {
            std::array::from_fn(|n| std::array::from_fn(|a| h * (x[m][n][a] - x[n][m][a])))
        }))
    }

    /// Trace `T_{νσ}^σ`.
    pub fn trace(&self) -> [T; 4] {
        std::array::from_fn(|n| (0..4).fold(T::zero(), |acc, s| acc + self.0[n][s][s]))
    }
}

impl<T: Scalar> Contorsion4<T> {
    pub fn antisymmetrized(x: &Arr3<T>) -> Self {
        let h = lit::<T>(0.5);
        Contorsion4(std::array::from_fn(|a| {
            std::array::from_fn(|b| std::array::from_fn(|m| h * (x[a][b][m] - x[b][a][m])))
        }))
    }

    /// `s^α_{βμ} = g_{βω} S^{αω}_μ`.
    pub fn lowered_middle(&self, g: &[[T; 4]; 4]) -> Arr3<T> {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                std::array::from_fn(|m| {
                    (0..4).fold(T::zero(), |acc, w| acc + g[b][w] * self.0[a][w][m])
                })
            })
        })
    }
}

/// `S^{αβ}_μ = g^{ασ} g^{βτ} (T_{στμ} − T_{τμσ} − T_{μστ})`.
pub fn contorsion_from_torsion<T: Scalar>(
    t: &Torsion4<T>,
    g: &[[T; 4]; 4],
    ginv: &[[T; 4]; 4],
) -> Contorsion4<T> {
    // fully lowered torsion T_{στμ} = T_{στ}^a g_{aμ}
    let tl: Arr3<T> = std::array::from_fn(|s| {
        std::array::from_fn(|u| {
            std::array::from_fn(|m| (0..4).fold(T::zero(), |acc, a| acc + t.0[s][u][a] * g[a][m]))
        })
    });
    let sl: Arr3<T> = std::array::from_fn(|s| {
        std::array::from_fn(|u| std::array::from_fn(|m| tl[s][u][m] - tl[u][m][s] - tl[m][s][u]))
    });
    Contorsion4(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|m| {
                let mut acc = T::zero();
                for s in 0..4 {
                    for u in 0..4 {
                        acc += ginv[a][s] * ginv[b][u] * sl[s][u][m];
                    }
                }
                acc
            })
        })
    }))
}

/// `T_{μν}^α = −S^α_{[μν]}` with `S^α_{μν} = g_{μω} S^{αω}_ν`.
pub fn torsion_from_contorsion<T: Scalar>(s: &Contorsion4<T>, g: &[[T; 4]; 4]) -> Torsion4<T> {
    let sm = s.lowered_middle(g);
    let h = lit::<T>(0.5);
    Torsion4(std::array::from_fn(|m| {
        std::array::from_fn(|n| std::array::from_fn(|a| -h * (sm[a][m][n] - sm[a][n][m])))
    }))
}

/// Contorsion 1-form `s^{KL}_A` at a point: the four-index block `S^{αβ}_μ`,
/// the free antisymmetric block `S^{αβ}_5` and the fixed entries `s^{α5}_A = δ^α_A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContorsionForm<T> {
    pub s4: Contorsion4<T>,
    pub s5: [[T; 4]; 4],
}

impl<T: Scalar> ContorsionForm<T> {
    pub fn zero() -> Self {
        ContorsionForm {
            s4: Contorsion4([[[T::zero(); 4]; 4]; 4]),
            s5: [[T::zero(); 4]; 4],
        }
    }

    /// Component `s^{KL}_A` for five-indices.
    #[inline]
    pub fn get(&self, k: usize, l: usize, a: usize) -> T {
        match (k < 4, l < 4) {
            (true, true) => {
                if a < 4 {
                    self.s4.0[k][l][a]
                } else {
                    self.s5[k][l]
                }
            }
            (true, false) => delta::<T>(k, a),
            (false, true) => -delta::<T>(l, a),
            (false, false) => T::zero(),
        }
    }

    /// `s^α_{β5} = g_{βω} S^{αω}_5`.
    pub fn s5_mixed(&self, g: &[[T; 4]; 4]) -> [[T; 4]; 4] {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| (0..4).fold(T::zero(), |acc, w| acc + g[b][w] * self.s5[a][w]))
        })
    }

    /// `s_{μν}^5 = g_{μα} g_{νβ} S^{αβ}_5 h^{55}`.
    pub fn s5_lowered(&self, g: &[[T; 4]; 4], h55: T) -> [[T; 4]; 4] {
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                let mut acc = T::zero();
                for a in 0..4 {
                    for b in 0..4 {
                        acc += g[m][a] * g[n][b] * self.s5[a][b];
                    }
                }
                acc * h55
            })
        })
    }
}

/// `σ(u)^{KL} = s^{KL}_A u^A`.
pub fn sigma_map<T: Scalar>(s: &ContorsionForm<T>, u: &[T; 5]) -> Bivector5<T> {
    Bivector5(std::array::from_fn(|i| {
        let (k, l) = ADJ_PAIRS[i];
        (0..5).fold(T::zero(), |acc, a| acc + s.get(k, l, a) * u[a])
    }))
}

/// Contorsion 1-form sampled on a lattice (`S^{αβ}_μ` with 64 and `S^{αβ}_5` with 16 components).
#[derive(Clone, Debug)]
pub struct ContorsionField<T> {
    pub s4: Field<T>,
    pub s5: Field<T>,
}

impl<T: Scalar> ContorsionField<T> {
    pub fn zero(grid: &crate::lattice::Grid4<T>) -> Self {
        ContorsionField {
            s4: Field::zeros(grid, &[IndexKind::Four; 3]),
            s5: Field::zeros(grid, &[IndexKind::Four; 2]),
        }
    }

    /// Samples `f(x) = (S^{αβ}_μ, S^{αβ}_5)`, antisymmetrizing the upper pair.
    pub fn from_fn(
        grid: &crate::lattice::Grid4<T>,
        f: impl Fn([T; 4]) -> ContorsionForm<T>,
    ) -> Self {
        let mut out = Self::zero(grid);
        for p in 0..grid.len() {
            let c = f(grid.coord(p));
            let s4 = Contorsion4::antisymmetrized(&c.s4.0);
            write3(&s4.0, out.s4.at_mut(p));
            let o = out.s5.at_mut(p);
            for a in 0..4 {
                for b in 0..4 {
                    o[a * 4 + b] = lit::<T>(0.5) * (c.s5[a][b] - c.s5[b][a]);
                }
            }
        }
        out
    }

    #[inline]
    pub fn at(&self, p: usize) -> ContorsionForm<T> {
        ContorsionForm {
            s4: Contorsion4(read3(self.s4.at(p))),
            s5: to_mat(self.s5.at(p)),
        }
    }
}

/// Torsionful metric connection `Γ = Γ̇ − s` with `s^α_{βμ} = g_{βω}S^{αω}_μ`.
pub fn torsionful_connection<T: Scalar>(
    geo: &Geometry<T>,
    s: &ContorsionField<T>,
) -> Connection4<T> {
    let coeffs = Field::from_points(geo.grid(), &[IndexKind::Four; 3], |p, out| {
        let gd = geo.gamma(p);
        let sm = Contorsion4(read3(s.s4.at(p))).lowered_middle(&geo.g(p));
        let mut c = gd;
        for a in 0..4 {
            for b in 0..4 {
                for m in 0..4 {
                    c[a][b][m] = gd[a][b][m] - sm[a][b][m];
                }
            }
        }
        write3(&c, out);
    });
    Connection4 {
        coeffs,
        torsionfree: false,
    }
}

/// σ-compatible five-vector connection at a point.
pub fn five_connection_sigma<T: Scalar>(
    g: &[[T; 4]; 4],
    s: &ContorsionForm<T>,
    gamma: &Arr3<T>,
) -> Arr5x3<T> {
    let mut h = [[[T::zero(); 5]; 5]; 5];
    let sm = s.s4.lowered_middle(g);
    let s5 = s.s5_mixed(g);
    for a in 0..4 {
        for b in 0..4 {
            for m in 0..4 {
                h[a][b][m] = gamma[a][b][m] - sm[a][b][m];
            }
            h[a][b][I5] = -s5[a][b];
            h[I5][a][b] = -g[a][b];
        }
    }
    h
}

/// Locally symmetric five-vector connection at a point.
pub fn five_connection_local_symmetric<T: Scalar>(
    g: &[[T; 4]; 4],
    omega: T,
    gamma: &Arr3<T>,
) -> Arr5x3<T> {
    let mut h = [[[T::zero(); 5]; 5]; 5];
    for a in 0..4 {
        for b in 0..4 {
            h[a][b][..4].copy_from_slice(&gamma[a][b]);
            h[I5][a][b] = -g[a][b];
        }
    }
    h[I5][I5][I5] = omega;
    h
}

/// σ-compatible connection sampled on a lattice (125 components per point).
pub fn five_connection_sigma_field<T: Scalar>(
    geo: &Geometry<T>,
    s: &ContorsionField<T>,
) -> Field<T> {
    Field::from_points(geo.grid(), &[IndexKind::Five; 3], |p, out| {
        write5x3(
            &five_connection_sigma(&geo.g(p), &s.at(p), &geo.gamma(p)),
            out,
        );
    })
}

/// `t_{KL}^A = H^A_{[KL]}` stored as `[K][L][A]`.
pub fn five_torsion<T: Scalar>(h: &Arr5x3<T>) -> Arr5x3<T> {
    let half = lit::<T>(0.5);
    std::array::from_fn(|k| {
        std::array::from_fn(|l| std::array::from_fn(|a| half * (h[a][k][l] - h[a][l][k])))
    })
}

/// Convention for the bivector connection coefficients on five-vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GConvention {
    /// `G^5_{βμ5} = −g_{βμ}`: the `G_{μ5}` act as translation generators.
    #[default]
    WithTranslation,
    /// `G^5_{Bμ5} = 0`: the `e_μ∧e_5` directions only differentiate.
    RotationOnly,
}

impl GConvention {
    pub fn from_name(name: &str) -> Result<Self, Error> {
        match name {
            "with-translation" => Ok(GConvention::WithTranslation),
            "rotation-only" => Ok(GConvention::RotationOnly),
            other => Err(Error::Config(format!(
                "unknown connection convention '{other}'"
            ))),
        }
    }
}

/// Bivector connection coefficients `G^A_{B𝔄}` stored as `[𝔄][A][B]`.
pub type GTable<T> = [[[T; 5]; 5]; 10];

/// Bivector connection coefficients in a regular coordinate basis.
pub fn bivector_connection_g<T: Scalar>(local: &Local<T>, conv: GConvention) -> GTable<T> {
    let g = &local.g;
    let mut tab = [[[T::zero(); 5]; 5]; 10];
    for (i, &(k, l)) in ADJ_PAIRS.iter().enumerate() {
        if l == I5 {
            for a in 0..4 {
                for b in 0..4 {
                    tab[i][a][b] = local.gamma[a][b][k];
                }
                if conv == GConvention::WithTranslation {
                    tab[i][I5][a] = -g[a][k];
                }
            }
        } else {
            for b in 0..4 {
                tab[i][l][b] += g[k][b];
                tab[i][k][b] -= g[l][b];
            }
        }
    }
    tab
}

/// Upper/lower position of a tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Up,
    Down,
}

/// Adds the linear action of a matrix `m^a_b` on every slot of a tensor:
/// `+m^a_λ X^{..λ..}` on upper slots and `−X_{..λ..} m^λ_b` on lower slots, scaled by `c`.
pub fn add_matrix_action<T: Scalar>(
    x: &[T],
    slots: &[Slot],
    n: usize,
    c: T,
    m: impl Fn(usize, usize) -> T,
    out: &mut [T],
) {
    let rank = slots.len();
    if rank == 0 || c == T::zero() {
        return;
    }
    let len = x.len();
    for (s, &slot) in slots.iter().enumerate() {
        let stride = n.pow((rank - 1 - s) as u32);
        for off in 0..len {
            let i = (off / stride) % n;
            let base = off - i * stride;
            let mut acc = T::zero();
            for lam in 0..n {
                let xv = x[base + lam * stride];
                if xv != T::zero() {
                    acc += match slot {
                        Slot::Up => m(i, lam) * xv,
                        Slot::Down => -(xv * m(lam, i)),
                    };
                }
            }
            out[off] += c * acc;
        }
    }
}

/// Kind of tensor a derivative operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Space {
    Scalar,
    Four,
    Five,
    Adjoint,
}

fn space_of<T: Scalar>(f: &Field<T>, slots: &[Slot]) -> Result<Space, Error> {
    let k = f.kinds();
    if k.is_empty() {
        return Ok(Space::Scalar);
    }
    if k.len() != slots.len() && k != [IndexKind::Adjoint] {
        return Err(Error::Index("slot list does not match field rank".into()));
    }
    if k.iter().all(|&x| x == IndexKind::Four) {
        Ok(Space::Four)
    } else if k.iter().all(|&x| x == IndexKind::Five) {
        Ok(Space::Five)
    } else if k == [IndexKind::Adjoint] {
        Ok(Space::Adjoint)
    } else {
        Err(Error::Index(format!("unsupported field kind {k:?}")))
    }
}

/// Four-index covariant derivative `∇_μ X` along coordinate axis `mu`.
pub fn covariant_derivative_four<T: Scalar>(
    x: &Field<T>,
    slots: &[Slot],
    conn: &Connection4<T>,
    mu: usize,
) -> Result<Field<T>, Error> {
    if space_of(x, slots)? == Space::Five {
        return Err(Error::Index(
            "five-index field given to a four-index derivative".into(),
        ));
    }
    let mut out = partial_derivative(x, mu)?;
    let grid = x.grid().clone();
    for p in 0..grid.len() {
        let gam = conn.at(p);
        let xs = x.at(p).to_vec();
        add_matrix_action(&xs, slots, 4, T::one(), |a, b| gam[a][b][mu], out.at_mut(p));
    }
    Ok(out)
}

/// Five-index covariant derivative `⊞_C X` with connection field `H^A_{BC}` (125 components);
/// direction `C = 4` is the fifth one, along which the partial derivative vanishes.
pub fn covariant_derivative_five<T: Scalar>(
    x: &Field<T>,
    slots: &[Slot],
    h: &Field<T>,
    dir: usize,
) -> Result<Field<T>, Error> {
    if space_of(x, slots)? == Space::Four {
        return Err(Error::Index(
            "four-index field given to a five-index derivative".into(),
        ));
    }
    let mut out = if dir < 4 {
        partial_derivative(x, dir)?
    } else {
        Field::zeros(x.grid(), x.kinds())
    };
    for p in 0..x.grid().len() {
        let hp = read5x3(h.at(p));
        let xs = x.at(p).to_vec();
        add_matrix_action(&xs, slots, 5, T::one(), |a, b| hp[a][b][dir], out.at_mut(p));
    }
    Ok(out)
}

/// Pointwise bivector derivative `D_𝒜 X` given the component derivatives `dx[σ] = ∂_σ X`.
///
/// Four-tensors: `a^σ ∇̇_σ X + M̂_{𝒜^𝒵} X`. Five-tensors and bivectors use the
/// `G^A_{Bσ5}` table of `conv` for the directional part.
pub fn bivector_derivative_point<T: Scalar>(
    x: &[T],
    dx: &[&[T]; 4],
    slots: &[Slot],
    five: bool,
    a: &Bivector5<T>,
    local: &Local<T>,
    conv: GConvention,
    out: &mut [T],
) {
    let (e, z) = a.split();
    for v in out.iter_mut() {
        *v = T::zero();
    }
    for s in 0..4 {
        if e[s] != T::zero() {
            for (o, d) in out.iter_mut().zip(dx[s].iter()) {
                *o += e[s] * *d;
            }
        }
    }
    if five {
        let tab = bivector_connection_g(local, conv);
        for s in 0..4 {
            let gs = &tab[E_SLOTS[s]];
            add_matrix_action(x, slots, 5, e[s], |i, j| gs[i][j], out);
        }
        let mh = m_hat_5(&z, &local.g);
        add_matrix_action(x, slots, 5, T::one(), |i, j| mh[i][j], out);
    } else {
        for s in 0..4 {
            add_matrix_action(x, slots, 4, e[s], |i, j| local.gamma[i][j][s], out);
        }
        let mh = m_hat_4(&z, &local.g);
        add_matrix_action(x, slots, 4, T::one(), |i, j| mh[i][j], out);
    }
}

/// Action matrices on bivectors of every `G_𝔄` (with-translation table), `[𝔄][𝔎][𝔏]`.
pub type BivectorOps<T> = [[[T; 10]; 10]; 10];

/// [`BivectorOps`] at a point.
pub fn bivector_ops<T: Scalar>(local: &Local<T>) -> BivectorOps<T> {
    let tab = bivector_connection_g(local, GConvention::WithTranslation);
    std::array::from_fn(|i| bivector_action(&tab[i]))
}

/// `D_𝒜ℬ = a^σ∂_σℬ + Σ_𝔄 A^𝔄 G_𝔄·ℬ` using precomputed action matrices.
pub fn derivative_with_ops<T: Scalar>(
    b: &Bivector5<T>,
    db: &[Bivector5<T>; 4],
    a: &Bivector5<T>,
    ops: &BivectorOps<T>,
) -> Bivector5<T> {
    let mut out = [T::zero(); 10];
    for s in 0..4 {
        let e = a.0[E_SLOTS[s]];
        if e != T::zero() {
            for k in 0..10 {
                out[k] += e * db[s].0[k];
            }
        }
    }
    for i in 0..10 {
        let ai = a.0[i];
        if ai == T::zero() {
            continue;
        }
        for k in 0..10 {
            let mut acc = T::zero();
            for l in 0..10 {
                acc += ops[i][k][l] * b.0[l];
            }
            out[k] += ai * acc;
        }
    }
    Bivector5(out)
}

/// Bivector derivative of a bivector given its partial derivatives.
pub fn bivector_derivative_of_bivector<T: Scalar>(
    b: &Bivector5<T>,
    db: &[Bivector5<T>; 4],
    a: &Bivector5<T>,
    local: &Local<T>,
    conv: GConvention,
) -> Bivector5<T> {
    let tab = bivector_connection_g(local, conv);
    let ops: BivectorOps<T> = std::array::from_fn(|i| bivector_action(&tab[i]));
    derivative_with_ops(b, db, a, &ops)
}

/// Bivector derivative of a tensor field along a bivector field.
///
/// Supported kinds: scalar, all-four-index, all-five-index and single adjoint slot.
pub fn bivector_derivative<T: Scalar>(
    x: &Field<T>,
    slots: &[Slot],
    a: &Field<T>,
    geo: &Geometry<T>,
    conv: GConvention,
) -> Result<Field<T>, Error> {
    let space = space_of(x, slots)?;
    if a.kinds() != [IndexKind::Adjoint] {
        return Err(Error::Index(
            "direction field must carry one adjoint index".into(),
        ));
    }
    let d = gradient(x);
    let mut out = Field::zeros(x.grid(), x.kinds());
    for p in 0..x.grid().len() {
        let ap = Bivector5(a.at(p).try_into().expect("ten components"));
        let local = geo.local(p);
        match space {
            Space::Adjoint => {
                let b = Bivector5(x.at(p).try_into().expect("ten components"));
                let db: [Bivector5<T>; 4] =
                    std::array::from_fn(|s| Bivector5(d[s].at(p).try_into().unwrap()));
                let r = bivector_derivative_of_bivector(&b, &db, &ap, &local, conv);
                out.at_mut(p).copy_from_slice(&r.0);
            }
            _ => {
                let dx = [d[0].at(p), d[1].at(p), d[2].at(p), d[3].at(p)];
                let xs = x.at(p).to_vec();
                bivector_derivative_point(
                    &xs,
                    &dx,
                    slots,
                    space == Space::Five,
                    &ap,
                    &local,
                    conv,
                    out.at_mut(p),
                );
            }
        }
    }
    Ok(out)
}

/// Affine bivector derivative `D̄_𝒜 X = a^σ ⊞_σ X + M̂_{𝒜^𝒵} X` with five-connection field `h`.
///
/// Four-tensors see only the four-block `H^α_{βσ}`.
pub fn affine_bivector_derivative<T: Scalar>(
    x: &Field<T>,
    slots: &[Slot],
    a: &Field<T>,
    h: &Field<T>,
    metric: &MetricField<T>,
) -> Result<Field<T>, Error> {
    let space = space_of(x, slots)?;
    if space == Space::Adjoint {
        return Err(Error::Index(
            "affine derivative of bivector fields is not provided".into(),
        ));
    }
    let five = space == Space::Five;
    let n = if five { 5 } else { 4 };
    let d = gradient(x);
    let mut out = Field::zeros(x.grid(), x.kinds());
    for p in 0..x.grid().len() {
        let ap = Bivector5(a.at(p).try_into().expect("ten components"));
        let (e, z) = ap.split();
        let hp = read5x3(h.at(p));
        let xs = x.at(p).to_vec();
        let o = out.at_mut(p);
        for s in 0..4 {
            for (ov, dv) in o.iter_mut().zip(d[s].at(p)) {
                *ov += e[s] * *dv;
            }
            add_matrix_action(&xs, slots, n, e[s], |i, j| hp[i][j][s], o);
        }
        let g = metric.at(p);
        if five {
            let mh = m_hat_5(&z, &g);
            add_matrix_action(&xs, slots, 5, T::one(), |i, j| mh[i][j], o);
        } else {
            let mh = m_hat_4(&z, &g);
            add_matrix_action(&xs, slots, 4, T::one(), |i, j| mh[i][j], o);
        }
    }
    Ok(out)
}

/// `(✳⊞_A M)^A_{BC} = (⊞_A M)^A_{BC} − 2 t_{AK}^K M^A_{BC}` for a five-tensor field
/// with one upper and two lower indices; returns the 25 components `[B][C]`.
pub fn modified_divergence<T: Scalar>(m: &Field<T>, h: &Field<T>) -> Result<Field<T>, Error> {
    if m.kinds() != [IndexKind::Five; 3] {
        return Err(Error::Index("expected a rank-3 five-tensor".into()));
    }
    let slots = [Slot::Up, Slot::Down, Slot::Down];
    let mut out = Field::zeros(m.grid(), &[IndexKind::Five; 2]);
    for dir in 0..5 {
        let dm = covariant_derivative_five(m, &slots, h, dir)?;
        for p in 0..m.grid().len() {
            let src = dm.at(p);
            let o = out.at_mut(p);
            for bc in 0..25 {
                o[bc] += src[dir * 25 + bc];
            }
        }
    }
    for p in 0..m.grid().len() {
        let t = five_torsion(&read5x3(h.at(p)));
        let tr: [T; 5] = std::array::from_fn(|a| (0..5).fold(T::zero(), |acc, k| acc + t[a][k][k]));
        let mp = m.at(p).to_vec();
        let o = out.at_mut(p);
        for a in 0..5 {
            for bc in 0..25 {
                o[bc] -= lit::<T>(2.0) * tr[a] * mp[a * 25 + bc];
            }
        }
    }
    Ok(out)
}

/// Four-index modified divergence `(✳∇_α X)^α_{…} = ∇_α X^α_{…} − 2T_{αω}^ω X^α_{…}`
/// of a field whose first slot is upper; `torsion` holds `T_{μν}^α` (64 components).
pub fn modified_divergence_four<T: Scalar>(
    x: &Field<T>,
    slots: &[Slot],
    conn: &Connection4<T>,
    torsion: &Field<T>,
) -> Result<Field<T>, Error> {
    if slots.first() != Some(&Slot::Up) {
        return Err(Error::Index("first slot must be upper".into()));
    }
    let rest = x.kinds()[1..].to_vec();
    let inner: usize = rest.iter().map(|k| k.range()).product();
    let mut out = Field::zeros(x.grid(), &rest);
    for a in 0..4 {
        let d = covariant_derivative_four(x, slots, conn, a)?;
        for p in 0..x.grid().len() {
            let src = d.at(p);
            let t = Torsion4(read3(torsion.at(p))).trace();
            let xs = x.at(p);
            let o = out.at_mut(p);
            for r in 0..inner {
                o[r] += src[a * inner + r] - lit::<T>(2.0) * t[a] * xs[a * inner + r];
            }
        }
    }
    Ok(out)
}

/// `M̂` of a bivector's 𝒵-part acting on five-vectors, exposed for callers assembling operators.
pub fn m_hat_of<T: Scalar>(a: &Bivector5<T>, g: &[[T; 4]; 4]) -> [[T; 5]; 5] {
    m_hat_5(&a.split().1, g)
}

/// Five-metric for the degenerate lowering used by the bivector coefficients.
pub fn poincare_metric<T: Scalar>(local: &Local<T>, kappa: T) -> FiveMetric<T> {
    FiveMetric::poincare(local.g, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::minkowski;

    #[test]
    fn single_contorsion_component() {
        let g = minkowski::<f64>();
        let mut s = [[[0.0; 4]; 4]; 4];
        s[0][1][2] = 0.7;
        s[1][0][2] = -0.7;
        let t = torsion_from_contorsion(&Contorsion4(s), &g);
        assert!((t.0[1][2][0] - 0.35).abs() < 1e-15);
        assert!((t.0[2][1][0] + 0.35).abs() < 1e-15);
    }

    #[test]
    fn sigma_fixed_block() {
        let s = ContorsionForm::<f64>::zero();
        let b = sigma_map(&s, &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(b.0, Bivector5::basis(3).0);
        let b5 = sigma_map(&s, &[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(b5.max_abs(), 0.0);
    }

    #[test]
    fn g_table_flat_values() {
        let l = Local::<f64>::flat();
        let t = bivector_connection_g(&l, GConvention::WithTranslation);
        let eta = minkowski::<f64>();
        for mu in 0..4 {
            for b in 0..4 {
                assert_eq!(t[E_SLOTS[mu]][I5][b], -eta[b][mu]);
            }
        }
        let r = bivector_connection_g(&l, GConvention::RotationOnly);
        for mu in 0..4 {
            assert!(r[E_SLOTS[mu]].iter().flatten().all(|v| *v == 0.0));
        }
    }
}
