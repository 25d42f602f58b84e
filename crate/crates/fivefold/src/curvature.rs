//! Bivector-field commutators, the curvature family of the bivector derivative,
//! the five-vector curvature and the Jacobi/Bianchi residuals.

use crate::algebra::{bivector_action, m_hat_4, Bivector5, ADJ_PAIRS, I5};
use crate::connections::{
    bivector_connection_g, bivector_derivative_point, bivector_ops, derivative_with_ops, read3,
    read5x3, Arr4, BivectorOps, GConvention, GTable, Geometry, Local, Slot,
};
use crate::lattice::{gradient, to_mat, Field, IndexKind};
use crate::scalar::{lit, Scalar};
use crate::Error;

/// How the bivector-field commutator treats the purely 𝒵 contribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CommutatorConvention {
    /// `D_𝒜ℬ − D_ℬ𝒜`.
    Plain,
    /// Plain minus the full 𝒵𝒵 term.
    Corrected,
    /// Plain minus half the 𝒵𝒵 term.
    #[default]
    Halved,
}

impl CommutatorConvention {
    pub fn from_name(name: &str) -> Result<Self, Error> {
        match name {
            "plain" => Ok(Self::Plain),
            "corrected" => Ok(Self::Corrected),
            "halved" => Ok(Self::Halved),
            other => Err(Error::Config(format!(
                "unknown commutator convention '{other}'"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Plain => "plain",
            Self::Corrected => "corrected",
            Self::Halved => "halved",
        }
    }

    /// Weight of the subtracted 𝒵𝒵 term.
    pub fn zz_weight<T: Scalar>(self) -> T {
        match self {
            Self::Plain => T::zero(),
            Self::Corrected => T::one(),
            Self::Halved => lit(0.5),
        }
    }
}

/// `M̂` of a four-matrix applied to a bivector (Leibniz on both slots, four-block only).
pub fn m_hat_on_bivector<T: Scalar>(m: &[[T; 4]; 4], b: &Bivector5<T>) -> Bivector5<T> {
    let f = b.full();
    let mut out = [[T::zero(); 5]; 5];
    for k in 0..5 {
        for l in 0..5 {
            let mut acc = T::zero();
            if k < 4 {
                for p in 0..4 {
                    acc += m[k][p] * f[p][l];
                }
            }
            if l < 4 {
                for p in 0..4 {
                    acc += m[l][p] * f[k][p];
                }
            }
            out[k][l] = acc;
        }
    }
    Bivector5::from_full(&out)
}

/// `D_{𝒜^𝒵}ℬ^𝒵 − D_{ℬ^𝒵}𝒜^𝒵 = M̂_{𝒜^𝒵}ℬ^𝒵 − M̂_{ℬ^𝒵}𝒜^𝒵`.
pub fn zz_term<T: Scalar>(a: &Bivector5<T>, b: &Bivector5<T>, g: &[[T; 4]; 4]) -> Bivector5<T> {
    let (az, bz) = (a.z_only(), b.z_only());
    let ma = m_hat_4(&a.split().1, g);
    let mb = m_hat_4(&b.split().1, g);
    m_hat_on_bivector(&ma, &bz) - m_hat_on_bivector(&mb, &az)
}

/// Pointwise commutator of two bivector fields from their values and partial derivatives.
pub fn commutator_point<T: Scalar>(
    a: &Bivector5<T>,
    b: &Bivector5<T>,
    da: &[Bivector5<T>; 4],
    db: &[Bivector5<T>; 4],
    local: &Local<T>,
    conv: CommutatorConvention,
) -> Bivector5<T> {
    commutator_with_ops(a, b, da, db, &bivector_ops(local), conv)
}

/// [`commutator_point`] with precomputed action matrices.
pub fn commutator_with_ops<T: Scalar>(
    a: &Bivector5<T>,
    b: &Bivector5<T>,
    da: &[Bivector5<T>; 4],
    db: &[Bivector5<T>; 4],
    ops: &BivectorOps<T>,
    conv: CommutatorConvention,
) -> Bivector5<T> {
    let plain = derivative_with_ops(b, db, a, ops) - derivative_with_ops(a, da, b, ops);
    let w = conv.zz_weight::<T>();
    if w == T::zero() {
        return plain;
    }
    let (az, bz) = (a.z_only(), b.z_only());
    let mut zz = [T::zero(); 10];
    for z in 0..10 {
        if ADJ_PAIRS[z].1 == I5 {
            continue;
        }
        for k in 0..10 {
            let mut acc = T::zero();
            for l in 0..10 {
                acc += ops[z][k][l] * (a.0[z] * bz.0[l] - b.0[z] * az.0[l]);
            }
            zz[k] += acc;
        }
    }
    plain - Bivector5(zz) * w
}

fn biv_at<T: Scalar>(f: &Field<T>, p: usize) -> Bivector5<T> {
    Bivector5(f.at(p).try_into().expect("ten components"))
}

/// Commutator of two bivector fields on a lattice.
pub fn bivector_commutator<T: Scalar>(
    a: &Field<T>,
    b: &Field<T>,
    geo: &Geometry<T>,
    conv: CommutatorConvention,
) -> Result<Field<T>, Error> {
    if a.kinds() != [IndexKind::Adjoint] || b.kinds() != [IndexKind::Adjoint] {
        return Err(Error::Index(
            "commutator arguments must be bivector fields".into(),
        ));
    }
    let da = gradient(a);
    let db = gradient(b);
    Ok(Field::from_points(
        a.grid(),
        &[IndexKind::Adjoint],
        |p, out| {
            let dap: [Bivector5<T>; 4] = std::array::from_fn(|s| biv_at(&da[s], p));
            let dbp: [Bivector5<T>; 4] = std::array::from_fn(|s| biv_at(&db[s], p));
            let c = commutator_point(
                &biv_at(a, p),
                &biv_at(b, p),
                &dap,
                &dbp,
                &geo.local(p),
                conv,
            );
            out.copy_from_slice(&c.0);
        },
    ))
}

/// Commutation constants `[e_𝔄, e_𝔅] = Q^𝔖_{𝔄𝔅} e_𝔖` of the coordinate basis bivectors,
/// stored as `[𝔄][𝔅]`.
pub fn q_constants<T: Scalar>(
    local: &Local<T>,
    conv: CommutatorConvention,
) -> [[Bivector5<T>; 10]; 10] {
    q_from_ops(&bivector_ops(local), conv)
}

/// Same as [`q_constants`] from precomputed action matrices.
pub fn q_from_ops<T: Scalar>(
    ops: &BivectorOps<T>,
    conv: CommutatorConvention,
) -> [[Bivector5<T>; 10]; 10] {
    let w = conv.zz_weight::<T>();
    let is_z = |i: usize| ADJ_PAIRS[i].1 != I5;
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let scale = if is_z(i) && is_z(j) {
                T::one() - w
            } else {
                T::one()
            };
            Bivector5(std::array::from_fn(|k| {
                scale * (ops[i][k][j] - ops[j][k][i])
            }))
        })
    })
}

/// `𝖱^A_{B𝔄𝔅}` at one point, stored as `[A][B][𝔄][𝔅]` over five-indices.
pub type R5Point<T> = [[[[T; 10]; 10]; 5]; 5];

/// Curvature of the bivector connection from `G`, its partial derivatives `dg[σ]` and `Q`.
///
/// `𝖱_{𝔄𝔅} = ∂_𝔄G_𝔅 − ∂_𝔅G_𝔄 + G_𝔄G_𝔅 − G_𝔅G_𝔄 − Q^𝔖_{𝔄𝔅}G_𝔖`, where the
/// derivative along `e_κ∧e_5` is `∂_κ` and along `e_μ∧e_ν` vanishes.
pub fn curvature_from_g<T: Scalar>(
    gt: &GTable<T>,
    dg: &[GTable<T>; 4],
    q: &[[Bivector5<T>; 10]; 10],
) -> R5Point<T> {
    let mut r = [[[[T::zero(); 10]; 10]; 5]; 5];
    let dir = |i: usize| -> Option<usize> {
        let (k, l) = ADJ_PAIRS[i];
        (l == I5).then_some(k)
    };
    for i in 0..10 {
        for j in (i + 1)..10 {
            let mut m = [[T::zero(); 5]; 5];
            if let Some(k) = dir(i) {
                for a in 0..5 {
                    for b in 0..5 {
                        m[a][b] += dg[k][j][a][b];
                    }
                }
            }
            if let Some(k) = dir(j) {
                for a in 0..5 {
                    for b in 0..5 {
                        m[a][b] -= dg[k][i][a][b];
                    }
                }
            }
            for a in 0..5 {
                for b in 0..5 {
                    let mut s = T::zero();
                    for c in 0..5 {
                        s += gt[i][a][c] * gt[j][c][b] - gt[j][a][c] * gt[i][c][b];
                    }
                    for sgm in 0..10 {
                        s -= q[i][j].0[sgm] * gt[sgm][a][b];
                    }
                    m[a][b] += s;
                }
            }
            for a in 0..5 {
                for b in 0..5 {
                    r[a][b][i][j] = m[a][b];
                    r[a][b][j][i] = -m[a][b];
                }
            }
        }
    }
    r
}

/// Lattice evaluator for the curvature family; holds the metric and connection derivatives.
pub struct CurvatureFamily<'a, T> {
    geo: &'a Geometry<T>,
    dgamma: [Field<T>; 4],
    dmetric: [Field<T>; 4],
    pub conv: CommutatorConvention,
}

impl<'a, T: Scalar> CurvatureFamily<'a, T> {
    pub fn new(geo: &'a Geometry<T>, conv: CommutatorConvention) -> Self {
        CurvatureFamily {
            geo,
            dgamma: gradient(&geo.levi_civita.coeffs),
            dmetric: gradient(geo.metric.field()),
            conv,
        }
    }

    /// Partial derivatives of the `G` table at a point (same stencil as every other derivative).
    fn dg_table(&self, p: usize) -> [GTable<T>; 4] {
        std::array::from_fn(|s| {
            let dgam = read3(self.dgamma[s].at(p));
            let dgm = to_mat(self.dmetric[s].at(p));
            // G is linear in (Γ̇, g), so its derivative is the table built from the derivatives
            bivector_connection_g(
                &Local {
                    g: dgm,
                    gamma: dgam,
                },
                GConvention::WithTranslation,
            )
        })
    }

    /// `𝖱⁽⁵⁾` at a point.
    pub fn r5_at(&self, p: usize) -> R5Point<T> {
        let local = self.geo.local(p);
        let gt = bivector_connection_g(&local, GConvention::WithTranslation);
        let q = q_constants(&local, self.conv);
        curvature_from_g(&gt, &self.dg_table(p), &q)
    }

    /// `𝖱⁽⁴⁾`: the four-block of `𝖱⁽⁵⁾`, stored as `[α][β][𝔄][𝔅]`.
    pub fn r4_at(&self, p: usize) -> [[[[T; 10]; 10]; 4]; 4] {
        let r = self.r5_at(p);
        std::array::from_fn(|a| std::array::from_fn(|b| r[a][b]))
    }

    /// `⟨𝖱⁽⁴⁾, ℬ∧𝒞⟩^α_β = Σ_{𝔄<𝔅} 𝖱^α_{β𝔄𝔅}(B^𝔄C^𝔅 − B^𝔅C^𝔄)`.
    pub fn contract_r4(
        r4: &[[[[T; 10]; 10]; 4]; 4],
        b: &Bivector5<T>,
        c: &Bivector5<T>,
    ) -> [[T; 4]; 4] {
        std::array::from_fn(|a| {
            std::array::from_fn(|bb| {
                let mut s = T::zero();
                for i in 0..10 {
                    for j in 0..10 {
                        s += r4[a][bb][i][j] * b.0[i] * c.0[j];
                    }
                }
                s
            })
        })
    }

    pub fn geometry(&self) -> &Geometry<T> {
        self.geo
    }
}

/// `𝖱⁽¹⁰⁾`: the action of each `𝖱^A_{B𝔄𝔅}` on bivectors, `[𝔄][𝔅][𝔎][𝔏]` with
/// `(X e_𝔏)^𝔎` for `X = 𝖱_{𝔄𝔅}` acting by Leibniz on both slots.
pub fn curvature_r10<T: Scalar>(r5: &R5Point<T>) -> Vec<T> {
    let mut out = vec![T::zero(); 10_000];
    for i in 0..10 {
        for j in 0..10 {
            let x: [[T; 5]; 5] = std::array::from_fn(|a| std::array::from_fn(|b| r5[a][b][i][j]));
            let block = bivector_action(&x);
            for k in 0..10 {
                for l in 0..10 {
                    out[((i * 10 + j) * 10 + k) * 10 + l] = block[k][l];
                }
            }
        }
    }
    out
}

/// Five-vector curvature `R^A_{BCD}` (stored `[A][B][C][D]`) from `H` and its partial derivatives.
pub fn five_curvature_point<T: Scalar>(h: &[[[T; 5]; 5]; 5], dh: &[[[[T; 5]; 5]; 5]; 4]) -> Vec<T> {
    let mut r = vec![T::zero(); 625];
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    let mut s = T::zero();
                    if c < 4 {
                        s += dh[c][a][b][d];
                    }
                    if d < 4 {
                        s -= dh[d][a][b][c];
                    }
                    for k in 0..5 {
                        s += h[a][k][c] * h[k][b][d] - h[a][k][d] * h[k][b][c];
                    }
                    r[((a * 5 + b) * 5 + c) * 5 + d] = s;
                }
            }
        }
    }
    r
}

/// Five-vector curvature of a five-connection field (625 components per point).
pub fn five_curvature<T: Scalar>(h: &Field<T>) -> Field<T> {
    let dh = gradient(h);
    Field::from_points(h.grid(), &[IndexKind::Five; 4], |p, out| {
        let d: [[[[T; 5]; 5]; 5]; 4] = std::array::from_fn(|s| read5x3(dh[s].at(p)));
        out.copy_from_slice(&five_curvature_point(&read5x3(h.at(p)), &d));
    })
}

/// Bivector-valued form `K^{KL}_{CD}` stored as `[𝔎][C][D]` (250 values):
/// `K^{Aβ}_{CD} = g^{βω} R^A_{ωCD}`, `K^{α5} = −K^{5α}`.
pub fn k_form<T: Scalar>(r: &[T], ginv: &[[T; 4]; 4]) -> Vec<T> {
    let mut k = vec![T::zero(); 250];
    let rr = |a: usize, b: usize, c: usize, d: usize| r[((a * 5 + b) * 5 + c) * 5 + d];
    for (i, &(a, b)) in ADJ_PAIRS.iter().enumerate() {
        for c in 0..5 {
            for d in 0..5 {
                let v = if b < 4 {
                    (0..4).fold(T::zero(), |acc, w| acc + ginv[b][w] * rr(a, w, c, d))
                } else {
                    // K^{α5} = −K^{5α} = −g^{αω} R^5_{ωCD}
                    -(0..4).fold(T::zero(), |acc, w| acc + ginv[a][w] * rr(I5, w, c, d))
                };
                k[i * 25 + c * 5 + d] = v;
            }
        }
    }
    k
}

/// Jacobi defect `Δ^{κβ} = Y^{βκ} − Y^{κβ}` with
/// `Y^{κβ} = R^κ_{αμν}(A^{αβ}b^μc^ν + B^{αβ}c^μa^ν + C^{αβ}a^μb^ν)`; its ℰ-part vanishes.
pub fn jacobi_defect<T: Scalar>(
    a: &Bivector5<T>,
    b: &Bivector5<T>,
    c: &Bivector5<T>,
    riem: &Arr4<T>,
) -> Bivector5<T> {
    let (ae, az) = a.split();
    let (be, bz) = b.split();
    let (ce, cz) = c.split();
    let mut y = [[T::zero(); 4]; 4];
    for k in 0..4 {
        for bb in 0..4 {
            let mut s = T::zero();
            for al in 0..4 {
                for m in 0..4 {
                    for n in 0..4 {
                        let r = riem[k][al][m][n];
                        if r != T::zero() {
                            s += r
                                * (az[al][bb] * be[m] * ce[n]
                                    + bz[al][bb] * ce[m] * ae[n]
                                    + cz[al][bb] * ae[m] * be[n]);
                        }
                    }
                }
            }
            y[k][bb] = s;
        }
    }
    let mut z = [[T::zero(); 4]; 4];
    for k in 0..4 {
        for bb in 0..4 {
            z[k][bb] = y[bb][k] - y[k][bb];
        }
    }
    Bivector5::join([T::zero(); 4], z)
}

/// Three bivector fields entering the Jacobi and Bianchi residuals.
pub struct Triple<'a, T> {
    pub a: &'a Field<T>,
    pub b: &'a Field<T>,
    pub c: &'a Field<T>,
}

/// `[𝒜,[ℬ,𝒞]] + cyclic + Δ` (or without `Δ` when `with_defect` is false).
pub fn jacobi_residual<T: Scalar>(
    t: &Triple<T>,
    geo: &Geometry<T>,
    conv: CommutatorConvention,
    with_defect: bool,
) -> Result<Field<T>, Error> {
    let bc = bivector_commutator(t.b, t.c, geo, conv)?;
    let ca = bivector_commutator(t.c, t.a, geo, conv)?;
    let ab = bivector_commutator(t.a, t.b, geo, conv)?;
    let s1 = bivector_commutator(t.a, &bc, geo, conv)?;
    let s2 = bivector_commutator(t.b, &ca, geo, conv)?;
    let s3 = bivector_commutator(t.c, &ab, geo, conv)?;
    let mut out = s1.add(&s2)?.add(&s3)?;
    if with_defect {
        for p in 0..geo.grid().len() {
            let d = jacobi_defect(
                &biv_at(t.a, p),
                &biv_at(t.b, p),
                &biv_at(t.c, p),
                &geo.riemann_at(p),
            );
            for (o, v) in out.at_mut(p).iter_mut().zip(d.0) {
                *o += v;
            }
        }
    }
    Ok(out)
}

/// Operator-valued Bianchi residual
/// `Σ_cyc D_𝒜⟨𝖱,ℬ∧𝒞⟩ − Σ_cyc ⟨𝖱,[𝒜,ℬ]∧𝒞⟩ − M̂_Δ`, returned as a 4x4 matrix field.
///
/// `defect_sign` multiplies the `M̂_Δ` term; `+1` is the identity, `0` drops it.
pub fn bianchi_residual<T: Scalar>(
    t: &Triple<T>,
    fam: &CurvatureFamily<T>,
    defect_sign: T,
) -> Result<Field<T>, Error> {
    let geo = fam.geometry();
    let grid = geo.grid();
    let conv = fam.conv;
    let pairs: [(&Field<T>, &Field<T>, &Field<T>); 3] =
        [(t.a, t.b, t.c), (t.b, t.c, t.a), (t.c, t.a, t.b)];
    let mat = [IndexKind::Four, IndexKind::Four];
    let slots = [Slot::Up, Slot::Down];
    let mut out = Field::zeros(grid, &mat);
    let mut contracted: Vec<Field<T>> = (0..3).map(|_| Field::zeros(grid, &mat)).collect();
    let commutators = pairs
        .iter()
        .map(|(x, y, _)| bivector_commutator(x, y, geo, conv))
        .collect::<Result<Vec<_>, _>>()?;
    // one curvature evaluation per point feeds all six contractions
    for p in 0..grid.len() {
        let r4 = fam.r4_at(p);
        for (k, (_, y, z)) in pairs.iter().enumerate() {
            let m = CurvatureFamily::contract_r4(&r4, &biv_at(y, p), &biv_at(z, p));
            let dst = contracted[k].at_mut(p);
            for a in 0..4 {
                dst[a * 4..a * 4 + 4].copy_from_slice(&m[a]);
            }
            let m2 = CurvatureFamily::contract_r4(&r4, &biv_at(&commutators[k], p), &biv_at(z, p));
            let dst = out.at_mut(p);
            for a in 0..4 {
                for b in 0..4 {
                    dst[a * 4 + b] -= m2[a][b];
                }
            }
        }
    }
    for (k, (x, _, _)) in pairs.iter().enumerate() {
        // D_x ⟨𝖱, y∧z⟩
        let o = &contracted[k];
        let dox = gradient(o);
        for p in 0..grid.len() {
            let mut d = [T::zero(); 16];
            let dx = [dox[0].at(p), dox[1].at(p), dox[2].at(p), dox[3].at(p)];
            bivector_derivative_point(
                o.at(p),
                &dx,
                &slots,
                false,
                &biv_at(x, p),
                &geo.local(p),
                GConvention::WithTranslation,
                &mut d,
            );
            let dst = out.at_mut(p);
            for (o, v) in dst.iter_mut().zip(d) {
                *o += v;
            }
        }
    }
    if defect_sign != T::zero() {
        for p in 0..grid.len() {
            let dlt = jacobi_defect(
                &biv_at(t.a, p),
                &biv_at(t.b, p),
                &biv_at(t.c, p),
                &geo.riemann_at(p),
            );
            let mh = m_hat_4(&dlt.split().1, &geo.g(p));
            let dst = out.at_mut(p);
            for a in 0..4 {
                for b in 0..4 {
                    dst[a * 4 + b] -= defect_sign * mh[a][b];
                }
            }
        }
    }
    Ok(out)
}

/// Largest `|X w|` over a panel of four-vector fields, `X` a 4x4 matrix field.
pub fn probe_with_panel<T: Scalar>(x: &Field<T>, panel: &[Field<T>]) -> T {
    let mut worst = T::zero();
    for w in panel {
        for p in 0..x.grid().len() {
            let m = x.at(p);
            let v = w.at(p);
            for a in 0..4 {
                let s = (0..4).fold(T::zero(), |acc, b| acc + m[a * 4 + b] * v[b]);
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

/// Result of the commuting-basis test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatnessReport<T> {
    pub commuting: bool,
    pub max_commutator: T,
    pub max_riemann: T,
}

/// Checks whether ten bivector fields pairwise commute (45 commutators) below `threshold`.
pub fn flatness_commuting_basis_check<T: Scalar>(
    basis: &[Field<T>],
    geo: &Geometry<T>,
    conv: CommutatorConvention,
    threshold: T,
) -> Result<FlatnessReport<T>, Error> {
    if basis.len() < 10 {
        return Err(Error::Shape(format!(
            "need 10 basis fields, got {}",
            basis.len()
        )));
    }
    let mut worst = T::zero();
    for i in 0..10 {
        for j in (i + 1)..10 {
            worst = worst.max(bivector_commutator(&basis[i], &basis[j], geo, conv)?.max_abs());
        }
    }
    Ok(FlatnessReport {
        commuting: worst < threshold,
        max_commutator: worst,
        max_riemann: geo.riemann.max_abs(),
    })
}

/// The coordinate basis bivector fields `e_K∧e_L` (constant components).
pub fn coordinate_basis<T: Scalar>(grid: &crate::lattice::Grid4<T>) -> Vec<Field<T>> {
    (0..10)
        .map(|i| Field::from_fn(grid, &[IndexKind::Adjoint], |_, o| o[i] = T::one()))
        .collect()
}

/// Applies a Lorentz transformation `Λ^a_b` (five-index block with `Λ^5_5 = 1`) to constant basis bivectors.
pub fn transformed_basis<T: Scalar>(
    grid: &crate::lattice::Grid4<T>,
    lam: &[[T; 4]; 4],
) -> Vec<Field<T>> {
    let mut l5 = [[T::zero(); 5]; 5];
    for a in 0..4 {
        l5[a][..4].copy_from_slice(&lam[a]);
    }
    l5[I5][I5] = T::one();
    (0..10)
        .map(|i| {
            let (c, d) = ADJ_PAIRS[i];
            let mut full = [[T::zero(); 5]; 5];
            for a in 0..5 {
                for b in 0..5 {
                    full[a][b] = l5[a][c] * l5[b][d] - l5[b][c] * l5[a][d];
                }
            }
            let v = Bivector5::from_full(&full);
            Field::from_fn(grid, &[IndexKind::Adjoint], |_, o| o.copy_from_slice(&v.0))
        })
        .collect()
}
