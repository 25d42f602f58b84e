//! Bivector gauge fields `C^i_{j𝔄}` for nonspacetime vector bundles: the bundle
//! derivative, gauge transformations, the induced five-vector gauge fields `B`,
//! the field strength `𝖥` and its differential identities.

use crate::algebra::{Bivector5, ADJ_PAIRS, E_SLOTS, I5};
use crate::connections::{ContorsionField, ContorsionForm, Geometry, Local};
use crate::curvature::{
    bivector_commutator, jacobi_defect, q_constants, CommutatorConvention, Triple,
};
use crate::lattice::{gradient, Field, Grid4, IndexKind};
use crate::scalar::{invert_dyn, Scalar};
use crate::Error;

/// Row-major `n×n` matrix.
pub type Mat<T> = Vec<T>;

/// `a·b` for row-major `n×n` matrices.
pub fn mat_mul<T: Scalar>(a: &[T], b: &[T], n: usize) -> Mat<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == T::zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// `ab − ba`.
pub fn mat_comm<T: Scalar>(a: &[T], b: &[T], n: usize) -> Mat<T> {
    let ab = mat_mul(a, b, n);
    let ba = mat_mul(b, a, n);
    ab.iter().zip(&ba).map(|(&x, &y)| x - y).collect()
}

/// `out += c·x`.
fn axpy<T: Scalar>(out: &mut [T], c: T, x: &[T]) {
    for (o, &v) in out.iter_mut().zip(x) {
        *o += c * v;
    }
}

/// The ten matrices `C_𝔄` at one point.
pub type GaugePoint<T> = [Mat<T>; 10];

fn check_same_grid<T: Scalar>(a: &Grid4<T>, b: &Grid4<T>) -> Result<(), Error> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "grids differ: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Bivector gauge fields `C^i_{j𝔄}` stored per point as `[i][j][𝔄]`.
#[derive(Clone, Debug)]
pub struct GaugeConnection<T> {
    n: usize,
    /// When set, every `C_𝔄` is required to be antisymmetric (real anti-hermitian).
    pub antihermitian: bool,
    c: Field<T>,
}

impl<T: Scalar> GaugeConnection<T> {
    /// Wraps a field with signature `[Bundle(n), Bundle(n), Adjoint]`.
    pub fn new(c: Field<T>, antihermitian: bool) -> Result<Self, Error> {
        let n = match c.kinds() {
            [IndexKind::Bundle(a), IndexKind::Bundle(b), IndexKind::Adjoint]
                if a == b && *a > 0 =>
            {
                *a
            }
            k => {
                return Err(Error::Shape(format!(
                    "gauge connection needs [Bundle(n), Bundle(n), Adjoint], got {k:?}"
                )))
            }
        };
        let out = GaugeConnection {
            n,
            antihermitian,
            c,
        };
        if antihermitian {
            let tol = T::epsilon() * crate::scalar::lit(64.0) * (T::one() + out.c.max_abs());
            if out.antihermitian_defect() > tol {
                return Err(Error::Precondition(
                    "gauge fields are not antisymmetric in the bundle indices".into(),
                ));
            }
        }
        Ok(out)
    }

    pub fn zeros(grid: &Grid4<T>, n: usize) -> Self {
        GaugeConnection {
            n,
            antihermitian: false,
            c: Field::zeros(grid, &Self::kinds(n)),
        }
    }

    /// Samples `f(x)`, which returns the ten matrices `C_𝔄`.
    pub fn from_fn(grid: &Grid4<T>, n: usize, f: impl Fn([T; 4]) -> GaugePoint<T>) -> Self {
        let c = Field::from_fn(grid, &Self::kinds(n), |x, out| {
            write_point(&f(x), n, out);
        });
        GaugeConnection {
            n,
            antihermitian: false,
            c,
        }
    }

    fn kinds(n: usize) -> [IndexKind; 3] {
        [
            IndexKind::Bundle(n),
            IndexKind::Bundle(n),
            IndexKind::Adjoint,
        ]
    }

    /// Bundle dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid4<T> {
        self.c.grid()
    }

    pub fn field(&self) -> &Field<T> {
        &self.c
    }

    /// `C_𝔄` at point `p`.
    pub fn at(&self, p: usize) -> GaugePoint<T> {
        read_point(self.c.at(p), self.n)
    }

    /// Largest `|C^i_{j𝔄} + C^j_{i𝔄}|`.
    pub fn antihermitian_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for p in 0..self.grid().len() {
            let v = self.c.at(p);
            for i in 0..n {
                for j in 0..n {
                    for a in 0..10 {
                        let s = v[(i * n + j) * 10 + a] + v[(j * n + i) * 10 + a];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `C(𝒜) = A^𝔄 C_𝔄` at point `p`.
    pub fn along(&self, p: usize, a: &Bivector5<T>) -> Mat<T> {
        contract_point(&self.at(p), a, self.n)
    }
}

fn read_point<T: Scalar>(v: &[T], n: usize) -> GaugePoint<T> {
    std::array::from_fn(|a| {
        let mut m = vec![T::zero(); n * n];
        for i in 0..n * n {
            m[i] = v[i * 10 + a];
        }
        m
    })
}

fn write_point<T: Scalar>(c: &GaugePoint<T>, n: usize, out: &mut [T]) {
    for (a, m) in c.iter().enumerate() {
        for i in 0..n * n {
            out[i * 10 + a] = m[i];
        }
    }
}

fn contract_point<T: Scalar>(c: &GaugePoint<T>, a: &Bivector5<T>, n: usize) -> Mat<T> {
    let mut m = vec![T::zero(); n * n];
    for (k, ck) in c.iter().enumerate() {
        if a.0[k] != T::zero() {
            axpy(&mut m, a.0[k], ck);
        }
    }
    m
}

fn biv_at<T: Scalar>(f: &Field<T>, p: usize) -> Bivector5<T> {
    Bivector5(f.at(p).try_into().expect("ten components"))
}

/// `(D_𝒜U)^i = a^σ∂_σU^i + A^𝔄 C^i_{j𝔄} U^j` for a bundle field `U`.
pub fn gauge_bivector_derivative<T: Scalar>(
    u: &Field<T>,
    a: &Field<T>,
    c: &GaugeConnection<T>,
) -> Result<Field<T>, Error> {
    let n = c.dim();
    if u.kinds() != [IndexKind::Bundle(n)] {
        return Err(Error::Shape(format!(
            "bundle field must be [Bundle({n})], got {:?}",
            u.kinds()
        )));
    }
    if a.kinds() != [IndexKind::Adjoint] {
        return Err(Error::Shape("direction must be a bivector field".into()));
    }
    check_same_grid(u.grid(), c.grid())?;
    check_same_grid(a.grid(), c.grid())?;
    let du = gradient(u);
    Ok(Field::from_points(u.grid(), u.kinds(), |p, out| {
        let ab = biv_at(a, p);
        let m = c.along(p, &ab);
        let up = u.at(p);
        for i in 0..n {
            let mut s = T::zero();
            for (sg, d) in du.iter().enumerate() {
                s += ab.0[E_SLOTS[sg]] * d.at(p)[i];
            }
            for j in 0..n {
                s += m[i * n + j] * up[j];
            }
            out[i] = s;
        }
    }))
}

/// `D_𝒜X = a^σ∂_σX + [C(𝒜), X]` for an endomorphism `X^i_j` given its partial derivatives.
pub fn endomorphism_derivative_point<T: Scalar>(
    x: &[T],
    dx: &[&[T]; 4],
    a: &Bivector5<T>,
    c: &GaugePoint<T>,
    n: usize,
) -> Mat<T> {
    let mut out = mat_comm(&contract_point(c, a, n), x, n);
    for s in 0..4 {
        axpy(&mut out, a.0[E_SLOTS[s]], dx[s]);
    }
    out
}

/// `C′_{α5} = Λ⁻¹C_{α5}Λ + Λ⁻¹∂_αΛ`, `C′_{αβ} = Λ⁻¹C_{αβ}Λ`.
///
/// `lambda` has signature `[Bundle(n), Bundle(n)]`; `∂Λ` uses the lattice stencil.
pub fn gauge_transform<T: Scalar>(
    c: &GaugeConnection<T>,
    lambda: &Field<T>,
) -> Result<GaugeConnection<T>, Error> {
    let n = c.dim();
    if lambda.kinds() != [IndexKind::Bundle(n), IndexKind::Bundle(n)] {
        return Err(Error::Shape(format!(
            "gauge transformation must be [Bundle({n}), Bundle({n})], got {:?}",
            lambda.kinds()
        )));
    }
    check_same_grid(lambda.grid(), c.grid())?;
    let dl = gradient(lambda);
    let grid = c.grid().clone();
    let mut out = Field::zeros(&grid, &GaugeConnection::<T>::kinds(n));
    for p in 0..grid.len() {
        let l = lambda.at(p);
        let li = invert_dyn(l, n).ok_or_else(|| {
            Error::Precondition(format!("gauge transformation is singular at point {p}"))
        })?;
        let cp = c.at(p);
        let np: GaugePoint<T> = std::array::from_fn(|k| {
            let mut m = mat_mul(&mat_mul(&li, &cp[k], n), l, n);
            let (a, b) = ADJ_PAIRS[k];
            if b == I5 {
                let d = mat_mul(&li, dl[a].at(p), n);
                axpy(&mut m, T::one(), &d);
            }
            m
        });
        write_point(&np, n, out.at_mut(p));
    }
    Ok(GaugeConnection {
        n,
        antihermitian: c.antihermitian,
        c: out,
    })
}

/// `B_A = Σ_{K<L} C_{KL} s^{KL}_A` at one point.
pub fn five_gauge_point<T: Scalar>(
    c: &GaugePoint<T>,
    s: &ContorsionForm<T>,
    n: usize,
) -> [Mat<T>; 5] {
    std::array::from_fn(|a| {
        let mut m = vec![T::zero(); n * n];
        for (k, &(kk, ll)) in ADJ_PAIRS.iter().enumerate() {
            let w = s.get(kk, ll, a);
            if w != T::zero() {
                axpy(&mut m, w, &c[k]);
            }
        }
        m
    })
}

/// Five-vector gauge fields `B^i_{jA}` stored as `[i][j][A]`:
/// `B_α = C_{α5} + C_{μν}s^{|μν|}_α`, `B_5 = C_{μν}s^{|μν|}_5`.
pub fn five_gauge_from_bivector<T: Scalar>(
    c: &GaugeConnection<T>,
    s: &ContorsionField<T>,
) -> Result<Field<T>, Error> {
    check_same_grid(s.s4.grid(), c.grid())?;
    let n = c.dim();
    Ok(Field::from_points(
        c.grid(),
        &[IndexKind::Bundle(n), IndexKind::Bundle(n), IndexKind::Five],
        |p, out| {
            let b = five_gauge_point(&c.at(p), &s.at(p), n);
            for (a, m) in b.iter().enumerate() {
                for i in 0..n * n {
                    out[i * 5 + a] = m[i];
                }
            }
        },
    ))
}

/// `𝖥^i_{j𝔄𝔅}` stored per point as `[i][j][𝔄][𝔅]`.
#[derive(Clone, Debug)]
pub struct GaugeFieldStrength<T> {
    n: usize,
    f: Field<T>,
}

impl<T: Scalar> GaugeFieldStrength<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field<T> {
        &self.f
    }

    /// `𝖥_{𝔄𝔅}` as a matrix.
    pub fn block(&self, p: usize, a: usize, b: usize) -> Mat<T> {
        let v = self.f.at(p);
        (0..self.n * self.n)
            .map(|i| v[i * 100 + a * 10 + b])
            .collect()
    }

    /// `⟨𝖥, ℬ∧𝒞⟩ = 𝖥_{𝔄𝔅}B^𝔄C^𝔅` at point `p`.
    pub fn contract(&self, p: usize, b: &Bivector5<T>, c: &Bivector5<T>) -> Mat<T> {
        let v = self.f.at(p);
        (0..self.n * self.n)
            .map(|i| {
                let mut s = T::zero();
                for a in 0..10 {
                    for d in 0..10 {
                        s += v[i * 100 + a * 10 + d] * b.0[a] * c.0[d];
                    }
                }
                s
            })
            .collect()
    }

    /// Largest `|𝖥_{𝔄𝔅} + 𝖥_{𝔅𝔄}|`.
    pub fn antisymmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for p in 0..self.f.grid().len() {
            let v = self.f.at(p);
            for i in 0..self.n * self.n {
                for a in 0..10 {
                    for b in 0..10 {
                        worst =
                            worst.max((v[i * 100 + a * 10 + b] + v[i * 100 + b * 10 + a]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// `𝖥_{𝔎𝔏}` at one point from `C`, its partial derivatives and the commutation constants:
/// `∂_𝔎C_𝔏 − ∂_𝔏C_𝔎 + [C_𝔎, C_𝔏] − Q^𝔖_{𝔎𝔏}C_𝔖`, with `∂` along `e_κ∧e_5` equal to `∂_κ`
/// and zero along `e_μ∧e_ν`.
pub fn field_strength_point<T: Scalar>(
    c: &GaugePoint<T>,
    dc: &[GaugePoint<T>; 4],
    q: &[[Bivector5<T>; 10]; 10],
    n: usize,
) -> Vec<T> {
    let mut out = vec![T::zero(); n * n * 100];
    let dir = |i: usize| -> Option<usize> {
        let (k, l) = ADJ_PAIRS[i];
        (l == I5).then_some(k)
    };
    for i in 0..10 {
        for j in (i + 1)..10 {
            let mut m = mat_comm(&c[i], &c[j], n);
            if let Some(k) = dir(i) {
                axpy(&mut m, T::one(), &dc[k][j]);
            }
            if let Some(k) = dir(j) {
                axpy(&mut m, -T::one(), &dc[k][i]);
            }
            for s in 0..10 {
                let w = q[i][j].0[s];
                if w != T::zero() {
                    axpy(&mut m, -w, &c[s]);
                }
            }
            for e in 0..n * n {
                out[e * 100 + i * 10 + j] = m[e];
                out[e * 100 + j * 10 + i] = -m[e];
            }
        }
    }
    out
}

fn gradient_points<T: Scalar>(c: &GaugeConnection<T>) -> impl Fn(usize) -> [GaugePoint<T>; 4] {
    let dc = gradient(c.field());
    let n = c.dim();
    move |p| std::array::from_fn(|s| read_point(dc[s].at(p), n))
}

/// Field strength of `C` on the geometry's lattice, with the halved commutation constants.
pub fn gauge_field_strength<T: Scalar>(
    c: &GaugeConnection<T>,
    geo: &Geometry<T>,
) -> Result<GaugeFieldStrength<T>, Error> {
    check_same_grid(geo.grid(), c.grid())?;
    let n = c.dim();
    let dcp = gradient_points(c);
    let f = Field::from_points(
        c.grid(),
        &[
            IndexKind::Bundle(n),
            IndexKind::Bundle(n),
            IndexKind::Adjoint,
            IndexKind::Adjoint,
        ],
        |p, out| {
            let q = q_constants(&geo.local(p), CommutatorConvention::Halved);
            out.copy_from_slice(&field_strength_point(&c.at(p), &dcp(p), &q, n));
        },
    );
    Ok(GaugeFieldStrength { n, f })
}

/// The same blocks written through `A_κ = C_{κ5}` and `E_{μν} = C_{μν}`:
///
/// * `𝖥_{κ5μ5} = ∂_κA_μ − ∂_μA_κ + [A_κ, A_μ]`
/// * `𝖥_{κ5μν} = ∂_κE_{μν} + [A_κ, E_{μν}] − E_{ων}Γ̇^ω_{μκ} − E_{μω}Γ̇^ω_{νκ}`
/// * `𝖥_{κλμν} = [E_{κλ}, E_{μν}] − g_{κμ}E_{λν} + g_{κν}E_{λμ} + g_{λμ}E_{κν} − g_{λν}E_{κμ}`
pub fn field_strength_closed_form<T: Scalar>(
    c: &GaugePoint<T>,
    dc: &[GaugePoint<T>; 4],
    local: &Local<T>,
    n: usize,
) -> Vec<T> {
    let zero = vec![T::zero(); n * n];
    // E_{μν} for all ordered pairs
    let e = |m: usize, v: usize| -> Mat<T> {
        if m == v {
            return zero.clone();
        }
        let (k, sgn) = crate::algebra::adj_index(m, v).expect("four-index pair");
        c[k].iter().map(|&x| x * T::from(sgn).unwrap()).collect()
    };
    let de = |s: usize, m: usize, v: usize| -> Mat<T> {
        if m == v {
            return zero.clone();
        }
        let (k, sgn) = crate::algebra::adj_index(m, v).expect("four-index pair");
        dc[s][k]
            .iter()
            .map(|&x| x * T::from(sgn).unwrap())
            .collect()
    };
    let a = |k: usize| &c[E_SLOTS[k]];
    let da = |s: usize, k: usize| &dc[s][E_SLOTS[k]];
    let (g, gam) = (&local.g, &local.gamma);
    let block = |i: usize, j: usize| -> Mat<T> {
        let (k, l) = ADJ_PAIRS[i];
        let (m, v) = ADJ_PAIRS[j];
        match (l == I5, v == I5) {
            (true, true) => {
                let mut r = mat_comm(a(k), a(m), n);
                axpy(&mut r, T::one(), da(k, m));
                axpy(&mut r, -T::one(), da(m, k));
                r
            }
            (true, false) => ea_block(k, m, v, &e, &de, c, gam, n),
            (false, true) => ea_block(m, k, l, &e, &de, c, gam, n)
                .into_iter()
                .map(|x| -x)
                .collect(),
            (false, false) => {
                let mut r = mat_comm(&e(k, l), &e(m, v), n);
                axpy(&mut r, -g[k][m], &e(l, v));
                axpy(&mut r, g[k][v], &e(l, m));
                axpy(&mut r, g[l][m], &e(k, v));
                axpy(&mut r, -g[l][v], &e(k, m));
                r
            }
        }
    };
    let mut out = vec![T::zero(); n * n * 100];
    for i in 0..10 {
        for j in 0..10 {
            if i == j {
                continue;
            }
            let b = block(i, j);
            for x in 0..n * n {
                out[x * 100 + i * 10 + j] = b[x];
            }
        }
    }
    out
}

fn ea_block<T: Scalar>(
    k: usize,
    m: usize,
    v: usize,
    e: &impl Fn(usize, usize) -> Mat<T>,
    de: &impl Fn(usize, usize, usize) -> Mat<T>,
    c: &GaugePoint<T>,
    gam: &crate::connections::Arr3<T>,
    n: usize,
) -> Mat<T> {
    let mut r = de(k, m, v);
    axpy(&mut r, T::one(), &mat_comm(&c[E_SLOTS[k]], &e(m, v), n));
    for w in 0..4 {
        axpy(&mut r, -gam[w][m][k], &e(w, v));
        axpy(&mut r, -gam[w][v][k], &e(m, w));
    }
    r
}

/// Bianchi-type identity of `𝖥` as an endomorphism field:
/// `Σ_cyc D_𝒜⟨𝖥,ℬ∧𝒞⟩ − Σ_cyc ⟨𝖥,[𝒜,ℬ]∧𝒞⟩ − defect_sign·C(Δ)`, stored as `[i][j]`.
///
/// With `Δ` purely in the `𝒵` sector, `D_Δ` acts on bundle fields as the matrix `C(Δ)`.
pub fn gauge_bianchi_residual<T: Scalar>(
    f: &GaugeFieldStrength<T>,
    c: &GaugeConnection<T>,
    t: &Triple<T>,
    geo: &Geometry<T>,
    defect_sign: T,
) -> Result<Field<T>, Error> {
    check_same_grid(geo.grid(), c.grid())?;
    for x in [t.a, t.b, t.c] {
        if x.kinds() != [IndexKind::Adjoint] {
            return Err(Error::Shape(
                "Bianchi arguments must be bivector fields".into(),
            ));
        }
        check_same_grid(x.grid(), c.grid())?;
    }
    let n = c.dim();
    if f.dim() != n {
        return Err(Error::Shape(
            "field strength and connection dimensions differ".into(),
        ));
    }
    let grid = c.grid();
    let kinds = [IndexKind::Bundle(n), IndexKind::Bundle(n)];
    let conv = CommutatorConvention::Halved;
    let mut out = Field::zeros(grid, &kinds);
    let cyc: [(&Field<T>, &Field<T>, &Field<T>); 3] =
        [(t.a, t.b, t.c), (t.b, t.c, t.a), (t.c, t.a, t.b)];
    for (x, y, z) in cyc {
        let o = Field::from_points(grid, &kinds, |p, out| {
            out.copy_from_slice(&f.contract(p, &biv_at(y, p), &biv_at(z, p)));
        });
        let dox = gradient(&o);
        let xy = bivector_commutator(x, y, geo, conv)?;
        for p in 0..grid.len() {
            let dx = [dox[0].at(p), dox[1].at(p), dox[2].at(p), dox[3].at(p)];
            let d = endomorphism_derivative_point(o.at(p), &dx, &biv_at(x, p), &c.at(p), n);
            let m2 = f.contract(p, &biv_at(&xy, p), &biv_at(z, p));
            for (e, v) in out.at_mut(p).iter_mut().enumerate() {
                *v += d[e] - m2[e];
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
            let m = c.along(p, &dlt);
            axpy(out.at_mut(p), -defect_sign, &m);
        }
    }
    Ok(out)
}

/// Five-vector gauge field strength from `B` (signature `[Bundle, Bundle, Five]`) in a
/// basis with vanishing commutators:
/// `F_{AB} = ∂_AB_B − ∂_BB_A + [B_A, B_B]`, with `∂_5 = 0`. Stored as `[i][j][A][B]`.
pub fn five_field_strength<T: Scalar>(b: &Field<T>) -> Result<Field<T>, Error> {
    let n = five_gauge_dim(b)?;
    let db = gradient(b);
    let mat = |v: &[T], a: usize| -> Mat<T> { (0..n * n).map(|i| v[i * 5 + a]).collect() };
    Ok(Field::from_points(
        b.grid(),
        &[
            IndexKind::Bundle(n),
            IndexKind::Bundle(n),
            IndexKind::Five,
            IndexKind::Five,
        ],
        |p, out| {
            let bp: [Mat<T>; 5] = std::array::from_fn(|a| mat(b.at(p), a));
            for x in 0..5 {
                for y in (x + 1)..5 {
                    let mut m = mat_comm(&bp[x], &bp[y], n);
                    if x < 4 {
                        axpy(&mut m, T::one(), &mat(db[x].at(p), y));
                    }
                    if y < 4 {
                        axpy(&mut m, -T::one(), &mat(db[y].at(p), x));
                    }
                    for e in 0..n * n {
                        out[e * 25 + x * 5 + y] = m[e];
                        out[e * 25 + y * 5 + x] = -m[e];
                    }
                }
            }
        },
    ))
}

fn five_gauge_dim<T: Scalar>(b: &Field<T>) -> Result<usize, Error> {
    match b.kinds() {
        [IndexKind::Bundle(x), IndexKind::Bundle(y), IndexKind::Five] if x == y => Ok(*x),
        k => Err(Error::Shape(format!(
            "five-vector gauge field needs [Bundle(n), Bundle(n), Five], got {k:?}"
        ))),
    }
}

/// `(dF)_{ABC} = Σ_cyc (∂_AF_{BC} + [B_A, F_{BC}])` for the field strength of `B`,
/// stored as `[i][j][A][B][C]`. Vanishes identically in the continuum.
pub fn df_zero_check<T: Scalar>(b: &Field<T>) -> Result<Field<T>, Error> {
    let n = five_gauge_dim(b)?;
    let f = five_field_strength(b)?;
    let df = gradient(&f);
    let nn = n * n;
    let fm = |v: &[T], a: usize, c: usize| -> Mat<T> {
        (0..nn).map(|i| v[i * 25 + a * 5 + c]).collect()
    };
    let bm = |v: &[T], a: usize| -> Mat<T> { (0..nn).map(|i| v[i * 5 + a]).collect() };
    Ok(Field::from_points(
        b.grid(),
        &[
            IndexKind::Bundle(n),
            IndexKind::Bundle(n),
            IndexKind::Five,
            IndexKind::Five,
            IndexKind::Five,
        ],
        |p, out| {
            let term = |a: usize, x: usize, y: usize| -> Mat<T> {
                let mut m = mat_comm(&bm(b.at(p), a), &fm(f.at(p), x, y), n);
                if a < 4 {
                    axpy(&mut m, T::one(), &fm(df[a].at(p), x, y));
                }
                m
            };
            for a in 0..5 {
                for x in 0..5 {
                    for y in 0..5 {
                        if a == x || x == y || a == y {
                            continue;
                        }
                        let mut m = term(a, x, y);
                        axpy(&mut m, T::one(), &term(x, y, a));
                        axpy(&mut m, T::one(), &term(y, a, x));
                        for e in 0..nn {
                            out[e * 125 + (a * 5 + x) * 5 + y] = m[e];
                        }
                    }
                }
            }
        },
    ))
}
