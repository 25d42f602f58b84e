//! Adjoint tangent vectors of curves and surfaces whose transport rule comes from the
//! five-vector connection, integrals of adjoint forms of the first and second kind,
//! their five-vector duals and the Stokes decomposition over a coordinate 4-box.

use crate::algebra::{adjoint_pair, AdjointArray, Bivector5, ADJ_PAIRS, E_SLOTS, I5};
use crate::connections::{sigma_map, ContorsionForm};
use crate::scalar::{lit, Scalar};
use crate::Error;

/// Contorsion 1-form `s̃` as a function of position.
pub type ContorsionFn<'a, T> = dyn Fn([T; 4]) -> ContorsionForm<T> + 'a;
/// Four-metric as a function of position.
pub type MetricFn<'a, T> = dyn Fn([T; 4]) -> [[T; 4]; 4] + 'a;
/// Adjoint form field.
pub type FormFn<'a, T> = dyn Fn([T; 4]) -> AdjointArray<T> + 'a;
/// Five-vector field, used for the `𝟏` field of second-kind integrals.
pub type FiveVectorFn<'a, T> = dyn Fn([T; 4]) -> [T; 5] + 'a;

type MapFn<'a, T> = dyn Fn(&[T]) -> [T; 4] + 'a;
type JacobianFn<'a, T> = dyn Fn(&[T]) -> Vec<[T; 4]> + 'a;

/// An `m`-dimensional parametrized surface `λ ↦ x(λ)` over a parameter box.
pub struct ParametrizedSurface<'a, T> {
    ranges: Vec<(T, T)>,
    map: Box<MapFn<'a, T>>,
    jacobian: Option<Box<JacobianFn<'a, T>>>,
}

impl<'a, T: Scalar> ParametrizedSurface<'a, T> {
    /// Surface with tangents obtained by central differences of `map`.
    pub fn new(ranges: Vec<(T, T)>, map: impl Fn(&[T]) -> [T; 4] + 'a) -> Result<Self, Error> {
        if ranges.is_empty() || ranges.len() > 4 {
            return Err(Error::Config(format!(
                "surface dimension must be 1 to 4, got {}",
                ranges.len()
            )));
        }
        if ranges.iter().any(|&(a, b)| !(b > a)) {
            return Err(Error::Config("parameter ranges must have a < b".into()));
        }
        Ok(ParametrizedSurface {
            ranges,
            map: Box::new(map),
            jacobian: None,
        })
    }

    /// Supplies exact tangents `∂x/∂λ⁽ᵏ⁾`.
    pub fn with_jacobian(mut self, jac: impl Fn(&[T]) -> Vec<[T; 4]> + 'a) -> Self {
        self.jacobian = Some(Box::new(jac));
        self
    }

    /// Face `x^axis = value` of a coordinate box, parametrized by the other coordinates
    /// in increasing order.
    pub fn box_face(bounds: [(T, T); 4], axis: usize, value: T) -> Result<Self, Error> {
        if axis > 3 {
            return Err(Error::Index(format!("axis {axis} out of range")));
        }
        let rest: Vec<usize> = (0..4).filter(|&a| a != axis).collect();
        let ranges = rest.iter().map(|&a| bounds[a]).collect();
        let r2 = rest.clone();
        Ok(Self::new(ranges, move |l| {
            let mut x = [value; 4];
            for (k, &a) in rest.iter().enumerate() {
                x[a] = l[k];
            }
            x
        })?
        .with_jacobian(move |_| {
            r2.iter()
                .map(|&a| std::array::from_fn(|i| if i == a { T::one() } else { T::zero() }))
                .collect()
        }))
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn ranges(&self) -> &[(T, T)] {
        &self.ranges
    }

    pub fn point(&self, l: &[T]) -> [T; 4] {
        (self.map)(l)
    }

    /// Tangent four-vectors `U⁽ᵏ⁾` of the coordinate lines.
    pub fn tangents(&self, l: &[T]) -> Vec<[T; 4]> {
        if let Some(j) = &self.jacobian {
            return j(l);
        }
        let step_rel = T::epsilon().cbrt();
        (0..self.dim())
            .map(|k| {
                let (a, b) = self.ranges[k];
                let d = step_rel * (b - a);
                let mut lp = l.to_vec();
                let mut lm = l.to_vec();
                lp[k] += d;
                lm[k] -= d;
                let (xp, xm) = ((self.map)(&lp), (self.map)(&lm));
                std::array::from_fn(|i| (xp[i] - xm[i]) / (d + d))
            })
            .collect()
    }

    /// Midpoint-rule nodes and the common weight for `cells` cells per parameter.
    fn midpoints(&self, cells: usize) -> (Vec<Vec<T>>, T) {
        let m = self.dim();
        let widths: Vec<T> = self
            .ranges
            .iter()
            .map(|&(a, b)| (b - a) / T::from_usize_lossy(cells))
            .collect();
        let weight = widths.iter().fold(T::one(), |acc, &w| acc * w);
        let total = cells.pow(m as u32);
        let nodes = (0..total)
            .map(|mut r| {
                let mut l = vec![T::zero(); m];
                for k in (0..m).rev() {
                    let i = r % cells;
                    r /= cells;
                    l[k] = self.ranges[k].0 + (T::from_usize_lossy(i) + lit(0.5)) * widths[k];
                }
                l
            })
            .collect();
        (nodes, weight)
    }
}

/// `e_5` as a five-vector, the default `𝟏` field.
pub fn unit_five<T: Scalar>() -> [T; 5] {
    let mut v = [T::zero(); 5];
    v[I5] = T::one();
    v
}

/// Homogeneous tangent five-vector `u = (U, |g(U,U)|^{1/2})`.
pub fn homogeneous_tangent<T: Scalar>(u: &[T; 4], g: &[[T; 4]; 4]) -> [T; 5] {
    let mut n = T::zero();
    for a in 0..4 {
        for b in 0..4 {
            n += g[a][b] * u[a] * u[b];
        }
    }
    [u[0], u[1], u[2], u[3], n.abs().sqrt()]
}

fn z_five<T: Scalar>(u: &[T; 4]) -> [T; 5] {
    [u[0], u[1], u[2], u[3], T::zero()]
}

/// Adjoint tangent `σ(u)` of a curve at parameter `λ`.
///
/// Its ℰ-part is the tangent four-vector; its 𝒵-part `S^{αβ}_μU^μ + S^{αβ}_5|U|` vanishes
/// without torsion.
pub fn adjoint_tangent<T: Scalar>(
    curve: &ParametrizedSurface<'_, T>,
    s: &ContorsionFn<'_, T>,
    g: &MetricFn<'_, T>,
    lambda: T,
) -> Result<Bivector5<T>, Error> {
    if curve.dim() != 1 {
        return Err(Error::Shape(format!(
            "adjoint tangent needs a curve, got dimension {}",
            curve.dim()
        )));
    }
    let x = curve.point(&[lambda]);
    let u = curve.tangents(&[lambda])[0];
    if u.iter().all(|&v| v == T::zero()) {
        return Err(Error::Precondition("zero tangent vector".into()));
    }
    Ok(sigma_map(&s(x), &homogeneous_tangent(&u, &g(x))))
}

/// `s^𝔄_A` as a 10x5 table.
fn s_table<T: Scalar>(s: &ContorsionForm<T>) -> [[T; 5]; 10] {
    std::array::from_fn(|i| {
        let (k, l) = ADJ_PAIRS[i];
        std::array::from_fn(|a| s.get(k, l, a))
    })
}

/// Replaces adjoint slot `k` (of size 10) by a five-index through `s^𝔄_A`.
fn transform_slot<T: Scalar>(data: &[T], dims: &[usize], k: usize, s: &[[T; 5]; 10]) -> Vec<T> {
    let outer: usize = dims[..k].iter().product();
    let inner: usize = dims[k + 1..].iter().product();
    let mut out = vec![T::zero(); outer * 5 * inner];
    for o in 0..outer {
        for (ai, srow) in s.iter().enumerate() {
            let src = &data[(o * 10 + ai) * inner..(o * 10 + ai + 1) * inner];
            for (a, &sv) in srow.iter().enumerate() {
                if sv == T::zero() {
                    continue;
                }
                let dst = &mut out[(o * 5 + a) * inner..(o * 5 + a + 1) * inner];
                for (d, &v) in dst.iter_mut().zip(src) {
                    *d += sv * v;
                }
            }
        }
    }
    out
}

/// Five-vector form `ω_{A₁…A_m} = N_{𝔄₁…𝔄_m} s^{𝔄₁}_{A₁}⋯s^{𝔄_m}_{A_m}` (dense `5^m`),
/// summed over all adjoint index values.
pub fn five_form<T: Scalar>(n: &AdjointArray<T>, s: &ContorsionForm<T>) -> Vec<T> {
    let table = s_table(s);
    let m = n.rank();
    let mut dims = vec![10usize; m];
    let mut data = n.data().to_vec();
    for k in 0..m {
        data = transform_slot(&data, &dims, k, &table);
        dims[k] = 5;
    }
    data
}

/// `Σ ω_{A₁…A_m} v₁^{A₁}⋯v_m^{A_m}` for a dense array with every slot of size `dim`.
fn contract_all<T: Scalar>(data: &[T], dim: usize, vecs: &[&[T]]) -> T {
    let mut cur = data.to_vec();
    for v in vecs.iter().rev() {
        cur = cur
            .chunks(dim)
            .map(|c| {
                c.iter()
                    .zip(v.iter())
                    .fold(T::zero(), |acc, (&x, &y)| acc + x * y)
            })
            .collect();
    }
    cur[0]
}

fn check_rank<T: Scalar>(n: &AdjointArray<T>, want: usize) -> Result<(), Error> {
    if n.rank() != want {
        return Err(Error::Shape(format!(
            "adjoint form of rank {} integrated where rank {want} is needed",
            n.rank()
        )));
    }
    Ok(())
}

/// First-kind integral `∫ dλ ⟨N, σ(u⁽¹⁾ᶻ)∧…∧σ(u⁽ᵐ⁾ᶻ)⟩` by the midpoint rule.
pub fn integral_first_kind<T: Scalar>(
    n: &FormFn<'_, T>,
    surface: &ParametrizedSurface<'_, T>,
    s: &ContorsionFn<'_, T>,
    cells: usize,
) -> Result<T, Error> {
    let (nodes, w) = surface.midpoints(cells.max(1));
    let mut acc = T::zero();
    for l in nodes {
        let x = surface.point(&l);
        let form = n(x);
        check_rank(&form, surface.dim())?;
        let sx = s(x);
        let factors: Vec<Bivector5<T>> = surface
            .tangents(&l)
            .iter()
            .map(|u| sigma_map(&sx, &z_five(u)))
            .collect();
        acc += adjoint_pair(&form, &AdjointArray::wedge(&factors))?;
    }
    Ok(acc * w)
}

/// The same integral computed as the integral of the dual five-vector form
/// `ω = N(s̃, …, s̃)` against `u⁽¹⁾ᶻ, …, u⁽ᵐ⁾ᶻ`.
pub fn five_form_integral_first_kind<T: Scalar>(
    n: &FormFn<'_, T>,
    surface: &ParametrizedSurface<'_, T>,
    s: &ContorsionFn<'_, T>,
    cells: usize,
) -> Result<T, Error> {
    let (nodes, w) = surface.midpoints(cells.max(1));
    let mut acc = T::zero();
    for l in nodes {
        let x = surface.point(&l);
        let form = n(x);
        check_rank(&form, surface.dim())?;
        let omega = five_form(&form, &s(x));
        let us: Vec<[T; 5]> = surface.tangents(&l).iter().map(z_five).collect();
        let refs: Vec<&[T]> = us.iter().map(|u| &u[..]).collect();
        acc += contract_all(&omega, 5, &refs);
    }
    Ok(acc * w)
}

fn sigma_one<T: Scalar>(s: &ContorsionForm<T>, one: &[T; 5]) -> Result<Bivector5<T>, Error> {
    let b = sigma_map(s, one);
    let scale = one.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if b.max_abs() <= T::epsilon() * lit(16.0) * scale {
        return Err(Error::Precondition(
            "σ(𝟏) vanishes inside the integration volume".into(),
        ));
    }
    Ok(b)
}

/// Second-kind integral `∫ dλ ⟨N, σ(u⁽¹⁾)∧…∧σ(u⁽ᵐ⁾)∧σ(𝟏)⟩` with homogeneous tangents.
/// Fails when `σ(𝟏)` vanishes at a node.
pub fn integral_second_kind<T: Scalar>(
    n: &FormFn<'_, T>,
    surface: &ParametrizedSurface<'_, T>,
    s: &ContorsionFn<'_, T>,
    g: &MetricFn<'_, T>,
    one: &FiveVectorFn<'_, T>,
    cells: usize,
) -> Result<T, Error> {
    let (nodes, w) = surface.midpoints(cells.max(1));
    let mut acc = T::zero();
    for l in nodes {
        let x = surface.point(&l);
        let form = n(x);
        check_rank(&form, surface.dim() + 1)?;
        let sx = s(x);
        let gx = g(x);
        let mut factors: Vec<Bivector5<T>> = surface
            .tangents(&l)
            .iter()
            .map(|u| sigma_map(&sx, &homogeneous_tangent(u, &gx)))
            .collect();
        factors.push(sigma_one(&sx, &one(x))?);
        acc += adjoint_pair(&form, &AdjointArray::wedge(&factors))?;
    }
    Ok(acc * w)
}

/// Second-kind integral through the dual five-vector `(m+1)`-form.
pub fn five_form_integral_second_kind<T: Scalar>(
    n: &FormFn<'_, T>,
    surface: &ParametrizedSurface<'_, T>,
    s: &ContorsionFn<'_, T>,
    g: &MetricFn<'_, T>,
    one: &FiveVectorFn<'_, T>,
    cells: usize,
) -> Result<T, Error> {
    let (nodes, w) = surface.midpoints(cells.max(1));
    let mut acc = T::zero();
    for l in nodes {
        let x = surface.point(&l);
        let form = n(x);
        check_rank(&form, surface.dim() + 1)?;
        let sx = s(x);
        let ox = one(x);
        sigma_one(&sx, &ox)?;
        let omega = five_form(&form, &sx);
        let gx = g(x);
        let mut us: Vec<[T; 5]> = surface
            .tangents(&l)
            .iter()
            .map(|u| homogeneous_tangent(u, &gx))
            .collect();
        us.push(ox);
        let refs: Vec<&[T]> = us.iter().map(|u| &u[..]).collect();
        acc += contract_all(&omega, 5, &refs);
    }
    Ok(acc * w)
}

/// Boundary integral of a first-kind adjoint 3-form over a coordinate 4-box and the two
/// volume terms it splits into.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesReport<T> {
    /// `∫_{∂V} ⟨N, σ(u⁽¹⁾ᶻ)∧σ(u⁽²⁾ᶻ)∧σ(u⁽³⁾ᶻ)⟩`, outward orientation.
    pub boundary: T,
    /// `∫_V N·d(sss)`; not an integral of an adjoint form in general.
    pub product_term: T,
    /// `∫_V (D_𝔄N)·s^𝔄 sss`, antisymmetrized over the coordinate slots.
    pub derivative_term: T,
}

impl<T: Scalar> StokesReport<T> {
    /// `boundary − product_term − derivative_term`.
    pub fn residual(&self) -> T {
        self.boundary - self.product_term - self.derivative_term
    }
}

/// `Σ N_{𝔄𝔅ℭ} s^𝔄_β s^𝔅_γ s^ℭ_δ` for one coordinate triple.
fn triple_contract<T: Scalar>(n: &AdjointArray<T>, s: &[[T; 5]; 10], t: [usize; 3]) -> T {
    let cols: [[T; 10]; 3] = std::array::from_fn(|k| std::array::from_fn(|i| s[i][t[k]]));
    contract_all(n.data(), 10, &[&cols[0], &cols[1], &cols[2]])
}

fn complement(mu: usize) -> [usize; 3] {
    let v: Vec<usize> = (0..4).filter(|&a| a != mu).collect();
    [v[0], v[1], v[2]]
}

/// Stokes decomposition for a first-kind integral over the box `bounds`.
///
/// Faces and the volume use the midpoint rule with `cells` cells per axis; volume
/// derivatives are central differences with the cell width as step, so the three
/// quantities balance at second order. The bivector derivative of the component
/// functions is `∂_α` along `e_α∧e_5` and zero along the 𝒵 directions.
pub fn stokes_residual<T: Scalar>(
    n: &FormFn<'_, T>,
    s: &ContorsionFn<'_, T>,
    bounds: [(T, T); 4],
    cells: usize,
) -> Result<StokesReport<T>, Error> {
    let cells = cells.max(1);
    let mut boundary = T::zero();
    for mu in 0..4 {
        let sign = if mu % 2 == 0 { T::one() } else { -T::one() };
        let top = ParametrizedSurface::box_face(bounds, mu, bounds[mu].1)?;
        let bottom = ParametrizedSurface::box_face(bounds, mu, bounds[mu].0)?;
        boundary += sign
            * (integral_first_kind(n, &top, s, cells)?
                - integral_first_kind(n, &bottom, s, cells)?);
    }

    let vol = ParametrizedSurface::new(bounds.to_vec(), |l| [l[0], l[1], l[2], l[3]])?;
    let (nodes, w) = vol.midpoints(cells);
    let widths: [T; 4] =
        std::array::from_fn(|a| (bounds[a].1 - bounds[a].0) / T::from_usize_lossy(cells));
    let mut product = T::zero();
    let mut derivative = T::zero();
    for l in nodes {
        let x = [l[0], l[1], l[2], l[3]];
        let nx = n(x);
        check_rank(&nx, 3)?;
        let sx = s_table(&s(x));
        // D_𝔄 N on the E slots
        let mut dn: [Option<AdjointArray<T>>; 10] = Default::default();
        for a in 0..4 {
            let d = widths[a];
            let mut xp = x;
            let mut xm = x;
            xp[a] += d;
            xm[a] -= d;
            let diff = n(xp).add(&n(xm).scaled(-T::one()))?;
            dn[E_SLOTS[a]] = Some(diff.scaled(T::one() / (d + d)));
        }
        for mu in 0..4 {
            let sign = if mu % 2 == 0 { T::one() } else { -T::one() };
            let t = complement(mu);
            let d = widths[mu];
            let mut xp = x;
            let mut xm = x;
            xp[mu] += d;
            xm[mu] -= d;
            let sp = s_table(&s(xp));
            let sm = s_table(&s(xm));
            product +=
                sign * (triple_contract(&nx, &sp, t) - triple_contract(&nx, &sm, t)) / (d + d);
            let mut dv = T::zero();
            for (slot, dslot) in dn.iter().enumerate() {
                if let Some(dnx) = dslot {
                    let c = sx[slot][mu];
                    if c != T::zero() {
                        dv += c * triple_contract(dnx, &sx, t);
                    }
                }
            }
            derivative += sign * dv;
        }
    }
    Ok(StokesReport {
        boundary,
        product_term: product * w,
        derivative_term: derivative * w,
    })
}
