//! Four-dimensional lattices, tensor fields sampled on them, finite differences
//! and a few analytic test metrics.

use crate::scalar::{det4, invert, lit, Scalar};
use crate::Error;

/// Index kind of one slot of a tensor field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexKind {
    /// Four-index, values 0..3.
    Four,
    /// Five-index, values 0..3 plus the fifth direction stored at position 4.
    Five,
    /// Adjoint index: one of the ten canonically ordered five-index pairs.
    Adjoint,
    /// Internal bundle index with the given dimension.
    Bundle(usize),
}

impl IndexKind {
    /// Number of values the slot takes.
    pub fn range(self) -> usize {
        match self {
            IndexKind::Four => 4,
            IndexKind::Five => 5,
            IndexKind::Adjoint => 10,
            IndexKind::Bundle(n) => n,
        }
    }
}

/// Regular 4D lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid4<T> {
    shape: [usize; 4],
    spacing: [T; 4],
    periodic: [bool; 4],
    strides: [usize; 4],
}

impl<T: Scalar> Grid4<T> {
    /// Builds a grid, rejecting axes shorter than five points or non-positive spacings.
    pub fn new(shape: [usize; 4], spacing: [T; 4], periodic: [bool; 4]) -> Result<Self, Error> {
        for a in 0..4 {
            if shape[a] < 5 {
                return Err(Error::Config(format!(
                    "axis {a} has {} points; at least 5 are required",
                    shape[a]
                )));
            }
            if !(spacing[a] > T::zero()) || !spacing[a].is_finite() {
                return Err(Error::Config(format!("axis {a} spacing must be positive")));
            }
        }
        let strides = [
            shape[1] * shape[2] * shape[3],
            shape[2] * shape[3],
            shape[3],
            1,
        ];
        Ok(Grid4 {
            shape,
            spacing,
            periodic,
            strides,
        })
    }

    /// Periodic grid covering `[0, L_a)` on every axis.
    pub fn periodic_box(shape: [usize; 4], lengths: [T; 4]) -> Result<Self, Error> {
        let mut h = [T::zero(); 4];
        for a in 0..4 {
            h[a] = lengths[a] / T::from_usize_lossy(shape[a].max(1));
        }
        Self::new(shape, h, [true; 4])
    }

    /// Periodic grid on the `2π` torus.
    pub fn torus(shape: [usize; 4]) -> Result<Self, Error> {
        let l = lit::<T>(std::f64::consts::TAU);
        Self::periodic_box(shape, [l; 4])
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn spacing(&self) -> [T; 4] {
        self.spacing
    }

    pub fn periodic(&self) -> [bool; 4] {
        self.periodic
    }

    /// Number of lattice points.
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Linear position of a multi-index; axis 3 varies fastest.
    #[inline]
    pub fn linear(&self, i: [usize; 4]) -> usize {
        i[0] * self.strides[0] + i[1] * self.strides[1] + i[2] * self.strides[2] + i[3]
    }

    /// Multi-index of a linear position.
    #[inline]
    pub fn multi(&self, p: usize) -> [usize; 4] {
        let mut r = p;
        let mut out = [0; 4];
        for a in 0..4 {
            out[a] = r / self.strides[a];
            r %= self.strides[a];
        }
        out
    }

    /// Coordinates `x^a = i_a h_a` of a point.
    #[inline]
    pub fn coord(&self, p: usize) -> [T; 4] {
        let i = self.multi(p);
        let mut x = [T::zero(); 4];
        for a in 0..4 {
            x[a] = T::from_usize_lossy(i[a]) * self.spacing[a];
        }
        x
    }

    /// Same lattice with every axis whose flag is set refined by a factor two.
    pub fn refined(&self, axes: [bool; 4]) -> Result<Self, Error> {
        let mut shape = self.shape;
        let mut h = self.spacing;
        for a in 0..4 {
            if axes[a] {
                shape[a] *= 2;
                h[a] /= lit(2.0);
            }
        }
        Self::new(shape, h, self.periodic)
    }

    /// Volume element `Π h_a` of one cell.
    pub fn cell_volume(&self) -> T {
        self.spacing.iter().fold(T::one(), |acc, &h| acc * h)
    }
}

/// Tensor field: one dense block of components per lattice point.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    grid: Grid4<T>,
    kinds: Vec<IndexKind>,
    ncomp: usize,
    data: Vec<T>,
}

impl<T: Scalar> Field<T> {
    /// Zero field with the given index signature.
    pub fn zeros(grid: &Grid4<T>, kinds: &[IndexKind]) -> Self {
        let ncomp = kinds.iter().map(|k| k.range()).product();
        Field {
            grid: grid.clone(),
            kinds: kinds.to_vec(),
            ncomp,
            data: vec![T::zero(); ncomp * grid.len()],
        }
    }

    /// Samples `f(x, out)` at every point.
    pub fn from_fn<F>(grid: &Grid4<T>, kinds: &[IndexKind], f: F) -> Self
    where
        F: Fn([T; 4], &mut [T]),
    {
        let mut out = Self::zeros(grid, kinds);
        for p in 0..grid.len() {
            let x = grid.coord(p);
            f(x, out.at_mut(p));
        }
        out
    }

    /// Builds a field pointwise from its linear point index.
    pub fn from_points<F>(grid: &Grid4<T>, kinds: &[IndexKind], f: F) -> Self
    where
        F: Fn(usize, &mut [T]),
    {
        let mut out = Self::zeros(grid, kinds);
        for p in 0..grid.len() {
            f(p, out.at_mut(p));
        }
        out
    }

    /// Wraps raw data; the length must match the signature.
    pub fn from_vec(grid: &Grid4<T>, kinds: &[IndexKind], data: Vec<T>) -> Result<Self, Error> {
        let ncomp: usize = kinds.iter().map(|k| k.range()).product();
        if data.len() != ncomp * grid.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                ncomp * grid.len(),
                data.len()
            )));
        }
        Ok(Field {
            grid: grid.clone(),
            kinds: kinds.to_vec(),
            ncomp,
            data,
        })
    }

    pub fn grid(&self) -> &Grid4<T> {
        &self.grid
    }

    pub fn kinds(&self) -> &[IndexKind] {
        &self.kinds
    }

    /// Components per point.
    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn at(&self, p: usize) -> &[T] {
        &self.data[p * self.ncomp..(p + 1) * self.ncomp]
    }

    #[inline]
    pub fn at_mut(&mut self, p: usize) -> &mut [T] {
        let n = self.ncomp;
        &mut self.data[p * n..(p + 1) * n]
    }

    /// Largest absolute component over the whole lattice.
    pub fn max_abs(&self) -> T {
        crate::scalar::max_abs(&self.data)
    }

    /// Componentwise difference; signatures must agree.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Componentwise sum; signatures must agree.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Multiplies every component by `c`.
    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= c);
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self, Error> {
        if self.ncomp != other.ncomp || self.grid.shape != other.grid.shape {
            return Err(Error::Shape("field signatures differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            kinds: self.kinds.clone(),
            ncomp: self.ncomp,
            data,
        })
    }
}

/// Second-order finite difference along `axis`.
///
/// Periodic axes wrap; non-periodic edges use the one-sided three-point stencil.
pub fn partial_derivative<T: Scalar>(f: &Field<T>, axis: usize) -> Result<Field<T>, Error> {
    if axis > 3 {
        return Err(Error::Index(format!("axis {axis} out of range")));
    }
    let grid = f.grid();
    let n = grid.shape[axis];
    let stride = grid.strides[axis];
    let nc = f.ncomp();
    let inv2h = T::one() / (lit::<T>(2.0) * grid.spacing[axis]);
    let mut out = Field::zeros(grid, f.kinds());
    let src = f.data();
    let three = lit::<T>(3.0);
    let four = lit::<T>(4.0);
    for p in 0..grid.len() {
        let i = (p / stride) % n;
        let base = p - i * stride;
        let at = |k: usize| base + k * stride;
        let dst = &mut out.data[p * nc..(p + 1) * nc];
        if grid.periodic[axis] {
            let (lo, hi) = (at((i + n - 1) % n), at((i + 1) % n));
            for c in 0..nc {
                dst[c] = (src[hi * nc + c] - src[lo * nc + c]) * inv2h;
            }
        } else if i == 0 {
            let (a, b, d) = (at(0), at(1), at(2));
            for c in 0..nc {
                dst[c] =
                    (-three * src[a * nc + c] + four * src[b * nc + c] - src[d * nc + c]) * inv2h;
            }
        } else if i == n - 1 {
            let (a, b, d) = (at(n - 1), at(n - 2), at(n - 3));
            for c in 0..nc {
                dst[c] =
                    (three * src[a * nc + c] - four * src[b * nc + c] + src[d * nc + c]) * inv2h;
            }
        } else {
            let (lo, hi) = (at(i - 1), at(i + 1));
            for c in 0..nc {
                dst[c] = (src[hi * nc + c] - src[lo * nc + c]) * inv2h;
            }
        }
    }
    Ok(out)
}

/// All four partial derivatives of a field.
pub fn gradient<T: Scalar>(f: &Field<T>) -> [Field<T>; 4] {
    std::array::from_fn(|a| partial_derivative(f, a).expect("axis in range"))
}

/// Named analytic metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricPreset<T> {
    /// Minkowski `diag(1,-1,-1,-1)`.
    Flat,
    /// `Ω(x)² diag(1,-1,-1,-1)` with `Ω = 1 + a sin(k·x)`.
    Conformal { amplitude: T, wave: [T; 4] },
    /// Diagonal entries perturbed by `a sin(k·x)` and `a cos(k·x)`, `|a| < 0.1`.
    DiagonalWave { amplitude: T, wave: [T; 4] },
}

impl<T: Scalar> MetricPreset<T> {
    /// Looks a preset up by name.
    pub fn from_name(name: &str, amplitude: T, wave: [T; 4]) -> Result<Self, Error> {
        let preset = match name {
            "flat" => MetricPreset::Flat,
            "conformal" => MetricPreset::Conformal { amplitude, wave },
            "diagonal-wave" => MetricPreset::DiagonalWave { amplitude, wave },
            other => return Err(Error::Config(format!("unknown metric preset '{other}'"))),
        };
        preset.validate()?;
        Ok(preset)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricPreset::Flat => "flat",
            MetricPreset::Conformal { .. } => "conformal",
            MetricPreset::DiagonalWave { .. } => "diagonal-wave",
        }
    }

    fn validate(&self) -> Result<(), Error> {
        match *self {
            MetricPreset::Flat => Ok(()),
            MetricPreset::Conformal { amplitude, .. } if amplitude.abs() >= T::one() => Err(
                Error::Config("conformal amplitude must satisfy |a| < 1 so that Ω > 0".into()),
            ),
            MetricPreset::DiagonalWave { amplitude, .. } if amplitude.abs() >= lit(0.1) => Err(
                Error::Config("diagonal-wave amplitude must satisfy |a| < 0.1".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Metric components at a coordinate point.
    pub fn eval(&self, x: [T; 4]) -> [[T; 4]; 4] {
        let eta = minkowski::<T>();
        match *self {
            MetricPreset::Flat => eta,
            MetricPreset::Conformal { amplitude, wave } => {
                let om = T::one() + amplitude * phase(wave, x).sin();
                let mut g = eta;
                for (a, row) in g.iter_mut().enumerate() {
                    row[a] = row[a] * om * om;
                }
                g
            }
            MetricPreset::DiagonalWave { amplitude, wave } => {
                let th = phase(wave, x);
                let (s, c) = (th.sin(), th.cos());
                let mut g = [[T::zero(); 4]; 4];
                g[0][0] = T::one() + amplitude * s;
                g[1][1] = -(T::one() + amplitude * c);
                g[2][2] = -(T::one() - amplitude * s);
                g[3][3] = -(T::one() + lit::<T>(0.5) * amplitude * c);
                g
            }
        }
    }

    /// Samples the preset on a grid.
    pub fn sample(&self, grid: &Grid4<T>) -> Result<MetricField<T>, Error> {
        self.validate()?;
        MetricField::from_fn(grid, |x| self.eval(x))
    }
}

fn phase<T: Scalar>(wave: [T; 4], x: [T; 4]) -> T {
    wave.iter()
        .zip(x.iter())
        .fold(T::zero(), |acc, (&k, &xi)| acc + k * xi)
}

/// `diag(1,-1,-1,-1)`.
pub fn minkowski<T: Scalar>() -> [[T; 4]; 4] {
    let mut g = [[T::zero(); 4]; 4];
    g[0][0] = T::one();
    for (a, row) in g.iter_mut().enumerate().skip(1) {
        row[a] = -T::one();
    }
    g
}

/// Sampled metric together with its inverse.
#[derive(Clone, Debug)]
pub struct MetricField<T> {
    g: Field<T>,
    ginv: Field<T>,
}

impl<T: Scalar> MetricField<T> {
    /// Samples `g(x)`; symmetry is enforced by averaging, then `det g < 0` is checked.
    pub fn from_fn(grid: &Grid4<T>, f: impl Fn([T; 4]) -> [[T; 4]; 4]) -> Result<Self, Error> {
        let kinds = [IndexKind::Four, IndexKind::Four];
        let mut g = Field::zeros(grid, &kinds);
        let mut ginv = Field::zeros(grid, &kinds);
        let half = lit::<T>(0.5);
        for p in 0..grid.len() {
            let m = f(grid.coord(p));
            let mut s = [[T::zero(); 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    s[a][b] = if a == b {
                        m[a][a]
                    } else {
                        half * (m[a][b] + m[b][a])
                    };
                }
            }
            if !(det4(&s) < T::zero()) {
                return Err(Error::DegenerateMetric(format!("det g >= 0 at point {p}")));
            }
            let inv =
                invert(&s).ok_or_else(|| Error::DegenerateMetric(format!("singular at {p}")))?;
            let (gp, ip) = (g.at_mut(p), &mut ginv.data_mut()[p * 16..(p + 1) * 16]);
            for a in 0..4 {
                for b in 0..4 {
                    gp[a * 4 + b] = s[a][b];
                    ip[a * 4 + b] = inv[a][b];
                }
            }
        }
        Ok(MetricField { g, ginv })
    }

    /// Same metric at every point.
    pub fn constant(grid: &Grid4<T>, m: [[T; 4]; 4]) -> Result<Self, Error> {
        Self::from_fn(grid, |_| m)
    }

    pub fn grid(&self) -> &Grid4<T> {
        self.g.grid()
    }

    /// Lower-index components as a field with two four-indices.
    pub fn field(&self) -> &Field<T> {
        &self.g
    }

    /// Upper-index components.
    pub fn inverse_field(&self) -> &Field<T> {
        &self.ginv
    }

    #[inline]
    pub fn at(&self, p: usize) -> [[T; 4]; 4] {
        to_mat(self.g.at(p))
    }

    #[inline]
    pub fn inv_at(&self, p: usize) -> [[T; 4]; 4] {
        to_mat(self.ginv.at(p))
    }
}

/// Reads sixteen row-major values as a matrix.
#[inline]
pub fn to_mat<T: Scalar>(v: &[T]) -> [[T; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| v[a * 4 + b]))
}

/// `e = sqrt(-det g)` at every point.
pub fn volume_density<T: Scalar>(g: &MetricField<T>) -> Result<Field<T>, Error> {
    let grid = g.grid();
    let mut out = Field::zeros(grid, &[]);
    for p in 0..grid.len() {
        let d = det4(&g.at(p));
        if !(d < T::zero()) {
            return Err(Error::DegenerateMetric(format!("det g >= 0 at point {p}")));
        }
        out.at_mut(p)[0] = (-d).sqrt();
    }
    Ok(out)
}
