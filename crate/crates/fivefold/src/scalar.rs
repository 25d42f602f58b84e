//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, NumCast};

/// Real scalar the whole crate is generic over. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + NumCast
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + 'static
{
    /// Converts an `f64` literal, panicking only for non-representable values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    /// Converts a count.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for [`Scalar::lit`].
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

/// Kronecker delta.
#[inline]
pub fn delta<T: Scalar>(a: usize, b: usize) -> T {
    if a == b {
        T::one()
    } else {
        T::zero()
    }
}

/// Inverse of a small square matrix by Gauss-Jordan elimination with partial pivoting.
///
/// Returns `None` when a pivot falls below `tol` times the largest entry.
pub fn invert<T: Scalar, const N: usize>(m: &[[T; N]; N]) -> Option<[[T; N]; N]> {
    let mut a = *m;
    let mut inv = [[T::zero(); N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let tol = scale * T::epsilon() * lit(16.0);
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() <= tol {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for k in 0..N {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..N {
            if r != col {
                let f = a[r][col];
                if f != T::zero() {
                    for k in 0..N {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Inverse of an `n×n` row-major matrix by Gauss-Jordan elimination with partial pivoting.
///
/// Same pivot tolerance as [`invert`]; `None` for singular input or a length that is not `n²`.
pub fn invert_dyn<T: Scalar>(m: &[T], n: usize) -> Option<Vec<T>> {
    if m.len() != n * n || n == 0 {
        return None;
    }
    let mut a = m.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    let scale = max_abs(m);
    if scale == T::zero() {
        return None;
    }
    let tol = scale * T::epsilon() * lit(16.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .abs()
                    .partial_cmp(&a[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if a[piv * n + col].abs() <= tol {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != T::zero() {
                    for k in 0..n {
                        a[r * n + k] = a[r * n + k] - f * a[col * n + k];
                        inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Determinant of a 4x4 matrix by cofactor expansion over 2x2 minors.
pub fn det4<T: Scalar>(m: &[[T; 4]; 4]) -> T {
    let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
    let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
    let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
    let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
    let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
    let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];
    let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
    let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
    let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
    let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
    let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
    let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];
    s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
}

/// Largest absolute entry of a slice.
pub fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}
