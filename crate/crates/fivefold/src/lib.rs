//! Five-vector differential geometry on small 4D lattices.
//!
//! The crate covers the index algebra of four-, five- and adjoint (bivector)
//! indices, the connection and curvature families built on it, the generalized
//! Einstein/Kibble-Sciama apparatus, bivector gauge fields, the coupled
//! electromagnetic/antisymmetric-tensor field system and adjoint integration.
//!
//! Conventions used throughout:
//!
//! * signature `(+,-,-,-)`;
//! * five-indices run over `0,1,2,3,5`, and the fifth direction is stored at array position `4`;
//! * adjoint indices follow the order `01<02<03<05<12<13<15<23<25<35`;
//! * `Γ^α_{βμ}` is stored as `[α][β][μ]`, the last slot being the derivative direction;
//! * antisymmetrization carries a factor one half.
//!
//! Every numerical routine is generic over [`Scalar`], implemented for `f32` and `f64`.

pub mod adjoint;
pub mod algebra;
pub mod connections;
pub mod convergence;
pub mod curvature;
pub mod electro;
pub mod gauge;
pub mod gravity;
pub mod lattice;
pub mod scalar;
pub mod testfields;

pub use scalar::Scalar;

/// Errors reported by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Double-precision aliases.
pub mod f64s {
    pub type Grid4 = crate::lattice::Grid4<f64>;
    pub type Field = crate::lattice::Field<f64>;
    pub type MetricField = crate::lattice::MetricField<f64>;
    pub type Bivector5 = crate::algebra::Bivector5<f64>;
    pub type FiveMetric = crate::algebra::FiveMetric<f64>;
    pub type Geometry = crate::connections::Geometry<f64>;
}

/// Single-precision aliases.
pub mod f32s {
    pub type Grid4 = crate::lattice::Grid4<f32>;
    pub type Field = crate::lattice::Field<f32>;
    pub type MetricField = crate::lattice::MetricField<f32>;
    pub type Bivector5 = crate::algebra::Bivector5<f32>;
    pub type FiveMetric = crate::algebra::FiveMetric<f32>;
    pub type Geometry = crate::connections::Geometry<f32>;
}
