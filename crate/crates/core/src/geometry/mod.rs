//! Exact-tagged angles, rotation axes and orientation-preserving isometries
//! of the plane and 3-space.
//!
//! Points are carried as [`Vec3`] throughout; planar points live in the
//! `z = 0` slice and planar isometries act as rotations about `+z`.

mod angle;
mod axis;
mod isometry;

pub use angle::{classify_angle, Angle, AngleClass, AngleKind};
pub use axis::{conform_directions, conform_rationally, line_relation, Axis, Line3, LineRelation};
pub use isometry::{compose, make_rotation, make_rotation_rad, DirectedIsometry};

use thiserror::Error;

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Tolerance for geometric predicates (parallelism, incidence, line relations).
pub const GEOMETRIC_TOL: f64 = 1e-9;
/// Tolerance for algebraic identities (unit norms, rational detection).
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Largest denominator tried when recognising a raw angle as `k·π/n`.
pub const RAW_MAX_DENOMINATOR: i64 = 360;
/// Largest denominator tried when recognising a float cosine as rational.
pub const COSINE_MAX_DENOMINATOR: i64 = 1000;
/// Compositions between re-orthonormalisations of the linear part.
pub const RENORMALIZE_EVERY: u32 = 64;

/// Ambient dimension of an isometry or axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Option<Dim> {
        match d {
            2 => Some(Dim::Two),
            3 => Some(Dim::Three),
            _ => None,
        }
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.get())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("direction vector has norm {norm}, expected a unit vector")]
    NonUnitDirection { norm: f64 },
    #[error("cannot build a line through two coincident points")]
    CoincidentPoints,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("zero denominator in rational angle")]
    ZeroDenominator,
    #[error("cosine {0} lies outside [-1, 1]")]
    CosineOutOfRange(String),
    #[error("sine sign must be +1 or -1, got {0}")]
    InvalidSineSign(i8),
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("lines are parallel; no angle is formed")]
    ParallelLines,
    #[error("zero-length direction vector")]
    ZeroVector,
    #[error("cannot parse angle `{0}`: expected `pi p/q`, `acos c [+|-]` or `rad x`")]
    AngleSyntax(String),
}

/// Coordinates of a planar or spatial point as a slice of length `dim`.
pub(crate) fn vec_from_slice(p: &[f64], dim: Dim) -> Result<Vec3, GeometryError> {
    if p.len() != dim.get() {
        return Err(GeometryError::DimMismatch {
            expected: dim.get(),
            found: p.len(),
        });
    }
    Ok(match dim {
        Dim::Two => Vec3::new(p[0], p[1], 0.0),
        Dim::Three => Vec3::new(p[0], p[1], p[2]),
    })
}

pub(crate) fn vec_to_vec(v: &Vec3, dim: Dim) -> Vec<f64> {
    v.as_slice()[..dim.get()].to_vec()
}
