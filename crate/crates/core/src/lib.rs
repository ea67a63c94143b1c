//! Rotation groups generated by finitely many rotations of the plane and of
//! 3-space.
//!
//! Two composition disciplines are implemented side by side: the *stationary*
//! one, where every generator keeps rotating about its original axis, and the
//! *peripatetic* one, where each applied rotation carries all the other axes
//! along with it. On top of that sit reduced-word algebra, orbit samplers,
//! density diagnostics and the tumbling regular tetrahedron.

pub mod export;
pub mod geometry;
pub mod orbit;
pub mod tetra;
pub mod words;

pub use geometry::{Angle, AngleClass, Axis, Dim, DirectedIsometry, Line3, Vec3};
pub use words::{GeneratorSet, Letter, Word};
