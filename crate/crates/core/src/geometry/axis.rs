use num_rational::Ratio;

use super::{
    classify_angle, Angle, AngleClass, Dim, GeometryError, Vec3, ALGEBRAIC_TOL, COSINE_MAX_DENOMINATOR,
    GEOMETRIC_TOL,
};

/// A directed line in 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line3 {
    base: Vec3,
    dir: Vec3,
}

impl Line3 {
    /// `dir` must already be a unit vector (within 1e-12); it is not rescaled.
    pub fn new(base: Vec3, dir: Vec3) -> Result<Self, GeometryError> {
        let norm = dir.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(GeometryError::NonUnitDirection { norm });
        }
        Ok(Line3 { base, dir })
    }

    /// The line through `from` directed towards `to`.
    pub fn through(from: Vec3, to: Vec3) -> Result<Self, GeometryError> {
        let d = to - from;
        let n = d.norm();
        if n < GEOMETRIC_TOL {
            return Err(GeometryError::CoincidentPoints);
        }
        Ok(Line3 { base: from, dir: d / n })
    }

    /// Used for images of valid lines under isometries; absorbs rounding drift.
    pub(crate) fn renormalized(base: Vec3, dir: Vec3) -> Self {
        Line3 { base, dir: dir.normalize() }
    }

    pub fn base(&self) -> Vec3 {
        self.base
    }

    pub fn dir(&self) -> Vec3 {
        self.dir
    }

    pub fn reversed(&self) -> Line3 {
        Line3 { base: self.base, dir: -self.dir }
    }

    pub fn distance_to_point(&self, p: &Vec3) -> f64 {
        (p - self.base).cross(&self.dir).norm()
    }

    /// Same point set, ignoring direction.
    pub fn same_line(&self, other: &Line3) -> bool {
        self.dir.cross(&other.dir).norm() < GEOMETRIC_TOL
            && (other.base - self.base).cross(&self.dir).norm() < GEOMETRIC_TOL
    }

    pub fn approx_eq(&self, other: &Line3, tol: f64) -> bool {
        (self.dir - other.dir).norm() < tol && (other.base - self.base).cross(&self.dir).norm() < tol
    }
}

/// A rotation axis: a centre point in the plane or a directed line in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Point2(Vec3),
    Line3(Line3),
}

impl Axis {
    pub fn point2(x: f64, y: f64) -> Axis {
        Axis::Point2(Vec3::new(x, y, 0.0))
    }

    pub fn line3(base: [f64; 3], dir: [f64; 3]) -> Result<Axis, GeometryError> {
        Line3::new(Vec3::from(base), Vec3::from(dir)).map(Axis::Line3)
    }

    pub fn dim(&self) -> Dim {
        match self {
            Axis::Point2(_) => Dim::Two,
            Axis::Line3(_) => Dim::Three,
        }
    }

    /// Same point set (direction ignored for lines).
    pub fn same_point_set(&self, other: &Axis) -> bool {
        match (self, other) {
            (Axis::Point2(a), Axis::Point2(b)) => (a - b).norm() < GEOMETRIC_TOL,
            (Axis::Line3(a), Axis::Line3(b)) => a.same_line(b),
            _ => false,
        }
    }

    /// Equality of axes including direction, within `tol`.
    pub fn approx_eq(&self, other: &Axis, tol: f64) -> bool {
        match (self, other) {
            (Axis::Point2(a), Axis::Point2(b)) => (a - b).norm() < tol,
            (Axis::Line3(a), Axis::Line3(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }

    /// A point on the axis.
    pub fn anchor(&self) -> Vec3 {
        match self {
            Axis::Point2(p) => *p,
            Axis::Line3(l) => l.base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineRelation {
    Parallel { coincident: bool },
    Intersecting(Vec3),
    Skew,
}

pub fn line_relation(l1: &Line3, l2: &Line3) -> LineRelation {
    let n = l1.dir.cross(&l2.dir);
    let w = l2.base - l1.base;
    let n_norm = n.norm();
    if n_norm < GEOMETRIC_TOL {
        return LineRelation::Parallel {
            coincident: w.cross(&l1.dir).norm() < GEOMETRIC_TOL,
        };
    }
    // distance between the two lines
    if (w.dot(&n) / n_norm).abs() >= GEOMETRIC_TOL {
        return LineRelation::Skew;
    }
    // l1.base + s·d1 = l2.base + t·d2, solved in the plane they span
    let s = w.cross(&l2.dir).dot(&n) / (n_norm * n_norm);
    LineRelation::Intersecting(l1.base + l1.dir * s)
}

fn rational_near(x: f64) -> Option<Ratio<i64>> {
    (1..=COSINE_MAX_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() < ALGEBRAIC_TOL).then(|| Ratio::new(p as i64, q))
    })
}

/// Classifies the angle formed by two (nonparallel) direction vectors.
/// The cosine must be recognisably rational (denominator ≤ 1000 within
/// 1e-12) for a verdict other than `Unknown`.
pub fn conform_directions(d1: &Vec3, d2: &Vec3) -> Result<AngleClass, GeometryError> {
    let (n1, n2) = (d1.norm(), d2.norm());
    if n1 < GEOMETRIC_TOL || n2 < GEOMETRIC_TOL {
        return Err(GeometryError::ZeroVector);
    }
    let (u1, u2) = (d1 / n1, d2 / n2);
    if u1.cross(&u2).norm() < GEOMETRIC_TOL {
        return Err(GeometryError::ParallelLines);
    }
    let c = u1.dot(&u2).clamp(-1.0, 1.0);
    Ok(match rational_near(c) {
        Some(cos) => classify_angle(&Angle::acos(cos, 1)?),
        None => AngleClass::Unknown,
    })
}

/// Whether a translate of `l2` meets `l1` at a rational angle.
pub fn conform_rationally(l1: &Line3, l2: &Line3) -> Result<AngleClass, GeometryError> {
    conform_directions(&l1.dir, &l2.dir)
}
