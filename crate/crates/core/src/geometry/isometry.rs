use super::{
    vec_from_slice, vec_to_vec, Angle, Axis, Dim, GeometryError, Line3, Mat3, Vec3, RENORMALIZE_EVERY,
};

/// An orientation-preserving rigid motion of the plane or of 3-space.
///
/// The action is written on the right, `P ↦ Pf`, so composition reads left to
/// right: `P(f ∘ g) = (Pf)g`. Internally the linear part is stored in column
/// form, `Pf = R·P + t`; the row-vector matrix of the right action is `Rᵀ`.
/// Planar isometries keep `R` block-diagonal with a fixed `z` axis and `t_z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedIsometry {
    dim: Dim,
    rot: Mat3,
    shift: Vec3,
    since_renormalize: u32,
}

impl DirectedIsometry {
    pub fn identity(dim: Dim) -> Self {
        DirectedIsometry {
            dim,
            rot: Mat3::identity(),
            shift: Vec3::zeros(),
            since_renormalize: 0,
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Column-form rotation matrix `R` with `Pf = R·P + t`.
    pub fn rotation_matrix(&self) -> Mat3 {
        self.rot
    }

    /// Row-vector linear part, `Pf = P·L + t`.
    pub fn linear(&self) -> Mat3 {
        self.rot.transpose()
    }

    pub fn shift(&self) -> Vec3 {
        self.shift
    }

    #[inline]
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rot * p + self.shift
    }

    /// Image of a point given as a coordinate slice of length `dim`.
    pub fn apply_point(&self, p: &[f64]) -> Result<Vec<f64>, GeometryError> {
        let v = vec_from_slice(p, self.dim)?;
        Ok(vec_to_vec(&self.apply(&v), self.dim))
    }

    /// `P(self ∘ g) = (P self) g`.
    pub fn then(&self, g: &DirectedIsometry) -> Result<DirectedIsometry, GeometryError> {
        if self.dim != g.dim {
            return Err(GeometryError::DimMismatch {
                expected: self.dim.get(),
                found: g.dim.get(),
            });
        }
        let mut out = DirectedIsometry {
            dim: self.dim,
            rot: g.rot * self.rot,
            shift: g.rot * self.shift + g.shift,
            since_renormalize: self.since_renormalize + g.since_renormalize + 1,
        };
        if out.since_renormalize >= RENORMALIZE_EVERY {
            out.renormalize();
        }
        Ok(out)
    }

    pub fn inverse(&self) -> DirectedIsometry {
        let rt = self.rot.transpose();
        DirectedIsometry {
            dim: self.dim,
            rot: rt,
            shift: -(rt * self.shift),
            since_renormalize: self.since_renormalize,
        }
    }

    /// Re-orthonormalises the linear part (Gram–Schmidt on the first two
    /// columns, third column by cross product, so `det = +1` exactly up to
    /// rounding).
    pub fn renormalize(&mut self) {
        let c0 = self.rot.column(0).into_owned().normalize();
        let c1 = self.rot.column(1).into_owned();
        let c1 = (c1 - c0 * c0.dot(&c1)).normalize();
        let c2 = c0.cross(&c1);
        self.rot = Mat3::from_columns(&[c0, c1, c2]);
        if self.dim == Dim::Two {
            self.shift.z = 0.0;
        }
        self.since_renormalize = 0;
    }

    /// Largest deviation of `RᵀR` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.rot.transpose() * self.rot - Mat3::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.rot.determinant()
    }

    /// Images of the affine frame `{0, e1, e2[, e3]}`; two isometries agree
    /// everywhere iff they agree on this frame.
    pub fn probe_frame(&self) -> Vec<Vec3> {
        let mut pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y()];
        if self.dim == Dim::Three {
            pts.push(Vec3::z());
        }
        pts.iter().map(|p| self.apply(p)).collect()
    }

    /// Maximum distance between the two images of the probe frame.
    pub fn probe_deviation(&self, other: &DirectedIsometry) -> f64 {
        self.probe_frame()
            .iter()
            .zip(other.probe_frame())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.probe_deviation(&DirectedIsometry::identity(self.dim)) < tol
    }

    /// `A f`: the image of an axis. Lines move their base by the full action
    /// and their direction by the linear part only.
    pub fn transform_axis(&self, axis: &Axis) -> Result<Axis, GeometryError> {
        if axis.dim() != self.dim {
            return Err(GeometryError::DimMismatch {
                expected: self.dim.get(),
                found: axis.dim().get(),
            });
        }
        Ok(self.transform_axis_unchecked(axis))
    }

    #[inline]
    pub(crate) fn transform_axis_unchecked(&self, axis: &Axis) -> Axis {
        match axis {
            Axis::Point2(p) => Axis::Point2(self.apply(p)),
            Axis::Line3(l) => Axis::Line3(Line3::renormalized(self.apply(&l.base()), self.rot * l.dir())),
        }
    }
}

/// Right-handed rotation matrix about the unit vector `u` by `theta`.
fn rodrigues(u: &Vec3, theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    let k = u.cross_matrix();
    Mat3::identity() * c + k * s + (u * u.transpose()) * (1.0 - c)
}

/// Rotation about `axis` by `radians`. Positive angles turn counterclockwise
/// in the plane and by the right-hand rule about a directed line.
pub fn make_rotation_rad(axis: &Axis, radians: f64) -> DirectedIsometry {
    let (dim, rot, centre) = match axis {
        Axis::Point2(c) => (Dim::Two, rodrigues(&Vec3::z(), radians), *c),
        Axis::Line3(l) => (Dim::Three, rodrigues(&l.dir(), radians), l.base()),
    };
    let mut shift = centre - rot * centre;
    if dim == Dim::Two {
        shift.z = 0.0;
    }
    DirectedIsometry {
        dim,
        rot,
        shift,
        since_renormalize: 0,
    }
}

pub fn make_rotation(axis: &Axis, angle: &Angle) -> DirectedIsometry {
    make_rotation_rad(axis, angle.radians())
}

/// `compose(f, g)` acts as `P ↦ (Pf)g`.
pub fn compose(f: &DirectedIsometry, g: &DirectedIsometry) -> Result<DirectedIsometry, GeometryError> {
    f.then(g)
}
