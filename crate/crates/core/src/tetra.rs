//! The regular tetrahedron, its six edge rotations and the peripatetic
//! tumbling that rolls it from face to face.
//!
//! Each edge rotation turns through the supplement `π − θ` of the dihedral
//! angle `θ` (`cos θ = 1/3`), which is exactly the turn that rolls the solid
//! over that edge onto the adjacent face. Edges carry a direction so that the
//! positive turn is the roll that brings the vertex with the larger label down
//! into the plane of the face holding the smaller one (for edge `AB`: `D`
//! lands in plane `ABC`).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::geometry::{make_rotation, Angle, Axis, Dim, DirectedIsometry, GeometryError, Line3, Vec3, GEOMETRIC_TOL};
use crate::orbit::spatial::SpatialHash;
use crate::orbit::{bfs_orbit, Mode, OrbitError, SamplerBudget};
use crate::words::{peripatetic_eval, reduce, GeneratorSet, Letter, PeripateticState, Word, WordError};

/// Slab half-width for the in-plane filter of [`hexagon_report`].
pub const HEX_SLAB_TOL: f64 = 1e-6;
/// Distances closer than this share a histogram bin in [`hexagon_report`].
pub const HEX_HISTOGRAM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TetraError {
    #[error("edge length must be positive, got {0}")]
    NonPositiveEdge(f64),
    #[error("tetrahedron is degenerate (signed volume {0})")]
    Degenerate(f64),
    #[error("tetrahedron is negatively oriented (signed volume {0}); swap two vertices")]
    NegativeOrientation(f64),
    #[error("tetrahedron is not regular")]
    Irregular,
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("tumble sign must be +1 or -1, got {0}")]
    InvalidSign(i8),
    #[error("seed triple is collinear; no plane is determined")]
    DegenerateSeed,
    #[error(transparent)]
    Words(#[from] WordError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    A,
    B,
    C,
    D,
}

impl Vertex {
    pub const ALL: [Vertex; 4] = [Vertex::A, Vertex::B, Vertex::C, Vertex::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> char {
        ['A', 'B', 'C', 'D'][self.index()]
    }

    fn from_char(c: char) -> Option<Vertex> {
        match c.to_ascii_uppercase() {
            'A' => Some(Vertex::A),
            'B' => Some(Vertex::B),
            'C' => Some(Vertex::C),
            'D' => Some(Vertex::D),
            _ => None,
        }
    }
}

/// An unordered vertex pair, stored with the smaller label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey(Vertex, Vertex);

impl EdgeKey {
    pub const ALL: [EdgeKey; 6] = [
        EdgeKey(Vertex::A, Vertex::B),
        EdgeKey(Vertex::A, Vertex::C),
        EdgeKey(Vertex::A, Vertex::D),
        EdgeKey(Vertex::B, Vertex::C),
        EdgeKey(Vertex::B, Vertex::D),
        EdgeKey(Vertex::C, Vertex::D),
    ];

    pub fn new(u: Vertex, v: Vertex) -> Option<EdgeKey> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(EdgeKey(u, v)),
            std::cmp::Ordering::Greater => Some(EdgeKey(v, u)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn ends(self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    /// The two vertices off this edge, in label order.
    pub fn others(self) -> (Vertex, Vertex) {
        let mut rest = Vertex::ALL.iter().copied().filter(|&v| v != self.0 && v != self.1);
        (rest.next().expect("four vertices"), rest.next().expect("four vertices"))
    }

    /// Position in [`EdgeKey::ALL`], which is also the generator index.
    pub fn index(self) -> usize {
        EdgeKey::ALL.iter().position(|&e| e == self).expect("normalized key")
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0.label(), self.1.label())
    }
}

impl FromStr for EdgeKey {
    type Err = TetraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        let bad = || TetraError::UnknownEdge(s.to_string());
        if chars.len() != 2 {
            return Err(bad());
        }
        let u = Vertex::from_char(chars[0]).ok_or_else(bad)?;
        let v = Vertex::from_char(chars[1]).ok_or_else(bad)?;
        EdgeKey::new(u, v).ok_or_else(bad)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tetrahedron {
    vertices: [Vec3; 4],
}

/// `det(A−D, B−D, C−D) / 6`: positive when `A, B, C` run counterclockwise
/// seen from the side of their plane away from `D`.
fn signed_volume(v: &[Vec3; 4]) -> f64 {
    let [a, b, c, d] = v;
    (a - d).dot(&(b - d).cross(&(c - d))) / 6.0
}

impl Tetrahedron {
    /// Vertices `s·(1,1,1), s·(1,−1,−1), s·(−1,1,−1), s·(−1,−1,1)` with
    /// `s = edge/(2√2)`, labelled `A, B, C, D`; barycentre at the origin.
    pub fn regular(edge_length: f64) -> Result<Self, TetraError> {
        if !(edge_length > 0.0 && edge_length.is_finite()) {
            return Err(TetraError::NonPositiveEdge(edge_length));
        }
        let s = edge_length / (2.0 * 2f64.sqrt());
        Ok(Tetrahedron {
            vertices: [
                Vec3::new(s, s, s),
                Vec3::new(s, -s, -s),
                Vec3::new(-s, s, -s),
                Vec3::new(-s, -s, s),
            ],
        })
    }

    /// Any non-degenerate, positively oriented vertex quadruple.
    pub fn from_vertices(vertices: [Vec3; 4]) -> Result<Self, TetraError> {
        let vol = signed_volume(&vertices);
        let scale = vertices.iter().map(|v| (v - vertices[0]).norm()).fold(0.0, f64::max);
        if !(vol.abs() > GEOMETRIC_TOL * scale.powi(3).max(f64::MIN_POSITIVE)) {
            return Err(TetraError::Degenerate(vol));
        }
        if vol < 0.0 {
            return Err(TetraError::NegativeOrientation(vol));
        }
        Ok(Tetrahedron { vertices })
    }

    pub fn vertex(&self, v: Vertex) -> Vec3 {
        self.vertices[v.index()]
    }

    pub fn vertices(&self) -> &[Vec3; 4] {
        &self.vertices
    }

    pub fn barycenter(&self) -> Vec3 {
        self.vertices.iter().sum::<Vec3>() / 4.0
    }

    /// Positive for every valid tetrahedron; proper rotations preserve it.
    pub fn signed_volume(&self) -> f64 {
        signed_volume(&self.vertices)
    }

    pub fn edge_vector(&self, e: EdgeKey) -> Vec3 {
        self.vertex(e.1) - self.vertex(e.0)
    }

    /// The common edge length if all six agree within 1e-9.
    pub fn edge_length(&self) -> Option<f64> {
        let lens: Vec<f64> = EdgeKey::ALL.iter().map(|&e| self.edge_vector(e).norm()).collect();
        let first = lens[0];
        lens.iter().all(|l| (l - first).abs() < GEOMETRIC_TOL).then_some(first)
    }

    pub fn is_regular(&self) -> bool {
        self.edge_length().is_some()
    }

    /// Interior dihedral angle at edge `e`, in radians, from the face normals.
    pub fn edge_dihedral(&self, e: EdgeKey) -> f64 {
        let (x, y) = e.others();
        let dir = self.edge_vector(e).normalize();
        let u_pos = self.vertex(e.0);
        let perp = |w: Vec3| {
            let d = w - u_pos;
            d - dir * d.dot(&dir)
        };
        let a = perp(self.vertex(x));
        let b = perp(self.vertex(y));
        (a.dot(&b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos()
    }
}

pub fn regular_tetrahedron(edge_length: f64) -> Result<Tetrahedron, TetraError> {
    Tetrahedron::regular(edge_length)
}

/// `θ` with `cos θ = 1/3`, `sin θ = 2√2/3`, checked numerically against every
/// edge of `t`.
pub fn dihedral_angle(t: &Tetrahedron) -> Result<Angle, TetraError> {
    let theta = Angle::acos(Ratio::new(1, 3), 1)?;
    let matches = EdgeKey::ALL
        .iter()
        .all(|&e| (t.edge_dihedral(e).cos() - 1.0 / 3.0).abs() < GEOMETRIC_TOL);
    if !matches {
        return Err(TetraError::Irregular);
    }
    Ok(theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRotation {
    pub edge: EdgeKey,
    pub axis: Line3,
    pub angle: Angle,
    /// +1 when the axis points from the smaller to the larger label.
    pub direction_flag: i8,
}

/// The six edge generators in [`EdgeKey::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRotationSet {
    entries: Vec<EdgeRotation>,
}

impl EdgeRotationSet {
    pub fn entries(&self) -> &[EdgeRotation] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, e: EdgeKey) -> &EdgeRotation {
        &self.entries[e.index()]
    }

    /// Every axis reversed: the positive turn becomes the opposite roll.
    pub fn flipped(&self) -> EdgeRotationSet {
        EdgeRotationSet {
            entries: self
                .entries
                .iter()
                .map(|r| EdgeRotation {
                    axis: r.axis.reversed(),
                    direction_flag: -r.direction_flag,
                    ..r.clone()
                })
                .collect(),
        }
    }

    pub fn generator_set(&self) -> Result<GeneratorSet, TetraError> {
        Ok(GeneratorSet::new(
            Dim::Three,
            self.entries.iter().map(|r| (Axis::Line3(r.axis), r.angle)).collect(),
        )?)
    }
}

fn distance_to_plane(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let n = (b - a).cross(&(c - a)).normalize();
    (p - a).dot(&n).abs()
}

/// Whether turning by `angle` about `axis` brings the edge's larger
/// off-edge vertex into the plane of the edge and the smaller one.
fn rolls_forward(t: &Tetrahedron, e: EdgeKey, axis: &Line3, angle: &Angle) -> bool {
    let (u, v) = e.ends();
    let (x, y) = e.others();
    let r = make_rotation(&Axis::Line3(*axis), angle);
    let landed = r.apply(&t.vertex(y));
    distance_to_plane(&landed, &t.vertex(u), &t.vertex(v), &t.vertex(x)) < GEOMETRIC_TOL
}

/// Edge generators with `Size = π − θ`, directed by the rolling convention.
/// Irregular input gets per-edge raw supplements.
pub fn edge_rotations(t: &Tetrahedron) -> Result<EdgeRotationSet, TetraError> {
    let regular = dihedral_angle(t).is_ok();
    let mut entries = Vec::with_capacity(6);
    for e in EdgeKey::ALL {
        let angle = if regular {
            Angle::acos(Ratio::new(-1, 3), 1)?
        } else {
            Angle::raw(PI - t.edge_dihedral(e))?
        };
        let (u, v) = e.ends();
        let forward = Line3::through(t.vertex(u), t.vertex(v))?;
        let (axis, direction_flag) = if rolls_forward(t, e, &forward, &angle) {
            (forward, 1)
        } else {
            (forward.reversed(), -1)
        };
        entries.push(EdgeRotation { edge: e, axis, angle, direction_flag });
    }
    Ok(EdgeRotationSet { entries })
}

/// One roll: the edge, by its current position, and the turn direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TumbleStep {
    pub edge: EdgeKey,
    pub sign: i8,
}

impl TumbleStep {
    pub fn new(edge: EdgeKey, sign: i8) -> Result<Self, TetraError> {
        if sign != 1 && sign != -1 {
            return Err(TetraError::InvalidSign(sign));
        }
        Ok(TumbleStep { edge, sign })
    }
}

impl FromStr for TumbleStep {
    type Err = TetraError;

    /// `AB`, `AB+` or `AB-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (key, sign) = match s.strip_suffix('-') {
            Some(k) => (k, -1),
            None => (s.strip_suffix('+').unwrap_or(s), 1),
        };
        TumbleStep::new(key.parse()?, sign)
    }
}

impl fmt::Display for TumbleStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.edge, if self.sign > 0 { '+' } else { '-' })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TumbleState {
    pub vertices: [Vec3; 4],
    pub point: Vec3,
    /// Current edge axes in [`EdgeKey::ALL`] order.
    pub edge_axes: Vec<Line3>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TumbleTrace {
    pub total: DirectedIsometry,
    /// `states[0]` is the starting position; one more entry per step.
    pub states: Vec<TumbleState>,
}

impl TumbleTrace {
    pub fn last(&self) -> &TumbleState {
        self.states.last().expect("trace starts non-empty")
    }
}

fn snapshot(t: &Tetrahedron, p: &Vec3, state: &PeripateticState) -> TumbleState {
    TumbleState {
        vertices: t.vertices.map(|v| state.total.apply(&v)),
        point: state.total.apply(p),
        edge_axes: state
            .axes
            .iter()
            .map(|a| match a {
                Axis::Line3(l) => *l,
                Axis::Point2(_) => unreachable!("edge axes are lines"),
            })
            .collect(),
    }
}

/// Rolls `t` (carrying the affixed point `p`) through `steps` with the
/// default edge rotations. Each step turns about the edge's current position.
pub fn tumble(t: &Tetrahedron, p: Vec3, steps: &[TumbleStep]) -> Result<TumbleTrace, TetraError> {
    tumble_with(&edge_rotations(t)?, t, p, steps)
}

pub fn tumble_with(
    rotations: &EdgeRotationSet,
    t: &Tetrahedron,
    p: Vec3,
    steps: &[TumbleStep],
) -> Result<TumbleTrace, TetraError> {
    let gens = rotations.generator_set()?;
    let mut state = PeripateticState::new(&gens);
    let mut states = Vec::with_capacity(steps.len() + 1);
    states.push(snapshot(t, &p, &state));
    for s in steps {
        state.step(&gens, Letter::new(s.edge.index(), i64::from(s.sign)))?;
        states.push(snapshot(t, &p, &state));
    }
    Ok(TumbleTrace { total: state.total, states })
}

/// Nearest-neighbour structure of the orbit points lying in the plane through
/// `Pf`, `P(f ⋆ r_AB)` and `P(f ⋆ r_AC)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HexReport {
    pub plane_point: Vec3,
    pub plane_normal: Vec3,
    pub seeds: [Vec3; 3],
    /// `|s0 s1|`, `|s0 s2|`, `|s1 s2|`.
    pub seed_distances: [f64; 3],
    pub in_plane: Vec<Vec3>,
    /// Generating word length of each in-plane point.
    pub in_plane_word_len: Vec<usize>,
    /// (distance, count), ascending; distances within 1e-6 share a bin.
    pub nn_histogram: Vec<(f64, usize)>,
    /// `f64::INFINITY` when fewer than two points are in the plane.
    pub min_nn_distance: f64,
    pub budget: SamplerBudget,
    pub slab_tol: f64,
    pub cloud_points: usize,
    pub truncated: bool,
    pub warnings: Vec<String>,
}

/// Explores the in-plane slice of the peripatetic orbit of `p`. Reports
/// structure only; it does not test for a tiling.
pub fn hexagon_report(t: &Tetrahedron, p: Vec3, f: &Word, budget: SamplerBudget) -> Result<HexReport, TetraError> {
    let mut warnings = Vec::new();
    match t.edge_length() {
        Some(l) if (l - 6f64.sqrt()).abs() < GEOMETRIC_TOL => {}
        Some(l) => warnings.push(format!("edge length {l} differs from sqrt(6)")),
        None => warnings.push("tetrahedron is not regular".to_string()),
    }
    if (p - t.barycenter()).norm() > GEOMETRIC_TOL {
        warnings.push("point is not the barycenter".to_string());
    }
    let rotations = edge_rotations(t)?;
    let gens = rotations.generator_set()?;
    let ab = EdgeKey(Vertex::A, Vertex::B).index();
    let ac = EdgeKey(Vertex::A, Vertex::C).index();
    let image = |w: &Word| -> Result<Vec3, TetraError> { Ok(peripatetic_eval(&gens, w)?.total.apply(&p)) };
    let extend = |i: usize| {
        let mut letters = f.letters().to_vec();
        letters.push(Letter::new(i, 1));
        reduce(&gens, &letters)
    };
    let seeds = [image(f)?, image(&extend(ab))?, image(&extend(ac))?];
    let normal = (seeds[1] - seeds[0]).cross(&(seeds[2] - seeds[0]));
    if normal.norm() < GEOMETRIC_TOL {
        return Err(TetraError::DegenerateSeed);
    }
    let normal = normal.normalize();
    let cloud = bfs_orbit(&gens, p, Mode::Peripatetic, budget)?;
    let (in_plane, in_plane_word_len): (Vec<Vec3>, Vec<usize>) = cloud
        .points()
        .iter()
        .zip(cloud.word_len())
        .filter(|(q, _)| (*q - seeds[0]).dot(&normal).abs() < HEX_SLAB_TOL)
        .map(|(q, l)| (*q, *l))
        .unzip();

    let mut nn: Vec<f64> = Vec::new();
    if in_plane.len() >= 2 {
        let hash = SpatialHash::build(Dim::Three, 0.5, &in_plane);
        for (i, q) in in_plane.iter().enumerate() {
            if let Some((_, d)) = hash.nearest_where(&in_plane, q, |j| j != i) {
                nn.push(d);
            }
        }
    }
    nn.sort_by(f64::total_cmp);
    let mut nn_histogram: Vec<(f64, usize)> = Vec::new();
    for d in &nn {
        match nn_histogram.last_mut() {
            Some((v, c)) if (d - *v).abs() < HEX_HISTOGRAM_TOL => *c += 1,
            _ => nn_histogram.push((*d, 1)),
        }
    }
    Ok(HexReport {
        plane_point: seeds[0],
        plane_normal: normal,
        seeds,
        seed_distances: [
            (seeds[1] - seeds[0]).norm(),
            (seeds[2] - seeds[0]).norm(),
            (seeds[2] - seeds[1]).norm(),
        ],
        in_plane,
        in_plane_word_len,
        min_nn_distance: nn.first().copied().unwrap_or(f64::INFINITY),
        nn_histogram,
        budget,
        slab_tol: HEX_SLAB_TOL,
        cloud_points: cloud.len(),
        truncated: cloud.truncated(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_distance(t: &TumbleState, a: Vertex, b: Vertex, c: Vertex, p: &Vec3) -> f64 {
        distance_to_plane(p, &t.vertices[a.index()], &t.vertices[b.index()], &t.vertices[c.index()])
    }

    #[test]
    fn regular_template_scaled() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let expected = [
            Vec3::new(h, h, h),
            Vec3::new(h, -h, -h),
            Vec3::new(-h, h, -h),
            Vec3::new(-h, -h, h),
        ];
        for (v, e) in t.vertices().iter().zip(expected) {
            assert!((v - e).norm() < 1e-15);
        }
        assert!(t.barycenter().norm() < 1e-12);
        assert!((t.edge_length().unwrap() - 6f64.sqrt()).abs() < 1e-9);
        // volume of a regular tetrahedron is l³/(6√2)
        assert!((t.signed_volume() - 6f64.sqrt().powi(3) / (6.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(regular_tetrahedron(0.0).is_err());
        assert!(regular_tetrahedron(-1.0).is_err());
    }

    #[test]
    fn dihedral_is_arccos_third_at_every_scale() {
        let reference = dihedral_angle(&regular_tetrahedron(1.0).unwrap()).unwrap();
        for l in [1.0, 6f64.sqrt(), 10.0] {
            let a = dihedral_angle(&regular_tetrahedron(l).unwrap()).unwrap();
            assert_eq!(a, reference);
            assert!((a.radians().cos() - 1.0 / 3.0).abs() < 1e-12);
            assert!((a.radians().sin() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
        }
        let skewed = Tetrahedron::from_vertices([
            Vec3::zeros(),
            Vec3::y(),
            Vec3::x(),
            Vec3::z(),
        ])
        .unwrap();
        let mirrored = Tetrahedron::from_vertices([Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()]);
        assert!(matches!(mirrored, Err(TetraError::NegativeOrientation(_))));
        assert_eq!(dihedral_angle(&skewed), Err(TetraError::Irregular));
        let flat = Tetrahedron::from_vertices([Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)]);
        assert!(matches!(flat, Err(TetraError::Degenerate(_))));
    }

    #[test]
    fn six_irrational_edge_rotations() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let set = edge_rotations(&t).unwrap();
        assert_eq!(set.len(), 6);
        let supplement = PI - (1.0f64 / 3.0).acos();
        for r in set.entries() {
            assert!((r.angle.size() - supplement).abs() < 1e-12);
            assert!((r.angle.size() - 1.910633).abs() < 1e-6);
            assert_eq!(r.angle.classify(), crate::geometry::AngleClass::Irrational);
            let (u, v) = r.edge.ends();
            assert!(r.axis.distance_to_point(&t.vertex(u)) < 1e-12);
            assert!(r.axis.distance_to_point(&t.vertex(v)) < 1e-12);
        }
    }

    #[test]
    fn one_tumble_lays_d_in_abc_for_exactly_one_sign() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let ab: EdgeKey = "AB".parse().unwrap();
        let dist = |sign| {
            let trace = tumble(&t, Vec3::zeros(), &[TumbleStep::new(ab, sign).unwrap()]).unwrap();
            let moved_d = trace.last().vertices[Vertex::D.index()];
            plane_distance(&trace.states[0], Vertex::A, Vertex::B, Vertex::C, &moved_d)
        };
        let (plus, minus) = (dist(1), dist(-1));
        assert!(plus < 1e-9, "{plus}");
        assert!(minus > 1e-9, "{minus}");
    }

    #[test]
    fn every_edge_rolls_its_larger_neighbour_down() {
        let t = regular_tetrahedron(2.0).unwrap();
        let set = edge_rotations(&t).unwrap();
        for r in set.entries() {
            assert!(rolls_forward(&t, r.edge, &r.axis, &r.angle));
            assert!(!rolls_forward(&t, r.edge, &r.axis.reversed(), &r.angle));
        }
        let flipped = set.flipped();
        for (a, b) in set.entries().iter().zip(flipped.entries()) {
            assert_eq!(a.direction_flag, -b.direction_flag);
        }
    }

    #[test]
    fn opposite_rolls_cancel_and_empty_is_identity() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let p = Vec3::new(0.1, 0.2, 0.3);
        let empty = tumble(&t, p, &[]).unwrap();
        assert_eq!(empty.states.len(), 1);
        assert_eq!(empty.last().vertices, *t.vertices());
        let cd: EdgeKey = "DC".parse().unwrap();
        let back = tumble(&t, p, &["CD+".parse().unwrap(), TumbleStep::new(cd, -1).unwrap()]).unwrap();
        assert!(back.total.is_identity(1e-9));
        assert!((back.last().point - p).norm() < 1e-9);
    }

    #[test]
    fn tumbling_preserves_edge_lengths() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let steps: Vec<TumbleStep> = (0..50)
            .map(|i| TumbleStep::new(EdgeKey::ALL[(i * 7 + 3) % 6], if i % 3 == 0 { -1 } else { 1 }).unwrap())
            .collect();
        let trace = tumble(&t, t.barycenter(), &steps).unwrap();
        for s in &trace.states {
            let moved = Tetrahedron::from_vertices(s.vertices).unwrap();
            assert!((moved.edge_length().unwrap() - 6f64.sqrt()).abs() < 1e-9);
            assert!((moved.signed_volume() - t.signed_volume()).abs() < 1e-9);
            // axes travel with the solid
            for (k, e) in EdgeKey::ALL.iter().enumerate() {
                let (u, v) = e.ends();
                assert!(s.edge_axes[k].distance_to_point(&s.vertices[u.index()]) < 1e-9);
                assert!(s.edge_axes[k].distance_to_point(&s.vertices[v.index()]) < 1e-9);
            }
        }
    }

    #[test]
    fn barycenter_is_sqrt3_over_2_from_every_edge() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        for r in edge_rotations(&t).unwrap().entries() {
            assert!((r.axis.distance_to_point(&t.barycenter()) - 3f64.sqrt() / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn edge_key_parsing() {
        assert_eq!("ba".parse::<EdgeKey>().unwrap().to_string(), "AB");
        assert!("AA".parse::<EdgeKey>().is_err());
        assert!("AE".parse::<EdgeKey>().is_err());
        assert!("ABC".parse::<EdgeKey>().is_err());
        assert_eq!("BD-".parse::<TumbleStep>().unwrap().sign, -1);
        assert_eq!("BD".parse::<TumbleStep>().unwrap().sign, 1);
        assert!(TumbleStep::new(EdgeKey::ALL[0], 0).is_err());
    }

    #[test]
    fn hexagon_seed_chords_are_sqrt2() {
        let t = regular_tetrahedron(6f64.sqrt()).unwrap();
        let budget = SamplerBudget::new(2, 1, 10_000).unwrap();
        let r = hexagon_report(&t, t.barycenter(), &Word::empty(), budget).unwrap();
        assert!((r.seed_distances[0] - 2f64.sqrt()).abs() < 1e-9);
        assert!((r.seed_distances[1] - 2f64.sqrt()).abs() < 1e-9);
        assert!(r.warnings.is_empty());
        assert_eq!(r.slab_tol, HEX_SLAB_TOL);
        assert_eq!(r.budget, budget);
        for q in &r.in_plane {
            assert!((q - r.plane_point).dot(&r.plane_normal).abs() < HEX_SLAB_TOL);
        }
        // the three seeds are orbit points within the budget
        assert!(r.in_plane.len() >= 3);
    }

    #[test]
    fn hexagon_warns_off_barycenter() {
        let t = regular_tetrahedron(1.0).unwrap();
        let budget = SamplerBudget::new(1, 1, 100).unwrap();
        let r = hexagon_report(&t, Vec3::new(0.01, 0.0, 0.0), &Word::empty(), budget).unwrap();
        assert_eq!(r.warnings.len(), 2);
    }
}
