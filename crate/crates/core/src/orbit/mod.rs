//! Orbit samplers and density diagnostics.
//!
//! [`bfs_orbit`] enumerates reduced words breadth first and collects the
//! images of a point under either composition discipline. [`ladder_orbit`]
//! builds the nested point sets that alternate between two fixed axes with
//! doubling exponent bounds. The remaining functions measure how densely a
//! cloud fills a region.

mod density;
mod gaps;
pub mod spatial;

pub use density::{
    coverage, density_report, discreteness_report, mesh_estimate, sphere_confinement_check, Ball,
    ConfinementReport, DensityReport, DiscretenessReport,
};
pub use gaps::{circle_gap_stats, circle_gap_stats_turns, GapLength, GapReport};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{make_rotation_rad, Axis, Dim, DirectedIsometry, GeometryError, Vec3, ALGEBRAIC_TOL};
use crate::words::{reduce, GeneratorSet, Letter, Word, WordError};
use spatial::SpatialHash;

/// Default snapping resolution for orbit deduplication.
pub const DEFAULT_DEDUP_CELL: f64 = 1e-6;
/// Tolerance of the sphere confinement check.
pub const CONFINEMENT_TOL: f64 = 1e-9;
/// Parents expanded per parallel batch.
const FRONTIER_CHUNK: usize = 4096;
/// Hard cap on ladder cloud sizes.
pub const LADDER_MAX_POINTS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Words(#[from] WordError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("cloud is empty")]
    EmptyCloud,
    #[error("unknown mode `{0}` (expected `stationary` or `peripatetic`)")]
    InvalidMode(String),
    #[error("the ladder needs exactly two generators, got {0}")]
    NotTwoGenerators(usize),
    #[error("generator {0} has finite order; the ladder needs infinite-order rotations")]
    RationalGenerator(usize),
    #[error("generator {index}: 1/rho = {inverse} is too close to an integer to fix k")]
    IllConditioned { index: usize, inverse: f64 },
    #[error("the ladder is only defined for the stationary discipline")]
    LadderMode,
    #[error("ladder stage {stage} would exceed {limit} points")]
    LadderTooLarge { stage: usize, limit: usize },
    #[error("probe radius must be positive and finite, got {0}")]
    InvalidProbe(f64),
    #[error("grid resolution must be at least 1")]
    InvalidGrid,
    #[error("sample count must be at least 1")]
    InvalidSampleCount,
    #[error("{0}")]
    Invalid(String),
}

/// Composition discipline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Stationary,
    Peripatetic,
}

impl FromStr for Mode {
    type Err = OrbitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stationary" => Ok(Mode::Stationary),
            "peripatetic" => Ok(Mode::Peripatetic),
            other => Err(OrbitError::InvalidMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Stationary => "stationary",
            Mode::Peripatetic => "peripatetic",
        })
    }
}

/// Limits on a breadth-first enumeration; it halts at whichever bound is hit
/// first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerBudget {
    pub max_len: usize,
    pub max_exp: i64,
    pub max_points: usize,
}

impl SamplerBudget {
    pub fn new(max_len: usize, max_exp: i64, max_points: usize) -> Result<Self, OrbitError> {
        if max_exp < 1 {
            return Err(OrbitError::Invalid(format!("max_exp must be positive, got {max_exp}")));
        }
        if max_points < 1 {
            return Err(OrbitError::Invalid("max_points must be positive".into()));
        }
        Ok(SamplerBudget { max_len, max_exp, max_points })
    }
}

/// Deduplicated orbit points with the word and depth that produced each.
///
/// No two stored points lie within `dedup_cell` of each other in Chebyshev
/// distance; the first point to arrive wins.
#[derive(Debug, Clone)]
pub struct OrbitCloud {
    dim: Dim,
    points: Vec<Vec3>,
    word_len: Vec<usize>,
    words: Vec<Word>,
    dedup_cell: f64,
    truncated: bool,
    hash: SpatialHash,
}

impl OrbitCloud {
    pub fn new(dim: Dim, dedup_cell: f64) -> Self {
        OrbitCloud {
            dim,
            points: Vec::new(),
            word_len: Vec::new(),
            words: Vec::new(),
            dedup_cell,
            truncated: false,
            hash: SpatialHash::new(dim, dedup_cell),
        }
    }

    pub fn from_points(dim: Dim, dedup_cell: f64, points: impl IntoIterator<Item = Vec3>) -> Self {
        let mut c = OrbitCloud::new(dim, dedup_cell);
        for p in points {
            c.insert(p, Word::empty());
        }
        c
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn word_len(&self) -> &[usize] {
        &self.word_len
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn dedup_cell(&self) -> f64 {
        self.dedup_cell
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of a stored point within `dedup_cell` (Chebyshev) of `p`.
    pub fn find(&self, p: &Vec3) -> Option<usize> {
        let mut found = None;
        self.hash.for_each_adjacent(self.hash.key(p), |i| {
            let q = &self.points[i as usize];
            if found.is_none() && (q - p).amax() < self.dedup_cell {
                found = Some(i as usize);
            }
        });
        found
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.find(p).is_some()
    }

    /// Stores `p` unless a point already sits within `dedup_cell`.
    pub fn insert(&mut self, p: Vec3, word: Word) -> bool {
        if self.contains(&p) {
            return false;
        }
        let idx = self.points.len() as u32;
        self.hash.insert(idx, &p);
        self.points.push(p);
        self.word_len.push(word.len());
        self.words.push(word);
        true
    }
}

#[derive(Clone)]
struct Node {
    point: Vec3,
    axes: Option<Vec<Axis>>,
    word: Word,
}

fn expand(
    gens: &GeneratorSet,
    node: &Node,
    exps: &[Vec<i64>],
    fixed: &[Vec<DirectedIsometry>],
) -> Vec<Node> {
    let mut out = Vec::new();
    let last = node.word.last_gen();
    for (i, gen_exps) in exps.iter().enumerate() {
        if Some(i) == last {
            continue;
        }
        for (k, &e) in gen_exps.iter().enumerate() {
            let word = node.word.pushed(Letter::new(i, e));
            match &node.axes {
                None => out.push(Node {
                    point: fixed[i][k].apply(&node.point),
                    axes: None,
                    word,
                }),
                Some(axes) => {
                    let r = gens.rotation_about(i, e, &axes[i]);
                    out.push(Node {
                        point: r.apply(&node.point),
                        axes: Some(axes.iter().map(|a| r.transform_axis_unchecked(a)).collect()),
                        word,
                    });
                }
            }
        }
    }
    out
}

/// Breadth-first orbit of `p` with the default dedup resolution.
pub fn bfs_orbit(gens: &GeneratorSet, p: Vec3, mode: Mode, budget: SamplerBudget) -> Result<OrbitCloud, OrbitError> {
    bfs_orbit_with(gens, p, mode, budget, DEFAULT_DEDUP_CELL)
}

/// Enumerates reduced words by increasing length (children ordered by
/// generator index, then exponent) and stores the deduplicated images of `p`.
/// Stationary images follow fixed axes; peripatetic images carry the axis
/// positions along each branch. When `max_points` is reached the cloud is
/// marked truncated.
pub fn bfs_orbit_with(
    gens: &GeneratorSet,
    p: Vec3,
    mode: Mode,
    budget: SamplerBudget,
    dedup_cell: f64,
) -> Result<OrbitCloud, OrbitError> {
    if !(p.iter().all(|x| x.is_finite())) {
        return Err(OrbitError::Invalid("point must be finite".into()));
    }
    if !(dedup_cell > 0.0 && dedup_cell.is_finite()) {
        return Err(OrbitError::Invalid(format!("dedup_cell must be positive, got {dedup_cell}")));
    }
    let p = if gens.dim() == Dim::Two { Vec3::new(p.x, p.y, 0.0) } else { p };
    let exps: Vec<Vec<i64>> = (0..gens.len()).map(|i| gens.exponent_range(i, budget.max_exp)).collect();
    let fixed: Vec<Vec<DirectedIsometry>> = exps
        .iter()
        .enumerate()
        .map(|(i, es)| es.iter().map(|&e| gens.power(i, e)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;

    let mut cloud = OrbitCloud::new(gens.dim(), dedup_cell);
    cloud.insert(p, Word::empty());
    let root = Node {
        point: p,
        axes: (mode == Mode::Peripatetic).then(|| gens.axes()),
        word: Word::empty(),
    };
    let mut frontier = vec![root];
    for _depth in 0..budget.max_len {
        let mut next = Vec::new();
        for chunk in frontier.chunks(FRONTIER_CHUNK) {
            let children: Vec<Vec<Node>> = chunk.par_iter().map(|n| expand(gens, n, &exps, &fixed)).collect();
            for child in children.into_iter().flatten() {
                if !cloud.contains(&child.point) {
                    if cloud.len() >= budget.max_points {
                        cloud.truncated = true;
                        return Ok(cloud);
                    }
                    cloud.insert(child.point, child.word.clone());
                }
                next.push(child);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(cloud)
}

/// One stage `O_b` of the alternating ladder.
#[derive(Debug, Clone)]
pub struct LadderStage {
    pub stage: usize,
    pub points: OrbitCloud,
    /// 0-based generator index applied at this stage.
    pub axis_used: usize,
    /// Largest exponent applied, `2^b · k_i`.
    pub exp_bound: i64,
    pub k: i64,
}

/// `k_i = ⌊1/ρ_i⌋` with `ρ_i = Size(r_i)/π`, so that `k ρ < 1 < (k+1) ρ`.
pub fn ladder_k(gens: &GeneratorSet, index: usize) -> Result<i64, OrbitError> {
    let g = gens.get(index).ok_or(WordError::IndexOutOfRange { index, len: gens.len() })?;
    if g.class.is_rational() {
        return Err(OrbitError::RationalGenerator(index));
    }
    let rho = g.angle.size() / std::f64::consts::PI;
    let inverse = 1.0 / rho;
    if !(rho > 0.0 && rho < 1.0) || (inverse - inverse.round()).abs() < ALGEBRAIC_TOL {
        return Err(OrbitError::IllConditioned { index, inverse });
    }
    Ok(inverse.floor() as i64)
}

/// Stages `O_1 … O_stages`: stage `b` applies `r_i^j`, `0 ≤ j ≤ 2^b k_i`, to
/// every point of stage `b-1` (stage 0 is `{v}`), with `i` the first
/// generator on odd stages and the second on even ones. Axes stay fixed.
pub fn ladder_orbit(gens: &GeneratorSet, v: Vec3, stages: usize, mode: Mode) -> Result<Vec<LadderStage>, OrbitError> {
    ladder_orbit_with(gens, v, stages, mode, DEFAULT_DEDUP_CELL)
}

pub fn ladder_orbit_with(
    gens: &GeneratorSet,
    v: Vec3,
    stages: usize,
    mode: Mode,
    dedup_cell: f64,
) -> Result<Vec<LadderStage>, OrbitError> {
    if mode != Mode::Stationary {
        return Err(OrbitError::LadderMode);
    }
    if gens.len() != 2 {
        return Err(OrbitError::NotTwoGenerators(gens.len()));
    }
    if stages == 0 {
        return Err(OrbitError::Invalid("ladder needs at least one stage".into()));
    }
    let ks = [ladder_k(gens, 0)?, ladder_k(gens, 1)?];
    let v = if gens.dim() == Dim::Two { Vec3::new(v.x, v.y, 0.0) } else { v };
    let mut prev = OrbitCloud::new(gens.dim(), dedup_cell);
    prev.insert(v, Word::empty());
    let mut out: Vec<LadderStage> = Vec::with_capacity(stages);
    for b in 1..=stages {
        let i = if b % 2 == 1 { 0 } else { 1 };
        let bound = ks[i]
            .checked_mul(1i64 << b.min(62))
            .ok_or(OrbitError::LadderTooLarge { stage: b, limit: LADDER_MAX_POINTS })?;
        if (prev.len() as u128) * (bound as u128 + 1) > LADDER_MAX_POINTS as u128 {
            return Err(OrbitError::LadderTooLarge { stage: b, limit: LADDER_MAX_POINTS });
        }
        let axis = gens.generators()[i].axis;
        let powers: Vec<DirectedIsometry> = (0..=bound)
            .map(|j| make_rotation_rad(&axis, gens.generators()[i].angle.times(j)))
            .collect();
        let mut cloud = OrbitCloud::new(gens.dim(), dedup_cell);
        for (a, word) in prev.points().iter().zip(prev.words()) {
            for (j, r) in powers.iter().enumerate() {
                let q = r.apply(a);
                if !cloud.contains(&q) {
                    let mut letters = word.letters().to_vec();
                    letters.push(Letter::new(i, j as i64));
                    cloud.insert(q, reduce(gens, &letters));
                }
            }
        }
        prev = cloud.clone();
        out.push(LadderStage {
            stage: b,
            points: cloud,
            axis_used: i,
            exp_bound: bound,
            k: ks[i],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Angle;
    use crate::words::{stationary_eval, GeneratorSet};
    use std::f64::consts::PI;

    fn golden_pair() -> GeneratorSet {
        let g = Angle::raw(PI * (5f64.sqrt() - 1.0) / 2.0).unwrap();
        GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), g), (Axis::point2(1.0, 0.0), g)]).unwrap()
    }

    #[test]
    fn zero_length_budget_gives_the_point() {
        let gens = golden_pair();
        let p = Vec3::new(0.5, 0.5, 0.0);
        for mode in [Mode::Stationary, Mode::Peripatetic] {
            let c = bfs_orbit(&gens, p, mode, SamplerBudget::new(0, 3, 100).unwrap()).unwrap();
            assert_eq!(c.points(), &[p]);
            assert!(!c.truncated());
        }
    }

    #[test]
    fn single_generator_circle() {
        let a = Angle::raw(1.0).unwrap();
        let gens = GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), a)]).unwrap();
        for k in [1, 4, 9] {
            let c = bfs_orbit(&gens, Vec3::new(2.0, 0.0, 0.0), Mode::Stationary, SamplerBudget::new(1, k, 1000).unwrap())
                .unwrap();
            assert_eq!(c.len() as i64, 2 * k + 1);
            assert!(c.points().iter().all(|q| (q.norm() - 2.0).abs() < 1e-12));
        }
    }

    #[test]
    fn truncation_sets_flag() {
        let gens = golden_pair();
        let c = bfs_orbit(&gens, Vec3::new(0.5, 0.5, 0.0), Mode::Peripatetic, SamplerBudget::new(4, 3, 50).unwrap())
            .unwrap();
        assert_eq!(c.len(), 50);
        assert!(c.truncated());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("stationary".parse::<Mode>().unwrap(), Mode::Stationary);
        assert_eq!("peripatetic".parse::<Mode>().unwrap(), Mode::Peripatetic);
        assert!(matches!("wandering".parse::<Mode>(), Err(OrbitError::InvalidMode(_))));
    }

    #[test]
    fn cloud_points_replay_from_words() {
        let gens = golden_pair();
        let p = Vec3::new(0.5, 0.5, 0.0);
        let c = bfs_orbit(&gens, p, Mode::Stationary, SamplerBudget::new(3, 2, 10_000).unwrap()).unwrap();
        for (q, w) in c.points().iter().zip(c.words()) {
            let r = stationary_eval(&gens, w).unwrap().apply(&p);
            assert!((r - q).norm() < 1e-12);
        }
    }

    #[test]
    fn dedup_keeps_first_arrival() {
        let mut c = OrbitCloud::new(Dim::Three, 1e-6);
        assert!(c.insert(Vec3::new(1.0, 2.0, 3.0), Word::empty()));
        assert!(!c.insert(Vec3::new(1.0 + 4e-7, 2.0 - 4e-7, 3.0), Word::empty()));
        assert!(c.insert(Vec3::new(1.0 + 2e-6, 2.0, 3.0), Word::empty()));
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn ladder_k_and_first_stage() {
        let gens = {
            let a = Angle::raw(PI / 2f64.sqrt()).unwrap();
            let b = Angle::raw(1.0).unwrap();
            GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), a), (Axis::point2(1.0, 0.0), b)]).unwrap()
        };
        assert_eq!(ladder_k(&gens, 0).unwrap(), 1);
        // rho = 1/π for one radian
        assert_eq!(ladder_k(&gens, 1).unwrap(), 3);
        let stages = ladder_orbit(&gens, Vec3::new(0.5, 0.5, 0.0), 2, Mode::Stationary).unwrap();
        assert_eq!(stages[0].points.len(), 3);
        assert_eq!(stages[1].exp_bound, 12);
    }

    #[test]
    fn ladder_rejects_bad_input() {
        let q = Angle::rational_pi(1, 2).unwrap();
        let g = Angle::raw(1.0).unwrap();
        let v = Vec3::new(0.3, 0.2, 0.0);
        let rational = GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), q), (Axis::point2(1.0, 0.0), g)]).unwrap();
        assert!(matches!(ladder_orbit(&rational, v, 1, Mode::Stationary), Err(OrbitError::RationalGenerator(0))));
        let one = GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), g)]).unwrap();
        assert!(matches!(ladder_orbit(&one, v, 1, Mode::Stationary), Err(OrbitError::NotTwoGenerators(1))));
        let gens = golden_pair();
        assert!(matches!(ladder_orbit(&gens, v, 1, Mode::Peripatetic), Err(OrbitError::LadderMode)));
        // a raw angle this close to π/3 classifies as rational first
        let third = Angle::raw(PI / 3.0 + 1e-14).unwrap();
        let near = GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), third), (Axis::point2(1.0, 0.0), g)]).unwrap();
        assert!(matches!(ladder_orbit(&near, v, 1, Mode::Stationary), Err(OrbitError::RationalGenerator(0))));
        // π/401 is outside the recognised denominators, but 1/rho = 401 exactly
        let fine = Angle::raw(PI / 401.0).unwrap();
        let ill = GeneratorSet::new(Dim::Two, vec![(Axis::point2(0.0, 0.0), fine), (Axis::point2(1.0, 0.0), g)]).unwrap();
        assert!(matches!(ladder_orbit(&ill, v, 1, Mode::Stationary), Err(OrbitError::IllConditioned { index: 0, .. })));
    }
}
