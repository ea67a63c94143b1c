use crate::geometry::{Dim, Vec3};

use super::spatial::{min_pairwise_distance, SpatialHash};
use super::{OrbitCloud, OrbitError, CONFINEMENT_TOL};

/// A disc (d = 2) or ball (d = 3) used as a probe region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec3, radius: f64) -> Result<Self, OrbitError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(OrbitError::InvalidProbe(radius));
        }
        Ok(Ball { center, radius })
    }

    fn contains(&self, p: &Vec3) -> bool {
        (p - self.center).norm() <= self.radius
    }
}

/// Centres of the `n^d` cells tiling the bounding square/cube of `ball`,
/// keeping only those inside the ball. Returns (cell index, centre) pairs.
fn cell_centres(dim: Dim, ball: &Ball, n: usize) -> Vec<([usize; 3], Vec3)> {
    let side = 2.0 * ball.radius / n as f64;
    let origin = ball.center - Vec3::repeat(ball.radius);
    let nz = if dim == Dim::Three { n } else { 1 };
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..nz {
                let z = if dim == Dim::Three { origin.z + (k as f64 + 0.5) * side } else { ball.center.z };
                let c = Vec3::new(origin.x + (i as f64 + 0.5) * side, origin.y + (j as f64 + 0.5) * side, z);
                if ball.contains(&c) {
                    out.push(([i, j, k], c));
                }
            }
        }
    }
    out
}

/// Largest distance from a candidate centre inside the probe to the nearest
/// cloud point, over a `grid_res^d` lattice of candidates. This approximates
/// (from below) the radius of the largest empty ball centred in the probe.
pub fn mesh_estimate(cloud: &OrbitCloud, probe: &Ball, grid_res: usize) -> Result<f64, OrbitError> {
    if cloud.is_empty() {
        return Err(OrbitError::EmptyCloud);
    }
    if grid_res == 0 {
        return Err(OrbitError::InvalidGrid);
    }
    Ball::new(probe.center, probe.radius)?;
    let candidates = cell_centres(cloud.dim(), probe, grid_res);
    let cell = (2.0 * probe.radius / grid_res as f64).max(f64::MIN_POSITIVE);
    let hash = SpatialHash::build(cloud.dim(), cell, cloud.points());
    Ok(candidates
        .iter()
        .map(|(_, c)| hash.nearest(cloud.points(), c).map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max))
}

/// Fraction of the in-ball cells of an `n`-per-side grid over the ball's
/// bounding box that contain at least one cloud point.
pub fn coverage(cloud: &OrbitCloud, ball: &Ball, n: usize) -> f64 {
    if n == 0 || !(ball.radius > 0.0) {
        return 0.0;
    }
    let cells = cell_centres(cloud.dim(), ball, n);
    if cells.is_empty() {
        return 0.0;
    }
    let side = 2.0 * ball.radius / n as f64;
    let origin = ball.center - Vec3::repeat(ball.radius);
    let three = cloud.dim() == Dim::Three;
    let mut hit = std::collections::HashSet::new();
    for p in cloud.points() {
        let rel = (p - origin) / side;
        let idx = |x: f64| (x >= 0.0 && x < n as f64).then(|| x.floor() as usize);
        let k = if three { idx(rel.z) } else { Some(0) };
        if let (Some(i), Some(j), Some(k)) = (idx(rel.x), idx(rel.y), k) {
            hit.insert([i, j, k]);
        }
    }
    let covered = cells.iter().filter(|(key, _)| hit.contains(key)).count();
    covered as f64 / cells.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub mesh_estimate: f64,
    pub coverage_fraction: f64,
    pub probe_region: Ball,
    pub grid_res: usize,
    pub coverage_cells: usize,
}

pub fn density_report(
    cloud: &OrbitCloud,
    probe: &Ball,
    grid_res: usize,
    coverage_cells: usize,
) -> Result<DensityReport, OrbitError> {
    Ok(DensityReport {
        mesh_estimate: mesh_estimate(cloud, probe, grid_res)?,
        coverage_fraction: coverage(cloud, probe, coverage_cells),
        probe_region: *probe,
        grid_res,
        coverage_cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfinementReport {
    pub max_abs_deviation: f64,
    pub pass: bool,
}

/// `max |‖Q − v‖ − r0|` over the cloud; passes at 1e-9.
pub fn sphere_confinement_check(cloud: &OrbitCloud, v: &Vec3, r0: f64) -> ConfinementReport {
    let max_abs_deviation = cloud
        .points()
        .iter()
        .map(|q| ((q - v).norm() - r0).abs())
        .fold(0.0, f64::max);
    ConfinementReport {
        max_abs_deviation,
        pass: max_abs_deviation < CONFINEMENT_TOL,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretenessReport {
    pub distinct: usize,
    /// `f64::INFINITY` for a single point.
    pub min_distance: f64,
}

pub fn discreteness_report(cloud: &OrbitCloud) -> Result<DiscretenessReport, OrbitError> {
    if cloud.is_empty() {
        return Err(OrbitError::EmptyCloud);
    }
    Ok(DiscretenessReport {
        distinct: cloud.len(),
        min_distance: min_pairwise_distance(cloud.dim(), cloud.points()).unwrap_or(f64::INFINITY),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud2(points: &[(f64, f64)]) -> OrbitCloud {
        OrbitCloud::from_points(Dim::Two, 1e-9, points.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)))
    }

    #[test]
    fn mesh_of_single_centre_point_approaches_radius() {
        let c = cloud2(&[(0.0, 0.0)]);
        let probe = Ball::new(Vec3::zeros(), 2.0).unwrap();
        for res in [10, 40, 160] {
            let m = mesh_estimate(&c, &probe, res).unwrap();
            let diag = 2.0 * 2.0 / res as f64 * 2f64.sqrt();
            assert!(m <= 2.0 && m >= 2.0 - diag, "res {res}: {m}");
        }
    }

    #[test]
    fn mesh_of_regular_grid_is_bounded_by_half_diagonal() {
        // closed form: every location is within h·√2/2 of the nearest lattice point
        let h = 0.1;
        let pts: Vec<(f64, f64)> = (-15..=15)
            .flat_map(|i| (-15..=15).map(move |j| (i as f64 * h, j as f64 * h)))
            .collect();
        let c = cloud2(&pts);
        let probe = Ball::new(Vec3::zeros(), 1.0).unwrap();
        let m = mesh_estimate(&c, &probe, 64).unwrap();
        assert!(m <= h * 2f64.sqrt() / 2.0 + 1e-12, "{m}");
        assert!(m > 0.0);
    }

    #[test]
    fn empty_cloud_errors() {
        let c = OrbitCloud::new(Dim::Two, 1e-6);
        let probe = Ball::new(Vec3::zeros(), 1.0).unwrap();
        assert_eq!(mesh_estimate(&c, &probe, 4), Err(OrbitError::EmptyCloud));
        assert_eq!(coverage(&c, &probe, 10), 0.0);
        assert!(discreteness_report(&c).is_err());
        assert!(Ball::new(Vec3::zeros(), 0.0).is_err());
    }

    #[test]
    fn coverage_of_all_cell_centres_is_one() {
        let probe = Ball::new(Vec3::new(0.5, -0.25, 0.0), 1.0).unwrap();
        let centres: Vec<Vec3> = cell_centres(Dim::Two, &probe, 20).into_iter().map(|(_, c)| c).collect();
        let c = OrbitCloud::from_points(Dim::Two, 1e-9, centres);
        assert_eq!(coverage(&c, &probe, 20), 1.0);
        let half = OrbitCloud::from_points(Dim::Two, 1e-9, c.points().iter().step_by(2).copied());
        let f = coverage(&half, &probe, 20);
        assert!(f > 0.45 && f < 0.55, "{f}");
    }

    #[test]
    fn coverage_in_three_dimensions() {
        let probe = Ball::new(Vec3::zeros(), 1.0).unwrap();
        let centres: Vec<Vec3> = cell_centres(Dim::Three, &probe, 6).into_iter().map(|(_, c)| c).collect();
        let c = OrbitCloud::from_points(Dim::Three, 1e-9, centres);
        assert_eq!(coverage(&c, &probe, 6), 1.0);
        let one = OrbitCloud::from_points(Dim::Three, 1e-9, [Vec3::new(0.1, 0.1, 0.1)]);
        assert!(coverage(&one, &probe, 6) > 0.0);
    }

    #[test]
    fn confinement_and_discreteness_basics() {
        let p = Vec3::new(1.0, 2.0, 2.0);
        let c = OrbitCloud::from_points(Dim::Three, 1e-9, [p]);
        let r = sphere_confinement_check(&c, &Vec3::zeros(), 3.0);
        assert_eq!(r.max_abs_deviation, 0.0);
        assert!(r.pass);
        let d = discreteness_report(&c).unwrap();
        assert_eq!((d.distinct, d.min_distance), (1, f64::INFINITY));
        let two = OrbitCloud::from_points(Dim::Three, 1e-9, [p, p + Vec3::new(0.0, 0.3, 0.4)]);
        let d = discreteness_report(&two).unwrap();
        assert_eq!(d.distinct, 2);
        assert!((d.min_distance - 0.5).abs() < 1e-15);
    }
}
