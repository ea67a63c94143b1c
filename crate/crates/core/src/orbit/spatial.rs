//! Uniform-grid spatial hash for deduplication and nearest-neighbour queries.

use std::collections::HashMap;

use crate::geometry::{Dim, Vec3};

pub type CellKey = [i64; 3];

#[derive(Debug, Clone)]
pub struct SpatialHash {
    dim: Dim,
    cell: f64,
    map: HashMap<CellKey, Vec<u32>>,
    lo: CellKey,
    hi: CellKey,
    count: usize,
}

impl SpatialHash {
    pub fn new(dim: Dim, cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "cell size must be positive");
        SpatialHash {
            dim,
            cell,
            map: HashMap::new(),
            lo: [i64::MAX; 3],
            hi: [i64::MIN; 3],
            count: 0,
        }
    }

    pub fn build(dim: Dim, cell: f64, points: &[Vec3]) -> Self {
        let mut h = SpatialHash::new(dim, cell);
        for (i, p) in points.iter().enumerate() {
            h.insert(i as u32, p);
        }
        h
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn key(&self, p: &Vec3) -> CellKey {
        let k = |x: f64| (x / self.cell).floor() as i64;
        match self.dim {
            Dim::Two => [k(p.x), k(p.y), 0],
            Dim::Three => [k(p.x), k(p.y), k(p.z)],
        }
    }

    pub fn insert(&mut self, index: u32, p: &Vec3) {
        let key = self.key(p);
        for a in 0..3 {
            self.lo[a] = self.lo[a].min(key[a]);
            self.hi[a] = self.hi[a].max(key[a]);
        }
        self.map.entry(key).or_default().push(index);
        self.count += 1;
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn z_span(&self) -> i64 {
        match self.dim {
            Dim::Two => 0,
            Dim::Three => 1,
        }
    }

    /// Calls `visit` with every stored index in the 3^d block around `key`.
    pub fn for_each_adjacent(&self, key: CellKey, mut visit: impl FnMut(u32)) {
        let dz = self.z_span();
        for x in -1..=1 {
            for y in -1..=1 {
                for z in -dz..=dz {
                    if let Some(ids) = self.map.get(&[key[0] + x, key[1] + y, key[2] + z]) {
                        ids.iter().copied().for_each(&mut visit);
                    }
                }
            }
        }
    }

    /// Nearest stored point to `q` (ties broken by lower index), or `None`
    /// when empty. `points` must be the slice the indices refer to.
    pub fn nearest(&self, points: &[Vec3], q: &Vec3) -> Option<(usize, f64)> {
        self.nearest_where(points, q, |_| true)
    }

    /// Nearest stored point among those whose index passes `keep`.
    pub fn nearest_where(&self, points: &[Vec3], q: &Vec3, keep: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        if self.count == 0 {
            return None;
        }
        let centre = self.key(q);
        let dims = self.dim.get() as u32;
        // rings needed before every occupied cell has been seen
        let max_ring = (0..dims as usize)
            .map(|a| (centre[a] - self.lo[a]).abs().max((self.hi[a] - centre[a]).abs()))
            .max()
            .unwrap_or(0);
        let mut best: Option<(usize, f64)> = None;
        let consider = |i: u32, best: &mut Option<(usize, f64)>| {
            if !keep(i as usize) {
                return;
            }
            let d = (points[i as usize] - q).norm();
            let better = match *best {
                None => true,
                Some((bi, bd)) => d < bd || (d == bd && (i as usize) < bi),
            };
            if better {
                *best = Some((i as usize, d));
            }
        };
        for ring in 0..=max_ring {
            let side = (2 * ring + 1) as u64;
            if side.saturating_pow(dims) > 4 * self.count as u64 + 64 {
                return linear_nearest(points, q, &keep);
            }
            self.for_each_in_ring(centre, ring, |i| consider(i, &mut best));
            if let Some((_, d)) = best {
                if d <= ring as f64 * self.cell {
                    break;
                }
            }
        }
        best
    }

    fn for_each_in_ring(&self, centre: CellKey, ring: i64, mut visit: impl FnMut(u32)) {
        let dz = if self.dim == Dim::Two { 0 } else { ring };
        for x in -ring..=ring {
            for y in -ring..=ring {
                for z in -dz..=dz {
                    if x.abs().max(y.abs()).max(z.abs()) != ring {
                        continue;
                    }
                    if let Some(ids) = self.map.get(&[centre[0] + x, centre[1] + y, centre[2] + z]) {
                        ids.iter().copied().for_each(&mut visit);
                    }
                }
            }
        }
    }
}

fn linear_nearest(points: &[Vec3], q: &Vec3, keep: &impl Fn(usize) -> bool) -> Option<(usize, f64)> {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| keep(*i))
        .map(|(i, p)| (i, (p - q).norm()))
        .fold(None, |acc, (i, d)| match acc {
            Some((_, bd)) if bd <= d => acc,
            _ => Some((i, d)),
        })
}

/// Smallest distance between two distinct entries of `points`, `None` for
/// fewer than two points.
pub fn min_pairwise_distance(dim: Dim, points: &[Vec3]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let (lo, hi) = bounds(points);
    let extent = (hi - lo).amax().max(f64::MIN_POSITIVE);
    let d = dim.get() as f64;
    let mut cell = (extent / (points.len() as f64).powf(1.0 / d)).max(extent * 1e-9);
    loop {
        let hash = SpatialHash::build(dim, cell, points);
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            hash.for_each_adjacent(hash.key(p), |j| {
                if (j as usize) > i {
                    best = best.min((points[j as usize] - p).norm());
                }
            });
        }
        // any pair closer than `cell` shares a neighbourhood block
        if best <= cell || cell > extent * 2.0 {
            return Some(best);
        }
        cell *= 2.0;
    }
}

pub(crate) fn bounds(points: &[Vec3]) -> (Vec3, Vec3) {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_nearest(points: &[Vec3], q: &Vec3) -> f64 {
        points.iter().map(|p| (p - q).norm()).fold(f64::INFINITY, f64::min)
    }

    fn brute_min_pair(points: &[Vec3]) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                best = best.min((points[i] - points[j]).norm());
            }
        }
        best
    }

    fn scatter(n: usize, seed: u64, dim: Dim) -> Vec<Vec3> {
        // simple LCG so the test needs no extra dependencies
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) * 4.0 - 2.0
        };
        (0..n)
            .map(|_| {
                let (x, y, z) = (next(), next(), next());
                Vec3::new(x, y, if dim == Dim::Three { z } else { 0.0 })
            })
            .collect()
    }

    #[test]
    fn nearest_matches_brute_force() {
        for dim in [Dim::Two, Dim::Three] {
            let pts = scatter(500, 9, dim);
            for cell in [0.01, 0.1, 1.0, 10.0] {
                let h = SpatialHash::build(dim, cell, &pts);
                for q in scatter(50, 77, dim).iter().map(|q| q * 3.0) {
                    let (_, d) = h.nearest(&pts, &q).unwrap();
                    assert!((d - brute_nearest(&pts, &q)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn min_pair_matches_brute_force() {
        for dim in [Dim::Two, Dim::Three] {
            let pts = scatter(400, 5, dim);
            let got = min_pairwise_distance(dim, &pts).unwrap();
            assert!((got - brute_min_pair(&pts)).abs() < 1e-15);
        }
        let two = [Vec3::zeros(), Vec3::new(3.0, 4.0, 0.0)];
        assert_eq!(min_pairwise_distance(Dim::Two, &two), Some(5.0));
        assert_eq!(min_pairwise_distance(Dim::Two, &two[..1]), None);
    }

    #[test]
    fn empty_hash_has_no_nearest() {
        let h = SpatialHash::new(Dim::Two, 1.0);
        assert!(h.is_empty());
        assert_eq!(h.nearest(&[], &Vec3::zeros()), None);
    }
}
