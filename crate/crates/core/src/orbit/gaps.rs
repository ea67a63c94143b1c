//! Gap statistics of the points `{j x mod 1 : 0 ≤ j < n}` on the unit circle.
//!
//! Rational-tagged angles are handled exactly on residues modulo `2q`. Every
//! other angle is converted once to a 64-bit fixed-point turn fraction, after
//! which `j x mod 1` is an exact wrapping multiplication, so gap lengths
//! compare exactly and sum to one turn exactly.

use std::f64::consts::PI;

use crate::geometry::{Angle, AngleKind};

use super::OrbitError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapLength {
    /// Fraction of a full turn.
    pub length: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub n: usize,
    /// Number of distinct points among the `n` samples.
    pub distinct_points: usize,
    /// Distinct gap lengths, ascending, with multiplicities.
    pub gaps: Vec<GapLength>,
    pub max_gap: f64,
    pub min_gap: f64,
}

impl GapReport {
    pub fn distinct_gaps(&self) -> usize {
        self.gaps.len()
    }

    pub fn total(&self) -> f64 {
        self.gaps.iter().map(|g| g.length * g.count as f64).sum()
    }
}

/// Circular gaps of sorted, deduplicated positions on a circle of
/// circumference `modulus`.
fn circular_gaps(mut pos: Vec<u128>, modulus: u128) -> Vec<u128> {
    pos.sort_unstable();
    pos.dedup();
    let mut gaps: Vec<u128> = pos.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(pos[0] + modulus - pos[pos.len() - 1]);
    gaps
}

fn summarize(n: usize, distinct_points: usize, mut gaps: Vec<u128>, modulus: u128) -> GapReport {
    gaps.sort_unstable();
    let mut grouped: Vec<(u128, usize)> = Vec::new();
    for g in gaps {
        match grouped.last_mut() {
            Some((v, c)) if *v == g => *c += 1,
            _ => grouped.push((g, 1)),
        }
    }
    let to_turns = |g: u128| g as f64 / modulus as f64;
    GapReport {
        n,
        distinct_points,
        max_gap: to_turns(grouped.last().map_or(0, |g| g.0)),
        min_gap: to_turns(grouped.first().map_or(0, |g| g.0)),
        gaps: grouped
            .into_iter()
            .map(|(g, count)| GapLength { length: to_turns(g), count })
            .collect(),
    }
}

/// Gap statistics for `x = Rad(rho) / 2π`, the rotation measured in turns.
pub fn circle_gap_stats(rho: &Angle, n: usize) -> Result<GapReport, OrbitError> {
    if n == 0 {
        return Err(OrbitError::InvalidSampleCount);
    }
    match rho.kind() {
        AngleKind::RationalPi(r) => {
            // x = p / 2q turns
            let modulus = 2 * r.denom().unsigned_abs() as u128;
            let step = (*r.numer() as i128).rem_euclid(modulus as i128) as u128;
            let pos: Vec<u128> = (0..n as u128).map(|j| (j * step) % modulus).collect();
            let gaps = circular_gaps(pos, modulus);
            let distinct = gaps.len();
            Ok(summarize(n, distinct, gaps, modulus))
        }
        _ => Ok(circle_gap_stats_turns(rho.radians() / (2.0 * PI), n)),
    }
}

/// Gap statistics for a rotation by `x` turns (taken modulo 1).
pub fn circle_gap_stats_turns(x: f64, n: usize) -> GapReport {
    let n = n.max(1);
    let frac = x.rem_euclid(1.0);
    let step = (frac * 18_446_744_073_709_551_616.0) as u64;
    let modulus = 1u128 << 64;
    let pos: Vec<u128> = (0..n as u64).map(|j| j.wrapping_mul(step) as u128).collect();
    let gaps = circular_gaps(pos, modulus);
    let distinct = gaps.len();
    summarize(n, distinct, gaps, modulus)
}
