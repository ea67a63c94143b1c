//! Config-driven experiment runner behind the `rotorb` binary.

pub mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use rotorb::export::{self, Format};
use rotorb::geometry::{
    classify_angle, conform_rationally, line_relation, LineRelation, ALGEBRAIC_TOL, COSINE_MAX_DENOMINATOR,
    GEOMETRIC_TOL, RAW_MAX_DENOMINATOR, RENORMALIZE_EVERY,
};
use rotorb::orbit::{
    bfs_orbit_with, circle_gap_stats, circle_gap_stats_turns, density_report, discreteness_report, ladder_k,
    ladder_orbit_with, mesh_estimate, sphere_confinement_check, GapReport, Mode, OrbitCloud, CONFINEMENT_TOL,
    DEFAULT_DEDUP_CELL, LADDER_MAX_POINTS,
};
use rotorb::tetra::{edge_rotations, hexagon_report, tumble, HEX_HISTOGRAM_TOL, HEX_SLAB_TOL};
use rotorb::words::{peripatetic_eval, stationary_eval};
use rotorb::{Angle, Dim, GeneratorSet, Vec3, Word};

pub use config::{ExperimentConfig, ExperimentKind, Plan};
use config::{DensityPlan, GapRotation, OrbitPlan};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest allowed gap between a stored orbit point and its recomputation.
pub const AUDIT_TOL: f64 = 1e-8;
/// Share of orbit points re-evaluated from their words.
pub const AUDIT_FRACTION: f64 = 0.01;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub geometric: f64,
    pub algebraic: f64,
    pub cosine_max_denominator: i64,
    pub raw_max_denominator: i64,
    pub renormalize_every: u32,
    pub dedup_cell: f64,
    pub confinement: f64,
    pub audit: f64,
    pub audit_fraction: f64,
    pub hex_slab: f64,
    pub hex_histogram: f64,
    pub ladder_max_points: usize,
    pub export_significant_digits: u32,
}

impl Tolerances {
    fn with_dedup(dedup_cell: f64) -> Self {
        Tolerances {
            geometric: GEOMETRIC_TOL,
            algebraic: ALGEBRAIC_TOL,
            cosine_max_denominator: COSINE_MAX_DENOMINATOR,
            raw_max_denominator: RAW_MAX_DENOMINATOR,
            renormalize_every: RENORMALIZE_EVERY,
            dedup_cell,
            confinement: CONFINEMENT_TOL,
            audit: AUDIT_TOL,
            audit_fraction: AUDIT_FRACTION,
            hex_slab: HEX_SLAB_TOL,
            hex_histogram: HEX_HISTOGRAM_TOL,
            ladder_max_points: LADDER_MAX_POINTS,
            export_significant_digits: 9,
        }
    }
}

/// Everything written to `report.json`, plus the elapsed time, which stays
/// out of the file so that reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub tolerances: Tolerances,
    pub metrics: Value,
    pub artifacts: Vec<String>,
    #[serde(skip)]
    pub wall_clock: Duration,
}

fn coords(v: &Vec3, dim: Dim) -> Vec<f64> {
    v.iter().take(dim.get()).copied().collect()
}

fn class_json(a: &Angle) -> Value {
    let c = classify_angle(a);
    json!({ "verdict": c.label(), "order": c.order() })
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn points(&mut self, dim: Dim, points: &[Vec3], word_len: &[usize]) -> Result<(), CliError> {
        for (name, format) in [("cloud.csv", Format::Csv), ("cloud.ply", Format::Ply)] {
            export::export_points(dim, points, word_len, format, &self.dir.join(name)).map_err(runtime)?;
            self.files.push(name.to_string());
        }
        Ok(())
    }

    fn cloud(&mut self, cloud: &OrbitCloud) -> Result<(), CliError> {
        self.points(cloud.dim(), cloud.points(), cloud.word_len())
    }
}

fn audit(gens: &GeneratorSet, cloud: &OrbitCloud, p: Vec3, mode: Mode, seed: u64) -> Result<Value, CliError> {
    let n = cloud.len();
    let k = ((n as f64 * AUDIT_FRACTION).ceil() as usize).clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = sample(&mut rng, n, k).into_vec();
    picks.sort_unstable();
    let mut worst: f64 = 0.0;
    for &i in &picks {
        let w = &cloud.words()[i];
        let f = match mode {
            Mode::Stationary => stationary_eval(gens, w).map_err(runtime)?,
            Mode::Peripatetic => peripatetic_eval(gens, w).map_err(runtime)?.total,
        };
        worst = worst.max((f.apply(&p) - cloud.points()[i]).norm());
    }
    Ok(json!({ "sampled": k, "max_deviation": worst, "pass": worst < AUDIT_TOL }))
}

fn orbit_metrics(o: &OrbitPlan, cloud: &OrbitCloud, seed: u64) -> Result<Value, CliError> {
    let dim = o.gens.dim();
    let disc = discreteness_report(cloud).map_err(runtime)?;
    let mut m = json!({
        "mode": o.mode.to_string(),
        "point": coords(&o.point, dim),
        "point_count": cloud.len(),
        "truncated": cloud.truncated(),
        "max_word_len": cloud.word_len().iter().max().copied().unwrap_or(0),
        "budget": { "max_len": o.budget.max_len, "max_exp": o.budget.max_exp, "max_points": o.budget.max_points },
        "generators": o.gens.generators().iter().map(|g| json!({
            "angle": g.angle.to_string(),
            "class": g.class.label(),
            "order": g.class.order(),
        })).collect::<Vec<_>>(),
        "discreteness": { "distinct": disc.distinct, "min_distance": disc.min_distance },
        "audit": audit(&o.gens, cloud, o.point, o.mode, seed)?,
    });
    if let Some(v) = o.confinement {
        let r0 = (o.point - v).norm();
        let c = sphere_confinement_check(cloud, &v, r0);
        m["confinement"] = json!({
            "center": coords(&v, dim),
            "radius": r0,
            "max_abs_deviation": c.max_abs_deviation,
            "pass": c.pass,
        });
    }
    Ok(m)
}

fn density_json(d: &DensityPlan, cloud: &OrbitCloud) -> Result<Value, CliError> {
    let r = density_report(cloud, &d.ball, d.grid_res, d.coverage_cells).map_err(runtime)?;
    Ok(json!({
        "mesh_estimate": r.mesh_estimate,
        "coverage_fraction": r.coverage_fraction,
        "probe": { "center": coords(&r.probe_region.center, cloud.dim()), "radius": r.probe_region.radius },
        "grid_res": r.grid_res,
        "coverage_cells": r.coverage_cells,
    }))
}

fn gaps_json(r: &GapReport) -> Value {
    json!({
        "n": r.n,
        "distinct_points": r.distinct_points,
        "distinct_gaps": r.distinct_gaps(),
        "max_gap": r.max_gap,
        "min_gap": r.min_gap,
        "total": r.total(),
        "gaps": r.gaps.iter().map(|g| json!({ "length": g.length, "count": g.count })).collect::<Vec<_>>(),
    })
}

fn execute(plan: &Plan, seed: u64, out: &mut Outputs) -> Result<(Value, f64), CliError> {
    Ok(match plan {
        Plan::Orbit(o) => {
            let cloud = bfs_orbit_with(&o.gens, o.point, o.mode, o.budget, o.dedup_cell).map_err(runtime)?;
            out.cloud(&cloud)?;
            (orbit_metrics(o, &cloud, seed)?, o.dedup_cell)
        }
        Plan::Density(o, d) => {
            let cloud = bfs_orbit_with(&o.gens, o.point, o.mode, o.budget, o.dedup_cell).map_err(runtime)?;
            out.cloud(&cloud)?;
            let mut m = orbit_metrics(o, &cloud, seed)?;
            m["density"] = density_json(d, &cloud)?;
            (m, o.dedup_cell)
        }
        Plan::Ladder { gens, point, stages, dedup_cell, probe } => {
            let ks = (0..gens.len().min(2))
                .map(|i| ladder_k(gens, i).map_err(runtime))
                .collect::<Result<Vec<_>, _>>()?;
            let ladder = ladder_orbit_with(gens, *point, *stages, Mode::Stationary, *dedup_cell).map_err(runtime)?;
            let mut rows = Vec::new();
            let mut nested = true;
            for (b, s) in ladder.iter().enumerate() {
                if b > 0 {
                    nested &= ladder[b - 1].points.points().iter().all(|q| s.points.contains(q));
                }
                let mut row = json!({
                    "stage": s.stage,
                    "generator": s.axis_used + 1,
                    "k": s.k,
                    "exp_bound": s.exp_bound,
                    "point_count": s.points.len(),
                });
                if let Some(d) = probe {
                    row["mesh_estimate"] = json!(mesh_estimate(&s.points, &d.ball, d.grid_res).map_err(runtime)?);
                }
                rows.push(row);
            }
            out.cloud(&ladder.last().expect("at least one stage").points)?;
            let rho: Vec<f64> = gens.generators().iter().map(|g| g.angle.size() / std::f64::consts::PI).collect();
            (json!({ "k": ks, "rho": rho, "nested": nested, "stages": rows }), *dedup_cell)
        }
        Plan::Gaps { rotation, ns } => {
            let (label, reports) = match rotation {
                GapRotation::Angle(a) => (
                    a.to_string(),
                    ns.iter().map(|&n| circle_gap_stats(a, n).map_err(runtime)).collect::<Result<Vec<_>, _>>()?,
                ),
                GapRotation::Turns(x) => {
                    (format!("turns {x:?}"), ns.iter().map(|&n| circle_gap_stats_turns(*x, n)).collect())
                }
            };
            let runs: Vec<Value> = reports.iter().map(gaps_json).collect();
            (json!({ "rotation": label, "runs": runs }), DEFAULT_DEDUP_CELL)
        }
        Plan::Tumble { tetra, point, steps } => {
            let trace = tumble(tetra, *point, steps).map_err(runtime)?;
            let edge = tetra.edge_length().unwrap_or(f64::NAN);
            let drift = trace
                .states
                .iter()
                .flat_map(|s| {
                    (0..4).flat_map(move |i| (i + 1..4).map(move |j| ((s.vertices[i] - s.vertices[j]).norm() - edge).abs()))
                })
                .fold(0.0, f64::max);
            export::export_tumble(&trace, &out.dir.join("tumble.csv")).map_err(runtime)?;
            out.files.push("tumble.csv".into());
            let last = trace.last();
            (
                json!({
                    "steps": steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "edge_length": edge,
                    "max_edge_drift": drift,
                    "final_vertices": last.vertices.iter().map(|v| coords(v, Dim::Three)).collect::<Vec<_>>(),
                    "final_point": coords(&last.point, Dim::Three),
                    "frames": trace.states.len(),
                }),
                DEFAULT_DEDUP_CELL,
            )
        }
        Plan::Hexagon { tetra, point, word, budget } => {
            let gens = edge_rotations(tetra).map_err(runtime)?.generator_set().map_err(runtime)?;
            let f = Word::parse(&gens, word)
                .map_err(|e| CliError::Config { key: "hexagon.word".into(), message: e.to_string() })?;
            let r = hexagon_report(tetra, *point, &f, *budget).map_err(runtime)?;
            out.points(Dim::Three, &r.in_plane, &r.in_plane_word_len)?;
            let v3 = |v: &Vec3| coords(v, Dim::Three);
            (
                json!({
                    "word": f.to_string(),
                    "seeds": r.seeds.iter().map(v3).collect::<Vec<_>>(),
                    "seed_distances": r.seed_distances,
                    "plane": { "point": v3(&r.plane_point), "normal": v3(&r.plane_normal) },
                    "in_plane_count": r.in_plane.len(),
                    "nn_histogram": r.nn_histogram.iter().map(|(d, c)| json!({ "distance": d, "count": c })).collect::<Vec<_>>(),
                    "min_nn_distance": r.min_nn_distance,
                    "cloud_points": r.cloud_points,
                    "truncated": r.truncated,
                    "budget": { "max_len": r.budget.max_len, "max_exp": r.budget.max_exp, "max_points": r.budget.max_points },
                    "slab_tol": r.slab_tol,
                    "warnings": r.warnings,
                }),
                DEFAULT_DEDUP_CELL,
            )
        }
        Plan::Conform { first, second } => {
            let relation = match line_relation(first, second) {
                LineRelation::Parallel { coincident } => json!({ "kind": "parallel", "coincident": coincident }),
                LineRelation::Intersecting(p) => json!({ "kind": "intersecting", "point": coords(&p, Dim::Three) }),
                LineRelation::Skew => json!({ "kind": "skew" }),
            };
            let class = conform_rationally(first, second)
                .map_err(|e| CliError::Config { key: "conform.second.dir".into(), message: e.to_string() })?;
            let cos = first.dir().dot(&second.dir());
            (
                json!({ "relation": relation, "cosine": cos, "verdict": class.label(), "order": class.order() }),
                DEFAULT_DEDUP_CELL,
            )
        }
        Plan::Classify { angle } => {
            let mut m = class_json(angle);
            m["angle"] = json!(angle.to_string());
            m["radians"] = json!(angle.radians());
            (m, DEFAULT_DEDUP_CELL)
        }
    })
}

/// Validates `config` for `kind`, runs it, and writes every artifact plus
/// `report.json` into `out_dir`.
pub fn run(kind: ExperimentKind, config: &ExperimentConfig, out_dir: &Path) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let plan = config.plan(kind)?;
    if out_dir.as_os_str().is_empty() {
        return Err(CliError::Runtime("output path is empty".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| runtime(format!("{}: {e}", out_dir.display())))?;
    let mut out = Outputs { dir: out_dir.to_path_buf(), files: Vec::new() };
    let (metrics, dedup_cell) = execute(&plan, config.seed, &mut out)?;
    out.files.push("report.json".into());
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        experiment: kind,
        seed: config.seed,
        config: config.clone(),
        tolerances: Tolerances::with_dedup(dedup_cell),
        metrics,
        artifacts: out.files,
        wall_clock: Duration::ZERO,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(runtime)?;
    text.push('\n');
    fs::write(out_dir.join("report.json"), text).map_err(runtime)?;
    report.wall_clock = started.elapsed();
    Ok(report)
}
