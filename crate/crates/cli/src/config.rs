//! Experiment configuration files.
//!
//! Configs are TOML documents. Every table rejects unknown keys, and every
//! value is checked before an experiment starts. See `examples/configs/` in
//! the repository for one file per experiment kind.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use rotorb::geometry::Line3;
use rotorb::orbit::{Ball, Mode, SamplerBudget, DEFAULT_DEDUP_CELL};
use rotorb::tetra::{regular_tetrahedron, Tetrahedron, TumbleStep};
use rotorb::{Angle, Axis, Dim, GeneratorSet, Vec3};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Orbit,
    Density,
    Ladder,
    Gaps,
    Tumble,
    Hexagon,
    Conform,
    Classify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::Density => "density",
            ExperimentKind::Ladder => "ladder",
            ExperimentKind::Gaps => "gaps",
            ExperimentKind::Tumble => "tumble",
            ExperimentKind::Hexagon => "hexagon",
            ExperimentKind::Conform => "conform",
            ExperimentKind::Classify => "classify",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup_cell: Option<f64>,
    #[serde(default, rename = "generator", skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confinement: Option<ConfinementConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps: Option<GapsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tumble: Option<TumbleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hexagon: Option<HexagonConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conform: Option<ConformConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyConfig>,
}

/// A planar centre (`center`) or a spatial line (`base` + `dir`), plus an
/// angle tag such as `pi 1/2`, `acos 1/3 +` or `rad 0.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<Vec<f64>>,
    pub angle: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub max_len: usize,
    pub max_exp: i64,
    pub max_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default = "default_grid_res")]
    pub grid_res: usize,
    #[serde(default = "default_coverage_cells")]
    pub coverage_cells: usize,
}

fn default_grid_res() -> usize {
    64
}

fn default_coverage_cells() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfinementConfig {
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub stages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(u64),
    Many(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapsConfig {
    /// Rotation as an angle tag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<String>,
    /// Rotation in turns, used when no angle is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub n: OneOrMany,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TumbleConfig {
    pub edge_length: f64,
    pub steps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HexagonConfig {
    #[serde(default = "default_hex_edge")]
    pub edge_length: f64,
    #[serde(default)]
    pub word: String,
}

fn default_hex_edge() -> f64 {
    6f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformConfig {
    pub first: LineConfig,
    pub second: LineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub angle: String,
}

fn err(key: impl Into<String>, message: impl fmt::Display) -> CliError {
    CliError::Config { key: key.into(), message: message.to_string() }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            // unknown/missing field messages quote the key; otherwise take it
            // from the line the error points at
            let quoted = e.message().split('`').nth(1).map(str::to_string);
            let spanned = e.span().and_then(|s| {
                let start = text[..s.start].rfind('\n').map_or(0, |i| i + 1);
                let line = text[start..].lines().next()?;
                let (k, _) = line.split_once('=')?;
                Some(k.trim().to_string())
            });
            let key = quoted.or(spanned).unwrap_or_else(|| "<document>".into());
            err(key, e.message())
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| err("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// A fully checked experiment, ready to run.
#[derive(Debug, Clone)]
pub enum Plan {
    Orbit(OrbitPlan),
    Density(OrbitPlan, DensityPlan),
    Ladder { gens: GeneratorSet, point: Vec3, stages: usize, dedup_cell: f64, probe: Option<DensityPlan> },
    Gaps { rotation: GapRotation, ns: Vec<usize> },
    Tumble { tetra: Tetrahedron, point: Vec3, steps: Vec<TumbleStep> },
    Hexagon { tetra: Tetrahedron, point: Vec3, word: String, budget: SamplerBudget },
    Conform { first: Line3, second: Line3 },
    Classify { angle: Angle },
}

#[derive(Debug, Clone)]
pub struct OrbitPlan {
    pub gens: GeneratorSet,
    pub point: Vec3,
    pub mode: Mode,
    pub budget: SamplerBudget,
    pub dedup_cell: f64,
    pub confinement: Option<Vec3>,
}

#[derive(Debug, Clone, Copy)]
pub struct DensityPlan {
    pub ball: Ball,
    pub grid_res: usize,
    pub coverage_cells: usize,
}

#[derive(Debug, Clone, Copy)]
pub enum GapRotation {
    Angle(Angle),
    Turns(f64),
}

fn vector(key: &str, v: &[f64], dim: Dim) -> Result<Vec3, CliError> {
    if v.len() != dim.get() {
        return Err(err(key, format!("expected {} coordinates, found {}", dim.get(), v.len())));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(err(key, format!("coordinate {x} is not finite")));
    }
    Ok(Vec3::new(v[0], v[1], v.get(2).copied().unwrap_or(0.0)))
}

fn angle(key: &str, tag: &str) -> Result<Angle, CliError> {
    Angle::from_str(tag).map_err(|e| err(key, e))
}

fn required<'a, T>(key: &str, v: &'a Option<T>) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| err(key, "missing"))
}

fn line(key: &str, l: &LineConfig) -> Result<Line3, CliError> {
    let base = vector(&format!("{key}.base"), &l.base, Dim::Three)?;
    let dir = vector(&format!("{key}.dir"), &l.dir, Dim::Three)?;
    if dir.norm() == 0.0 {
        return Err(err(format!("{key}.dir"), "direction is zero"));
    }
    Line3::new(base, dir.normalize()).map_err(|e| err(format!("{key}.dir"), e))
}

impl ExperimentConfig {
    fn dim(&self) -> Result<Dim, CliError> {
        let d = *required("dim", &self.dim)?;
        Dim::from_usize(d).ok_or_else(|| err("dim", format!("must be 2 or 3, got {d}")))
    }

    fn dedup_cell(&self) -> Result<f64, CliError> {
        let c = self.dedup_cell.unwrap_or(DEFAULT_DEDUP_CELL);
        if !(c > 0.0 && c.is_finite()) {
            return Err(err("dedup_cell", format!("must be positive, got {c}")));
        }
        Ok(c)
    }

    fn generator_set(&self, dim: Dim) -> Result<GeneratorSet, CliError> {
        if self.generators.is_empty() {
            return Err(err("generator", "at least one [[generator]] is required"));
        }
        let mut specs = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let key = format!("generator[{}]", i + 1);
            let axis = match dim {
                Dim::Two => {
                    if g.base.is_some() || g.dir.is_some() {
                        return Err(err(format!("{key}.base"), "planar generators take `center` only"));
                    }
                    let c = vector(&format!("{key}.center"), required(&format!("{key}.center"), &g.center)?, dim)?;
                    Axis::point2(c.x, c.y)
                }
                Dim::Three => {
                    if g.center.is_some() {
                        return Err(err(format!("{key}.center"), "spatial generators take `base` and `dir`"));
                    }
                    let l = LineConfig {
                        base: required(&format!("{key}.base"), &g.base)?.clone(),
                        dir: required(&format!("{key}.dir"), &g.dir)?.clone(),
                    };
                    Axis::Line3(line(&key, &l)?)
                }
            };
            specs.push((axis, angle(&format!("{key}.angle"), &g.angle)?));
        }
        GeneratorSet::new(dim, specs).map_err(|e| err("generator", e))
    }

    fn budget(&self) -> Result<SamplerBudget, CliError> {
        let b = required("budget", &self.budget)?;
        SamplerBudget::new(b.max_len, b.max_exp, b.max_points).map_err(|e| err("budget", e))
    }

    fn mode(&self) -> Result<Mode, CliError> {
        required("mode", &self.mode)?.parse().map_err(|e| err("mode", e))
    }

    fn density(&self, dim: Dim) -> Result<DensityPlan, CliError> {
        let p = required("probe", &self.probe)?;
        let centre = vector("probe.center", &p.center, dim)?;
        let ball = Ball::new(centre, p.radius).map_err(|e| err("probe.radius", e))?;
        if p.grid_res == 0 {
            return Err(err("probe.grid_res", "must be positive"));
        }
        if p.coverage_cells == 0 {
            return Err(err("probe.coverage_cells", "must be positive"));
        }
        Ok(DensityPlan { ball, grid_res: p.grid_res, coverage_cells: p.coverage_cells })
    }

    fn orbit_plan(&self) -> Result<OrbitPlan, CliError> {
        let dim = self.dim()?;
        let confinement = match &self.confinement {
            None => None,
            Some(_) if dim == Dim::Two => return Err(err("confinement", "sphere confinement needs dim = 3")),
            Some(c) => Some(vector("confinement.center", &c.center, dim)?),
        };
        Ok(OrbitPlan {
            gens: self.generator_set(dim)?,
            point: vector("point", required("point", &self.point)?, dim)?,
            mode: self.mode()?,
            budget: self.budget()?,
            dedup_cell: self.dedup_cell()?,
            confinement,
        })
    }

    fn tetra(&self, key: &str, edge: f64) -> Result<(Tetrahedron, Vec3), CliError> {
        let t = regular_tetrahedron(edge).map_err(|e| err(format!("{key}.edge_length"), e))?;
        let point = match &self.point {
            Some(p) => vector("point", p, Dim::Three)?,
            None => t.barycenter(),
        };
        Ok((t, point))
    }

    /// Checks the sections that `kind` uses; the `experiment` field, if
    /// present, must agree with `kind`.
    pub fn plan(&self, kind: ExperimentKind) -> Result<Plan, CliError> {
        if let Some(k) = self.experiment {
            if k != kind {
                return Err(err("experiment", format!("config is for `{k}` but `{kind}` was requested")));
            }
        }
        Ok(match kind {
            ExperimentKind::Orbit => Plan::Orbit(self.orbit_plan()?),
            ExperimentKind::Density => {
                let o = self.orbit_plan()?;
                let d = self.density(o.gens.dim())?;
                Plan::Density(o, d)
            }
            ExperimentKind::Ladder => {
                let dim = self.dim()?;
                if let Some(m) = &self.mode {
                    if m.parse::<Mode>().map_err(|e| err("mode", e))? != Mode::Stationary {
                        return Err(err("mode", "the ladder is stationary only"));
                    }
                }
                let stages = required("ladder", &self.ladder)?.stages;
                if stages == 0 {
                    return Err(err("ladder.stages", "must be positive"));
                }
                Plan::Ladder {
                    gens: self.generator_set(dim)?,
                    point: vector("point", required("point", &self.point)?, dim)?,
                    stages,
                    dedup_cell: self.dedup_cell()?,
                    probe: self.probe.as_ref().map(|_| self.density(dim)).transpose()?,
                }
            }
            ExperimentKind::Gaps => {
                let g = required("gaps", &self.gaps)?;
                let rotation = match (&g.angle, g.x) {
                    (Some(a), None) => GapRotation::Angle(angle("gaps.angle", a)?),
                    (None, Some(x)) if x.is_finite() => GapRotation::Turns(x),
                    (None, Some(x)) => return Err(err("gaps.x", format!("{x} is not finite"))),
                    (Some(_), Some(_)) => return Err(err("gaps.x", "give either `angle` or `x`, not both")),
                    (None, None) => return Err(err("gaps.angle", "missing (or give `x` in turns)")),
                };
                let ns = match &g.n {
                    OneOrMany::One(n) => vec![*n],
                    OneOrMany::Many(v) => v.clone(),
                };
                if ns.is_empty() || ns.contains(&0) {
                    return Err(err("gaps.n", "sample counts must be positive"));
                }
                Plan::Gaps { rotation, ns: ns.into_iter().map(|n| n as usize).collect() }
            }
            ExperimentKind::Tumble => {
                let c = required("tumble", &self.tumble)?;
                let (tetra, point) = self.tetra("tumble", c.edge_length)?;
                let steps = c
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.parse().map_err(|e| err(format!("tumble.steps[{}]", i + 1), e)))
                    .collect::<Result<_, _>>()?;
                Plan::Tumble { tetra, point, steps }
            }
            ExperimentKind::Hexagon => {
                let c = required("hexagon", &self.hexagon)?;
                let (tetra, point) = self.tetra("hexagon", c.edge_length)?;
                Plan::Hexagon { tetra, point, word: c.word.clone(), budget: self.budget()? }
            }
            ExperimentKind::Conform => {
                let c = required("conform", &self.conform)?;
                Plan::Conform { first: line("conform.first", &c.first)?, second: line("conform.second", &c.second)? }
            }
            ExperimentKind::Classify => {
                let c = required("classify", &self.classify)?;
                Plan::Classify { angle: angle("classify.angle", &c.angle)? }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key_of(e: CliError) -> String {
        match e {
            CliError::Config { key, .. } => key,
            other => panic!("{other:?}"),
        }
    }

    const ORBIT: &str = r#"
dim = 2
point = [0.5, 0.5]
mode = "stationary"

[[generator]]
center = [0.0, 0.0]
angle = "pi 1/2"

[[generator]]
center = [1.0, 0.0]
angle = "rad 1.2"

[budget]
max_len = 2
max_exp = 3
max_points = 100
"#;

    #[test]
    fn parses_a_planar_orbit() {
        let c = ExperimentConfig::from_toml(ORBIT).unwrap();
        match c.plan(ExperimentKind::Orbit).unwrap() {
            Plan::Orbit(o) => {
                assert_eq!(o.gens.len(), 2);
                assert_eq!(o.budget.max_exp, 3);
                assert_eq!(o.dedup_cell, DEFAULT_DEDUP_CELL);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = ExperimentConfig::from_toml(&format!("{ORBIT}\nbogus = 1\n")).unwrap_err();
        assert_eq!(key_of(e), "bogus");
        let e = ExperimentConfig::from_toml(&ORBIT.replace("max_points", "max_pts")).unwrap_err();
        assert_eq!(key_of(e), "max_pts");
    }

    #[test]
    fn bad_values_are_named() {
        let cases = [
            (ORBIT.replace("pi 1/2", "pi one"), "generator[1].angle"),
            (ORBIT.replace("[0.5, 0.5]", "[0.5]"), "point"),
            (ORBIT.replace("\"stationary\"", "\"sideways\""), "mode"),
            (ORBIT.replace("max_exp = 3", "max_exp = 0"), "budget"),
            (ORBIT.replace("center = [1.0, 0.0]", "center = [0.0, 0.0]"), "generator"),
            (ORBIT.replace("dim = 2", "dim = 4"), "dim"),
        ];
        for (text, key) in cases {
            let c = ExperimentConfig::from_toml(&text).unwrap();
            assert_eq!(key_of(c.plan(ExperimentKind::Orbit).unwrap_err()), key);
        }
        let c = ExperimentConfig::from_toml(ORBIT).unwrap();
        assert_eq!(key_of(c.plan(ExperimentKind::Density).unwrap_err()), "probe");
    }

    #[test]
    fn experiment_field_must_match() {
        let c = ExperimentConfig::from_toml(&format!("experiment = \"gaps\"\n{ORBIT}")).unwrap();
        assert_eq!(key_of(c.plan(ExperimentKind::Orbit).unwrap_err()), "experiment");
    }

    #[test]
    fn gaps_and_classify_sections() {
        let c = ExperimentConfig::from_toml("[gaps]\nx = 0.25\nn = [4, 8]\n").unwrap();
        assert!(matches!(c.plan(ExperimentKind::Gaps).unwrap(), Plan::Gaps { ref ns, .. } if ns == &[4, 8]));
        let c = ExperimentConfig::from_toml("[gaps]\nangle = \"pi 1/2\"\nx = 0.25\nn = 4\n").unwrap();
        assert_eq!(key_of(c.plan(ExperimentKind::Gaps).unwrap_err()), "gaps.x");
        let c = ExperimentConfig::from_toml("[classify]\nangle = \"acos 1/3 +\"\n").unwrap();
        assert!(matches!(c.plan(ExperimentKind::Classify).unwrap(), Plan::Classify { .. }));
    }

    #[test]
    fn tumble_steps_are_checked() {
        let c = ExperimentConfig::from_toml("[tumble]\nedge_length = 1.0\nsteps = [\"AB+\", \"XY\"]\n").unwrap();
        assert_eq!(key_of(c.plan(ExperimentKind::Tumble).unwrap_err()), "tumble.steps[2]");
    }
}
