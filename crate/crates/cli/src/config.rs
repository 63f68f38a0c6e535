//! Experiment configuration files.
//!
//! Configs are TOML documents: flat `key = value` pairs grouped under section
//! headers. A complete example:
//!
//! ```toml
//! seed = 7
//!
//! [game]
//! matrix = [[1.0]]
//! # or: random = { dim = 3, det_guard = 1e-3, cond_guard = 10.0 }
//!
//! [scheme]
//! preset = "ogda"
//! # or: p = [1.0, 0.0], q = [2.0, -1.0]
//!
//! [eta]
//! value = 0.5
//! # or: values = [0.1, 0.2]
//! # or: sweep = { lo = 0.05, hi = 0.7, count = 66 }
//!
//! [sim]
//! steps = 400
//! init_x = [1.0]
//! init_y = [1.0]
//!
//! [boundary]
//! lo = 0.1
//! hi = 1.0
//! methods = ["analytic", "simulation"]
//!
//! [output]
//! dir = "out"
//! formats = ["csv", "svg"]
//! ```
//!
//! Errors carry the line and column of the offending value when the problem
//! is local to one table, and the dotted field path otherwise.

use std::path::{Path, PathBuf};

use hgda_core::rng::{random_game, RandomGameSpec, SplitMix64};
use hgda_core::{GameMatrix, HgdaScheme, JointState};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed for everything random in the experiment.
    pub seed: Option<u64>,
    pub game: GameSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub eta: EtaSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "RawGame")]
pub enum GameSection {
    Matrix(Vec<Vec<f64>>),
    Random(RandomSection),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    matrix: Option<Vec<Vec<f64>>>,
    random: Option<RandomSection>,
}

impl TryFrom<RawGame> for GameSection {
    type Error = String;

    fn try_from(raw: RawGame) -> Result<Self, String> {
        match (raw.matrix, raw.random) {
            (Some(m), None) => {
                let n = m.len();
                if n == 0 {
                    return Err("game.matrix must not be empty".into());
                }
                if let Some(i) = m.iter().position(|row| row.len() != n) {
                    return Err(format!(
                        "game.matrix must be square: row {} has {} entries, expected {n}",
                        i + 1,
                        m[i].len()
                    ));
                }
                Ok(GameSection::Matrix(m))
            }
            (None, Some(r)) => {
                if r.dim == 0 {
                    return Err("game.random.dim must be positive".into());
                }
                Ok(GameSection::Random(r))
            }
            (Some(_), Some(_)) => Err("game takes either `matrix` or `random`, not both".into()),
            (None, None) => Err("game needs `matrix` or `random`".into()),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSection {
    pub dim: usize,
    #[serde(default = "default_det_guard")]
    pub det_guard: f64,
    pub cond_guard: Option<f64>,
    /// Overrides the master seed for the matrix draw.
    pub seed: Option<u64>,
}

fn default_det_guard() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(try_from = "RawScheme")]
pub struct SchemeSection {
    pub preset: Option<Preset>,
    pub weights: Option<(Vec<f64>, Vec<f64>)>,
    /// Accept schemes whose limits are not certified as Nash equilibria.
    pub allow_uncertified: bool,
}

impl Default for SchemeSection {
    fn default() -> Self {
        Self { preset: Some(Preset::Ogda), weights: None, allow_uncertified: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Gda,
    Ogda,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    preset: Option<Preset>,
    k: Option<usize>,
    p: Option<Vec<f64>>,
    q: Option<Vec<f64>>,
    #[serde(default)]
    allow_uncertified: bool,
}

impl TryFrom<RawScheme> for SchemeSection {
    type Error = String;

    fn try_from(raw: RawScheme) -> Result<Self, String> {
        let allow_uncertified = raw.allow_uncertified;
        match (raw.preset, raw.p, raw.q) {
            (Some(preset), None, None) => {
                if raw.k.is_some() {
                    return Err("scheme.k only applies to explicit p/q weights".into());
                }
                Ok(Self { preset: Some(preset), weights: None, allow_uncertified })
            }
            (None, Some(p), Some(q)) => {
                if p.is_empty() || p.len() != q.len() {
                    return Err(format!(
                        "scheme.p and scheme.q must be non-empty and of equal length, got {} and {}",
                        p.len(),
                        q.len()
                    ));
                }
                if let Some(k) = raw.k {
                    if k != p.len() {
                        return Err(format!("scheme.k = {k} but {} weights were given", p.len()));
                    }
                }
                Ok(Self { preset: None, weights: Some((p, q)), allow_uncertified })
            }
            (Some(_), _, _) => Err("scheme takes either `preset` or `p`/`q`, not both".into()),
            (None, _, _) => Err("scheme needs `preset` or both `p` and `q`".into()),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(try_from = "RawEta")]
pub enum EtaSection {
    #[default]
    Unset,
    Value(f64),
    Values(Vec<f64>),
    Sweep(Sweep),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Sweep {
    /// `count` evenly spaced points from `lo` to `hi` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEta {
    value: Option<f64>,
    values: Option<Vec<f64>>,
    sweep: Option<Sweep>,
}

impl TryFrom<RawEta> for EtaSection {
    type Error = String;

    fn try_from(raw: RawEta) -> Result<Self, String> {
        let set = [raw.value.is_some(), raw.values.is_some(), raw.sweep.is_some()];
        if set.iter().filter(|&&b| b).count() > 1 {
            return Err("eta takes exactly one of `value`, `values`, `sweep`".into());
        }
        if let Some(v) = raw.value {
            if !v.is_finite() {
                return Err("eta.value must be finite".into());
            }
            return Ok(EtaSection::Value(v));
        }
        if let Some(vs) = raw.values {
            if vs.is_empty() || vs.iter().any(|v| !v.is_finite()) {
                return Err("eta.values must be a non-empty list of finite numbers".into());
            }
            return Ok(EtaSection::Values(vs));
        }
        if let Some(s) = raw.sweep {
            if !(s.lo.is_finite() && s.hi.is_finite() && s.lo < s.hi) {
                return Err(format!("eta.sweep needs lo < hi, got lo = {}, hi = {}", s.lo, s.hi));
            }
            if s.count < 2 {
                return Err(format!("eta.sweep needs count >= 2, got {}", s.count));
            }
            return Ok(EtaSection::Sweep(s));
        }
        Ok(EtaSection::Unset)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_true")]
    pub enabled: bool,
    #[serde(default = "default_steps")]
    pub steps: usize,
    pub init_x: Option<Vec<f64>>,
    pub init_y: Option<Vec<f64>>,
    /// Draw the initial state uniformly from `[-1, 1)` with this seed.
    pub init_seed: Option<u64>,
    #[serde(default = "default_guard")]
    pub guard: f64,
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            enabled: true,
            steps: default_steps(),
            init_x: None,
            init_y: None,
            init_seed: None,
            guard: default_guard(),
            tail_fraction: default_tail(),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_steps() -> usize {
    400
}

fn default_guard() -> f64 {
    1e12
}

fn default_tail() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMethod {
    Analytic,
    Simulation,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    #[serde(default = "default_methods")]
    pub methods: Vec<BoundaryMethod>,
    /// Horizon of each simulation in the simulation-based search.
    #[serde(default = "default_boundary_steps")]
    pub steps: usize,
    /// Bracket width at which bisection stops.
    pub width: Option<f64>,
}

impl Default for BoundarySection {
    fn default() -> Self {
        Self {
            lo: None,
            hi: None,
            methods: default_methods(),
            steps: default_boundary_steps(),
            width: None,
        }
    }
}

fn default_methods() -> Vec<BoundaryMethod> {
    vec![BoundaryMethod::Analytic]
}

fn default_boundary_steps() -> usize {
    20_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: default_dir(), formats: default_formats() }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

/// Parses `--format` values: `csv` or `csv+svg`.
pub fn parse_formats(s: &str) -> Result<Vec<Format>, CliError> {
    match s {
        "csv" => Ok(vec![Format::Csv]),
        "csv+svg" => Ok(vec![Format::Csv, Format::Svg]),
        other => Err(CliError::Config(format!("--format must be csv or csv+svg, got {other:?}"))),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The game matrix, drawing it when the config asks for a random one.
    pub fn build_game(&self) -> Result<GameMatrix, CliError> {
        match &self.game {
            GameSection::Matrix(rows) => Ok(GameMatrix::from_rows(rows)?),
            GameSection::Random(r) => {
                let seed = r.seed.or(self.seed).ok_or_else(|| {
                    CliError::Config(
                        "game.random: a seed is required (set `seed`, `game.random.seed` or --seed)"
                            .into(),
                    )
                })?;
                let mut rng = SplitMix64::new(seed);
                let spec = RandomGameSpec { dim: r.dim, det_guard: r.det_guard, cond_guard: r.cond_guard };
                Ok(random_game(&mut rng, &spec)?)
            }
        }
    }

    /// The scheme at learning rate `eta`.
    pub fn build_scheme(&self, eta: f64) -> Result<HgdaScheme, CliError> {
        match (&self.scheme.preset, &self.scheme.weights) {
            (Some(Preset::Gda), _) => Ok(HgdaScheme::gda(eta)),
            (Some(Preset::Ogda), _) => Ok(HgdaScheme::ogda(eta)),
            (None, Some((p, q))) => Ok(HgdaScheme::new(p.clone(), q.clone(), eta)?),
            (None, None) => unreachable!("scheme section is validated on load"),
        }
    }

    pub fn is_ogda(&self) -> bool {
        self.scheme.preset == Some(Preset::Ogda)
    }

    /// The single learning rate of `analyze` and `simulate`.
    pub fn single_eta(&self) -> Result<f64, CliError> {
        match &self.eta {
            EtaSection::Value(v) => Ok(*v),
            EtaSection::Unset => Err(CliError::Config("eta.value is required".into())),
            _ => Err(CliError::Config("eta: this command takes a single `value`".into())),
        }
    }

    /// Learning rates of a sweep, ascending.
    pub fn sweep_etas(&self) -> Result<Vec<f64>, CliError> {
        let mut etas = match &self.eta {
            EtaSection::Sweep(s) => s.points(),
            EtaSection::Values(v) => v.clone(),
            EtaSection::Value(v) => vec![*v],
            EtaSection::Unset => {
                return Err(CliError::Config("eta: sweep needs `sweep` or `values`".into()))
            }
        };
        etas.sort_by(f64::total_cmp);
        Ok(etas)
    }

    /// Initial joint state: explicit `init_x`/`init_y`, a seeded random draw,
    /// or all ones.
    pub fn initial_state(&self, n: usize) -> Result<JointState, CliError> {
        let sim = &self.sim;
        match (&sim.init_x, &sim.init_y, sim.init_seed) {
            (Some(x), Some(y), None) => {
                if x.len() != n || y.len() != n {
                    return Err(CliError::Config(format!(
                        "sim.init_x and sim.init_y need {n} entries each, got {} and {}",
                        x.len(),
                        y.len()
                    )));
                }
                Ok(JointState::new(x.clone(), y.clone()))
            }
            (None, None, Some(seed)) => {
                let mut rng = SplitMix64::new(seed);
                let x = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
                let y = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
                Ok(JointState::new(x, y))
            }
            (None, None, None) => Ok(JointState::new(vec![1.0; n], vec![1.0; n])),
            _ => Err(CliError::Config(
                "sim: give both init_x and init_y, or init_seed, but not both".into(),
            )),
        }
    }

    pub fn validate_sim(&self) -> Result<(), CliError> {
        let s = &self.sim;
        if !(s.guard > 0.0) {
            return Err(CliError::Config(format!("sim.guard must be positive, got {}", s.guard)));
        }
        if !(s.tail_fraction > 0.0 && s.tail_fraction <= 1.0) {
            return Err(CliError::Config(format!(
                "sim.tail_fraction must lie in (0, 1], got {}",
                s.tail_fraction
            )));
        }
        if s.steps == 0 {
            return Err(CliError::Config("sim.steps must be positive".into()));
        }
        Ok(())
    }
}
