//! Benchmark harness: JSON run configurations, scenario x policy matrices,
//! and CSV emission.
//!
//! Everything written is deterministic in the config: floats go out at 17
//! significant digits, runs are aggregated in config order regardless of
//! parallel completion order, and the only platform-dependent output field
//! is the `wall_ms` column of `summary.csv`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::csvfmt;
use crate::error::{Error, Result};
use crate::geometry::FeasibleSet;
use crate::learner;
use crate::losses::{sample_rotated_loss, Generator, LossSequence, QuadraticLoss};
use crate::regret::RegretReport;
use crate::steppers::{PolicyKind, Safeguard, StepPolicy};

const DEFAULT_CHECKPOINTS: [usize; 3] = [100, 1_000, 10_000];

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_offset() -> f64 {
    0.0
}

fn default_decay() -> f64 {
    1.0
}

fn default_alpha0() -> f64 {
    0.1
}

fn default_period() -> usize {
    10
}

fn default_alpha_min() -> f64 {
    1e-6
}

fn default_alpha_max() -> f64 {
    1e3
}

fn default_fallback() -> f64 {
    0.1
}

fn default_x0() -> InitialPoint {
    InitialPoint::Keyword("zero".into())
}

/// An explicit quadratic loss in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    pub curvature: Vec<Vec<f64>>,
    pub center: Vec<f64>,
    #[serde(default = "default_offset")]
    pub offset: f64,
}

impl LossConfig {
    pub fn build(&self) -> Result<QuadraticLoss> {
        let n = self.center.len();
        if self.curvature.len() != n || self.curvature.iter().any(|row| row.len() != n) {
            return Err(Error::validation(format!(
                "loss curvature must be a {n}x{n} matrix matching the center"
            )));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| self.curvature[i][j]);
        QuadraticLoss::new(matrix, DVector::from_vec(self.center.clone()), self.offset)
            .map_err(|e| Error::validation(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryScenario {
    pub loss: LossConfig,
}

/// A stationary scenario whose single loss is drawn once from the seeded
/// random-rotation recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryRandomScenario {
    pub dim: usize,
    pub eig_range: [f64; 2],
    pub center_range: [f64; 2],
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftingScenario {
    pub base: LossConfig,
    pub drift: Vec<f64>,
    #[serde(default = "default_decay")]
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationScenario {
    pub dim: usize,
    pub eig_range: [f64; 2],
    pub center_range: [f64; 2],
}

/// Loss-sequence generator selection. Serialized with a `kind` tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioConfig {
    Stationary(StationaryScenario),
    StationaryRandom(StationaryRandomScenario),
    DriftingCenter(DriftingScenario),
    RandomRotation(RotationScenario),
}

// Hand-rolled so unknown keys inside the tagged object are still rejected
// with the offending key named (deny_unknown_fields does not compose with
// internally tagged enums).
impl<'de> Deserialize<'de> for ScenarioConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let mut value = serde_json::Value::deserialize(deserializer)?;
        let map = value
            .as_object_mut()
            .ok_or_else(|| DeError::custom("scenario must be an object"))?;
        let kind = map
            .remove("kind")
            .and_then(|v| v.as_str().map(str::to_owned))
            .ok_or_else(|| DeError::custom("scenario needs a string `kind` field"))?;
        let rest = serde_json::Value::Object(map.clone());
        let parsed = match kind.as_str() {
            "stationary" => serde_json::from_value(rest).map(ScenarioConfig::Stationary),
            "stationary_random" => {
                serde_json::from_value(rest).map(ScenarioConfig::StationaryRandom)
            }
            "drifting_center" => serde_json::from_value(rest).map(ScenarioConfig::DriftingCenter),
            "random_rotation" => serde_json::from_value(rest).map(ScenarioConfig::RandomRotation),
            other => {
                return Err(DeError::custom(format!(
                    "unknown scenario kind `{other}`, expected one of \
                     stationary, stationary_random, drifting_center, random_rotation"
                )))
            }
        };
        parsed.map_err(|e| DeError::custom(format!("scenario: {e}")))
    }
}

impl ScenarioConfig {
    pub fn dim(&self) -> usize {
        match self {
            ScenarioConfig::Stationary(s) => s.loss.center.len(),
            ScenarioConfig::StationaryRandom(s) => s.dim,
            ScenarioConfig::DriftingCenter(s) => s.base.center.len(),
            ScenarioConfig::RandomRotation(s) => s.dim,
        }
    }

    pub fn build(&self, horizon: usize, seed: u64) -> Result<LossSequence> {
        let generator = match self {
            ScenarioConfig::Stationary(s) => Generator::Stationary {
                loss: s.loss.build()?,
            },
            ScenarioConfig::StationaryRandom(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
                let loss = sample_rotated_loss(
                    s.dim,
                    (s.eig_range[0], s.eig_range[1]),
                    (s.center_range[0], s.center_range[1]),
                    &mut rng,
                )
                .map_err(|e| Error::validation(format!("scenario: {e}")))?;
                Generator::Stationary { loss }
            }
            ScenarioConfig::DriftingCenter(s) => Generator::DriftingCenter {
                base: s.base.build()?,
                drift: DVector::from_vec(s.drift.clone()),
                decay: s.decay,
            },
            ScenarioConfig::RandomRotation(s) => Generator::RandomRotation {
                dim: s.dim,
                eig_range: (s.eig_range[0], s.eig_range[1]),
                center_range: (s.center_range[0], s.center_range[1]),
            },
        };
        LossSequence::new(generator, horizon, seed)
            .map_err(|e| Error::validation(format!("scenario: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallConfig {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Feasible-set selection. Serialized with a `type` tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SetConfig {
    Ball(BallConfig),
    Box(BoxConfig),
}

impl<'de> Deserialize<'de> for SetConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let mut value = serde_json::Value::deserialize(deserializer)?;
        let map = value
            .as_object_mut()
            .ok_or_else(|| DeError::custom("set must be an object"))?;
        let tag = map
            .remove("type")
            .and_then(|v| v.as_str().map(str::to_owned))
            .ok_or_else(|| DeError::custom("set needs a string `type` field"))?;
        let rest = serde_json::Value::Object(map.clone());
        let parsed = match tag.as_str() {
            "ball" => serde_json::from_value(rest).map(SetConfig::Ball),
            "box" => serde_json::from_value(rest).map(SetConfig::Box),
            other => {
                return Err(DeError::custom(format!(
                    "unknown set type `{other}`, expected ball or box"
                )))
            }
        };
        parsed.map_err(|e| DeError::custom(format!("set: {e}")))
    }
}

impl SetConfig {
    pub fn build(&self) -> Result<FeasibleSet> {
        match self {
            SetConfig::Ball(b) => FeasibleSet::ball(DVector::from_vec(b.center.clone()), b.radius),
            SetConfig::Box(b) => FeasibleSet::box_set(
                DVector::from_vec(b.lower.clone()),
                DVector::from_vec(b.upper.clone()),
            ),
        }
        .map_err(|e| Error::validation(format!("set: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    Bb1,
    Bb2,
    AltBb,
    Constant,
    Diminishing,
}

impl PolicyName {
    fn as_str(&self) -> &'static str {
        match self {
            PolicyName::Bb1 => "bb1",
            PolicyName::Bb2 => "bb2",
            PolicyName::AltBb => "alt_bb",
            PolicyName::Constant => "constant",
            PolicyName::Diminishing => "diminishing",
        }
    }
}

/// One step policy in the matrix; omitted fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub policy: PolicyName,
    /// Constant step for `constant`, scale for `diminishing`.
    #[serde(default = "default_alpha0")]
    pub alpha0: f64,
    #[serde(default = "default_period")]
    pub period: usize,
    #[serde(default = "default_alpha_min")]
    pub alpha_min: f64,
    #[serde(default = "default_alpha_max")]
    pub alpha_max: f64,
    #[serde(default = "default_fallback")]
    pub fallback: f64,
}

impl PolicyConfig {
    pub fn named(policy: PolicyName) -> Self {
        PolicyConfig {
            name: Some(policy.as_str().to_string()),
            policy,
            alpha0: default_alpha0(),
            period: default_period(),
            alpha_min: default_alpha_min(),
            alpha_max: default_alpha_max(),
            fallback: default_fallback(),
        }
    }

    pub fn effective_name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.policy.as_str())
    }

    pub fn build(&self) -> Result<StepPolicy> {
        let kind = match self.policy {
            PolicyName::Bb1 => PolicyKind::Bb1,
            PolicyName::Bb2 => PolicyKind::Bb2,
            PolicyName::AltBb => PolicyKind::AlternatingBb {
                period: self.period,
            },
            PolicyName::Constant => PolicyKind::Constant {
                alpha0: self.alpha0,
            },
            PolicyName::Diminishing => PolicyKind::Diminishing { scale: self.alpha0 },
        };
        let safeguard = Safeguard {
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            fallback: self.fallback,
        };
        StepPolicy::new(kind, safeguard).map_err(|e| Error::validation(e.to_string()))
    }
}

/// Starting point: an explicit vector, the keyword `"zero"`, or
/// `{"random": seed}` for a uniform draw from the feasible set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialPoint {
    Vector(Vec<f64>),
    Keyword(String),
    Random { random: u64 },
}

impl InitialPoint {
    pub fn build(&self, set: &FeasibleSet) -> Result<DVector<f64>> {
        match self {
            InitialPoint::Vector(v) => {
                if v.len() != set.dim() {
                    return Err(Error::validation(format!(
                        "x0: expected {} components, got {}",
                        set.dim(),
                        v.len()
                    )));
                }
                Ok(DVector::from_vec(v.clone()))
            }
            InitialPoint::Keyword(word) if word == "zero" => Ok(DVector::zeros(set.dim())),
            InitialPoint::Keyword(word) => Err(Error::validation(format!(
                "x0: unknown keyword `{word}`, expected \"zero\""
            ))),
            InitialPoint::Random { random } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*random);
                Ok(set.sample(&mut rng))
            }
        }
    }
}

/// A fully specified benchmark run: one scenario, one set, several policies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub set: SetConfig,
    pub policies: Vec<PolicyConfig>,
    #[serde(default = "default_x0")]
    pub x0: InitialPoint,
    pub horizon: usize,
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Fills remaining optional fields so the returned value is explicit.
    fn materialize(&mut self) {
        for policy in &mut self.policies {
            if policy.name.is_none() {
                policy.name = Some(policy.policy.as_str().to_string());
            }
        }
        if self.checkpoints.is_none() {
            let mut points: Vec<usize> = DEFAULT_CHECKPOINTS
                .iter()
                .copied()
                .filter(|&c| c <= self.horizon)
                .collect();
            if points.is_empty() {
                points.push(self.horizon);
            }
            self.checkpoints = Some(points);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::validation("horizon: must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::validation("policies: must list at least one policy"));
        }
        let set = self.set.build()?;
        let seq = self.scenario.build(self.horizon, self.seed)?;
        if set.dim() != seq.dim() {
            return Err(Error::validation(format!(
                "set: dimension {} does not match the scenario dimension {}",
                set.dim(),
                seq.dim()
            )));
        }
        self.x0.build(&set)?;
        let mut seen = std::collections::BTreeSet::new();
        for (i, policy) in self.policies.iter().enumerate() {
            let name = policy.effective_name();
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::validation(format!(
                    "policies[{i}].name: `{name}` must be nonempty and use only \
                     [A-Za-z0-9_-]"
                )));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::validation(format!(
                    "policies[{i}].name: duplicate policy name `{name}`"
                )));
            }
            policy
                .build()
                .map_err(|e| Error::validation(format!("policies[{i}]: {e}")))?;
        }
        if let Some(checkpoints) = &self.checkpoints {
            for (i, &c) in checkpoints.iter().enumerate() {
                if c == 0 || c > self.horizon {
                    return Err(Error::validation(format!(
                        "checkpoints[{i}]: round {c} outside 1..=horizon ({})",
                        self.horizon
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a JSON run configuration; the result has every
/// default materialized.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config: RunConfig =
        serde_json::from_str(text).map_err(|e| Error::validation(e.to_string()))?;
    config.materialize();
    config.validate()?;
    Ok(config)
}

/// One summary line per executed policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy: String,
    pub r_k: f64,
    pub avg_r_k: f64,
    pub slope: f64,
    pub zinkevich_bound: f64,
    pub psi: f64,
    pub zeta: f64,
    pub cond_t1: String,
    pub flag_p: bool,
    pub degenerate_rounds: usize,
    pub wall_ms: u128,
}

impl SummaryRow {
    pub const CSV_HEADER: &'static str = "policy,R_K,avg_R_K,slope,zinkevich_bound,psi,zeta,\
                                          cond_t1,flag_P,degenerate_rounds,wall_ms";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.policy,
            csvfmt::float17(self.r_k),
            csvfmt::float17(self.avg_r_k),
            csvfmt::float17(self.slope),
            csvfmt::float17(self.zinkevich_bound),
            csvfmt::float17(self.psi),
            csvfmt::float17(self.zeta),
            self.cond_t1,
            csvfmt::boolean(self.flag_p),
            self.degenerate_rounds,
            self.wall_ms
        )
    }
}

/// Regret curves for one policy, as consumed by the plot emitter.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub policy: String,
    pub regret: Vec<f64>,
    pub avg_regret: Vec<f64>,
}

/// Which rounds make it into the plot file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlotDecimation {
    /// Every `n`-th round.
    EveryNth(usize),
    /// `n` logarithmically spaced rounds between 1 and the horizon.
    LogSpaced(usize),
}

impl Default for PlotDecimation {
    fn default() -> Self {
        PlotDecimation::LogSpaced(100)
    }
}

impl PlotDecimation {
    fn rounds(&self, horizon: usize) -> Result<Vec<usize>> {
        match *self {
            PlotDecimation::EveryNth(n) => {
                if n == 0 {
                    return Err(Error::invalid("decimation stride must be at least 1"));
                }
                Ok((n..=horizon).step_by(n).collect())
            }
            PlotDecimation::LogSpaced(n) => {
                if n == 0 {
                    return Err(Error::invalid("decimation count must be at least 1"));
                }
                let mut ks: Vec<usize> = if n == 1 {
                    vec![horizon]
                } else {
                    (0..n)
                        .map(|i| {
                            let t = i as f64 / (n - 1) as f64;
                            (horizon as f64).powf(t).round() as usize
                        })
                        .collect()
                };
                ks.iter_mut().for_each(|k| *k = (*k).clamp(1, horizon));
                ks.dedup();
                Ok(ks)
            }
        }
    }
}

/// Writes the long-format plot CSV `policy,k,regret,avg_regret`.
pub fn emit_plot_data(
    series: &[PlotSeries],
    path: &Path,
    decimation: PlotDecimation,
) -> Result<()> {
    if series.is_empty() {
        return Err(Error::invalid("plot data needs at least one report"));
    }
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "policy,k,regret,avg_regret")?;
    for entry in series {
        for k in decimation.rounds(entry.regret.len())? {
            writeln!(
                out,
                "{},{},{},{}",
                entry.policy,
                k,
                csvfmt::float17(entry.regret[k - 1]),
                csvfmt::float17(entry.avg_regret[k - 1]),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

struct PolicyOutcome {
    row: SummaryRow,
    series: PlotSeries,
}

fn with_policy_context(name: &str, error: Error) -> Error {
    match error {
        Error::NumericalFailure { round, message } => Error::NumericalFailure {
            round,
            message: format!("policy `{name}`: {message}"),
        },
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("policy `{name}`: {m}")),
        other => other,
    }
}

fn execute_policy(
    config: &RunConfig,
    seq: &LossSequence,
    set: &FeasibleSet,
    x0: &DVector<f64>,
    policy_config: &PolicyConfig,
    out_dir: &Path,
) -> Result<PolicyOutcome> {
    let name = policy_config.effective_name().to_string();
    let started = Instant::now();
    let mut policy = policy_config.build()?;
    let traj = learner::run(seq, &mut policy, set, x0, config.horizon)
        .map_err(|e| with_policy_context(&name, e))?;
    let report =
        RegretReport::compute(&traj, seq, set).map_err(|e| with_policy_context(&name, e))?;
    let wall_ms = started.elapsed().as_millis();

    let mut traj_file = BufWriter::new(File::create(
        out_dir.join(format!("{name}_trajectory.csv")),
    )?);
    traj.write_csv(&mut traj_file)?;
    traj_file.flush()?;

    let mut regret_file = BufWriter::new(File::create(out_dir.join(format!("{name}_regret.csv")))?);
    report.write_csv(&mut regret_file)?;
    regret_file.flush()?;

    let row = SummaryRow {
        policy: name.clone(),
        r_k: report.final_regret(),
        avg_r_k: report.final_avg_regret(),
        slope: report.slope_value(),
        zinkevich_bound: report.zinkevich,
        psi: report.psi(),
        zeta: report.zeta(),
        cond_t1: report.condition_t1_label().to_string(),
        flag_p: report.flag_p(),
        degenerate_rounds: traj.degenerate_rounds(),
        wall_ms,
    };
    Ok(PolicyOutcome {
        row,
        series: PlotSeries {
            policy: name,
            regret: report.regret,
            avg_regret: report.avg_regret,
        },
    })
}

/// Executes every policy of the config against its scenario, writing
/// per-policy trajectory and regret CSVs plus `summary.csv`,
/// `checkpoints.csv`, `plot_data.csv`, and the materialized `config.json`
/// into the output directory. Summary rows come back in config order.
pub fn run_matrix(
    config: &RunConfig,
    out_override: Option<&Path>,
    jobs: usize,
) -> Result<Vec<SummaryRow>> {
    config.validate()?;
    let out_dir = out_override.unwrap_or(&config.output_dir).to_path_buf();
    fs::create_dir_all(&out_dir)?;
    fs::write(out_dir.join("config.json"), config.to_json())?;

    let set = self_checked(config.set.build())?;
    let seq = self_checked(config.scenario.build(config.horizon, config.seed))?;
    let x0 = self_checked(config.x0.build(&set))?;

    let tasks: Vec<&PolicyConfig> = config.policies.iter().collect();
    let results: Vec<Result<PolicyOutcome>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid(format!("could not build thread pool: {e}")))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|pc| execute_policy(config, &seq, &set, &x0, pc, &out_dir))
                .collect()
        })
    } else {
        tasks
            .iter()
            .map(|pc| execute_policy(config, &seq, &set, &x0, pc, &out_dir))
            .collect()
    };

    let mut rows = Vec::with_capacity(results.len());
    let mut series = Vec::with_capacity(results.len());
    for outcome in results {
        let outcome = outcome?;
        rows.push(outcome.row);
        series.push(outcome.series);
    }

    let mut summary = BufWriter::new(File::create(out_dir.join("summary.csv"))?);
    writeln!(summary, "{}", SummaryRow::CSV_HEADER)?;
    for row in &rows {
        writeln!(summary, "{}", row.csv_row())?;
    }
    summary.flush()?;

    let checkpoints = config.checkpoints.clone().unwrap_or_default();
    let mut snapshot = BufWriter::new(File::create(out_dir.join("checkpoints.csv"))?);
    writeln!(snapshot, "policy,k,regret,avg_regret")?;
    for entry in &series {
        for &k in &checkpoints {
            writeln!(
                snapshot,
                "{},{},{},{}",
                entry.policy,
                k,
                csvfmt::float17(entry.regret[k - 1]),
                csvfmt::float17(entry.avg_regret[k - 1]),
            )?;
        }
    }
    snapshot.flush()?;

    emit_plot_data(
        &series,
        &out_dir.join("plot_data.csv"),
        PlotDecimation::default(),
    )?;
    Ok(rows)
}

fn self_checked<T>(value: Result<T>) -> Result<T> {
    // validate() already ran; failures here indicate an internal inconsistency
    value.map_err(|e| Error::invalid(format!("config rebuild failed: {e}")))
}

/// Reads the regret curves of a completed run directory, in config order.
pub fn load_run_series(run_dir: &Path) -> Result<Vec<PlotSeries>> {
    let config_text = fs::read_to_string(run_dir.join("config.json"))?;
    let config = parse_config(&config_text)?;
    let mut series = Vec::new();
    for policy in &config.policies {
        let name = policy.effective_name();
        let text = fs::read_to_string(run_dir.join(format!("{name}_regret.csv")))?;
        let mut regret = Vec::new();
        let mut avg = Vec::new();
        for line in text.lines().skip(1) {
            if line.is_empty() {
                break;
            }
            let mut fields = line.split(',');
            let _k = fields.next();
            let r: f64 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::invalid(format!("malformed regret CSV for `{name}`")))?;
            let a: f64 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::invalid(format!("malformed regret CSV for `{name}`")))?;
            regret.push(r);
            avg.push(a);
        }
        if regret.is_empty() {
            return Err(Error::invalid(format!("no regret rows found for `{name}`")));
        }
        series.push(PlotSeries {
            policy: name.to_string(),
            regret,
            avg_regret: avg,
        });
    }
    Ok(series)
}

fn identity_loss_config(dim: usize, scale: f64) -> LossConfig {
    LossConfig {
        curvature: (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { scale } else { 0.0 }).collect())
            .collect(),
        center: vec![0.0; dim],
        offset: 0.0,
    }
}

/// The bundled benchmark scenarios. `configs/*.json` in the repository are
/// the serialized forms of these.
pub fn preset(name: &str) -> Option<RunConfig> {
    let policies = || {
        let mut list = vec![
            PolicyConfig::named(PolicyName::Bb1),
            PolicyConfig::named(PolicyName::Bb2),
            PolicyConfig::named(PolicyName::AltBb),
            PolicyConfig::named(PolicyName::Constant),
            PolicyConfig::named(PolicyName::Diminishing),
        ];
        // a unit-scale diminishing baseline is the more informative default
        list[4].alpha0 = 1.0;
        list
    };
    let ball10 = SetConfig::Ball(BallConfig {
        center: vec![0.0; 10],
        radius: 5.0,
    });
    let mut config = match name {
        "stationary-iso" => RunConfig {
            scenario: ScenarioConfig::Stationary(StationaryScenario {
                loss: identity_loss_config(10, 2.0),
            }),
            set: ball10,
            policies: policies(),
            x0: InitialPoint::Random { random: 2024 },
            horizon: 10_000,
            seed: 42,
            checkpoints: None,
            output_dir: PathBuf::from("out/stationary-iso"),
        },
        "stationary-aniso" => RunConfig {
            scenario: ScenarioConfig::StationaryRandom(StationaryRandomScenario {
                dim: 10,
                eig_range: [1.0, 10.0],
                center_range: [-1.0, 1.0],
                seed: 7,
            }),
            set: ball10,
            policies: policies(),
            x0: InitialPoint::Random { random: 2024 },
            horizon: 10_000,
            seed: 42,
            checkpoints: None,
            output_dir: PathBuf::from("out/stationary-aniso"),
        },
        "drifting" => {
            let mut drift = vec![0.0; 10];
            drift[0] = 0.01;
            RunConfig {
                scenario: ScenarioConfig::DriftingCenter(DriftingScenario {
                    base: identity_loss_config(10, 2.0),
                    drift,
                    decay: 1.0,
                }),
                set: ball10,
                policies: policies(),
                x0: InitialPoint::Random { random: 2024 },
                horizon: 10_000,
                seed: 42,
                checkpoints: None,
                output_dir: PathBuf::from("out/drifting"),
            }
        }
        _ => return None,
    };
    config.materialize();
    Some(config)
}
