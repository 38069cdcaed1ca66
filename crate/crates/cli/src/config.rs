//! Run configuration: a JSON document naming the model, the command and its
//! settings. Unknown keys are rejected; omitted sections take defaults, and
//! the resolved document is echoed into the manifest.

use serde::{Deserialize, Serialize};
use vacq::dist::DistParts;
use vacq::solve::{SeriesForm, SolveConfig};
use vacq::{DistSpec, QueueModel};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Solve,
    Lst,
    Tail,
    Stability,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Solve => "solve",
            Command::Lst => "lst",
            Command::Tail => "tail",
            Command::Stability => "stability",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub arrival: DistParts,
    pub service: DistParts,
    pub patience: DistParts,
    pub vacation: DistParts,
}

impl ModelConfig {
    pub fn build(&self) -> Result<QueueModel, CliError> {
        let law = |field: &str, p: &DistParts| {
            DistSpec::from_parts(&p.family, &p.params)
                .map_err(|e| CliError::Validation(format!("model.{field}.{}", strip_kind(&e))))
        };
        QueueModel::new(
            law("arrival", &self.arrival)?,
            law("service", &self.service)?,
            law("patience", &self.patience)?,
            law("vacation", &self.vacation)?,
        )
        .map_err(|e| CliError::Validation(format!("model: {}", strip_kind(&e))))
    }
}

fn strip_kind(e: &vacq::Error) -> String {
    match e {
        vacq::Error::InvalidParameter(m) => m.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    /// Total customers, burn-in included.
    pub n_customers: usize,
    pub burn_in: Option<usize>,
    pub w0: f64,
    /// Uniform ECDF grid on `[0, x_max]`; a pilot run picks it when absent.
    pub x_max: Option<f64>,
    pub grid_points: usize,
    pub n_batches: usize,
    pub skip_stability_gate: bool,
    /// Per-customer records of the first `path_len` steps (0 for none).
    pub path_len: usize,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            n_customers: 1_000_000,
            burn_in: None,
            w0: 0.0,
            x_max: None,
            grid_points: 257,
            n_batches: 32,
            skip_stability_gate: false,
            path_len: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesSection {
    pub form: SeriesForm,
    pub thetas: Vec<f64>,
}

impl Default for SeriesSection {
    fn default() -> Self {
        Self {
            form: SeriesForm::default(),
            thetas: vec![0.1, 0.5, 1.0, 2.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilitySection {
    pub n_paths: usize,
    pub horizon: usize,
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self {
            n_paths: 1000,
            horizon: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailSection {
    pub n_customers: usize,
    /// Integrated-tail quantile levels spanned by the grid.
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for TailSection {
    fn default() -> Self {
        Self {
            n_customers: 20_000_000,
            lo: 0.9,
            hi: 1.0 - 1e-4,
            points: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    /// Customers compared between the recursion and the event simulation.
    pub n_customers: usize,
    /// Customers behind the Monte Carlo side of the solver comparison.
    pub n_monte_carlo: usize,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            n_customers: 10_000,
            n_monte_carlo: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    pub model: ModelConfig,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub solve: SolveConfig,
    #[serde(default)]
    pub series: SeriesSection,
    #[serde(default)]
    pub stability: StabilitySection,
    #[serde(default)]
    pub tail: TailSection,
    #[serde(default)]
    pub validate: ValidateSection,
}

impl RunConfig {
    /// Checks invariants that the section types cannot express.
    pub fn validate(&self) -> Result<QueueModel, CliError> {
        let model = self.model.build()?;
        let fail = |m: &str| Err(CliError::Validation(m.to_string()));
        let s = &self.simulate;
        if s.n_customers == 0 {
            return fail("simulate.n_customers > 0");
        }
        if s.burn_in.is_some_and(|b| b >= s.n_customers) {
            return fail("simulate.burn_in < simulate.n_customers");
        }
        if s.x_max.is_some_and(|x| !(x > 0.0 && x.is_finite())) {
            return fail("simulate.x_max > 0");
        }
        if s.grid_points < 2 {
            return fail("simulate.grid_points >= 2");
        }
        if !(s.w0 >= 0.0 && s.w0.is_finite()) {
            return fail("simulate.w0 >= 0");
        }
        if s.n_batches < 2 {
            return fail("simulate.n_batches >= 2");
        }
        if self.solve.n_grid < 64 {
            return fail("solve.n_grid >= 64");
        }
        if self.series.thetas.iter().any(|t| t.is_nan() || *t < 0.0) {
            return fail("series.thetas >= 0");
        }
        if self.stability.n_paths < 100 {
            return fail("stability.n_paths >= 100");
        }
        let t = &self.tail;
        if !(0.0 < t.lo && t.lo < t.hi && t.hi < 1.0) {
            return fail("0 < tail.lo < tail.hi < 1");
        }
        if t.points < 16 {
            return fail("tail.points >= 16");
        }
        Ok(model)
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<(RunConfig, QueueModel), CliError> {
    let cfg: RunConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let model = cfg.validate()?;
    Ok((cfg, model))
}
