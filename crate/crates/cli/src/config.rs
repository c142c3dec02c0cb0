//! Scenario configuration: the TOML schema, cross-field validation, and
//! conversion into `popdyn` domain objects.
//!
//! A scenario file declares `name`, `kind`, usually a `[model.*]` table, and
//! one settings table named after the kind (`[simulate]`, `[basin]`, …).
//! Unknown keys are rejected everywhere so typos surface as errors naming
//! the offending key instead of silently using defaults.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use popdyn::basin::{BasinConfig, PolyMapParams};
use popdyn::control::{AdjointMode, ControlModel, ControlProblem, ObjectiveRange, SweepConfig};
use popdyn::maps::{GeneralMapParams, PairParams, SingleParams};

use crate::CliError;

/// Which operation a scenario drives; must match the subcommand it is run
/// under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Simulate,
    Equilibria,
    Basin,
    Optimize,
    Table1,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Simulate => "simulate",
            Kind::Equilibria => "equilibria",
            Kind::Basin => "basin",
            Kind::Optimize => "optimize",
            Kind::Table1 => "table1",
        };
        f.write_str(s)
    }
}

/// Model selector: exactly one of the nested tables
/// `[model.single]`, `[model.pair]`, `[model.general]`, `[model.poly]`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpec {
    Single(SingleModelSpec),
    Pair(PairModelSpec),
    General(GeneralModelSpec),
    Poly(PolyModelSpec),
}

impl ModelSpec {
    /// State-space dimension of the model (1 or 2).
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::Single(_) | ModelSpec::Poly(_) => 1,
            ModelSpec::Pair(_) | ModelSpec::General(_) => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModelSpec::Single(_) => "single",
            ModelSpec::Pair(_) => "pair",
            ModelSpec::General(_) => "general",
            ModelSpec::Poly(_) => "poly",
        }
    }
}

/// Single-species map parameters; `h` is a constant per-step harvest
/// fraction and defaults to 0.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SingleModelSpec {
    pub r: f64,
    pub k: f64,
    #[serde(default)]
    pub h: f64,
}

impl SingleModelSpec {
    pub fn build(&self) -> Result<SingleParams, CliError> {
        SingleParams::with_harvest(self.r, self.k, self.h)
            .map_err(|e| CliError::invalid(format!("[model.single] {e}")))
    }
}

/// Prey–predator map parameters.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairModelSpec {
    pub r: f64,
    pub k: f64,
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

impl PairModelSpec {
    pub fn build(&self) -> Result<PairParams, CliError> {
        PairParams::new(self.r, self.k, self.a, self.c, self.d)
            .map_err(|e| CliError::invalid(format!("[model.pair] {e}")))
    }
}

/// Generalized prey–predator map parameters (exponents `b`, `m`, `n`).
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralModelSpec {
    pub r: f64,
    pub k: f64,
    pub b: f64,
    pub m: f64,
    pub n: f64,
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

impl GeneralModelSpec {
    pub fn build(&self) -> Result<GeneralMapParams, CliError> {
        GeneralMapParams::new(
            self.r, self.k, self.b, self.m, self.n, self.a, self.c, self.d,
        )
        .map_err(|e| CliError::invalid(format!("[model.general] {e}")))
    }
}

/// Scalar polynomial map parameter.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolyModelSpec {
    pub s: f64,
}

impl PolyModelSpec {
    pub fn build(&self) -> Result<PolyMapParams, CliError> {
        PolyMapParams::new(self.s).map_err(|e| CliError::invalid(format!("[model.poly] {e}")))
    }
}

/// Settings for `kind = "simulate"`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    pub x0: f64,
    /// Required for 2-D models, forbidden for 1-D models.
    pub y0: Option<f64>,
    pub horizon: usize,
}

/// Settings for `kind = "equilibria"` (none exist; the table itself is
/// optional and must be empty when present).
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriaSpec {}

/// Settings for `kind = "basin"`. `target`, `lo`, and `hi` must match the
/// model dimension; the sampling knobs default as in
/// [`popdyn::basin::BasinConfig::new`].
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BasinSpec {
    pub target: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub grid: Option<usize>,
    pub burn_in: Option<usize>,
    pub conv_tol: Option<f64>,
    pub escape_bound: Option<f64>,
    pub interior_margin: Option<f64>,
}

impl BasinSpec {
    fn coords<const N: usize>(key: &str, v: &[f64]) -> Result<[f64; N], CliError> {
        <[f64; N]>::try_from(v).map_err(|_| {
            CliError::invalid(format!(
                "[basin] {key} must have {N} entries for this model, got {}",
                v.len()
            ))
        })
    }

    /// Builds the scan configuration for an `N`-dimensional model.
    pub fn build<const N: usize>(&self) -> Result<(BasinConfig<N>, [f64; N]), CliError> {
        let lo = Self::coords("lo", &self.lo)?;
        let hi = Self::coords("hi", &self.hi)?;
        let target = Self::coords("target", &self.target)?;
        let mut cfg =
            BasinConfig::new(lo, hi).map_err(|e| CliError::invalid(format!("[basin] {e}")))?;
        if let Some(grid) = self.grid {
            cfg.grid = grid;
        }
        if let Some(burn_in) = self.burn_in {
            cfg.burn_in = burn_in;
        }
        if let Some(conv_tol) = self.conv_tol {
            cfg.conv_tol = conv_tol;
        }
        if let Some(escape_bound) = self.escape_bound {
            cfg.escape_bound = escape_bound;
        }
        if let Some(interior_margin) = self.interior_margin {
            cfg.interior_margin = interior_margin;
        }
        Ok((cfg, target))
    }
}

/// Adjoint recursion variant, as written in scenario files and on the
/// command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjointModeSpec {
    Consistent,
    PaperLiteral,
}

impl From<AdjointModeSpec> for AdjointMode {
    fn from(m: AdjointModeSpec) -> Self {
        match m {
            AdjointModeSpec::Consistent => AdjointMode::Consistent,
            AdjointModeSpec::PaperLiteral => AdjointMode::PaperLiteral,
        }
    }
}

/// Objective index-range convention, as written in scenario files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveRangeSpec {
    FromZero,
    FromOne,
}

impl From<ObjectiveRangeSpec> for ObjectiveRange {
    fn from(r: ObjectiveRangeSpec) -> Self {
        match r {
            ObjectiveRangeSpec::FromZero => ObjectiveRange::FromZero,
            ObjectiveRangeSpec::FromOne => ObjectiveRange::FromOne,
        }
    }
}

/// Sweep iteration overrides; unset fields keep
/// [`popdyn::control::SweepConfig`] defaults.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub relaxation: Option<f64>,
    pub conv_tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl SweepSpec {
    pub fn build(&self) -> SweepConfig {
        let mut cfg = SweepConfig::default();
        if let Some(relaxation) = self.relaxation {
            cfg.relaxation = relaxation;
        }
        if let Some(conv_tol) = self.conv_tol {
            cfg.conv_tol = conv_tol;
        }
        if let Some(max_iters) = self.max_iters {
            cfg.max_iters = max_iters;
        }
        cfg
    }
}

/// Settings for `kind = "optimize"`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSpec {
    pub x0: f64,
    /// Required for pair models, forbidden for single-species models.
    pub y0: Option<f64>,
    /// Number of harvest periods (the trajectory has `horizon + 1` points).
    pub horizon: usize,
    pub revenue_weight: f64,
    pub effort_weight: f64,
    pub h_max: f64,
    pub adjoint_mode: Option<AdjointModeSpec>,
    pub objective_range: Option<ObjectiveRangeSpec>,
    #[serde(default)]
    pub sweep: SweepSpec,
}

impl OptimizeSpec {
    /// Builds the control problem for `model`; `adjoint_override` (from the
    /// command line) wins over the scenario's own `adjoint_mode`.
    pub fn build(
        &self,
        model: &ModelSpec,
        adjoint_override: Option<AdjointMode>,
    ) -> Result<ControlProblem, CliError> {
        let control_model = match model {
            ModelSpec::Single(m) => {
                if self.y0.is_some() {
                    return Err(CliError::invalid(
                        "[optimize] y0 is not accepted for a single-species model",
                    ));
                }
                ControlModel::Single {
                    params: m.build()?,
                    x0: self.x0,
                }
            }
            ModelSpec::Pair(m) => ControlModel::Pair {
                params: m.build()?,
                x0: self.x0,
                y0: self.y0.ok_or_else(|| {
                    CliError::invalid("[optimize] y0 is required for a pair model")
                })?,
            },
            other => {
                return Err(CliError::invalid(format!(
                    "[optimize] supports single and pair models, got `{}`",
                    other.label()
                )))
            }
        };
        let mut prob = ControlProblem::new(
            control_model,
            self.horizon,
            self.revenue_weight,
            self.effort_weight,
            self.h_max,
        )
        .map_err(|e| CliError::invalid(format!("[optimize] {e}")))?;
        let mode = adjoint_override.or(self.adjoint_mode.map(Into::into));
        if let Some(mode) = mode {
            prob = prob.with_adjoint_mode(mode);
        }
        if let Some(range) = self.objective_range {
            prob = prob.with_objective_range(range.into());
        }
        Ok(prob)
    }
}

/// One side (model) of a `kind = "table1"` scenario: the optimize settings
/// plus the constant harvest fractions to tabulate.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Side {
    pub model: ModelSpec,
    pub h_list: Vec<f64>,
    pub x0: f64,
    pub y0: Option<f64>,
    pub horizon: usize,
    pub revenue_weight: f64,
    pub effort_weight: f64,
    pub h_max: f64,
    pub adjoint_mode: Option<AdjointModeSpec>,
    pub objective_range: Option<ObjectiveRangeSpec>,
    #[serde(default)]
    pub sweep: SweepSpec,
}

impl Table1Side {
    fn optimize_spec(&self) -> OptimizeSpec {
        OptimizeSpec {
            x0: self.x0,
            y0: self.y0,
            horizon: self.horizon,
            revenue_weight: self.revenue_weight,
            effort_weight: self.effort_weight,
            h_max: self.h_max,
            adjoint_mode: self.adjoint_mode,
            objective_range: self.objective_range,
            sweep: self.sweep.clone(),
        }
    }

    pub fn build(
        &self,
        adjoint_override: Option<AdjointMode>,
    ) -> Result<(ControlProblem, SweepConfig), CliError> {
        let prob = self.optimize_spec().build(&self.model, adjoint_override)?;
        Ok((prob, self.sweep.build()))
    }
}

/// Settings for `kind = "table1"`: a single-species side and a pair side.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Spec {
    pub single: Table1Side,
    pub pair: Table1Side,
}

/// A parsed scenario file.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub kind: Kind,
    pub model: Option<ModelSpec>,
    pub simulate: Option<SimulateSpec>,
    pub equilibria: Option<EquilibriaSpec>,
    pub basin: Option<BasinSpec>,
    pub optimize: Option<OptimizeSpec>,
    pub table1: Option<Table1Spec>,
}

impl ScenarioFile {
    /// The model table, which every kind except `table1` requires.
    pub fn require_model(&self) -> Result<&ModelSpec, CliError> {
        self.model
            .as_ref()
            .ok_or_else(|| CliError::invalid("missing [model] table"))
    }

    /// Cross-field checks: the settings table matching `kind` is present
    /// (except `equilibria`, which has no settings), no other settings
    /// table is, and dimensional keys are consistent with the model.
    fn validate(&self) -> Result<(), CliError> {
        if self.name.is_empty() {
            return Err(CliError::invalid("`name` must be non-empty"));
        }
        let sections: [(&str, bool, Kind); 5] = [
            ("simulate", self.simulate.is_some(), Kind::Simulate),
            ("equilibria", self.equilibria.is_some(), Kind::Equilibria),
            ("basin", self.basin.is_some(), Kind::Basin),
            ("optimize", self.optimize.is_some(), Kind::Optimize),
            ("table1", self.table1.is_some(), Kind::Table1),
        ];
        for (key, present, kind) in sections {
            if present && kind != self.kind {
                return Err(CliError::invalid(format!(
                    "kind is `{}` but a [{key}] table is present",
                    self.kind
                )));
            }
        }
        match self.kind {
            Kind::Simulate if self.simulate.is_none() => {
                return Err(CliError::invalid(
                    "kind `simulate` requires a [simulate] table",
                ))
            }
            Kind::Basin if self.basin.is_none() => {
                return Err(CliError::invalid("kind `basin` requires a [basin] table"))
            }
            Kind::Optimize if self.optimize.is_none() => {
                return Err(CliError::invalid(
                    "kind `optimize` requires an [optimize] table",
                ))
            }
            Kind::Table1 if self.table1.is_none() => {
                return Err(CliError::invalid("kind `table1` requires a [table1] table"))
            }
            _ => {}
        }
        if self.kind == Kind::Table1 {
            if self.model.is_some() {
                return Err(CliError::invalid(
                    "kind `table1` declares its models inside [table1.single] and [table1.pair]; \
                     remove the top-level [model] table",
                ));
            }
            let t = self.table1.as_ref().expect("checked above");
            if !matches!(t.single.model, ModelSpec::Single(_)) {
                return Err(CliError::invalid("[table1.single] model must be `single`"));
            }
            if !matches!(t.pair.model, ModelSpec::Pair(_)) {
                return Err(CliError::invalid("[table1.pair] model must be `pair`"));
            }
        } else {
            let model = self.require_model()?;
            if let Some(sim) = &self.simulate {
                match (model.dim(), sim.y0.is_some()) {
                    (2, false) => {
                        return Err(CliError::invalid(
                            "[simulate] y0 is required for a 2-D model",
                        ))
                    }
                    (1, true) => {
                        return Err(CliError::invalid(
                            "[simulate] y0 is not accepted for a 1-D model",
                        ))
                    }
                    _ => {}
                }
            }
            if self.kind == Kind::Equilibria
                && !matches!(model, ModelSpec::Single(_) | ModelSpec::Pair(_))
            {
                return Err(CliError::invalid(format!(
                    "equilibria supports single and pair models (closed forms), got `{}`",
                    model.label()
                )));
            }
        }
        Ok(())
    }
}

/// Reads and validates a scenario file. Parse errors carry the file path
/// and the TOML diagnostic (which names the offending key and location).
pub fn load_scenario(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let scenario: ScenarioFile = toml::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scenario
        .validate()
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    Ok(scenario)
}
