//! JSON scenario files: strict parsing, validation, execution and artifact
//! emission. A scenario names a topology, a protocol with its gains, the
//! inputs, and the time grid.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{zero_error_class_check, SwitchingConstants};
use crate::discrete::StepSize;
use crate::error::{Error, Result};
use crate::graph::{self, Edge, WeightedDigraph};
use crate::output::{format_sig, render_svg, write_csv};
use crate::protocol::{init_state, AgentState, AlgorithmParams, InitPolicy, Protocol, ThetaGain};
use crate::signal::{self, InputSet, Signal};
use crate::sim::{attach_bounds, error_metrics, simulate_continuous, simulate_discrete, BoundSet, ErrorReport, Topology, Trajectory};
use crate::switching::{self, validate_admissible, Repeat, SwitchingSchedule};

/// Integrator step used when a scenario does not set one.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Fraction of the horizon before the default tail window starts.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.75;
const BALANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    Preset(String),
    Explicit(ExplicitGraph),
}

/// Edges are `[from, to, weight]` with 1-based nodes; `from` listens to `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<WeightedDigraph> {
        match self {
            GraphSpec::Preset(name) => graph::preset(name),
            GraphSpec::Explicit(g) => WeightedDigraph::from_edges(g.n, &g.edges),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RepeatSpec {
    #[default]
    None,
    Cyclic(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    /// `case1` or `case2`.
    Preset(String),
    Explicit(ExplicitSchedule),
}

/// `segments` are `[start_time, graph_index]` with 0-based indices into `graphs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSchedule {
    pub graphs: Vec<GraphSpec>,
    pub segments: Vec<(f64, usize)>,
    #[serde(default)]
    pub repeat: RepeatSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<SwitchingSchedule> {
        match self {
            ScheduleSpec::Preset(name) => match name.as_str() {
                "case1" => Ok(switching::case1_schedule()),
                "case2" => Ok(switching::case2_schedule()),
                other => Err(Error::UnknownPreset(other.to_string())),
            },
            ScheduleSpec::Explicit(s) => {
                let graphs = s.graphs.iter().map(GraphSpec::build).collect::<Result<Vec<_>>>()?;
                let repeat = match s.repeat {
                    RepeatSpec::None => Repeat::None,
                    RepeatSpec::Cyclic(p) => Repeat::Cyclic(p),
                };
                SwitchingSchedule::new(graphs, s.segments.clone(), repeat, s.end)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputsSpec {
    Preset(InputPreset),
    Signals(Vec<Signal>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPreset {
    pub preset: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    PerAgent(Vec<ThetaGain>),
    Uniform(ThetaGain),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LimitSpec {
    PerAgent(Vec<f64>),
    Uniform(f64),
}

fn expand<T: Clone>(per_agent: Option<&Vec<T>>, uniform: Option<&T>, n: usize) -> Vec<T> {
    match (per_agent, uniform) {
        (Some(v), _) => v.clone(),
        (None, Some(u)) => vec![u.clone(); n],
        (None, None) => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    #[serde(default = "zero_v")]
    pub policy: InitPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<Vec<f64>>,
}

fn zero_v() -> InitPolicy {
    InitPolicy::ZeroV
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchingBoundSpec {
    pub kappa: f64,
    pub lambda_hat_sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    /// Write every `stride`-th grid point to the CSV.
    #[serde(default = "one")]
    pub stride: usize,
    #[serde(default)]
    pub svg: bool,
}

fn one() -> usize {
    1
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: None,
            stride: 1,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    pub protocol: Protocol,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sat_limits: Option<LimitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Signal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub inputs: InputsSpec,
    #[serde(default)]
    pub init: InitSpec,
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switching_bound: Option<SwitchingBoundSpec>,
    #[serde(default)]
    pub record_messages: bool,
    /// Downgrade graph and stepsize checks to warnings.
    #[serde(default)]
    pub waive_checks: bool,
    #[serde(default)]
    pub output: OutputSpec,
}

const FIELDS: &[&str] = &[
    "name",
    "description",
    "graph",
    "schedule",
    "protocol",
    "alpha",
    "beta",
    "theta",
    "sat_limits",
    "psi",
    "delta",
    "inputs",
    "init",
    "horizon",
    "step",
    "tail_start",
    "seed",
    "switching_bound",
    "record_messages",
    "waive_checks",
    "output",
];
const REQUIRED: &[&str] = &["protocol", "alpha", "beta", "inputs", "horizon"];

fn suggest(word: &str, candidates: &[&str]) -> Option<String> {
    candidates
        .iter()
        .map(|c| (strsim::jaro_winkler(word, c), *c))
        .filter(|(score, _)| *score >= 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c.to_string())
}

/// Adds a "did you mean" hint to serde's unknown-field and unknown-variant messages.
fn annotate(msg: String) -> String {
    let ticked = |s: &str| -> Vec<String> { s.split('`').skip(1).step_by(2).map(str::to_string).collect() };
    let Some(rest) = msg.strip_prefix("unknown field ").or_else(|| msg.strip_prefix("unknown variant ")) else {
        return msg;
    };
    let words = ticked(rest);
    if let Some((bad, options)) = words.split_first() {
        let options: Vec<&str> = options.iter().map(String::as_str).collect();
        if let Some(s) = suggest(bad, &options) {
            return format!("{msg} (did you mean `{s}`?)");
        }
    }
    msg
}

impl ScenarioConfig {
    /// Parses a scenario, reporting every unknown or missing top-level key
    /// before any type error.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(vec![format!("parse error: {e}")]))?;
        let Some(obj) = value.as_object() else {
            return Err(Error::Config(vec!["scenario must be a JSON object".into()]));
        };
        let mut problems = Vec::new();
        for key in obj.keys() {
            if !FIELDS.contains(&key.as_str()) {
                problems.push(match suggest(key, FIELDS) {
                    Some(s) => format!("unknown field `{key}` (did you mean `{s}`?)"),
                    None => format!("unknown field `{key}`"),
                });
            }
        }
        for key in REQUIRED {
            if !obj.contains_key(*key) {
                problems.push(format!("missing required field `{key}`"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        serde_json::from_value(value).map_err(|e| Error::Config(vec![annotate(e.to_string())]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn step(&self) -> f64 {
        self.step.unwrap_or(DEFAULT_STEP)
    }

    pub fn tail_start(&self) -> f64 {
        self.tail_start.unwrap_or(DEFAULT_TAIL_FRACTION * self.horizon)
    }

    /// Builds the runnable scenario or lists every violation.
    pub fn resolve(&self) -> Result<Scenario> {
        let mut errs = Vec::new();
        let mut warnings = Vec::new();

        let topology = match (&self.graph, &self.schedule) {
            (Some(_), Some(_)) => {
                errs.push("give exactly one of `graph` and `schedule`, not both".into());
                None
            }
            (None, None) => {
                errs.push("one of `graph` or `schedule` is required".into());
                None
            }
            (Some(g), None) => g.build().map(Topology::Fixed).map_err(|e| errs.push(format!("graph: {e}"))).ok(),
            (None, Some(s)) => s
                .build()
                .map(Topology::Switching)
                .map_err(|e| errs.push(format!("schedule: {e}")))
                .ok(),
        };
        let n = topology.as_ref().map(Topology::n);

        let inputs = match &self.inputs {
            InputsSpec::Preset(p) => signal::preset_scenario(&p.preset, self.seed),
            InputsSpec::Signals(s) => InputSet::new(s.clone()),
        }
        .map_err(|e| errs.push(format!("inputs: {e}")))
        .ok();
        if let (Some(n), Some(inputs)) = (n, &inputs) {
            if inputs.len() != n {
                errs.push(format!("inputs: {} signals for {n} agents", inputs.len()));
            }
        }

        let n_agents = n.unwrap_or(0);
        let (theta_list, theta_one) = match &self.theta {
            Some(ThetaSpec::PerAgent(v)) => (Some(v), None),
            Some(ThetaSpec::Uniform(u)) => (None, Some(u)),
            None => (None, None),
        };
        let (sat_list, sat_one) = match &self.sat_limits {
            Some(LimitSpec::PerAgent(v)) => (Some(v), None),
            Some(LimitSpec::Uniform(u)) => (None, Some(u)),
            None => (None, None),
        };
        let mut params = AlgorithmParams::new(self.alpha, self.beta);
        if self.theta.is_some() {
            params = params.with_theta(expand(theta_list, theta_one, n_agents));
        }
        if self.sat_limits.is_some() {
            params = params.with_sat_limits(expand(sat_list, sat_one, n_agents));
        }
        if let Some(psi) = &self.psi {
            params = params.with_psi(psi.clone());
        }
        if n.is_some() {
            errs.extend(params.violations(n_agents));
        } else {
            errs.extend(params.violations(0).into_iter().filter(|v| v.starts_with("alpha") || v.starts_with("beta")));
        }

        let p = self.protocol;
        if p.uses_theta() && self.theta.is_none() {
            errs.push(format!("theta is required by {}", p.name()));
        }
        if !p.uses_theta() && self.theta.is_some() {
            errs.push(format!("theta is not used by {}", p.name()));
        }
        if p.is_saturated() != self.sat_limits.is_some() {
            errs.push(if p.is_saturated() {
                format!("sat_limits is required by {}", p.name())
            } else {
                format!("sat_limits is not used by {}", p.name())
            });
        }
        if self.psi.is_some() && p != Protocol::Dc3 {
            errs.push(format!("psi is only used by dc3, not {}", p.name()));
        }
        if p.is_discrete() != self.delta.is_some() {
            errs.push(if p.is_discrete() {
                "delta is required by dcdisc".to_string()
            } else {
                format!("delta is only used by dcdisc, not {}", p.name())
            });
        }
        if let Some(s) = &self.psi {
            if let Err(e) = s.validate() {
                errs.push(format!("psi: {e}"));
            }
        }

        if !(self.horizon > 0.0) {
            errs.push(format!("horizon must be > 0, got {}", self.horizon));
        }
        let grid_step = if p.is_discrete() { self.delta.unwrap_or(f64::NAN) } else { self.step() };
        let grid_name = if p.is_discrete() { "delta" } else { "step" };
        if !(grid_step > 0.0) {
            if !(p.is_discrete() && self.delta.is_none()) {
                errs.push(format!("{grid_name} must be > 0, got {grid_step}"));
            }
        } else if self.horizon > 0.0 {
            let k = (self.horizon / grid_step).round();
            if k < 1.0 || (k * grid_step - self.horizon).abs() > 1e-9 * self.horizon.max(1.0) {
                errs.push(format!("horizon {} is not a multiple of {grid_name} {grid_step}", self.horizon));
            }
            if let Some(topo) = &topology {
                if let Err(e) = crate::sim::check_alignment(&topo.switch_times(self.horizon), grid_step) {
                    errs.push(format!("schedule: {e}"));
                }
            }
        }
        let tail = self.tail_start();
        if !(tail >= 0.0 && tail < self.horizon) {
            errs.push(format!("tail_start must lie in [0, horizon), got {tail}"));
        }
        if let Some(b) = &self.switching_bound {
            if !(b.kappa >= 1.0) {
                errs.push(format!("switching_bound.kappa must be >= 1, got {}", b.kappa));
            }
            if !(b.lambda_hat_sigma > 0.0) {
                errs.push(format!("switching_bound.lambda_hat_sigma must be > 0, got {}", b.lambda_hat_sigma));
            }
        }

        let mut checks = Vec::new();
        if let Some(topo) = &topology {
            match topo {
                Topology::Fixed(g) => {
                    if !g.is_weight_balanced(BALANCE_TOL) {
                        checks.push("graph is not weight-balanced".to_string());
                    }
                    if !g.is_strongly_connected() {
                        checks.push("graph is not strongly connected".to_string());
                    }
                }
                Topology::Switching(s) if self.horizon > 0.0 => match validate_admissible(s, self.horizon, BALANCE_TOL) {
                    Ok(r) if !r.admissible => checks.push(format!(
                        "schedule is not admissible (balanced: {}, dwell: {}, recurrence: {:?})",
                        r.all_balanced, r.dwell_ok, r.recurrence
                    )),
                    Ok(_) => {}
                    Err(e) => errs.push(format!("schedule: {e}")),
                },
                Topology::Switching(_) => {}
            }
            if let Some(delta) = self.delta.filter(|d| *d > 0.0) {
                let dmax = topo.graphs().iter().map(|g| g.d_max_out()).fold(0.0, f64::max);
                if dmax > 0.0 && self.alpha > 0.0 && self.beta > 0.0 {
                    let s = StepSize::new(delta, self.alpha, self.beta, dmax)?;
                    if !s.admissible {
                        checks.push(format!("delta = {delta} is not below the stepsize bound {}", format_sig(s.bound)));
                    }
                }
            }
        }
        if self.waive_checks {
            warnings.extend(checks);
        } else {
            errs.extend(checks);
        }

        let initial = if let (Some(n), Some(inputs)) = (n, &inputs) {
            let x0 = self.init.x0.clone().unwrap_or_else(|| vec![0.0; n]);
            if x0.len() != n {
                errs.push(format!("init.x0 has {} entries, expected {n}", x0.len()));
                None
            } else if self.alpha > 0.0 {
                let with_z = p.has_information_state();
                match init_state(self.init.policy, &x0, self.init.v0.as_deref(), self.init.z0.as_deref(), self.alpha, with_z) {
                    Ok((mut s, _)) => {
                        if p.is_discrete() && self.init.z0.is_none() {
                            let u0 = inputs.values(0.0);
                            s.z = Some(match &self.init.x0 {
                                Some(x0) => x0.iter().zip(&u0).map(|(x, u)| x - u).collect(),
                                None => vec![0.0; n],
                            });
                        }
                        Some(s)
                    }
                    Err(e) => {
                        errs.push(format!("init: {e}"));
                        None
                    }
                }
            } else {
                None
            }
        } else {
            None
        };

        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".into()),
            protocol: p,
            topology: topology.expect("checked"),
            inputs: inputs.expect("checked"),
            params,
            initial: initial.expect("checked"),
            delta: self.delta,
            step: self.step(),
            horizon: self.horizon,
            tail_start: tail,
            switching_bound: self.switching_bound.map(|b| SwitchingConstants {
                kappa: b.kappa,
                lambda_hat_sigma: b.lambda_hat_sigma,
            }),
            record_messages: self.record_messages,
            output: self.output.clone(),
            warnings,
        })
    }
}

/// A validated, runnable scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub protocol: Protocol,
    pub topology: Topology,
    pub inputs: InputSet,
    pub params: AlgorithmParams,
    pub initial: AgentState,
    pub delta: Option<f64>,
    pub step: f64,
    pub horizon: f64,
    pub tail_start: f64,
    pub switching_bound: Option<SwitchingConstants>,
    pub record_messages: bool,
    pub output: OutputSpec,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    /// `None` when the run diverged before the tail window.
    pub report: Option<ErrorReport>,
    pub bounds: BoundSet,
}

impl RunOutput {
    pub fn check(&self) -> Result<()> {
        self.trajectory.check()
    }
}

/// Simulates a scenario and computes its metrics and bound curves.
/// Divergence is reported through `trajectory.divergence`.
pub fn run_scenario(sc: &Scenario) -> Result<RunOutput> {
    let trajectory = match sc.delta {
        Some(delta) => simulate_discrete(
            &sc.topology,
            &sc.inputs,
            &sc.params,
            sc.initial.z.clone().expect("discrete state has z"),
            sc.initial.v.clone(),
            delta,
            sc.horizon,
        )?,
        None => simulate_continuous(
            sc.protocol,
            &sc.topology,
            &sc.inputs,
            &sc.params,
            sc.initial.clone(),
            sc.step,
            sc.horizon,
            sc.record_messages,
        )?,
    };
    if trajectory.divergence.is_some() {
        return Ok(RunOutput {
            trajectory,
            report: None,
            bounds: BoundSet::default(),
        });
    }
    let mut report = error_metrics(&trajectory, &sc.inputs, sc.tail_start)?;
    let bounds = attach_bounds(
        sc.protocol,
        &sc.topology,
        &sc.inputs,
        &sc.params,
        &trajectory,
        sc.switching_bound,
        &mut report,
    )?;
    Ok(RunOutput {
        trajectory,
        report: Some(report),
        bounds,
    })
}

/// One-line outcome: tail error against the ultimate bound, plus the
/// command bound for saturated protocols.
pub fn summary_line(sc: &Scenario, out: &RunOutput) -> String {
    let Some(r) = &out.report else {
        let d = out.trajectory.divergence.expect("no report only on divergence");
        return format!("{}: {} DIVERGED at t = {}", sc.name, sc.protocol.name(), format_sig(d.t));
    };
    let mut line = format!(
        "{}: {} on {} agents, T = {}, tail sup error {} over [{}, {}]",
        sc.name,
        sc.protocol.name(),
        out.trajectory.n(),
        format_sig(sc.horizon),
        fmt_short(r.sup_error_norm_tail),
        format_sig(r.tail_start),
        format_sig(r.horizon)
    );
    if let Some(ub) = r.ultimate_bound {
        let verdict = if r.sup_error_norm_tail <= ub * (1.0 + 1e-6) + crate::sim::BOUND_ABS_TOL { "within" } else { "ABOVE" };
        line.push_str(&format!(", {verdict} ultimate bound {}", fmt_short(ub)));
    }
    if let Some(limits) = &sc.params.sat_limits {
        let ok = r.max_abs_command.iter().zip(limits).all(|(m, c)| *m <= *c);
        let max = r.max_abs_command.iter().copied().fold(0.0, f64::max);
        let cap = limits.iter().copied().fold(0.0, f64::max);
        line.push_str(&format!(
            ", max |command| {} {} {}",
            fmt_short(max),
            if ok { "<=" } else { ">" },
            format_sig(cap)
        ));
    }
    if out.bounds.tracking.is_some() {
        line.push_str(&format!(", tracking-bound violations {}", r.bound_violations));
    }
    line
}

fn fmt_short(x: f64) -> String {
    format!("{x:.3e}")
}

#[derive(Debug, Clone, Default)]
pub struct ExecuteOptions {
    pub out_dir: Option<PathBuf>,
    pub svg: bool,
    pub seed: Option<u64>,
    pub step: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExecuteSummary {
    pub name: String,
    pub line: String,
    pub csv: PathBuf,
    pub metrics: PathBuf,
    pub svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct MetricsFile<'a> {
    scenario: &'a str,
    protocol: &'a str,
    warnings: &'a [String],
    #[serde(flatten)]
    report: Option<&'a ErrorReport>,
    divergence: Option<crate::sim::Divergence>,
}

impl ScenarioConfig {
    /// Applies command-line overrides.
    pub fn with_overrides(mut self, opts: &ExecuteOptions) -> Self {
        if let Some(seed) = opts.seed {
            self.seed = seed;
        }
        if let Some(step) = opts.step {
            self.step = Some(step);
        }
        self
    }
}

/// Runs a scenario and writes `<name>.csv`, `<name>.metrics.json` and,
/// if requested, `<name>.svg`. On divergence the partial artifacts are
/// written and `Error::Divergence` is returned.
pub fn execute(cfg: &ScenarioConfig, opts: &ExecuteOptions) -> Result<ExecuteSummary> {
    let cfg = cfg.clone().with_overrides(opts);
    let sc = cfg.resolve()?;
    let out = run_scenario(&sc)?;
    let dir = opts
        .out_dir
        .clone()
        .or_else(|| sc.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;
    let csv = dir.join(format!("{}.csv", sc.name));
    let file = std::io::BufWriter::new(fs::File::create(&csv)?);
    write_csv(file, &out.trajectory, &sc.inputs, &out.bounds, sc.output.stride)?;
    let metrics = dir.join(format!("{}.metrics.json", sc.name));
    let m = MetricsFile {
        scenario: &sc.name,
        protocol: sc.protocol.name(),
        warnings: &sc.warnings,
        report: out.report.as_ref(),
        divergence: out.trajectory.divergence,
    };
    fs::write(&metrics, serde_json::to_string_pretty(&m)? + "\n")?;
    let svg = if opts.svg || sc.output.svg {
        let path = dir.join(format!("{}.svg", sc.name));
        fs::write(&path, render_svg(&out.trajectory, &sc.inputs, &sc.name))?;
        Some(path)
    } else {
        None
    };
    out.check()?;
    Ok(ExecuteSummary {
        line: summary_line(&sc, &out),
        name: sc.name,
        csv,
        metrics,
        svg,
    })
}

/// Reads and validates a scenario file. A bare bundled-preset name such as
/// `case1` is accepted when no such file exists.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => match path.to_str().and_then(bundled) {
            Some(t) => t.to_string(),
            None => return Err(e.into()),
        },
    };
    let mut cfg = ScenarioConfig::from_json(&text)?;
    if cfg.name.is_none() {
        cfg.name = path.file_stem().and_then(|s| s.to_str()).map(str::to_string);
    }
    cfg.resolve()?;
    Ok(cfg)
}

/// Human-readable dry-run report: graph checks, admissibility, stepsize
/// bound and the zero-error input class of the inputs.
pub fn validate_report(cfg: &ScenarioConfig) -> Result<String> {
    let sc = cfg.resolve()?;
    let mut out = format!("scenario {} ({}), {} agents\n", sc.name, sc.protocol.name(), sc.topology.n());
    for (i, g) in sc.topology.graphs().iter().enumerate() {
        let sp = g.spectral_summary()?;
        out.push_str(&format!(
            "  graph {i}: {} edges, balanced {}, strongly connected {}, lambda_hat_2 {}, Re lambda_2 {}, d_max_out {}\n",
            g.edge_count(),
            g.is_weight_balanced(BALANCE_TOL),
            g.is_strongly_connected(),
            format_sig(sp.lambda_hat_2),
            format_sig(sp.re_lambda_2),
            format_sig(sp.d_max_out)
        ));
    }
    if let Topology::Switching(s) = &sc.topology {
        let r = validate_admissible(s, sc.horizon, BALANCE_TOL)?;
        out.push_str(&format!(
            "  schedule: admissible {}, dwell {}, recurrence {:?}, {} jointly connected windows in [0, {})\n",
            r.admissible,
            format_sig(s.dwell_min()),
            r.recurrence,
            r.joint_connectivity_intervals.len(),
            format_sig(sc.horizon)
        ));
        for note in &r.notes {
            out.push_str(&format!("    note: {note}\n"));
        }
    }
    if let Some(delta) = sc.delta {
        let dmax = sc.topology.graphs().iter().map(|g| g.d_max_out()).fold(0.0, f64::max);
        let s = StepSize::new(delta, sc.params.alpha, sc.params.beta, dmax)?;
        out.push_str(&format!(
            "  stepsize: delta {} vs bound {}, admissible {}\n",
            format_sig(delta),
            format_sig(s.bound),
            s.admissible
        ));
    }
    let h = sc.delta.unwrap_or(0.01).max(sc.horizon / 4000.0);
    let grid: Vec<f64> = (0..=((sc.horizon / h).floor() as usize)).map(|k| k as f64 * h).collect();
    match zero_error_class_check(&sc.inputs, sc.params.alpha, &grid, sc.tail_start, sc.delta) {
        Ok(v) => out.push_str(&format!(
            "  zero-error input class (numeric evidence on the tail window): condition (a) {}, condition (b) {}\n",
            v.condition_a.holds, v.condition_b.holds
        )),
        Err(e) => out.push_str(&format!("  zero-error input class: not evaluated ({e})\n")),
    }
    for w in &sc.warnings {
        out.push_str(&format!("  warning: {w}\n"));
    }
    Ok(out)
}

/// Runs every `*.json` scenario in `dir` in parallel, sorted by file name.
pub fn run_batch(dir: impl AsRef<Path>, opts: &ExecuteOptions) -> Result<Vec<(PathBuf, Result<ExecuteSummary>)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    Ok(paths
        .into_par_iter()
        .map(|p| {
            let r = load_scenario(&p).and_then(|cfg| execute(&cfg, opts));
            (p, r)
        })
        .collect())
}

/// Scenario files shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("case1", include_str!("../scenarios/case1.json")),
    ("case2", include_str!("../scenarios/case2.json")),
    ("sampled", include_str!("../scenarios/sampled.json")),
    ("sat", include_str!("../scenarios/sat.json")),
    ("sat_dc1", include_str!("../scenarios/sat_dc1.json")),
    ("static", include_str!("../scenarios/static.json")),
    ("offset_sines", include_str!("../scenarios/offset_sines.json")),
    ("rate", include_str!("../scenarios/rate.json")),
    ("privacy", include_str!("../scenarios/privacy.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled scenario.
pub fn bundled_config(name: &str) -> Result<ScenarioConfig> {
    let text = bundled(name).ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    let mut cfg = ScenarioConfig::from_json(text)?;
    cfg.name.get_or_insert_with(|| name.to_string());
    Ok(cfg)
}
