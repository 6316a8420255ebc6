//! Fixed-step simulation: classical RK4 for the continuous protocols,
//! direct iteration for the discrete one, and the tracking metrics
//! computed from a finished trajectory.
//!
//! Switching instants must sit on the grid. The topology active at the
//! start of a step is used for the whole step.

use serde::Serialize;

use crate::bounds::{
    projected_derivative_samples, tracking_bound_curve, transient_bound_curve, ultimate_bound, BoundCurve,
    BoundInputs, SwitchingConstants,
};
use crate::discrete::{dcdisc_step, DiscreteState};
use crate::error::{Error, Result};
use crate::graph::{LaplacianMatrix, WeightedDigraph};
use crate::protocol::{evaluate, AgentState, AlgorithmParams, Evaluation, Protocol};
use crate::signal::InputSet;
use crate::switching::{Recurrence, SwitchingSchedule};

/// Any state component above this magnitude aborts the run.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
/// Relative slack when checking that times fall on the grid.
const GRID_TOL: f64 = 1e-9;
/// Error range used by the decay-rate fit.
pub const RATE_FIT_FLOOR: f64 = 1e-8;
pub const RATE_FIT_CEILING_FRACTION: f64 = 0.5;
/// Absolute slack for bound comparisons, above the integrator's error floor.
pub const BOUND_ABS_TOL: f64 = 1e-9;

/// Fixed graph or a switching schedule.
#[derive(Debug, Clone)]
pub enum Topology {
    Fixed(WeightedDigraph),
    Switching(SwitchingSchedule),
}

impl Topology {
    pub fn n(&self) -> usize {
        match self {
            Topology::Fixed(g) => g.n(),
            Topology::Switching(s) => s.n(),
        }
    }

    pub fn graphs(&self) -> Vec<&WeightedDigraph> {
        match self {
            Topology::Fixed(g) => vec![g],
            Topology::Switching(s) => s.graphs().iter().collect(),
        }
    }

    pub fn index_at(&self, t: f64) -> Result<usize> {
        match self {
            Topology::Fixed(_) => Ok(0),
            Topology::Switching(s) => s.graph_at(t),
        }
    }

    pub fn switch_times(&self, horizon: f64) -> Vec<f64> {
        match self {
            Topology::Fixed(_) => Vec::new(),
            Topology::Switching(s) => s.switch_times(horizon),
        }
    }

    /// The graph that stays active for all large `t`, if there is one.
    pub fn final_graph(&self) -> Option<&WeightedDigraph> {
        match self {
            Topology::Fixed(g) => Some(g),
            Topology::Switching(s) => match s.repeat() {
                crate::switching::Repeat::None if s.end().is_none() => {
                    s.segments().last().map(|&(_, i)| s.graph(i))
                }
                _ => None,
            },
        }
    }

    fn laplacians(&self) -> Vec<LaplacianMatrix> {
        self.graphs().iter().map(|g| g.laplacian()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Divergence {
    pub t: f64,
    pub index: usize,
    pub value: f64,
}

impl From<Divergence> for Error {
    fn from(d: Divergence) -> Self {
        Error::Divergence {
            t: d.t,
            index: d.index,
            value: d.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<AgentState>,
    /// Applied `ẋ` at each grid point (empty for discrete runs).
    pub commands: Vec<Vec<f64>>,
    /// Emitted payloads at each grid point, when recorded.
    pub messages: Option<Vec<Vec<f64>>>,
    /// `h` for continuous runs, `δ` for discrete ones.
    pub step: f64,
    pub discrete: bool,
    /// Set when the run stopped early; the trajectory holds the steps before it.
    pub divergence: Option<Divergence>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n(&self) -> usize {
        self.states.first().map_or(0, AgentState::n)
    }

    pub fn final_state(&self) -> &AgentState {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// `Err(Divergence)` if the run was aborted.
    pub fn check(&self) -> Result<()> {
        match self.divergence {
            Some(d) => Err(d.into()),
            None => Ok(()),
        }
    }

    /// Per-agent `max_t |ẋ^i(t)|`.
    pub fn max_abs_command(&self) -> Vec<f64> {
        let mut out = vec![0.0_f64; self.n()];
        for c in &self.commands {
            for (m, v) in out.iter_mut().zip(c) {
                *m = m.max(v.abs());
            }
        }
        out
    }
}

/// Number of steps of size `h` covering `horizon`, which must be a multiple of `h`.
fn step_count(h: f64, horizon: f64, name: &'static str) -> Result<usize> {
    if !(h > 0.0) {
        return Err(Error::param(name, format!("must be > 0, got {h}")));
    }
    if !(horizon >= h) {
        return Err(Error::param("horizon", format!("must be >= step {h}, got {horizon}")));
    }
    let k = (horizon / h).round();
    if (k * h - horizon).abs() > GRID_TOL * horizon.max(1.0) {
        return Err(Error::param(
            "horizon",
            format!("{horizon} is not a multiple of step {h}"),
        ));
    }
    Ok(k as usize)
}

/// Rejects switching instants that do not fall on the grid, suggesting the
/// largest step not above `h` that fits the offending instant.
pub fn check_alignment(events: &[f64], h: f64) -> Result<()> {
    for &e in events {
        let k = e / h;
        if (k - k.round()).abs() > GRID_TOL * k.abs().max(1.0) {
            let suggestion = e / k.ceil();
            return Err(Error::MisalignedSwitch {
                time: e,
                step: h,
                suggestion,
            });
        }
    }
    Ok(())
}

fn first_blowup(t: f64, flat: &[f64]) -> Option<Divergence> {
    flat.iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || v.abs() > DIVERGENCE_THRESHOLD)
        .map(|(index, &value)| Divergence { t, index, value })
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

/// Classical RK4 with step `h` up to `horizon`.
///
/// `rhs(step_start, t, state)` returns the evaluation at `(t, state)`; the
/// topology should be chosen from `step_start` so that a switch applies to
/// the whole step that begins at it. `events` are switching instants and
/// must be multiples of `h`.
pub fn integrate<F>(
    mut rhs: F,
    s0: AgentState,
    h: f64,
    horizon: f64,
    events: &[f64],
    record_messages: bool,
) -> Result<Trajectory>
where
    F: FnMut(f64, f64, &AgentState) -> Result<Evaluation>,
{
    let steps = step_count(h, horizon, "step")?;
    check_alignment(events, h)?;
    let n = s0.n();
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        commands: Vec::with_capacity(steps + 1),
        messages: record_messages.then(Vec::new),
        step: h,
        discrete: false,
        divergence: None,
    };
    let mut y = s0.to_flat();
    if let Some(d) = first_blowup(0.0, &y) {
        traj.divergence = Some(d);
        return Ok(traj);
    }
    let flat_rhs = |rhs: &mut F, t0: f64, t: f64, y: &[f64]| -> Result<(Vec<f64>, Evaluation)> {
        let e = rhs(t0, t, &AgentState::from_flat(n, y))?;
        Ok((e.derivative.to_flat(), e))
    };
    for k in 0..=steps {
        let t = k as f64 * h;
        let (k1, e) = flat_rhs(&mut rhs, t, t, &y)?;
        traj.times.push(t);
        traj.states.push(AgentState::from_flat(n, &y));
        traj.commands.push(e.commands);
        if let Some(m) = traj.messages.as_mut() {
            m.push(e.messages.iter().map(|m| m.payload).collect());
        }
        if k == steps {
            break;
        }
        let (k2, _) = flat_rhs(&mut rhs, t, t + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let (k3, _) = flat_rhs(&mut rhs, t, t + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let (k4, _) = flat_rhs(&mut rhs, t, t + h, &axpy(&y, h, &k3))?;
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if let Some(d) = first_blowup((k + 1) as f64 * h, &y) {
            traj.divergence = Some(d);
            break;
        }
    }
    Ok(traj)
}

/// Runs a continuous protocol over a fixed or switching topology.
#[allow(clippy::too_many_arguments)]
pub fn simulate_continuous(
    protocol: Protocol,
    topology: &Topology,
    inputs: &InputSet,
    params: &AlgorithmParams,
    s0: AgentState,
    h: f64,
    horizon: f64,
    record_messages: bool,
) -> Result<Trajectory> {
    if protocol.is_discrete() {
        return Err(Error::param("protocol", "use simulate_discrete for dcdisc"));
    }
    let laps = topology.laplacians();
    let events = topology.switch_times(horizon);
    integrate(
        |t0, t, s| evaluate(protocol, s, t, &laps[topology.index_at(t0)?], inputs, params),
        s0,
        h,
        horizon,
        &events,
        record_messages,
    )
}

/// Iterates the discrete protocol for `round(horizon/δ)` steps. The
/// recorded `x` is the output `z + u(k)`.
pub fn simulate_discrete(
    topology: &Topology,
    inputs: &InputSet,
    params: &AlgorithmParams,
    z0: Vec<f64>,
    v0: Vec<f64>,
    delta: f64,
    horizon: f64,
) -> Result<Trajectory> {
    let steps = step_count(delta, horizon, "delta")?;
    check_alignment(&topology.switch_times(horizon), delta)?;
    let laps = topology.laplacians();
    let mut s = DiscreteState::new(z0, v0, inputs)?;
    let snapshot = |s: &DiscreteState| AgentState {
        x: s.x_out.clone(),
        v: s.v.clone(),
        z: Some(s.z.clone()),
    };
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![snapshot(&s)],
        commands: Vec::new(),
        messages: None,
        step: delta,
        discrete: true,
        divergence: None,
    };
    for _ in 0..steps {
        let lap = &laps[topology.index_at(s.time(delta))?];
        s = dcdisc_step(&s, lap, inputs, params, delta)?;
        let t = s.time(delta);
        let flat: Vec<f64> = s.z.iter().chain(&s.v).copied().collect();
        if let Some(d) = first_blowup(t, &flat) {
            traj.divergence = Some(d);
            break;
        }
        traj.times.push(t);
        traj.states.push(snapshot(&s));
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub tail_start: f64,
    pub horizon: f64,
    /// `sup |x^i - avg(u)|` over the tail window.
    pub per_agent_sup_error_tail: Vec<f64>,
    /// `sup ‖x - avg(u)·1‖` over the tail window.
    pub sup_error_norm_tail: f64,
    /// Per-agent decay rate from a log-linear fit; `None` when the error never decays.
    pub fitted_rate: Vec<Option<f64>>,
    pub bound_violations: usize,
    pub gamma_used: f64,
    /// `max_t |Σv(t) - Σv(0)|`
    pub conservation_residual: f64,
    pub max_abs_command: Vec<f64>,
    pub ultimate_bound: Option<f64>,
    pub diverged: bool,
}

/// Per-time network average of the inputs and the tracking errors `x^i - avg`.
pub fn tracking_errors(traj: &Trajectory, inputs: &InputSet) -> (Vec<f64>, Vec<Vec<f64>>) {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| {
            let u = inputs.values(t);
            let avg = u.iter().sum::<f64>() / u.len() as f64;
            (avg, s.x.iter().map(|x| x - avg).collect())
        })
        .unzip()
}

/// Decay rate of `err` from a least-squares fit of `ln env(t)` where
/// `env(t) = max_{s ≥ t} |err(s)|`, restricted to samples with `t < cutoff`
/// and `env` inside `[1e-8, 0.5·env(0)]`.
pub fn fit_decay_rate(times: &[f64], err: &[f64], cutoff: f64) -> Option<f64> {
    let mut env = vec![0.0_f64; err.len()];
    let mut running = 0.0_f64;
    for i in (0..err.len()).rev() {
        running = running.max(err[i].abs());
        env[i] = running;
    }
    let ceiling = RATE_FIT_CEILING_FRACTION * *env.first()?;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(&env)
        .filter(|(t, e)| **t < cutoff && **e >= RATE_FIT_FLOOR && **e <= ceiling)
        .map(|(t, e)| (*t, e.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let (st, sl) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + t, b + l));
    let (mt, ml) = (st / m, sl / m);
    let (cov, var) = pts
        .iter()
        .fold((0.0, 0.0), |(c, v), (t, l)| (c + (t - mt) * (l - ml), v + (t - mt).powi(2)));
    if var == 0.0 {
        return None;
    }
    Some(-cov / var)
}

/// Tail, rate, conservation and command metrics of a finished run.
/// `bound_violations` and `ultimate_bound` are filled by [`attach_bounds`].
pub fn error_metrics(traj: &Trajectory, inputs: &InputSet, tail_start: f64) -> Result<ErrorReport> {
    let horizon = traj.times.last().copied().unwrap_or(0.0);
    let tail: Vec<usize> = (0..traj.len()).filter(|&k| traj.times[k] >= tail_start - GRID_TOL).collect();
    if tail.is_empty() || tail_start >= horizon {
        return Err(Error::EmptyTail { tail_start, horizon });
    }
    let n = traj.n();
    let (_, errs) = tracking_errors(traj, inputs);
    let mut per_agent = vec![0.0_f64; n];
    let mut norm_tail = 0.0_f64;
    for &k in &tail {
        for (m, e) in per_agent.iter_mut().zip(&errs[k]) {
            *m = m.max(e.abs());
        }
        norm_tail = norm_tail.max(errs[k].iter().map(|e| e * e).sum::<f64>().sqrt());
    }
    let fitted_rate = (0..n)
        .map(|i| {
            let e: Vec<f64> = errs.iter().map(|e| e[i]).collect();
            fit_decay_rate(&traj.times, &e, tail_start)
        })
        .collect();
    let sum_v0: f64 = traj.states[0].v.iter().sum();
    let conservation_residual = traj
        .states
        .iter()
        .map(|s| (s.v.iter().sum::<f64>() - sum_v0).abs())
        .fold(0.0, f64::max);
    Ok(ErrorReport {
        tail_start,
        horizon,
        per_agent_sup_error_tail: per_agent,
        sup_error_norm_tail: norm_tail,
        fitted_rate,
        bound_violations: 0,
        gamma_used: inputs.disagreement_gamma(&traj.times)?.gamma,
        conservation_residual,
        max_abs_command: traj.max_abs_command(),
        ultimate_bound: None,
        diverged: traj.divergence.is_some(),
    })
}

/// Envelopes attached to a run where the protocol and topology admit them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundSet {
    /// Zero-system envelope `s(t)`.
    pub transient: Option<BoundCurve>,
    pub tracking: Option<BoundCurve>,
    pub ultimate: Option<f64>,
}

/// Computes the bound curves on the trajectory grid and fills
/// `bound_violations` and `ultimate_bound` in `report`.
///
/// * `ultimate`: every protocol, using the fixed graph or the graph a
///   schedule settles on, provided its `λ̂₂ > 0`; with `δ` for dcdisc.
/// * `transient`, `tracking`: DC1 on a fixed graph, or on a switching
///   schedule when `switching` constants are supplied.
pub fn attach_bounds(
    protocol: Protocol,
    topology: &Topology,
    inputs: &InputSet,
    params: &AlgorithmParams,
    traj: &Trajectory,
    switching: Option<SwitchingConstants>,
    report: &mut ErrorReport,
) -> Result<BoundSet> {
    let mut out = BoundSet::default();
    let gamma = report.gamma_used;
    let delta = protocol.is_discrete().then_some(traj.step);
    let settled = match topology {
        Topology::Switching(s)
            if crate::switching::validate_admissible(s, report.horizon, 1e-10)?.recurrence
                != Recurrence::ConstantTail =>
        {
            None
        }
        _ => topology.final_graph(),
    };
    let spectral = match settled {
        Some(g) if g.is_weight_balanced(1e-10) => Some(g.spectral_summary()?),
        _ => None,
    };
    if let Some(sp) = spectral.as_ref().filter(|sp| sp.lambda_hat_2 > 1e-12) {
        out.ultimate = Some(ultimate_bound(params.beta, sp.lambda_hat_2, gamma, delta)?);
    }
    report.ultimate_bound = out.ultimate;

    if protocol != Protocol::Dc1 || traj.is_empty() {
        return Ok(out);
    }
    let s0 = &traj.states[0];
    let mut b = match (topology, &spectral, switching) {
        (_, _, Some(c)) => {
            let g = topology.graphs()[0];
            let sp = g.spectral_summary()?;
            let mut b = BoundInputs::from_initial(params.alpha, params.beta, &sp, &s0.x, &s0.v, inputs, gamma);
            b.switching = Some(c);
            b
        }
        (Topology::Fixed(_), Some(sp), None) if sp.lambda_hat_2 > 1e-12 => {
            BoundInputs::from_initial(params.alpha, params.beta, sp, &s0.x, &s0.v, inputs, gamma)
        }
        _ => return Ok(out),
    };
    b.gamma = gamma;
    let samples = projected_derivative_samples(inputs, &traj.times);
    let tracking = tracking_bound_curve(&traj.times, &b, &samples)?;
    let (_, errs) = tracking_errors(traj, inputs);
    let shift = s0.v.iter().sum::<f64>() / (params.alpha * traj.n() as f64);
    report.bound_violations = errs
        .iter()
        .zip(&tracking.values)
        .filter(|(e, bound)| {
            let norm = e.iter().map(|e| (e + shift).powi(2)).sum::<f64>().sqrt();
            norm > **bound * (1.0 + 1e-6) + BOUND_ABS_TOL
        })
        .count();
    out.transient = Some(transient_bound_curve(&traj.times, &b)?);
    out.tracking = Some(tracking);
    Ok(out)
}
