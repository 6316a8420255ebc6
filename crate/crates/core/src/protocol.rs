//! Right-hand sides of the continuous-time consensus protocols.
//!
//! * DC1: PI agreement on `x` with integral state `v`.
//! * DC2: DC1 run on an information state `z`, followed by a first-order
//!   motion filter `ẋ = -θ(t)(x - z) + ż` with a per-agent gain.
//! * DC3: DC2 where agents exchange `z̃ = z + ψ(t)` for a common mask `ψ`.
//!
//! The saturated variants clamp the motion command `ẋ` only; the information
//! phase is never clamped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::signal::{InputSet, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Dc1,
    Dc2,
    Dc3,
    Dc1Sat,
    Dc2Sat,
    /// Discrete-time iteration, see [`crate::discrete`].
    Dcdisc,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Dc1 => "dc1",
            Protocol::Dc2 => "dc2",
            Protocol::Dc3 => "dc3",
            Protocol::Dc1Sat => "dc1_sat",
            Protocol::Dc2Sat => "dc2_sat",
            Protocol::Dcdisc => "dcdisc",
        }
    }

    /// Whether the state carries an information state `z`.
    pub fn has_information_state(self) -> bool {
        matches!(self, Protocol::Dc2 | Protocol::Dc3 | Protocol::Dc2Sat | Protocol::Dcdisc)
    }

    pub fn uses_theta(self) -> bool {
        matches!(self, Protocol::Dc2 | Protocol::Dc3 | Protocol::Dc2Sat)
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, Protocol::Dc1Sat | Protocol::Dc2Sat)
    }

    pub fn is_discrete(self) -> bool {
        self == Protocol::Dcdisc
    }
}

/// Per-agent state; `z` is present for the cascaded protocols.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub z: Option<Vec<f64>>,
}

impl AgentState {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn zeros(n: usize, with_z: bool) -> Self {
        AgentState {
            x: vec![0.0; n],
            v: vec![0.0; n],
            z: with_z.then(|| vec![0.0; n]),
        }
    }

    /// Flat layout `[x, v, z?]` used by the integrator.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n() * 3);
        out.extend_from_slice(&self.x);
        out.extend_from_slice(&self.v);
        if let Some(z) = &self.z {
            out.extend_from_slice(z);
        }
        out
    }

    pub fn from_flat(n: usize, flat: &[f64]) -> Self {
        AgentState {
            x: flat[..n].to_vec(),
            v: flat[n..2 * n].to_vec(),
            z: (flat.len() >= 3 * n).then(|| flat[2 * n..3 * n].to_vec()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x
            .iter()
            .chain(&self.v)
            .chain(self.z.iter().flatten())
            .all(|v| v.is_finite())
    }

    fn check(&self, n: usize, need_z: bool) -> Result<()> {
        for (what, len) in [("x", self.x.len()), ("v", self.v.len())] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    what: if what == "x" { "state x" } else { "state v" },
                    expected: n,
                    found: len,
                });
            }
        }
        match (&self.z, need_z) {
            (Some(z), true) if z.len() != n => Err(Error::DimensionMismatch {
                what: "state z",
                expected: n,
                found: z.len(),
            }),
            (None, true) => Err(Error::DimensionMismatch {
                what: "state z",
                expected: n,
                found: 0,
            }),
            _ => Ok(()),
        }
    }
}

/// A time-varying rate gain `θ^i(t)` with its declared bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaGain {
    Constant(f64),
    Scheduled {
        signal: Signal,
        lower: f64,
        upper: f64,
    },
}

impl ThetaGain {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            ThetaGain::Constant(c) => (c, c),
            ThetaGain::Scheduled { lower, upper, .. } => (lower, upper),
        }
    }

    pub fn lower(&self) -> f64 {
        self.bounds().0
    }

    /// Evaluates the gain, failing if it leaves its declared bounds.
    pub fn eval(&self, agent: usize, t: f64) -> Result<f64> {
        let value = match self {
            ThetaGain::Constant(c) => *c,
            ThetaGain::Scheduled { signal, .. } => signal.value(t),
        };
        let (lower, upper) = self.bounds();
        if !(value >= lower && value <= upper) {
            return Err(Error::ThetaOutOfBounds {
                agent: agent + 1,
                t,
                value,
                lower,
                upper,
            });
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: Option<Vec<ThetaGain>>,
    pub sat_limits: Option<Vec<f64>>,
    pub psi: Option<Signal>,
}

impl AlgorithmParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        AlgorithmParams {
            alpha,
            beta,
            theta: None,
            sat_limits: None,
            psi: None,
        }
    }

    pub fn with_theta(mut self, theta: Vec<ThetaGain>) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn with_constant_theta(self, theta: &[f64]) -> Self {
        self.with_theta(theta.iter().map(|&c| ThetaGain::Constant(c)).collect())
    }

    pub fn with_sat_limits(mut self, limits: Vec<f64>) -> Self {
        self.sat_limits = Some(limits);
        self
    }

    pub fn with_psi(mut self, psi: Signal) -> Self {
        self.psi = Some(psi);
        self
    }

    /// Checks every parameter constraint, collecting all violations.
    pub fn violations(&self, n: usize) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.alpha > 0.0) {
            out.push(format!("alpha must be > 0, got {}", self.alpha));
        }
        if !(self.beta > 0.0) {
            out.push(format!("beta must be > 0, got {}", self.beta));
        }
        if let Some(theta) = &self.theta {
            if theta.len() != n {
                out.push(format!("theta has {} entries, expected {n}", theta.len()));
            }
            for (i, g) in theta.iter().enumerate() {
                let (lo, hi) = g.bounds();
                if !(lo > 0.0 && lo <= hi) {
                    out.push(format!("theta[{}] bounds must satisfy 0 < lower <= upper, got [{lo}, {hi}]", i + 1));
                }
            }
        }
        if let Some(limits) = &self.sat_limits {
            if limits.len() != n {
                out.push(format!("sat_limits has {} entries, expected {n}", limits.len()));
            }
            for (i, c) in limits.iter().enumerate() {
                if !(*c > 0.0) {
                    out.push(format!("sat_limits[{}] must be > 0, got {c}", i + 1));
                }
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::param("alpha", format!("must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0) {
            return Err(Error::param("beta", format!("must be > 0, got {}", self.beta)));
        }
        Ok(())
    }
}

/// A transmitted value: `x^j` for DC1, `z^j` for DC2 and `z̃^j` for DC3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub sender: usize,
    pub payload: f64,
}

/// One right-hand-side evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub derivative: AgentState,
    /// Applied motion command `ẋ` (after saturation, if any).
    pub commands: Vec<f64>,
    pub messages: Vec<Message>,
}

/// `sign(command) · min(|command|, limit)`.
pub fn apply_saturation(command: f64, limit: f64) -> Result<f64> {
    if !(limit > 0.0) {
        return Err(Error::param("limit", format!("saturation limit must be > 0, got {limit}")));
    }
    Ok(saturate(command, limit))
}

#[inline]
pub(crate) fn saturate(command: f64, limit: f64) -> f64 {
    command.clamp(-limit, limit)
}

/// Shared PI core: for an agreement variable `s` (= `x` in DC1, `z` in
/// DC2/DC3) and the exchanged values `sent` returns `(ṡ, v̇)`.
fn pi_core(
    s: &[f64],
    v: &[f64],
    sent: &[f64],
    u: &[f64],
    udot: &[f64],
    laplacian: &LaplacianMatrix,
    p: &AlgorithmParams,
) -> (Vec<f64>, Vec<f64>) {
    let n = s.len();
    let mut ls = vec![0.0; n];
    laplacian.apply(sent, &mut ls);
    let sdot = (0..n)
        .map(|i| udot[i] - p.alpha * (s[i] - u[i]) - p.beta * ls[i] - v[i])
        .collect();
    let vdot = ls.iter().map(|l| p.alpha * p.beta * l).collect();
    (sdot, vdot)
}

fn check_dims(state: &AgentState, laplacian: &LaplacianMatrix, inputs: &InputSet, need_z: bool) -> Result<usize> {
    let n = laplacian.n();
    if inputs.len() != n {
        return Err(Error::DimensionMismatch {
            what: "inputs",
            expected: n,
            found: inputs.len(),
        });
    }
    state.check(n, need_z)?;
    Ok(n)
}

fn eval_inputs(inputs: &InputSet, t: f64) -> (Vec<f64>, Vec<f64>) {
    let n = inputs.len();
    let mut u = vec![0.0; n];
    let mut udot = vec![0.0; n];
    inputs.eval_into(t, &mut u, &mut udot);
    (u, udot)
}

/// DC1: `ẋ = u̇ - α(x - u) - βLx - v`, `v̇ = αβLx`.
pub fn dc1_derivative(
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
) -> Result<AgentState> {
    Ok(dc1_eval(state, t, laplacian, inputs, p, None)?.derivative)
}

fn dc1_eval(
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
    limits: Option<&[f64]>,
) -> Result<Evaluation> {
    p.check()?;
    let n = check_dims(state, laplacian, inputs, false)?;
    let (u, udot) = eval_inputs(inputs, t);
    let (mut xdot, vdot) = pi_core(&state.x, &state.v, &state.x, &u, &udot, laplacian, p);
    if let Some(limits) = limits {
        for (c, l) in xdot.iter_mut().zip(limits) {
            *c = saturate(*c, *l);
        }
    }
    Ok(Evaluation {
        commands: xdot.clone(),
        messages: (0..n)
            .map(|i| Message {
                sender: i,
                payload: state.x[i],
            })
            .collect(),
        derivative: AgentState {
            x: xdot,
            v: vdot,
            z: None,
        },
    })
}

/// DC2: DC1 on `z`, then `ẋ^i = -θ^i(t)(x^i - z^i) + ż^i`.
pub fn dc2_derivative(
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
) -> Result<AgentState> {
    Ok(cascaded_eval(state, t, laplacian, inputs, p, 0.0, None)?.derivative)
}

/// DC3: DC2 driven by the masked values `z̃^j = z^j + ψ(t)`. Returns the
/// derivative together with the emitted messages.
pub fn dc3_derivative(
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
) -> Result<(AgentState, Vec<Message>)> {
    let psi = p.psi.as_ref().map_or(0.0, |s| s.value(t));
    let e = cascaded_eval(state, t, laplacian, inputs, p, psi, None)?;
    Ok((e.derivative, e.messages))
}

fn cascaded_eval(
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
    psi: f64,
    limits: Option<&[f64]>,
) -> Result<Evaluation> {
    p.check()?;
    let n = check_dims(state, laplacian, inputs, true)?;
    let theta = p.theta.as_ref().ok_or_else(|| Error::param("theta", "required by dc2/dc3"))?;
    if theta.len() != n {
        return Err(Error::DimensionMismatch {
            what: "theta",
            expected: n,
            found: theta.len(),
        });
    }
    let z = state.z.as_deref().expect("checked");
    let (u, udot) = eval_inputs(inputs, t);
    let sent: Vec<f64> = z.iter().map(|zi| zi + psi).collect();
    let (zdot, vdot) = pi_core(z, &state.v, &sent, &u, &udot, laplacian, p);
    let mut xdot = Vec::with_capacity(n);
    for i in 0..n {
        let th = theta[i].eval(i, t)?;
        let mut c = -th * (state.x[i] - z[i]) + zdot[i];
        if let Some(limits) = limits {
            c = saturate(c, limits[i]);
        }
        xdot.push(c);
    }
    Ok(Evaluation {
        commands: xdot.clone(),
        messages: sent
            .iter()
            .enumerate()
            .map(|(i, &payload)| Message { sender: i, payload })
            .collect(),
        derivative: AgentState {
            x: xdot,
            v: vdot,
            z: Some(zdot),
        },
    })
}

/// Dispatches on `protocol`. Saturated variants require `p.sat_limits`.
pub fn evaluate(
    protocol: Protocol,
    state: &AgentState,
    t: f64,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
) -> Result<Evaluation> {
    let limits = || -> Result<&[f64]> {
        let l = p
            .sat_limits
            .as_deref()
            .ok_or_else(|| Error::param("sat_limits", "required by saturated protocols"))?;
        if l.len() != laplacian.n() {
            return Err(Error::DimensionMismatch {
                what: "sat_limits",
                expected: laplacian.n(),
                found: l.len(),
            });
        }
        Ok(l)
    };
    match protocol {
        Protocol::Dc1 => dc1_eval(state, t, laplacian, inputs, p, None),
        Protocol::Dc1Sat => dc1_eval(state, t, laplacian, inputs, p, Some(limits()?)),
        Protocol::Dc2 => cascaded_eval(state, t, laplacian, inputs, p, 0.0, None),
        Protocol::Dc2Sat => cascaded_eval(state, t, laplacian, inputs, p, 0.0, Some(limits()?)),
        Protocol::Dc3 => {
            let psi = p.psi.as_ref().map_or(0.0, |s| s.value(t));
            cascaded_eval(state, t, laplacian, inputs, p, psi, None)
        }
        Protocol::Dcdisc => Err(Error::param(
            "protocol",
            "dcdisc is a discrete iteration; use discrete::dcdisc_step",
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitPolicy {
    /// `v(0) = 0`, and `z(0) = x(0)` where `z` exists.
    #[default]
    ZeroV,
    /// Caller-supplied `v(0)` (and optionally `z(0)`).
    Explicit,
}

/// Builds the initial state and returns the steady-state offset
/// `-(1/(αN)) Σ v^j(0)` the trajectory will settle at.
pub fn init_state(
    policy: InitPolicy,
    x0: &[f64],
    v0: Option<&[f64]>,
    z0: Option<&[f64]>,
    alpha: f64,
    with_z: bool,
) -> Result<(AgentState, f64)> {
    let n = x0.len();
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be > 0, got {alpha}")));
    }
    let dim = |what, s: &[f64]| {
        if s.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what,
                expected: n,
                found: s.len(),
            })
        }
    };
    let v = match (policy, v0) {
        (InitPolicy::ZeroV, _) | (InitPolicy::Explicit, None) => vec![0.0; n],
        (InitPolicy::Explicit, Some(v0)) => {
            dim("v0", v0)?;
            v0.to_vec()
        }
    };
    let z = if with_z {
        match (policy, z0) {
            (InitPolicy::Explicit, Some(z0)) => {
                dim("z0", z0)?;
                Some(z0.to_vec())
            }
            _ => Some(x0.to_vec()),
        }
    } else {
        None
    };
    let offset = -v.iter().sum::<f64>() / (alpha * n as f64);
    Ok((AgentState { x: x0.to_vec(), v, z }, offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preset, Edge, WeightedDigraph};

    fn pair() -> LaplacianMatrix {
        WeightedDigraph::from_edges(2, &[Edge(1, 2, 1.0), Edge(2, 1, 1.0)])
            .unwrap()
            .laplacian()
    }

    fn static_pair() -> InputSet {
        InputSet::new(vec![Signal::constant(1.0), Signal::constant(3.0)]).unwrap()
    }

    fn dc1_state(x: [f64; 2], v: [f64; 2]) -> AgentState {
        AgentState {
            x: x.to_vec(),
            v: v.to_vec(),
            z: None,
        }
    }

    #[test]
    fn dc1_fixed_point() {
        let p = AlgorithmParams::new(1.0, 1.0);
        let d = dc1_derivative(&dc1_state([2.0, 2.0], [-1.0, 1.0]), 0.0, &pair(), &static_pair(), &p).unwrap();
        assert_eq!(d.x, vec![0.0, 0.0]);
        assert_eq!(d.v, vec![0.0, 0.0]);
    }

    #[test]
    fn dc1_substitution() {
        let p = AlgorithmParams::new(1.0, 1.0);
        let d = dc1_derivative(&dc1_state([1.0, 3.0], [0.0, 0.0]), 0.0, &pair(), &static_pair(), &p).unwrap();
        assert_eq!(d.x, vec![2.0, -2.0]);
        assert_eq!(d.v, vec![-2.0, 2.0]);
    }

    #[test]
    fn dc1_single_agent_is_low_pass() {
        let l = WeightedDigraph::empty(1).unwrap().laplacian();
        let inputs = InputSet::new(vec![Signal::sine(1.0, 1.0, 0.0)]).unwrap();
        let p = AlgorithmParams::new(2.0, 5.0);
        let s = AgentState {
            x: vec![0.3],
            v: vec![0.7],
            z: None,
        };
        let t = 0.4;
        let d = dc1_derivative(&s, t, &l, &inputs, &p).unwrap();
        let expect = t.cos() - 2.0 * (0.3 - t.sin()) - 0.7;
        assert!((d.x[0] - expect).abs() < 1e-15);
        assert_eq!(d.v[0], 0.0);
    }

    #[test]
    fn dc1_dimension_mismatch() {
        let p = AlgorithmParams::new(1.0, 1.0);
        let s = AgentState {
            x: vec![0.0; 3],
            v: vec![0.0; 3],
            z: None,
        };
        assert!(matches!(
            dc1_derivative(&s, 0.0, &pair(), &static_pair(), &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn dc2_state(x: [f64; 2], v: [f64; 2], z: [f64; 2]) -> AgentState {
        AgentState {
            x: x.to_vec(),
            v: v.to_vec(),
            z: Some(z.to_vec()),
        }
    }

    #[test]
    fn dc2_information_phase_matches_dc1() {
        let p = AlgorithmParams::new(1.0, 1.0).with_constant_theta(&[0.5, 2.0]);
        let d = dc2_derivative(&dc2_state([0.0, 0.0], [0.0, 0.0], [1.0, 3.0]), 0.0, &pair(), &static_pair(), &p)
            .unwrap();
        assert_eq!(d.z.as_deref().unwrap(), &[2.0, -2.0]);
        assert_eq!(d.v, vec![-2.0, 2.0]);
        // motion phase: -θ(x - z) + ż
        assert_eq!(d.x, vec![-0.5 * -1.0 + 2.0, -2.0 * -3.0 - 2.0]);
    }

    #[test]
    fn dc2_x_equal_z_follows_z() {
        let p = AlgorithmParams::new(1.3, 0.7).with_constant_theta(&[0.5, 2.0]);
        let d = dc2_derivative(&dc2_state([0.4, -1.0], [0.2, 0.1], [0.4, -1.0]), 0.0, &pair(), &static_pair(), &p)
            .unwrap();
        assert_eq!(d.x, d.z.unwrap());
    }

    #[test]
    fn dc2_equilibrium() {
        let p = AlgorithmParams::new(1.0, 1.0).with_constant_theta(&[1.0, 1.0]);
        let d = dc2_derivative(&dc2_state([2.0, 2.0], [-1.0, 1.0], [2.0, 2.0]), 0.0, &pair(), &static_pair(), &p)
            .unwrap();
        assert!(d.to_flat().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn dc2_theta_bounds_checked() {
        let p = AlgorithmParams::new(1.0, 1.0).with_theta(vec![
            ThetaGain::Scheduled {
                signal: Signal::ramp(1.0),
                lower: 0.1,
                upper: 2.0,
            },
            ThetaGain::Constant(1.0),
        ]);
        let s = dc2_state([0.0, 0.0], [0.0, 0.0], [0.0, 0.0]);
        assert!(dc2_derivative(&s, 1.0, &pair(), &static_pair(), &p).is_ok());
        assert!(matches!(
            dc2_derivative(&s, 3.0, &pair(), &static_pair(), &p),
            Err(Error::ThetaOutOfBounds { agent: 1, .. })
        ));
    }

    #[test]
    fn dc3_zero_mask_is_dc2() {
        let p = AlgorithmParams::new(1.0, 2.0).with_constant_theta(&[1.0, 3.0]);
        let s = dc2_state([0.1, 0.9], [0.3, -0.2], [1.2, 0.5]);
        let (d3, msgs) = dc3_derivative(&s, 0.5, &pair(), &static_pair(), &p).unwrap();
        let d2 = dc2_derivative(&s, 0.5, &pair(), &static_pair(), &p).unwrap();
        assert_eq!(d3, d2);
        assert_eq!(msgs.iter().map(|m| m.payload).collect::<Vec<_>>(), vec![1.2, 0.5]);
    }

    #[test]
    fn dc3_mask_shifts_payload() {
        let p = AlgorithmParams::new(1.0, 2.0)
            .with_constant_theta(&[1.0, 3.0])
            .with_psi(Signal::constant(0.3));
        let s = dc2_state([0.0, 0.0], [0.0, 0.0], [1.2, 0.0]);
        let (_, msgs) = dc3_derivative(&s, 0.0, &pair(), &static_pair(), &p).unwrap();
        assert!((msgs[0].payload - 1.5).abs() < 1e-15);
    }

    #[test]
    fn dc3_constant_mask_matches_dc2() {
        // powers of two keep the masked sums exact
        let l = preset("fig1a").unwrap().laplacian();
        let inputs = InputSet::new((0..6).map(|k| Signal::constant(k as f64)).collect()).unwrap();
        let s = AgentState {
            x: vec![0.5, 1.0, -2.0, 0.25, 4.0, 3.0],
            v: vec![0.0, 1.0, -1.0, 0.5, -0.5, 0.0],
            z: Some(vec![1.0, 2.0, 0.5, -1.0, 0.0, 2.5]),
        };
        let p = AlgorithmParams::new(1.0, 1.0).with_constant_theta(&[1.0; 6]);
        let d2 = dc2_derivative(&s, 0.0, &l, &inputs, &p).unwrap();
        let (d3, _) = dc3_derivative(&s, 0.0, &l, &inputs, &p.with_psi(Signal::constant(8.0))).unwrap();
        assert_eq!(d2, d3);
    }

    #[test]
    fn saturation_examples() {
        assert_eq!(apply_saturation(20.0, 15.0).unwrap(), 15.0);
        assert_eq!(apply_saturation(-20.0, 15.0).unwrap(), -15.0);
        assert_eq!(apply_saturation(3.0, 15.0).unwrap(), 3.0);
        assert!(apply_saturation(3.0, 0.0).is_err());
    }

    #[test]
    fn saturated_commands_are_clamped() {
        let p = AlgorithmParams::new(1.0, 1.0)
            .with_constant_theta(&[1.0, 1.0])
            .with_sat_limits(vec![0.5, 0.5]);
        let s = dc2_state([10.0, -10.0], [0.0, 0.0], [1.0, 3.0]);
        let e = evaluate(Protocol::Dc2Sat, &s, 0.0, &pair(), &static_pair(), &p).unwrap();
        assert_eq!(e.commands, vec![-0.5, 0.5]);
        // the information phase is untouched
        assert_eq!(e.derivative.z.as_deref().unwrap(), &[2.0, -2.0]);

        let s = dc1_state([1.0, 3.0], [0.0, 0.0]);
        let e = evaluate(Protocol::Dc1Sat, &s, 0.0, &pair(), &static_pair(), &p).unwrap();
        assert_eq!(e.commands, vec![0.5, -0.5]);
        assert_eq!(e.derivative.v, vec![-2.0, 2.0]);
    }

    #[test]
    fn init_policies() {
        let (s, off) = init_state(InitPolicy::ZeroV, &[1.0, 2.0], Some(&[5.0, 5.0]), None, 1.0, true).unwrap();
        assert_eq!(s.v, vec![0.0, 0.0]);
        assert_eq!(s.z.as_deref().unwrap(), &[1.0, 2.0]);
        assert_eq!(off, 0.0);

        let (_, off) = init_state(InitPolicy::Explicit, &[0.0, 0.0], Some(&[1.0, 1.0]), None, 1.0, false).unwrap();
        assert_eq!(off, -1.0);

        let (_, off) = init_state(InitPolicy::Explicit, &[0.0, 0.0], Some(&[2.0, -2.0]), None, 1.0, false).unwrap();
        assert_eq!(off, 0.0);

        assert!(matches!(
            init_state(InitPolicy::Explicit, &[0.0, 0.0], Some(&[1.0]), None, 1.0, false),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
