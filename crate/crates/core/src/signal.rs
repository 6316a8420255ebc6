//! Per-agent reference inputs with their time derivatives, network averages,
//! the disagreement statistic `γ = sup ‖Π_N u̇‖`, and the input presets of the
//! bundled simulation studies.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn one() -> f64 {
    1.0
}

/// A scalar input signal `u(t)`, `t ≥ 0`.
///
/// Serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Signal {
    Constant {
        value: f64,
    },
    /// `amplitude · sin(frequency · t + phase)`
    Sine {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amplitude · cos(frequency · t + phase)`
    Cosine {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amplitude · atan(rate · t + shift)`
    Atan {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        rate: f64,
        #[serde(default)]
        shift: f64,
    },
    /// `amplitude · tanh(rate · t + shift)`
    Tanh {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        rate: f64,
        #[serde(default)]
        shift: f64,
    },
    /// `amplitude / (t + shift)^power`, requires `shift > 0`.
    ReciprocalPower {
        #[serde(default = "one")]
        amplitude: f64,
        shift: f64,
        power: i32,
    },
    /// `amplitude · exp(-rate · t)`
    ExpDecay {
        #[serde(default = "one")]
        amplitude: f64,
        rate: f64,
    },
    /// `slope · t`
    Ramp {
        slope: f64,
    },
    /// `H_sq(t) · signal(t)` where the square wave `H_sq` is 1 on
    /// `[2k·period, (2k+1)·period)` and 0 otherwise.
    StepModulated {
        period: f64,
        signal: Box<Signal>,
    },
    /// Zero-order hold: `values[m]` on `[m·hold, (m+1)·hold)`; the last value
    /// is held past the end.
    Sampled {
        hold: f64,
        values: Vec<f64>,
    },
    Sum {
        terms: Vec<Signal>,
    },
    /// Replaces the analytic derivative of `signal` by a central difference
    /// with half-width `h`.
    CentralDifference {
        h: f64,
        signal: Box<Signal>,
    },
}

impl Signal {
    pub fn constant(value: f64) -> Self {
        Signal::Constant { value }
    }

    pub fn sine(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Signal::Sine {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn cosine(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Signal::Cosine {
            amplitude,
            frequency,
            phase,
        }
    }

    pub fn atan(amplitude: f64, rate: f64, shift: f64) -> Self {
        Signal::Atan {
            amplitude,
            rate,
            shift,
        }
    }

    pub fn tanh(amplitude: f64, rate: f64, shift: f64) -> Self {
        Signal::Tanh {
            amplitude,
            rate,
            shift,
        }
    }

    pub fn reciprocal_power(amplitude: f64, shift: f64, power: i32) -> Self {
        Signal::ReciprocalPower {
            amplitude,
            shift,
            power,
        }
    }

    pub fn exp_decay(amplitude: f64, rate: f64) -> Self {
        Signal::ExpDecay { amplitude, rate }
    }

    pub fn ramp(slope: f64) -> Self {
        Signal::Ramp { slope }
    }

    pub fn sum(terms: Vec<Signal>) -> Self {
        Signal::Sum { terms }
    }

    pub fn step_modulated(period: f64, signal: Signal) -> Self {
        Signal::StepModulated {
            period,
            signal: Box::new(signal),
        }
    }

    pub fn sampled(hold: f64, values: Vec<f64>) -> Self {
        Signal::Sampled { hold, values }
    }

    pub fn central_difference(h: f64, signal: Signal) -> Self {
        Signal::CentralDifference {
            h,
            signal: Box::new(signal),
        }
    }

    /// Checks parameter domains (positive periods, holds and step widths,
    /// a pole-free reciprocal term).
    pub fn validate(&self) -> Result<()> {
        match self {
            Signal::ReciprocalPower { shift, .. } if !(*shift > 0.0) => {
                Err(Error::param("shift", "reciprocal_power needs shift > 0"))
            }
            Signal::StepModulated { period, signal } => {
                if !(*period > 0.0) {
                    return Err(Error::param("period", "must be > 0"));
                }
                signal.validate()
            }
            Signal::Sampled { hold, values } => {
                if !(*hold > 0.0) {
                    return Err(Error::param("hold", "must be > 0"));
                }
                if values.is_empty() {
                    return Err(Error::param("values", "needs at least one sample"));
                }
                Ok(())
            }
            Signal::Sum { terms } => terms.iter().try_for_each(Signal::validate),
            Signal::CentralDifference { h, signal } => {
                if !(*h > 0.0) {
                    return Err(Error::param("h", "must be > 0"));
                }
                signal.validate()
            }
            _ => Ok(()),
        }
    }

    /// `(u(t), u̇(t))`. At a jump of a piecewise signal the right-hand value
    /// and right-hand derivative are returned.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.eval_unchecked(t))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval_unchecked(t).0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval_unchecked(t).1
    }

    /// Whether the derivative comes from a closed form everywhere in the tree.
    pub fn has_analytic_derivative(&self) -> bool {
        match self {
            Signal::CentralDifference { .. } => false,
            Signal::StepModulated { signal, .. } => signal.has_analytic_derivative(),
            Signal::Sum { terms } => terms.iter().all(Signal::has_analytic_derivative),
            _ => true,
        }
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> (f64, f64) {
        match *self {
            Signal::Constant { value } => (value, 0.0),
            Signal::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                let arg = frequency * t + phase;
                (amplitude * arg.sin(), amplitude * frequency * arg.cos())
            }
            Signal::Cosine {
                amplitude,
                frequency,
                phase,
            } => {
                let arg = frequency * t + phase;
                (amplitude * arg.cos(), -amplitude * frequency * arg.sin())
            }
            Signal::Atan {
                amplitude,
                rate,
                shift,
            } => {
                let arg = rate * t + shift;
                (amplitude * arg.atan(), amplitude * rate / (1.0 + arg * arg))
            }
            Signal::Tanh {
                amplitude,
                rate,
                shift,
            } => {
                let th = (rate * t + shift).tanh();
                (amplitude * th, amplitude * rate * (1.0 - th * th))
            }
            Signal::ReciprocalPower {
                amplitude,
                shift,
                power,
            } => {
                let base = t + shift;
                let v = amplitude * base.powi(-power);
                (v, -(power as f64) * v / base)
            }
            Signal::ExpDecay { amplitude, rate } => {
                let v = amplitude * (-rate * t).exp();
                (v, -rate * v)
            }
            Signal::Ramp { slope } => (slope * t, slope),
            Signal::StepModulated { period, ref signal } => {
                if square_wave(t, period) {
                    signal.eval_unchecked(t)
                } else {
                    (0.0, 0.0)
                }
            }
            Signal::Sampled { hold, ref values } => {
                let m = sample_index(t, hold).min(values.len() - 1);
                (values[m], 0.0)
            }
            Signal::Sum { ref terms } => terms.iter().fold((0.0, 0.0), |(v, d), s| {
                let (sv, sd) = s.eval_unchecked(t);
                (v + sv, d + sd)
            }),
            Signal::CentralDifference { h, ref signal } => {
                let v = signal.value(t);
                let d = (signal.value(t + h) - signal.value(t - h)) / (2.0 * h);
                (v, d)
            }
        }
    }
}

fn square_wave(t: f64, period: f64) -> bool {
    (t / period + 1e-12).floor() as i64 % 2 == 0
}

/// Index of the hold interval containing `t`, right-continuous at the
/// boundaries even when `t` carries rounding error from `k·δ`.
pub(crate) fn sample_index(t: f64, hold: f64) -> usize {
    (t / hold + 1e-9).floor().max(0.0) as usize
}

/// The inputs of all `N` agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputSet {
    pub signals: Vec<Signal>,
}

impl InputSet {
    pub fn new(signals: Vec<Signal>) -> Result<Self> {
        if signals.is_empty() {
            return Err(Error::param("inputs", "input set is empty"));
        }
        for s in &signals {
            s.validate()?;
        }
        Ok(InputSet { signals })
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    /// Writes `u(t)` and `u̇(t)` into the provided buffers.
    pub fn eval_into(&self, t: f64, u: &mut [f64], udot: &mut [f64]) {
        for (i, s) in self.signals.iter().enumerate() {
            let (v, d) = s.eval_unchecked(t);
            u[i] = v;
            udot[i] = d;
        }
    }

    pub fn values(&self, t: f64) -> Vec<f64> {
        self.signals.iter().map(|s| s.value(t)).collect()
    }

    pub fn derivatives(&self, t: f64) -> Vec<f64> {
        self.signals.iter().map(|s| s.derivative(t)).collect()
    }

    /// `((1/N) Σ u^j(t), (1/N) Σ u̇^j(t))`.
    pub fn network_average(&self, t: f64) -> Result<(f64, f64)> {
        if self.signals.is_empty() {
            return Err(Error::param("inputs", "input set is empty"));
        }
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let n = self.signals.len() as f64;
        let (v, d) = self.signals.iter().fold((0.0, 0.0), |(v, d), s| {
            let (sv, sd) = s.eval_unchecked(t);
            (v + sv, d + sd)
        });
        Ok((v / n, d / n))
    }

    /// `‖Π_N u̇(t)‖`.
    pub fn projected_derivative_norm(&self, t: f64) -> f64 {
        projected_norm(&self.derivatives(t))
    }

    /// Grid estimate of `γ = sup ‖Π_N u̇‖` and `μ^i = sup |u̇^i|`.
    pub fn disagreement_gamma(&self, grid: &[f64]) -> Result<SignalStats> {
        if grid.is_empty() {
            return Err(Error::GridTooShort("empty grid".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::GridTooShort("grid must be strictly increasing".into()));
        }
        let mut gamma: f64 = 0.0;
        let mut mu = vec![0.0_f64; self.len()];
        for &t in grid {
            let d = self.derivatives(t);
            gamma = gamma.max(projected_norm(&d));
            for (m, di) in mu.iter_mut().zip(&d) {
                *m = m.max(di.abs());
            }
        }
        Ok(SignalStats {
            gamma,
            mu,
            grid: grid.to_vec(),
        })
    }
}

/// Euclidean norm of `Π_N x = x - mean(x)·1`.
pub fn projected_norm(x: &[f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalStats {
    pub gamma: f64,
    pub mu: Vec<f64>,
    pub grid: Vec<f64>,
}

/// Names accepted by [`preset_scenario`].
pub const PRESET_NAMES: [&str; 6] = [
    "case1",
    "case2",
    "sampled_bias",
    "saturation",
    "static",
    "offset_sines",
];

/// Per-agent biases of the sampled monitoring process.
pub const SAMPLED_BIASES: [f64; 6] = [-0.55, 1.0, 0.6, -0.9, -0.6, 0.4];
/// Sampling interval of the sampled monitoring process, seconds.
pub const SAMPLE_INTERVAL: f64 = 2.0;
/// Samples generated by the `sampled_bias` preset (covers 256 s).
pub const DEFAULT_SAMPLE_COUNT: usize = 128;

/// Input presets for six agents.
///
/// * `case1`: `5 sin t` plus per-agent terms that converge to distinct constants
/// * `case2`: unrelated slowly varying inputs with bounded derivative disagreement
/// * `sampled_bias`: zero-order-held samples `2 + sin(ω t_m + φ) + b^i`
/// * `saturation`: inputs switched on and off by a 10 s square wave
/// * `static`: constants `1..6`
/// * `offset_sines`: `sin t` plus the `case1` constant offsets
pub fn preset_scenario(name: &str, seed: u64) -> Result<InputSet> {
    let s = |a, f, p| Signal::sine(a, f, p);
    let c = Signal::constant;
    let signals = match name {
        "case1" => vec![
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::reciprocal_power(1.0, 2.0, 1), c(3.0)]),
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::reciprocal_power(1.0, 2.0, 2), c(4.0)]),
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::reciprocal_power(1.0, 2.0, 3), c(5.0)]),
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::exp_decay(10.0, 1.0), c(4.0)]),
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::atan(1.0, 1.0, 0.0), c(-1.5)]),
            Signal::sum(vec![s(5.0, 1.0, 0.0), Signal::tanh(-1.0, 1.0, 0.0), c(1.0)]),
        ],
        "case2" => vec![
            s(0.55, 0.8, 0.0),
            Signal::sum(vec![s(0.5, 0.7, 0.0), Signal::cosine(0.5, 0.6, 0.0)]),
            Signal::ramp(0.1),
            Signal::atan(1.0, 0.5, 0.0),
            Signal::cosine(0.1, 2.0, 0.0),
            s(0.5, 0.5, 0.0),
        ],
        "sampled_bias" => return Ok(sampled_bias(seed, DEFAULT_SAMPLE_COUNT)),
        "saturation" => {
            let inner = [
                Signal::sum(vec![Signal::cosine(4.0, 0.5, 0.0), c(10.0)]),
                Signal::sum(vec![
                    Signal::tanh(4.0, 1.0, -5.0),
                    Signal::tanh(4.0, 1.0, -25.0),
                    c(5.0),
                ]),
                Signal::sum(vec![s(4.0, 0.5, 1.0), c(8.0)]),
                Signal::sum(vec![Signal::atan(4.0, 0.5, -5.0), c(-6.0)]),
                Signal::sum(vec![s(1.0, 2.0, 0.0), c(-5.0)]),
                Signal::sum(vec![Signal::cosine(4.0, 0.5, 0.0), c(7.0)]),
            ];
            inner
                .into_iter()
                .map(|sig| Signal::step_modulated(10.0, sig))
                .collect()
        }
        "static" => (1..=6).map(|k| c(k as f64)).collect(),
        "offset_sines" => [3.0, 4.0, 5.0, 4.0, -1.5, 1.0]
            .into_iter()
            .map(|off| Signal::sum(vec![s(1.0, 1.0, 0.0), c(off)]))
            .collect(),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    InputSet::new(signals)
}

/// The sampled monitoring process: agent `i` sees
/// `2 + sin(ω_m · m·Δt + φ_m) + b^i`, held for `Δt = 2 s`.
///
/// For each sample `m` one Box–Muller pair is drawn from a ChaCha8 stream
/// seeded with `seed`; the first normal scales to `ω_m ~ N(0, 0.25)` and the
/// second to `φ_m ~ N(0, (π/2)²)`.
pub fn sampled_bias(seed: u64, samples: usize) -> InputSet {
    let common = sampled_common_process(seed, samples);
    let signals = SAMPLED_BIASES
        .iter()
        .map(|&b| Signal::sampled(SAMPLE_INTERVAL, common.iter().map(|c| c + b).collect()))
        .collect();
    InputSet { signals }
}

/// The bias-free samples `2 + sin(ω_m t_m + φ_m)`.
pub fn sampled_common_process(seed: u64, samples: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|m| {
            let (n0, n1) = box_muller(&mut rng);
            let omega = 0.5 * n0;
            let phi = FRAC_PI_2 * n1;
            let t_m = m as f64 * SAMPLE_INTERVAL;
            2.0 + (omega * t_m + phi).sin()
        })
        .collect()
}

/// Two independent standard normals from two uniforms.
pub fn box_muller<R: Rng>(rng: &mut R) -> (f64, f64) {
    // u1 in (0, 1] keeps the logarithm finite.
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let a = std::f64::consts::TAU * u2;
    (r * a.cos(), r * a.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_agent1_at_zero() {
        let set = preset_scenario("case1", 0).unwrap();
        let (u, du) = set.signals[0].eval(0.0).unwrap();
        assert!((u - 3.5).abs() < 1e-15);
        assert!((du - 4.75).abs() < 1e-15);
    }

    #[test]
    fn case1_all_agents_at_zero() {
        let set = preset_scenario("case1", 0).unwrap();
        let expect = [3.5, 4.25, 5.125, 14.0, -1.5, 1.0];
        for (got, want) in set.values(0.0).iter().zip(expect) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn constant_signal() {
        let s = Signal::constant(2.0);
        assert_eq!(s.eval(0.0).unwrap(), (2.0, 0.0));
        assert_eq!(s.eval(17.3).unwrap(), (2.0, 0.0));
    }

    #[test]
    fn negative_time_rejected() {
        assert!(matches!(
            Signal::constant(1.0).eval(-0.1),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn sampled_is_piecewise_constant() {
        let set = preset_scenario("sampled_bias", 7).unwrap();
        let s = &set.signals[0];
        let (a, da) = s.eval(0.5).unwrap();
        let (b, db) = s.eval(1.9).unwrap();
        assert_eq!(a, b);
        assert_eq!((da, db), (0.0, 0.0));
        // right-continuous at the sampling instant
        assert_eq!(s.value(2.0), s.value(3.0));
    }

    #[test]
    fn sampled_bias_is_seeded() {
        assert_eq!(
            preset_scenario("sampled_bias", 11).unwrap(),
            preset_scenario("sampled_bias", 11).unwrap()
        );
        assert_ne!(
            preset_scenario("sampled_bias", 11).unwrap(),
            preset_scenario("sampled_bias", 12).unwrap()
        );
    }

    #[test]
    fn sampled_biases_offset_a_common_process() {
        let set = preset_scenario("sampled_bias", 3).unwrap();
        for t in [0.0, 4.0, 9.5] {
            let v = set.values(t);
            for i in 1..6 {
                let diff = v[i] - v[0];
                assert!((diff - (SAMPLED_BIASES[i] - SAMPLED_BIASES[0])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn saturation_preset_square_wave() {
        let set = preset_scenario("saturation", 0).unwrap();
        let (u5, _) = set.signals[4].eval(0.0).unwrap();
        assert!((u5 + 5.0).abs() < 1e-15);
        // off on [10, 20), back on at 20
        assert_eq!(set.signals[0].eval(10.0).unwrap(), (0.0, 0.0));
        assert_eq!(set.signals[0].eval(19.99).unwrap(), (0.0, 0.0));
        let (v, _) = set.signals[0].eval(20.0).unwrap();
        assert!((v - (4.0 * 10.0_f64.cos() + 10.0)).abs() < 1e-12);
    }

    #[test]
    fn averages() {
        let set = InputSet::new(vec![Signal::constant(1.0), Signal::constant(3.0)]).unwrap();
        assert_eq!(set.network_average(4.0).unwrap(), (2.0, 0.0));
        let s = Signal::sine(2.0, 0.3, 0.1);
        let same = InputSet::new(vec![s.clone(); 4]).unwrap();
        let (avg, davg) = same.network_average(1.7).unwrap();
        let (v, d) = s.eval(1.7).unwrap();
        assert!((avg - v).abs() < 1e-15 && (davg - d).abs() < 1e-15);
    }

    #[test]
    fn case1_constant_offsets_average() {
        let offsets: f64 = [3.0, 4.0, 5.0, 4.0, -1.5, 1.0].iter().sum::<f64>() / 6.0;
        assert!((offsets - 15.5 / 6.0).abs() < 1e-15);
        // far out every transient term has settled except atan → π/2
        let set = preset_scenario("case1", 0).unwrap();
        let t = 1.0e7;
        let (avg, _) = set.network_average(t).unwrap();
        let expect = 5.0 * t.sin() + offsets + (std::f64::consts::FRAC_PI_2 - 1.0) / 6.0;
        assert!((avg - expect).abs() < 1e-6);
    }

    #[test]
    fn gamma_examples() {
        let grid: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let same = InputSet::new(vec![Signal::sine(1.0, 1.0, 0.0); 3]).unwrap();
        assert!(same.disagreement_gamma(&grid).unwrap().gamma < 1e-15);

        let pair = InputSet::new(vec![Signal::ramp(1.0), Signal::ramp(-1.0)]).unwrap();
        let stats = pair.disagreement_gamma(&grid).unwrap();
        assert!((stats.gamma - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(stats.mu, vec![1.0, 1.0]);

        let fixed = preset_scenario("static", 0).unwrap();
        let stats = fixed.disagreement_gamma(&grid).unwrap();
        assert_eq!(stats.gamma, 0.0);
        assert!(stats.mu.iter().all(|m| *m == 0.0));
    }

    #[test]
    fn json_shape() {
        let s: Signal =
            serde_json::from_str(r#"{"kind": "sine", "params": {"amplitude": 5, "frequency": 1}}"#).unwrap();
        assert_eq!(s, Signal::sine(5.0, 1.0, 0.0));
        assert!(serde_json::from_str::<Signal>(r#"{"kind": "sine", "params": {"amp": 5}}"#).is_err());
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(
            preset_scenario("case9", 0),
            Err(Error::UnknownPreset(_))
        ));
    }
}
