//! Closed-form guarantees of the protocols: zero-system equilibrium,
//! transient envelope `s(t)`, the tracking-error envelope, ultimate bounds,
//! convergence rates, and numeric checks of the zero-error input classes.
//!
//! Everything here is a scalar envelope evaluated for comparison against
//! simulated trajectories.

use crate::error::{Error, Result};
use crate::graph::SpectralData;
use crate::signal::{projected_norm, InputSet};

/// Relative gap `|α - βλ̂| < CONFLUENT_TOL·α` selects the confluent branch.
pub const CONFLUENT_TOL: f64 = 1e-9;

/// User-supplied constants for switching networks: `‖Φ(t, t0)‖ ≤ κ e^{-βλ̂_σ (t - t0)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchingConstants {
    pub kappa: f64,
    pub lambda_hat_sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub alpha: f64,
    pub beta: f64,
    pub lambda_hat_2: f64,
    pub re_lambda_2: f64,
    /// `‖x(0) - avg(u(0))·1‖`
    pub y0_norm: f64,
    /// `‖v(0) - Π_N(u̇(0) + αu(0))‖`
    pub w0_norm: f64,
    /// `‖u̇(0)‖`
    pub udot0_norm: f64,
    pub gamma: f64,
    pub switching: Option<SwitchingConstants>,
}

impl BoundInputs {
    /// Builds the norms from an initial state `(x0, v0)` and the inputs at `t = 0`.
    pub fn from_initial(
        alpha: f64,
        beta: f64,
        spectral: &SpectralData,
        x0: &[f64],
        v0: &[f64],
        inputs: &InputSet,
        gamma: f64,
    ) -> Self {
        let u0 = inputs.values(0.0);
        let du0 = inputs.derivatives(0.0);
        let avg = u0.iter().sum::<f64>() / u0.len() as f64;
        let y0_norm = x0.iter().map(|x| (x - avg).powi(2)).sum::<f64>().sqrt();
        let mix: Vec<f64> = du0.iter().zip(&u0).map(|(d, u)| d + alpha * u).collect();
        let mean_mix = mix.iter().sum::<f64>() / mix.len() as f64;
        let w0_norm = v0
            .iter()
            .zip(&mix)
            .map(|(v, m)| (v - (m - mean_mix)).powi(2))
            .sum::<f64>()
            .sqrt();
        let udot0_norm = du0.iter().map(|d| d * d).sum::<f64>().sqrt();
        BoundInputs {
            alpha,
            beta,
            lambda_hat_2: spectral.lambda_hat_2,
            re_lambda_2: spectral.re_lambda_2,
            y0_norm,
            w0_norm,
            udot0_norm,
            gamma,
            switching: None,
        }
    }

    /// `(βλ̂, κ)`, using the switching constants when present.
    fn rate_and_kappa(&self) -> (f64, f64) {
        match self.switching {
            Some(c) => (self.beta * c.lambda_hat_sigma, c.kappa),
            None => (self.beta * self.lambda_hat_2, 1.0),
        }
    }

    fn check(&self) -> Result<()> {
        let (rate, kappa) = self.rate_and_kappa();
        if !(self.alpha > 0.0) {
            return Err(Error::param("alpha", "must be > 0"));
        }
        if !(rate > 0.0) {
            return Err(Error::param("lambda_hat", "spectral gap times beta must be > 0"));
        }
        if !(kappa > 0.0) {
            return Err(Error::param("kappa", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// Limits of the zero system: `y → -(1/(αN)) Σ w^j(0)`, `w → (1/N) Σ w^j(0)`.
pub fn zero_system_equilibrium(w0: &[f64], alpha: f64) -> Result<(f64, f64)> {
    if w0.is_empty() {
        return Err(Error::param("w0", "empty vector"));
    }
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be > 0"));
    }
    let mean = w0.iter().sum::<f64>() / w0.len() as f64;
    Ok((-mean / alpha, mean))
}

/// `(e^{-αt} - e^{-rt}) / (r - α)`, or `t e^{-rt}` when `α ≈ r`.
fn branch_kernel(alpha: f64, rate: f64, t: f64) -> f64 {
    if (alpha - rate).abs() < CONFLUENT_TOL * alpha {
        t * (-rate * t).exp()
    } else {
        ((-alpha * t).exp() - (-rate * t).exp()) / (rate - alpha)
    }
}

/// Transient envelope of the zero system:
///
/// ```text
/// s(t) = (e^{-αt} + κe^{-βλ̂t})‖y0‖ + α⁻¹e^{-αt}‖w0‖ + κ·K(t)(α‖y0‖ + ‖w0‖)
/// ```
///
/// with `K` the branch kernel above and `κ = 1` on fixed graphs.
pub fn transient_bound_s(t: f64, b: &BoundInputs) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    b.check()?;
    let (rate, kappa) = b.rate_and_kappa();
    let ea = (-b.alpha * t).exp();
    let er = (-rate * t).exp();
    Ok((ea + kappa * er) * b.y0_norm
        + ea * b.w0_norm / b.alpha
        + kappa * branch_kernel(b.alpha, rate, t) * (b.alpha * b.y0_norm + b.w0_norm))
}

/// Tracking-error envelope at `t`:
/// `s(t) + κ∫₀ᵗ e^{-βλ̂(t-τ)} ‖Π_N u̇(τ)‖ dτ + κK(t)‖u̇(0)‖`, with the
/// integral computed by the composite trapezoid rule on `panels` panels.
pub fn tracking_bound(t: f64, b: &BoundInputs, pi_udot_norm: impl Fn(f64) -> f64, panels: usize) -> Result<f64> {
    let s = transient_bound_s(t, b)?;
    let (rate, kappa) = b.rate_and_kappa();
    let integral = if t == 0.0 || panels == 0 {
        0.0
    } else {
        let h = t / panels as f64;
        let f = |tau: f64| (-rate * (t - tau)).exp() * pi_udot_norm(tau);
        let inner: f64 = (1..panels).map(|k| f(k as f64 * h)).sum();
        h * (0.5 * f(0.0) + inner + 0.5 * f(t))
    };
    Ok(s + kappa * integral + kappa * branch_kernel(b.alpha, rate, t) * b.udot0_norm)
}

/// The tracking envelope on a whole grid starting at `t = 0`, with
/// `pi_udot_norm[k] = ‖Π_N u̇(grid[k])‖`. The integral is propagated
/// recursively with the trapezoid rule, so the cost is linear in the grid.
pub fn tracking_bound_curve(grid: &[f64], b: &BoundInputs, pi_udot_norm: &[f64]) -> Result<BoundCurve> {
    if grid.len() != pi_udot_norm.len() {
        return Err(Error::DimensionMismatch {
            what: "tracking bound samples",
            expected: grid.len(),
            found: pi_udot_norm.len(),
        });
    }
    if grid.first().is_some_and(|t| *t != 0.0) {
        return Err(Error::param("grid", "must start at t = 0"));
    }
    let (rate, kappa) = b.rate_and_kappa();
    let mut values = Vec::with_capacity(grid.len());
    let mut integral = 0.0;
    for k in 0..grid.len() {
        if k > 0 {
            let h = grid[k] - grid[k - 1];
            let decay = (-rate * h).exp();
            integral = decay * integral + 0.5 * h * (decay * pi_udot_norm[k - 1] + pi_udot_norm[k]);
        }
        let t = grid[k];
        values.push(
            transient_bound_s(t, b)? + kappa * integral + kappa * branch_kernel(b.alpha, rate, t) * b.udot0_norm,
        );
    }
    Ok(BoundCurve {
        grid: grid.to_vec(),
        values,
    })
}

/// Transient envelope sampled on a grid.
pub fn transient_bound_curve(grid: &[f64], b: &BoundInputs) -> Result<BoundCurve> {
    let values = grid
        .iter()
        .map(|&t| transient_bound_s(t, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        grid: grid.to_vec(),
        values,
    })
}

/// `γ / (βλ̂₂)`, or `γ / (δβλ̂₂)` for the discrete iteration.
pub fn ultimate_bound(beta: f64, lambda_hat_2: f64, gamma: f64, delta: Option<f64>) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::param("beta", "must be > 0"));
    }
    if !(lambda_hat_2 > 0.0) {
        return Err(Error::param("lambda_hat_2", "must be > 0"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::param("gamma", "must be >= 0"));
    }
    let scale = match delta {
        Some(d) if !(d > 0.0) => return Err(Error::param("delta", "must be > 0")),
        Some(d) => d,
        None => 1.0,
    };
    Ok(gamma / (scale * beta * lambda_hat_2))
}

/// `(min{α, β Re λ₂}, min{α, βλ̂₂})`, each further capped by `θ_min` when given.
pub fn convergence_rate(
    alpha: f64,
    beta: f64,
    re_lambda_2: f64,
    lambda_hat_2: f64,
    theta_min: Option<f64>,
) -> Result<(f64, f64)> {
    for (name, v) in [
        ("alpha", alpha),
        ("beta", beta),
        ("re_lambda_2", re_lambda_2),
        ("lambda_hat_2", lambda_hat_2),
        ("theta_min", theta_min.unwrap_or(1.0)),
    ] {
        if !(v > 0.0) {
            return Err(Error::param(name, "must be > 0"));
        }
    }
    let cap = theta_min.unwrap_or(f64::INFINITY);
    Ok((
        alpha.min(beta * re_lambda_2).min(cap),
        alpha.min(beta * lambda_hat_2).min(cap),
    ))
}

/// Spread tolerance for declaring that per-agent expressions share a common limit.
pub const COMMON_LIMIT_TOL: f64 = 1e-3;

/// Outcome of one zero-error condition. This is numeric evidence over a
/// finite tail window, not a proof of convergence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// Largest spread over the first tenth of the tail window.
    pub initial_spread: f64,
    /// Largest spread over the last tenth of the tail window.
    pub final_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroErrorVerdict {
    /// `u̇^i + αu^i` (continuous) or `Δu^i(k) + δαu^i(k)` (discrete) share a limit.
    pub condition_a: ConditionVerdict,
    /// `ü^i + αu̇^i` or `Δu^i(k+1) - Δu^i(k) + δαΔu^i(k)` share a limit.
    pub condition_b: ConditionVerdict,
    pub discrete: bool,
}

impl ZeroErrorVerdict {
    pub fn either_holds(&self) -> bool {
        self.condition_a.holds || self.condition_b.holds
    }
}

/// Minimum number of tail samples for a verdict.
const MIN_TAIL_SAMPLES: usize = 10;
/// Step for differencing `u̇` into `ü`.
const SECOND_DERIVATIVE_H: f64 = 1e-4;

/// Decides the zero-error input conditions on `grid ∩ [tail_start, ∞)`.
/// With `delta`, the discrete analogues are evaluated on `k = round(t/δ)`.
pub fn zero_error_class_check(
    inputs: &InputSet,
    alpha: f64,
    grid: &[f64],
    tail_start: f64,
    delta: Option<f64>,
) -> Result<ZeroErrorVerdict> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be > 0"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridTooShort("grid must be strictly increasing".into()));
    }
    let tail: Vec<f64> = grid.iter().copied().filter(|t| *t >= tail_start).collect();
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(Error::GridTooShort(format!(
            "{} samples at or after tail_start {tail_start}, need {MIN_TAIL_SAMPLES}",
            tail.len()
        )));
    }
    let spread = |v: &[f64]| {
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    };
    let (a, b): (Vec<f64>, Vec<f64>) = match delta {
        None => tail
            .iter()
            .map(|&t| {
                let u = inputs.values(t);
                let du = inputs.derivatives(t);
                let h = SECOND_DERIVATIVE_H.min(t.max(SECOND_DERIVATIVE_H));
                let dp = inputs.derivatives(t + h);
                let dm = inputs.derivatives((t - h).max(0.0));
                let span = t + h - (t - h).max(0.0);
                let fa: Vec<f64> = du.iter().zip(&u).map(|(d, u)| d + alpha * u).collect();
                let fb: Vec<f64> = (0..u.len())
                    .map(|i| (dp[i] - dm[i]) / span + alpha * du[i])
                    .collect();
                (spread(&fa), spread(&fb))
            })
            .unzip(),
        Some(d) => {
            if !(d > 0.0) {
                return Err(Error::param("delta", "must be > 0"));
            }
            tail.iter()
                .map(|&t| {
                    let k = (t / d).round();
                    let u0 = inputs.values(k * d);
                    let u1 = inputs.values((k + 1.0) * d);
                    let u2 = inputs.values((k + 2.0) * d);
                    let n = u0.len();
                    let fa: Vec<f64> = (0..n).map(|i| (u1[i] - u0[i]) + d * alpha * u0[i]).collect();
                    let fb: Vec<f64> = (0..n)
                        .map(|i| {
                            let du0 = u1[i] - u0[i];
                            let du1 = u2[i] - u1[i];
                            du1 - du0 + d * alpha * du0
                        })
                        .collect();
                    (spread(&fa), spread(&fb))
                })
                .unzip()
        }
    };
    Ok(ZeroErrorVerdict {
        condition_a: verdict(&a),
        condition_b: verdict(&b),
        discrete: delta.is_some(),
    })
}

fn verdict(spreads: &[f64]) -> ConditionVerdict {
    let chunk = (spreads.len() / 10).max(1);
    let max = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    let initial_spread = max(&spreads[..chunk]);
    let final_spread = max(&spreads[spreads.len() - chunk..]);
    ConditionVerdict {
        holds: final_spread <= COMMON_LIMIT_TOL && final_spread <= initial_spread + COMMON_LIMIT_TOL,
        initial_spread,
        final_spread,
    }
}

/// `‖y(t) + α⁻¹ (1/N) Σw(0) · 1‖`, the quantity the transient envelope bounds.
pub fn zero_system_deviation(y: &[f64], w0_sum: f64, alpha: f64) -> f64 {
    let shift = w0_sum / (alpha * y.len() as f64);
    y.iter().map(|v| (v + shift).powi(2)).sum::<f64>().sqrt()
}

/// `‖Π_N u̇(t)‖` sampled on a grid.
pub fn projected_derivative_samples(inputs: &InputSet, grid: &[f64]) -> Vec<f64> {
    grid.iter().map(|&t| projected_norm(&inputs.derivatives(t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{preset_scenario, Signal};

    fn inputs(alpha: f64, beta: f64, lam: f64, y0: f64, w0: f64) -> BoundInputs {
        BoundInputs {
            alpha,
            beta,
            lambda_hat_2: lam,
            re_lambda_2: lam,
            y0_norm: y0,
            w0_norm: w0,
            udot0_norm: 0.0,
            gamma: 0.0,
            switching: None,
        }
    }

    #[test]
    fn equilibrium_examples() {
        assert_eq!(zero_system_equilibrium(&[1.0, 1.0], 1.0).unwrap(), (-1.0, 1.0));
        assert_eq!(zero_system_equilibrium(&[2.0, -2.0], 3.0).unwrap().0, 0.0);
        let w0 = [1.0, 2.0, 0.0, -1.0, 3.0, 1.0];
        assert_eq!(zero_system_equilibrium(&w0, 2.0).unwrap().0, -0.5);
        assert!(zero_system_equilibrium(&[], 1.0).is_err());
    }

    #[test]
    fn s_at_zero() {
        let b = inputs(2.0, 1.0, 0.5, 3.0, 4.0);
        assert!((transient_bound_s(0.0, &b).unwrap() - (2.0 * 3.0 + 4.0 / 2.0)).abs() < 1e-15);
        let zero = inputs(2.0, 1.0, 0.5, 0.0, 0.0);
        for t in [0.0, 1.0, 10.0] {
            assert_eq!(transient_bound_s(t, &zero).unwrap(), 0.0);
        }
        assert!(matches!(transient_bound_s(-1.0, &b), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn s_continuous_across_confluence() {
        // β λ̂ = 0.5; compare α = 0.5 + 1e-6 (generic branch) with α = 0.5 (confluent)
        let near = inputs(0.5 + 1e-6, 1.0, 0.5, 1.3, 0.7);
        let at = inputs(0.5, 1.0, 0.5, 1.3, 0.7);
        for k in 0..=100 {
            let t = k as f64 * 0.1;
            let a = transient_bound_s(t, &near).unwrap();
            let b = transient_bound_s(t, &at).unwrap();
            assert!((a - b).abs() <= 1e-4 * b, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn tracking_reduces_to_s_for_static_inputs() {
        let b = inputs(1.0, 1.0, 0.5, 2.0, 1.0);
        for t in [0.0, 0.5, 3.0] {
            let tb = tracking_bound(t, &b, |_| 0.0, 100).unwrap();
            assert_eq!(tb, transient_bound_s(t, &b).unwrap());
        }
    }

    #[test]
    fn tracking_tends_to_ultimate_bound() {
        let gamma = 0.7;
        let b = inputs(1.0, 2.0, 0.5, 0.0, 0.0);
        let tb = tracking_bound(60.0, &b, |_| gamma, 60_000).unwrap();
        let ub = ultimate_bound(2.0, 0.5, gamma, None).unwrap();
        assert!((tb - ub).abs() < 1e-6, "{tb} vs {ub}");
    }

    #[test]
    fn curve_matches_pointwise_quadrature() {
        let set = preset_scenario("case2", 0).unwrap();
        let b = BoundInputs {
            udot0_norm: 0.4,
            ..inputs(3.0, 10.0, 0.5, 1.0, 2.0)
        };
        let grid: Vec<f64> = (0..=2000).map(|k| k as f64 * 0.005).collect();
        let samples = projected_derivative_samples(&set, &grid);
        let curve = tracking_bound_curve(&grid, &b, &samples).unwrap();
        let direct = tracking_bound(10.0, &b, |t| set.projected_derivative_norm(t), 2000).unwrap();
        assert!((curve.values[2000] - direct).abs() < 1e-10);
    }

    #[test]
    fn ultimate_bound_examples() {
        let r2 = 2f64.sqrt();
        assert!((ultimate_bound(1.0, 0.5, r2, None).unwrap() - 2.0 * r2).abs() < 1e-15);
        assert!((ultimate_bound(1.0, 0.5, r2, Some(0.5)).unwrap() - 4.0 * r2).abs() < 1e-15);
        assert_eq!(ultimate_bound(1.0, 0.5, 0.0, None).unwrap(), 0.0);
        assert!(ultimate_bound(0.0, 0.5, 1.0, None).is_err());
    }

    #[test]
    fn rate_examples() {
        assert_eq!(convergence_rate(1.0, 1.0, 0.5, 0.5, None).unwrap(), (0.5, 0.5));
        assert_eq!(convergence_rate(1.0, 1.0, 0.5, 0.5, Some(0.1)).unwrap(), (0.1, 0.1));
        assert_eq!(convergence_rate(0.2, 1.0, 0.5, 0.5, None).unwrap().0, 0.2);
        assert!(convergence_rate(1.0, 1.0, 0.0, 0.5, None).is_err());
    }

    #[test]
    fn switching_constants_replace_gap() {
        let mut b = inputs(1.0, 1.0, 0.5, 1.0, 0.0);
        b.switching = Some(SwitchingConstants {
            kappa: 2.0,
            lambda_hat_sigma: 0.1,
        });
        let t: f64 = 3.0;
        let expect = ((-t).exp() + 2.0 * (-0.1 * t).exp()) + 2.0 * ((-t).exp() - (-0.1f64 * t).exp()) / (0.1 - 1.0);
        assert!((transient_bound_s(t, &b).unwrap() - expect).abs() < 1e-14);
    }

    fn grid(t0: f64, t1: f64, h: f64) -> Vec<f64> {
        let n = ((t1 - t0) / h).round() as usize;
        (0..=n).map(|k| t0 + k as f64 * h).collect()
    }

    #[test]
    fn static_inputs_satisfy_condition_b() {
        let set = preset_scenario("static", 0).unwrap();
        let g = grid(0.0, 40.0, 0.1);
        for alpha in [0.1, 1.0, 7.0] {
            let v = zero_error_class_check(&set, alpha, &g, 20.0, None).unwrap();
            assert!(v.condition_b.holds);
            assert!(!v.condition_a.holds);
        }
        let same = InputSet::new(vec![Signal::constant(2.0); 4]).unwrap();
        let v = zero_error_class_check(&same, 1.0, &g, 20.0, None).unwrap();
        assert!(v.condition_a.holds && v.condition_b.holds);
    }

    #[test]
    fn case1_conditions() {
        let set = preset_scenario("case1", 0).unwrap();
        let v = zero_error_class_check(&set, 1.0, &grid(0.0, 200.0, 0.05), 100.0, None).unwrap();
        assert!(!v.condition_a.holds);
        assert!(v.condition_a.final_spread > 4.0);
        assert!(v.condition_b.holds, "{v:?}");
    }

    #[test]
    fn offset_sines_condition_b() {
        let set = preset_scenario("offset_sines", 0).unwrap();
        let v = zero_error_class_check(&set, 1.0, &grid(0.0, 40.0, 0.01), 20.0, None).unwrap();
        assert!(v.condition_b.holds);
        assert!(v.condition_b.final_spread < 1e-6);
    }

    #[test]
    fn discrete_conditions_for_sampled_process() {
        let set = preset_scenario("sampled_bias", 5).unwrap();
        let v = zero_error_class_check(&set, 1.0, &grid(0.0, 100.0, 0.5), 20.0, Some(0.5)).unwrap();
        // biases only shift u; differences are common to all agents
        assert!(v.condition_b.holds);
        assert!(v.discrete);
    }

    #[test]
    fn short_tail_rejected() {
        let set = preset_scenario("static", 0).unwrap();
        assert!(matches!(
            zero_error_class_check(&set, 1.0, &grid(0.0, 1.0, 0.5), 0.5, None),
            Err(Error::GridTooShort(_))
        ));
    }
}
