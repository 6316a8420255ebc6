//! Discrete-time consensus iteration with stepsize `δ`:
//!
//! ```text
//! z⁺ = z - δαz - δβL(z + u(k)) - δv
//! v⁺ = v + δαβL(z + u(k))
//! x  = z + u(k)
//! ```
//!
//! `u(k)` is the input sampled at `t = kδ`. No input derivative is needed.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::graph::{general_eigenvalues, LaplacianMatrix, WeightedDigraph};
use crate::protocol::AlgorithmParams;
use crate::signal::InputSet;

/// Modulus tolerance for classifying eigenvalues on the unit circle.
pub const UNIT_CIRCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteState {
    pub z: Vec<f64>,
    pub v: Vec<f64>,
    pub k: u64,
    /// `z + u(k)`, the agreement output.
    pub x_out: Vec<f64>,
}

impl DiscreteState {
    /// State at `k = 0` with the output computed from `u(0)`.
    pub fn new(z0: Vec<f64>, v0: Vec<f64>, inputs: &InputSet) -> Result<Self> {
        if z0.len() != inputs.len() || v0.len() != inputs.len() {
            return Err(Error::DimensionMismatch {
                what: "initial discrete state",
                expected: inputs.len(),
                found: if z0.len() != inputs.len() { z0.len() } else { v0.len() },
            });
        }
        let u0 = inputs.values(0.0);
        let x_out = z0.iter().zip(&u0).map(|(z, u)| z + u).collect();
        Ok(DiscreteState { z: z0, v: v0, k: 0, x_out })
    }

    pub fn time(&self, delta: f64) -> f64 {
        self.k as f64 * delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSize {
    pub delta: f64,
    pub bound: f64,
    pub admissible: bool,
}

impl StepSize {
    pub fn new(delta: f64, alpha: f64, beta: f64, d_max_out: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::param("delta", format!("must be > 0, got {delta}")));
        }
        let bound = max_stepsize(alpha, beta, d_max_out)?;
        Ok(StepSize {
            delta,
            bound,
            admissible: delta < bound,
        })
    }
}

/// `min{1/α, 1/(β d_max_out)}`: stepsizes strictly below this are guaranteed to converge.
pub fn max_stepsize(alpha: f64, beta: f64, d_max_out: f64) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("d_max_out", d_max_out)] {
        if !(v > 0.0) {
            return Err(Error::param(name, format!("must be > 0, got {v}")));
        }
    }
    Ok((1.0 / alpha).min(1.0 / (beta * d_max_out)))
}

/// One iteration. `delta = 0` leaves the state unchanged.
pub fn dcdisc_step(
    s: &DiscreteState,
    laplacian: &LaplacianMatrix,
    inputs: &InputSet,
    p: &AlgorithmParams,
    delta: f64,
) -> Result<DiscreteState> {
    let n = laplacian.n();
    if inputs.len() != n || s.z.len() != n || s.v.len() != n {
        return Err(Error::DimensionMismatch {
            what: "discrete state",
            expected: n,
            found: s.z.len().max(s.v.len()).max(inputs.len()),
        });
    }
    if !(delta >= 0.0) {
        return Err(Error::param("delta", format!("must be >= 0, got {delta}")));
    }
    let uk = inputs.values(s.time(delta));
    let sent: Vec<f64> = s.z.iter().zip(&uk).map(|(z, u)| z + u).collect();
    let mut lx = vec![0.0; n];
    laplacian.apply(&sent, &mut lx);

    let (a, b) = (p.alpha, p.beta);
    let z: Vec<f64> = (0..n)
        .map(|i| s.z[i] - delta * a * s.z[i] - delta * b * lx[i] - delta * s.v[i])
        .collect();
    let v: Vec<f64> = (0..n).map(|i| s.v[i] + delta * a * b * lx[i]).collect();
    let k = s.k + 1;
    let u_next = inputs.values(k as f64 * delta);
    let x_out = z.iter().zip(&u_next).map(|(z, u)| z + u).collect();
    Ok(DiscreteState { z, v, k, x_out })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiConvergenceReport {
    pub eigenvalues: Vec<Complex<f64>>,
    pub unit_eigenvalue_count: usize,
    pub max_other_modulus: f64,
    pub semi_convergent: bool,
    /// Violated graph hypotheses (imbalance, lack of strong connectivity).
    pub hypothesis_violations: Vec<String>,
}

/// The `2N×2N` zero-system matrix `[[-αI - βL, -I], [αβL, 0]]`.
pub fn zero_system_matrix(laplacian: &LaplacianMatrix, alpha: f64, beta: f64) -> DMatrix<f64> {
    let n = laplacian.n();
    let l = laplacian.matrix();
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = -beta * l[(i, j)];
            a[(n + i, j)] = alpha * beta * l[(i, j)];
        }
        a[(i, i)] -= alpha;
        a[(i, n + i)] = -1.0;
    }
    a
}

/// Spectrum of `P_δ = I + δA` and its semi-convergence verdict: exactly one
/// eigenvalue at 1, all others strictly inside the unit disk.
pub fn pdelta_spectrum_check(
    g: &WeightedDigraph,
    alpha: f64,
    beta: f64,
    delta: f64,
) -> Result<SemiConvergenceReport> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("delta", delta)] {
        if !(v > 0.0) {
            return Err(Error::param(name, format!("must be > 0, got {v}")));
        }
    }
    let mut hypothesis_violations = Vec::new();
    if !g.is_weight_balanced(1e-10) {
        hypothesis_violations.push("digraph is not weight-balanced".to_string());
    }
    if !g.is_strongly_connected() {
        hypothesis_violations.push("digraph is not strongly connected".to_string());
    }
    let n = g.n();
    let p = DMatrix::identity(2 * n, 2 * n) + zero_system_matrix(&g.laplacian(), alpha, beta) * delta;
    let eigenvalues = general_eigenvalues(&p)?;
    let one = Complex::new(1.0, 0.0);
    let unit_eigenvalue_count = eigenvalues
        .iter()
        .filter(|e| (*e - one).norm() <= UNIT_CIRCLE_TOL)
        .count();
    let max_other_modulus = eigenvalues
        .iter()
        .filter(|e| (*e - one).norm() > UNIT_CIRCLE_TOL)
        .map(|e| e.norm())
        .fold(0.0, f64::max);
    Ok(SemiConvergenceReport {
        semi_convergent: unit_eigenvalue_count == 1 && max_other_modulus < 1.0 - UNIT_CIRCLE_TOL,
        eigenvalues,
        unit_eigenvalue_count,
        max_other_modulus,
        hypothesis_violations,
    })
}
