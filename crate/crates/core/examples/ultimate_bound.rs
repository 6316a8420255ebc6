// DC1 on the ring tracks bounded-derivative inputs to within `γ/(βλ̂₂)`.

use dynavg::bounds::{convergence_rate, ultimate_bound};
use dynavg::graph::preset;
use dynavg::signal::preset_scenario;
use dynavg::sim::{error_metrics, simulate_continuous, Topology};
use dynavg::{AgentState, AlgorithmParams, Protocol};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = preset("fig1a")?;
    let sp = g.spectral_summary()?;
    let inputs = preset_scenario("case2", 0)?;
    for beta in [2.0, 5.0, 10.0] {
        let p = AlgorithmParams::new(3.0, beta);
        let tr = simulate_continuous(Protocol::Dc1, &Topology::Fixed(g.clone()), &inputs, &p, AgentState::zeros(6, false), 1e-3, 40.0, false)?;
        let r = error_metrics(&tr, &inputs, 30.0)?;
        let ub = ultimate_bound(beta, sp.lambda_hat_2, r.gamma_used, None)?;
        let (ode_rate, bound_rate) = convergence_rate(3.0, beta, sp.re_lambda_2, sp.lambda_hat_2, None)?;
        println!(
            "beta = {beta:4}: tail sup error {:.4e}, ultimate bound {ub:.4e}, rates {ode_rate:.2} (dynamics) / {bound_rate:.2} (bound)",
            r.sup_error_norm_tail
        );
        assert!(r.sup_error_norm_tail <= ub * 1.05);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
