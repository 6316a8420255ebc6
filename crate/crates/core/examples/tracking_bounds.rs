// The time-varying tracking envelope against the simulated per-agent errors.

use dynavg::bounds::{projected_derivative_samples, tracking_bound_curve, transient_bound_curve, BoundInputs};
use dynavg::graph::preset;
use dynavg::signal::preset_scenario;
use dynavg::sim::{simulate_continuous, tracking_errors, Topology};
use dynavg::{AgentState, AlgorithmParams, Protocol};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = preset("fig1a")?;
    let sp = g.spectral_summary()?;
    let inputs = preset_scenario("case2", 0)?;
    let (alpha, beta) = (3.0, 10.0);
    let x0 = vec![2.0, -1.0, 0.0, 4.0, 1.0, -3.0];
    let v0 = vec![0.0; 6];
    let s0 = AgentState { x: x0.clone(), v: v0.clone(), z: None };
    let tr = simulate_continuous(Protocol::Dc1, &Topology::Fixed(g), &inputs, &AlgorithmParams::new(alpha, beta), s0, 1e-3, 10.0, false)?;

    let b = BoundInputs::from_initial(alpha, beta, &sp, &x0, &v0, &inputs, 0.0);
    let tracking = tracking_bound_curve(&tr.times, &b, &projected_derivative_samples(&inputs, &tr.times))?;
    let transient = transient_bound_curve(&tr.times, &b)?;
    let (_, errs) = tracking_errors(&tr, &inputs);
    for k in (0..tr.len()).step_by(1000) {
        let worst = errs[k].iter().map(|e| e.abs()).fold(0.0, f64::max);
        println!(
            "t = {:4.1}: max |error| {worst:.3e}, tracking envelope {:.3e}, transient part {:.3e}",
            tr.times[k], tracking.values[k], transient.values[k]
        );
        assert!(worst <= tracking.values[k] * (1.0 + 1e-6) + 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
