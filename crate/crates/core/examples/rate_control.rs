// Per-agent rate gains: agent 1 approaches the average slowly, the rest at the network rate.

use dynavg::graph::preset;
use dynavg::protocol::ThetaGain;
use dynavg::signal::preset_scenario;
use dynavg::sim::{error_metrics, simulate_continuous, Topology};
use dynavg::{AgentState, AlgorithmParams, Protocol, Signal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Topology::Fixed(preset("fig1a")?);
    let inputs = preset_scenario("static", 0)?;
    let s0 = AgentState {
        x: vec![0.0; 6],
        v: vec![0.0; 6],
        z: Some((1..=6).map(f64::from).collect()),
    };

    let constant = AlgorithmParams::new(1.0, 1.0).with_constant_theta(&[0.1, 5.0, 5.0, 5.0, 5.0, 5.0]);
    let tr = simulate_continuous(Protocol::Dc2, &ring, &inputs, &constant, s0.clone(), 0.01, 250.0, false)?;
    let r = error_metrics(&tr, &inputs, 200.0)?;
    println!("constant gains: fitted rates {:?}", r.fitted_rate.iter().map(|x| x.map(|v| format!("{v:.3}"))).collect::<Vec<_>>());

    // A gain that swings inside its declared bounds is also accepted.
    let swinging = ThetaGain::Scheduled {
        signal: Signal::sum(vec![Signal::constant(1.0), Signal::sine(0.5, 0.2, 0.0)]),
        lower: 0.5,
        upper: 1.5,
    };
    let p = AlgorithmParams::new(1.0, 1.0).with_theta(vec![swinging; 6]);
    let tr = simulate_continuous(Protocol::Dc2, &ring, &inputs, &p, s0, 0.01, 100.0, false)?;
    let r = error_metrics(&tr, &inputs, 75.0)?;
    println!("time-varying gains: tail sup error {:.2e}", r.sup_error_norm_tail);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
