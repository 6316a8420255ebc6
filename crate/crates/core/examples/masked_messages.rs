// DC3 transmits `z + ψ(t)`; the masked run matches the unmasked one.

use dynavg::graph::preset;
use dynavg::signal::preset_scenario;
use dynavg::sim::{simulate_continuous, Topology};
use dynavg::{AgentState, AlgorithmParams, Protocol, Signal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Topology::Fixed(preset("fig1a")?);
    let inputs = preset_scenario("case2", 0)?;
    let base = AlgorithmParams::new(3.0, 10.0).with_constant_theta(&[1.0; 6]);
    let plain = simulate_continuous(Protocol::Dc2, &ring, &inputs, &base, AgentState::zeros(6, true), 1e-3, 10.0, true)?;

    let psi = Signal::sum(vec![Signal::constant(10.0), Signal::ramp(5.0)]);
    let masked = simulate_continuous(Protocol::Dc3, &ring, &inputs, &base.clone().with_psi(psi.clone()), AgentState::zeros(6, true), 1e-3, 10.0, true)?;

    let gap = plain
        .states
        .iter()
        .zip(&masked.states)
        .flat_map(|(a, b)| a.to_flat().into_iter().zip(b.to_flat()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    println!("max state difference {gap:.2e}");
    let (m0, m1) = (plain.messages.as_ref().unwrap(), masked.messages.as_ref().unwrap());
    for k in [0, 5000, 10000] {
        println!(
            "t = {:4.1}: agent 1 sends {:.4} unmasked, {:.4} masked (psi = {:.1})",
            masked.times[k], m0[k][0], m1[k][0], psi.value(masked.times[k])
        );
    }
    assert!(gap <= 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
