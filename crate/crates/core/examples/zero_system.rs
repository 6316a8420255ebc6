// DC1 with zero inputs: every agent settles at `-Σw0/(αN)` under the transient envelope `s(t)`.

use dynavg::bounds::{transient_bound_s, zero_system_deviation, zero_system_equilibrium, BoundInputs};
use dynavg::graph::preset;
use dynavg::sim::{simulate_continuous, Topology};
use dynavg::{AgentState, AlgorithmParams, InputSet, Protocol, Signal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = preset("fig1a")?;
    let sp = g.spectral_summary()?;
    let (alpha, beta) = (1.0, 1.0);
    let y0 = vec![1.0, -2.0, 0.5, 3.0, 0.0, -1.5];
    let w0 = vec![0.3, 0.1, -0.2, 0.6, 0.0, 0.4];
    let inputs = InputSet::new(vec![Signal::constant(0.0); 6])?;

    let s0 = AgentState { x: y0.clone(), v: w0.clone(), z: None };
    let tr = simulate_continuous(Protocol::Dc1, &Topology::Fixed(g), &inputs, &AlgorithmParams::new(alpha, beta), s0, 0.01, 40.0, false)?;
    let (limit, _) = zero_system_equilibrium(&w0, alpha)?;
    println!("predicted limit {limit:.6}, final states {:?}", tr.final_state().x.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>());

    let b = BoundInputs::from_initial(alpha, beta, &sp, &y0, &w0, &inputs, 0.0);
    let sum_w0: f64 = w0.iter().sum();
    for k in (0..tr.len()).step_by(500) {
        let t = tr.times[k];
        let dev = zero_system_deviation(&tr.states[k].x, sum_w0, alpha);
        let s = transient_bound_s(t, &b)?;
        println!("t = {t:5.1}  deviation {dev:.3e}  envelope {s:.3e}");
        assert!(dev <= s * (1.0 + 1e-6));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
