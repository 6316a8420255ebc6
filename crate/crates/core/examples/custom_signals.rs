// Composing input signals, and what the analysis layer reads from them.

use dynavg::{InputSet, Signal};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let wave = Signal::sum(vec![Signal::constant(2.0), Signal::sine(1.0, 0.5, 0.0), Signal::reciprocal_power(1.0, 2.0, 1)]);
    let pulsed = Signal::step_modulated(5.0, Signal::tanh(3.0, 1.0, -2.0));
    let held = Signal::sampled(2.0, vec![0.5, 1.5, -1.0, 0.0]);
    let numeric = Signal::central_difference(1e-5, Signal::atan(2.0, 1.0, 0.0));
    for (label, s) in [("wave", &wave), ("pulsed", &pulsed), ("held", &held), ("numeric", &numeric)] {
        let (u, du) = s.eval(3.0)?;
        println!("{label:>7}: u(3) = {u:.5}, u'(3) = {du:.5}");
    }
    println!("json: {}", serde_json::to_string(&wave)?);

    let set = InputSet::new(vec![wave, pulsed, held, numeric])?;
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 * 0.05).collect();
    let stats = set.disagreement_gamma(&grid)?;
    let (avg, davg) = set.network_average(3.0)?;
    println!("average at t = 3: {avg:.4} (rate {davg:.4}); gamma {:.4}; per-agent sup |u'| {:?}", stats.gamma, stats.mu.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
