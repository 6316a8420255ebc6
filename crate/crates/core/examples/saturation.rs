// Commands clamped to |ẋ| <= 15: the cascaded protocol against plain DC1.

use dynavg::scenario::{bundled_config, run_scenario};
use dynavg::sim::tracking_errors;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["sat", "sat_dc1"] {
        let sc = bundled_config(name)?.resolve()?;
        let out = run_scenario(&sc)?;
        let peak = out.trajectory.max_abs_command().into_iter().fold(0.0, f64::max);
        let (_, errs) = tracking_errors(&out.trajectory, &sc.inputs);
        let windows: Vec<String> = (0..5)
            .map(|k| {
                let (a, b) = (10.0 * k as f64 + 5.0, 10.0 * k as f64 + 10.0);
                let sup = out
                    .trajectory
                    .times
                    .iter()
                    .zip(&errs)
                    .filter(|(t, _)| **t >= a && **t < b)
                    .map(|(_, e)| e.iter().map(|x| x * x).sum::<f64>().sqrt())
                    .fold(0.0, f64::max);
                format!("{sup:.2e}")
            })
            .collect();
        println!("{name}: peak |command| {peak}, sup error per steady window {windows:?}");
        assert!(peak <= 15.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
