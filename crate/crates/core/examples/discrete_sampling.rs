// The Euler-discretized algorithm on zero-order-held samples, with its stepsize check.

use dynavg::discrete::{max_stepsize, pdelta_spectrum_check};
use dynavg::graph::preset;
use dynavg::signal::preset_scenario;
use dynavg::sim::{error_metrics, simulate_discrete, tracking_errors, Topology};
use dynavg::AlgorithmParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = preset("fig1a")?;
    let bound = max_stepsize(1.0, 1.0, g.d_max_out())?;
    for delta in [0.5, 0.9, 2.0 * bound] {
        let r = pdelta_spectrum_check(&g, 1.0, 1.0, delta)?;
        println!("delta = {delta}: semi-convergent {}, largest non-unit modulus {:.4}", r.semi_convergent, r.max_other_modulus);
    }

    let inputs = preset_scenario("sampled_bias", 7)?;
    let tr = simulate_discrete(&Topology::Fixed(g), &inputs, &AlgorithmParams::new(1.0, 1.0), vec![0.0; 6], vec![0.0; 6], 0.5, 100.0)?;
    let (avg, errs) = tracking_errors(&tr, &inputs);
    for k in (3..tr.len()).step_by(40) {
        let worst = errs[k].iter().map(|e| e.abs()).fold(0.0, f64::max);
        println!("k = {k:3} (t = {:5.1}): average {:.4}, max agent error {worst:.2e}", tr.times[k], avg[k]);
    }
    let r = error_metrics(&tr, &inputs, 75.0)?;
    println!("sum of v drift {:.1e}, tail sup error {:.1e}", r.conservation_residual, r.sup_error_norm_tail);
    assert!(r.conservation_residual <= 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
