// Jointly connected switching schedules: admissibility report and a run on each.

use dynavg::graph::preset;
use dynavg::signal::preset_scenario;
use dynavg::sim::{error_metrics, simulate_continuous, Topology};
use dynavg::switching::{case1_schedule, case2_schedule, validate_admissible, Repeat, SwitchingSchedule};
use dynavg::{AgentState, AlgorithmParams, Protocol};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let runs = [
        ("case1", case1_schedule(), AlgorithmParams::new(1.0, 1.0)),
        ("case2", case2_schedule(), AlgorithmParams::new(3.0, 10.0)),
    ];
    for (name, sched, p) in runs {
        let report = validate_admissible(&sched, 40.0, 1e-10)?;
        println!("{name}: admissible {}, recurrence {:?}, windows {:?}", report.admissible, report.recurrence, report.joint_connectivity_intervals);
        let inputs = preset_scenario(name, 0)?;
        let tr = simulate_continuous(Protocol::Dc1, &Topology::Switching(sched), &inputs, &p, AgentState::zeros(6, false), 1e-3, 40.0, false)?;
        let r = error_metrics(&tr, &inputs, 30.0)?;
        println!("  tail sup error {:.3e}, final agent errors {:?}", r.sup_error_norm_tail, r.per_agent_sup_error_tail.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>());
    }

    // Alternating between two halves of the ring never connects agents 1-3 with 4-6.
    let halves = SwitchingSchedule::new(vec![preset("fig1c")?, preset("fig1d")?], vec![(0.0, 0), (1.0, 1)], Repeat::Cyclic(2.0), None)?;
    let report = validate_admissible(&halves, 40.0, 1e-10)?;
    println!("fig1c/fig1d alternation: admissible {}", report.admissible);
    assert!(!report.admissible);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
