// Each example in examples/ is compiled into this file and run once.

mod batch_runs {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/batch_runs.rs"));
}

#[test]
fn batch_runs_runs() {
    batch_runs::run_example().expect("batch_runs example should run");
}

mod custom_signals {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/custom_signals.rs"));
}

#[test]
fn custom_signals_runs() {
    custom_signals::run_example().expect("custom_signals example should run");
}

mod discrete_sampling {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/discrete_sampling.rs"));
}

#[test]
fn discrete_sampling_runs() {
    discrete_sampling::run_example().expect("discrete_sampling example should run");
}

mod graph_spectra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/graph_spectra.rs"));
}

#[test]
fn graph_spectra_runs() {
    graph_spectra::run_example().expect("graph_spectra example should run");
}

mod masked_messages {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/masked_messages.rs"));
}

#[test]
fn masked_messages_runs() {
    masked_messages::run_example().expect("masked_messages example should run");
}

mod rate_control {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/rate_control.rs"));
}

#[test]
fn rate_control_runs() {
    rate_control::run_example().expect("rate_control example should run");
}

mod saturation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/saturation.rs"));
}

#[test]
fn saturation_runs() {
    saturation::run_example().expect("saturation example should run");
}

mod scenario_files {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenario_files.rs"));
}

#[test]
fn scenario_files_runs() {
    scenario_files::run_example().expect("scenario_files example should run");
}

mod switching_topologies {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/switching_topologies.rs"));
}

#[test]
fn switching_topologies_runs() {
    switching_topologies::run_example().expect("switching_topologies example should run");
}

mod tracking_bounds {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tracking_bounds.rs"));
}

#[test]
fn tracking_bounds_runs() {
    tracking_bounds::run_example().expect("tracking_bounds example should run");
}

mod ultimate_bound {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ultimate_bound.rs"));
}

#[test]
fn ultimate_bound_runs() {
    ultimate_bound::run_example().expect("ultimate_bound example should run");
}

mod zero_error_classes {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/zero_error_classes.rs"));
}

#[test]
fn zero_error_classes_runs() {
    zero_error_classes::run_example().expect("zero_error_classes example should run");
}

mod zero_system {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/zero_system.rs"));
}

#[test]
fn zero_system_runs() {
    zero_system::run_example().expect("zero_system example should run");
}
