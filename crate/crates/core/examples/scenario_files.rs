// Scenario JSON: parse, validate, execute, and read back the CSV and metrics.

use dynavg::scenario::{execute, validate_report, ExecuteOptions, ScenarioConfig};

const CONFIG: &str = r#"{
  "name": "two_rings",
  "description": "Four-node ring with lighter reverse edges; offset sinusoids.",
  "graph": {"n": 4, "edges": [[1, 2, 1.0], [2, 3, 1.0], [3, 4, 1.0], [4, 1, 1.0],
                              [2, 1, 0.5], [3, 2, 0.5], [4, 3, 0.5], [1, 4, 0.5]]},
  "protocol": "dc1",
  "alpha": 2.0,
  "beta": 1.5,
  "inputs": [
    {"kind": "sum", "params": {"terms": [{"kind": "sine", "params": {}}, {"kind": "constant", "params": {"value": 1.0}}]}},
    {"kind": "sum", "params": {"terms": [{"kind": "sine", "params": {}}, {"kind": "constant", "params": {"value": -2.0}}]}},
    {"kind": "sine", "params": {}},
    {"kind": "sum", "params": {"terms": [{"kind": "sine", "params": {}}, {"kind": "constant", "params": {"value": 4.0}}]}}
  ],
  "horizon": 20.0,
  "step": 0.01,
  "output": {"stride": 50}
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::from_json(CONFIG)?;
    print!("{}", validate_report(&cfg)?);

    let dir = tempfile::tempdir()?;
    let opts = ExecuteOptions { out_dir: Some(dir.path().to_path_buf()), svg: true, ..Default::default() };
    let summary = execute(&cfg, &opts)?;
    println!("{}", summary.line);
    let csv = std::fs::read_to_string(&summary.csv)?;
    println!("csv header: {}", csv.lines().next().unwrap_or_default());
    println!("csv rows: {}", csv.lines().count() - 1);
    let metrics: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary.metrics)?)?;
    println!("tail sup error from metrics: {}", metrics["sup_error_norm_tail"]);

    // Misspelled keys are rejected with a suggestion.
    let bad = CONFIG.replace("\"beta\"", "\"betta\"");
    match ScenarioConfig::from_json(&bad) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("misspelled key accepted".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
