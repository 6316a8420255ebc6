// Every bundled scenario written to a directory and run as a parallel batch.

use dynavg::scenario::{bundled_config, run_batch, ExecuteOptions, BUNDLED};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    for name in ["static", "offset_sines", "sampled"] {
        std::fs::write(dir.path().join(format!("{name}.json")), bundled_config(name)?.to_json())?;
    }
    let opts = ExecuteOptions { out_dir: Some(dir.path().join("out")), ..Default::default() };
    for (path, result) in run_batch(dir.path(), &opts)? {
        match result {
            Ok(s) => println!("{}", s.line),
            Err(e) => println!("{}: {e}", path.display()),
        }
    }
    println!("bundled: {}", BUNDLED.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
