//! Drives the command line in-process: solve to CSV, then charge from that CSV.

use vortexem::cli;

fn main() {
    let dir = std::env::temp_dir().join("vortexem-pipeline");
    let out = dir.to_string_lossy().into_owned();
    let code = cli::run(["vortexem", "solve", "--n1da", "100", "--out", &out]);
    assert_eq!(code, 0);
    let profile = dir.join("profile_n1_a100.csv").to_string_lossy().into_owned();
    let code = cli::run(["vortexem", "charge", "--profile", &profile, "--out", &out]);
    println!("charge exit code {code}; outputs in {}", dir.display());
    for entry in std::fs::read_dir(&dir).expect("output dir") {
        println!("  {}", entry.expect("entry").file_name().to_string_lossy());
    }
}
