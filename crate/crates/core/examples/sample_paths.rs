// Sampling paths from the symmetric measure and checking frequencies.

use euler_adic::harness::{sample_experiment, sample_path, RngConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RngConfig::new(1, 4)?;
    let mut rng = cfg.replica_rng(0);
    for _ in 0..3 {
        println!("{}", sample_path(8, &mut rng));
    }
    let report = sample_experiment(3, 50_000, &cfg)?;
    report.write_csv(std::io::stdout().lock())?;
    println!("passed: {}", report.passed);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
