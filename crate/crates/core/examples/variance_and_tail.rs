// Variance of u_n and the tail P(|u_n/n| >= eps) against exact values.

use euler_adic::exact::ratio;
use euler_adic::harness::{chebyshev_experiment, variance_experiment, RngConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RngConfig::default();
    let report = variance_experiment(100, 20_000, &cfg)?;
    for e in &report.estimates {
        println!(
            "{}: {:.4} +- {:.4} (exact {})",
            e.name,
            e.value,
            e.std_error,
            e.reference.as_deref().unwrap_or("-")
        );
    }
    let report = chebyshev_experiment(100, &ratio(1, 5), 20_000, &cfg)?;
    print!("{}", report.to_json());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
