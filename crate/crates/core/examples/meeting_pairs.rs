// Independent pairs of column walks keep meeting again.

use euler_adic::harness::{drift_law_experiment, expectations, meeting_experiment, RngConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RngConfig::new(5, 4)?;
    let stats = meeting_experiment(2_000, 500, 1, &cfg);
    println!(
        "fraction with >= 5 meetings: {}",
        stats.fraction_with_at_least(5, 2_000)
    );
    println!(
        "median meetings by 200: {}, by 2000: {}",
        stats.median_meetings(200),
        stats.median_meetings(2_000)
    );
    let first: Vec<String> = stats.trajectories[0]
        .iter()
        .take(30)
        .map(|d| d.to_string())
        .collect();
    println!("D_n of the first pair: {} ...", first.join(" "));

    let mut expect = expectations().meeting;
    expect.median_checkpoint = 200;
    println!("report passed: {}", stats.to_report(&expect).passed);

    let drift = drift_law_experiment(&[20, 100], 5_000, 100, &cfg)?;
    drift.write_csv(std::io::stdout().lock())?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
