// Exact drift of the distance between two independent column walks.

use euler_adic::exact::format_ratio;
use euler_adic::measure::pair_drift;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 6;
    for k in 0..=n {
        let row: Vec<String> = (0..=n)
            .map(|k2| format_ratio(&pair_drift(n, k, k2)))
            .collect();
        println!("{}", row.join("\t"));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
