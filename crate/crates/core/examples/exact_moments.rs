// Exact moments of u_n = 2k_n - n and of the increments of S_n = (n+1)u_n.

use euler_adic::exact::format_ratio;
use euler_adic::measure::{column_distribution, exact_moments};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let law = column_distribution(3);
    let probs: Vec<String> = law.probabilities.iter().map(format_ratio).collect();
    println!("law of k_3: {}", probs.join(" "));

    println!("n  E[u]  V(u)  E[X^2]");
    for row in exact_moments(8) {
        let x2 = row
            .mean_x2
            .as_ref()
            .map(format_ratio)
            .unwrap_or_else(|| "-".into());
        println!(
            "{}  {}  {}  {}",
            row.n,
            format_ratio(&row.mean_u),
            format_ratio(&row.var_u),
            x2
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
