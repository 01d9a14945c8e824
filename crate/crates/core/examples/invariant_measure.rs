// The symmetric weights pass the invariance checks; a perturbed table
// does not.

use euler_adic::exact::{format_ratio, ratio};
use euler_adic::measure::{
    check_invariance_conditions, cylinder_measure, pushforward_check, WeightSystem,
};
use euler_adic::path::DEFAULT_ENUMERATION_CAP;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ws = WeightSystem::symmetric();
    let report = check_invariance_conditions(&ws, 20);
    println!(
        "symmetric: {} bundles, {} diamonds, passed {}",
        report.bundles_checked,
        report.diamonds_checked,
        report.passed()
    );
    let push = pushforward_check(&ws, 5, DEFAULT_ENUMERATION_CAP)?;
    println!(
        "pushforward at level 5: {} cylinders, passed {}",
        push.cylinders,
        push.passed()
    );
    let mass =
        cylinder_measure(&ws, &"R0.L1.R0".parse()?).expect("symmetric weights cover every edge");
    println!("mass of R0.L1.R0: {}", format_ratio(&mass));

    let mut table = WeightSystem::symmetric_table(4);
    table[3][1][1] = ratio(1, 7);
    let bent = WeightSystem::from_bundle_table(table)?;
    let report = check_invariance_conditions(&bent, 4);
    println!("perturbed: {:?}", report.violation);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
