// Cylinder frequencies inside one large stack and along successor orbits.

use euler_adic::harness::{birkhoff_experiment, BirkhoffMode, RngConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RngConfig::default();
    for cylinder in ["L0", "R0.L0", "R0.L1"] {
        let c = cylinder.parse()?;
        let report = birkhoff_experiment(
            &c,
            200,
            BirkhoffMode::ExactStack { column: None },
            0.02,
            &cfg,
        )?;
        let f = report.estimate("frequency").expect("always present");
        println!(
            "{cylinder}: {:.8} against {}",
            f.value,
            f.reference.as_deref().unwrap_or("-")
        );
    }
    let mode = BirkhoffMode::OrbitMc {
        starts: 20,
        steps: 5_000,
    };
    let report = birkhoff_experiment(&"R0".parse()?, 100, mode, 0.1, &cfg)?;
    print!("{}", report.to_json());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
