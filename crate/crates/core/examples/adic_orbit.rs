// Walking the successor chain through a fiber and jumping along it by rank.

use euler_adic::adic::{iterate, orbit_from_min, orbit_rank, predecessor, successor};
use euler_adic::graph::Vertex;
use euler_adic::path::{max_path_to, vershik_compare, FinitePath};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let v = Vertex::new(3, 1)?;
    for p in orbit_from_min(v) {
        println!("{:>2}  {p}", orbit_rank(&p));
    }

    let p: FinitePath = "L0.R0.L1.R2.L0".parse()?;
    let next = successor(&p)?;
    println!("{p} -> {next} ({:?})", vershik_compare(&p, &next)?);
    assert_eq!(predecessor(&next)?, p);

    let far = iterate(&p, 100)?;
    println!("100 steps later: {far}, rank {}", orbit_rank(&far));
    assert!(successor(&max_path_to(v)).is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
