// Cutting and stacking: intervals of stage 2, the stage map at stage 3, and
// point encoding.

use euler_adic::exact::{format_ratio, ratio};
use euler_adic::path::DEFAULT_ENUMERATION_CAP;
use euler_adic::stacking::{build_stage, encode_point};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let layout = build_stage(2, DEFAULT_ENUMERATION_CAP)?;
    layout.write_csv(std::io::stdout().lock())?;
    layout.validate()?;

    let stage = build_stage(3, DEFAULT_ENUMERATION_CAP)?;
    let u = ratio(7, 60);
    let image = stage.stage_map(&u)?.expect("not on top of a stack");
    println!(
        "{} -> {}: {} -> {}",
        format_ratio(&u),
        format_ratio(&image),
        encode_point(&u, 3)?,
        encode_point(&image, 3)?
    );
    println!(
        "undefined on width {}",
        format_ratio(&stage.undefined_width())
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
