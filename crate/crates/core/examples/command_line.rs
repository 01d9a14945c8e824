// Driving the command-line front end in-process.

use euler_adic::cli::run_with;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(
        ["euler-adic", "orbit", "--vertex", "2,1"],
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8(out)?);
    println!("exit {code}");

    let mut out = Vec::new();
    let code = run_with(
        ["euler-adic", "moments", "--levels", "5"],
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8(out)?);
    println!("exit {code}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
