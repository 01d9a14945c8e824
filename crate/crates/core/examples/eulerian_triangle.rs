// Eulerian numbers: the first rows, a large entry, and path counts
// between two vertices.

use euler_adic::graph::{eulerian, eulerian_row, path_count_between, Vertex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in 0..=6 {
        let row: Vec<String> = eulerian_row(n).iter().map(|a| a.to_string()).collect();
        println!("{}", row.join(","));
    }
    let big = eulerian(200, 100);
    println!("A(200,100) has {} digits", big.to_string().len());

    let a = Vertex::new(2, 1)?;
    let b = Vertex::new(10, 5)?;
    println!("paths from {a} to {b}: {}", path_count_between(a, b));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
