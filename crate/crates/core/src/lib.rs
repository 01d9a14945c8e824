//! Exact and Monte Carlo machinery for the Euler adic transformation.
//!
//! The Euler graph has vertices `(n,k)`, `0 <= k <= n`, with `k+1` edges
//! from `(n,k)` to `(n+1,k)` and `n-k+1` edges from `(n,k)` to
//! `(n+1,k+1)`. Ordering the incoming edges of each vertex turns the space
//! of paths into a Bratteli-Vershik system whose map, the adic, sends a
//! path to its successor.
//!
//! * [`graph`]: vertices, edges, Eulerian numbers.
//! * [`path`]: finite paths, extremal paths, the Vershik order.
//! * [`adic`]: successor/predecessor and orbit ranks.
//! * [`measure`]: weight systems, the symmetric measure, exact moments.
//! * [`stacking`]: the cutting-and-stacking interval model.
//! * [`harness`]: seeded Monte Carlo experiments.
//! * [`cli`]: the `euler-adic` command-line front end.

pub mod adic;
pub mod cli;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod measure;
pub mod path;
pub mod stacking;

pub use adic::{iterate, orbit_rank, predecessor, successor, OrbitPosition};
pub use error::{Error, Result};
pub use exact::Rational;
pub use graph::{eulerian, path_count_between, EdgeRef, EulerianTriangle, Turn, Vertex};
pub use path::{
    enumerate_paths_to, max_path_to, min_path_to, vershik_compare, FinitePath, Step,
    VershikOrdering,
};
