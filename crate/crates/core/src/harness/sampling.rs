//! Draws from the symmetric measure.
//!
//! At level `n` a single uniform index over the `n + 2` out-edges of the
//! current vertex is drawn; indices below `k + 1` are left turns. This picks
//! the turn with the transition probabilities and the copy uniformly inside
//! the bundle, so every length-`n` path has probability `1/(n+1)!`. The
//! column walk consumes the same draws, so it is the column sequence of
//! [`sample_path`] on the same generator state.

use rand::Rng;

use crate::graph::{EdgeRef, Vertex};
use crate::path::FinitePath;

/// Out-index of the edge taken from `(n, k)`.
#[inline]
pub fn draw_out_index<R: Rng + ?Sized>(rng: &mut R, n: u32) -> u32 {
    rng.gen_range(0..n + 2)
}

/// `k_{n+1}` given `k_n = k`.
#[inline]
pub fn step_column<R: Rng + ?Sized>(rng: &mut R, n: u32, k: u32) -> u32 {
    if draw_out_index(rng, n) <= k {
        k
    } else {
        k + 1
    }
}

/// Final column of a walk of length `n` from the root.
pub fn sample_column<R: Rng + ?Sized>(rng: &mut R, n: u32) -> u32 {
    (0..n).fold(0, |k, level| step_column(rng, level, k))
}

pub fn sample_path<R: Rng + ?Sized>(n: u32, rng: &mut R) -> FinitePath {
    let mut path = FinitePath::root();
    let mut at = Vertex::ROOT;
    for level in 0..n {
        let e = EdgeRef::from_out_index(at, draw_out_index(rng, level))
            .expect("index below out-degree");
        path.extend(e.into())
            .expect("edge leaves the terminal vertex");
        at = e.target();
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn walk_and_path_agree() {
        for seed in 0..20 {
            let p = sample_path(30, &mut ChaCha8Rng::seed_from_u64(seed));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut k = 0;
            for level in 0..30 {
                k = step_column(&mut rng, level, k);
                assert_eq!(p.column_at(level as usize + 1).unwrap(), k);
            }
            assert_eq!(sample_column(&mut ChaCha8Rng::seed_from_u64(seed), 30), k);
        }
    }
}
