//! The Euler adic on finite paths: successor, predecessor, and the rank of a
//! path inside the tower of paths sharing its terminal vertex.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{eulerian_vertex, EdgeRef, Vertex};
use crate::path::{max_path_to, min_path_to, FinitePath};

/// A path together with the number of strictly smaller paths into the same
/// terminal vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPosition {
    pub path: FinitePath,
    pub rank: BigUint,
}

impl OrbitPosition {
    pub fn of(path: FinitePath) -> Self {
        let rank = orbit_rank(&path);
        OrbitPosition { path, rank }
    }
}

/// Next path in the Vershik order: bump the first non-maximal edge to the
/// next incoming edge of its target and reset the prefix to the minimal path
/// into that edge's source.
pub fn successor(p: &FinitePath) -> Result<FinitePath> {
    let (j, e) = p
        .edges()
        .enumerate()
        .find(|(_, e)| !e.is_max_into_target())
        .ok_or(Error::MaximalPath)?;
    let next = EdgeRef::from_in_rank(e.target(), e.in_rank() + 1)?;
    Ok(min_path_to(next.source())
        .concat_unchecked(&[next.into()])
        .concat_unchecked(&p.steps()[j + 1..]))
}

/// Inverse of [`successor`].
pub fn predecessor(p: &FinitePath) -> Result<FinitePath> {
    let (j, e) = p
        .edges()
        .enumerate()
        .find(|(_, e)| !e.is_min_into_target())
        .ok_or(Error::MinimalPath)?;
    let prev = EdgeRef::from_in_rank(e.target(), e.in_rank() - 1)?;
    Ok(max_path_to(prev.source())
        .concat_unchecked(&[prev.into()])
        .concat_unchecked(&p.steps()[j + 1..]))
}

/// Number of paths into the same terminal vertex that precede `p`.
///
/// A smaller path agrees with `p` after some index `i` and uses a
/// lower-ranked edge into the same vertex at `i`; any prefix into that
/// edge's source works, so each such edge contributes `A(source)`.
pub fn orbit_rank(p: &FinitePath) -> BigUint {
    let mut rank = BigUint::zero();
    for e in p.edges() {
        for r in 0..e.in_rank() {
            let lower = EdgeRef::from_in_rank(e.target(), r).expect("rank below in_rank");
            rank += eulerian_vertex(lower.source());
        }
    }
    rank
}

/// The path into `v` with the given orbit rank.
pub fn path_with_rank(v: Vertex, rank: &BigUint) -> Result<FinitePath> {
    let size = eulerian_vertex(v);
    if *rank >= size {
        return Err(Error::OrbitOverflow {
            target: rank.to_string(),
            size: size.to_string(),
        });
    }
    let mut remaining = rank.clone();
    let mut at = v;
    let mut rev_steps = Vec::with_capacity(v.level() as usize);
    while !at.is_root() {
        let mut chosen = None;
        for e in at.in_edges()? {
            let block = eulerian_vertex(e.source());
            if remaining < block {
                chosen = Some(e);
                break;
            }
            remaining -= block;
        }
        let e = chosen.expect("rank below A(v) always lands in some block");
        rev_steps.push(e.into());
        at = e.source();
    }
    rev_steps.reverse();
    Ok(FinitePath::root().concat_unchecked(&rev_steps))
}

/// `T^steps(p)`: forward for positive steps, backward for negative ones.
pub fn iterate(p: &FinitePath, steps: i64) -> Result<FinitePath> {
    match steps {
        0 => Ok(p.clone()),
        1 => successor(p),
        -1 => predecessor(p),
        _ => {
            let v = p.terminal();
            let target = BigInt::from(orbit_rank(p)) + BigInt::from(steps);
            let size = eulerian_vertex(v);
            if target.is_negative() || target >= BigInt::from(size.clone()) {
                return Err(Error::OrbitOverflow {
                    target: target.to_string(),
                    size: size.to_string(),
                });
            }
            path_with_rank(v, &target.to_biguint().expect("non-negative"))
        }
    }
}

/// Walks the whole successor chain from the minimal to the maximal path
/// into `v`.
pub fn orbit_from_min(v: Vertex) -> impl Iterator<Item = FinitePath> {
    let mut next = Some(min_path_to(v));
    std::iter::from_fn(move || {
        let current = next.take()?;
        next = successor(&current).ok();
        Some(current)
    })
}

pub fn is_last_in_orbit(p: &FinitePath) -> bool {
    orbit_rank(p) + BigUint::one() == eulerian_vertex(p.terminal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{enumerate_level, enumerate_paths_to, DEFAULT_ENUMERATION_CAP};
    use num_traits::ToPrimitive;

    fn v(n: u32, k: u32) -> Vertex {
        Vertex::new(n, k).unwrap()
    }

    #[test]
    fn successor_walks_the_small_fiber() {
        let fiber = enumerate_paths_to(v(2, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        for pair in fiber.windows(2) {
            assert_eq!(successor(&pair[0]).unwrap(), pair[1]);
            assert_eq!(predecessor(&pair[1]).unwrap(), pair[0]);
        }
        assert_eq!(predecessor(&max_path_to(v(2, 1))).unwrap(), fiber[2]);
    }

    #[test]
    fn extremal_paths_have_no_neighbour() {
        assert_eq!(successor(&max_path_to(v(3, 1))), Err(Error::MaximalPath));
        assert_eq!(predecessor(&min_path_to(v(3, 1))), Err(Error::MinimalPath));
        assert_eq!(successor(&FinitePath::root()), Err(Error::MaximalPath));
    }

    #[test]
    fn successor_keeps_the_tail() {
        let p: FinitePath = "L0.R0.L1.R2.L0".parse().unwrap();
        let q = successor(&p).unwrap();
        assert_eq!(q.terminal(), p.terminal());
        // first edge L0 into (1,0) is maximal; R0 into (2,1) is not
        assert_eq!(&q.steps()[2..], &p.steps()[2..]);
        assert_eq!(q.to_string(), "L0.R1.L1.R2.L0");
    }

    #[test]
    fn walk_through_four_two() {
        let chain: Vec<_> = orbit_from_min(v(4, 2)).collect();
        assert_eq!(chain.len(), 66);
        assert_eq!(chain.last().unwrap(), &max_path_to(v(4, 2)));
        assert_eq!(chain, enumerate_paths_to(v(4, 2), 1000).unwrap());
        assert_eq!(
            iterate(&min_path_to(v(4, 2)), 65).unwrap(),
            max_path_to(v(4, 2))
        );
    }

    #[test]
    fn ranks() {
        assert_eq!(orbit_rank(&min_path_to(v(6, 3))), BigUint::zero());
        assert_eq!(orbit_rank(&max_path_to(v(3, 1))), BigUint::from(10u32));
        for (i, path) in enumerate_paths_to(v(5, 2), 1000)
            .unwrap()
            .iter()
            .enumerate()
        {
            assert_eq!(orbit_rank(path).to_usize().unwrap(), i);
            assert_eq!(path_with_rank(v(5, 2), &BigUint::from(i)).unwrap(), *path);
        }
        assert!(is_last_in_orbit(&max_path_to(v(7, 3))));
    }

    #[test]
    fn ranks_match_enumeration_at_level_five() {
        let mut by_vertex = std::collections::HashMap::<Vertex, usize>::new();
        for path in enumerate_level(5, DEFAULT_ENUMERATION_CAP).unwrap() {
            let idx = by_vertex.entry(path.terminal()).or_default();
            assert_eq!(orbit_rank(&path).to_usize().unwrap(), *idx);
            *idx += 1;
        }
    }

    #[test]
    fn predecessor_inverts_successor_up_to_six() {
        for n in 0..=6 {
            for path in enumerate_level(n, DEFAULT_ENUMERATION_CAP).unwrap() {
                if !path.is_maximal() {
                    let next = successor(&path).unwrap();
                    assert_eq!(predecessor(&next).unwrap(), path);
                    assert_eq!(orbit_rank(&next), orbit_rank(&path) + 1u32);
                }
                if !path.is_minimal() {
                    assert_eq!(successor(&predecessor(&path).unwrap()).unwrap(), path);
                }
            }
        }
    }

    #[test]
    fn iterate_bounds() {
        let p = min_path_to(v(4, 2));
        assert_eq!(iterate(&p, 0).unwrap(), p);
        let q = iterate(&p, 17).unwrap();
        assert_eq!(iterate(&q, -17).unwrap(), p);
        assert_eq!(orbit_rank(&q), BigUint::from(17u32));
        assert!(matches!(iterate(&p, -1), Err(Error::MinimalPath)));
        assert!(matches!(iterate(&p, 66), Err(Error::OrbitOverflow { .. })));
        assert!(matches!(iterate(&q, -18), Err(Error::OrbitOverflow { .. })));
        let pos = OrbitPosition::of(q.clone());
        assert_eq!(pos.rank, BigUint::from(17u32));
    }

    #[test]
    fn rank_of_a_long_path() {
        let v = v(200, 100);
        let size = eulerian_vertex(v);
        let mid = &size / 2u32;
        let p = path_with_rank(v, &mid).unwrap();
        assert_eq!(orbit_rank(&p), mid);
        assert_eq!(orbit_rank(&successor(&p).unwrap()), &mid + 1u32);
    }
}
