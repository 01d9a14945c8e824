//! The Euler multigraph.
//!
//! Level `n` holds the vertices `(n,0) ..= (n,n)`. Vertex `(n,k)` sends a
//! bundle of `k+1` parallel edges to `(n+1,k)` (a left turn) and a bundle of
//! `n-k+1` parallel edges to `(n+1,k+1)` (a right turn). The number of
//! root-to-`(n,k)` paths is the Eulerian number `A(n,k)`.
//!
//! Incoming edges of a vertex are totally ordered: the right-turn bundle from
//! `(n-1,k-1)` comes first, then the left-turn bundle from `(n-1,k)`, each in
//! ascending copy order. Position in that order is the edge's *in-rank*.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    level: u32,
    column: u32,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex {
        level: 0,
        column: 0,
    };

    pub fn new(level: u32, column: u32) -> Result<Self> {
        if column > level {
            return Err(Error::InvalidVertex { level, column });
        }
        Ok(Vertex { level, column })
    }

    pub fn level(self) -> u32 {
        self.level
    }

    pub fn column(self) -> u32 {
        self.column
    }

    pub fn is_root(self) -> bool {
        self.level == 0
    }

    /// Size of the edge bundle leaving this vertex in the given direction.
    pub fn bundle_size(self, turn: Turn) -> u32 {
        match turn {
            Turn::Left => self.column + 1,
            Turn::Right => self.level - self.column + 1,
        }
    }

    pub fn out_degree(self) -> u32 {
        self.level + 2
    }

    pub fn in_degree(self) -> u32 {
        if self.level == 0 {
            0
        } else if self.column == 0 || self.column == self.level {
            1
        } else {
            self.level + 2
        }
    }

    pub fn child(self, turn: Turn) -> Vertex {
        match turn {
            Turn::Left => Vertex {
                level: self.level + 1,
                column: self.column,
            },
            Turn::Right => Vertex {
                level: self.level + 1,
                column: self.column + 1,
            },
        }
    }

    /// Number of incoming edges that are right turns (they come from
    /// `(n-1,k-1)` and precede the left-turn bundle in the in-edge order).
    fn right_in_count(self) -> u32 {
        if self.level == 0 || self.column == 0 {
            0
        } else {
            // bundle from (n-1,k-1): (n-1)-(k-1)+1
            self.level - self.column + 1
        }
    }

    /// Outgoing edges: left-turn copies ascending, then right-turn copies.
    pub fn out_edges(self) -> Vec<EdgeRef> {
        let left = (0..self.bundle_size(Turn::Left)).map(|copy| EdgeRef {
            source: self,
            turn: Turn::Left,
            copy,
        });
        let right = (0..self.bundle_size(Turn::Right)).map(|copy| EdgeRef {
            source: self,
            turn: Turn::Right,
            copy,
        });
        left.chain(right).collect()
    }

    /// Incoming edges in increasing in-rank order.
    pub fn in_edges(self) -> Result<Vec<EdgeRef>> {
        if self.level == 0 {
            return Err(Error::RootHasNoInEdges);
        }
        (0..self.in_degree())
            .map(|rank| EdgeRef::from_in_rank(self, rank))
            .collect()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Turn {
    /// Column unchanged: `(n,k) -> (n+1,k)`.
    Left,
    /// Column incremented: `(n,k) -> (n+1,k+1)`.
    Right,
}

impl Turn {
    pub fn letter(self) -> char {
        match self {
            Turn::Left => 'L',
            Turn::Right => 'R',
        }
    }
}

/// One edge of the multigraph, identified by its source, direction and copy
/// index inside the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    source: Vertex,
    turn: Turn,
    copy: u32,
}

impl EdgeRef {
    pub fn new(source: Vertex, turn: Turn, copy: u32) -> Result<Self> {
        let bundle = source.bundle_size(turn);
        if copy >= bundle {
            return Err(Error::InvalidCopy {
                at: source,
                copy,
                bundle,
            });
        }
        Ok(EdgeRef { source, turn, copy })
    }

    pub fn source(self) -> Vertex {
        self.source
    }

    pub fn turn(self) -> Turn {
        self.turn
    }

    pub fn copy(self) -> u32 {
        self.copy
    }

    pub fn target(self) -> Vertex {
        self.source.child(self.turn)
    }

    /// Position of this edge among the incoming edges of its target.
    pub fn in_rank(self) -> u32 {
        match self.turn {
            Turn::Right => self.copy,
            Turn::Left => self.target().right_in_count() + self.copy,
        }
    }

    /// Position of this edge among the outgoing edges of its source.
    pub fn out_index(self) -> u32 {
        match self.turn {
            Turn::Left => self.copy,
            Turn::Right => self.source.bundle_size(Turn::Left) + self.copy,
        }
    }

    pub fn is_max_into_target(self) -> bool {
        self.in_rank() + 1 == self.target().in_degree()
    }

    pub fn is_min_into_target(self) -> bool {
        self.in_rank() == 0
    }

    pub fn from_in_rank(target: Vertex, rank: u32) -> Result<Self> {
        let degree = target.in_degree();
        if rank >= degree {
            if target.is_root() {
                return Err(Error::RootHasNoInEdges);
            }
            return Err(Error::InvalidRank {
                target,
                rank,
                degree,
            });
        }
        let rights = target.right_in_count();
        let (n, k) = (target.level, target.column);
        Ok(if rank < rights {
            EdgeRef {
                source: Vertex {
                    level: n - 1,
                    column: k - 1,
                },
                turn: Turn::Right,
                copy: rank,
            }
        } else {
            EdgeRef {
                source: Vertex {
                    level: n - 1,
                    column: k,
                },
                turn: Turn::Left,
                copy: rank - rights,
            }
        })
    }

    pub fn from_out_index(source: Vertex, index: u32) -> Result<Self> {
        let lefts = source.bundle_size(Turn::Left);
        if index < lefts {
            EdgeRef::new(source, Turn::Left, index)
        } else {
            EdgeRef::new(source, Turn::Right, index - lefts)
        }
    }
}

/// Rows `0..=n_max` of the Eulerian triangle, filled by
/// `A(n+1,k) = (n-k+2) A(n,k-1) + (k+1) A(n,k)`.
#[derive(Debug, Clone)]
pub struct EulerianTriangle {
    rows: Vec<Vec<BigUint>>,
}

impl Default for EulerianTriangle {
    fn default() -> Self {
        EulerianTriangle {
            rows: vec![vec![BigUint::one()]],
        }
    }
}

impl EulerianTriangle {
    pub fn with_levels(n_max: u32) -> Self {
        let mut t = Self::default();
        t.extend_to(n_max);
        t
    }

    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn extend_to(&mut self, n_max: u32) {
        while self.n_max() < n_max {
            let n = self.n_max();
            let prev = self.rows.last().expect("row 0 always present");
            let next: Vec<BigUint> = (0..=n + 1)
                .map(|k| {
                    let mut value = BigUint::zero();
                    if k >= 1 {
                        value += &prev[(k - 1) as usize] * (n + 2 - k);
                    }
                    if k <= n {
                        value += &prev[k as usize] * (k + 1);
                    }
                    value
                })
                .collect();
            self.rows.push(next);
        }
    }

    pub fn row(&self, n: u32) -> Option<&[BigUint]> {
        self.rows.get(n as usize).map(Vec::as_slice)
    }

    /// `A(n,k)`, zero outside `0 <= k <= n`; `None` if row `n` is not built.
    pub fn get(&self, n: u32, k: u32) -> Option<BigUint> {
        let row = self.row(n)?;
        Some(row.get(k as usize).cloned().unwrap_or_default())
    }
}

fn shared_triangle() -> &'static RwLock<EulerianTriangle> {
    static TRIANGLE: OnceLock<RwLock<EulerianTriangle>> = OnceLock::new();
    TRIANGLE.get_or_init(|| RwLock::new(EulerianTriangle::with_levels(32)))
}

/// `A(n,k)` from a process-wide memoized triangle; zero when `k > n`.
pub fn eulerian(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let lock = shared_triangle();
    if let Some(v) = lock.read().expect("triangle lock").get(n, k) {
        return v;
    }
    let mut t = lock.write().expect("triangle lock");
    t.extend_to(n);
    t.get(n, k).expect("row just built")
}

/// Row `n` of the triangle.
pub fn eulerian_row(n: u32) -> Vec<BigUint> {
    (0..=n).map(|k| eulerian(n, k)).collect()
}

pub fn eulerian_vertex(v: Vertex) -> BigUint {
    eulerian(v.level, v.column)
}

/// Number of edge paths from `a` down to `b`, counting parallel edges.
pub fn path_count_between(a: Vertex, b: Vertex) -> BigUint {
    if b.level < a.level || b.column < a.column || b.column - a.column > b.level - a.level {
        return BigUint::zero();
    }
    let lo = a.column;
    // counts[i] = paths from a to (n, lo+i)
    let mut counts = vec![BigUint::one()];
    for n in a.level..b.level {
        let mut next = vec![BigUint::zero(); counts.len() + 1];
        for (i, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = lo + i as u32;
            next[i] += c * (k + 1);
            next[i + 1] += c * (n - k + 1);
        }
        counts = next;
    }
    counts.swap_remove((b.column - lo) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u32, k: u32) -> Vertex {
        Vertex::new(n, k).unwrap()
    }

    #[test]
    fn rejects_column_above_level() {
        assert_eq!(
            Vertex::new(2, 3),
            Err(Error::InvalidVertex {
                level: 2,
                column: 3
            })
        );
    }

    #[test]
    fn out_edges_of_root_and_interior() {
        let root = Vertex::ROOT.out_edges();
        assert_eq!(root.len(), 2);
        assert_eq!((root[0].turn(), root[0].copy()), (Turn::Left, 0));
        assert_eq!((root[1].turn(), root[1].copy()), (Turn::Right, 0));

        let e = v(2, 1).out_edges();
        assert_eq!(e.iter().filter(|e| e.turn() == Turn::Left).count(), 2);
        assert_eq!(e.iter().filter(|e| e.turn() == Turn::Right).count(), 2);
        assert_eq!(v(5, 3).out_edges().len(), 7);
        for (i, e) in v(5, 3).out_edges().into_iter().enumerate() {
            assert_eq!(e.out_index(), i as u32);
            assert_eq!(EdgeRef::from_out_index(v(5, 3), i as u32).unwrap(), e);
        }
    }

    #[test]
    fn in_edges_follow_figure_order() {
        let e = v(3, 1).in_edges().unwrap();
        assert_eq!(e.len(), 5);
        for (i, edge) in e.iter().enumerate() {
            assert_eq!(edge.in_rank(), i as u32);
            assert_eq!(edge.target(), v(3, 1));
        }
        assert!(e[..3]
            .iter()
            .all(|x| x.source() == v(2, 0) && x.turn() == Turn::Right));
        assert!(e[3..]
            .iter()
            .all(|x| x.source() == v(2, 1) && x.turn() == Turn::Left));
        assert_eq!(e[4].copy(), 1);

        let e = v(4, 2).in_edges().unwrap();
        assert_eq!(e.len(), 6);
        assert_eq!(e.iter().filter(|x| x.source() == v(3, 1)).count(), 3);
        assert_eq!(e.iter().filter(|x| x.source() == v(3, 2)).count(), 3);

        for n in 1..10 {
            let left = v(n, 0).in_edges().unwrap();
            assert_eq!(left.len(), 1);
            assert_eq!(
                (left[0].source(), left[0].turn()),
                (v(n - 1, 0), Turn::Left)
            );
            let right = v(n, n).in_edges().unwrap();
            assert_eq!(right.len(), 1);
            assert_eq!(
                (right[0].source(), right[0].turn()),
                (v(n - 1, n - 1), Turn::Right)
            );
        }
    }

    #[test]
    fn root_has_no_in_edges() {
        assert_eq!(Vertex::ROOT.in_edges(), Err(Error::RootHasNoInEdges));
    }

    #[test]
    fn in_ranks_are_gapless_for_every_vertex() {
        for n in 1..=12 {
            for k in 0..=n {
                let target = v(n, k);
                let expected = if k == 0 || k == n { 1 } else { n + 2 };
                let edges = target.in_edges().unwrap();
                assert_eq!(edges.len() as u32, expected);
                let mut ranks: Vec<u32> = edges.iter().map(|e| e.in_rank()).collect();
                ranks.sort_unstable();
                assert_eq!(ranks, (0..expected).collect::<Vec<_>>());
                // every in-edge appears among the out-edges of its source
                for e in &edges {
                    assert!(e.source().out_edges().contains(e));
                }
            }
        }
    }

    #[test]
    fn every_out_edge_is_an_in_edge_of_its_target() {
        for n in 0..10 {
            for k in 0..=n {
                for e in v(n, k).out_edges() {
                    let back = EdgeRef::from_in_rank(e.target(), e.in_rank()).unwrap();
                    assert_eq!(back, e);
                }
            }
        }
    }

    #[test]
    fn copy_out_of_bundle_is_rejected() {
        assert!(EdgeRef::new(v(2, 1), Turn::Left, 2).is_err());
        assert!(EdgeRef::new(v(2, 1), Turn::Right, 1).is_ok());
    }

    #[test]
    fn small_eulerian_values() {
        assert_eq!(eulerian(0, 0), BigUint::from(1u32));
        assert_eq!(eulerian(2, 1), BigUint::from(4u32));
        assert_eq!(eulerian(3, 1), BigUint::from(11u32));
        assert_eq!(eulerian(4, 2), BigUint::from(66u32));
        assert_eq!(eulerian(3, 4), BigUint::zero());
    }

    #[test]
    fn triangle_grows_on_demand() {
        let mut t = EulerianTriangle::default();
        assert_eq!(t.get(5, 2), None);
        t.extend_to(5);
        assert_eq!(t.get(5, 2), Some(BigUint::from(302u32)));
        assert_eq!(t.get(5, 9), Some(BigUint::zero()));
        assert_eq!(
            eulerian(60, 30),
            EulerianTriangle::with_levels(60).get(60, 30).unwrap()
        );
    }

    #[test]
    fn path_counts() {
        assert_eq!(
            path_count_between(Vertex::ROOT, v(3, 1)),
            BigUint::from(11u32)
        );
        assert_eq!(path_count_between(v(4, 2), v(4, 2)), BigUint::one());
        assert_eq!(path_count_between(v(2, 1), v(3, 1)), BigUint::from(2u32));
        assert_eq!(path_count_between(v(3, 2), v(2, 1)), BigUint::zero());
        assert_eq!(path_count_between(v(3, 2), v(5, 1)), BigUint::zero());
        assert_eq!(path_count_between(v(3, 0), v(4, 3)), BigUint::zero());
    }

    #[test]
    fn eulerian_is_safe_to_read_concurrently() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || eulerian(80 + i * 5, 20)))
            .collect();
        let got: Vec<BigUint> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let t = EulerianTriangle::with_levels(120);
        for (i, g) in got.iter().enumerate() {
            assert_eq!(*g, t.get(80 + i as u32 * 5, 20).unwrap());
        }
    }
}
