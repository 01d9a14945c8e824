//! Finite root-anchored paths and the Vershik order on them.
//!
//! A path is stored as its sequence of `(turn, copy)` steps; sources of the
//! edges, and therefore the column function `k_m`, are recomputed from the
//! turns. Text form: `L<copy>`/`R<copy>` tokens joined by `.`, e.g.
//! `R0.L1.R1`; the empty path is the empty string.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{eulerian_vertex, EdgeRef, Turn, Vertex};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub turn: Turn,
    pub copy: u32,
}

impl Step {
    pub fn left(copy: u32) -> Self {
        Step {
            turn: Turn::Left,
            copy,
        }
    }

    pub fn right(copy: u32) -> Self {
        Step {
            turn: Turn::Right,
            copy,
        }
    }
}

impl From<EdgeRef> for Step {
    fn from(e: EdgeRef) -> Self {
        Step {
            turn: e.turn(),
            copy: e.copy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinitePath {
    steps: Vec<Step>,
}

impl FinitePath {
    pub fn root() -> Self {
        FinitePath::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Result<Self> {
        let mut at = Vertex::ROOT;
        for s in &steps {
            at = EdgeRef::new(at, s.turn, s.copy)?.target();
        }
        Ok(FinitePath { steps })
    }

    /// Builds a path from explicit edges, checking that they chain from the
    /// root.
    pub fn from_edges(edges: &[EdgeRef]) -> Result<Self> {
        let mut at = Vertex::ROOT;
        for (index, e) in edges.iter().enumerate() {
            if e.source() != at {
                return Err(Error::BrokenChain {
                    index,
                    expected: at,
                    found: e.source(),
                });
            }
            at = e.target();
        }
        Ok(FinitePath {
            steps: edges
                .iter()
                .map(|e| Step {
                    turn: e.turn(),
                    copy: e.copy(),
                })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        let mut at = Vertex::ROOT;
        self.steps.iter().map(move |s| {
            let e = EdgeRef::new(at, s.turn, s.copy).expect("validated at construction");
            at = e.target();
            e
        })
    }

    pub fn edge(&self, index: usize) -> Result<EdgeRef> {
        self.edges().nth(index).ok_or(Error::IndexBeyondPath {
            index,
            len: self.len(),
        })
    }

    /// Columns `k_0 ..= k_n` of the vertices the path passes through.
    pub fn columns(&self) -> Vec<u32> {
        let mut k = 0;
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0);
        for s in &self.steps {
            if s.turn == Turn::Right {
                k += 1;
            }
            out.push(k);
        }
        out
    }

    /// `k_m`: the column of the vertex the path visits at level `m`.
    pub fn column_at(&self, m: usize) -> Result<u32> {
        if m > self.len() {
            return Err(Error::IndexBeyondPath {
                index: m,
                len: self.len(),
            });
        }
        Ok(self.steps[..m]
            .iter()
            .filter(|s| s.turn == Turn::Right)
            .count() as u32)
    }

    pub fn vertex_at(&self, m: usize) -> Result<Vertex> {
        let k = self.column_at(m)?;
        Vertex::new(m as u32, k)
    }

    pub fn terminal(&self) -> Vertex {
        self.vertex_at(self.len()).expect("len is in range")
    }

    pub fn prefix(&self, m: usize) -> Result<FinitePath> {
        if m > self.len() {
            return Err(Error::IndexBeyondPath {
                index: m,
                len: self.len(),
            });
        }
        Ok(FinitePath {
            steps: self.steps[..m].to_vec(),
        })
    }

    pub fn starts_with(&self, prefix: &FinitePath) -> bool {
        self.steps.starts_with(&prefix.steps)
    }

    /// Appends one edge leaving the terminal vertex.
    pub fn extend(&mut self, step: Step) -> Result<()> {
        EdgeRef::new(self.terminal(), step.turn, step.copy)?;
        self.steps.push(step);
        Ok(())
    }

    pub fn extended(&self, step: Step) -> Result<FinitePath> {
        let mut p = self.clone();
        p.extend(step)?;
        Ok(p)
    }

    /// Concatenates `self` with `tail`, which must start where `self` ends.
    pub(crate) fn concat_unchecked(mut self, tail: &[Step]) -> FinitePath {
        self.steps.extend_from_slice(tail);
        self
    }

    pub fn is_maximal(&self) -> bool {
        self.edges().all(EdgeRef::is_max_into_target)
    }

    pub fn is_minimal(&self) -> bool {
        self.edges().all(EdgeRef::is_min_into_target)
    }
}

impl fmt::Display for FinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}{}", s.turn.letter(), s.copy)?;
        }
        Ok(())
    }
}

impl FromStr for FinitePath {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Ok(FinitePath::root());
        }
        let steps = text
            .split('.')
            .map(|tok| {
                let bad = || Error::Parse(format!("bad path token {tok:?}"));
                let mut chars = tok.chars();
                let turn = match chars.next() {
                    Some('L') => Turn::Left,
                    Some('R') => Turn::Right,
                    _ => return Err(bad()),
                };
                let digits = chars.as_str();
                // canonical form only: no sign, no leading zeros
                if digits.is_empty()
                    || !digits.bytes().all(|b| b.is_ascii_digit())
                    || (digits.len() > 1 && digits.starts_with('0'))
                {
                    return Err(bad());
                }
                let copy = digits.parse().map_err(|_| bad())?;
                Ok(Step { turn, copy })
            })
            .collect::<Result<Vec<_>>>()?;
        FinitePath::from_steps(steps)
    }
}

impl Serialize for FinitePath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FinitePath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The unique path into `v` whose every edge has in-rank 0: left turns on
/// copy 0 along column 0, then right turns.
pub fn min_path_to(v: Vertex) -> FinitePath {
    let (n, k) = (v.level(), v.column());
    let mut steps = vec![Step::left(0); (n - k) as usize];
    steps.extend(std::iter::repeat_n(Step::right(0), k as usize));
    FinitePath { steps }
}

/// The unique path into `v` whose every edge has the largest in-rank: right
/// turns along the diagonal, then left turns on the last copy.
pub fn max_path_to(v: Vertex) -> FinitePath {
    let (n, k) = (v.level(), v.column());
    let mut steps = vec![Step::right(0); k as usize];
    steps.extend(std::iter::repeat_n(Step::left(k), (n - k) as usize));
    FinitePath { steps }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VershikOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl From<Ordering> for VershikOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => VershikOrdering::Less,
            Ordering::Equal => VershikOrdering::Equal,
            Ordering::Greater => VershikOrdering::Greater,
        }
    }
}

/// Compares two equal-length paths at the last index where they differ;
/// paths ending in different vertices are incomparable.
pub fn vershik_compare(p: &FinitePath, q: &FinitePath) -> Result<VershikOrdering> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let Some(last) = (0..p.len()).rev().find(|&i| p.steps[i] != q.steps[i]) else {
        return Ok(VershikOrdering::Equal);
    };
    let a = p.edge(last)?;
    let b = q.edge(last)?;
    if a.target() != b.target() {
        return Ok(VershikOrdering::Incomparable);
    }
    Ok(a.in_rank().cmp(&b.in_rank()).into())
}

/// All paths into `v` in increasing Vershik order.
pub fn enumerate_paths_to(v: Vertex, cap: u64) -> Result<Vec<FinitePath>> {
    let count = eulerian_vertex(v);
    if count > BigUint::from(cap) {
        return Err(Error::TooLarge {
            what: "path enumeration",
            count: count.to_string(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    collect_paths(v, &mut Vec::new(), &mut out);
    Ok(out)
}

// `suffix` holds the steps below the current vertex, deepest last-first.
fn collect_paths(v: Vertex, suffix: &mut Vec<Step>, out: &mut Vec<FinitePath>) {
    if v.is_root() {
        out.push(FinitePath {
            steps: suffix.iter().rev().copied().collect(),
        });
        return;
    }
    for e in v.in_edges().expect("non-root") {
        suffix.push(Step {
            turn: e.turn(),
            copy: e.copy(),
        });
        collect_paths(e.source(), suffix, out);
        suffix.pop();
    }
}

/// Every path of length `n`, grouped by terminal column and in Vershik order
/// inside each group.
pub fn enumerate_level(n: u32, cap: u64) -> Result<Vec<FinitePath>> {
    let total = crate::exact::factorial(n + 1);
    if total > BigUint::from(cap) {
        return Err(Error::TooLarge {
            what: "level enumeration",
            count: total.to_string(),
            cap,
        });
    }
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(enumerate_paths_to(Vertex::new(n, k)?, cap)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::eulerian;
    use proptest::prelude::*;

    fn v(n: u32, k: u32) -> Vertex {
        Vertex::new(n, k).unwrap()
    }

    fn p(text: &str) -> FinitePath {
        text.parse().unwrap()
    }

    #[test]
    fn columns_follow_turns() {
        assert_eq!(FinitePath::root().column_at(0).unwrap(), 0);
        let path = p("R0.L1.R1");
        assert_eq!(path.column_at(3).unwrap(), 2);
        assert_eq!(path.columns(), vec![0, 1, 1, 2]);
        assert_eq!(path.terminal(), v(3, 2));
        assert_eq!(
            path.column_at(4),
            Err(Error::IndexBeyondPath { index: 4, len: 3 })
        );
    }

    #[test]
    fn chaining_is_validated() {
        let a = EdgeRef::new(Vertex::ROOT, Turn::Right, 0).unwrap();
        let b = EdgeRef::new(v(1, 0), Turn::Left, 0).unwrap();
        assert!(matches!(
            FinitePath::from_edges(&[a, b]),
            Err(Error::BrokenChain { index: 1, .. })
        ));
        // copy 1 does not exist on the root's left bundle
        assert!("L1".parse::<FinitePath>().is_err());
    }

    #[test]
    fn text_encoding() {
        let path = p("R0.L1.R1");
        assert_eq!(path.to_string(), "R0.L1.R1");
        // (2,1) has only two right-turn copies
        assert!("R0.L1.R2".parse::<FinitePath>().is_err());
        assert_eq!(FinitePath::root().to_string(), "");
        for bad in ["R", "X0", "R01", "R+1", "R0..L0", "R0.", "r0"] {
            assert!(bad.parse::<FinitePath>().is_err(), "{bad}");
        }
        let json = serde_json::to_string(&path).unwrap();
        assert_eq!(json, "\"R0.L1.R1\"");
        assert_eq!(serde_json::from_str::<FinitePath>(&json).unwrap(), path);
    }

    #[test]
    fn straight_paths_are_both_extremal() {
        for n in 0..10 {
            let lefts = FinitePath::from_steps(vec![Step::left(0); n]).unwrap();
            let rights = FinitePath::from_steps(vec![Step::right(0); n]).unwrap();
            for path in [lefts, rights] {
                assert!(path.is_maximal() && path.is_minimal());
            }
        }
    }

    #[test]
    fn extremal_paths_into_three_one() {
        let min = min_path_to(v(3, 1));
        let max = max_path_to(v(3, 1));
        let last_min = min.edge(2).unwrap();
        assert_eq!(
            (last_min.source(), last_min.turn(), last_min.copy()),
            (v(2, 0), Turn::Right, 0)
        );
        assert_eq!(min.prefix(2).unwrap(), min_path_to(v(2, 0)));
        let last_max = max.edge(2).unwrap();
        assert_eq!(
            (last_max.source(), last_max.turn(), last_max.copy()),
            (v(2, 1), Turn::Left, 1)
        );
        assert_eq!(max.prefix(2).unwrap(), max_path_to(v(2, 1)));
        assert!(min.is_minimal() && !min.is_maximal());
        assert!(max.is_maximal() && !max.is_minimal());
        assert_eq!(min_path_to(v(5, 0)).to_string(), "L0.L0.L0.L0.L0");
    }

    #[test]
    fn one_maximal_path_per_vertex() {
        for n in 0..=8u32 {
            let paths = enumerate_level(n, DEFAULT_ENUMERATION_CAP).unwrap();
            let maximal: Vec<_> = paths.iter().filter(|q| q.is_maximal()).collect();
            let minimal: Vec<_> = paths.iter().filter(|q| q.is_minimal()).collect();
            assert_eq!(maximal.len() as u32, n + 1);
            assert_eq!(minimal.len() as u32, n + 1);
            for k in 0..=n {
                assert!(maximal.contains(&&max_path_to(v(n, k))));
                assert!(minimal.contains(&&min_path_to(v(n, k))));
            }
        }
    }

    #[test]
    fn fiber_of_two_one() {
        let fiber = enumerate_paths_to(v(2, 1), DEFAULT_ENUMERATION_CAP).unwrap();
        let text: Vec<String> = fiber.iter().map(ToString::to_string).collect();
        // in-rank of the last edge decides first, then the first edge
        assert_eq!(text, ["L0.R0", "L0.R1", "R0.L0", "R0.L1"]);
        assert_eq!(enumerate_paths_to(v(1, 0), 10).unwrap().len(), 1);
        assert_eq!(enumerate_paths_to(v(4, 2), 1000).unwrap().len(), 66);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_paths_to(v(10, 5), 1000),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn comparison_cases() {
        let a = p("L0.R0");
        assert_eq!(vershik_compare(&a, &a).unwrap(), VershikOrdering::Equal);
        assert_eq!(
            vershik_compare(&a, &p("R0.L0")).unwrap(),
            VershikOrdering::Less
        );
        assert_eq!(
            vershik_compare(&p("R0.L1"), &p("R0.L0")).unwrap(),
            VershikOrdering::Greater
        );
        assert_eq!(
            vershik_compare(&p("L0.L0"), &p("R0.R0")).unwrap(),
            VershikOrdering::Incomparable
        );
        assert!(matches!(
            vershik_compare(&a, &p("L0")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn comparator_is_a_total_order_on_fibers() {
        for n in 1..=6u32 {
            for k in 0..=n {
                let fiber = enumerate_paths_to(v(n, k), DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(fiber.len() as u64, eulerian(n, k).to_u64().unwrap());
                for (i, a) in fiber.iter().enumerate() {
                    for (j, b) in fiber.iter().enumerate() {
                        let expected: VershikOrdering = i.cmp(&j).into();
                        assert_eq!(vershik_compare(a, b).unwrap(), expected);
                    }
                }
                assert_eq!(fiber.first().unwrap(), &min_path_to(v(n, k)));
                assert_eq!(fiber.last().unwrap(), &max_path_to(v(n, k)));
            }
        }
    }

    // The verbal description of maximal paths: a straight path, or right
    // turns up to some level followed by maximal left-turn edges only.
    fn verbal_maximal(path: &FinitePath) -> bool {
        let rights = path
            .steps()
            .iter()
            .take_while(|s| s.turn == Turn::Right)
            .count();
        let j = rights as u32;
        path.steps()[rights..].iter().all(|s| *s == Step::left(j))
    }

    fn verbal_minimal(path: &FinitePath) -> bool {
        let lefts = path
            .steps()
            .iter()
            .take_while(|s| s.turn == Turn::Left)
            .count();
        path.steps()[..lefts].iter().all(|s| s.copy == 0)
            && path.steps()[lefts..].iter().all(|s| *s == Step::right(0))
    }

    #[test]
    fn extremal_sets_match_prefix_characterization() {
        for n in 0..=8u32 {
            for path in enumerate_level(n, DEFAULT_ENUMERATION_CAP).unwrap() {
                assert_eq!(path.is_maximal(), verbal_maximal(&path), "{path}");
                assert_eq!(path.is_minimal(), verbal_minimal(&path), "{path}");
            }
        }
    }

    fn arb_path(max_len: usize) -> impl Strategy<Value = FinitePath> {
        proptest::collection::vec(any::<(bool, u32)>(), 0..max_len).prop_map(|raw| {
            let mut path = FinitePath::root();
            for (right, c) in raw {
                let at = path.terminal();
                let turn = if right { Turn::Right } else { Turn::Left };
                let copy = c % at.bundle_size(turn);
                path.extend(Step { turn, copy }).unwrap();
            }
            path
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(path in arb_path(40)) {
            let text = path.to_string();
            prop_assert_eq!(text.parse::<FinitePath>().unwrap(), path.clone());
            prop_assert_eq!(text.parse::<FinitePath>().unwrap().to_string(), text);
        }

        #[test]
        fn column_increments_are_zero_or_one(path in arb_path(40)) {
            let cols = path.columns();
            for m in 0..path.len() {
                let d = cols[m + 1] - cols[m];
                prop_assert!(d <= 1);
                prop_assert_eq!(path.column_at(m).unwrap(), cols[m]);
            }
        }
    }
}
