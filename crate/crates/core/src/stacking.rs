//! Cutting and stacking on `[0,1)`.
//!
//! Stage `n` assigns every length-`n` path a half-open interval of width
//! `1/(n+1)!`. Going from stage `n` to `n+1`, the interval of a path ending
//! at `(n,k)` is cut into `n+2` equal slices; slice `j` (left to right)
//! belongs to the path extended by the `j`-th outgoing edge in
//! [`Vertex::out_edges`] order. Equivalently, a path's left endpoint is
//! `sum_i j_i / (i+2)!` where `j_i` is the out-index of its `i`-th edge.
//!
//! The paths ending at `(n,k)` form the stack `S(n,k)`, ordered bottom to
//! top by orbit rank. The stage map sends each level of a stack onto the
//! level above it by translation and is undefined on the top levels.

use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::adic::{orbit_rank, successor};
use crate::error::{Error, Result};
use crate::exact::{factorial, format_ratio, serde_ratio, Rational};
use crate::graph::{EdgeRef, Vertex};
use crate::path::{FinitePath, Step};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_ratio")]
    pub left: Rational,
    #[serde(with = "serde_ratio")]
    pub right: Rational,
}

impl Interval {
    pub fn width(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, u: &Rational) -> bool {
        &self.left <= u && u < &self.right
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackEntry {
    pub path: FinitePath,
    pub interval: Interval,
    /// Height inside the stack of `path.terminal()`.
    pub rank: BigUint,
}

/// Stage-`n` layout; `entries[i]` holds the `i`-th interval from the left.
#[derive(Debug, Clone)]
pub struct StackLayout {
    stage: u32,
    entries: Vec<StackEntry>,
}

fn check_unit(u: &Rational) -> Result<()> {
    if u.is_negative() || *u >= Rational::one() {
        return Err(Error::PointOutOfRange(format_ratio(u)));
    }
    Ok(())
}

/// Position of `p`'s interval from the left, `(n+1)! * left(p)`.
pub fn slot_of(p: &FinitePath) -> BigUint {
    p.edges().enumerate().fold(BigUint::zero(), |acc, (i, e)| {
        acc * (i as u32 + 2) + e.out_index()
    })
}

/// The stage-`len(p)` interval of `p`.
pub fn decode_path(p: &FinitePath) -> Interval {
    let denom = BigInt::from(factorial(p.len() as u32 + 1));
    let slot = BigInt::from(slot_of(p));
    Interval {
        left: Rational::new(slot.clone(), denom.clone()),
        right: Rational::new(slot + 1, denom),
    }
}

/// The length-`n` path whose stage-`n` interval contains `u`.
pub fn encode_point(u: &Rational, n: u32) -> Result<FinitePath> {
    check_unit(u)?;
    // mixed-radix expansion of u with radices 2, 3, ..., n+1
    let mut rest = u.clone();
    let mut path = FinitePath::root();
    for i in 0..n {
        let scaled = rest * Rational::from_integer(BigInt::from(i + 2));
        let digit = scaled.to_integer();
        rest = scaled - Rational::from_integer(digit.clone());
        let j = digit.to_u32().expect("digit below i+2");
        let e = EdgeRef::from_out_index(path.terminal(), j)?;
        path.extend(Step {
            turn: e.turn(),
            copy: e.copy(),
        })?;
    }
    Ok(path)
}

/// Builds stage `n` by repeated cutting, starting from `[0,1)` at stage 0.
pub fn build_stage(n: u32, cap: u64) -> Result<StackLayout> {
    let total = factorial(n + 1);
    if total > BigUint::from(cap) {
        return Err(Error::TooLarge {
            what: "stack layout",
            count: total.to_string(),
            cap,
        });
    }
    let mut pieces = vec![(
        FinitePath::root(),
        Interval {
            left: Rational::zero(),
            right: Rational::one(),
        },
    )];
    for level in 0..n {
        let mut next = Vec::with_capacity(pieces.len() * (level as usize + 2));
        for (path, interval) in &pieces {
            let slice = interval.width() / Rational::from_integer(BigInt::from(level + 2));
            for e in path.terminal().out_edges() {
                let left =
                    &interval.left + &slice * Rational::from_integer(BigInt::from(e.out_index()));
                let right = &left + &slice;
                let child = path.extended(Step {
                    turn: e.turn(),
                    copy: e.copy(),
                })?;
                next.push((child, Interval { left, right }));
            }
        }
        pieces = next;
    }
    let entries = pieces
        .into_iter()
        .map(|(path, interval)| {
            let rank = orbit_rank(&path);
            StackEntry {
                path,
                interval,
                rank,
            }
        })
        .collect();
    Ok(StackLayout { stage: n, entries })
}

impl StackLayout {
    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn entries(&self) -> &[StackEntry] {
        &self.entries
    }

    pub fn width(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(factorial(self.stage + 1)))
    }

    pub fn entry_for_path(&self, p: &FinitePath) -> Option<&StackEntry> {
        if p.len() != self.stage as usize {
            return None;
        }
        self.entries.get(slot_of(p).to_usize()?)
    }

    pub fn locate(&self, u: &Rational) -> Result<&StackEntry> {
        check_unit(u)?;
        let slot = (u * Rational::from_integer(BigInt::from(self.entries.len()))).floor();
        let idx = slot.to_integer().to_usize().expect("slot inside layout");
        Ok(&self.entries[idx])
    }

    /// Stack `S(n,k)` from bottom (minimal path) to top (maximal path).
    pub fn stack(&self, column: u32) -> Vec<&StackEntry> {
        let mut out: Vec<&StackEntry> = self
            .entries
            .iter()
            .filter(|e| e.path.terminal().column() == column)
            .collect();
        out.sort_by(|a, b| a.rank.cmp(&b.rank));
        out
    }

    /// Image of `u` under the stage map: the point at the same offset in the
    /// interval of the successor path, or `None` on a top level.
    pub fn stage_map(&self, u: &Rational) -> Result<Option<Rational>> {
        let entry = self.locate(u)?;
        if entry.path.is_maximal() {
            return Ok(None);
        }
        let next = successor(&entry.path)?;
        let target = self
            .entry_for_path(&next)
            .expect("successor has the same length");
        Ok(Some(&target.interval.left + (u - &entry.interval.left)))
    }

    /// `(from, to)` slot pairs of the stage map on the non-top levels.
    pub fn transfer_pairs(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.path.is_maximal())
            .map(|(i, e)| {
                let next = successor(&e.path).expect("non-maximal");
                (i, slot_of(&next).to_usize().expect("slot inside layout"))
            })
            .collect()
    }

    /// Total width of the intervals where the stage map is undefined.
    pub fn undefined_width(&self) -> Rational {
        let tops = self.entries.iter().filter(|e| e.path.is_maximal()).count();
        self.width() * Rational::from_integer(BigInt::from(tops))
    }

    /// Checks the layout invariants: intervals tile `[0,1)` in order with
    /// equal widths, and stack sizes are Eulerian numbers.
    pub fn validate(&self) -> Result<()> {
        let width = self.width();
        let mut cursor = Rational::zero();
        for (i, e) in self.entries.iter().enumerate() {
            let ok = e.interval.left == cursor
                && e.interval.width() == width
                && decode_path(&e.path) == e.interval
                && slot_of(&e.path) == BigUint::from(i);
            if !ok {
                return Err(Error::Invariant(format!(
                    "layout entry {i} ({}) is inconsistent",
                    e.path
                )));
            }
            cursor = e.interval.right.clone();
        }
        if cursor != Rational::one() {
            return Err(Error::Invariant("layout does not cover [0,1)".into()));
        }
        for k in 0..=self.stage {
            let size = self.stack(k).len();
            let expected = crate::graph::eulerian(self.stage, k);
            if BigUint::from(size) != expected {
                return Err(Error::Invariant(format!(
                    "stack {k} has {size} levels, expected {expected}"
                )));
            }
        }
        Ok(())
    }

    /// CSV dump: `path,level,column,left,right,rank`, one row per interval
    /// from left to right.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "path,level,column,left,right,rank")?;
        for e in &self.entries {
            let v: Vertex = e.path.terminal();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                e.path,
                v.level(),
                v.column(),
                format_ratio(&e.interval.left),
                format_ratio(&e.interval.right),
                e.rank
            )?;
        }
        Ok(())
    }
}

/// Midpoint of an interval, a convenient interior test point.
pub fn midpoint(i: &Interval) -> Rational {
    (&i.left + &i.right) / Rational::from_integer(BigInt::from(2))
}
