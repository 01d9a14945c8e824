//! Edge-weight systems and the symmetric measure.
//!
//! A weight system assigns each edge leaving level `n` a positive rational;
//! the measure of a cylinder is the product of the weights along it. The
//! symmetric system gives every edge from level `n` the weight `1/(n+2)`, so
//! every length-`n` cylinder has measure `1/(n+1)!` and the column process
//! `k_n` is a Markov chain with
//! `P(k_{n+1} = k) = (k+1)/(n+2)`, `P(k_{n+1} = k+1) = (n-k+1)/(n+2)`.
//!
//! Everything here is exact; see [`column_distribution_f64`] for the
//! floating-point DP used at levels where exact arithmetic is too slow.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::adic::predecessor;
use crate::error::{Error, Result};
use crate::exact::{factorial, ratio, serde_opt_ratio, serde_ratio, uint_ratio, Rational};
use crate::graph::{eulerian, EdgeRef, Turn, Vertex};
use crate::path::{enumerate_level, FinitePath};

#[derive(Debug, Clone)]
enum BundleWeights {
    Symmetric,
    /// `table[n][k] = [left, right]` for the bundles leaving `(n,k)`.
    Table(Vec<Vec<[Rational; 2]>>),
}

/// Positive rational weights on the edges of the Euler graph.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    bundles: BundleWeights,
    overrides: BTreeMap<EdgeRef, Rational>,
}

impl WeightSystem {
    pub fn symmetric() -> Self {
        WeightSystem {
            bundles: BundleWeights::Symmetric,
            overrides: BTreeMap::new(),
        }
    }

    /// One `[left, right]` weight pair per vertex, rows indexed by level.
    pub fn from_bundle_table(table: Vec<Vec<[Rational; 2]>>) -> Result<Self> {
        for (n, row) in table.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::InvalidArgument(format!(
                    "weight table row {n} has {} entries, expected {}",
                    row.len(),
                    n + 1
                )));
            }
            for (k, pair) in row.iter().enumerate() {
                for w in pair {
                    if !w.is_positive() {
                        return Err(Error::InvalidWeight {
                            at: Vertex::new(n as u32, k as u32)?,
                            weight: w.to_string(),
                        });
                    }
                }
            }
        }
        Ok(WeightSystem {
            bundles: BundleWeights::Table(table),
            overrides: BTreeMap::new(),
        })
    }

    /// The symmetric system's weights written out as a table up to `n_max`.
    pub fn symmetric_table(n_max: u32) -> Vec<Vec<[Rational; 2]>> {
        (0..=n_max)
            .map(|n| {
                let w = ratio(1, n as i64 + 2);
                vec![[w.clone(), w]; n as usize + 1]
            })
            .collect()
    }

    /// Replaces the weight of a single edge.
    pub fn with_edge_weight(mut self, edge: EdgeRef, weight: Rational) -> Result<Self> {
        if !weight.is_positive() {
            return Err(Error::InvalidWeight {
                at: edge.source(),
                weight: weight.to_string(),
            });
        }
        self.overrides.insert(edge, weight);
        Ok(self)
    }

    /// Highest level whose outgoing edges carry weights.
    pub fn max_level(&self) -> Option<u32> {
        match &self.bundles {
            BundleWeights::Symmetric => None,
            BundleWeights::Table(t) => Some(t.len() as u32 - 1),
        }
    }

    pub fn weight(&self, edge: EdgeRef) -> Option<Rational> {
        if let Some(w) = self.overrides.get(&edge) {
            return Some(w.clone());
        }
        let src = edge.source();
        match &self.bundles {
            BundleWeights::Symmetric => Some(ratio(1, src.level() as i64 + 2)),
            BundleWeights::Table(t) => {
                let pair = t.get(src.level() as usize)?.get(src.column() as usize)?;
                Some(match edge.turn() {
                    Turn::Left => pair[0].clone(),
                    Turn::Right => pair[1].clone(),
                })
            }
        }
    }

    /// Total weight of each bundle leaving `v`: `(left, right)`.
    pub fn transition_probs(&self, v: Vertex) -> Option<(Rational, Rational)> {
        let mut left = Rational::zero();
        let mut right = Rational::zero();
        for e in v.out_edges() {
            let w = self.weight(e)?;
            match e.turn() {
                Turn::Left => left += w,
                Turn::Right => right += w,
            }
        }
        Some((left, right))
    }
}

/// Law of `k_n`: `probabilities[k] = P(k_n = k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnDistribution {
    pub level: u32,
    #[serde(with = "ratio_vec")]
    pub probabilities: Vec<Rational>,
}

mod ratio_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{format_ratio, parse_ratio, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_ratio).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_ratio(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl ColumnDistribution {
    pub fn probability(&self, k: u32) -> Rational {
        self.probabilities
            .get(k as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.probabilities
            .iter()
            .fold(Rational::zero(), |acc, p| acc + p)
    }

    /// `E[f(k_n)]`.
    pub fn expectation(&self, f: impl Fn(u32) -> Rational) -> Rational {
        self.probabilities
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, p)| acc + p * f(k as u32))
    }

    /// `P(|u_n| >= eps * n)` where `u_n = 2 k_n - n`.
    pub fn tail(&self, eps: &Rational) -> Rational {
        let n = Rational::from_integer(BigInt::from(self.level));
        let threshold = eps * n;
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let u = 2 * *k as i64 - self.level as i64;
                Rational::from_integer(BigInt::from(u.abs())) >= threshold
            })
            .fold(Rational::zero(), |acc, (_, p)| acc + p)
    }
}

/// The measure of the cylinder of `p`: product of its edge weights.
pub fn cylinder_measure(ws: &WeightSystem, p: &FinitePath) -> Option<Rational> {
    p.edges()
        .try_fold(Rational::one(), |acc, e| Some(acc * ws.weight(e)?))
}

/// `P(k_{n+1} = k)` and `P(k_{n+1} = k+1)` under the symmetric measure.
pub fn transition_probs(n: u32, k: u32) -> (Rational, Rational) {
    (
        ratio(k as i64 + 1, n as i64 + 2),
        ratio((n - k) as i64 + 1, n as i64 + 2),
    )
}

/// `P(k_n = k) = A(n,k) / (n+1)!`.
pub fn column_distribution(n: u32) -> ColumnDistribution {
    let total = factorial(n + 1);
    ColumnDistribution {
        level: n,
        probabilities: (0..=n)
            .map(|k| uint_ratio(&eulerian(n, k), &total))
            .collect(),
    }
}

/// Law of `k_n` from the forward recursion over [`transition_probs`].
pub fn column_distribution_dp(n: u32) -> ColumnDistribution {
    let mut dist = vec![Rational::one()];
    for level in 0..n {
        dist = step_distribution(level, &dist);
    }
    ColumnDistribution {
        level: n,
        probabilities: dist,
    }
}

fn step_distribution(level: u32, dist: &[Rational]) -> Vec<Rational> {
    let mut next = vec![Rational::zero(); dist.len() + 1];
    for (k, p) in dist.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (left, right) = transition_probs(level, k as u32);
        next[k] += p * left;
        next[k + 1] += p * right;
    }
    next
}

/// Floating-point law of `k_n`. Every update is a convex combination of
/// non-negative numbers, so relative error stays within a few `n * eps`.
pub fn column_distribution_f64(n: u32) -> Vec<f64> {
    let mut dist = vec![1.0f64];
    let mut next = Vec::with_capacity(n as usize + 1);
    for level in 0..n {
        next.clear();
        next.resize(dist.len() + 1, 0.0);
        let denom = level as f64 + 2.0;
        for (k, &p) in dist.iter().enumerate() {
            let left = (k as f64 + 1.0) / denom;
            next[k] += p * left;
            next[k + 1] += p * (1.0 - left);
        }
        std::mem::swap(&mut dist, &mut next);
    }
    dist
}

/// Smallest integer `t` with `t >= eps * n`; `|u_n| >= eps * n` holds
/// exactly when `|u_n| >= t`.
pub fn tail_threshold(n: u32, eps: &Rational) -> u64 {
    let t = (eps * Rational::from_integer(BigInt::from(n)))
        .ceil()
        .to_integer();
    if t.is_negative() {
        0
    } else {
        t.to_u64().unwrap_or(u64::MAX)
    }
}

/// `P(|u_n| >= eps * n)` from [`column_distribution_f64`].
pub fn column_tail_f64(n: u32, eps: &Rational) -> f64 {
    let threshold = tail_threshold(n, eps);
    column_distribution_f64(n)
        .iter()
        .enumerate()
        .filter(|(k, _)| (2 * *k as i64 - n as i64).unsigned_abs() >= threshold)
        .map(|(_, p)| *p)
        .sum()
}

/// Chebyshev bound `V(u_n) / (n eps)^2 = (n+2) / (3 n^2 eps^2)`.
pub fn chebyshev_bound(n: u32, eps: f64) -> f64 {
    let n = n as f64;
    (n + 2.0) / (3.0 * n * n * eps * eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingWeight {
        edge: String,
    },
    ParallelEdges {
        source: Vertex,
        target: Vertex,
        copy: u32,
        #[serde(with = "serde_ratio")]
        expected: Rational,
        #[serde(with = "serde_ratio")]
        found: Rational,
    },
    Diamond {
        top: Vertex,
        #[serde(with = "serde_ratio")]
        u1: Rational,
        #[serde(with = "serde_ratio")]
        u2: Rational,
        #[serde(with = "serde_ratio")]
        v1: Rational,
        #[serde(with = "serde_ratio")]
        v2: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n_max: u32,
    pub bundles_checked: u64,
    pub diamonds_checked: u64,
    pub violation: Option<Violation>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn edge_name(e: EdgeRef) -> String {
    format!("{}{}{}", e.source(), e.turn().letter(), e.copy())
}

/// Checks that parallel edges carry equal weights on levels `0..=n_max` and
/// that every diamond with top `(n,k)`, `n < n_max`, satisfies
/// `u1 * v1 = u2 * v2`. Stops at the first violation.
#[allow(clippy::result_large_err)]
pub fn check_invariance_conditions(ws: &WeightSystem, n_max: u32) -> InvarianceReport {
    let mut report = InvarianceReport {
        n_max,
        bundles_checked: 0,
        diamonds_checked: 0,
        violation: None,
    };
    let weight = |e: EdgeRef| {
        ws.weight(e)
            .ok_or(Violation::MissingWeight { edge: edge_name(e) })
    };

    let run = |report: &mut InvarianceReport| -> std::result::Result<(), Violation> {
        for n in 0..=n_max {
            for k in 0..=n {
                let v = Vertex::new(n, k).expect("k <= n");
                for turn in [Turn::Left, Turn::Right] {
                    let first = EdgeRef::new(v, turn, 0).expect("copy 0 exists");
                    let expected = weight(first)?;
                    for copy in 1..v.bundle_size(turn) {
                        let e = EdgeRef::new(v, turn, copy).expect("copy in bundle");
                        let found = weight(e)?;
                        if found != expected {
                            return Err(Violation::ParallelEdges {
                                source: v,
                                target: e.target(),
                                copy,
                                expected,
                                found,
                            });
                        }
                    }
                    report.bundles_checked += 1;
                }
            }
        }
        for n in 0..n_max {
            for k in 0..=n {
                let top = Vertex::new(n, k).expect("k <= n");
                let u1 = weight(EdgeRef::new(top, Turn::Left, 0).expect("edge"))?;
                let u2 = weight(EdgeRef::new(top, Turn::Right, 0).expect("edge"))?;
                let v1 =
                    weight(EdgeRef::new(top.child(Turn::Left), Turn::Right, 0).expect("edge"))?;
                let v2 =
                    weight(EdgeRef::new(top.child(Turn::Right), Turn::Left, 0).expect("edge"))?;
                if &u1 * &v1 != &u2 * &v2 {
                    return Err(Violation::Diamond {
                        top,
                        u1,
                        u2,
                        v1,
                        v2,
                    });
                }
                report.diamonds_checked += 1;
            }
        }
        Ok(())
    };
    if let Err(v) = run(&mut report) {
        report.violation = Some(v);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushforwardMismatch {
    pub cylinder: FinitePath,
    pub preimage: FinitePath,
    #[serde(with = "serde_ratio")]
    pub measure: Rational,
    #[serde(with = "serde_ratio")]
    pub preimage_measure: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushforwardReport {
    pub level: u32,
    pub cylinders: u64,
    pub matched: u64,
    pub minimal: u64,
    pub maximal: u64,
    #[serde(with = "serde_ratio")]
    pub minimal_mass: Rational,
    #[serde(with = "serde_ratio")]
    pub maximal_mass: Rational,
    pub mismatch: Option<PushforwardMismatch>,
}

impl PushforwardReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
            && self.matched + self.minimal == self.cylinders
            && self.minimal == self.maximal
            && self.minimal_mass == self.maximal_mass
    }
}

/// Checks `mu(T^-1 C) = mu(C)` for every length-`n` cylinder `C`.
///
/// For a non-minimal `C` the preimage is the cylinder of its predecessor.
/// The minimal cylinders are images of points whose length-`n` prefix is
/// maximal; those boundary sets are only compared by count and total mass.
pub fn pushforward_check(ws: &WeightSystem, n: u32, cap: u64) -> Result<PushforwardReport> {
    let paths = enumerate_level(n, cap)?;
    let mut report = PushforwardReport {
        level: n,
        cylinders: paths.len() as u64,
        matched: 0,
        minimal: 0,
        maximal: 0,
        minimal_mass: Rational::zero(),
        maximal_mass: Rational::zero(),
        mismatch: None,
    };
    let measure = |p: &FinitePath| {
        cylinder_measure(ws, p)
            .ok_or_else(|| Error::InvalidArgument(format!("no weights for cylinder {p}")))
    };
    for c in &paths {
        let m = measure(c)?;
        if c.is_maximal() {
            report.maximal += 1;
            report.maximal_mass += &m;
        }
        if c.is_minimal() {
            report.minimal += 1;
            report.minimal_mass += &m;
            continue;
        }
        let pre = predecessor(c)?;
        let pm = measure(&pre)?;
        if pm == m {
            report.matched += 1;
        } else if report.mismatch.is_none() {
            report.mismatch = Some(PushforwardMismatch {
                cylinder: c.clone(),
                preimage: pre,
                measure: m,
                preimage_measure: pm,
            });
        }
    }
    Ok(report)
}

/// One row of [`exact_moments`]; `u_n = 2 k_n - n`, `S_n = (n+1) u_n`,
/// `X_n = S_n - S_{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    #[serde(with = "serde_ratio")]
    pub mean_u: Rational,
    #[serde(with = "serde_ratio")]
    pub mean_u2: Rational,
    #[serde(with = "serde_ratio")]
    pub var_u: Rational,
    #[serde(with = "serde_ratio")]
    pub mean_s2: Rational,
    /// `E[S_n S_{n-1}]`, absent at `n = 0`.
    #[serde(with = "serde_opt_ratio")]
    pub cross_s: Option<Rational>,
    /// `E[X_n^2]`, absent at `n = 0`.
    #[serde(with = "serde_opt_ratio")]
    pub mean_x2: Option<Rational>,
}

/// Moments of `u_n`, `S_n` and the increments `X_n` for `n = 0..=n_max`,
/// by exact forward DP over the column law. The cross moment
/// `E[S_n S_{n-1}]` is computed from the one-step kernel, not assumed.
pub fn exact_moments(n_max: u32) -> Vec<MomentRow> {
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    let mut dist = vec![Rational::one()];
    let mut prev: Option<(Vec<Rational>, Rational)> = None;
    for n in 0..=n_max {
        let law = ColumnDistribution {
            level: n,
            probabilities: dist,
        };
        let u = |k: u32| Rational::from_integer(BigInt::from(2 * k as i64 - n as i64));
        let mean_u = law.expectation(u);
        let mean_u2 = law.expectation(|k| u(k) * u(k));
        let var_u = &mean_u2 - &mean_u * &mean_u;
        let scale = ratio(n as i64 + 1, 1);
        let mean_s2 = &scale * &scale * &mean_u2;

        let (cross_s, mean_x2) = match &prev {
            None => (None, None),
            Some((prev_dist, prev_s2)) => {
                // E[S_n S_{n-1}] = sum_k P(k_{n-1}=k) n u_{n-1}(k) (n+1) E[u_n | k_{n-1}=k]
                let m = n - 1;
                let cross = prev_dist
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, p)| {
                        let u_prev = 2 * k as i64 - m as i64;
                        let (left, right) = transition_probs(m, k as u32);
                        let cond = left * ratio(u_prev - 1, 1) + right * ratio(u_prev + 1, 1);
                        acc + p * ratio(n as i64 * u_prev, 1) * &scale * cond
                    });
                let x2 = &mean_s2 - ratio(2, 1) * &cross + prev_s2;
                (Some(cross), Some(x2))
            }
        };
        rows.push(MomentRow {
            n,
            mean_u,
            mean_u2,
            var_u,
            mean_s2: mean_s2.clone(),
            cross_s,
            mean_x2,
        });
        dist = if n < n_max {
            step_distribution(n, &law.probabilities)
        } else {
            Vec::new()
        };
        prev = Some((law.probabilities, mean_s2));
    }
    rows
}

/// `E[D_{n+1} - D_n | k_n = k, k_n' = k2]` for two independent walks with
/// `D_n = |k_n - k_n'|`, summed over the four joint turn outcomes.
pub fn pair_drift(n: u32, k: u32, k2: u32) -> Rational {
    let (l1, r1) = transition_probs(n, k);
    let (l2, r2) = transition_probs(n, k2);
    let d0 = (k as i64 - k2 as i64).abs();
    let mut drift = Rational::zero();
    for (step1, p1) in [(0i64, &l1), (1, &r1)] {
        for (step2, p2) in [(0i64, &l2), (1, &r2)] {
            let d1 = ((k as i64 + step1) - (k2 as i64 + step2)).abs();
            drift += p1 * p2 * ratio(d1 - d0, 1);
        }
    }
    drift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{max_path_to, min_path_to, DEFAULT_ENUMERATION_CAP};
    use proptest::prelude::*;

    #[test]
    fn symmetric_cylinders() {
        let ws = WeightSystem::symmetric();
        for p in ["L0", "R0"] {
            assert_eq!(
                cylinder_measure(&ws, &p.parse().unwrap()),
                Some(ratio(1, 2))
            );
        }
        assert_eq!(
            cylinder_measure(&ws, &"R0.L1.R0".parse().unwrap()),
            Some(ratio(1, 24))
        );
        assert_eq!(
            cylinder_measure(&ws, &FinitePath::root()),
            Some(Rational::one())
        );
    }

    #[test]
    fn level_masses_sum_to_one() {
        let ws = WeightSystem::symmetric();
        for n in 0..=6 {
            let total = enumerate_level(n, DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .iter()
                .fold(Rational::zero(), |acc, p| {
                    acc + cylinder_measure(&ws, p).unwrap()
                });
            assert_eq!(total, Rational::one());
        }
        // counting identity: (n+1)! cylinders of mass 1/(n+1)!
        for n in 0..=10u32 {
            let count: num_bigint::BigUint = (0..=n).map(|k| eulerian(n, k)).sum();
            assert_eq!(count, factorial(n + 1));
        }
    }

    #[test]
    fn symmetric_system_is_invariant() {
        let report = check_invariance_conditions(&WeightSystem::symmetric(), 50);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.diamonds_checked, (1..=50).sum::<u64>());
        let tabled = WeightSystem::from_bundle_table(WeightSystem::symmetric_table(12)).unwrap();
        assert!(check_invariance_conditions(&tabled, 12).passed());
    }

    #[test]
    fn perturbed_bundle_breaks_a_diamond() {
        let mut table = WeightSystem::symmetric_table(6);
        table[3][1][1] = ratio(1, 7);
        let ws = WeightSystem::from_bundle_table(table).unwrap();
        let report = check_invariance_conditions(&ws, 6);
        match report.violation {
            Some(Violation::Diamond { top, .. }) => assert_eq!(top, Vertex::new(2, 1).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturbed_copy_breaks_parallel_edges() {
        let edge = EdgeRef::new(Vertex::new(4, 2).unwrap(), Turn::Left, 2).unwrap();
        let ws = WeightSystem::symmetric()
            .with_edge_weight(edge, ratio(1, 5))
            .unwrap();
        let report = check_invariance_conditions(&ws, 6);
        assert!(matches!(
            report.violation,
            Some(Violation::ParallelEdges { copy: 2, .. })
        ));
        assert!(WeightSystem::symmetric()
            .with_edge_weight(edge, ratio(0, 1))
            .is_err());
    }

    #[test]
    fn equal_products_pass_a_diamond() {
        // u1 = u2 = 1/3 at (1,0), v1 = v2 = 1/4 below it
        let mut table = WeightSystem::symmetric_table(2);
        table[1][0] = [ratio(1, 3), ratio(1, 3)];
        table[2][0][1] = ratio(1, 4);
        table[2][1][0] = ratio(1, 4);
        let ws = WeightSystem::from_bundle_table(table).unwrap();
        let report = check_invariance_conditions(&ws, 2);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn missing_weights_are_reported() {
        let ws = WeightSystem::from_bundle_table(WeightSystem::symmetric_table(3)).unwrap();
        assert!(matches!(
            check_invariance_conditions(&ws, 5).violation,
            Some(Violation::MissingWeight { .. })
        ));
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(WeightSystem::from_bundle_table(vec![vec![[ratio(1, 2), ratio(-1, 2)]]]).is_err());
        assert!(WeightSystem::from_bundle_table(vec![vec![]]).is_err());
    }

    #[test]
    fn pushforward_small_levels() {
        let ws = WeightSystem::symmetric();
        for n in [1, 4, 6] {
            let r = pushforward_check(&ws, n, DEFAULT_ENUMERATION_CAP).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.minimal, n as u64 + 1);
            assert_eq!(
                r.minimal_mass,
                uint_ratio(&(n + 1).into(), &factorial(n + 1))
            );
        }
    }

    #[test]
    fn pushforward_detects_non_invariant_weights() {
        let mut table = WeightSystem::symmetric_table(4);
        table[0][0] = [ratio(1, 3), ratio(2, 3)];
        let ws = WeightSystem::from_bundle_table(table).unwrap();
        let r = pushforward_check(&ws, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(!r.passed());
        assert!(r.mismatch.is_some());
    }

    #[test]
    fn transition_examples() {
        assert_eq!(transition_probs(0, 0), (ratio(1, 2), ratio(1, 2)));
        assert_eq!(transition_probs(2, 0), (ratio(1, 4), ratio(3, 4)));
        let ws = WeightSystem::symmetric();
        for n in 0..20 {
            for k in 0..=n {
                let (l, r) = transition_probs(n, k);
                assert_eq!(&l + &r, Rational::one());
                assert_eq!(
                    ws.transition_probs(Vertex::new(n, k).unwrap()),
                    Some((l, r))
                );
            }
        }
    }

    #[test]
    fn column_laws() {
        assert_eq!(
            column_distribution(1).probabilities,
            vec![ratio(1, 2), ratio(1, 2)]
        );
        assert_eq!(
            column_distribution(2).probabilities,
            vec![ratio(1, 6), ratio(4, 6), ratio(1, 6)]
        );
        assert_eq!(
            column_distribution(3).probabilities,
            vec![ratio(1, 24), ratio(11, 24), ratio(11, 24), ratio(1, 24)]
        );
        for n in 0..=30 {
            let a = column_distribution(n);
            assert_eq!(a, column_distribution_dp(n));
            assert_eq!(a.total(), Rational::one());
        }
    }

    #[test]
    fn float_dp_tracks_exact_law() {
        let exact = column_distribution(150);
        let float = column_distribution_f64(150);
        for (k, p) in exact.probabilities.iter().enumerate() {
            let e = crate::exact::to_f64(p);
            assert!((float[k] - e).abs() <= 1e-12 * e.max(1e-300), "k={k}");
        }
        let eps = ratio(3, 10);
        let exact_tail = crate::exact::to_f64(&exact.tail(&eps));
        assert!((column_tail_f64(150, &eps) - exact_tail).abs() <= 1e-12 * exact_tail);
        assert_eq!(tail_threshold(150, &eps), 45);
        assert_eq!(tail_threshold(151, &eps), 46);
    }

    #[test]
    fn tails() {
        let d = column_distribution(3);
        // |u_3| in {3,1,1,3}; |u| >= 1.5 keeps k = 0, 3
        assert_eq!(d.tail(&ratio(1, 2)), ratio(2, 24));
        assert_eq!(d.tail(&ratio(0, 1)), Rational::one());
        assert_eq!(
            column_distribution(40).tail(&ratio(11, 10)),
            Rational::zero()
        );
        assert!(chebyshev_bound(200, 0.1) < chebyshev_bound(100, 0.1));
    }

    #[test]
    fn moments_small_levels() {
        let rows = exact_moments(5);
        assert_eq!(rows[1].var_u, Rational::one());
        assert_eq!(rows[2].var_u, ratio(4, 3));
        assert_eq!(rows[1].mean_x2, Some(ratio(4, 1)));
        assert_eq!(rows[2].mean_x2, Some(ratio(8, 1)));
        assert_eq!(rows[0].mean_x2, None);
        for r in &rows {
            assert_eq!(r.mean_u, Rational::zero());
        }
    }

    #[test]
    fn increment_second_moment_closed_form() {
        // E[S_n^2] = (n+1)^2 (n+2)/3 for n >= 1 and
        // S_0 = 0, so E[X_n^2] = (n+1)(3n+2)/3 for n >= 2 and 4 at n = 1.
        for r in exact_moments(60).iter().skip(2) {
            let n = r.n as i64;
            assert_eq!(r.mean_x2, Some(ratio((n + 1) * (3 * n + 2), 3)));
            // martingale orthogonality
            assert_eq!(r.cross_s.clone().unwrap(), exact_moments_s2(r.n - 1));
        }
    }

    fn exact_moments_s2(n: u32) -> Rational {
        if n == 0 {
            return Rational::zero();
        }
        let n = n as i64;
        ratio((n + 1) * (n + 1) * (n + 2), 3)
    }

    #[test]
    fn drift_examples() {
        assert_eq!(pair_drift(2, 0, 1), ratio(-1, 4));
        assert_eq!(pair_drift(10, 2, 7), ratio(-5, 12));
        assert_eq!(pair_drift(10, 7, 2), ratio(-5, 12));
        // at D = 0 the walks can only separate
        assert_eq!(pair_drift(4, 2, 2), ratio(2 * 3 * 3, 36));
    }

    #[test]
    fn extremal_cylinders_have_equal_mass() {
        let ws = WeightSystem::symmetric();
        let v = Vertex::new(6, 2).unwrap();
        assert_eq!(
            cylinder_measure(&ws, &min_path_to(v)),
            cylinder_measure(&ws, &max_path_to(v))
        );
    }

    proptest! {
        #[test]
        fn random_cylinders_have_factorial_mass(raw in proptest::collection::vec(0u32..1000, 0..50)) {
            let mut p = FinitePath::root();
            for r in raw {
                let at = p.terminal();
                let e = EdgeRef::from_out_index(at, r % at.out_degree()).unwrap();
                p.extend(crate::path::Step { turn: e.turn(), copy: e.copy() }).unwrap();
            }
            let expected = uint_ratio(&1u32.into(), &factorial(p.len() as u32 + 1));
            prop_assert_eq!(cylinder_measure(&WeightSystem::symmetric(), &p), Some(expected));
        }
    }
}
