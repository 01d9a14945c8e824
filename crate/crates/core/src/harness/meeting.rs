//! Pairs of independent column walks and the levels where they meet again.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::expectations::MeetingExpectations;
use super::report::{Estimate, Series, StatReport, Tolerance};
use super::rng::RngConfig;
use super::sampling::step_column;

/// One pair of walks. `sigma` is the first level where the columns differ;
/// `coincidences` are the later levels where they agree again.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub sigma: Option<u32>,
    pub coincidences: Vec<u32>,
}

impl PairRecord {
    pub fn meetings(&self) -> usize {
        self.coincidences.len()
    }

    /// Coincidence levels at most `n`.
    pub fn meetings_by(&self, n: u32) -> usize {
        self.coincidences.partition_point(|&m| m <= n)
    }

    /// `tau - sigma` for the first meeting after divergence.
    pub fn first_lag(&self) -> Option<u32> {
        Some(self.coincidences.first()? - self.sigma?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeetingStats {
    pub n_max: u32,
    pub rng: RngConfig,
    pub pairs: Vec<PairRecord>,
    /// `D_0, ..., D_{n_max}` for the first few pairs.
    pub trajectories: Vec<Vec<u32>>,
}

/// Simulates `pairs` pairs of walks up to `n_max`, keeping the full
/// `D_n = |k_n - k_n'|` trajectory of the first `keep_trajectories` pairs.
pub fn meeting_experiment(
    n_max: u32,
    pairs: u64,
    keep_trajectories: usize,
    cfg: &RngConfig,
) -> MeetingStats {
    let offsets: Vec<u64> = cfg
        .shares(pairs)
        .iter()
        .scan(0, |acc, s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let parts = cfg.run(pairs, |rng, share| {
        let offset = offsets[rng.get_stream() as usize];
        let mut records = Vec::with_capacity(share as usize);
        let mut trajectories = Vec::new();
        for i in 0..share {
            let keep = ((offset + i) as usize) < keep_trajectories;
            let mut trajectory = if keep { vec![0u32] } else { Vec::new() };
            let (mut k, mut k2) = (0u32, 0u32);
            let mut record = PairRecord {
                sigma: None,
                coincidences: Vec::new(),
            };
            for level in 0..n_max {
                k = step_column(rng, level, k);
                k2 = step_column(rng, level, k2);
                let m = level + 1;
                if record.sigma.is_none() {
                    if k != k2 {
                        record.sigma = Some(m);
                    }
                } else if k == k2 {
                    record.coincidences.push(m);
                }
                if keep {
                    trajectory.push(k.abs_diff(k2));
                }
            }
            records.push(record);
            if keep {
                trajectories.push(trajectory);
            }
        }
        (records, trajectories)
    });
    let mut stats = MeetingStats {
        n_max,
        rng: *cfg,
        pairs: Vec::new(),
        trajectories: Vec::new(),
    };
    for (records, trajectories) in parts {
        stats.pairs.extend(records);
        stats.trajectories.extend(trajectories);
    }
    stats
}

impl MeetingStats {
    pub fn diverged(&self) -> usize {
        self.pairs.iter().filter(|p| p.sigma.is_some()).count()
    }

    /// Fraction of all pairs with at least `r` coincidence levels by `n`.
    pub fn fraction_with_at_least(&self, r: usize, n: u32) -> f64 {
        let hits = self.pairs.iter().filter(|p| p.meetings_by(n) >= r).count();
        hits as f64 / self.pairs.len() as f64
    }

    /// Median coincidence count by level `n` over pairs that diverged.
    pub fn median_meetings(&self, n: u32) -> f64 {
        let mut counts: Vec<usize> = self
            .pairs
            .iter()
            .filter(|p| p.sigma.is_some())
            .map(|p| p.meetings_by(n))
            .collect();
        if counts.is_empty() {
            return 0.0;
        }
        counts.sort_unstable();
        let mid = counts.len() / 2;
        if counts.len() % 2 == 1 {
            counts[mid] as f64
        } else {
            (counts[mid - 1] + counts[mid]) as f64 / 2.0
        }
    }

    pub fn lag_histogram(&self) -> BTreeMap<u32, u64> {
        let mut hist = BTreeMap::new();
        for lag in self.pairs.iter().filter_map(PairRecord::first_lag) {
            *hist.entry(lag).or_insert(0) += 1;
        }
        hist
    }

    /// Checks the pilot thresholds; the series is the first-meeting lag
    /// histogram.
    pub fn to_report(&self, expect: &MeetingExpectations) -> StatReport {
        let mut report = StatReport::new("meeting", Some(self.rng), self.pairs.len() as u64)
            .param("n_max", self.n_max)
            .param("min_meetings", expect.min_meetings)
            .param("median_checkpoint", expect.median_checkpoint);
        report.push(Estimate::new(
            format!("fraction_with_{}_meetings", expect.min_meetings),
            self.fraction_with_at_least(expect.min_meetings, self.n_max),
            0.0,
            Some(expect.min_fraction),
            Tolerance::AtLeast,
        ));
        report.push(Estimate::new(
            "fraction_with_1_meeting",
            self.fraction_with_at_least(1, self.n_max),
            0.0,
            None,
            Tolerance::Info,
        ));
        let low = self.median_meetings(expect.median_checkpoint.min(self.n_max));
        let high = self.median_meetings(self.n_max);
        report.push(Estimate::new(
            "median_meetings_at_checkpoint",
            low,
            0.0,
            None,
            Tolerance::Info,
        ));
        report.push(Estimate::new(
            "median_meetings",
            high,
            0.0,
            Some(low),
            Tolerance::Above,
        ));
        let never = self.pairs.len() - self.diverged();
        if never > 0 {
            report.note(format!(
                "{never} pairs never diverged and are left out of sigma statistics"
            ));
        }
        report.series = Some(Series {
            columns: vec!["lag".into(), "pairs".into()],
            rows: self
                .lag_histogram()
                .into_iter()
                .map(|(lag, c)| vec![lag.to_string(), c.to_string()])
                .collect(),
        });
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_well_formed() {
        let cfg = RngConfig::new(3, 4).unwrap();
        let stats = meeting_experiment(300, 200, 5, &cfg);
        assert_eq!(stats.pairs.len(), 200);
        assert_eq!(stats.trajectories.len(), 5);
        for p in &stats.pairs {
            assert!(p.coincidences.windows(2).all(|w| w[0] < w[1]));
            if let (Some(s), Some(&t)) = (p.sigma, p.coincidences.first()) {
                assert!(s < t);
            }
            if p.sigma.is_none() {
                assert!(p.coincidences.is_empty());
            }
        }
        let first = &stats.pairs[0];
        for &m in &first.coincidences {
            assert_eq!(stats.trajectories[0][m as usize], 0);
        }
        if let Some(s) = first.sigma {
            assert!(stats.trajectories[0][..s as usize].iter().all(|&d| d == 0));
            assert!(stats.trajectories[0][s as usize] > 0);
        }
        assert_eq!(stats, meeting_experiment(300, 200, 5, &cfg));
    }

    #[test]
    fn meetings_by_truncates() {
        let p = PairRecord {
            sigma: Some(2),
            coincidences: vec![4, 9, 10],
        };
        assert_eq!(
            (p.meetings_by(3), p.meetings_by(9), p.meetings_by(100)),
            (0, 2, 3)
        );
        assert_eq!(p.first_lag(), Some(2));
    }
}
