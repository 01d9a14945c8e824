//! Sampling, variance, tail, drift and cylinder-frequency experiments.

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};

use super::report::{format_sig, Estimate, Series, StatReport, Tolerance};
use super::rng::RngConfig;
use super::sampling::{draw_out_index, sample_column, sample_path, step_column};
use crate::adic::successor;
use crate::error::{Error, Result};
use crate::exact::{factorial, format_ratio, ratio, to_f64, uint_ratio, Rational};
use crate::graph::{eulerian, path_count_between, Vertex};
use crate::measure::{
    chebyshev_bound, column_distribution, column_tail_f64, pair_drift, tail_threshold,
};
use crate::path::FinitePath;

/// Default tolerance for stochastic checks.
pub const SIGMAS: f64 = 5.0;
/// Largest level whose tail reference is computed in exact arithmetic.
pub const EXACT_TAIL_BUDGET: u32 = 400;
/// Largest level for which per-path counts are kept.
pub const PATH_COUNT_LEVEL: u32 = 9;
/// Largest `N` accepted by the exact-stack Birkhoff mode.
pub const EXACT_STACK_BUDGET: u32 = 2000;

fn binomial_se(p: f64, reps: u64) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

fn add_into(acc: &mut [u64], other: &[u64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Wilson-Hilferty normal approximation of a chi-square statistic.
pub fn chi_square_z(stat: f64, df: f64) -> f64 {
    let c = 2.0 / (9.0 * df);
    ((stat / df).cbrt() - (1.0 - c)) / c.sqrt()
}

/// Frequencies of terminal columns, and of whole paths up to
/// [`PATH_COUNT_LEVEL`], against the exact law.
pub fn sample_experiment(n: u32, reps: u64, cfg: &RngConfig) -> Result<StatReport> {
    if reps == 0 {
        return Err(Error::InvalidArgument("reps must be positive".into()));
    }
    let cells =
        (n <= PATH_COUNT_LEVEL).then(|| factorial(n + 1).to_usize().expect("small factorial"));
    let parts = cfg.run(reps, |rng, share| {
        let mut columns = vec![0u64; n as usize + 1];
        let mut paths = vec![0u64; cells.unwrap_or(0)];
        for _ in 0..share {
            let (mut k, mut slot) = (0u32, 0usize);
            for level in 0..n {
                let j = draw_out_index(rng, level);
                if j > k {
                    k += 1;
                }
                slot = slot * (level as usize + 2) + j as usize;
            }
            columns[k as usize] += 1;
            if let Some(cell) = paths.get_mut(slot) {
                *cell += 1;
            }
        }
        (columns, paths)
    });
    let mut columns = vec![0u64; n as usize + 1];
    let mut paths = vec![0u64; cells.unwrap_or(0)];
    for (c, p) in &parts {
        add_into(&mut columns, c);
        add_into(&mut paths, p);
    }

    let mut report = StatReport::new("sample", Some(*cfg), reps).param("level", n);
    let law = column_distribution(n);
    let mut rows = Vec::new();
    for (k, &count) in columns.iter().enumerate() {
        let exact = law.probability(k as u32);
        let p = to_f64(&exact);
        let freq = count as f64 / reps as f64;
        report.push(
            Estimate::new(
                format!("column_{k}"),
                freq,
                binomial_se(p, reps),
                Some(p),
                Tolerance::StdErrors(SIGMAS),
            )
            .with_exact_reference(format_ratio(&exact)),
        );
        rows.push(vec![
            k.to_string(),
            count.to_string(),
            format_sig(freq, 12),
            format_ratio(&exact),
        ]);
    }
    if let Some(cells) = cells {
        let expected = reps as f64 / cells as f64;
        let stat: f64 = paths
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        if cells > 1 {
            report.push(Estimate::new(
                "path_chi_square_z",
                chi_square_z(stat, (cells - 1) as f64),
                0.0,
                Some(SIGMAS),
                Tolerance::AtMost,
            ));
        }
        let p = 1.0 / cells as f64;
        let reference = format!("1/{cells}");
        for (slot, &count) in paths.iter().enumerate().take(24) {
            report.push(
                Estimate::new(
                    format!("path_slot_{slot}"),
                    count as f64 / reps as f64,
                    binomial_se(p, reps),
                    Some(p),
                    Tolerance::StdErrors(SIGMAS),
                )
                .with_exact_reference(reference.clone()),
            );
        }
    } else {
        report.note(format!(
            "path counts kept only up to level {PATH_COUNT_LEVEL}"
        ));
    }
    report.series = Some(Series {
        columns: ["column", "count", "frequency", "exact"]
            .map(String::from)
            .to_vec(),
        rows,
    });
    Ok(report)
}

/// Sums of `u`, `u^2`, `u^4` for one level.
#[derive(Debug, Clone, Copy, Default)]
struct PowerSums {
    u: i128,
    u2: u128,
    u4: u128,
}

/// Mean of `u_n = 2 k_n - n` and its second moment about the exact mean 0,
/// which is the variance, against `(n+2)/3`.
pub fn variance_experiment(n: u32, reps: u64, cfg: &RngConfig) -> Result<StatReport> {
    if reps < 2 {
        return Err(Error::InvalidArgument("reps must be at least 2".into()));
    }
    let parts = cfg.run(reps, |rng, share| {
        let mut sums = vec![PowerSums::default(); n as usize + 1];
        for _ in 0..share {
            let mut k = 0u32;
            for level in 0..n {
                k = step_column(rng, level, k);
                let u = 2 * k as i64 - (level as i64 + 1);
                let s = &mut sums[level as usize + 1];
                let u2 = (u * u) as u128;
                s.u += u as i128;
                s.u2 += u2;
                s.u4 += u2 * u2;
            }
        }
        sums
    });
    let mut sums = vec![PowerSums::default(); n as usize + 1];
    for part in &parts {
        for (a, b) in sums.iter_mut().zip(part) {
            a.u += b.u;
            a.u2 += b.u2;
            a.u4 += b.u4;
        }
    }

    let r = reps as f64;
    let summary = |s: &PowerSums| {
        let mean = s.u as f64 / r;
        let m2 = s.u2 as f64 / r;
        let m4 = s.u4 as f64 / r;
        let se_mean = ((m2 - mean * mean).max(0.0) / (r - 1.0)).sqrt();
        let se_m2 = ((m4 - m2 * m2).max(0.0) / (r - 1.0)).sqrt();
        (mean, se_mean, m2, se_m2)
    };
    let exact_var = |m: u32| {
        if m == 0 {
            ratio(0, 1)
        } else {
            ratio(m as i64 + 2, 3)
        }
    };

    let mut report = StatReport::new("variance", Some(*cfg), reps).param("level", n);
    let (mean, se_mean, m2, se_m2) = summary(&sums[n as usize]);
    report.push(
        Estimate::new(
            "mean_u",
            mean,
            se_mean,
            Some(0.0),
            Tolerance::StdErrors(SIGMAS),
        )
        .with_exact_reference("0/1".into()),
    );
    let var = exact_var(n);
    report.push(
        Estimate::new(
            "var_u",
            m2,
            se_m2,
            Some(to_f64(&var)),
            Tolerance::StdErrors(SIGMAS),
        )
        .with_exact_reference(format_ratio(&var)),
    );
    report.note("var_u is the second moment of u_n about its exact mean 0");
    let rows = (1..=n)
        .map(|m| {
            let (mean, se_mean, m2, se_m2) = summary(&sums[m as usize]);
            [
                m.to_string(),
                format_sig(mean, 12),
                format_sig(se_mean, 12),
                format_sig(m2, 12),
                format_sig(se_m2, 12),
                format_ratio(&exact_var(m)),
            ]
            .to_vec()
        })
        .collect();
    report.series = Some(Series {
        columns: [
            "level",
            "mean_u",
            "se_mean_u",
            "var_u",
            "se_var_u",
            "exact_var",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    });
    Ok(report)
}

/// Reference tail `P(|u_n| >= eps n)`: exact up to [`EXACT_TAIL_BUDGET`],
/// floating-point DP beyond.
pub fn reference_tail(n: u32, eps: &Rational) -> (f64, Option<Rational>) {
    if n <= EXACT_TAIL_BUDGET {
        let tail = column_distribution(n).tail(eps);
        (to_f64(&tail), Some(tail))
    } else {
        (column_tail_f64(n, eps), None)
    }
}

/// Empirical `P(|u_n / n| >= eps)` against the DP tail and the Chebyshev
/// bound `(n+2) / (3 n^2 eps^2)`.
pub fn chebyshev_experiment(
    n: u32,
    eps: &Rational,
    reps: u64,
    cfg: &RngConfig,
) -> Result<StatReport> {
    if *eps <= Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {}",
            format_ratio(eps)
        )));
    }
    if n == 0 || reps == 0 {
        return Err(Error::InvalidArgument(
            "level and reps must be positive".into(),
        ));
    }
    let threshold = tail_threshold(n, eps);
    let hits: u64 = cfg
        .run(reps, |rng, share| {
            (0..share)
                .filter(|_| {
                    (2 * sample_column(rng, n) as i64 - n as i64).unsigned_abs() >= threshold
                })
                .count() as u64
        })
        .iter()
        .sum();

    let (tail, exact) = reference_tail(n, eps);
    let bound = chebyshev_bound(n, to_f64(eps));
    let mut report = StatReport::new("chebyshev", Some(*cfg), reps)
        .param("level", n)
        .param("epsilon", format_ratio(eps))
        .param("threshold", threshold);
    let mut mc = Estimate::new(
        "tail",
        hits as f64 / reps as f64,
        binomial_se(tail, reps),
        Some(tail),
        Tolerance::StdErrors(SIGMAS),
    );
    let mut dp = Estimate::new(
        "reference_tail_vs_bound",
        tail,
        0.0,
        Some(bound),
        Tolerance::AtMost,
    );
    match exact {
        Some(t) => {
            mc = mc.with_exact_reference(format_ratio(&t));
            dp = dp.with_exact_value(format_ratio(&t));
        }
        None => report.note("reference tail from the floating-point DP"),
    }
    report.push(mc);
    report.push(dp);
    report.push(Estimate::new(
        "chebyshev_bound",
        bound,
        0.0,
        None,
        Tolerance::Info,
    ));
    report.note("standard error of the tail is binomial under the reference value");
    Ok(report)
}

/// Exact mean and variance of `D_{n+1} - D_n` from the four-outcome kernel.
fn increment_moments(n: u32, k: u32, k2: u32) -> (f64, f64) {
    let p = |k: u32| (k as f64 + 1.0) / (n as f64 + 2.0);
    let d0 = (k as i64 - k2 as i64).abs();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (s1, p1) in [(0i64, p(k)), (1, 1.0 - p(k))] {
        for (s2, p2) in [(0i64, p(k2)), (1, 1.0 - p(k2))] {
            let delta = ((k as i64 + s1) - (k2 as i64 + s2)).abs() - d0;
            m1 += p1 * p2 * delta as f64;
            m2 += p1 * p2 * (delta * delta) as f64;
        }
    }
    (m1, m2 - m1 * m1)
}

#[derive(Debug, Clone, Default)]
struct DriftCell {
    count: u64,
    sum: i64,
    var: f64,
}

/// Walks `pairs` independent pairs of columns and, at each checkpoint level
/// `n`, groups the one-step change of `D_n = |k_n - k_n'|` by `d = D_n > 0`.
/// Each group with at least `min_count` members is compared with
/// `-d/(n+2)`; the standard error uses the exact conditional variances.
pub fn drift_law_experiment(
    levels: &[u32],
    pairs: u64,
    min_count: u64,
    cfg: &RngConfig,
) -> Result<StatReport> {
    let Some(&n_max) = levels.iter().max() else {
        return Err(Error::InvalidArgument(
            "at least one level is required".into(),
        ));
    };
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let parts = cfg.run(pairs, |rng, share| {
        let mut cells = vec![vec![DriftCell::default(); n_max as usize + 1]; levels.len()];
        for _ in 0..share {
            let (mut k, mut k2) = (0u32, 0u32);
            let mut next_check = 0;
            for level in 0..=n_max {
                let (a, b) = (step_column(rng, level, k), step_column(rng, level, k2));
                if levels.get(next_check) == Some(&level) {
                    let d = k.abs_diff(k2);
                    if d > 0 {
                        let cell = &mut cells[next_check][d as usize];
                        cell.count += 1;
                        cell.sum += a.abs_diff(b) as i64 - d as i64;
                        cell.var += increment_moments(level, k, k2).1;
                    }
                    next_check += 1;
                }
                (k, k2) = (a, b);
            }
        }
        cells
    });

    let mut report = StatReport::new("drift", Some(*cfg), pairs)
        .param("levels", levels.clone())
        .param("min_count", min_count);
    let mut rows = Vec::new();
    for (i, &n) in levels.iter().enumerate() {
        for d in 1..=n_max as usize {
            let (mut count, mut sum, mut var) = (0u64, 0i64, 0.0);
            for part in &parts {
                let c = &part[i][d];
                count += c.count;
                sum += c.sum;
                var += c.var;
            }
            if count < min_count {
                continue;
            }
            let exact = ratio(-(d as i64), n as i64 + 2);
            let mean = sum as f64 / count as f64;
            let se = var.sqrt() / count as f64;
            report.push(
                Estimate::new(
                    format!("drift_n{n}_d{d}"),
                    mean,
                    se,
                    Some(to_f64(&exact)),
                    Tolerance::StdErrors(SIGMAS),
                )
                .with_exact_reference(format_ratio(&exact)),
            );
            rows.push(vec![
                n.to_string(),
                d.to_string(),
                count.to_string(),
                format_sig(mean, 12),
                format_sig(se, 12),
                format_ratio(&exact),
            ]);
        }
    }
    if let Some(&n) = levels.first() {
        if n > 0 {
            report.note(format!(
                "kernel check: drift at (n,k,k')=({n},0,1) is {}",
                format_ratio(&pair_drift(n, 0, 1))
            ));
        }
    }
    report.series = Some(Series {
        columns: [
            "level",
            "d",
            "count",
            "mean_increment",
            "std_error",
            "exact",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BirkhoffMode {
    /// Exact frequency of the cylinder among the paths into `(N, column)`;
    /// the column defaults to `N / 2`.
    ExactStack { column: Option<u32> },
    /// Visit frequency along successor orbits of `starts` sampled paths,
    /// `steps` iterations each.
    OrbitMc { starts: u64, steps: u64 },
}

/// Frequency of the cylinder of `cylinder` compared with its measure
/// `1/(len+1)!`, within `relative_tolerance`.
pub fn birkhoff_experiment(
    cylinder: &FinitePath,
    big_n: u32,
    mode: BirkhoffMode,
    relative_tolerance: f64,
    cfg: &RngConfig,
) -> Result<StatReport> {
    let len = cylinder.len() as u32;
    if len > big_n {
        return Err(Error::InvalidArgument(format!(
            "cylinder length {len} exceeds N = {big_n}"
        )));
    }
    let measure = uint_ratio(&BigUint::from(1u32), &factorial(len + 1));
    match mode {
        BirkhoffMode::ExactStack { column } => {
            if big_n > EXACT_STACK_BUDGET {
                return Err(Error::TooLarge {
                    what: "exact stack level",
                    count: big_n.to_string(),
                    cap: EXACT_STACK_BUDGET as u64,
                });
            }
            let k = column.unwrap_or(big_n / 2);
            let target = Vertex::new(big_n, k)?;
            let hits = path_count_between(cylinder.terminal(), target);
            let size = eulerian(big_n, k);
            let freq = uint_ratio(&hits, &size);
            let deviation = (&freq - &measure).abs();
            let mut report = StatReport::new("birkhoff", None, 1)
                .param("mode", "exact_stack")
                .param("cylinder", cylinder.to_string())
                .param("N", big_n)
                .param("column", k);
            report.push(
                Estimate::new(
                    "frequency",
                    to_f64(&freq),
                    0.0,
                    Some(to_f64(&measure)),
                    Tolerance::Relative(relative_tolerance),
                )
                .with_exact_value(format_ratio(&freq))
                .with_exact_reference(format_ratio(&measure)),
            );
            report.push(
                Estimate::new("deviation", to_f64(&deviation), 0.0, None, Tolerance::Info)
                    .with_exact_value(format_ratio(&deviation)),
            );
            report.note(format!(
                "{hits} of {size} paths into ({big_n},{k}) start with the cylinder"
            ));
            Ok(report)
        }
        BirkhoffMode::OrbitMc { starts, steps } => {
            if starts < 2 || steps == 0 {
                return Err(Error::InvalidArgument(
                    "orbit mode needs at least 2 starts and 1 step".into(),
                ));
            }
            let parts = cfg.run(starts, |rng, share| {
                (0..share)
                    .map(|_| {
                        let mut p = sample_path(big_n, rng);
                        let (mut visited, mut hits) = (0u64, 0u64);
                        loop {
                            visited += 1;
                            hits += u64::from(p.starts_with(cylinder));
                            if visited == steps {
                                break (visited, hits, false);
                            }
                            match successor(&p) {
                                Ok(next) => p = next,
                                Err(_) => break (visited, hits, true),
                            }
                        }
                    })
                    .collect::<Vec<_>>()
            });
            let runs: Vec<_> = parts.into_iter().flatten().collect();
            let freqs: Vec<f64> = runs.iter().map(|&(v, h, _)| h as f64 / v as f64).collect();
            let m = freqs.len() as f64;
            let mean = freqs.iter().sum::<f64>() / m;
            let var = freqs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (m - 1.0);
            let exhausted = runs.iter().filter(|r| r.2).count();
            let mut report = StatReport::new("birkhoff", Some(*cfg), starts)
                .param("mode", "orbit_mc")
                .param("cylinder", cylinder.to_string())
                .param("N", big_n)
                .param("steps", steps);
            report.push(
                Estimate::new(
                    "frequency",
                    mean,
                    (var / m).sqrt(),
                    Some(to_f64(&measure)),
                    Tolerance::Relative(relative_tolerance),
                )
                .with_exact_reference(format_ratio(&measure)),
            );
            if exhausted > 0 {
                report.note(format!(
                    "OrbitExhausted: {exhausted} orbits reached the maximal path early"
                ));
            }
            Ok(report)
        }
    }
}
