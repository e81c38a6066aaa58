//! Monte Carlo grids over (ε, n) comparing bad-vertex counts with the
//! analytic bound and the exact expectation.
//!
//! Cell `i` of a grid derives its instance seed from stream `i` of the base
//! seed, so rows do not depend on how many threads ran the grid.

use crate::digraph::Digraph;
use crate::generators::{random_tournament, rotational_tournament, stream_rng, GenerateError};
use crate::pairing::{count_bad_with, find_good_bisection, random_pairing, sample_coins};
use crate::probability::{
    expected_bad_exact, expected_bad_upper, Epsilon, ProbabilityError, Threshold,
};
use num_traits::ToPrimitive;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;
use thiserror::Error;

pub const CSV_HEADER: &str =
    "epsilon,n,seed,trials,mean_bad,stderr_bad,exact_EX,analytic_bound,success_rate";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("empty grid")]
    EmptyGrid,
    #[error("trials must be positive")]
    NoTrials,
    #[error("unknown family {0:?} (expected rotational or tournament)")]
    UnknownFamily(String),
    #[error(transparent)]
    Epsilon(#[from] ProbabilityError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `rotational_tournament(n)`; the seed only drives sampling.
    Rotational,
    /// `random_tournament(n, seed)`.
    Tournament,
}

impl Family {
    pub fn instance(self, n: usize, seed: u64) -> Result<Digraph, GenerateError> {
        match self {
            Family::Rotational => rotational_tournament(n),
            Family::Tournament => random_tournament(n, seed),
        }
    }
}

impl FromStr for Family {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rotational" => Ok(Family::Rotational),
            "tournament" => Ok(Family::Tournament),
            other => Err(SweepError::UnknownFamily(other.to_string())),
        }
    }
}

/// One CSV row. Columns a sweep does not measure stay empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub mean_bad: Option<f64>,
    pub stderr_bad: Option<f64>,
    #[serde(rename = "exact_EX")]
    pub exact_ex: Option<f64>,
    pub analytic_bound: Option<f64>,
    pub success_rate: Option<f64>,
}

impl SweepRow {
    fn empty(epsilon: f64, n: usize, seed: u64, trials: usize) -> Self {
        SweepRow {
            epsilon,
            n,
            seed,
            trials,
            mean_bad: None,
            stderr_bad: None,
            exact_ex: None,
            analytic_bound: None,
            success_rate: None,
        }
    }
}

fn cell_seed(seed: u64, cell: usize) -> u64 {
    stream_rng(seed, cell as u64).next_u64()
}

fn mean_and_stderr(samples: &[f64]) -> (f64, Option<f64>) {
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    if samples.len() < 2 {
        return (mean, None);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, Some((var / k).sqrt()))
}

/// For every `(ε, n)` cell: one instance and one pairing from the cell
/// seed, then `trials` coin draws on that pairing. Reports the Monte Carlo
/// mean bad count with its standard error, the exact expectation for the
/// pairing, and the analytic bound (empty where its degree condition
/// fails). Rows follow the grid order, ε outermost.
pub fn sweep_expected_bad(
    family: Family,
    epsilons: &[f64],
    ns: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>, SweepError> {
    let cells = grid(epsilons, ns, trials)?;
    cells
        .into_par_iter()
        .enumerate()
        .map(|(cell, (eps, n))| {
            let cseed = cell_seed(seed, cell);
            let g = family.instance(n, cseed)?;
            let threshold = Threshold::Relative(eps);
            let thresholds = threshold.for_digraph(&g);
            let pairing = random_pairing(n, cseed);
            let mut rng = stream_rng(cseed, 1);
            let counts: Vec<f64> = (0..trials)
                .map(|_| {
                    let bip = pairing.split(&sample_coins(&pairing, &mut rng));
                    count_bad_with(&g, &bip, &thresholds) as f64
                })
                .collect();
            let (mean, stderr) = mean_and_stderr(&counts);
            let mut row = SweepRow::empty(eps.value(), n, cseed, trials);
            row.mean_bad = Some(mean);
            row.stderr_bad = stderr;
            row.exact_ex = expected_bad_exact(&g, &pairing, &threshold).to_f64();
            row.analytic_bound = expected_bad_upper(&g, eps).ok();
            Ok(row)
        })
        .collect()
}

/// For every `n`: the fraction of `trials` independent runs of
/// [`find_good_bisection`] (each allowed `attempts` samples) that return a
/// good bisection.
pub fn sweep_success_threshold(
    family: Family,
    epsilon: f64,
    ns: &[usize],
    trials: usize,
    attempts: usize,
    seed: u64,
) -> Result<Vec<SweepRow>, SweepError> {
    let cells = grid(&[epsilon], ns, trials)?;
    cells
        .into_par_iter()
        .enumerate()
        .map(|(cell, (eps, n))| {
            let cseed = cell_seed(seed, cell);
            let g = family.instance(n, cseed)?;
            let threshold = Threshold::Relative(eps);
            let mut rng = stream_rng(cseed, 1);
            let successes = (0..trials)
                .filter(|_| find_good_bisection(&g, &threshold, attempts, rng.next_u64()).is_ok())
                .count();
            let mut row = SweepRow::empty(eps.value(), n, cseed, trials);
            row.analytic_bound = expected_bad_upper(&g, eps).ok();
            row.success_rate = Some(successes as f64 / trials as f64);
            Ok(row)
        })
        .collect()
}

fn grid(
    epsilons: &[f64],
    ns: &[usize],
    trials: usize,
) -> Result<Vec<(Epsilon, usize)>, SweepError> {
    if epsilons.is_empty() || ns.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    if trials == 0 {
        return Err(SweepError::NoTrials);
    }
    let eps = epsilons
        .iter()
        .map(|&e| Epsilon::new(e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(eps
        .iter()
        .flat_map(|&e| ns.iter().map(move |&n| (e, n)))
        .collect())
}

/// Smallest sampled `n` from which every larger sampled `n` (of the same
/// ε) reaches `level` success. A property of the grid only.
pub fn empirical_frontier(rows: &[SweepRow], level: f64) -> Option<usize> {
    let mut sampled: Vec<(usize, f64)> = rows
        .iter()
        .filter_map(|r| r.success_rate.map(|s| (r.n, s)))
        .collect();
    sampled.sort_by_key(|&(n, _)| n);
    let mut frontier = None;
    for &(n, rate) in sampled.iter().rev() {
        if rate < level {
            break;
        }
        frontier = Some(n);
    }
    frontier
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_empty_fields() {
        let rows = sweep_expected_bad(Family::Rotational, &[0.49], &[11], 4, 3).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].analytic_bound, None);
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cells.len(), 9);
        assert_eq!(cells[7], "");
        assert_eq!(cells[8], "");
        let parsed: SweepRow = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .next()
            .unwrap()
            .unwrap();
        assert_eq!(parsed, rows[0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            sweep_expected_bad(Family::Rotational, &[], &[5], 1, 0),
            Err(SweepError::EmptyGrid)
        ));
        assert!(matches!(
            sweep_expected_bad(Family::Rotational, &[0.5], &[5], 1, 0),
            Err(SweepError::Epsilon(_))
        ));
        assert!(matches!(
            sweep_expected_bad(Family::Rotational, &[0.2], &[4], 1, 0),
            Err(SweepError::Generate(_))
        ));
        assert!("kings".parse::<Family>().is_err());
    }

    #[test]
    fn deterministic_and_ordered() {
        let a = sweep_expected_bad(Family::Tournament, &[0.1, 0.3], &[15, 9, 21], 50, 11).unwrap();
        let b = sweep_expected_bad(Family::Tournament, &[0.1, 0.3], &[15, 9, 21], 50, 11).unwrap();
        assert_eq!(a, b);
        let order: Vec<(f64, usize)> = a.iter().map(|r| (r.epsilon, r.n)).collect();
        assert_eq!(
            order,
            vec![
                (0.1, 15),
                (0.1, 9),
                (0.1, 21),
                (0.3, 15),
                (0.3, 9),
                (0.3, 21)
            ]
        );
    }

    #[test]
    fn exact_matches_monte_carlo() {
        let rows = sweep_expected_bad(Family::Tournament, &[0.1, 0.25, 0.4], &[9, 25, 61], 4000, 5)
            .unwrap();
        for row in rows {
            let (mean, se, exact) = (
                row.mean_bad.unwrap(),
                row.stderr_bad.unwrap(),
                row.exact_ex.unwrap(),
            );
            assert!((mean - exact).abs() <= 4.0 * se + 1e-12, "{row:?}");
        }
    }

    #[test]
    fn large_rotational_below_bound() {
        let rows = sweep_expected_bad(Family::Rotational, &[0.2], &[1001], 200, 1).unwrap();
        let row = &rows[0];
        let bound = row.analytic_bound.unwrap();
        assert!((bound - 4.3e-6).abs() < 1e-7);
        assert!(row.mean_bad.unwrap() <= bound + 4.0 * row.stderr_bad.unwrap());
        assert!(row.exact_ex.unwrap() <= bound);
    }

    #[test]
    fn success_rates_and_frontier() {
        let ns = [11, 41, 101, 201, 401];
        let rows = sweep_success_threshold(Family::Rotational, 0.2, &ns, 200, 1, 2).unwrap();
        let rates: Vec<f64> = rows.iter().map(|r| r.success_rate.unwrap()).collect();
        for w in rates.windows(2) {
            let se = ((w[0] * (1.0 - w[0]) + w[1] * (1.0 - w[1])) / 200.0).sqrt();
            assert!(w[1] + 4.0 * se + 1e-9 >= w[0], "{rates:?}");
        }
        let frontier = empirical_frontier(&rows, 0.99).unwrap();
        assert!(frontier <= 512);
        let big = sweep_success_threshold(Family::Rotational, 0.2, &[1001], 200, 1, 9).unwrap();
        assert_eq!(big[0].success_rate, Some(1.0));
    }

    #[test]
    fn frontier_needs_a_clean_tail() {
        let mut rows: Vec<SweepRow> = [(5, 0.5), (7, 1.0), (9, 0.98), (11, 1.0)]
            .iter()
            .map(|&(n, s)| {
                let mut r = SweepRow::empty(0.2, n, 0, 10);
                r.success_rate = Some(s);
                r
            })
            .collect();
        assert_eq!(empirical_frontier(&rows, 0.99), Some(11));
        rows[3].success_rate = Some(0.5);
        assert_eq!(empirical_frontier(&rows, 0.99), None);
    }
}
