//! Weighted local lemma bookkeeping and a Moser–Tardos resampler.
//!
//! One fixed pairing defines the product space: every block carries one
//! fair coin. The bad event of vertex `v` is decided by the coins of the
//! blocks meeting `N⁺(v) ∪ {v}`; while some event holds, the resampler
//! redraws exactly those coins for the lowest-indexed bad vertex.

use crate::digraph::{Bipartition, Digraph};
use crate::generators::stream_rng;
use crate::pairing::{sample_coins, Pairing};
use crate::probability::{Epsilon, Threshold};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest δ the δ₀ scan will try.
pub const DELTA0_SCAN_LIMIT: usize = 1 << 32;

/// `e^{ε²(δ−1)} / (8δ)`, the largest admissible maximum in-degree.
pub fn admissible_max_indegree(eps: Epsilon, delta: usize) -> f64 {
    let e2 = eps.value() * eps.value();
    (e2 * (delta as f64 - 1.0)).exp() / (8.0 * delta as f64)
}

/// Least `δ >= 2` with `e^{−ε²(δ−1)} < 1/4` and `e^{ε²(δ−1)}/(8δ) >= δ`,
/// found by scanning upward. `None` past [`DELTA0_SCAN_LIMIT`].
pub fn delta0_lll(eps: Epsilon) -> Option<usize> {
    let e2 = eps.value() * eps.value();
    let ln4 = 4f64.ln();
    (2..DELTA0_SCAN_LIMIT).find(|&d| {
        let x = e2 * (d as f64 - 1.0);
        x > ln4 && x >= (8.0 * (d as f64) * (d as f64)).ln()
    })
}

/// Per-vertex quantities of the weighted local lemma.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllParams {
    /// `p = e^{−ε²(δ⁺−1)}`.
    pub p: f64,
    pub min_out_degree: usize,
    /// Weight `t_v = d⁺(v)/δ⁺` as a float.
    pub weights: Vec<f64>,
    /// `2·d⁺(v)·Δ⁻`.
    pub dep_bound: Vec<u64>,
    /// `⌈(1/2 − ε)·d⁺(v)⌉`.
    pub thresholds: Vec<usize>,
}

impl LllParams {
    pub fn new(g: &Digraph, eps: Epsilon) -> Self {
        let delta = g.min_out_degree();
        let e2 = eps.value() * eps.value();
        let max_in = g.max_in_degree() as u64;
        let degrees = g.out_degrees();
        LllParams {
            p: (-e2 * (delta as f64 - 1.0)).exp(),
            min_out_degree: delta,
            weights: degrees.iter().map(|&d| d as f64 / delta as f64).collect(),
            dep_bound: degrees.iter().map(|&d| 2 * d as u64 * max_in).collect(),
            thresholds: degrees.iter().map(|&d| eps.threshold(d)).collect(),
        }
    }
}

/// Outcome of checking the weighted local lemma hypotheses on a digraph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllReport {
    pub epsilon: f64,
    pub min_out_degree: usize,
    pub max_in_degree: usize,
    pub p: f64,
    pub p_at_most_quarter: bool,
    pub admissible_max_indegree: f64,
    pub indegree_admissible: bool,
    pub delta0: Option<usize>,
    pub delta0_met: bool,
    /// Vertices where `e^{−ε²(d⁺−1)} <= p^{t_v}` fails.
    pub condition_a_failures: Vec<usize>,
    /// Vertices where the two-sided cap `2e^{−2(d⁺−1)σ_v²}` exceeds
    /// `p^{t_v}`, with `σ_v = 1/2 − (s_v − 1)/(d⁺ − 1)`.
    pub condition_a_two_sided_failures: Vec<usize>,
    /// Vertices where `2p·2d⁺(v)Δ⁻ <= t_v/2` fails.
    pub condition_b_failures: Vec<usize>,
    pub passed: bool,
}

/// Checks conditions (a) and (b) of the weighted local lemma with
/// `p = e^{−ε²(δ⁺−1)}` and weights `t_v = d⁺(v)/δ⁺`, together with the
/// in-degree admissibility and δ₀ gates.
pub fn check_weighted_lll(g: &Digraph, eps: Epsilon) -> LllReport {
    let params = LllParams::new(g, eps);
    let delta = params.min_out_degree;
    let max_in = g.max_in_degree();
    let e2 = eps.value() * eps.value();
    let admissible = if delta >= 1 {
        admissible_max_indegree(eps, delta)
    } else {
        0.0
    };
    let delta0 = delta0_lll(eps);

    let mut a_failures = Vec::new();
    let mut a2_failures = Vec::new();
    let mut b_failures = Vec::new();
    if delta >= 1 {
        let log_p = -e2 * (delta as f64 - 1.0);
        for v in 0..g.n() {
            let d = g.out_neighbors(v).len();
            // d - 1 >= (δ - 1)·d/δ  <=>  d >= δ, compared in integers
            if (delta * (d - 1)) < (delta - 1) * d {
                a_failures.push(v);
            }
            let log_rhs = log_p * params.weights[v];
            let s = params.thresholds[v];
            let two_sided_ok = d >= 2 && {
                let sigma = 0.5 - (s as f64 - 1.0) / (d as f64 - 1.0);
                sigma > 0.0
                    && std::f64::consts::LN_2 - 2.0 * (d as f64 - 1.0) * sigma * sigma <= log_rhs
            };
            if !two_sided_ok {
                a2_failures.push(v);
            }
            if 2.0 * params.p * params.dep_bound[v] as f64 > params.weights[v] / 2.0 {
                b_failures.push(v);
            }
        }
    }
    let p_ok = delta >= 1 && params.p <= 0.25;
    let indegree_ok = delta >= 1 && max_in as f64 <= admissible;
    let delta0_met = delta0.is_some_and(|d0| delta >= d0);
    let passed = p_ok
        && indegree_ok
        && delta0_met
        && a_failures.is_empty()
        && a2_failures.is_empty()
        && b_failures.is_empty();
    LllReport {
        epsilon: eps.value(),
        min_out_degree: delta,
        max_in_degree: max_in,
        p: params.p,
        p_at_most_quarter: p_ok,
        admissible_max_indegree: admissible,
        indegree_admissible: indegree_ok,
        delta0,
        delta0_met,
        condition_a_failures: a_failures,
        condition_a_two_sided_failures: a2_failures,
        condition_b_failures: b_failures,
        passed,
    }
}

/// Blocks whose coins decide the event of `v`: those meeting `N⁺(v)`, plus
/// `v`'s own block. Sorted, without repeats.
pub fn event_variables(g: &Digraph, pairing: &Pairing, v: usize) -> Vec<usize> {
    let mut blocks: Vec<usize> = g
        .out_neighbors(v)
        .iter()
        .map(|&w| pairing.block_of(w))
        .chain(std::iter::once(pairing.block_of(v)))
        .collect();
    blocks.sort_unstable();
    blocks.dedup();
    blocks
}

/// For each vertex with a non-vacuous event, the number of other such
/// vertices whose events share at least one coin with it.
pub fn dependency_degrees(g: &Digraph, pairing: &Pairing, thresholds: &[usize]) -> Vec<usize> {
    let live = |u: usize| thresholds[u] > 0;
    let mut seen = vec![usize::MAX; g.n()];
    (0..g.n())
        .map(|v| {
            if !live(v) {
                return 0;
            }
            let mut count = 0;
            for block in event_variables(g, pairing, v) {
                for &z in pairing.block(block) {
                    for &u in std::iter::once(&z).chain(g.in_neighbors(z)) {
                        if u != v && live(u) && seen[u] != v {
                            seen[u] = v;
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResampleReport {
    pub bipartition: Bipartition,
    pub pairing: Pairing,
    pub resamples: usize,
    /// The vertex whose event was resampled at each step.
    pub trace: Vec<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("resampling budget of {resamples} exhausted with {remaining_bad} bad vertices left")]
pub struct ResampleFailure {
    pub resamples: usize,
    pub remaining_bad: usize,
    pub seed: u64,
}

/// Coins, sides and own-side out-degrees, updated one vertex move at a time.
struct ResampleState<'a> {
    g: &'a Digraph,
    thresholds: Vec<usize>,
    in_a: Vec<bool>,
    own: Vec<usize>,
    bad: BTreeSet<usize>,
}

impl<'a> ResampleState<'a> {
    fn new(g: &'a Digraph, thresholds: Vec<usize>, bip: &Bipartition) -> Self {
        let in_a: Vec<bool> = (0..g.n())
            .map(|v| bip.mask(crate::Side::A).contains(v))
            .collect();
        let own: Vec<usize> = (0..g.n()).map(|v| bip.own_side_out_degree(g, v)).collect();
        let mut state = ResampleState {
            g,
            thresholds,
            in_a,
            own,
            bad: BTreeSet::new(),
        };
        for v in 0..g.n() {
            state.refresh(v);
        }
        state
    }

    fn refresh(&mut self, v: usize) {
        let (x, t, d) = (
            self.own[v],
            self.thresholds[v],
            self.g.out_neighbors(v).len(),
        );
        if x < t || x + t > d {
            self.bad.insert(v);
        } else {
            self.bad.remove(&v);
        }
    }

    fn flip(&mut self, z: usize) {
        self.in_a[z] = !self.in_a[z];
        self.own[z] = self.g.out_neighbors(z).len() - self.own[z];
        self.refresh(z);
        for &u in self.g.in_neighbors(z) {
            if self.in_a[u] == self.in_a[z] {
                self.own[u] += 1;
            } else {
                self.own[u] -= 1;
            }
            self.refresh(u);
        }
    }
}

/// Moser–Tardos on one fixed pairing (stream 0 of `seed` draws the pairing,
/// the initial coins and every resample).
pub fn moser_tardos_split(
    g: &Digraph,
    threshold: &Threshold,
    seed: u64,
    max_resamples: usize,
) -> Result<ResampleReport, ResampleFailure> {
    let mut rng = stream_rng(seed, 0);
    let pairing = Pairing::random(g.n(), &mut rng);
    let mut coins = sample_coins(&pairing, &mut rng);
    let mut state = ResampleState::new(g, threshold.for_digraph(g), &pairing.split(&coins));
    let mut trace = Vec::new();
    while let Some(&v) = state.bad.first() {
        if trace.len() == max_resamples {
            return Err(ResampleFailure {
                resamples: trace.len(),
                remaining_bad: state.bad.len(),
                seed,
            });
        }
        for block in event_variables(g, &pairing, v) {
            let coin = rng.random_bool(0.5);
            if coin != coins[block] {
                coins[block] = coin;
                for &z in pairing.block(block) {
                    state.flip(z);
                }
            }
        }
        trace.push(v);
    }
    log::debug!("moser-tardos finished after {} resamples", trace.len());
    Ok(ResampleReport {
        bipartition: pairing.split(&coins),
        pairing,
        resamples: trace.len(),
        trace,
        seed,
    })
}
