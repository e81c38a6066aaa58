//! Random pairing bisection.
//!
//! Vertices are matched into disjoint pairs (plus one leftover vertex when
//! `n` is odd) and each pair is split across the two sides by a fair coin.
//! A vertex `v` is bad when fewer than `t` of its out-neighbours share its
//! side, or more than `d⁺(v) − t` do (then fewer than `t` are across).

use crate::digraph::{Bipartition, Digraph};
use crate::generators::stream_rng;
use crate::probability::Threshold;
use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MAX_TRIALS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("vertex {0} appears in more than one block")]
    Repeated(usize),
    #[error("vertex {0} is not covered by the pairing")]
    Uncovered(usize),
    #[error("a pairing of {n} vertices needs {expected} singleton(s)")]
    Singleton { n: usize, expected: usize },
    #[error("line {0}: expected \"u v\" or a single vertex")]
    Syntax(usize),
}

/// A perfect matching of `0..n`, with one unmatched vertex when `n` is odd.
///
/// Blocks are numbered pairs first, then the singleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<[usize; 2]>,
    singleton: Option<usize>,
    block_of: Vec<usize>,
}

impl Pairing {
    pub fn new(
        n: usize,
        pairs: Vec<[usize; 2]>,
        singleton: Option<usize>,
    ) -> Result<Self, PairingError> {
        if singleton.is_some() != (n % 2 == 1) {
            return Err(PairingError::Singleton { n, expected: n % 2 });
        }
        let mut block_of = vec![usize::MAX; n];
        let members = pairs
            .iter()
            .enumerate()
            .flat_map(|(i, &[x, y])| [(x, i), (y, i)])
            .chain(singleton.map(|s| (s, pairs.len())));
        for (v, block) in members {
            if v >= n {
                return Err(PairingError::UnknownVertex { vertex: v, n });
            }
            if block_of[v] != usize::MAX {
                return Err(PairingError::Repeated(v));
            }
            block_of[v] = block;
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(PairingError::Uncovered(v));
        }
        Ok(Pairing {
            pairs,
            singleton,
            block_of,
        })
    }

    /// A uniformly random pairing: shuffle the ids, then pair neighbours.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let singleton = (n % 2 == 1).then(|| order[n - 1]);
        let pairs = order.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        Pairing::new(n, pairs, singleton).expect("shuffled ids form a pairing")
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    pub fn singleton(&self) -> Option<usize> {
        self.singleton
    }

    pub fn block_count(&self) -> usize {
        self.pairs.len() + usize::from(self.singleton.is_some())
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    /// Members of block `i`: two for a pair, one for the singleton.
    pub fn block(&self, i: usize) -> &[usize] {
        match self.pairs.get(i) {
            Some(pair) => pair,
            None => std::slice::from_ref(self.singleton.as_ref().expect("block index in range")),
        }
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        let [x, y] = *self.pairs.get(self.block_of[v])?;
        Some(if x == v { y } else { x })
    }

    /// Places the vertices given one coin per block. For a pair `[x, y]` a
    /// `false` coin puts `x` in A and `y` in B; `true` swaps them. The
    /// singleton goes to A on `false`.
    pub fn split(&self, coins: &[bool]) -> Bipartition {
        assert_eq!(coins.len(), self.block_count(), "one coin per block");
        let mut a = FixedBitSet::with_capacity(self.n());
        for (&[x, y], &coin) in self.pairs.iter().zip(coins) {
            a.insert(if coin { y } else { x });
        }
        if let Some(s) = self.singleton {
            if !coins[self.pairs.len()] {
                a.insert(s);
            }
        }
        Bipartition::from_mask(a)
    }

    /// One line per block: `u v` for pairs, `u` for the singleton.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for [x, y] in &self.pairs {
            out.push_str(&format!("{x} {y}\n"));
        }
        if let Some(s) = self.singleton {
            out.push_str(&format!("{s}\n"));
        }
        out
    }

    pub fn parse(n: usize, text: &str) -> Result<Self, PairingError> {
        let mut pairs = Vec::new();
        let mut singleton = None;
        for (i, line) in text.lines().enumerate() {
            let ids = line
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| PairingError::Syntax(i + 1))?;
            match ids[..] {
                [] => {}
                [x, y] => pairs.push([x, y]),
                [s] if singleton.is_none() => singleton = Some(s),
                _ => return Err(PairingError::Syntax(i + 1)),
            }
        }
        Pairing::new(n, pairs, singleton)
    }
}

/// Uniform random pairing of `0..n`, reproducible from `seed`.
pub fn random_pairing(n: usize, seed: u64) -> Pairing {
    Pairing::random(n, &mut stream_rng(seed, 0))
}

/// One fair coin per block.
pub fn sample_coins<R: Rng + ?Sized>(pairing: &Pairing, rng: &mut R) -> Vec<bool> {
    (0..pairing.block_count())
        .map(|_| rng.random_bool(0.5))
        .collect()
}

/// Splits every pair of `pairing` by an independent fair coin.
pub fn sample_split(pairing: &Pairing, seed: u64) -> Bipartition {
    pairing.split(&sample_coins(pairing, &mut stream_rng(seed, 0)))
}

/// A vertex that misses its threshold, with its own-side out-degree `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadVertex {
    pub vertex: usize,
    pub x: usize,
    pub t: usize,
}

#[inline]
fn is_bad(x: usize, t: usize, dplus: usize) -> bool {
    x < t || x + t > dplus
}

/// All vertices with `x < t` or `x > d⁺ − t`, where `x` counts
/// out-neighbours on the vertex's own side.
pub fn bad_vertices(g: &Digraph, bip: &Bipartition, threshold: &Threshold) -> Vec<BadVertex> {
    bad_vertices_with(g, bip, &threshold.for_digraph(g))
}

/// [`bad_vertices`] with precomputed per-vertex thresholds.
pub fn bad_vertices_with(g: &Digraph, bip: &Bipartition, thresholds: &[usize]) -> Vec<BadVertex> {
    (0..g.n())
        .filter_map(|v| {
            let t = thresholds[v];
            let x = bip.own_side_out_degree(g, v);
            is_bad(x, t, g.out_neighbors(v).len()).then_some(BadVertex { vertex: v, x, t })
        })
        .collect()
}

pub fn count_bad_with(g: &Digraph, bip: &Bipartition, thresholds: &[usize]) -> usize {
    (0..g.n())
        .filter(|&v| {
            is_bad(
                bip.own_side_out_degree(g, v),
                thresholds[v],
                g.out_neighbors(v).len(),
            )
        })
        .count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub bipartition: Bipartition,
    /// Bad vertices of the returned bisection; empty on success.
    pub bad: Vec<BadVertex>,
    pub trials_used: usize,
    pub seed: u64,
    /// Bad count of every trial, in order.
    pub trial_bad_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("no good bisection in {trials} trials (best trial had {best_bad} bad vertices)")]
pub struct SamplingFailure {
    pub trials: usize,
    pub best_bad: usize,
    pub seed: u64,
    pub trial_bad_counts: Vec<usize>,
}

/// Samples bisections until one has no bad vertex. Trial `i` draws a fresh
/// pairing and fresh coins from stream `i` of `seed`, so the outcome does
/// not depend on anything but the arguments.
pub fn find_good_bisection(
    g: &Digraph,
    threshold: &Threshold,
    max_trials: usize,
    seed: u64,
) -> Result<SampleReport, SamplingFailure> {
    let thresholds = threshold.for_digraph(g);
    let mut counts = Vec::with_capacity(max_trials.min(1024));
    for trial in 0..max_trials {
        let mut rng = stream_rng(seed, trial as u64);
        let pairing = Pairing::random(g.n(), &mut rng);
        let bip = pairing.split(&sample_coins(&pairing, &mut rng));
        let bad = count_bad_with(g, &bip, &thresholds);
        log::debug!("trial {trial}: {bad} bad vertices");
        counts.push(bad);
        if bad == 0 {
            return Ok(SampleReport {
                bipartition: bip,
                bad: Vec::new(),
                trials_used: trial + 1,
                seed,
                trial_bad_counts: counts,
            });
        }
    }
    Err(SamplingFailure {
        trials: max_trials,
        best_bad: counts.iter().copied().min().unwrap_or(0),
        seed,
        trial_bad_counts: counts,
    })
}
