//! Out-degree cores and minimal cores.
//!
//! For a vertex set `S` and per-vertex thresholds `θ`, the *core* of `S` is
//! the largest subset in which every vertex `v` keeps at least `θ(v)`
//! out-neighbours. It is unique (a union of satisfying sets satisfies) and
//! is found by repeatedly deleting violators. A *minimal core* is a
//! nonempty satisfying set none of whose proper subsets satisfies.

use crate::digraph::{Bipartition, Digraph, GraphError, Side};
use crate::probability::Epsilon;
use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeelError {
    #[error("vertex {vertex} has only {degree} out-neighbours in the starting set, needs {need}")]
    NotSatisfying {
        vertex: usize,
        degree: usize,
        need: usize,
    },
    #[error("targets need 1 <= s <= t (s={s}, t={t})")]
    InvalidSpec { s: usize, t: usize },
    #[error("Lemma 2 bounds need k >= 2 and s >= 1 (s={s}, k={k})")]
    BoundDomain { s: usize, k: usize },
    #[error("input is not a tournament")]
    NotTournament,
    #[error("input is not a multipartite tournament")]
    NotMultipartite,
    #[error("input bisection misses its threshold at vertex {vertex} ({low} < {need})")]
    InputNotGood {
        vertex: usize,
        low: usize,
        need: usize,
    },
    #[error("hypothesis not met: min out-degree {delta} < required {required}")]
    HypothesisViolated { delta: usize, required: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Peeling state: a vertex set with the in-set out-degree of each member.
#[derive(Clone, Debug)]
struct CoreState<'a> {
    g: &'a Digraph,
    theta: &'a [usize],
    alive: FixedBitSet,
    degree: Vec<usize>,
    size: usize,
}

impl<'a> CoreState<'a> {
    fn new(g: &'a Digraph, set: &FixedBitSet, theta: &'a [usize]) -> Self {
        let mut degree = vec![0; g.n()];
        for v in set.ones() {
            degree[v] = g.out_degree_into(v, set);
        }
        CoreState {
            g,
            theta,
            alive: set.clone(),
            degree,
            size: set.count_ones(..),
        }
    }

    fn first_violator(&self) -> Option<usize> {
        self.alive.ones().find(|&v| self.degree[v] < self.theta[v])
    }

    /// Deletes `seeds` and everything that then falls below threshold.
    fn remove_cascade(&mut self, seeds: impl IntoIterator<Item = usize>) {
        let mut stack: Vec<usize> = Vec::new();
        for v in seeds {
            if self.alive.contains(v) {
                self.alive.set(v, false);
                stack.push(v);
            }
        }
        while let Some(z) = stack.pop() {
            self.size -= 1;
            for &u in self.g.in_neighbors(z) {
                if self.alive.contains(u) {
                    self.degree[u] -= 1;
                    if self.degree[u] < self.theta[u] {
                        self.alive.set(u, false);
                        stack.push(u);
                    }
                }
            }
        }
    }

    fn peel(&mut self) {
        let violators: Vec<usize> = self
            .alive
            .ones()
            .filter(|&v| self.degree[v] < self.theta[v])
            .collect();
        self.remove_cascade(violators);
    }

    fn members(&self) -> Vec<usize> {
        self.alive.ones().collect()
    }
}

fn mask_of(g: &Digraph, set: &[usize]) -> Result<FixedBitSet, GraphError> {
    let mut mask = FixedBitSet::with_capacity(g.n());
    for &v in set {
        g.check_vertex(v)?;
        mask.insert(v);
    }
    Ok(mask)
}

/// The same threshold for every vertex.
pub fn uniform_threshold(g: &Digraph, s: usize) -> Vec<usize> {
    vec![s; g.n()]
}

/// `⌈(1/2 − ε)·d⁺(v)⌉` for every vertex.
pub fn relative_threshold(g: &Digraph, eps: Epsilon) -> Vec<usize> {
    (0..g.n())
        .map(|v| eps.threshold(g.out_neighbors(v).len()))
        .collect()
}

/// The unique largest subset of `set` in which every `v` has at least
/// `theta[v]` out-neighbours. Sorted; possibly empty.
pub fn max_core(g: &Digraph, set: &[usize], theta: &[usize]) -> Result<Vec<usize>, GraphError> {
    let mut state = CoreState::new(g, &mask_of(g, set)?, theta);
    state.peel();
    Ok(state.members())
}

/// A minimal satisfying subset of `set`, which must itself satisfy.
///
/// Candidates are tried in ascending id order: deleting `v` and peeling is
/// kept whenever something survives. A candidate that empties the core
/// keeps doing so for every smaller set, so one ascending pass gives the
/// same answer as restarting the scan after each successful shrink.
pub fn minimal_core(g: &Digraph, set: &[usize], theta: &[usize]) -> Result<Vec<usize>, PeelError> {
    let mut state = CoreState::new(g, &mask_of(g, set)?, theta);
    if let Some(v) = state.first_violator() {
        return Err(PeelError::NotSatisfying {
            vertex: v,
            degree: state.degree[v],
            need: theta[v],
        });
    }
    for v in state.members() {
        if !state.alive.contains(v) {
            continue;
        }
        let mut trial = state.clone();
        trial.remove_cascade([v]);
        if trial.size > 0 {
            state = trial;
        }
    }
    Ok(state.members())
}

/// Checks the literal minimality certificate: `core` is nonempty and
/// satisfies `theta`, and deleting any one vertex leaves an empty core.
pub fn is_minimal_core(g: &Digraph, core: &[usize], theta: &[usize]) -> Result<bool, GraphError> {
    if core.is_empty() || max_core(g, core, theta)?.len() != core.len() {
        return Ok(false);
    }
    for &v in core {
        let rest: Vec<usize> = core.iter().copied().filter(|&w| w != v).collect();
        if !max_core(g, &rest, theta)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every vertex of `core` has an in-neighbour `u` inside `core`
/// whose out-degree inside `core` is exactly `theta[u]`.
pub fn every_vertex_has_tight_in_neighbor(g: &Digraph, core: &[usize], theta: &[usize]) -> bool {
    let mask = match mask_of(g, core) {
        Ok(mask) => mask,
        Err(_) => return false,
    };
    core.iter().all(|&v| {
        g.in_neighbors(v)
            .iter()
            .any(|&u| mask.contains(u) && g.out_degree_into(u, &mask) == theta[u])
    })
}

/// Minimum out-degree exactly `s`, and no proper subdigraph (by deleting
/// arcs or vertices) keeps minimum out-degree `s`.
///
/// If some `d⁺(v) > s`, dropping one of `v`'s arcs keeps δ⁺ >= s, so all
/// out-degrees must equal `s`; then only vertex deletions remain to check.
pub fn is_s_minimal(g: &Digraph, s: usize) -> bool {
    if g.n() == 0 || g.out_degrees().iter().any(|&d| d != s) {
        return false;
    }
    let theta = uniform_threshold(g, s);
    let all: FixedBitSet = (0..g.n()).collect();
    let base = CoreState::new(g, &all, &theta);
    (0..g.n()).all(|v| {
        let mut trial = base.clone();
        trial.remove_cascade([v]);
        trial.size == 0
    })
}

/// Shrinks side A of an ε-good bisection of a tournament to a minimal core
/// `A'` and moves the rest to B. Returns the new bipartition, after
/// checking that `T[A']` is strong and that every vertex still has
/// `⌈(1/2 − ε)·d⁺(v)⌉` out-neighbours on its own side.
pub fn strong_split(
    t: &Digraph,
    bisection: &Bipartition,
    eps: Epsilon,
) -> Result<Bipartition, PeelError> {
    if !t.is_tournament() {
        return Err(PeelError::NotTournament);
    }
    let theta = relative_threshold(t, eps);
    for (v, &need) in theta.iter().enumerate() {
        let low = bisection
            .out_degree_into_a(t, v)
            .min(bisection.out_degree_into_b(t, v));
        if low < need {
            return Err(PeelError::InputNotGood {
                vertex: v,
                low,
                need,
            });
        }
    }
    let core = minimal_core(t, &bisection.side_a(), &theta)?;
    let split = Bipartition::from_side_a(t.n(), core.iter().copied())?;
    if !t.induced_subdigraph(&core)?.graph.is_strongly_connected() {
        return Err(PeelError::Verification(
            "minimal core does not induce a strong subtournament".into(),
        ));
    }
    for (v, &need) in theta.iter().enumerate() {
        let own = split.own_side_out_degree(t, v);
        if own < need {
            return Err(PeelError::Verification(format!(
                "vertex {v} keeps {own} out-neighbours on its side, needs {need}"
            )));
        }
    }
    Ok(split)
}

/// Size bound on `s`-minimal `k`-partite tournaments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalCoreBound {
    /// `|V| <= (s+1)^4 / 4s` (bipartite case).
    AtMost(Ratio<u64>),
    /// `|V| < max{2s(s+1)^2, 2ks(s+1)}` (k > 2).
    LessThan(u64),
}

impl MinimalCoreBound {
    /// Largest vertex count the bound allows.
    pub fn max_vertices(&self) -> u64 {
        match self {
            MinimalCoreBound::AtMost(r) => r.floor().to_integer(),
            MinimalCoreBound::LessThan(b) => b - 1,
        }
    }

    pub fn value(&self) -> Ratio<u64> {
        match self {
            MinimalCoreBound::AtMost(r) => *r,
            MinimalCoreBound::LessThan(b) => Ratio::from_integer(*b),
        }
    }
}

pub fn minimal_core_bound(s: usize, k: usize) -> Result<MinimalCoreBound, PeelError> {
    if k < 2 || s == 0 {
        return Err(PeelError::BoundDomain { s, k });
    }
    let (s, k) = (s as u64, k as u64);
    Ok(if k == 2 {
        MinimalCoreBound::AtMost(Ratio::new((s + 1).pow(4), 4 * s))
    } else {
        MinimalCoreBound::LessThan((2 * s * (s + 1) * (s + 1)).max(2 * k * s * (s + 1)))
    })
}

/// Targets for a split: `δ⁺(D[A]) >= s` and `δ⁺(D[B]) >= t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSpec {
    s: usize,
    t: usize,
}

impl SplitSpec {
    pub fn new(s: usize, t: usize) -> Result<Self, PeelError> {
        if s == 0 || s > t {
            return Err(PeelError::InvalidSpec { s, t });
        }
        Ok(SplitSpec { s, t })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }
}

/// Minimum out-degree a `k`-partite tournament needs for the (s,t) split to
/// be guaranteed: `t + (s+1)^4/4s − s` for `k = 2`, and
/// `t + max{2s(s+1)^2, 2ks(s+1)}` for `k > 2`.
pub fn split_hypothesis(spec: SplitSpec, k: usize) -> Result<Ratio<u64>, PeelError> {
    let (s, t) = (spec.s as u64, spec.t as u64);
    Ok(match minimal_core_bound(spec.s, k)? {
        MinimalCoreBound::AtMost(r) => r + Ratio::from_integer(t) - Ratio::from_integer(s),
        MinimalCoreBound::LessThan(b) => Ratio::from_integer(t + b),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisGate {
    /// Log a warning and attempt the split anyway.
    Warn,
    /// Refuse to run when the hypothesis fails.
    Enforce,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeelOutcome {
    pub bipartition: Bipartition,
    pub min_out_a: usize,
    pub min_out_b: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultipartiteSplit {
    pub outcome: PeelOutcome,
    pub k: usize,
    pub required_min_out_degree: Ratio<u64>,
    pub hypothesis_met: bool,
}

/// A = a minimal core of `V` with uniform threshold `s`, B = the rest;
/// then checks `δ⁺(D[A]) >= s`, `δ⁺(D[B]) >= t` and that B is nonempty.
pub fn peel_split(g: &Digraph, spec: SplitSpec) -> Result<PeelOutcome, PeelError> {
    let theta = uniform_threshold(g, spec.s);
    let all: Vec<usize> = (0..g.n()).collect();
    let core = minimal_core(g, &all, &theta)?;
    let bip = Bipartition::from_side_a(g.n(), core)?;
    let min_out_a = bip.side_min_out_degree(g, Side::A).unwrap_or(0);
    let min_out_b = match bip.side_min_out_degree(g, Side::B) {
        Some(d) => d,
        None => {
            return Err(PeelError::Verification(
                "the whole vertex set is minimal, so side B is empty".into(),
            ))
        }
    };
    if min_out_a < spec.s {
        return Err(PeelError::Verification(format!(
            "side A has minimum out-degree {min_out_a} < s = {}",
            spec.s
        )));
    }
    if min_out_b < spec.t {
        let v = bip
            .side_b()
            .into_iter()
            .find(|&v| bip.out_degree_into_b(g, v) < spec.t)
            .expect("some vertex attains the minimum");
        return Err(PeelError::Verification(format!(
            "side B has minimum out-degree {min_out_b} < t = {} (vertex {v})",
            spec.t
        )));
    }
    Ok(PeelOutcome {
        bipartition: bip,
        min_out_a,
        min_out_b,
    })
}

/// Constructive (s,t)-split of a multipartite tournament.
pub fn split_multipartite(
    g: &Digraph,
    spec: SplitSpec,
    gate: HypothesisGate,
) -> Result<MultipartiteSplit, PeelError> {
    let k = g.multipartite_classes().ok_or(PeelError::NotMultipartite)?;
    let required = split_hypothesis(spec, k)?;
    let delta = g.min_out_degree();
    let hypothesis_met = Ratio::from_integer(delta as u64) >= required;
    if !hypothesis_met {
        match gate {
            HypothesisGate::Enforce => {
                return Err(PeelError::HypothesisViolated {
                    delta,
                    required: required.to_string(),
                })
            }
            HypothesisGate::Warn => log::warn!(
                "min out-degree {delta} is below the sufficient bound {required}; attempting anyway"
            ),
        }
    }
    let outcome = peel_split(g, spec)?;
    Ok(MultipartiteSplit {
        outcome,
        k,
        required_min_out_degree: required,
        hypothesis_met,
    })
}
