//! Exact bad-vertex probabilities under a pairing, and the analytic bounds
//! that dominate them.
//!
//! Under a pairing each vertex `v` sees its out-neighbourhood through the
//! pairing blocks: `a` blocks lie entirely inside N⁺(v) and contribute one
//! out-neighbour to each side deterministically, `b` blocks meet N⁺(v) in
//! exactly one vertex and contribute a fair coin. When `v`'s own partner is
//! an out-neighbour that coin is forced (the partner always lands on the
//! other side), so the number of out-neighbours of `v` on its own side is
//! `a + Binomial(b - 1, 1/2)`; otherwise it is `a + Binomial(b, 1/2)`.
//!
//! The leftover vertex of an odd pairing is its own block. It counts towards
//! `b` for every vertex that points at it, since its side is a fair coin.
//!
//! Everything with a closed binomial form is an exact [`BigRational`]; only
//! the exponential caps are `f64`.

use crate::digraph::Digraph;
use crate::pairing::Pairing;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbabilityError {
    #[error("epsilon must lie strictly between 0 and 1/2, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("epsilon {0} has more than 30 decimal places")]
    EpsilonPrecision(f64),
    #[error("invalid pair profile: {0}")]
    InvalidProfile(String),
    #[error("f(a, b) needs a < t and b >= 1 (a={a}, b={b}, t={t})")]
    EnvelopeDomain { a: usize, b: usize, t: usize },
    #[error(
        "Chernoff cap not valid: out-degree {dplus} is below (2+sqrt 2)/epsilon = {required:.4}"
    )]
    BoundNotValid { dplus: usize, required: f64 },
    #[error("delta_0 does not fit in 64 bits for epsilon {0}")]
    Delta0Overflow(f64),
}

const MAX_EPSILON_DECIMALS: u32 = 30;

/// A tolerance `0 < ε < 1/2`.
///
/// Thresholds `⌈(1/2 − ε)·d⌉` are computed exactly from the shortest
/// decimal that prints as the given `f64`, so `0.2` really means `1/5`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Epsilon {
    value: f64,
    numer: u128,
    scale: u32,
}

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, ProbabilityError> {
        if !(value > 0.0 && value < 0.5) {
            return Err(ProbabilityError::EpsilonOutOfRange(value));
        }
        let text = value.to_string();
        let frac = text.split_once('.').map_or("", |(_, f)| f);
        let scale = frac.len() as u32;
        if scale > MAX_EPSILON_DECIMALS {
            return Err(ProbabilityError::EpsilonPrecision(value));
        }
        let numer = frac.parse::<u128>().unwrap_or(0);
        Ok(Epsilon {
            value,
            numer,
            scale,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `⌈(1/2 − ε)·dplus⌉`, exact.
    pub fn threshold(&self, dplus: usize) -> usize {
        let unit = 10u128.pow(self.scale);
        let num = (unit - 2 * self.numer) * dplus as u128;
        let den = 2 * unit;
        num.div_ceil(den) as usize
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// How many out-neighbours a vertex must keep on each side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    /// `t = ⌈(1/2 − ε)·d⁺(v)⌉`.
    Relative(Epsilon),
    /// The same `t = k` for every vertex.
    Absolute(usize),
}

impl Threshold {
    pub fn for_degree(&self, dplus: usize) -> usize {
        match self {
            Threshold::Relative(eps) => eps.threshold(dplus),
            Threshold::Absolute(k) => *k,
        }
    }

    /// Per-vertex thresholds for a whole digraph.
    pub fn for_digraph(&self, g: &Digraph) -> Vec<usize> {
        (0..g.n())
            .map(|v| self.for_degree(g.out_neighbors(v).len()))
            .collect()
    }

    pub fn epsilon(&self) -> Option<Epsilon> {
        match self {
            Threshold::Relative(eps) => Some(*eps),
            Threshold::Absolute(_) => None,
        }
    }
}

/// Where a vertex's pairing partner sits relative to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartnerRelation {
    /// The partner is an out-neighbour.
    OutNeighbor,
    /// The partner is not an out-neighbour (in a tournament: an
    /// in-neighbour).
    NonOutNeighbor,
    /// The vertex is the leftover of an odd pairing.
    Singleton,
}

impl PartnerRelation {
    pub fn as_str(&self) -> &'static str {
        match self {
            PartnerRelation::OutNeighbor => "plus",
            PartnerRelation::NonOutNeighbor => "minus",
            PartnerRelation::Singleton => "singleton",
        }
    }
}

impl std::str::FromStr for PartnerRelation {
    type Err = ProbabilityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "out" => Ok(PartnerRelation::OutNeighbor),
            "minus" | "in" => Ok(PartnerRelation::NonOutNeighbor),
            "singleton" | "single" => Ok(PartnerRelation::Singleton),
            other => Err(ProbabilityError::InvalidProfile(format!(
                "unknown partner relation {other:?} (plus, minus, singleton)"
            ))),
        }
    }
}

/// Per-vertex statistics of a pairing that fix the law of the vertex's
/// own-side out-degree. `dplus = 2a + b` always holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairProfile {
    a: usize,
    b: usize,
    partner: PartnerRelation,
}

impl PairProfile {
    pub fn new(a: usize, b: usize, partner: PartnerRelation) -> Result<Self, ProbabilityError> {
        if partner == PartnerRelation::OutNeighbor && b == 0 {
            return Err(ProbabilityError::InvalidProfile(
                "a partner inside N+(v) makes v's own pair a mixed block, so b >= 1".into(),
            ));
        }
        Ok(PairProfile { a, b, partner })
    }

    /// Profile of `v` in `g` under `pairing`.
    pub fn from_pairing(g: &Digraph, v: usize, pairing: &Pairing) -> Self {
        let mut hits: HashMap<usize, u8> = HashMap::new();
        for &w in g.out_neighbors(v) {
            *hits.entry(pairing.block_of(w)).or_default() += 1;
        }
        let a = hits.values().filter(|&&c| c == 2).count();
        let b = hits.values().filter(|&&c| c == 1).count();
        let partner = match pairing.partner(v) {
            None => PartnerRelation::Singleton,
            Some(w) if g.has_arc(v, w) => PartnerRelation::OutNeighbor,
            Some(_) => PartnerRelation::NonOutNeighbor,
        };
        PairProfile { a, b, partner }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn partner(&self) -> PartnerRelation {
        self.partner
    }

    pub fn dplus(&self) -> usize {
        2 * self.a + self.b
    }

    /// Number of genuinely random blocks among the `b` mixed ones.
    pub fn free_coins(&self) -> u64 {
        match self.partner {
            PartnerRelation::OutNeighbor => self.b as u64 - 1,
            _ => self.b as u64,
        }
    }
}

/// `Σ_{i=0}^{min(k,N)} C(N,i) / 2^N`; 1 when `k >= N`, 0 when `k < 0`.
pub fn binomial_tail(n: u64, k: i64) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    if k as u64 >= n {
        return BigRational::one();
    }
    let mut term = BigInt::one();
    let mut sum = BigInt::one();
    for i in 1..=k as u64 {
        term = term * BigInt::from(n - i + 1) / BigInt::from(i);
        sum += &term;
    }
    BigRational::new(sum, BigInt::one() << n)
}

/// Pr(X_v < t).
pub fn prob_too_few(profile: &PairProfile, t: usize) -> BigRational {
    if profile.a >= t {
        return BigRational::zero();
    }
    binomial_tail(profile.free_coins(), t as i64 - 1 - profile.a as i64)
}

/// Pr(X_v > d⁺(v) − t).
pub fn prob_too_many(profile: &PairProfile, t: usize) -> BigRational {
    if profile.a >= t {
        return BigRational::zero();
    }
    let forced = i64::from(profile.partner == PartnerRelation::OutNeighbor);
    binomial_tail(
        profile.free_coins(),
        t as i64 - 1 - profile.a as i64 - forced,
    )
}

/// Pr(X_v < t or X_v > d⁺(v) − t), computed from the window
/// `t <= X_v <= d⁺ − t` rather than from the two tails, so it stays exact
/// when the two events overlap (possible for absolute thresholds above d⁺/2).
pub fn bad_probability(profile: &PairProfile, t: usize) -> BigRational {
    let a = profile.a as i64;
    let free = profile.free_coins();
    let lo = (t as i64).max(a) - a;
    let hi = profile.dplus() as i64 - t as i64 - a;
    let good = if hi < lo {
        BigRational::zero()
    } else {
        binomial_tail(free, hi) - binomial_tail(free, lo - 1)
    };
    BigRational::one() - good
}

/// The envelope `f(a, b) = Σ_{i=0}^{t−1−a} C(b−1, i) / 2^{b−1}`.
pub fn monotone_f(a: usize, b: usize, t: usize) -> Result<BigRational, ProbabilityError> {
    if a >= t || b == 0 {
        return Err(ProbabilityError::EnvelopeDomain { a, b, t });
    }
    Ok(binomial_tail(b as u64 - 1, (t - 1 - a) as i64))
}

/// Closed form of `f(a−1, b+2) − f(a, b)`:
/// `(b−1)!·(b − 2t + 2a) / ((b−t+a)!·(t−a)!·2^{b+1})`.
///
/// Defined for `1 <= a < t`, `b >= 1` and `b >= t − a`.
pub fn monotone_f_gap(a: usize, b: usize, t: usize) -> Result<BigRational, ProbabilityError> {
    if a == 0 || a >= t || b == 0 || b < t - a {
        return Err(ProbabilityError::EnvelopeDomain { a, b, t });
    }
    let k = t - a;
    let factorial = |m: usize| (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    let numer = factorial(b - 1) * (BigInt::from(b) - BigInt::from(2 * k));
    let denom = factorial(b - k) * factorial(k) * (BigInt::one() << (b + 1));
    Ok(BigRational::new(numer, denom))
}

/// `(2 + √2) / ε`, the out-degree from which the Chernoff cap applies.
pub fn chernoff_min_degree(eps: Epsilon) -> f64 {
    (2.0 + std::f64::consts::SQRT_2) / eps.value()
}

/// `e^{−ε²(d⁺ − 1)}`, a cap on each one-sided bad probability once
/// `d⁺ >= (2 + √2)/ε`.
pub fn chernoff_cap(dplus: usize, eps: Epsilon) -> Result<f64, ProbabilityError> {
    let required = chernoff_min_degree(eps);
    if (dplus as f64) < required {
        return Err(ProbabilityError::BoundNotValid { dplus, required });
    }
    let e = eps.value();
    Ok((-e * e * (dplus as f64 - 1.0)).exp())
}

/// `Σ_v 2e^{−ε²(d⁺(v) − 1)}`, an upper bound on the expected number of bad
/// vertices under any pairing.
pub fn expected_bad_upper(g: &Digraph, eps: Epsilon) -> Result<f64, ProbabilityError> {
    // validity is decided by the smallest out-degree
    chernoff_cap(g.min_out_degree(), eps)?;
    (0..g.n())
        .map(|v| chernoff_cap(g.out_neighbors(v).len(), eps).map(|c| 2.0 * c))
        .sum()
}

/// Exact expected number of bad vertices for one fixed pairing.
pub fn expected_bad_exact(g: &Digraph, pairing: &Pairing, threshold: &Threshold) -> BigRational {
    (0..g.n())
        .map(|v| {
            let profile = PairProfile::from_pairing(g, v, pairing);
            bad_probability(&profile, threshold.for_degree(profile.dplus()))
        })
        .sum()
}

/// Least `i₀ >= 1` with `e^{−ε²(2^{i−1} − 1)} <= 2^{−2i−2}` for all `i >= i₀`.
///
/// The inequality is evaluated in log form. Once it holds at `i` it holds
/// at `i + 1` (the left exponent doubles while the right one grows by
/// `2 ln 2`), which the scan confirms at `i₀ + 1` as well.
pub fn dyadic_index(eps: Epsilon) -> Result<u32, ProbabilityError> {
    let e2 = eps.value() * eps.value();
    let holds = |i: u32| {
        e2 * ((2f64).powi(i as i32 - 1) - 1.0) >= (2 * i + 2) as f64 * std::f64::consts::LN_2
    };
    (1..63)
        .find(|&i| holds(i) && holds(i + 1))
        .ok_or(ProbabilityError::Delta0Overflow(eps.value()))
}

/// `δ₀ = max{2^{i₀−1}, ⌈(2 + √2)/ε⌉}`.
pub fn delta0_pairing(eps: Epsilon) -> Result<u64, ProbabilityError> {
    let i0 = dyadic_index(eps)?;
    let dyadic = 1u64 << (i0 - 1);
    let chernoff = chernoff_min_degree(eps).ceil() as u64;
    Ok(dyadic.max(chernoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tournament, rotational_tournament};
    use crate::pairing::random_pairing;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn eps(x: f64) -> Epsilon {
        Epsilon::new(x).unwrap()
    }

    fn profile(a: usize, b: usize, rel: PartnerRelation) -> PairProfile {
        PairProfile::new(a, b, rel).unwrap()
    }

    use PartnerRelation::*;

    #[test]
    fn epsilon_thresholds_are_exact() {
        let e = eps(0.2);
        assert_eq!(e.threshold(500), 150);
        assert_eq!(e.threshold(5), 2);
        assert_eq!(e.threshold(0), 0);
        assert_eq!(eps(0.4).threshold(1), 1);
        assert_eq!(eps(0.25).threshold(4), 1);
        assert_eq!(eps(0.25).threshold(5), 2);
        assert!(Epsilon::new(0.5).is_err());
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
    }

    #[test]
    fn binomial_tail_examples() {
        assert_eq!(binomial_tail(4, 1), q(5, 16));
        assert_eq!(binomial_tail(10, 10), q(1, 1));
        assert_eq!(binomial_tail(6, -1), q(0, 1));
        assert_eq!(binomial_tail(0, 0), q(1, 1));
    }

    #[test]
    fn too_few_examples() {
        assert_eq!(prob_too_few(&profile(1, 3, OutNeighbor), 2), q(1, 4));
        assert_eq!(prob_too_few(&profile(2, 0, NonOutNeighbor), 2), q(0, 1));
        assert_eq!(prob_too_few(&profile(0, 5, NonOutNeighbor), 1), q(1, 32));
    }

    #[test]
    fn too_many_examples() {
        assert_eq!(prob_too_many(&profile(1, 3, OutNeighbor), 2), q(0, 1));
        assert_eq!(prob_too_many(&profile(0, 5, NonOutNeighbor), 1), q(1, 32));
        assert_eq!(prob_too_many(&profile(2, 0, Singleton), 1), q(0, 1));
    }

    #[test]
    fn profile_validation() {
        assert!(PairProfile::new(1, 0, OutNeighbor).is_err());
        assert_eq!(profile(1, 3, OutNeighbor).dplus(), 5);
        assert_eq!("plus".parse::<PartnerRelation>().unwrap(), OutNeighbor);
        assert!("sideways".parse::<PartnerRelation>().is_err());
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(monotone_f(1, 4, 2).unwrap(), q(1, 8));
        assert_eq!(monotone_f(0, 6, 2).unwrap(), q(3, 16));
        assert_eq!(monotone_f(0, 1, 1).unwrap(), q(1, 1));
        assert!(monotone_f(2, 4, 2).is_err());
        assert!(monotone_f(0, 0, 2).is_err());
    }

    #[test]
    fn envelope_gap_matches_difference() {
        for t in 2..=10 {
            for a in 1..t {
                for b in (t - a)..30 {
                    let diff = monotone_f(a - 1, b + 2, t).unwrap() - monotone_f(a, b, t).unwrap();
                    assert_eq!(monotone_f_gap(a, b, t).unwrap(), diff, "a={a} b={b} t={t}");
                }
            }
        }
    }

    #[test]
    fn chernoff_cap_examples() {
        let c = chernoff_cap(100, eps(0.2)).unwrap();
        assert!((c - (-0.04f64 * 99.0).exp()).abs() < 1e-15);
        assert!((c - 1.91e-2).abs() < 1e-4);
        match chernoff_cap(10, eps(0.2)) {
            Err(ProbabilityError::BoundNotValid {
                dplus: 10,
                required,
            }) => {
                assert!((required - 17.071).abs() < 1e-3)
            }
            other => panic!("expected validity error, got {other:?}"),
        }
        let exact = prob_too_few(&profile(0, 500, NonOutNeighbor), 150);
        let cap = chernoff_cap(500, eps(0.2)).unwrap();
        assert!(exact < BigRational::from_float(cap).unwrap());
    }

    #[test]
    fn expected_bad_examples() {
        let g = rotational_tournament(1001).unwrap();
        let upper = expected_bad_upper(&g, eps(0.2)).unwrap();
        let expect = 1001.0 * 2.0 * (-0.04f64 * 499.0).exp();
        assert!((upper - expect).abs() < 1e-18);
        assert!((upper - 4.3e-6).abs() < 0.05e-6);

        let small = rotational_tournament(7).unwrap();
        assert!(expected_bad_upper(&small, eps(0.2)).is_err());

        let single = Digraph::new(1, []).unwrap();
        let pairing = random_pairing(1, 0);
        let th = Threshold::Relative(eps(0.2));
        assert_eq!(expected_bad_exact(&single, &pairing, &th), q(0, 1));
    }

    #[test]
    fn delta0_examples() {
        assert_eq!(dyadic_index(eps(0.2)).unwrap(), 10);
        assert_eq!(delta0_pairing(eps(0.2)).unwrap(), 512);
        // scan at eps^2 = 0.16: i=7 gives 10.08 < 16 ln 2, i=8 gives 20.32 >= 18 ln 2
        assert_eq!(dyadic_index(eps(0.4)).unwrap(), 8);
        assert_eq!(delta0_pairing(eps(0.4)).unwrap(), 128);
    }

    #[test]
    fn profiles_from_pairings_satisfy_degree_identity() {
        for seed in 0..20 {
            let n = 5 + seed as usize % 9;
            let g = random_tournament(n, seed).unwrap();
            let pairing = random_pairing(n, seed + 100);
            for v in 0..n {
                let p = PairProfile::from_pairing(&g, v, &pairing);
                assert_eq!(p.dplus(), g.out_neighbors(v).len());
                if p.partner() == OutNeighbor {
                    assert!(p.b() >= 1);
                }
            }
        }
    }

    #[test]
    fn bad_probability_is_sum_of_tails_in_relative_mode() {
        for seed in 0..10 {
            let g = random_tournament(13, seed).unwrap();
            let pairing = random_pairing(13, seed);
            let e = eps(0.15);
            for v in 0..13 {
                let p = PairProfile::from_pairing(&g, v, &pairing);
                let t = e.threshold(p.dplus());
                assert_eq!(
                    bad_probability(&p, t),
                    prob_too_few(&p, t) + prob_too_many(&p, t)
                );
            }
        }
    }

    proptest! {
        #[test]
        fn domination_chain(a in 0usize..30, b in 1usize..60, rel in 0u8..3, e in 0.01f64..0.49) {
            let rel = [OutNeighbor, NonOutNeighbor, Singleton][rel as usize];
            let p = PairProfile::new(a, b, rel).unwrap();
            let t = Epsilon::new(e).unwrap().threshold(p.dplus());
            prop_assume!(p.dplus() > 2 * t && t >= 1);
            let envelope = monotone_f(0, p.dplus(), t).unwrap();
            prop_assert_eq!(&envelope, &binomial_tail(p.dplus() as u64 - 1, t as i64 - 1));
            prop_assert!(prob_too_few(&p, t) <= envelope);
            prop_assert!(prob_too_many(&p, t) <= envelope);
        }

        #[test]
        fn complement_symmetry(a in 0usize..20, b in 0usize..40, t in 0usize..30, single in any::<bool>()) {
            let rel = if single { Singleton } else { NonOutNeighbor };
            let p = PairProfile::new(a, b, rel).unwrap();
            prop_assert_eq!(prob_too_few(&p, t), prob_too_many(&p, t));
        }

        #[test]
        fn delta0_nonincreasing(e1 in 0.02f64..0.49, e2 in 0.02f64..0.49) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(delta0_pairing(eps(lo)).unwrap() >= delta0_pairing(eps(hi)).unwrap());
        }

        #[test]
        fn tail_is_a_probability(n in 0u64..200, k in -3i64..210) {
            let p = binomial_tail(n, k).to_f64().unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
