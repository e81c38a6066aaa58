//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded
//! with `seed_from_u64`, which is specified bit-for-bit and therefore
//! reproduces the same instances on every platform. Independent streams of
//! one seed are selected with [`stream_rng`].

use crate::digraph::{Digraph, GraphError};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("rotational tournaments need an odd vertex count, got {0}")]
    EvenRotational(usize),
    #[error("a multipartite tournament needs at least 2 parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("out-degree {d} impossible on {n} vertices")]
    DegreeTooLarge { n: usize, d: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Each unordered pair `{u, v}` (`u < v`, visited lexicographically) is
/// oriented by one fair coin.
pub fn random_tournament(n: usize, seed: u64) -> Result<Digraph, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            arcs.push(if rng.random_bool(0.5) { (u, v) } else { (v, u) });
        }
    }
    Ok(Digraph::new(n, arcs)?)
}

/// Vertex `i` beats `i+1, ..., i+(n-1)/2` modulo `n`.
pub fn rotational_tournament(n: usize) -> Result<Digraph, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    if n.is_multiple_of(2) {
        return Err(GenerateError::EvenRotational(n));
    }
    let half = (n - 1) / 2;
    let arcs = (0..n).flat_map(|i| (1..=half).map(move |j| (i, (i + j) % n)));
    Ok(Digraph::new(n, arcs)?)
}

/// Parts take consecutive ids in the order given; every cross-part pair is
/// oriented by one fair coin.
pub fn random_k_partite_tournament(
    part_sizes: &[usize],
    seed: u64,
) -> Result<Digraph, GenerateError> {
    if part_sizes.len() < 2 {
        return Err(GenerateError::TooFewParts(part_sizes.len()));
    }
    if let Some(i) = part_sizes.iter().position(|&s| s == 0) {
        return Err(GenerateError::EmptyPart(i));
    }
    let mut parts = Vec::with_capacity(part_sizes.len());
    let mut part_of = Vec::new();
    let mut next = 0;
    for (i, &size) in part_sizes.iter().enumerate() {
        parts.push((next..next + size).collect::<Vec<_>>());
        part_of.extend(std::iter::repeat_n(i, size));
        next += size;
    }
    let n = next;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u] != part_of[v] {
                arcs.push(if rng.random_bool(0.5) { (u, v) } else { (v, u) });
            }
        }
    }
    Ok(Digraph::with_parts(n, arcs, parts)?)
}

/// Every vertex gets exactly `d` out-neighbours drawn uniformly without
/// replacement from the other `n - 1` vertices. Digons may appear.
pub fn random_digraph_min_outdegree(
    n: usize,
    d: usize,
    seed: u64,
) -> Result<Digraph, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Empty);
    }
    if d >= n {
        return Err(GenerateError::DegreeTooLarge { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(n * d);
    for v in 0..n {
        for i in index::sample(&mut rng, n - 1, d) {
            // skip over v itself
            let w = if i >= v { i + 1 } else { i };
            arcs.push((v, w));
        }
    }
    Ok(Digraph::new(n, arcs)?)
}

/// Vertices of `second` are shifted by `first.n()`. Part structure is
/// dropped.
pub fn disjoint_union(first: &Digraph, second: &Digraph) -> Digraph {
    let shift = first.n();
    let arcs = first
        .arcs()
        .chain(second.arcs().map(|(u, v)| (u + shift, v + shift)));
    Digraph::new(first.n() + second.n(), arcs).expect("union of simple digraphs is simple")
}

/// Applies a uniformly random relabelling of the vertices.
pub fn shuffle_labels(g: &Digraph, seed: u64) -> Digraph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let arcs = g.arcs().map(|(u, v)| (perm[u], perm[v]));
    match g.parts() {
        Some(parts) => {
            let parts = parts
                .iter()
                .map(|p| p.iter().map(|&v| perm[v]).collect())
                .collect();
            Digraph::with_parts(g.n(), arcs, parts).expect("relabelling preserves validity")
        }
        None => Digraph::new(g.n(), arcs).expect("relabelling preserves validity"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tournaments() {
        let one = random_tournament(1, 3).unwrap();
        assert_eq!((one.n(), one.arc_count()), (1, 0));
        assert_eq!(random_tournament(0, 1), Err(GenerateError::Empty));

        let a = random_tournament(5, 42).unwrap();
        let b = random_tournament(5, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.is_tournament());

        let big = random_tournament(1001, 7).unwrap();
        assert!(big.is_tournament());
        assert_eq!(big.out_degrees().iter().sum::<usize>(), 500_500);
    }

    #[test]
    fn rotational() {
        let c3 = rotational_tournament(3).unwrap();
        assert_eq!(c3.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        let r7 = rotational_tournament(7).unwrap();
        assert_eq!((r7.min_out_degree(), r7.max_out_degree()), (3, 3));
        assert!(r7.is_tournament());
        let r1001 = rotational_tournament(1001).unwrap();
        assert!(r1001.out_degrees().iter().all(|&d| d == 500));
        assert_eq!(
            rotational_tournament(8),
            Err(GenerateError::EvenRotational(8))
        );
    }

    #[test]
    fn multipartite() {
        let single = random_k_partite_tournament(&[1, 1], 0).unwrap();
        assert_eq!(single.arc_count(), 1);
        let small = random_k_partite_tournament(&[2, 2], 9).unwrap();
        assert!(small.is_k_partite_tournament(2));
        let big = random_k_partite_tournament(&[200, 200], 1).unwrap();
        assert_eq!(big.arc_count(), 40_000);
        assert!(big.is_k_partite_tournament(2));
        let three = random_k_partite_tournament(&[3, 1, 2], 5).unwrap();
        assert!(three.is_k_partite_tournament(3));
        assert_eq!(
            random_k_partite_tournament(&[3], 0),
            Err(GenerateError::TooFewParts(1))
        );
        assert_eq!(
            random_k_partite_tournament(&[3, 0], 0),
            Err(GenerateError::EmptyPart(1))
        );
    }

    #[test]
    fn exact_out_degree() {
        let k4 = random_digraph_min_outdegree(4, 3, 11).unwrap();
        assert_eq!(k4.arc_count(), 12);
        let g = random_digraph_min_outdegree(10, 3, 2).unwrap();
        assert!(g.out_degrees().iter().all(|&d| d == 3));
        assert_eq!(
            random_digraph_min_outdegree(16, 3, 5).unwrap(),
            random_digraph_min_outdegree(16, 3, 5).unwrap()
        );
        assert_eq!(
            random_digraph_min_outdegree(3, 3, 0),
            Err(GenerateError::DegreeTooLarge { n: 3, d: 3 })
        );
    }

    #[test]
    fn union_and_relabel() {
        let c3 = rotational_tournament(3).unwrap();
        let u = disjoint_union(&c3, &c3);
        assert_eq!(u.n(), 6);
        assert!(!u.is_strongly_connected());
        let s = shuffle_labels(&u, 3);
        assert_eq!(s.arc_count(), 6);
        assert_eq!(s.out_degrees(), vec![1; 6]);
    }
}
