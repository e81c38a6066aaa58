//! Exhaustive enumeration on small instances.

use crate::digraph::{Bipartition, Digraph, GraphError};
use crate::lll::event_variables;
use crate::pairing::Pairing;
use crate::peeling::is_s_minimal;
use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

/// Most coin blocks [`exact_xv_distribution`] will enumerate.
pub const MAX_XV_BLOCKS: usize = 24;
/// Most vertices [`exists_split`] accepts when any bipartition is allowed.
pub const MAX_SPLIT_VERTICES: usize = 20;
/// Most vertices [`exists_split`] accepts when only bisections are allowed.
pub const MAX_BISECTION_VERTICES: usize = 26;
/// Largest part size for [`exhaustive_bipartite_minimal_scan`].
pub const MAX_SCAN_PART: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} is {size}, over the enumeration budget of {limit}")]
    Budget {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn budget(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::Budget { what, size, limit })
    } else {
        Ok(())
    }
}

/// Exact law of `X_v` (out-neighbours of `v` on its own side) over the
/// coins of a fixed pairing, by enumerating the blocks that decide it.
pub fn exact_xv_distribution(
    g: &Digraph,
    v: usize,
    pairing: &Pairing,
) -> Result<BTreeMap<usize, BigRational>, OracleError> {
    g.check_vertex(v)?;
    let blocks = event_variables(g, pairing, v);
    budget("number of deciding blocks", blocks.len(), MAX_XV_BLOCKS)?;
    let local = |z: usize| {
        let block = pairing.block_of(z);
        let bit = blocks.binary_search(&block).expect("deciding block");
        // position 1 of a pair is in A exactly when the coin is true
        let second = pairing.block(block)[0] != z;
        (bit, second)
    };
    let me = local(v);
    let others: Vec<(usize, bool)> = g.out_neighbors(v).iter().map(|&w| local(w)).collect();
    let in_a = |mask: u32, (bit, second): (usize, bool)| (mask >> bit & 1 == 1) == second;

    let mut counts = vec![0u64; others.len() + 1];
    for mask in 0..1u32 << blocks.len() {
        let mine = in_a(mask, me);
        let x = others.iter().filter(|&&w| in_a(mask, w) == mine).count();
        counts[x] += 1;
    }
    let total = BigInt::from(1u64) << blocks.len();
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(x, c)| (x, BigRational::new(BigInt::from(c), total.clone())))
        .collect())
}

fn rows(g: &Digraph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.out_neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn is_split(rows: &[u32], full: u32, a: u32, s: usize, t: usize) -> bool {
    let b = full & !a;
    if a == 0 || b == 0 {
        return false;
    }
    (0..rows.len()).all(|v| {
        if a >> v & 1 == 1 {
            (rows[v] & a).count_ones() as usize >= s
        } else {
            (rows[v] & b).count_ones() as usize >= t
        }
    })
}

/// Next larger integer with the same number of set bits.
fn gosper(x: u32) -> Option<u32> {
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// Some bipartition (or bisection) `(A, B)` with both sides nonempty,
/// `δ⁺(D[A]) >= s` and `δ⁺(D[B]) >= t`, if one exists. Returns the one
/// whose side-A bitmask is smallest (within each side size for bisections,
/// smaller `|A|` first).
pub fn exists_split(
    g: &Digraph,
    s: usize,
    t: usize,
    bisection_only: bool,
) -> Result<Option<Bipartition>, OracleError> {
    let n = g.n();
    let rows = rows(g);
    let to_bip = |a: u32| {
        let mut mask = FixedBitSet::with_capacity(n);
        (0..n)
            .filter(|&v| a >> v & 1 == 1)
            .for_each(|v| mask.insert(v));
        Bipartition::from_mask(mask)
    };
    if bisection_only {
        budget("vertex count", n, MAX_BISECTION_VERTICES)?;
        if n < 2 {
            return Ok(None);
        }
        let full = (1u32 << n) - 1;
        let mut sizes = vec![n / 2];
        if n % 2 == 1 {
            sizes.push(n / 2 + 1);
        }
        for k in sizes {
            let mut a = (1u32 << k) - 1;
            loop {
                if is_split(&rows, full, a, s, t) {
                    return Ok(Some(to_bip(a)));
                }
                match gosper(a) {
                    Some(next) if next <= full => a = next,
                    _ => break,
                }
            }
        }
        Ok(None)
    } else {
        budget("vertex count", n, MAX_SPLIT_VERTICES)?;
        if n < 2 {
            return Ok(None);
        }
        let full = (1u32 << n) - 1;
        Ok((1..full)
            .into_par_iter()
            .find_first(|&a| is_split(&rows, full, a, s, t))
            .map(to_bip))
    }
}

/// An s-minimal bipartite tournament found by the scan.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalHit {
    /// Part sizes `p <= q`; vertices `0..p` form the first part.
    pub parts: (usize, usize),
    pub graph: Digraph,
}

/// Every orientation of `K_{p,q}` with `1 <= p <= q <= max_part` that is
/// s-minimal.
pub fn exhaustive_bipartite_minimal_scan(
    max_part: usize,
    s: usize,
) -> Result<Vec<MinimalHit>, OracleError> {
    budget("part size", max_part, MAX_SCAN_PART)?;
    let shapes: Vec<(usize, usize)> = (1..=max_part)
        .flat_map(|p| (p..=max_part).map(move |q| (p, q)))
        .collect();
    let mut hits = Vec::new();
    for (p, q) in shapes {
        let pairs: Vec<(usize, usize)> = (0..p)
            .flat_map(|i| (p..p + q).map(move |j| (i, j)))
            .collect();
        let parts = vec![(0..p).collect(), (p..p + q).collect()];
        let found: Vec<MinimalHit> = (0..1u64 << pairs.len())
            .into_par_iter()
            .filter_map(|mask| {
                let arcs = pairs.iter().enumerate().map(|(bit, &(i, j))| {
                    if mask >> bit & 1 == 1 {
                        (j, i)
                    } else {
                        (i, j)
                    }
                });
                let graph =
                    Digraph::with_parts(p + q, arcs, parts.clone()).expect("valid orientation");
                is_s_minimal(&graph, s).then_some(MinimalHit {
                    parts: (p, q),
                    graph,
                })
            })
            .collect();
        hits.extend(found);
    }
    Ok(hits)
}
