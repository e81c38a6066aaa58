//! Immutable simple digraphs and bipartitions of their vertex sets.
//!
//! Vertices are dense ids `0..n`. Every digraph keeps sorted out/in lists
//! for iteration and one out-neighbourhood bitset per vertex so that
//! "how many out-neighbours of `v` lie in this set" is a popcount.

use fixedbitset::FixedBitSet;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("invalid part structure: {0}")]
    InvalidParts(String),
    #[error("arc {0} -> {1} joins two vertices of the same part")]
    ArcInsidePart(usize, usize),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;

/// A simple digraph: no loops, no repeated arcs. Antiparallel pairs are
/// allowed unless a part structure is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arc_count: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    out_rows: Vec<FixedBitSet>,
    parts: Option<Vec<Vec<usize>>>,
}

impl Digraph {
    pub fn new<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out_rows = vec![FixedBitSet::with_capacity(n); n];
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::UnknownVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if out_rows[u].put(v) {
                return Err(GraphError::DuplicateArc(u, v));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
            arc_count += 1;
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Digraph {
            n,
            arc_count,
            out_adj,
            in_adj,
            out_rows,
            parts: None,
        })
    }

    /// Builds a digraph carrying a partition of its vertices into `k >= 2`
    /// nonempty classes; every arc must cross two classes.
    pub fn with_parts<I>(n: usize, arcs: I, parts: Vec<Vec<usize>>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Digraph::new(n, arcs)?;
        g.attach_parts(parts)?;
        Ok(g)
    }

    fn attach_parts(&mut self, mut parts: Vec<Vec<usize>>) -> Result<()> {
        if parts.len() < 2 {
            return Err(GraphError::InvalidParts(format!(
                "need at least 2 parts, got {}",
                parts.len()
            )));
        }
        let mut part_of = vec![usize::MAX; self.n];
        for (i, part) in parts.iter_mut().enumerate() {
            if part.is_empty() {
                return Err(GraphError::InvalidParts(format!("part {i} is empty")));
            }
            part.sort_unstable();
            for &v in part.iter() {
                if v >= self.n {
                    return Err(GraphError::UnknownVertex {
                        vertex: v,
                        n: self.n,
                    });
                }
                if part_of[v] != usize::MAX {
                    return Err(GraphError::InvalidParts(format!(
                        "vertex {v} listed in more than one part"
                    )));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::InvalidParts(format!(
                "vertex {v} is in no part"
            )));
        }
        for (u, v) in self.arcs() {
            if part_of[u] == part_of[v] {
                return Err(GraphError::ArcInsidePart(u, v));
            }
        }
        self.parts = Some(parts);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn parts(&self) -> Option<&[Vec<usize>]> {
        self.parts.as_deref()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Panics if either endpoint is out of range.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_rows[u].contains(v)
    }

    /// Sorted out-neighbours. Panics on an unknown vertex.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Sorted in-neighbours. Panics on an unknown vertex.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Out-neighbourhood of `v` as a bitset over `0..n`.
    pub fn out_row(&self, v: usize) -> &FixedBitSet {
        &self.out_rows[v]
    }

    pub fn out_degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.out_adj[v].len())
    }

    pub fn in_degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.in_adj[v].len())
    }

    /// All out-degrees, indexed by vertex.
    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(Vec::len).collect()
    }

    /// δ⁺(D); 0 for the empty digraph.
    pub fn min_out_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Δ⁻(D); 0 for the empty digraph.
    pub fn max_in_degree(&self) -> usize {
        self.in_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of out-neighbours of `v` inside `set`.
    pub fn out_degree_into(&self, v: usize, set: &FixedBitSet) -> usize {
        self.out_rows[v].intersection_count(set)
    }

    /// The subdigraph induced by `vertices`, relabelled to `0..|S|` in
    /// ascending order of original id. Part structure is restricted to the
    /// parts that stay nonempty.
    pub fn induced_subdigraph(&self, vertices: &[usize]) -> Result<InducedSubdigraph> {
        let mut original: Vec<usize> = vertices.to_vec();
        original.sort_unstable();
        original.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in original.iter().enumerate() {
            self.check_vertex(v)?;
            local[v] = i;
        }
        let arcs: Vec<(usize, usize)> = original
            .iter()
            .flat_map(|&u| {
                self.out_adj[u]
                    .iter()
                    .filter(|&&v| local[v] != usize::MAX)
                    .map(|&v| (local[u], local[v]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut graph = Digraph::new(original.len(), arcs)?;
        if let Some(parts) = &self.parts {
            let restricted: Vec<Vec<usize>> = parts
                .iter()
                .map(|p| {
                    p.iter()
                        .filter(|&&v| local[v] != usize::MAX)
                        .map(|&v| local[v])
                        .collect::<Vec<_>>()
                })
                .filter(|p| !p.is_empty())
                .collect();
            if restricted.len() >= 2 {
                graph.attach_parts(restricted)?;
            }
        }
        Ok(InducedSubdigraph { graph, original })
    }

    /// Exactly one arc between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        let n = self.n;
        if self.arc_count != n * n.saturating_sub(1) / 2 {
            return false;
        }
        (0..n).all(|u| (u + 1..n).all(|v| self.has_arc(u, v) != self.has_arc(v, u)))
    }

    /// Orientation of a complete `k`-partite graph. Uses the recorded part
    /// structure when present; otherwise parts are the classes of the
    /// non-adjacency relation, which must then be an equivalence.
    pub fn is_k_partite_tournament(&self, k: usize) -> bool {
        let part_of = match self.part_labels() {
            Some(labels) => labels,
            None => return false,
        };
        let classes = part_of.iter().copied().max().map_or(0, |m| m + 1);
        if classes != k || k < 2 {
            return false;
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                let (uv, vu) = (self.has_arc(u, v), self.has_arc(v, u));
                if part_of[u] == part_of[v] {
                    if uv || vu {
                        return false;
                    }
                } else if uv == vu {
                    return false;
                }
            }
        }
        true
    }

    /// Number of classes when this digraph is a multipartite tournament.
    pub fn multipartite_classes(&self) -> Option<usize> {
        let labels = self.part_labels()?;
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        self.is_k_partite_tournament(k).then_some(k)
    }

    fn part_labels(&self) -> Option<Vec<usize>> {
        if let Some(parts) = &self.parts {
            let mut labels = vec![0; self.n];
            for (i, p) in parts.iter().enumerate() {
                for &v in p {
                    labels[v] = i;
                }
            }
            return Some(labels);
        }
        // Group by non-adjacency; a valid grouping is checked afterwards by
        // the caller's pairwise scan.
        let mut labels = vec![usize::MAX; self.n];
        let mut next = 0;
        for u in 0..self.n {
            if labels[u] != usize::MAX {
                continue;
            }
            labels[u] = next;
            for (v, label) in labels.iter_mut().enumerate().skip(u + 1) {
                if *label == usize::MAX && !self.has_arc(u, v) && !self.has_arc(v, u) {
                    *label = next;
                }
            }
            next += 1;
        }
        Some(labels)
    }

    /// Every ordered pair is joined by a directed path. A digraph on at most
    /// one vertex is strong.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.reach_count(0, &self.out_adj) == self.n && self.reach_count(0, &self.in_adj) == self.n
    }

    fn reach_count(&self, root: usize, adj: &[Vec<usize>]) -> usize {
        let mut seen = FixedBitSet::with_capacity(self.n);
        seen.insert(root);
        let mut queue = VecDeque::from([root]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen.put(w) {
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }
}

/// An induced subdigraph together with the original id of each of its
/// vertices (`original[local] = global`).
#[derive(Clone, Debug)]
pub struct InducedSubdigraph {
    pub graph: Digraph,
    pub original: Vec<usize>,
}

/// Which side of a bipartition a vertex sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A split of `0..n` into two disjoint sides covering every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    a: FixedBitSet,
    b: FixedBitSet,
}

impl Bipartition {
    /// `A` is the given set, `B` its complement in `0..n`.
    pub fn from_side_a<I>(n: usize, a: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = FixedBitSet::with_capacity(n);
        for v in a {
            if v >= n {
                return Err(GraphError::UnknownVertex { vertex: v, n });
            }
            set.insert(v);
        }
        Ok(Self::from_mask(set))
    }

    /// Both sides listed explicitly; they must be disjoint and cover `0..n`.
    pub fn from_sides(n: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        let mut seen = FixedBitSet::with_capacity(n);
        for &v in a.iter().chain(b) {
            if v >= n {
                return Err(GraphError::UnknownVertex { vertex: v, n });
            }
            if seen.put(v) {
                return Err(GraphError::InvalidBipartition(format!(
                    "vertex {v} listed twice"
                )));
            }
        }
        if seen.count_ones(..) != n {
            return Err(GraphError::InvalidBipartition(format!(
                "sides cover {} of {n} vertices",
                seen.count_ones(..)
            )));
        }
        Self::from_side_a(n, a.iter().copied())
    }

    pub fn from_mask(a: FixedBitSet) -> Self {
        let mut b = a.clone();
        b.toggle_range(..);
        Bipartition { a, b }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn side_of(&self, v: usize) -> Side {
        if self.a.contains(v) {
            Side::A
        } else {
            Side::B
        }
    }

    pub fn mask(&self, side: Side) -> &FixedBitSet {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn side_a(&self) -> Vec<usize> {
        self.a.ones().collect()
    }

    pub fn side_b(&self) -> Vec<usize> {
        self.b.ones().collect()
    }

    pub fn len_a(&self) -> usize {
        self.a.count_ones(..)
    }

    pub fn len_b(&self) -> usize {
        self.b.count_ones(..)
    }

    pub fn is_bisection(&self) -> bool {
        self.len_a().abs_diff(self.len_b()) <= 1
    }

    /// d⁺_A(v).
    pub fn out_degree_into_a(&self, g: &Digraph, v: usize) -> usize {
        g.out_degree_into(v, &self.a)
    }

    /// d⁺_B(v).
    pub fn out_degree_into_b(&self, g: &Digraph, v: usize) -> usize {
        g.out_degree_into(v, &self.b)
    }

    /// Out-neighbours of `v` on its own side.
    pub fn own_side_out_degree(&self, g: &Digraph, v: usize) -> usize {
        g.out_degree_into(v, self.mask(self.side_of(v)))
    }

    /// e(A, B): arcs leaving A and entering B.
    pub fn arcs_a_to_b(&self, g: &Digraph) -> usize {
        self.a.ones().map(|v| g.out_degree_into(v, &self.b)).sum()
    }

    /// Minimum out-degree of the subdigraph induced by one side; `None`
    /// when that side is empty.
    pub fn side_min_out_degree(&self, g: &Digraph, side: Side) -> Option<usize> {
        let mask = self.mask(side);
        mask.ones().map(|v| g.out_degree_into(v, mask)).min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn c4() -> Digraph {
        // a=0 -> b=1 -> c=2 -> d=3 -> a
        Digraph::with_parts(
            4,
            [(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![vec![0, 2], vec![1, 3]],
        )
        .unwrap()
    }

    #[test]
    fn degrees_of_small_digraphs() {
        let g = cycle3();
        for v in 0..3 {
            assert_eq!(g.out_degree(v).unwrap(), 1);
            assert_eq!(g.in_degree(v).unwrap(), 1);
        }
        let arc = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(arc.min_out_degree(), 0);
        assert_eq!(arc.max_in_degree(), 1);
        assert_eq!(
            g.out_degree(3),
            Err(GraphError::UnknownVertex { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Digraph::new(2, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Digraph::new(2, [(0, 1), (0, 1)]),
            Err(GraphError::DuplicateArc(0, 1))
        );
        // digons are fine for general digraphs
        assert!(Digraph::new(2, [(0, 1), (1, 0)]).is_ok());
        assert_eq!(
            Digraph::with_parts(2, [(0, 1)], vec![vec![0, 1], vec![]]),
            Err(GraphError::InvalidParts("part 1 is empty".into()))
        );
        assert_eq!(
            Digraph::with_parts(3, [(0, 2)], vec![vec![0, 2], vec![1]]),
            Err(GraphError::ArcInsidePart(0, 2))
        );
    }

    #[test]
    fn induced_subdigraphs() {
        let g = cycle3();
        let all = g.induced_subdigraph(&[2, 0, 1]).unwrap();
        assert_eq!(all.graph, g);

        let two = g.induced_subdigraph(&[0, 1]).unwrap();
        assert_eq!(two.graph.arcs().collect::<Vec<_>>(), vec![(0, 1)]);

        let path = c4().induced_subdigraph(&[0, 1, 2]).unwrap();
        assert_eq!(path.graph.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(path.graph.parts().unwrap(), &[vec![0, 2], vec![1]]);

        assert!(g.induced_subdigraph(&[0, 7]).is_err());
    }

    #[test]
    fn tournament_predicates() {
        assert!(cycle3().is_tournament());
        let digon = Digraph::new(2, [(0, 1), (1, 0)]).unwrap();
        assert!(!digon.is_tournament());
        assert!(c4().is_k_partite_tournament(2));
        assert!(!c4().is_k_partite_tournament(3));
        assert!(!c4().is_tournament());
        // inferred parts
        let bare = Digraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(bare.is_k_partite_tournament(2));
        assert_eq!(bare.multipartite_classes(), Some(2));
        // a tournament is an n-partite tournament with singleton parts
        assert!(cycle3().is_k_partite_tournament(3));
    }

    #[test]
    fn strong_connectivity() {
        assert!(cycle3().is_strongly_connected());
        assert!(!Digraph::new(2, [(0, 1)]).unwrap().is_strongly_connected());
        let two_cycles = Digraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!two_cycles.is_strongly_connected());
        assert!(Digraph::new(1, []).unwrap().is_strongly_connected());
    }

    #[test]
    fn bipartition_counts() {
        let g = c4();
        let bip = Bipartition::from_side_a(4, [0, 1]).unwrap();
        assert!(bip.is_bisection());
        assert_eq!(bip.side_b(), vec![2, 3]);
        assert_eq!(bip.out_degree_into_a(&g, 0), 1);
        assert_eq!(bip.out_degree_into_b(&g, 1), 1);
        assert_eq!(bip.own_side_out_degree(&g, 3), 0);
        assert_eq!(bip.arcs_a_to_b(&g), 1);
        assert_eq!(bip.side_min_out_degree(&g, Side::A), Some(0));

        assert!(Bipartition::from_sides(4, &[0, 1], &[2]).is_err());
        assert!(Bipartition::from_sides(4, &[0, 1], &[1, 2, 3]).is_err());
        let lopsided = Bipartition::from_sides(4, &[0], &[1, 2, 3]).unwrap();
        assert!(!lopsided.is_bisection());
    }
}
