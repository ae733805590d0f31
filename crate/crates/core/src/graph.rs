//! Weighted undirected simple graphs and the set-level primitives built on them:
//! degree, volume, cut weight and conductance.
//!
//! Vertices are dense ids `0..n`. The graph is immutable once built; adjacency is
//! kept in CSR form with each row sorted by neighbor id, so every summation over
//! a vertex's incident edges happens in a fixed order.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Largest graph accepted by [`Graph::graph_conductance`]; it enumerates `2^(n-1)` subsets.
pub const CONDUCTANCE_EXHAUSTIVE_LIMIT: usize = 20;

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Builds a set from arbitrary ids, rejecting ids `>= n` and duplicates.
    pub fn new(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = ids.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Input(format!("duplicate vertex {} in set", w[0])));
            }
        }
        if let Some(&last) = v.last() {
            if last >= n {
                return Err(Error::Input(format!("vertex {last} out of range (n = {n})")));
            }
        }
        Ok(VertexSet(v))
    }

    /// Wraps ids already known to be sorted, unique and in range.
    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        VertexSet(v)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// The vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = Vec::with_capacity(n.saturating_sub(self.0.len()));
        let mut it = self.0.iter().peekable();
        for v in 0..n {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                out.push(v);
            }
        }
        VertexSet(out)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub(crate) fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

/// Weighted undirected simple graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    /// Edges with `u < v`, in insertion order.
    edges: Vec<(usize, usize, f64)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    total_weight: f64,
    components: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops, duplicate pairs (in either
    /// orientation), out-of-range ids and non-positive weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u}, {v}) out of range (n = {n})")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Input(format!("edge ({u}, {v}) has non-positive weight {w}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::Input(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
            list.push((key.0, key.1, w));
        }
        Ok(Self::from_checked(n, list))
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    /// Builds from edges already validated (u < v, unique, positive weights).
    pub(crate) fn from_checked(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut deg_count = vec![0usize; n];
        for &(u, v, _) in &edges {
            deg_count[u] += 1;
            deg_count[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg_count[i];
        }
        let mut rows: Vec<Vec<(usize, f64)>> = deg_count.iter().map(|&c| Vec::with_capacity(c)).collect();
        for &(u, v, w) in &edges {
            rows[u].push((v, w));
            rows[v].push((u, w));
        }
        let mut neighbors = Vec::with_capacity(offsets[n]);
        let mut weights = Vec::with_capacity(offsets[n]);
        let mut degrees = Vec::with_capacity(n);
        for mut row in rows {
            row.sort_unstable_by_key(|&(x, _)| x);
            let mut d = 0.0;
            for (x, w) in row {
                neighbors.push(x);
                weights.push(w);
                d += w;
            }
            degrees.push(d);
        }
        let total_weight = edges.iter().map(|e| e.2).sum();
        let mut g = Graph {
            n,
            edges,
            offsets,
            neighbors,
            weights,
            degrees,
            total_weight,
            components: 0,
        };
        g.components = g.count_components();
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// `vol(G)`: the sum of weighted degrees.
    pub fn vol(&self) -> f64 {
        self.degrees.iter().sum()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Neighbors of `v` (ascending) with the matching edge weights.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    /// Unweighted neighbor count of `v`.
    pub fn neighbor_count(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Weight of edge `(u, v)`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.neighbors[r.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[r.start + i])
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1.0)
    }

    /// `W = max weight / min weight` (1 for an edgeless graph).
    pub fn weight_ratio(&self) -> f64 {
        let (lo, hi) = self
            .edges
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), e| (lo.min(e.2), hi.max(e.2)));
        if self.edges.is_empty() {
            1.0
        } else {
            hi / lo
        }
    }

    pub fn max_neighbor_count(&self) -> usize {
        (0..self.n).map(|v| self.neighbor_count(v)).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has exactly `d` neighbors.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.neighbor_count(0);
        (0..self.n).all(|v| self.neighbor_count(v) == d).then_some(d)
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("empty graph".into()));
        }
        if self.components != 1 {
            return Err(Error::Disconnected {
                components: self.components,
            });
        }
        Ok(())
    }

    /// Component label of every vertex, labelled in order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for (x, _) in self.neighbors(u) {
                    if label[x] == usize::MAX {
                        label[x] = next;
                        stack.push(x);
                    }
                }
            }
            next += 1;
        }
        label
    }

    fn count_components(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |c| c + 1)
    }

    /// Weighted degree of `v`.
    pub fn degree(&self, v: usize) -> Result<f64> {
        self.degrees
            .get(v)
            .copied()
            .ok_or_else(|| Error::Input(format!("vertex {v} out of range (n = {})", self.n)))
    }

    /// Sum of degrees over `s`.
    pub fn volume(&self, s: &VertexSet) -> f64 {
        self.volume_of(s.as_slice())
    }

    pub(crate) fn volume_of(&self, members: &[usize]) -> f64 {
        members.iter().map(|&v| self.degrees[v]).sum()
    }

    /// Total weight of edges with one endpoint in `a` and the other in `b`.
    pub fn cut_weight(&self, a: &VertexSet, b: &VertexSet) -> Result<f64> {
        if !a.is_disjoint(b) {
            return Err(Error::Input("cut_weight needs disjoint sets".into()));
        }
        let in_b = b.mask(self.n);
        let (small, mask) = if a.len() <= b.len() { (a, in_b) } else { (b, a.mask(self.n)) };
        let mut total = 0.0;
        for u in small.iter() {
            for (x, w) in self.neighbors(u) {
                if mask[x] {
                    total += w;
                }
            }
        }
        Ok(total)
    }

    /// Exact count of edges between disjoint `a` and `b` (ignores weights).
    pub fn cut_edge_count(&self, a: &VertexSet, b: &VertexSet) -> Result<u64> {
        if !a.is_disjoint(b) {
            return Err(Error::Input("cut_edge_count needs disjoint sets".into()));
        }
        let in_b = b.mask(self.n);
        Ok(a.iter()
            .flat_map(|u| self.neighbors(u))
            .filter(|&(x, _)| in_b[x])
            .count() as u64)
    }

    /// Total weight of edges inside `s`.
    pub fn internal_weight(&self, s: &VertexSet) -> f64 {
        let mask = s.mask(self.n);
        let mut total = 0.0;
        for u in s.iter() {
            for (x, w) in self.neighbors(u) {
                if x > u && mask[x] {
                    total += w;
                }
            }
        }
        total
    }

    /// Weight leaving `members` (sorted ids), given a membership predicate.
    /// Summation order: members ascending, then neighbors ascending.
    pub(crate) fn boundary_with(&self, members: &[usize], inside: impl Fn(usize) -> bool) -> f64 {
        let mut g = 0.0;
        for &u in members {
            for (x, w) in self.neighbors(u) {
                if !inside(x) {
                    g += w;
                }
            }
        }
        g
    }

    /// Weight of the cut between `s` and its complement.
    pub fn boundary_weight(&self, s: &VertexSet) -> f64 {
        let mask = s.mask(self.n);
        self.boundary_with(s.as_slice(), |x| mask[x])
    }

    /// `Φ(S) = w(S, S̄) / min(vol S, vol S̄)` for a non-empty proper subset.
    pub fn conductance(&self, s: &VertexSet) -> Result<f64> {
        if s.is_empty() || s.len() >= self.n {
            return Err(Error::Domain(
                "conductance is undefined for the empty set and for V".into(),
            ));
        }
        let vol_s = self.volume(s);
        let denom = vol_s.min(self.vol() - vol_s);
        if denom <= 0.0 {
            return Err(Error::Domain("zero-volume side in conductance".into()));
        }
        Ok(self.boundary_weight(s) / denom)
    }

    /// `Φ(G)`: minimum conductance over non-empty proper subsets, by enumeration.
    pub fn graph_conductance(&self) -> Result<f64> {
        self.graph_conductance_with_limit(CONDUCTANCE_EXHAUSTIVE_LIMIT)
    }

    pub fn graph_conductance_with_limit(&self, limit: usize) -> Result<f64> {
        self.require_connected()?;
        if self.n > limit {
            return Err(Error::Capacity {
                what: "graph_conductance",
                size: self.n,
                limit,
            });
        }
        if self.n < 2 {
            return Err(Error::Domain("conductance needs at least two vertices".into()));
        }
        // Φ(S) = Φ(S̄), so keep the last vertex outside S.
        let free = self.n - 1;
        let vol = self.vol();
        let mut best = f64::INFINITY;
        for mask in 1u64..(1u64 << free) {
            let mut vol_s = 0.0;
            for v in 0..free {
                if mask >> v & 1 == 1 {
                    vol_s += self.degrees[v];
                }
            }
            let mut cut = 0.0;
            for &(u, v, w) in &self.edges {
                let a = u < free && mask >> u & 1 == 1;
                let b = v < free && mask >> v & 1 == 1;
                if a != b {
                    cut += w;
                }
            }
            let phi = cut / vol_s.min(vol - vol_s);
            if phi < best {
                best = phi;
            }
        }
        Ok(best)
    }

    /// Subgraph induced by `keep` (sorted), relabelled to `0..keep.len()`.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.0] != usize::MAX && index[e.1] != usize::MAX)
            .map(|&(u, v, w)| (index[u], index[v], w))
            .collect();
        Graph::from_checked(keep.len(), edges)
    }
}
