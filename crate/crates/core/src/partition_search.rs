//! Two-dimensional structure entropy: exhaustive search on small graphs, greedy
//! agglomeration on large ones, and family-specific constructions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;

use crate::entropy::{code_term, h1, h_partition, EntropyReport, Method};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{Graph, VertexSet};
use crate::partition::Partition;

/// Largest graph accepted by [`exact_h2`] (`Bell(12) = 4 213 597` partitions).
pub const EXACT_H2_LIMIT: usize = 12;

/// Exhaustive minimum of `H^P` over all partitions of `V`.
///
/// Ties go to the lexicographically least restricted-growth string, so `{V}`
/// wins whenever nothing beats `H¹`. Modules need not be connected.
pub fn exact_h2(g: &Graph) -> Result<(f64, Partition)> {
    g.require_connected()?;
    let n = g.n();
    if n > EXACT_H2_LIMIT {
        return Err(Error::Capacity {
            what: "exact_h2",
            size: n,
            limit: EXACT_H2_LIMIT,
        });
    }
    let eval = Evaluator::new(g);
    // Split the search space on a short prefix; each chunk covers a contiguous
    // lexicographic range, so combining chunk minima in order keeps the tie rule.
    let depth = n.min(4);
    let mut prefixes = Vec::new();
    let mut buf = vec![0usize; depth];
    collect_prefixes(&mut buf, 1, 0, &mut prefixes);
    let chunks: Vec<(f64, Vec<usize>)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut rgs = vec![0usize; n];
            rgs[..prefix.len()].copy_from_slice(prefix);
            let max = prefix.iter().copied().max().unwrap_or(0);
            let mut best = (f64::INFINITY, Vec::new());
            search(&eval, &mut rgs, prefix.len(), max, &mut best);
            best
        })
        .collect();
    let mut best = (f64::INFINITY, Vec::new());
    for c in chunks {
        if c.0 < best.0 {
            best = c;
        }
    }
    let p = Partition::from_labels(&best.1);
    debug_assert_eq!(h_partition(g, &p).unwrap().to_bits(), best.0.to_bits());
    Ok((best.0, p))
}

fn collect_prefixes(buf: &mut Vec<usize>, pos: usize, max: usize, out: &mut Vec<Vec<usize>>) {
    if pos == buf.len() {
        out.push(buf.clone());
        return;
    }
    for c in 0..=max + 1 {
        buf[pos] = c;
        collect_prefixes(buf, pos + 1, max.max(c), out);
    }
}

fn search(eval: &Evaluator, rgs: &mut Vec<usize>, pos: usize, max: usize, best: &mut (f64, Vec<usize>)) {
    if pos == rgs.len() {
        let v = eval.value(rgs, max + 1);
        if v < best.0 {
            *best = (v, rgs.clone());
        }
        return;
    }
    for c in 0..=max + 1 {
        rgs[pos] = c;
        search(eval, rgs, pos + 1, max.max(c), best);
    }
}

/// Allocation-free `H^P` for restricted-growth strings. Accumulates in exactly
/// the order used by [`h_partition`], so values agree to the bit.
struct Evaluator<'a> {
    g: &'a Graph,
    vol: f64,
}

impl<'a> Evaluator<'a> {
    fn new(g: &'a Graph) -> Self {
        Evaluator { g, vol: g.vol() }
    }

    fn value(&self, rgs: &[usize], modules: usize) -> f64 {
        let d = self.g.degrees();
        let mut vols = [0.0f64; EXACT_H2_LIMIT];
        let mut cuts = [0.0f64; EXACT_H2_LIMIT];
        for (v, &j) in rgs.iter().enumerate() {
            vols[j] += d[v];
            for (x, w) in self.g.neighbors(v) {
                if rgs[x] != j {
                    cuts[j] += w;
                }
            }
        }
        let mut total = 0.0;
        for j in 0..modules {
            total += code_term(cuts[j], self.vol, vols[j], self.vol);
            for (v, &jv) in rgs.iter().enumerate() {
                if jv == j {
                    total += code_term(d[v], self.vol, d[v], vols[j]);
                }
            }
        }
        total
    }
}

/// Greedy agglomerative upper bound on `H²`.
///
/// Starts from singletons and repeatedly applies the most negative merge among
/// modules joined by an edge, ties to the smallest `(i, j)` (modules named by
/// their least vertex). Stops when no merge lowers `H^P`.
pub fn greedy_h2(g: &Graph) -> Result<(f64, Partition)> {
    let h = h1(g)?;
    let all: Vec<usize> = (0..g.n()).collect();
    let modules = agglomerate_within(g, &all, g.vol(), g.vol());
    let p = Partition::from_modules(g.n(), &modules)?;
    let value = h_partition(g, &p)?;
    if value > h {
        // rounding can leave a no-op merge sequence a few ulps above H¹
        return Ok((h, Partition::trivial(g.n())));
    }
    Ok((value, p))
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    delta: f64,
    a: usize,
    b: usize,
    va: u32,
    vb: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Candidate {
    // max-heap pops the smallest delta, then the smallest pair
    fn cmp(&self, o: &Self) -> Ordering {
        o.delta
            .total_cmp(&self.delta)
            .then(o.a.cmp(&self.a))
            .then(o.b.cmp(&self.b))
    }
}

struct Cluster {
    vol: f64,
    cut: f64,
    /// `Σ d log2 d` over members.
    s: f64,
    members: Vec<usize>,
    adj: BTreeMap<usize, f64>,
    version: u32,
    alive: bool,
}

/// Contribution of a module with volume `v`, boundary `cut` and `s = Σ d log2 d`
/// to a two-level code whose parent node has volume `parent`.
fn cluster_cost(v: f64, cut: f64, s: f64, vol: f64, parent: f64) -> f64 {
    -(s - v * v.log2()) / vol + code_term(cut, vol, v, parent)
}

/// Greedy agglomeration of `members` (sorted) scored against a parent node of
/// volume `parent`. Boundaries are measured in the whole graph, adjacency only
/// inside `members`. Returns modules sorted by least vertex.
pub(crate) fn agglomerate_within(g: &Graph, members: &[usize], parent: f64, vol: f64) -> Vec<Vec<usize>> {
    let k = members.len();
    let local = |v: usize| members.binary_search(&v).ok();
    let d = g.degrees();
    let mut clusters: Vec<Cluster> = members
        .iter()
        .map(|&v| {
            let mut adj = BTreeMap::new();
            for (x, w) in g.neighbors(v) {
                if let Some(lx) = local(x) {
                    adj.insert(lx, w);
                }
            }
            Cluster {
                vol: d[v],
                cut: d[v],
                s: d[v] * d[v].log2(),
                members: vec![v],
                adj,
                version: 0,
                alive: true,
            }
        })
        .collect();
    let delta = |c: &[Cluster], a: usize, b: usize, w: f64| -> f64 {
        let (x, y) = (&c[a], &c[b]);
        let merged = cluster_cost(x.vol + y.vol, x.cut + y.cut - 2.0 * w, x.s + y.s, vol, parent);
        merged - cluster_cost(x.vol, x.cut, x.s, vol, parent) - cluster_cost(y.vol, y.cut, y.s, vol, parent)
    };
    let mut heap = BinaryHeap::new();
    for a in 0..k {
        for (&b, &w) in clusters[a].adj.range(a + 1..) {
            heap.push(Candidate {
                delta: delta(&clusters, a, b, w),
                a,
                b,
                va: 0,
                vb: 0,
            });
        }
    }
    while let Some(c) = heap.pop() {
        let (ca, cb) = (&clusters[c.a], &clusters[c.b]);
        if !ca.alive || !cb.alive || ca.version != c.va || cb.version != c.vb {
            continue;
        }
        if !(c.delta < 0.0) {
            break;
        }
        let (a, b) = (c.a, c.b);
        let w_ab = clusters[a].adj[&b];
        let absorbed = std::mem::take(&mut clusters[b].adj);
        let moved = std::mem::take(&mut clusters[b].members);
        clusters[b].alive = false;
        {
            let (sb_vol, sb_cut, sb_s) = (clusters[b].vol, clusters[b].cut, clusters[b].s);
            let ca = &mut clusters[a];
            ca.vol += sb_vol;
            ca.cut = ca.cut + sb_cut - 2.0 * w_ab;
            ca.s += sb_s;
            ca.members.extend(moved);
            ca.adj.remove(&b);
            ca.version += 1;
        }
        for (x, w) in absorbed {
            if x == a {
                continue;
            }
            *clusters[a].adj.entry(x).or_insert(0.0) += w;
            let cx = &mut clusters[x];
            cx.adj.remove(&b);
            *cx.adj.entry(a).or_insert(0.0) += w;
        }
        let neighbors: Vec<(usize, f64)> = clusters[a].adj.iter().map(|(&x, &w)| (x, w)).collect();
        for (x, w) in neighbors {
            let (lo, hi) = if a < x { (a, x) } else { (x, a) };
            heap.push(Candidate {
                delta: delta(&clusters, lo, hi, w),
                a: lo,
                b: hi,
                va: clusters[lo].version,
                vb: clusters[hi].version,
            });
        }
    }
    let mut out: Vec<Vec<usize>> = clusters
        .into_iter()
        .filter(|c| c.alive)
        .map(|mut c| {
            c.members.sort_unstable();
            c.members
        })
        .collect();
    out.sort_by_key(|m| m[0]);
    out
}

/// Effect on `H^P` of merging two modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeDelta {
    pub i: usize,
    pub j: usize,
    /// `H^P(after) - H^P(before)`.
    pub delta_hp: f64,
    /// `w(X_i, X_j)`.
    pub cut: f64,
    pub volume_i: f64,
    pub volume_j: f64,
}

/// Change in `H^P` from merging modules `i` and `j` of `p`, touching only the
/// terms of those two modules.
pub fn merge_delta(g: &Graph, p: &Partition, i: usize, j: usize) -> Result<MergeDelta> {
    g.require_connected()?;
    p.check_size(g.n())?;
    if i == j || i >= p.len() || j >= p.len() {
        return Err(Error::Input(format!(
            "need two distinct module ids below {}, got {i} and {j}",
            p.len()
        )));
    }
    let vol = g.vol();
    let modules = p.modules();
    let (xi, xj) = (&modules[i], &modules[j]);
    let in_i = |x: usize| p.module_of(x) == i;
    let in_j = |x: usize| p.module_of(x) == j;
    let cut_i = g.boundary_with(xi, in_i);
    let cut_j = g.boundary_with(xj, in_j);
    let mut w = 0.0;
    for &u in xi {
        for (x, wx) in g.neighbors(u) {
            if in_j(x) {
                w += wx;
            }
        }
    }
    let (vi, vj) = (g.volume_of(xi), g.volume_of(xj));
    let term = |members: &[usize], v: f64, cut: f64| -> f64 {
        let d = g.degrees();
        code_term(cut, vol, v, vol) + members.iter().map(|&x| code_term(d[x], vol, d[x], v)).sum::<f64>()
    };
    let mut union: Vec<usize> = xi.iter().chain(xj).copied().collect();
    union.sort_unstable();
    let merged = term(&union, vi + vj, cut_i + cut_j - 2.0 * w);
    Ok(MergeDelta {
        i,
        j,
        delta_hp: merged - term(xi, vi, cut_i) - term(xj, vj, cut_j),
        cut: w,
        volume_i: vi,
        volume_j: vj,
    })
}

/// Direction predicted for splitting `X₁` into `Y₁ ∪ Y₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitEffect {
    Raises,
    Lowers,
    Tie,
}

/// Both sides of the merge/split inequality on a regular graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeSplit {
    /// `e(Y₁,Y₂) · log2(n / |X₁|)`.
    pub lhs: f64,
    /// `e(Y₁,Y₁) · log2(|X₁|/|Y₁|) + e(Y₂,Y₂) · log2(|X₁|/|Y₂|)`.
    pub rhs: f64,
    pub predicted: SplitEffect,
}

impl MergeSplit {
    /// On a `d`-regular graph the split changes `H^P` by exactly
    /// `2 (lhs - rhs) / vol(G)`.
    pub fn predicted_delta(&self, vol: f64) -> f64 {
        2.0 * (self.lhs - self.rhs) / vol
    }
}

/// Splitting criterion for a module `x1 = y1 ∪ y2` of a regular graph: the
/// split raises `H^P` iff `lhs ≥ rhs`. Differences within `1e-9` count as ties.
pub fn merge_split_criterion(g: &Graph, x1: &VertexSet, y1: &VertexSet, y2: &VertexSet) -> Result<MergeSplit> {
    if g.n() == 0 || g.regular_degree().is_none() || !g.is_unweighted() {
        return Err(Error::Domain("merge/split criterion needs an unweighted regular graph".into()));
    }
    if y1.is_empty() || y2.is_empty() || !y1.is_disjoint(y2) || y1.union(y2) != *x1 {
        return Err(Error::Input("y1 and y2 must be non-empty and partition x1".into()));
    }
    let n = g.n() as f64;
    let e12 = g.cut_edge_count(y1, y2)? as f64;
    let e11 = g.internal_weight(y1);
    let e22 = g.internal_weight(y2);
    let (x, a, b) = (x1.len() as f64, y1.len() as f64, y2.len() as f64);
    let lhs = e12 * (n / x).log2();
    let rhs = e11 * (x / a).log2() + e22 * (x / b).log2();
    let predicted = if (lhs - rhs).abs() <= 1e-9 {
        SplitEffect::Tie
    } else if lhs > rhs {
        SplitEffect::Raises
    } else {
        SplitEffect::Lowers
    };
    Ok(MergeSplit { lhs, rhs, predicted })
}

/// Graph family metadata for the construction mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Complete binary tree of the given depth, vertices numbered heap-style.
    CompleteBinaryTree { depth: usize },
    /// `side × side` grid, vertices numbered row-major.
    Grid { side: usize },
    /// Complete graph.
    Complete,
    /// A known community partition (for example the color classes of a
    /// security-model graph).
    Natural(Partition),
    /// No known construction; greedy is used.
    Other,
}

/// How [`resistance`] obtains `H²`.
#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Exact,
    Greedy,
    Construction(Family),
}

/// Level-cut used for complete binary trees: `k + 1 = ⌈log2 H⌉`.
pub fn tree_level_cut(depth: usize) -> usize {
    let c = (depth as f64).log2().ceil() as usize;
    c.saturating_sub(1).clamp(1, depth.saturating_sub(1).max(1))
}

/// Block side used for grids: `k = ⌈log2 n⌉`, clamped to `[2, n]`.
pub fn grid_block_side(side: usize) -> usize {
    ((side as f64).log2().ceil() as usize).clamp(2, side.max(2))
}

/// The family's explicit partition and a short name for it.
pub fn construction_partition(g: &Graph, family: &Family) -> Result<(Partition, String)> {
    match family {
        Family::CompleteBinaryTree { depth } => {
            let h = *depth;
            if h < 2 || h >= usize::BITS as usize || g.n() != (1usize << h) - 1 {
                return Err(Error::Input(format!("graph is not a complete binary tree of depth {h}")));
            }
            let k = tree_level_cut(h);
            Ok((generators::tree_partition(h, k)?, format!("tree-cut-k{k}")))
        }
        Family::Grid { side } => {
            if *side < 2 || g.n() != side * side {
                return Err(Error::Input(format!("graph is not a {side}x{side} grid")));
            }
            let k = grid_block_side(*side);
            Ok((generators::grid_partition(*side, k)?, format!("grid-blocks-k{k}")))
        }
        Family::Complete => {
            let n = g.n();
            if g.m() != n * (n - 1) / 2 {
                return Err(Error::Input("graph is not complete".into()));
            }
            let mut best: Option<(f64, usize, Partition)> = None;
            for l in 1..=n.min(8) {
                let p = generators::balanced_partition(n, l)?;
                let v = h_partition(g, &p)?;
                if best.as_ref().map_or(true, |b| v < b.0) {
                    best = Some((v, l, p));
                }
            }
            let (_, l, p) = best.expect("n >= 1");
            Ok((p, format!("balanced-L{l}")))
        }
        Family::Natural(p) => {
            p.check_size(g.n())?;
            Ok((p.clone(), "natural".into()))
        }
        Family::Other => Ok((greedy_h2(g)?.1, "greedy".into())),
    }
}

/// `R = H¹ - H²` with `H²` from the selected mode. Outside exact mode the
/// report's `h2` is an upper bound, so its resistance is a lower bound
/// (flagged by [`Method::is_bound`]).
pub fn resistance(g: &Graph, mode: &Mode) -> Result<EntropyReport> {
    let h = h1(g)?;
    let (value, p, method) = match mode {
        Mode::Exact => {
            let (v, p) = exact_h2(g)?;
            (v, p, Method::Exact)
        }
        Mode::Greedy => {
            let (v, p) = greedy_h2(g)?;
            (v, p, Method::Greedy)
        }
        Mode::Construction(f) => {
            let (p, name) = construction_partition(g, f)?;
            (h_partition(g, &p)?, p, Method::Construction(name))
        }
    };
    if value > h {
        return EntropyReport::from_values(g, h, h, Partition::trivial(g.n()), method);
    }
    EntropyReport::from_values(g, h, value, p, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding_tree::{h_k_exact, CodingTree};
    use crate::generators::{complete_graph, cycle};
    use crate::partition::RestrictedGrowth;

    fn k4() -> Graph {
        complete_graph(4).unwrap()
    }

    fn brute_force(g: &Graph) -> f64 {
        let mut it = RestrictedGrowth::new(g.n());
        let mut best = f64::INFINITY;
        while let Some(r) = it.next_rgs() {
            best = best.min(h_partition(g, &Partition::from_labels(r)).unwrap());
        }
        best
    }

    #[test]
    fn exact_matches_brute_force_and_tree_search() {
        for g in [k4(), cycle(6).unwrap(), cycle(7).unwrap()] {
            let (v, p) = exact_h2(&g).unwrap();
            assert_eq!(v, brute_force(&g));
            assert_eq!(h_partition(&g, &p).unwrap(), v);
            let (tv, tree) = h_k_exact(&g, 2).unwrap();
            assert_eq!(tv.to_bits(), v.to_bits());
            assert_eq!(tree, CodingTree::from_partition(&p));
        }
        let k2 = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let (v, p) = exact_h2(&k2).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(p, Partition::trivial(2));
    }

    #[test]
    fn exact_capacity() {
        let g = cycle(13).unwrap();
        assert!(matches!(exact_h2(&g), Err(Error::Capacity { .. })));
    }

    #[test]
    fn greedy_examples() {
        let g = k4();
        let (gv, gp) = greedy_h2(&g).unwrap();
        let (ev, _) = exact_h2(&g).unwrap();
        assert!((gv - ev).abs() < 1e-9);
        assert_eq!(h_partition(&g, &gp).unwrap(), gv);
        let c6 = cycle(6).unwrap();
        let (gv, _) = greedy_h2(&c6).unwrap();
        let (ev, _) = exact_h2(&c6).unwrap();
        assert!((gv - ev).abs() < 1e-9);
    }

    #[test]
    fn merge_delta_examples() {
        let c6 = cycle(6).unwrap();
        let arcs = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let md = merge_delta(&c6, &arcs, 0, 1).unwrap();
        assert!((md.delta_hp - (6f64.log2() - 1.918_295_834)).abs() < 1e-6);
        assert!((md.delta_hp - 2.0 / 3.0).abs() < 1e-4);
        assert_eq!(md.cut, 2.0);
        let g = k4();
        let s = Partition::singletons(4);
        let md = merge_delta(&g, &s, 0, 1).unwrap();
        let merged = Partition::from_labels(&[0, 0, 1, 2]);
        let direct = h_partition(&g, &merged).unwrap() - h_partition(&g, &s).unwrap();
        assert!((md.delta_hp - direct).abs() < 1e-12);
        assert!(merge_delta(&g, &s, 1, 1).is_err());
        assert!(merge_delta(&g, &s, 0, 9).is_err());
    }

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::new(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn merge_split_examples() {
        let g = k4();
        let ms = merge_split_criterion(&g, &set(4, &[0, 1, 2, 3]), &set(4, &[0, 1]), &set(4, &[2, 3])).unwrap();
        assert_eq!((ms.lhs, ms.rhs), (0.0, 2.0));
        assert_eq!(ms.predicted, SplitEffect::Lowers);
        let c6 = cycle(6).unwrap();
        let ms =
            merge_split_criterion(&c6, &set(6, &[0, 1, 2, 3, 4, 5]), &set(6, &[0, 1, 2]), &set(6, &[3, 4, 5])).unwrap();
        assert_eq!((ms.lhs, ms.rhs), (0.0, 4.0));
        let c4 = cycle(4).unwrap();
        let ms = merge_split_criterion(&c4, &set(4, &[0, 1, 2, 3]), &set(4, &[0, 2]), &set(4, &[1, 3])).unwrap();
        assert_eq!(ms.predicted, SplitEffect::Tie);
        let split = h_partition(&c4, &Partition::from_labels(&[0, 1, 0, 1])).unwrap();
        assert!((split - h_partition(&c4, &Partition::trivial(4)).unwrap()).abs() < 1e-9);
        let path = crate::generators::path(4).unwrap();
        assert!(matches!(
            merge_split_criterion(&path, &set(4, &[0, 1]), &set(4, &[0]), &set(4, &[1])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            merge_split_criterion(&c4, &set(4, &[0, 1, 2]), &set(4, &[0]), &set(4, &[1])),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn resistance_modes() {
        let g = complete_graph(8).unwrap();
        let r = resistance(&g, &Mode::Exact).unwrap();
        assert!(r.resistance < std::f64::consts::E.log2());
        assert!(!r.method.is_bound());
        let c = resistance(&g, &Mode::Construction(Family::Complete)).unwrap();
        assert!(c.h2 >= r.h2 - 1e-12);
        let t = resistance(&g, &Mode::Construction(Family::Natural(Partition::trivial(8)))).unwrap();
        assert_eq!(t.resistance, 0.0);
        assert!(resistance(&g, &Mode::Construction(Family::Grid { side: 3 })).is_err());
    }
}
