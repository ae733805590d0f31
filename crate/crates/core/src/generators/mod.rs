//! Graph families and their explicit partitions.

mod security;
mod spanning;

pub use security::{
    natural_partition, security_model, trace_statistics, GenerationTrace, SecurityModelParams, SecurityStatistics,
};
pub use spanning::{spanning_tree_partition, SpanningCertificate};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Restarts allowed in [`random_regular`] before giving up.
pub const REGULAR_RESTART_BUDGET: usize = 10_000;

/// Complete binary tree of depth `h` (`2^h - 1` vertices), heap numbering:
/// the children of `i` are `2i + 1` and `2i + 2`.
pub fn complete_binary_tree(h: usize) -> Result<Graph> {
    if !(2..=30).contains(&h) {
        return Err(Error::Input(format!("tree depth must be in 2..=30, got {h}")));
    }
    let n = (1usize << h) - 1;
    let edges = (1..n).map(|v| ((v - 1) / 2, v, 1.0)).collect();
    Ok(Graph::from_checked(n, edges))
}

/// Depth-cut partition of the complete binary tree of depth `h`: every subtree
/// rooted `k` levels above the leaves is a module (`2^(h-k)` modules of size
/// `2^k - 1`), and the remaining top `2^(h-k) - 1` vertices form one module.
pub fn tree_partition(h: usize, k: usize) -> Result<Partition> {
    if !(2..=30).contains(&h) || k < 1 || k >= h {
        return Err(Error::Input(format!("need 1 <= k <= h - 1 for depth {h}, got k = {k}")));
    }
    let n = (1usize << h) - 1;
    let cut_level = h - k;
    let labels: Vec<usize> = (0..n)
        .map(|v| {
            let level = (usize::BITS - 1 - (v + 1).leading_zeros()) as usize;
            if level < cut_level {
                0
            } else {
                // ancestor at `cut_level`, shifted past the top module's label
                1 + ((v + 1) >> (level - cut_level))
            }
        })
        .collect();
    Ok(Partition::from_labels(&labels))
}

/// `side × side` grid, vertex `(r, c)` numbered `r * side + c`.
pub fn grid(side: usize) -> Result<Graph> {
    if side < 2 {
        return Err(Error::Input(format!("grid side must be at least 2, got {side}")));
    }
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            let v = r * side + c;
            if c + 1 < side {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < side {
                edges.push((v, v + side, 1.0));
            }
        }
    }
    Ok(Graph::from_checked(side * side, edges))
}

/// Axis-aligned `k × k` blocks of the grid; the last row and column of blocks
/// are smaller when `k` does not divide `side`.
pub fn grid_partition(side: usize, k: usize) -> Result<Partition> {
    if side < 2 || k < 2 || k > side {
        return Err(Error::Input(format!("need 2 <= k <= side, got side = {side}, k = {k}")));
    }
    let per_row = side.div_ceil(k);
    let labels: Vec<usize> = (0..side * side)
        .map(|v| (v / side / k) * per_row + (v % side) / k)
        .collect();
    Ok(Partition::from_labels(&labels))
}

/// `K_n`.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Input(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, 1.0));
        }
    }
    Ok(Graph::from_checked(n, edges))
}

/// `L` contiguous modules whose sizes differ by at most one.
pub fn balanced_partition(n: usize, l: usize) -> Result<Partition> {
    if l == 0 || l > n {
        return Err(Error::Input(format!("need 1 <= L <= n, got L = {l}, n = {n}")));
    }
    let labels: Vec<usize> = (0..n).map(|v| v * l / n).collect();
    Ok(Partition::from_labels(&labels))
}

/// `C_n`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Input(format!("cycle needs n >= 3, got {n}")));
    }
    let edges = (0..n).map(|v| (v.min((v + 1) % n), v.max((v + 1) % n), 1.0)).collect();
    Ok(Graph::from_checked(n, edges))
}

/// `P_n` on `n` vertices.
pub fn path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Input(format!("path needs n >= 2, got {n}")));
    }
    Ok(Graph::from_checked(n, (1..n).map(|v| (v - 1, v, 1.0)).collect()))
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Result<Graph> {
    if leaves < 1 {
        return Err(Error::Input("star needs at least one leaf".into()));
    }
    Ok(Graph::from_checked(leaves + 1, (1..=leaves).map(|v| (0, v, 1.0)).collect()))
}

/// Random connected graph: a uniformly random recursive spanning tree plus
/// every other pair independently with probability `extra`. With `weighted`,
/// weights are drawn from `{1, 2, 3, 4}`.
pub fn random_connected(n: usize, extra: f64, weighted: bool, seed: u64) -> Result<Graph> {
    if n < 2 || !(0.0..=1.0).contains(&extra) {
        return Err(Error::Input(format!("need n >= 2 and extra in [0, 1], got n = {n}, extra = {extra}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen::<f64>() < extra {
                present.insert((u, v));
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = present.into_iter().collect();
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| (u, v, if weighted { rng.gen_range(1..=4) as f64 } else { 1.0 }))
        .collect();
    Ok(Graph::from_checked(n, edges))
}

/// Connected simple `d`-regular graph from the pairing model. Pairings with a
/// loop, a repeated pair or more than one component are discarded whole.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::Input(format!("need 1 <= d < n and n*d even, got n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n * d).map(|p| p / d).collect();
    let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
    'attempt: for _ in 0..REGULAR_RESTART_BUDGET {
        points.shuffle(&mut rng);
        seen.clear();
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v, 1.0));
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let g = Graph::from_checked(n, edges);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Retryable(format!(
        "no simple connected {d}-regular pairing on {n} vertices in {REGULAR_RESTART_BUDGET} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{h1, h_partition};

    #[test]
    fn binary_tree_shape() {
        let t = complete_binary_tree(2).unwrap();
        assert_eq!((t.n(), t.vol()), (3, 4.0));
        let t = complete_binary_tree(3).unwrap();
        assert_eq!((t.n(), t.vol()), (7, 12.0));
        let t = complete_binary_tree(10).unwrap();
        let count = |d: f64| t.degrees().iter().filter(|&&x| x == d).count();
        assert_eq!((t.n(), count(1.0), count(2.0), count(3.0)), (1023, 512, 1, 510));
        assert!(complete_binary_tree(1).is_err());
    }

    #[test]
    fn tree_partition_sizes() {
        let p = tree_partition(3, 1).unwrap();
        let mut sizes = p.module_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 1, 3]);
        for h in 3..=9 {
            for k in 1..h {
                let p = tree_partition(h, k).unwrap();
                assert_eq!(p.len(), (1 << (h - k)) + 1);
                assert_eq!(p.module_sizes()[0], (1 << (h - k)) - 1);
                assert!(p.module_sizes()[1..].iter().all(|&s| s == (1 << k) - 1));
            }
        }
        let g = complete_binary_tree(12).unwrap();
        let hp = h_partition(&g, &tree_partition(12, 3).unwrap()).unwrap();
        assert!(hp <= 8.0, "{hp}");
        assert!(tree_partition(3, 3).is_err());
        assert!(tree_partition(3, 0).is_err());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(grid(2).unwrap().regular_degree(), Some(2));
        assert_eq!(grid(3).unwrap().vol(), 24.0);
        assert_eq!(grid(10).unwrap().m(), 180);
        let p = grid_partition(4, 2).unwrap();
        assert_eq!(p.module_sizes(), vec![4, 4, 4, 4]);
        let g3 = grid(3).unwrap();
        let p3 = grid_partition(3, 3).unwrap();
        assert_eq!(p3, Partition::trivial(9));
        assert_eq!(h_partition(&g3, &p3).unwrap(), h1(&g3).unwrap());
        let p = grid_partition(64, 6).unwrap();
        assert_eq!(p.len(), 11 * 11);
        let g = grid(64).unwrap();
        let bound = 2.0 * 6f64.log2() + 7.0 / 6.0;
        assert!(h_partition(&g, &p).unwrap() <= bound);
    }

    #[test]
    fn small_families() {
        assert_eq!(complete_graph(4).unwrap().m(), 6);
        assert_eq!(cycle(6).unwrap().regular_degree(), Some(2));
        assert_eq!(path(2).unwrap().edges(), &[(0, 1, 1.0)]);
        assert_eq!(star(3).unwrap().degree(0).unwrap(), 3.0);
        assert!(cycle(2).is_err());
        assert_eq!(balanced_partition(7, 3).unwrap().module_sizes(), vec![3, 2, 2]);
    }

    #[test]
    fn random_connected_graphs() {
        for seed in 0..30 {
            let g = random_connected(12, 0.2, seed % 2 == 0, seed).unwrap();
            assert!(g.is_connected());
            assert!(g.m() >= 11);
        }
        assert_eq!(random_connected(9, 0.3, true, 4).unwrap(), random_connected(9, 0.3, true, 4).unwrap());
    }

    #[test]
    fn regular_graphs() {
        let k4 = random_regular(4, 3, 1).unwrap();
        assert_eq!(k4.m(), 6);
        for seed in 0..20 {
            let c = random_regular(6, 2, seed).unwrap();
            assert!(c.is_connected());
            assert_eq!(c.regular_degree(), Some(2));
        }
        let g = random_regular(64, 3, 9).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g, random_regular(64, 3, 9).unwrap());
        assert!(random_regular(5, 3, 0).is_err());
        assert!(matches!(random_regular(6, 1, 0), Err(Error::Retryable(_))));
    }
}
