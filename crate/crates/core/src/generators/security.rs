//! Growth model with colors: each new vertex either seeds a new color or joins
//! a uniformly chosen old one and attaches preferentially inside it.
//!
//! Logarithms in this module are natural logarithms.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityModelParams {
    /// Final vertex count.
    pub n: usize,
    /// Homophyly exponent `a ≥ 0`.
    pub a: f64,
    /// Edges per new vertex, at least 2.
    pub d: usize,
    /// Size of the complete seed graph, at least 2.
    pub n0: usize,
    pub seed: u64,
}

impl SecurityModelParams {
    /// Seed graph of size `d + 1`.
    pub fn new(n: usize, a: f64, d: usize, seed: u64) -> Self {
        SecurityModelParams { n, a, d, n0: d + 1, seed }
    }

    /// `p_i = min(1, (ln i)^-a)`.
    pub fn seed_probability(&self, i: usize) -> f64 {
        let l = (i as f64).ln();
        if l <= 1.0 {
            1.0
        } else {
            l.powf(-self.a).min(1.0)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return Err(Error::Input(format!("homophyly exponent must be finite and >= 0, got {}", self.a)));
        }
        if self.d < 2 {
            return Err(Error::Input(format!("d must be at least 2, got {}", self.d)));
        }
        if self.n0 < 2 {
            return Err(Error::Input(format!("n0 must be at least 2, got {}", self.n0)));
        }
        if self.n <= self.n0 {
            return Err(Error::Input(format!("need n > n0, got n = {}, n0 = {}", self.n, self.n0)));
        }
        Ok(())
    }
}

/// Record of one run of [`security_model`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub params: SecurityModelParams,
    /// Color of every vertex; color `c` is the `c`-th seed created.
    pub colors: Vec<usize>,
    pub seed_flags: Vec<bool>,
    /// Step (1-based vertex count) at which each color's seed appeared.
    pub seed_birth: Vec<usize>,
    /// `(t, |C_t|)` at checkpoints, ending with `t = n`.
    pub seed_counts: Vec<(usize, usize)>,
    /// Edges leaving each color class (`g_S`).
    pub global_edge_counts: Vec<usize>,
    pub community_sizes: Vec<usize>,
    pub local_edges: usize,
    pub global_edges: usize,
    /// Edges that could not be placed because too few distinct targets existed.
    pub shortfall: usize,
}

impl GenerationTrace {
    pub fn color_count(&self) -> usize {
        self.seed_birth.len()
    }
}

/// Runs the model. Deterministic given `params.seed`.
///
/// Seed step: one edge to a vertex drawn proportionally to degree, plus `d - 1`
/// edges to distinct seeds drawn uniformly (excluding that vertex). Non-seed
/// step: a uniformly random existing color, then `d` distinct members of it
/// drawn proportionally to degree without replacement (all members when the
/// class is smaller). The seed graph is complete on `n0` vertices, each its own
/// color.
pub fn security_model(params: &SecurityModelParams) -> Result<(Graph, GenerationTrace)> {
    params.validate()?;
    let SecurityModelParams { n, d, n0, .. } = *params;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * d);
    let mut degree = vec![0usize; n];
    // every edge contributes both endpoints; a uniform pick is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * d);
    let mut colors = Vec::with_capacity(n);
    let mut seed_flags = Vec::with_capacity(n);
    let mut seeds: Vec<usize> = Vec::new();
    let mut seed_birth = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut shortfall = 0usize;
    let mut seed_counts = Vec::new();
    let checkpoint = (n / 64).max(1);

    let add_edge = |u: usize, v: usize, edges: &mut Vec<_>, degree: &mut Vec<usize>, endpoints: &mut Vec<usize>| {
        edges.push((u.min(v), u.max(v), 1.0));
        degree[u] += 1;
        degree[v] += 1;
        endpoints.push(u);
        endpoints.push(v);
    };

    for v in 0..n0 {
        colors.push(v);
        seed_flags.push(true);
        seeds.push(v);
        seed_birth.push(v + 1);
        members.push(vec![v]);
        for u in 0..v {
            add_edge(u, v, &mut edges, &mut degree, &mut endpoints);
        }
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    for v in n0..n {
        let step = v + 1;
        chosen.clear();
        if rng.gen::<f64>() < params.seed_probability(step) {
            let color = seeds.len();
            let target = endpoints[rng.gen_range(0..endpoints.len())];
            chosen.push(target);
            // the target is a seed iff it is its color's first vertex
            let skip = (seeds[colors[target]] == target).then_some(colors[target]);
            let pool = seeds.len() - usize::from(skip.is_some());
            let want = d - 1;
            let take = want.min(pool);
            shortfall += want - take;
            for i in index::sample(&mut rng, pool, take) {
                let i = match skip {
                    Some(s) if i >= s => i + 1,
                    _ => i,
                };
                chosen.push(seeds[i]);
            }
            colors.push(color);
            seed_flags.push(true);
            seeds.push(v);
            seed_birth.push(step);
            members.push(vec![v]);
        } else {
            let color = rng.gen_range(0..seeds.len());
            let class = &members[color];
            let take = d.min(class.len());
            shortfall += d - take;
            let mut pool: Vec<(usize, usize)> = class.iter().map(|&u| (u, degree[u])).collect();
            let mut total: usize = pool.iter().map(|p| p.1).sum();
            for _ in 0..take {
                let mut r = rng.gen_range(0..total);
                let pos = pool
                    .iter()
                    .position(|&(_, w)| {
                        if r < w {
                            true
                        } else {
                            r -= w;
                            false
                        }
                    })
                    .expect("weights sum to total");
                let (u, w) = pool.swap_remove(pos);
                total -= w;
                chosen.push(u);
            }
            colors.push(color);
            seed_flags.push(false);
            members[color].push(v);
        }
        for i in 0..chosen.len() {
            add_edge(chosen[i], v, &mut edges, &mut degree, &mut endpoints);
        }
        if step % checkpoint == 0 || step == n {
            seed_counts.push((step, seeds.len()));
        }
    }

    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut global_edge_counts = vec![0usize; seeds.len()];
    let mut local_edges = 0;
    for &(u, v, _) in &edges {
        if colors[u] == colors[v] {
            local_edges += 1;
        } else {
            global_edge_counts[colors[u]] += 1;
            global_edge_counts[colors[v]] += 1;
        }
    }
    let global_edges = edges.len() - local_edges;
    let community_sizes = members.iter().map(Vec::len).collect();
    let g = Graph::from_checked(n, edges);
    let trace = GenerationTrace {
        params: *params,
        colors,
        seed_flags,
        seed_birth,
        seed_counts,
        global_edge_counts,
        community_sizes,
        local_edges,
        global_edges,
        shortfall,
    };
    Ok((g, trace))
}

/// Color classes as a partition.
pub fn natural_partition(trace: &GenerationTrace) -> Partition {
    Partition::from_labels(&trace.colors)
}

/// Measured statistics of a generated graph next to the model's predictions.
/// The expectation bounds are reported, never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityStatistics {
    pub n: usize,
    pub colors: usize,
    /// `n / (2 ln^a n)` and `2n / ln^a n`.
    pub color_bounds: (f64, f64),
    pub colors_within_bounds: bool,
    pub max_community: usize,
    /// `4 ln^{a+1} n`.
    pub max_community_bound: f64,
    pub max_community_within_bound: bool,
    /// `T1 = ln^{a+1} n`.
    pub t1: f64,
    /// Communities whose seed appeared at or after `T1`.
    pub late_communities: usize,
    /// Mean of `size / (ln^{a+1} n - ln^{a+1} t_S)` over late communities born
    /// strictly before step `n`.
    pub mean_size_ratio: Option<f64>,
    pub b: f64,
    /// `T2 = n / ln^b n`.
    pub t2: f64,
    pub communities_after_t2: usize,
    /// Mean `g_S` over communities born at or after `T2`.
    pub mean_global_edges_after_t2: Option<f64>,
    /// Expectation bound on `g_S` for the branch of `a`; `None` for `a = 0`.
    pub global_edge_bound: Option<f64>,
    pub local_edges: usize,
    pub global_edges: usize,
    pub shortfall: usize,
}

/// Summarises a trace: seed-count and community-size bounds, size growth
/// against `ln^{a+1} t - ln^{a+1} t_S`, and global edges per late community.
pub fn trace_statistics(trace: &GenerationTrace, g: &Graph, b: f64) -> Result<SecurityStatistics> {
    if g.n() != trace.colors.len() {
        return Err(Error::Input("trace and graph sizes differ".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Input(format!("b must be positive, got {b}")));
    }
    let n = g.n();
    let a = trace.params.a;
    let ln = (n as f64).ln();
    let lna = ln.powf(a);
    let colors = trace.color_count();
    let color_bounds = (n as f64 / (2.0 * lna), 2.0 * n as f64 / lna);
    let max_community = trace.community_sizes.iter().copied().max().unwrap_or(0);
    let max_community_bound = 4.0 * ln.powf(a + 1.0);
    let t1 = ln.powf(a + 1.0);
    let mut late = 0;
    let mut ratios = Vec::new();
    for (c, &birth) in trace.seed_birth.iter().enumerate() {
        if (birth as f64) >= t1 {
            late += 1;
            let predicted = ln.powf(a + 1.0) - (birth as f64).ln().powf(a + 1.0);
            if birth < n && predicted > 0.0 {
                ratios.push(trace.community_sizes[c] as f64 / predicted);
            }
        }
    }
    let t2 = n as f64 / ln.powf(b);
    let after: Vec<usize> = (0..colors)
        .filter(|&c| trace.seed_birth[c] as f64 >= t2)
        .map(|c| trace.global_edge_counts[c])
        .collect();
    let lnln = ln.ln();
    let global_edge_bound = if a > 1.0 {
        Some(2.5 * (a + 1.0) * b * b * lnln * lnln)
    } else if a == 1.0 {
        Some(8.0 * b * b * lnln * lnln)
    } else if a > 0.0 {
        Some(5.0 * b * b * lnln * lnln)
    } else {
        None
    };
    let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let after_f: Vec<f64> = after.iter().map(|&x| x as f64).collect();
    Ok(SecurityStatistics {
        n,
        colors,
        color_bounds,
        colors_within_bounds: (colors as f64) >= color_bounds.0 && (colors as f64) <= color_bounds.1,
        max_community,
        max_community_bound,
        max_community_within_bound: (max_community as f64) <= max_community_bound,
        t1,
        late_communities: late,
        mean_size_ratio: mean(&ratios),
        b,
        t2,
        communities_after_t2: after.len(),
        mean_global_edges_after_t2: mean(&after_f),
        global_edge_bound,
        local_edges: trace.local_edges,
        global_edges: trace.global_edges,
        shortfall: trace.shortfall,
    })
}
