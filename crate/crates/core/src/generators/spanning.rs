use std::collections::VecDeque;

use crate::entropy::{h1, h_partition, plogp};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Partition cut from a spanning tree, with the chain of lower bounds on
/// `H¹ - H^P` that it certifies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningCertificate {
    pub partition: Partition,
    /// Maximum degree `d`.
    pub d: usize,
    /// Ancestor distance `l = max(1, ⌊log_d log2 n⌋ - 1)`.
    pub l: usize,
    /// Module sizes in cut order; the last entry holds the root.
    pub cut_sizes: Vec<usize>,
    pub h1: f64,
    pub hp: f64,
    /// Certified `R ≥ H¹ - H^P`.
    pub resistance: f64,
    /// `-Σ (1 - Φ(V_j)) (V_j/vol) log2(V_j/vol)`; equal to `resistance` when
    /// every module holds at most half the volume.
    pub conductance_form: f64,
    /// `-Σ_j (2/d - 2/(d|V_j|)) (V_j/vol) log2(V_j/vol)`.
    pub size_form: f64,
    /// Same sum over all but the last module with the factor `2/d - 2/(dl)`.
    pub truncated_form: f64,
    /// `(2/d)(1 - 1/l) ((vol - vol V_L)/vol) · H(V_j / (vol - vol V_L))`.
    pub entropy_form: f64,
    /// Entropy factor replaced by `log2((vol - vol V_L) / (d log2 n))`.
    pub volume_form: f64,
    /// `(2/d)(1 - 1/l) ((vol - d log2 n)/vol) log2((vol - d log2 n)/(d log2 n))`.
    pub penultimate: f64,
    /// Leading term `(2/d) log2 n`.
    pub asymptotic: f64,
}

impl SpanningCertificate {
    /// True when the certified resistance meets the penultimate bound.
    pub fn satisfied(&self, tol: f64) -> bool {
        self.resistance >= self.penultimate - tol
    }

    /// `l = 1` zeroes every bound after the size form.
    pub fn is_degenerate(&self) -> bool {
        self.l <= 1
    }
}

/// Ancestor distance used by the spanning-tree partition.
pub fn ancestor_distance(n: usize, d: usize) -> usize {
    let lg = (n as f64).log2();
    if lg <= 1.0 || d < 2 {
        return 1;
    }
    let x = (lg.ln() / (d as f64).ln() + 1e-12).floor() as i64 - 1;
    x.max(1) as usize
}

/// Breadth-first spanning tree from vertex 0; repeatedly takes the deepest
/// remaining vertex (least id on ties), climbs `l` ancestors without passing the
/// root, and cuts the remaining subtree there as a module.
pub fn spanning_tree_partition(g: &Graph) -> Result<SpanningCertificate> {
    g.require_connected()?;
    let n = g.n();
    let d = g.max_neighbor_count();
    if d < 2 {
        return Err(Error::Domain("spanning-tree partition needs maximum degree at least 2".into()));
    }
    let l = ancestor_distance(n, d);

    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue = VecDeque::from([0usize]);
    parent[0] = 0;
    while let Some(u) = queue.pop_front() {
        for (x, _) in g.neighbors(u) {
            if parent[x] == usize::MAX {
                parent[x] = u;
                depth[x] = depth[u] + 1;
                children[u].push(x);
                queue.push_back(x);
            }
        }
    }
    let mut by_depth: Vec<usize> = (0..n).collect();
    by_depth.sort_by(|&a, &b| depth[b].cmp(&depth[a]).then(a.cmp(&b)));

    let mut removed = vec![false; n];
    let mut labels = vec![0usize; n];
    let mut cut_sizes = Vec::new();
    let mut stack = Vec::new();
    for &v in &by_depth {
        if removed[v] {
            continue;
        }
        let mut top = v;
        for _ in 0..l {
            if top == 0 {
                break;
            }
            top = parent[top];
        }
        let label = cut_sizes.len();
        let mut size = 0;
        stack.push(top);
        while let Some(u) = stack.pop() {
            removed[u] = true;
            labels[u] = label;
            size += 1;
            stack.extend(children[u].iter().copied().filter(|&c| !removed[c]));
        }
        cut_sizes.push(size);
    }
    let partition = Partition::from_labels(&labels);

    let vol = g.vol();
    let h = h1(g)?;
    let hp = h_partition(g, &partition)?;
    let df = d as f64;
    let lf = l as f64;
    let lg = (n as f64).log2();
    let mut modules: Vec<Vec<usize>> = vec![Vec::new(); cut_sizes.len()];
    for (v, &lab) in labels.iter().enumerate() {
        modules[lab].push(v);
    }
    let mut conductance_form = 0.0;
    let mut size_form = 0.0;
    let mut truncated_form = 0.0;
    let last = modules.len() - 1;
    let vol_last = g.volume_of(&modules[last]);
    let rest = vol - vol_last;
    let mut entropy_rest = 0.0;
    for (j, m) in modules.iter().enumerate() {
        let vj = g.volume_of(m);
        let term = plogp(vj / vol);
        if vj < vol {
            let mask: Vec<bool> = (0..n).map(|v| labels[v] == j).collect();
            let cut = g.boundary_with(m, |x| mask[x]);
            let phi = cut / vj.min(vol - vj);
            conductance_form += (1.0 - phi) * term;
        }
        size_form += (2.0 / df - 2.0 / (df * m.len() as f64)) * term;
        if j != last {
            truncated_form += (2.0 / df - 2.0 / (df * lf)) * term;
            entropy_rest += plogp(vj / rest);
        }
    }
    let factor = 2.0 / df * (1.0 - 1.0 / lf);
    let entropy_form = factor * rest / vol * entropy_rest;
    let volume_form = if factor == 0.0 || rest <= 0.0 {
        0.0
    } else {
        factor * rest / vol * (rest / (df * lg)).log2()
    };
    let cap = df * lg;
    let penultimate = if factor == 0.0 {
        0.0
    } else if vol > cap {
        factor * (vol - cap) / vol * ((vol - cap) / cap).log2()
    } else {
        f64::NEG_INFINITY
    };
    Ok(SpanningCertificate {
        partition,
        d,
        l,
        cut_sizes,
        h1: h,
        hp,
        resistance: h - hp,
        conductance_form,
        size_form,
        truncated_form,
        entropy_form,
        volume_form,
        penultimate,
        asymptotic: 2.0 / df * lg,
    })
}
