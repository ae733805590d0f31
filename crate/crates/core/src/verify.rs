//! Invariant suites run by `sentropy verify`. Each suite counts cases and
//! failures; the first few failures are kept as messages.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coding_tree::{h_k_exact, h_tree_with, CodingTree, ModuleFunction};
use crate::entropy::{decompose_partition_entropy, h1, h_partition, resistance_of_partition};
use crate::error::{Error, Result};
use crate::generators::{self, natural_partition, security_model, spanning_tree_partition, SecurityModelParams};
use crate::graph::{Graph, VertexSet};
use crate::partition::Partition;
use crate::partition_search::{exact_h2, greedy_h2, merge_split_criterion, SplitEffect};
use crate::spectral::{cheeger_check_partition, laplacian_spectrum, SPECTRAL_TOL};

pub const SUITES: [&str; 7] = [
    "resistance-law",
    "exact-oracle",
    "merge-split",
    "cheeger",
    "volume-invariance",
    "spanning-certificate",
    "spectral-invariants",
];

const KEPT_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub messages: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            cases: 0,
            failures: 0,
            messages: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < KEPT_FAILURES {
                self.messages.push(message());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: {}/{} cases",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases - self.failures,
            self.cases
        )
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run(suite: &str, seed: u64) -> Result<Vec<SuiteResult>> {
    if suite == "all" {
        return SUITES.iter().map(|s| run_suite(s, seed)).collect();
    }
    Ok(vec![run_suite(suite, seed)?])
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteResult> {
    match name {
        "resistance-law" => resistance_law(seed),
        "exact-oracle" => exact_oracle(seed),
        "merge-split" => merge_split(seed),
        "cheeger" => cheeger(seed),
        "volume-invariance" => volume_invariance(seed),
        "spanning-certificate" => spanning_certificate(seed),
        "spectral-invariants" => spectral_invariants(seed),
        other => Err(Error::Input(format!(
            "unknown suite `{other}`; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

/// Uniform labels in `0..L` with `L` drawn from `1..=max_modules`.
pub fn random_partition<R: Rng + ?Sized>(n: usize, max_modules: usize, rng: &mut R) -> Partition {
    let l = rng.gen_range(1..=max_modules.clamp(1, n));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..l)).collect();
    Partition::from_labels(&labels)
}

fn resistance_law(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("resistance-law");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..200u64 {
        let n = rng.gen_range(2..=50);
        let g = generators::random_connected(n, rng.gen_range(0.0..0.3), i % 2 == 1, seed.wrapping_add(i))?;
        let p = random_partition(n, 10, &mut rng);
        let (h, hp, r) = (h1(&g)?, h_partition(&g, &p)?, resistance_of_partition(&g, &p)?);
        let dec = decompose_partition_entropy(&g, &p)?;
        let mut ok = ((h - hp) - r).abs() < 1e-9 && (dec.h1_by_additivity - h).abs() < 1e-9;
        if dec.conductance_form_applies {
            ok &= (dec.resistance_by_conductance - r).abs() < 1e-9;
        }
        out.record(ok, || format!("case {i}: h1 - hP = {}, R = {r}", h - hp));
    }
    Ok(out)
}

fn exact_oracle(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("exact-oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..60u64 {
        let n = rng.gen_range(2..=7);
        let g = generators::random_connected(n, rng.gen_range(0.0..0.6), i % 3 == 0, seed.wrapping_add(i))?;
        let (v, p) = exact_h2(&g)?;
        let (t, tree) = h_k_exact(&g, 2)?;
        let (gv, _) = greedy_h2(&g)?;
        let ok = v.to_bits() == t.to_bits() && tree == CodingTree::from_partition(&p) && gv >= v - 1e-9;
        out.record(ok, || format!("case {i}: exact {v}, tree {t}, greedy {gv}"));
    }
    Ok(out)
}

fn merge_split(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("merge-split");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50u64 {
        let (n, d) = loop {
            let n = rng.gen_range(10..=40);
            let d = rng.gen_range(2..=4);
            if (n * d) % 2 == 0 {
                break (n, d);
            }
        };
        let g = generators::random_regular(n, d, seed.wrapping_add(i))?;
        for j in 0..20 {
            let (before, after, x1, y1, y2) = random_split(n, &mut rng);
            let crit = merge_split_criterion(&g, &x1, &y1, &y2)?;
            let diff = h_partition(&g, &after)? - h_partition(&g, &before)?;
            out.record(split_agrees(diff, crit.predicted), || {
                format!("graph {i} split {j}: diff {diff}, lhs {}, rhs {}", crit.lhs, crit.rhs)
            });
        }
    }
    Ok(out)
}

/// The direct difference and the criterion point the same way; `1e-9` is a tie.
pub fn split_agrees(diff: f64, predicted: SplitEffect) -> bool {
    let direct = if diff.abs() < 1e-9 {
        SplitEffect::Tie
    } else if diff > 0.0 {
        SplitEffect::Raises
    } else {
        SplitEffect::Lowers
    };
    direct == predicted
}

/// A random partition with a module of at least two vertices, and that module
/// split in two at random: `(before, after, X₁, Y₁, Y₂)`.
pub fn random_split<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> (Partition, Partition, VertexSet, VertexSet, VertexSet) {
    loop {
        let before = random_partition(n, 6, rng);
        let modules = before.modules();
        let big: Vec<usize> = (0..modules.len()).filter(|&j| modules[j].len() >= 2).collect();
        let Some(&j) = big.choose(rng) else { continue };
        let mut x = modules[j].clone();
        x.shuffle(rng);
        let cut = rng.gen_range(1..x.len());
        let (y1, y2) = x.split_at(cut);
        let mut labels = before.assignment().to_vec();
        for &v in y2 {
            labels[v] = modules.len();
        }
        let set = |s: &[usize]| VertexSet::new(n, s.iter().copied()).expect("in range");
        return (before, Partition::from_labels(&labels), set(&x), set(y1), set(y2));
    }
}

/// (graph, partition) pairs from the tree, grid, complete and security-model
/// families plus random regular graphs with their spanning-tree partitions.
pub fn cheeger_pairs(seed: u64) -> Result<Vec<(String, Graph, Partition)>> {
    let mut pairs = Vec::new();
    for h in 4..=9 {
        let g = generators::complete_binary_tree(h)?;
        for k in 1..h {
            pairs.push((format!("tree H={h} k={k}"), g.clone(), generators::tree_partition(h, k)?));
        }
    }
    for side in 3..=16 {
        let g = generators::grid(side)?;
        for k in [2, 3, 4].into_iter().filter(|&k| k < side) {
            pairs.push((format!("grid {side} k={k}"), g.clone(), generators::grid_partition(side, k)?));
        }
    }
    for n in 4..=12 {
        let g = generators::complete_graph(n)?;
        for l in 2..=3 {
            pairs.push((format!("K{n} L={l}"), g.clone(), generators::balanced_partition(n, l)?));
        }
    }
    for t in 0..3u64 {
        let (g, trace) = security_model(&SecurityModelParams::new(500, 1.5, 4, seed.wrapping_add(t)))?;
        pairs.push((format!("security n=500 seed={}", seed.wrapping_add(t)), g, natural_partition(&trace)));
    }
    for t in 0..3u64 {
        let g = generators::random_regular(64, 3, seed.wrapping_add(t))?;
        let p = spanning_tree_partition(&g)?.partition;
        pairs.push((format!("3-regular n=64 seed={}", seed.wrapping_add(t)), g, p));
    }
    Ok(pairs)
}

fn cheeger(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("cheeger");
    for (name, g, p) in cheeger_pairs(seed)? {
        if p.len() < 2 {
            continue;
        }
        let check = cheeger_check_partition(&g, &p)?;
        out.record(check.holds, || format!("{name}: k = {}, max_phi = {}", check.k, check.max_phi));
    }
    Ok(out)
}

fn volume_invariance(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("volume-invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..20u64 {
        let n = rng.gen_range(2..=40);
        let g = generators::random_connected(n, 0.15, i % 2 == 0, seed.wrapping_add(i))?;
        let h = h1(&g)?;
        for _ in 0..100 {
            let t = CodingTree::random_binary(n, &mut rng);
            let v = h_tree_with(&g, &t, &ModuleFunction::Volume)?;
            out.record((v - h).abs() < 1e-9, || format!("graph {i}: volume-coded {v} vs h1 {h}"));
        }
    }
    Ok(out)
}

fn spanning_certificate(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("spanning-certificate");
    for (i, n) in [64usize, 128, 256].into_iter().enumerate() {
        for d in [3usize, 4] {
            let s = seed.wrapping_add(i as u64);
            let cert = spanning_tree_partition(&generators::random_regular(n, d, s)?)?;
            let ok = cert.satisfied(1e-6) && (cert.resistance - (cert.h1 - cert.hp)).abs() < 1e-9;
            out.record(ok, || format!("n={n} d={d}: R = {}, bound = {}", cert.resistance, cert.penultimate));
        }
    }
    Ok(out)
}

fn spectral_invariants(seed: u64) -> Result<SuiteResult> {
    let mut out = SuiteResult::new("spectral-invariants");
    for (name, g, _) in cheeger_pairs(seed)? {
        if g.n() > 600 {
            continue;
        }
        let s = laplacian_spectrum(&g)?;
        let residual_ok = s.residual.map_or(true, |r| r <= 1e-6);
        out.record(s.laplacian_invariants_hold(SPECTRAL_TOL) && residual_ok, || {
            format!("{name}: trace {} for n = {}", s.sum(), g.n())
        });
    }
    Ok(out)
}
