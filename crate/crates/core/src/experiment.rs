//! Desk-scale reproduction runs, one row set per graph family, written as CSV.
//!
//! Every row carries the finite-n bound it is checked against; the formula
//! itself is available from [`ExperimentName::bound_formula`].

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{h1, h_partition, security_index};
use crate::error::{Error, Result};
use crate::generators::{self, natural_partition, security_model, spanning_tree_partition, SecurityModelParams};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::partition_search::{grid_block_side, resistance, tree_level_cut, Family, Mode};
use crate::spectral::{cheeger_check_partition, small_eigenvalue_census};

pub const CSV_HEADER: &str = "family,n,param,h1,h2,resistance,security_index,bound,bound_satisfied,seed";

/// Tolerance used when comparing a certified value with its bound.
pub const BOUND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    Tree,
    Grid,
    Complete,
    BoundedDegree,
    Security,
    Spectral,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::Tree,
        ExperimentName::Grid,
        ExperimentName::Complete,
        ExperimentName::BoundedDegree,
        ExperimentName::Security,
        ExperimentName::Spectral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Tree => "tree",
            ExperimentName::Grid => "grid",
            ExperimentName::Complete => "complete",
            ExperimentName::BoundedDegree => "bounded-degree",
            ExperimentName::Security => "security",
            ExperimentName::Spectral => "spectral",
        }
    }

    /// What a size means for this family.
    pub fn size_meaning(self) -> &'static str {
        match self {
            ExperimentName::Tree => "tree depth H",
            ExperimentName::Grid => "grid side",
            _ => "vertex count",
        }
    }

    /// The inequality in the `bound` column, in plain text.
    pub fn bound_formula(self) -> &'static str {
        match self {
            ExperimentName::Tree => "resistance >= log2(n) - log2(log2(n)) - 5",
            ExperimentName::Grid => {
                "resistance >= log2(s(s-1)) - 2 log2(k) - (log2(s) + 1)/k, side s, block side k = ceil(log2 s)"
            }
            ExperimentName::Complete => "resistance < log2(e)",
            ExperimentName::BoundedDegree => {
                "resistance >= (2/d)(1 - 1/l) ((vol - d log2 n)/vol) log2((vol - d log2 n)/(d log2 n)), \
                 spanning-tree partition, tolerance 1e-6"
            }
            ExperimentName::Security => {
                "resistance >= h1 - log2(max n_j) - (sum_j g_j / 2m) log2(2m), natural partition"
            }
            ExperimentName::Spectral => {
                "#{eigenvalues <= 2 max_phi} >= 0.9 L, natural partition of a security-model graph"
            }
        }
    }

    /// Random families run one row per trial; the others ignore `trials`.
    pub fn is_random(self) -> bool {
        matches!(
            self,
            ExperimentName::BoundedDegree | ExperimentName::Security | ExperimentName::Spectral
        )
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Security-model exponent.
    pub a: f64,
    /// Degree: 3 for bounded-degree graphs, 4 for the security model when unset.
    pub d: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(name: ExperimentName, sizes: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentSpec {
            name,
            sizes,
            trials,
            seed,
            a: 1.5,
            d: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.d.unwrap_or(match self.name {
            ExperimentName::BoundedDegree => 3,
            _ => 4,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::Input("sizes must be a non-empty list of positive integers".into()));
        }
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return Err(Error::Input(format!("a must be finite and non-negative, got {}", self.a)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub family: String,
    pub n: usize,
    pub param: String,
    pub h1: f64,
    pub h2: f64,
    pub resistance: f64,
    pub security_index: f64,
    pub bound: f64,
    pub bound_satisfied: bool,
    pub seed: u64,
}

impl Row {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.param,
            format_sig(self.h1),
            format_sig(self.h2),
            format_sig(self.resistance),
            format_sig(self.security_index),
            format_sig(self.bound),
            self.bound_satisfied,
            self.seed
        )
    }
}

/// Nine significant digits, fixed notation for moderate exponents, trailing
/// zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

/// Runs every (size, trial) job, on `workers` threads when given, and returns
/// rows sorted by `(n, seed, param)`.
pub fn run_experiment(spec: &ExperimentSpec, workers: Option<usize>) -> Result<Vec<Row>> {
    spec.validate()?;
    let trials = if spec.name.is_random() { spec.trials } else { 1 };
    let jobs: Vec<(usize, u64)> = spec
        .sizes
        .iter()
        .flat_map(|&s| (0..trials as u64).map(move |t| (s, spec.seed.wrapping_add(t))))
        .collect();
    let run = || jobs.par_iter().map(|&(s, seed)| run_one(spec, s, seed)).collect::<Result<Vec<Row>>>();
    let mut rows = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    rows.sort_by(|a, b| (a.n, a.seed, &a.param).cmp(&(b.n, b.seed, &b.param)));
    Ok(rows)
}

fn run_one(spec: &ExperimentSpec, size: usize, seed: u64) -> Result<Row> {
    let family = spec.name.as_str().to_string();
    match spec.name {
        ExperimentName::Tree => {
            let g = generators::complete_binary_tree(size)?;
            let r = resistance(&g, &Mode::Construction(Family::CompleteBinaryTree { depth: size }))?;
            let lg = (g.n() as f64).log2();
            let bound = lg - lg.log2() - 5.0;
            Ok(Row {
                family,
                n: g.n(),
                param: format!("H={size};k={}", tree_level_cut(size)),
                h1: r.h1,
                h2: r.h2,
                resistance: r.resistance,
                security_index: r.security_index,
                bound,
                bound_satisfied: r.resistance >= bound,
                seed,
            })
        }
        ExperimentName::Grid => {
            let g = generators::grid(size)?;
            let r = resistance(&g, &Mode::Construction(Family::Grid { side: size }))?;
            let k = grid_block_side(size);
            let (s, kf) = (size as f64, k as f64);
            let bound = (s * (s - 1.0)).log2() - 2.0 * kf.log2() - (s.log2() + 1.0) / kf;
            Ok(Row {
                family,
                n: g.n(),
                param: format!("side={size};k={k}"),
                h1: r.h1,
                h2: r.h2,
                resistance: r.resistance,
                security_index: r.security_index,
                bound,
                bound_satisfied: r.resistance >= bound,
                seed,
            })
        }
        ExperimentName::Complete => {
            let g = generators::complete_graph(size)?;
            let r = resistance(&g, &Mode::Construction(Family::Complete))?;
            let bound = std::f64::consts::LOG2_E;
            Ok(Row {
                family,
                n: size,
                param: format!("L={}", r.witness.len()),
                h1: r.h1,
                h2: r.h2,
                resistance: r.resistance,
                security_index: r.security_index,
                bound,
                bound_satisfied: r.resistance < bound,
                seed,
            })
        }
        ExperimentName::BoundedDegree => {
            let d = spec.degree();
            let g = generators::random_regular(size, d, seed)?;
            let cert = spanning_tree_partition(&g)?;
            Ok(Row {
                family,
                n: size,
                param: format!("d={d};l={}", cert.l),
                h1: cert.h1,
                h2: cert.hp,
                resistance: cert.resistance,
                security_index: security_index(cert.h1, cert.hp)?,
                bound: cert.penultimate,
                bound_satisfied: cert.satisfied(BOUND_TOL),
                seed,
            })
        }
        ExperimentName::Security => {
            let d = spec.degree();
            let (g, p) = security_instance(size, spec.a, d, seed)?;
            let (h, hn) = (h1(&g)?, h_partition(&g, &p)?);
            let bound = h - natural_entropy_cap(&g, &p);
            Ok(Row {
                family,
                n: size,
                param: format!("a={};d={d};L={}", spec.a, p.len()),
                h1: h,
                h2: hn,
                resistance: h - hn,
                security_index: security_index(h, hn)?,
                bound,
                bound_satisfied: h - hn >= bound - BOUND_TOL,
                seed,
            })
        }
        ExperimentName::Spectral => {
            let d = spec.degree();
            let (g, p) = security_instance(size, spec.a, d, seed)?;
            let (h, hn) = (h1(&g)?, h_partition(&g, &p)?);
            let check = cheeger_check_partition(&g, &p)?;
            let census = small_eigenvalue_census(&g, 2.0 * check.max_phi)?;
            let bound = 0.9 * p.len() as f64;
            Ok(Row {
                family,
                n: size,
                param: format!(
                    "L={};k={};max_phi={};census={census};cheeger={}",
                    p.len(),
                    check.k,
                    format_sig(check.max_phi),
                    if check.holds { "holds" } else { "fails" }
                ),
                h1: h,
                h2: hn,
                resistance: h - hn,
                security_index: security_index(h, hn)?,
                bound,
                bound_satisfied: census as f64 >= bound && check.holds,
                seed,
            })
        }
    }
}

fn security_instance(n: usize, a: f64, d: usize, seed: u64) -> Result<(Graph, Partition)> {
    let (g, trace) = security_model(&SecurityModelParams::new(n, a, d, seed))?;
    Ok((g, natural_partition(&trace)))
}

/// `log2(max n_j) + (Σ g_j / 2m) log2(2m)`, an upper bound on `H^P`: each
/// intra-module entropy is at most `log2 n_j`, and each `V_j ≥ 1`.
fn natural_entropy_cap(g: &Graph, p: &Partition) -> f64 {
    let vol = g.vol();
    let max_size = p.module_sizes().into_iter().max().unwrap_or(1) as f64;
    let boundary: f64 = p
        .modules()
        .iter()
        .map(|m| g.boundary_with(m, |x| p.module_of(x) == p.module_of(m[0])))
        .sum();
    max_size.log2() + boundary / vol * vol.log2()
}
