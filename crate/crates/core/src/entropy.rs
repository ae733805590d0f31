//! One-dimensional entropy, partition entropy, resistance by a partition and
//! the security index.
//!
//! All logarithms are base 2. A term with zero weight contributes exactly zero,
//! so degenerate modules never produce NaN.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// One coding-tree term: `-(weight / vol_g) * log2(child / parent)`.
///
/// Partition entropy and coding-tree entropy both go through this helper so a
/// two-level tree and the partition it mirrors evaluate to the same float.
#[inline]
pub(crate) fn code_term(weight: f64, vol_g: f64, child: f64, parent: f64) -> f64 {
    if weight == 0.0 {
        0.0
    } else {
        -(weight / vol_g) * (child / parent).log2()
    }
}

/// `-p log2 p` with `0 log 0 = 0`.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Volume and boundary weight of one module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ModuleStats {
    pub volume: f64,
    pub boundary: f64,
}

pub(crate) fn module_stats(g: &Graph, p: &Partition) -> (Vec<Vec<usize>>, Vec<ModuleStats>) {
    let modules = p.modules();
    let stats = modules
        .iter()
        .enumerate()
        .map(|(j, members)| ModuleStats {
            volume: g.volume_of(members),
            boundary: g.boundary_with(members, |x| p.module_of(x) == j),
        })
        .collect();
    (modules, stats)
}

fn check_graph(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    let vol = g.vol();
    if vol <= 0.0 {
        return Err(Error::Domain("graph has zero volume".into()));
    }
    Ok(vol)
}

/// `H¹(G)`: Shannon entropy of the stationary distribution `d_i / vol(G)`.
pub fn h1(g: &Graph) -> Result<f64> {
    let vol = check_graph(g)?;
    Ok(g.degrees().iter().map(|&d| code_term(d, vol, d, vol)).sum())
}

/// `H^P(G)`: two-level entropy of `g` under partition `p`.
pub fn h_partition(g: &Graph, p: &Partition) -> Result<f64> {
    let vol = check_graph(g)?;
    p.check_size(g.n())?;
    let (modules, stats) = module_stats(g, p);
    let degrees = g.degrees();
    let mut total = 0.0;
    for (members, s) in modules.iter().zip(&stats) {
        total += code_term(s.boundary, vol, s.volume, vol);
        for &v in members {
            total += code_term(degrees[v], vol, degrees[v], s.volume);
        }
    }
    Ok(total)
}

/// `R^P(G) = -Σ_j ((V_j - g_j) / vol) log2(V_j / vol)`.
pub fn resistance_of_partition(g: &Graph, p: &Partition) -> Result<f64> {
    let vol = check_graph(g)?;
    p.check_size(g.n())?;
    let (_, stats) = module_stats(g, p);
    Ok(stats
        .iter()
        .map(|s| code_term(s.volume - s.boundary, vol, s.volume, vol))
        .sum())
}

/// Per-module row of [`decompose_partition_entropy`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleTerms {
    /// Degree entropy inside the module, `-Σ (d_i/V_j) log2(d_i/V_j)`.
    pub entropy: f64,
    /// `Φ(X_j)`; `None` when the module is all of `V`.
    pub conductance: Option<f64>,
    pub volume: f64,
    pub boundary: f64,
}

/// `H^P` split into its intra-module and boundary parts, plus the additivity
/// identity for `H¹` and the conductance form of the resistance.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub intra_term: f64,
    pub boundary_term: f64,
    pub modules: Vec<ModuleTerms>,
    /// `intra_term + Σ_j (V_j/vol) log2(vol/V_j)`, which equals `H¹`.
    pub h1_by_additivity: f64,
    /// Whether every module has `V_j ≤ vol/2`, the hypothesis of the conductance form.
    pub conductance_form_applies: bool,
    /// `-Σ_j (1 - Φ_j)(V_j/vol) log2(V_j/vol)`; equals `R^P` when the hypothesis holds.
    pub resistance_by_conductance: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.intra_term + self.boundary_term
    }
}

pub fn decompose_partition_entropy(g: &Graph, p: &Partition) -> Result<Decomposition> {
    let vol = check_graph(g)?;
    p.check_size(g.n())?;
    let (modules, stats) = module_stats(g, p);
    let degrees = g.degrees();
    let mut rows = Vec::with_capacity(modules.len());
    let (mut intra, mut boundary, mut additive, mut r_phi) = (0.0, 0.0, 0.0, 0.0);
    let mut applies = true;
    for (members, s) in modules.iter().zip(&stats) {
        let entropy: f64 = members.iter().map(|&v| plogp(degrees[v] / s.volume)).sum();
        let rest = vol - s.volume;
        let conductance = (members.len() < g.n() && rest > 0.0).then(|| s.boundary / s.volume.min(rest));
        intra += s.volume / vol * entropy;
        boundary += code_term(s.boundary, vol, s.volume, vol);
        additive += plogp(s.volume / vol);
        applies &= s.volume <= vol / 2.0;
        r_phi += (1.0 - conductance.unwrap_or(0.0)) * plogp(s.volume / vol);
        rows.push(ModuleTerms {
            entropy,
            conductance,
            volume: s.volume,
            boundary: s.boundary,
        });
    }
    Ok(Decomposition {
        intra_term: intra,
        boundary_term: boundary,
        modules: rows,
        h1_by_additivity: intra + additive,
        conductance_form_applies: applies,
        resistance_by_conductance: r_phi,
    })
}

/// `θ = (h1 - h2) / h1`.
pub fn security_index(h1: f64, h2: f64) -> Result<f64> {
    if !(h1 > 0.0) {
        return Err(Error::Domain(format!("security index needs h1 > 0, got {h1}")));
    }
    if h2 > h1 {
        return Err(Error::Input(format!("h2 = {h2} exceeds h1 = {h1}")));
    }
    Ok((h1 - h2) / h1)
}

/// How the two-dimensional entropy in a report was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive minimum over all partitions.
    Exact,
    /// Greedy agglomeration (upper bound on `H²`).
    Greedy,
    /// An explicit construction for a known family (upper bound on `H²`).
    Construction(String),
    /// A caller-supplied partition.
    Given,
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Exact => "exact".into(),
            Method::Greedy => "greedy".into(),
            Method::Construction(name) => format!("construction:{name}"),
            Method::Given => "given".into(),
        }
    }

    /// True when `h2` is only an upper bound (so the resistance is a lower bound).
    pub fn is_bound(&self) -> bool {
        !matches!(self, Method::Exact)
    }
}

/// `H¹`, `H²` (or an upper bound), resistance and security index with the
/// witnessing partition.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub n: usize,
    pub m: usize,
    pub h1: f64,
    pub h2: f64,
    pub resistance: f64,
    pub security_index: f64,
    pub method: Method,
    pub witness: Partition,
}

impl EntropyReport {
    /// Evaluates `p` on `g` and fills in the derived quantities.
    pub fn from_partition(g: &Graph, p: Partition, method: Method) -> Result<Self> {
        let h1 = h1(g)?;
        let h2 = h_partition(g, &p)?;
        Self::from_values(g, h1, h2, p, method)
    }

    pub(crate) fn from_values(g: &Graph, h1: f64, h2: f64, p: Partition, method: Method) -> Result<Self> {
        let security_index = security_index(h1, h2)?;
        Ok(EntropyReport {
            n: g.n(),
            m: g.m(),
            h1,
            h2,
            resistance: h1 - h2,
            security_index,
            method,
            witness: p,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for EntropyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EntropyReport", 8)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("h1", &self.h1)?;
        st.serialize_field("h2", &self.h2)?;
        st.serialize_field("resistance", &self.resistance)?;
        st.serialize_field("security_index", &self.security_index)?;
        st.serialize_field("method", &self.method.label())?;
        st.serialize_field("partition", &self.witness.modules())?;
        st.end()
    }
}

/// `θ(G) ≥ theta`, i.e. `G` is an `(n, θ)`-resistor graph.
pub fn is_resistor_graph(report: &EntropyReport, theta: f64) -> Result<bool> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Input(format!("theta must lie in (0, 1), got {theta}")));
    }
    Ok(report.security_index >= theta)
}

/// Result of [`h1_lower_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundCheck {
    pub bound: f64,
    /// Smallest `ε` with `W ≤ m^ε` (0 for unit weights).
    pub epsilon: f64,
    pub h1: f64,
    pub satisfied: bool,
}

/// `H¹ ≥ ((1-ε) log2 m - 1) / 2`, with `ε = 0` for balanced (unit) weights.
pub fn h1_lower_bound_check(g: &Graph) -> Result<LowerBoundCheck> {
    let h1 = h1(g)?;
    let m = g.m() as f64;
    let w = g.weight_ratio();
    let epsilon = if w <= 1.0 || m <= 1.0 { 0.0 } else { w.ln() / m.ln() };
    let bound = ((1.0 - epsilon) * m.log2() - 1.0) / 2.0;
    Ok(LowerBoundCheck {
        bound,
        epsilon,
        h1,
        satisfied: h1 >= bound - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn c6() -> Graph {
        Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap()
    }

    fn grid3() -> Graph {
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    e.push((v, v + 1));
                }
                if r < 2 {
                    e.push((v, v + 3));
                }
            }
        }
        Graph::unweighted(9, &e).unwrap()
    }

    fn binary_tree3() -> Graph {
        Graph::unweighted(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap()
    }

    /// Independent hand-form of the partition entropy: explicit probabilities.
    fn hp_oracle(g: &Graph, modules: &[Vec<usize>]) -> f64 {
        let vol = g.vol();
        let mut h = 0.0;
        for m in modules {
            let vj: f64 = m.iter().map(|&v| g.degrees()[v]).sum();
            let set = crate::graph::VertexSet::new(g.n(), m.iter().copied()).unwrap();
            let gj = g.boundary_weight(&set);
            for &v in m {
                let q = g.degrees()[v] / vj;
                h -= (vj / vol) * q * q.log2();
            }
            if gj > 0.0 {
                h -= gj / vol * (vj / vol).log2();
            }
        }
        h
    }

    #[test]
    fn h1_examples() {
        let k2 = Graph::unweighted(2, &[(0, 1)]).unwrap();
        assert_eq!(h1(&k2).unwrap(), 1.0);
        assert!((h1(&k4()).unwrap() - 2.0).abs() < 1e-12);
        // degrees (2, 3, 3, 1, 1, 1, 1), vol = 12
        let expect = -(2.0 / 12.0 * (2.0f64 / 12.0).log2())
            - 2.0 * (3.0 / 12.0 * (3.0f64 / 12.0).log2())
            - 4.0 * (1.0 / 12.0 * (1.0f64 / 12.0).log2());
        let got = h1(&binary_tree3()).unwrap();
        assert!((got - expect).abs() < 1e-12);
        assert!((got - 2.62581).abs() < 1e-4);
        let empty = Graph::unweighted(0, &[]).unwrap();
        assert!(h1(&empty).is_err());
    }

    #[test]
    fn partition_entropy_examples() {
        let g = k4();
        let h = h1(&g).unwrap();
        assert_eq!(h_partition(&g, &Partition::trivial(4)).unwrap(), h);
        assert!((h_partition(&g, &Partition::singletons(4)).unwrap() - h).abs() < 1e-12);
        let halves = Partition::from_labels(&[0, 0, 1, 1]);
        let hp = h_partition(&g, &halves).unwrap();
        assert!((hp - 5.0 / 3.0).abs() < 1e-12);
        assert!((hp - hp_oracle(&g, &halves.modules())).abs() < 1e-12);
        assert!(h_partition(&g, &Partition::trivial(3)).is_err());
    }

    #[test]
    fn resistance_examples() {
        let g = k4();
        assert_eq!(resistance_of_partition(&g, &Partition::trivial(4)).unwrap(), 0.0);
        assert_eq!(resistance_of_partition(&g, &Partition::singletons(4)).unwrap(), 0.0);
        let r = resistance_of_partition(&g, &Partition::from_labels(&[0, 0, 1, 1])).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_examples() {
        let g = c6();
        let h = h1(&g).unwrap();
        let trivial = decompose_partition_entropy(&g, &Partition::trivial(6)).unwrap();
        assert!((trivial.intra_term - h).abs() < 1e-12);
        assert_eq!(trivial.boundary_term, 0.0);
        assert_eq!(trivial.modules.len(), 1);
        assert_eq!(trivial.modules[0].conductance, None);

        let single = decompose_partition_entropy(&g, &Partition::singletons(6)).unwrap();
        assert!(single.intra_term.abs() < 1e-12);
        assert!((single.boundary_term - h).abs() < 1e-12);
        assert!(single.modules.iter().all(|m| m.entropy == 0.0));

        let arcs = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        let d = decompose_partition_entropy(&g, &arcs).unwrap();
        assert!((d.intra_term - 3f64.log2()).abs() < 1e-12);
        assert!((d.boundary_term - 1.0 / 3.0).abs() < 1e-12);
        assert!((d.total() - 1.91829).abs() < 1e-4);
        assert!((d.total() - h_partition(&g, &arcs).unwrap()).abs() < 1e-12);
        assert!((d.h1_by_additivity - h).abs() < 1e-12);
        assert!(d.conductance_form_applies);
        let r = resistance_of_partition(&g, &arcs).unwrap();
        assert!((d.resistance_by_conductance - r).abs() < 1e-12);
    }

    #[test]
    fn security_index_examples() {
        assert_eq!(security_index(3.0, 3.0).unwrap(), 0.0);
        assert_eq!(security_index(10.0, 5.0).unwrap(), 0.5);
        let (a, b) = (7.3, 2.9);
        assert!((security_index(a, b).unwrap() - (1.0 - b / a)).abs() < 1e-12);
        assert!(matches!(security_index(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(security_index(1.0, 2.0), Err(Error::Input(_))));
    }

    #[test]
    fn resistor_graph_threshold() {
        let g = k4();
        let mut r = EntropyReport::from_partition(&g, Partition::trivial(4), Method::Given).unwrap();
        r.security_index = 0.8;
        assert!(is_resistor_graph(&r, 0.5).unwrap());
        assert!(is_resistor_graph(&r, 0.8).unwrap());
        r.security_index = 0.1;
        assert!(!is_resistor_graph(&r, 0.5).unwrap());
        assert!(is_resistor_graph(&r, 1.0).is_err());
        assert!(is_resistor_graph(&r, 0.0).is_err());
    }

    #[test]
    fn h1_lower_bounds() {
        let c = h1_lower_bound_check(&k4()).unwrap();
        assert!((c.bound - (6f64.log2() - 1.0) / 2.0).abs() < 1e-12);
        assert!((c.bound - 0.7925).abs() < 1e-4);
        assert!(c.satisfied);
        let k2 = Graph::unweighted(2, &[(0, 1)]).unwrap();
        let c = h1_lower_bound_check(&k2).unwrap();
        assert_eq!(c.bound, -0.5);
        assert!(c.satisfied);
        let c = h1_lower_bound_check(&grid3()).unwrap();
        assert!((c.bound - 1.2925).abs() < 1e-4);
        assert!((c.h1 - 3.1258).abs() < 1e-4);
        assert!(c.satisfied);
        let weighted = Graph::new(3, [(0, 1, 1.0), (1, 2, 4.0), (0, 2, 2.0)]).unwrap();
        let c = h1_lower_bound_check(&weighted).unwrap();
        assert!((3f64.powf(c.epsilon) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn report_json_has_exact_fields() {
        let g = k4();
        let r = EntropyReport::from_partition(&g, Partition::from_labels(&[0, 0, 1, 1]), Method::Exact).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["h1", "h2", "m", "method", "n", "partition", "resistance", "security_index"]
        );
        assert_eq!(v["partition"], serde_json::json!([[0, 1], [2, 3]]));
        assert_eq!(v["method"], "exact");
    }
}
