//! Normalized Laplacian spectra, k-way conductance certificates and the
//! constant-free Cheeger direction `λ_k / 2 ≤ φ(k)`.
//!
//! Small matrices use a cyclic Jacobi solver. Larger dense problems go through
//! a Householder/QR solver, and large sparse graphs are handled by counting
//! eigenvalues below a shift with a sparse `LDLᵀ` factorization (Sylvester's
//! law of inertia), which needs no eigenvalues at all.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::partition::Partition;

/// Largest matrix accepted by [`eigenvalues`].
pub const DENSE_LIMIT: usize = 4096;
/// Up to this size [`eigenvalues`] uses Jacobi rotations (with eigenvectors).
pub const JACOBI_LIMIT: usize = 200;
/// Graph-level routines compute dense spectra up to this size and switch to
/// inertia counting above it.
pub const DENSE_ROUTE_LIMIT: usize = 1500;
/// Off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-10;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Slack on eigenvalue comparisons.
pub const SPECTRAL_TOL: f64 = 1e-8;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * n] }
    }

    /// From row-major entries; fails unless square and symmetric to `1e-12`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Input("matrix is not square".into()));
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        if m.asymmetry() > 1e-12 {
            return Err(Error::Input("matrix is not symmetric".into()));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
        self.data[j * self.n + i] = x;
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// `𝓛 = I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<SymmetricMatrix> {
    check_no_isolated(g)?;
    let n = g.n();
    let d = g.degrees();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        m.data[i * n + i] = 1.0;
    }
    for &(u, v, w) in g.edges() {
        m.set_sym(u, v, -w / (d[u] * d[v]).sqrt());
    }
    Ok(m)
}

fn check_no_isolated(g: &Graph) -> Result<()> {
    if let Some(v) = g.degrees().iter().position(|&x| x <= 0.0) {
        return Err(Error::Domain(format!("vertex {v} is isolated")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Jacobi,
    Householder,
}

/// Sorted eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `max ‖L v - λ v‖∞` over the computed eigenpairs; `None` when only
    /// eigenvalues were formed.
    pub residual: Option<f64>,
    pub solver: Solver,
    pub sweeps: usize,
}

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Number of eigenvalues `≤ threshold`.
    pub fn count_at_most(&self, threshold: f64) -> usize {
        self.eigenvalues.partition_point(|&x| x <= threshold)
    }

    /// Range `[-tol, 2 + tol]`, `λ₁ ≤ tol` and trace `n` within `n · tol`.
    pub fn laplacian_invariants_hold(&self, tol: f64) -> bool {
        let n = self.eigenvalues.len() as f64;
        let in_range = self.eigenvalues.iter().all(|&x| x >= -tol && x <= 2.0 + tol);
        let first = self.eigenvalues.first().map_or(true, |&x| x.abs() <= tol);
        in_range && first && (self.sum() - n).abs() <= n * tol
    }
}

/// Full spectrum, ascending.
pub fn eigenvalues(m: &SymmetricMatrix) -> Result<Spectrum> {
    let n = m.n();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity {
            what: "dense eigenvalues",
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    if n <= JACOBI_LIMIT {
        jacobi(m)
    } else {
        let dm = DMatrix::from_row_slice(n, n, &m.data);
        let mut ev: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(Spectrum {
            eigenvalues: ev,
            residual: None,
            solver: Solver::Householder,
            sweeps: 0,
        })
    }
}

/// Cyclic-by-row Jacobi rotations until the off-diagonal Frobenius norm drops
/// below [`JACOBI_TOL`].
pub fn jacobi(m: &SymmetricMatrix) -> Result<Spectrum> {
    let n = m.n();
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= JACOBI_TOL {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Domain(format!("Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    // residual of each computed pair against the original matrix
    let mut residual = 0.0f64;
    for j in 0..n {
        let lambda = a[j * n + j];
        for i in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += m.data[i * n + k] * v[k * n + j];
            }
            residual = residual.max((s - lambda * v[i * n + j]).abs());
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(Spectrum {
        eigenvalues: ev,
        residual: Some(residual),
        solver: Solver::Jacobi,
        sweeps,
    })
}

/// Spectrum of the normalized Laplacian of `g`.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    eigenvalues(&normalized_laplacian(g)?)
}

/// Number of eigenvalues of `𝓛(g)` strictly below `sigma`, from the signs of
/// the pivots of `𝓛 - σI` under a minimum-degree elimination order.
///
/// A pivot that is exactly zero means `sigma` is (numerically) an eigenvalue;
/// it is nudged to a tiny positive value, which counts that eigenvalue as not
/// below `sigma`.
pub fn count_below(g: &Graph, sigma: f64) -> Result<usize> {
    check_no_isolated(g)?;
    let n = g.n();
    let d = g.degrees();
    let mut diag = vec![1.0 - sigma; n];
    let mut rows: Vec<HashMap<usize, f64>> = (0..n)
        .map(|u| g.neighbors(u).map(|(x, w)| (x, -w / (d[u] * d[x]).sqrt())).collect())
        .collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n).map(|u| Reverse((rows[u].len(), u))).collect();
    let mut done = vec![false; n];
    let mut negatives = 0;
    while let Some(Reverse((deg, p))) = heap.pop() {
        if done[p] || deg != rows[p].len() {
            continue;
        }
        done[p] = true;
        let mut pivot = diag[p];
        if pivot == 0.0 {
            pivot = f64::MIN_POSITIVE;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        let row: Vec<(usize, f64)> = std::mem::take(&mut rows[p]).into_iter().collect();
        for &(i, _) in &row {
            rows[i].remove(&p);
        }
        for (a, &(i, li)) in row.iter().enumerate() {
            diag[i] -= li * li / pivot;
            for &(j, lj) in &row[a + 1..] {
                let delta = li * lj / pivot;
                *rows[i].entry(j).or_insert(0.0) -= delta;
                *rows[j].entry(i).or_insert(0.0) -= delta;
            }
        }
        for &(i, _) in &row {
            heap.push(Reverse((rows[i].len(), i)));
        }
    }
    Ok(negatives)
}

/// `(k, max_i Φ(S_i))` for disjoint non-empty proper subsets; the second entry
/// upper-bounds the k-way conductance `φ(k)`.
pub fn k_way_conductance_upper(g: &Graph, modules: &[VertexSet]) -> Result<(usize, f64)> {
    let mut seen = vec![false; g.n()];
    let mut max_phi = 0.0f64;
    for (i, s) in modules.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::Input(format!("module {i} is empty")));
        }
        for v in s.iter() {
            if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Input(format!("modules overlap at vertex {v}")));
            }
        }
        max_phi = max_phi.max(g.conductance(s)?);
    }
    Ok((modules.len(), max_phi))
}

/// `λ_k / 2 ≤ max_phi + 1e-8`, with `k` 1-based.
pub fn cheeger_lower_check(spectrum: &Spectrum, k: usize, max_phi: f64) -> Result<bool> {
    if k == 0 || k > spectrum.eigenvalues.len() {
        return Err(Error::Input(format!(
            "k must be in 1..={}, got {k}",
            spectrum.eigenvalues.len()
        )));
    }
    Ok(spectrum.eigenvalues[k - 1] / 2.0 <= max_phi + SPECTRAL_TOL)
}

/// How a graph-level Cheeger check was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheegerRoute {
    /// Compared against `λ_k` from a dense spectrum.
    Spectrum,
    /// Counted eigenvalues below `2 max_phi + 2e-8` with an `LDLᵀ` inertia count.
    Inertia,
    /// `2 max_phi ≥ 2`, and every normalized-Laplacian eigenvalue is at most 2.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerCheck {
    pub k: usize,
    pub max_phi: f64,
    /// `λ_k`, when a spectrum was computed.
    pub lambda_k: Option<f64>,
    /// Eigenvalues at most `2 max_phi + 2e-8`, when counted.
    pub count_below: Option<usize>,
    pub holds: bool,
    pub route: CheegerRoute,
}

/// Cheeger consistency for disjoint modules of `g`, choosing the cheapest
/// sound route.
pub fn cheeger_check(g: &Graph, modules: &[VertexSet]) -> Result<CheegerCheck> {
    let (k, max_phi) = k_way_conductance_upper(g, modules)?;
    let sigma = 2.0 * (max_phi + SPECTRAL_TOL);
    if sigma >= 2.0 {
        return Ok(CheegerCheck {
            k,
            max_phi,
            lambda_k: None,
            count_below: None,
            holds: true,
            route: CheegerRoute::Vacuous,
        });
    }
    if g.n() <= DENSE_ROUTE_LIMIT {
        let s = laplacian_spectrum(g)?;
        let holds = cheeger_lower_check(&s, k, max_phi)?;
        return Ok(CheegerCheck {
            k,
            max_phi,
            lambda_k: Some(s.eigenvalues[k - 1]),
            count_below: Some(s.count_at_most(sigma)),
            holds,
            route: CheegerRoute::Spectrum,
        });
    }
    let count = count_below(g, sigma)?;
    Ok(CheegerCheck {
        k,
        max_phi,
        lambda_k: None,
        count_below: Some(count),
        holds: count >= k,
        route: CheegerRoute::Inertia,
    })
}

/// Cheeger check on the non-trivial modules of a partition (a module equal to
/// `V` has no conductance and is skipped).
pub fn cheeger_check_partition(g: &Graph, p: &Partition) -> Result<CheegerCheck> {
    p.check_size(g.n())?;
    let sets: Vec<VertexSet> = p.module_sets().into_iter().filter(|s| s.len() < g.n()).collect();
    cheeger_check(g, &sets)
}

/// Number of eigenvalues `≤ threshold`.
pub fn small_eigenvalue_census(g: &Graph, threshold: f64) -> Result<usize> {
    if g.n() <= DENSE_ROUTE_LIMIT {
        Ok(laplacian_spectrum(g)?.count_at_most(threshold))
    } else {
        count_below(g, threshold + SPECTRAL_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleClass {
    pub size: usize,
    pub volume: f64,
    /// `None` when the module is `V`.
    pub conductance: Option<f64>,
    pub qualifies: bool,
}

/// Module census of [`combinatorial_census`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub modules: Vec<ModuleClass>,
    pub qualified: usize,
    /// `vol(A) / vol(G)` where `A` is the union of qualifying modules.
    pub qualified_volume_fraction: f64,
    pub eps: f64,
    /// `vol(A) ≥ (1 - 2ε) vol(G)`; reported only.
    pub meets_volume_target: bool,
}

/// Classifies modules by `Φ(X) ≤ phi_cap` and `|X| ≤ size_cap`.
pub fn combinatorial_census(g: &Graph, p: &Partition, eps: f64, phi_cap: f64, size_cap: usize) -> Result<CensusReport> {
    p.check_size(g.n())?;
    let vol = g.vol();
    let mut modules = Vec::with_capacity(p.len());
    let mut good_vol = 0.0;
    for s in p.module_sets() {
        let volume = g.volume(&s);
        let conductance = if s.len() < g.n() { Some(g.conductance(&s)?) } else { None };
        let qualifies = conductance.is_some_and(|phi| phi <= phi_cap) && s.len() <= size_cap;
        if qualifies {
            good_vol += volume;
        }
        modules.push(ModuleClass {
            size: s.len(),
            volume,
            conductance,
            qualifies,
        });
    }
    let fraction = if vol > 0.0 { good_vol / vol } else { 0.0 };
    Ok(CensusReport {
        qualified: modules.iter().filter(|m| m.qualifies).count(),
        modules,
        qualified_volume_fraction: fraction,
        eps,
        meets_volume_target: fraction >= 1.0 - 2.0 * eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_binary_tree, complete_graph, cycle, grid, path};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn laplacian_entries() {
        let k2 = normalized_laplacian(&path(2).unwrap()).unwrap();
        assert_eq!(k2, SymmetricMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap());
        let k3 = normalized_laplacian(&complete_graph(3).unwrap()).unwrap();
        assert!((k3.get(0, 1) + 0.5).abs() < 1e-15 && k3.get(2, 2) == 1.0);
        let p3 = normalized_laplacian(&path(3).unwrap()).unwrap();
        assert!((p3.get(0, 1) + 0.5f64.sqrt()).abs() < 1e-15);
        assert!((p3.get(2, 1) + 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(p3.get(0, 2), 0.0);
        assert!(p3.asymmetry() <= 1e-12);
        let lonely = Graph::new(3, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(normalized_laplacian(&lonely), Err(Error::Domain(_))));
    }

    #[test]
    fn known_spectra() {
        let s = laplacian_spectrum(&path(2).unwrap()).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 2.0], 1e-8));
        let s = laplacian_spectrum(&complete_graph(4).unwrap()).unwrap();
        let third = 4.0 / 3.0;
        assert!(close(&s.eigenvalues, &[0.0, third, third, third], 1e-8));
        assert!(s.residual.unwrap() <= 1e-8);
        let s = laplacian_spectrum(&cycle(4).unwrap()).unwrap();
        assert!(close(&s.eigenvalues, &[0.0, 1.0, 1.0, 2.0], 1e-8));
        let s = laplacian_spectrum(&cycle(9).unwrap()).unwrap();
        let mut expect: Vec<f64> = (0..9)
            .map(|k| 1.0 - (2.0 * std::f64::consts::PI * k as f64 / 9.0).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        assert!(close(&s.eigenvalues, &expect, 1e-8));
        assert!(s.laplacian_invariants_hold(SPECTRAL_TOL));
    }

    #[test]
    fn solvers_agree() {
        let g = grid(15).unwrap();
        let m = normalized_laplacian(&g).unwrap();
        let big = eigenvalues(&m).unwrap();
        assert_eq!(big.solver, Solver::Householder);
        let small = jacobi(&m).unwrap();
        assert!(close(&big.eigenvalues, &small.eigenvalues, 1e-8));
        assert!(big.laplacian_invariants_hold(SPECTRAL_TOL));
    }

    #[test]
    fn inertia_matches_dense_counts() {
        for g in [grid(7).unwrap(), complete_binary_tree(5).unwrap(), cycle(12).unwrap(), complete_graph(9).unwrap()] {
            let s = laplacian_spectrum(&g).unwrap();
            for sigma in [0.05, 0.3, 0.77, 1.0 + 1e-7, 1.5, 1.99] {
                let dense = s.eigenvalues.iter().filter(|&&x| x < sigma).count();
                assert_eq!(count_below(&g, sigma).unwrap(), dense, "sigma {sigma}");
            }
        }
    }

    #[test]
    fn cheeger_examples() {
        let k4 = complete_graph(4).unwrap();
        let halves = [VertexSet::new(4, [0, 1]).unwrap(), VertexSet::new(4, [2, 3]).unwrap()];
        let (k, phi) = k_way_conductance_upper(&k4, &halves).unwrap();
        assert_eq!(k, 2);
        assert!((phi - 2.0 / 3.0).abs() < 1e-15);
        let s = laplacian_spectrum(&k4).unwrap();
        assert!(cheeger_lower_check(&s, 2, phi).unwrap());
        assert!(cheeger_lower_check(&s, 1, 0.0).unwrap());
        assert!(cheeger_lower_check(&s, 5, phi).is_err());
        let single = [VertexSet::new(4, [2]).unwrap()];
        assert_eq!(k_way_conductance_upper(&k4, &single).unwrap(), (1, 1.0));
        let overlap = [VertexSet::new(4, [0, 1]).unwrap(), VertexSet::new(4, [1, 2]).unwrap()];
        assert!(k_way_conductance_upper(&k4, &overlap).is_err());
        let c = cheeger_check(&k4, &halves).unwrap();
        assert!(c.holds && c.route == CheegerRoute::Spectrum);
        assert_eq!(cheeger_check(&k4, &single).unwrap().route, CheegerRoute::Vacuous);
    }

    #[test]
    fn censuses() {
        assert_eq!(small_eigenvalue_census(&complete_graph(8).unwrap(), 0.5).unwrap(), 1);
        let bridged =
            Graph::unweighted(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(small_eigenvalue_census(&bridged, 2.0 / 7.0).unwrap() >= 2);
        let two = Graph::unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(small_eigenvalue_census(&two, 1e-6).unwrap(), 2);

        let k = complete_graph(40).unwrap();
        let r = combinatorial_census(&k, &crate::generators::balanced_partition(40, 4).unwrap(), 0.1, 0.5, 40).unwrap();
        assert_eq!(r.qualified_volume_fraction, 0.0);
        let r = combinatorial_census(&k, &Partition::trivial(40), 0.1, 0.5, 40).unwrap();
        assert_eq!(r.modules[0].conductance, None);
        assert!(!r.modules[0].qualifies);
    }
}
