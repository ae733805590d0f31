//! Vertex partitions with canonical module ids, and restricted-growth-string
//! enumeration of all set partitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// A total assignment of vertices to modules `0..len()`.
///
/// Module ids are canonical: module `j` is the `j`-th distinct label met when
/// scanning vertices `0..n`. Two partitions are equal iff they group the same
/// vertices together.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    modules: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling of `0..labels.len()`.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            assignment.push(*map.entry(l).or_insert(next));
        }
        Partition {
            modules: map.len(),
            assignment,
        }
    }

    /// Builds from explicit modules; they must be non-empty, disjoint and cover `0..n`.
    pub fn from_modules(n: usize, modules: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (j, m) in modules.iter().enumerate() {
            if m.is_empty() {
                return Err(Error::Input(format!("module {j} is empty")));
            }
            for &v in m {
                if v >= n {
                    return Err(Error::Input(format!("vertex {v} out of range (n = {n})")));
                }
                if labels[v] != usize::MAX {
                    return Err(Error::Input(format!("vertex {v} appears in two modules")));
                }
                labels[v] = j;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Input(format!("vertex {v} is not assigned to any module")));
        }
        Ok(Self::from_labels(&labels))
    }

    /// `{V}`.
    pub fn trivial(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            modules: usize::from(n > 0),
        }
    }

    /// Every vertex in its own module.
    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            modules: n,
        }
    }

    /// Number of vertices covered.
    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Number of modules `L`.
    pub fn len(&self) -> usize {
        self.modules
    }

    pub fn is_empty(&self) -> bool {
        self.modules == 0
    }

    pub fn module_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// The canonical assignment, which doubles as a restricted-growth string.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of every module, each sorted ascending.
    pub fn modules(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.modules];
        for (v, &j) in self.assignment.iter().enumerate() {
            out[j].push(v);
        }
        out
    }

    pub fn module_sets(&self) -> Vec<VertexSet> {
        self.modules().into_iter().map(VertexSet::from_sorted).collect()
    }

    pub fn module_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.modules];
        for &j in &self.assignment {
            s[j] += 1;
        }
        s
    }

    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::Input(format!(
                "partition covers {} vertices but the graph has {n}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Iterates every set partition of `0..n` as a restricted-growth string, in
/// lexicographic order. The first string is all zeros (`{V}`), the last is
/// `0, 1, ..., n-1` (all singletons). Yields `Bell(n)` items.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    rgs: Vec<usize>,
    /// `prefix_max[i] = max(rgs[0..=i])`.
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    /// Advances in place; returns the current string or `None` when exhausted.
    pub fn next_rgs(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.rgs);
        }
        let n = self.rgs.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for k in i + 1..n {
                    self.rgs[k] = 0;
                    self.prefix_max[k] = self.prefix_max[i];
                }
                return Some(&self.rgs);
            }
        }
        self.done = true;
        None
    }
}

/// `Bell(n)` for small `n` (exact while it fits in `u64`).
pub fn bell_number(n: usize) -> u64 {
    // Bell triangle.
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.modules(), vec![vec![0, 2], vec![1], vec![3]]);
        let q = Partition::from_modules(4, &[vec![3], vec![1], vec![0, 2]]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn from_modules_rejects_bad_covers() {
        assert!(Partition::from_modules(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_modules(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_modules(3, &[vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::from_modules(3, &[vec![0, 1, 5]]).is_err());
    }

    #[test]
    fn rgs_counts_match_bell_numbers() {
        let bells = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bells.iter().enumerate().skip(1) {
            let mut it = RestrictedGrowth::new(n);
            let mut count = 0;
            let mut prev: Option<Vec<usize>> = None;
            while let Some(r) = it.next_rgs() {
                if let Some(p) = &prev {
                    assert!(p.as_slice() < r, "not lexicographic");
                }
                // restricted growth: r[i] <= 1 + max(r[..i])
                let mut mx = 0;
                for (i, &x) in r.iter().enumerate() {
                    if i == 0 {
                        assert_eq!(x, 0);
                    } else {
                        assert!(x <= mx + 1);
                    }
                    mx = mx.max(x);
                }
                prev = Some(r.to_vec());
                count += 1;
            }
            assert_eq!(count, b, "n = {n}");
            assert_eq!(bell_number(n), b);
            assert_eq!(prev.unwrap(), (0..n).collect::<Vec<_>>());
        }
        assert_eq!(bell_number(12), 4_213_597);
    }
}
