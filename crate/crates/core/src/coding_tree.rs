//! Coding trees: rooted trees whose leaves biject to the vertices, with each
//! node marked by the vertex set below it.
//!
//! `H^T` charges every non-root node `α` the term
//! `-(g(T_α) / vol G) · log2(vol α / vol α⁻)`, where `g` is a module function.
//! With the cut module function this is the structure entropy by `T`; with the
//! volume module function it collapses to `H¹` for every tree.
//!
//! Height convention: the root sits at depth 0 and a tree has height `k` when its
//! deepest leaf is at depth `k`. Height-2 trees are exactly partitions.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::code_term;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Partition, RestrictedGrowth};

/// Limits of the exhaustive tree search per height.
pub const EXACT_TREE_LIMIT_K2: usize = 10;
pub const EXACT_TREE_LIMIT_K3: usize = 8;

/// Nested-array form of a tree: leaves are vertex ids, internal nodes are arrays.
/// `[[0,1],[2,[3,4]]]` is a root with two children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Nested {
    Leaf(usize),
    Node(Vec<Nested>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Sorted vertex set `T_α`.
    pub marker: Vec<usize>,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

/// A coding tree stored as an arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingTree {
    nodes: Vec<TreeNode>,
}

impl CodingTree {
    /// Root with every vertex as a direct leaf (the unique height-1 tree).
    pub fn flat(n: usize) -> Self {
        let leaves = (0..n).map(Nested::Leaf).collect();
        Self::from_nested(&Nested::Node(leaves))
    }

    /// Two-level tree mirroring `p`: one internal node per module with at least
    /// two members, singleton modules hang directly off the root. `{V}` gives the
    /// flat tree.
    pub fn from_partition(p: &Partition) -> Self {
        if p.len() <= 1 {
            return Self::flat(p.n());
        }
        let children = p
            .modules()
            .into_iter()
            .map(|m| {
                if m.len() == 1 {
                    Nested::Leaf(m[0])
                } else {
                    Nested::Node(m.into_iter().map(Nested::Leaf).collect())
                }
            })
            .collect();
        Self::from_nested(&Nested::Node(children))
    }

    /// Builds from the nested form. Internal markers are the multiset union of
    /// the children, so repeated leaves survive and are caught by [`validate_tree`].
    pub fn from_nested(spec: &Nested) -> Self {
        let mut nodes = Vec::new();
        Self::push_nested(spec, None, &mut nodes);
        CodingTree { nodes }
    }

    fn push_nested(spec: &Nested, parent: Option<usize>, nodes: &mut Vec<TreeNode>) -> usize {
        let id = nodes.len();
        nodes.push(TreeNode {
            marker: Vec::new(),
            children: Vec::new(),
            parent,
        });
        match spec {
            Nested::Leaf(v) => nodes[id].marker = vec![*v],
            Nested::Node(kids) => {
                let mut marker = Vec::new();
                let mut children = Vec::with_capacity(kids.len());
                for k in kids {
                    let c = Self::push_nested(k, Some(id), nodes);
                    marker.extend_from_slice(&nodes[c].marker);
                    children.push(c);
                }
                marker.sort_unstable();
                nodes[id].marker = marker;
                nodes[id].children = children;
            }
        }
        id
    }

    /// Arbitrary arena; the caller supplies markers explicitly. Intended for
    /// building malformed trees to test validation.
    pub fn from_raw(nodes: Vec<TreeNode>) -> Self {
        CodingTree { nodes }
    }

    /// Parses the nested JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Nested =
            serde_json::from_str(s).map_err(|e| Error::Input(format!("bad tree json: {e}")))?;
        Ok(Self::from_nested(&spec))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_nested()).expect("tree serializes")
    }

    pub fn to_nested(&self) -> Nested {
        self.nested_at(0)
    }

    fn nested_at(&self, id: usize) -> Nested {
        let node = &self.nodes[id];
        if node.children.is_empty() && node.marker.len() == 1 {
            Nested::Leaf(node.marker[0])
        } else {
            Nested::Node(node.children.iter().map(|&c| self.nested_at(c)).collect())
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Depth of the deepest node (root = 0).
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        let mut h = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                depth[i] = depth[p] + 1;
                h = h.max(depth[i]);
            }
        }
        h
    }

    /// Partition given by the root's children (the flat tree gives singletons).
    pub fn root_partition(&self) -> Partition {
        let n = self.nodes[0].marker.len();
        let mut labels = vec![0usize; n];
        for (j, &c) in self.nodes[0].children.iter().enumerate() {
            for &v in &self.nodes[c].marker {
                labels[v] = j;
            }
        }
        Partition::from_labels(&labels)
    }

    /// Same tree with single-child chains contracted and children ordered by
    /// their smallest vertex.
    pub fn canonical(&self) -> Self {
        fn canon(t: &CodingTree, id: usize) -> Nested {
            let mut id = id;
            while t.nodes[id].children.len() == 1 {
                id = t.nodes[id].children[0];
            }
            let node = &t.nodes[id];
            if node.children.is_empty() {
                return Nested::Leaf(node.marker[0]);
            }
            let mut kids: Vec<(usize, Nested)> = node
                .children
                .iter()
                .map(|&c| (t.nodes[c].marker[0], canon(t, c)))
                .collect();
            kids.sort_by_key(|k| k.0);
            Nested::Node(kids.into_iter().map(|k| k.1).collect())
        }
        Self::from_nested(&canon(self, 0))
    }

    /// Random tree built by recursive random binary splits of `0..n`.
    pub fn random_binary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        fn split<R: Rng + ?Sized>(mut set: Vec<usize>, rng: &mut R) -> Nested {
            if set.len() == 1 {
                return Nested::Leaf(set[0]);
            }
            set.shuffle(rng);
            let cut = rng.gen_range(1..set.len());
            let right = set.split_off(cut);
            Nested::Node(vec![split(set, rng), split(right, rng)])
        }
        if n == 1 {
            return Self::from_nested(&Nested::Node(vec![Nested::Leaf(0)]));
        }
        Self::from_nested(&split((0..n).collect(), rng))
    }
}

/// Outcome of [`validate_tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCheck {
    pub valid: bool,
    pub diagnostic: Option<String>,
}

/// Checks that markers partition their parent's marker at every node, that the
/// root marker is `V`, and that leaves are singletons in bijection with `V`.
pub fn validate_tree(g: &Graph, t: &CodingTree) -> TreeCheck {
    match check_tree(g.n(), t) {
        Ok(()) => TreeCheck {
            valid: true,
            diagnostic: None,
        },
        Err(msg) => TreeCheck {
            valid: false,
            diagnostic: Some(msg),
        },
    }
}

fn check_tree(n: usize, t: &CodingTree) -> std::result::Result<(), String> {
    let nodes = t.nodes();
    if nodes.is_empty() {
        return Err("tree has no nodes".into());
    }
    if nodes[0].marker != (0..n).collect::<Vec<_>>() {
        return Err("root marker is not exactly V".into());
    }
    let mut leaf_seen = vec![false; n];
    for (i, node) in nodes.iter().enumerate() {
        if node.children.is_empty() {
            if node.marker.len() != 1 {
                return Err(format!("leaf node {i} has marker of size {}", node.marker.len()));
            }
            let v = node.marker[0];
            if v >= n {
                return Err(format!("leaf node {i} marks out-of-range vertex {v}"));
            }
            if std::mem::replace(&mut leaf_seen[v], true) {
                return Err(format!("vertex {v} marks more than one leaf"));
            }
            continue;
        }
        let mut union: Vec<usize> = Vec::with_capacity(node.marker.len());
        for &c in &node.children {
            if nodes[c].parent != Some(i) {
                return Err(format!("node {c} does not point back to parent {i}"));
            }
            union.extend_from_slice(&nodes[c].marker);
        }
        union.sort_unstable();
        if union.windows(2).any(|w| w[0] == w[1]) {
            return Err(format!("children of node {i} have overlapping markers"));
        }
        if union != node.marker {
            return Err(format!("children of node {i} do not cover its marker"));
        }
    }
    if let Some(v) = leaf_seen.iter().position(|s| !s) {
        return Err(format!("vertex {v} has no leaf"));
    }
    Ok(())
}

/// The map `g` from vertex sets to totals used to weight each tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuleFunction {
    /// `g(X) = vol(X)`; additive.
    Volume,
    /// `g(X) = w(X, X̄)`.
    Cut,
    /// `g(X) = Σ_{x∈X} mass[x]`; additive for any non-negative masses.
    Additive(Vec<f64>),
}

impl ModuleFunction {
    pub fn evaluate(&self, g: &Graph, members: &[usize], inside: &[bool]) -> f64 {
        match self {
            ModuleFunction::Volume => g.volume_of(members),
            ModuleFunction::Cut => g.boundary_with(members, |x| inside[x]),
            ModuleFunction::Additive(mass) => members.iter().map(|&v| mass[v]).sum(),
        }
    }
}

/// `H^T(G)` with the cut module function.
pub fn h_tree(g: &Graph, t: &CodingTree) -> Result<f64> {
    h_tree_with(g, t, &ModuleFunction::Cut)
}

/// `H^T_g(G)` for an arbitrary module function.
pub fn h_tree_with(g: &Graph, t: &CodingTree, f: &ModuleFunction) -> Result<f64> {
    g.require_connected()?;
    if let Err(msg) = check_tree(g.n(), t) {
        return Err(Error::Input(format!("invalid coding tree: {msg}")));
    }
    if let ModuleFunction::Additive(mass) = f {
        if mass.len() != g.n() || mass.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Input("additive module function needs n non-negative masses".into()));
        }
    }
    let vol = g.vol();
    let nodes = t.nodes();
    let volumes: Vec<f64> = nodes.iter().map(|nd| g.volume_of(&nd.marker)).collect();
    let mut inside = vec![false; g.n()];
    let mut total = 0.0;
    // Preorder, children in stored order.
    let mut stack: Vec<usize> = nodes[0].children.iter().rev().copied().collect();
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        let parent = node.parent.expect("non-root node has a parent");
        for &v in &node.marker {
            inside[v] = true;
        }
        let weight = f.evaluate(g, &node.marker, &inside);
        for &v in &node.marker {
            inside[v] = false;
        }
        total += code_term(weight, vol, volumes[id], volumes[parent]);
        stack.extend(node.children.iter().rev().copied());
    }
    Ok(total)
}

/// Minimum of `H^T` over all coding trees of height at most `k`, by exhaustive
/// enumeration of canonical trees (no single-child nodes).
///
/// Ties on the exact float value go to the tree whose root-level partition has
/// the lexicographically least restricted-growth string (the flat tree counts
/// as `{V}`), then to the least nested serialization.
pub fn h_k_exact(g: &Graph, k: usize) -> Result<(f64, CodingTree)> {
    g.require_connected()?;
    let n = g.n();
    let limit = match k {
        0 => return Err(Error::Input("height must be at least 1".into())),
        1 => usize::MAX,
        2 => EXACT_TREE_LIMIT_K2,
        3 => EXACT_TREE_LIMIT_K3,
        _ => return Err(Error::Input(format!("exact search supports heights 1..=3, got {k}"))),
    };
    if n > limit {
        return Err(Error::Capacity {
            what: "h_k_exact",
            size: n,
            limit,
        });
    }
    let flat = CodingTree::flat(n);
    let mut best_value = h_tree(g, &flat)?;
    let mut best = flat;
    let mut best_key = tie_key(&best);
    let all: Vec<usize> = (0..n).collect();
    let mut memo = HashMap::new();
    for spec in trees_over(&all, k, &mut memo).iter().skip(1) {
        let tree = CodingTree::from_nested(spec);
        let value = h_tree(g, &tree)?;
        if value < best_value {
            best_value = value;
            best_key = tie_key(&tree);
            best = tree;
        } else if value == best_value {
            let key = tie_key(&tree);
            if key < best_key {
                best_key = key;
                best = tree;
            }
        }
    }
    Ok((best_value, best))
}

fn tie_key(t: &CodingTree) -> (Vec<usize>, String) {
    let rgs = if t.root().children.iter().all(|&c| t.nodes()[c].children.is_empty()) {
        vec![0; t.root().marker.len()]
    } else {
        t.root_partition().assignment().to_vec()
    };
    (rgs, t.to_json())
}

/// All canonical trees of height `<= h` over `set` (sorted, `|set| >= 2`),
/// children ordered by smallest vertex. The flat tree comes first.
fn trees_over(set: &[usize], h: usize, memo: &mut HashMap<(Vec<usize>, usize), Vec<Nested>>) -> Vec<Nested> {
    if let Some(v) = memo.get(&(set.to_vec(), h)) {
        return v.clone();
    }
    let flat = Nested::Node(set.iter().map(|&v| Nested::Leaf(v)).collect());
    let mut out = vec![flat];
    if h >= 2 && set.len() >= 3 {
        for blocks in set_partitions(set) {
            // one block = single-child root; all singletons = the flat tree
            if blocks.len() < 2 || blocks.len() == set.len() {
                continue;
            }
            let options: Vec<Vec<Nested>> = blocks
                .iter()
                .map(|b| {
                    if b.len() == 1 {
                        vec![Nested::Leaf(b[0])]
                    } else {
                        trees_over(b, h - 1, memo)
                    }
                })
                .collect();
            let mut idx = vec![0usize; options.len()];
            loop {
                out.push(Nested::Node(
                    idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect(),
                ));
                let mut pos = options.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < options[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
    }
    memo.insert((set.to_vec(), h), out.clone());
    out
}

/// Set partitions of `set` with blocks ordered by smallest element, built by
/// choosing the block of the first remaining element.
fn set_partitions(set: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if set.is_empty() {
        return vec![Vec::new()];
    }
    let first = set[0];
    let rest = &set[1..];
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << rest.len()) {
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                block.push(v);
            } else {
                remaining.push(v);
            }
        }
        for mut tail in set_partitions(&remaining) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// Greedy upper bound on `H^K` for `k ∈ {2, 3}`.
///
/// `k = 2` lifts the greedy partition to a two-level tree; `k = 3` additionally
/// runs the same agglomeration inside every module, scoring sub-modules against
/// the module's volume.
pub fn h_k_greedy(g: &Graph, k: usize) -> Result<(f64, CodingTree)> {
    if !(2..=3).contains(&k) {
        return Err(Error::Input(format!("greedy tree search supports heights 2 and 3, got {k}")));
    }
    let (_, p) = crate::partition_search::greedy_h2(g)?;
    let tree = if k == 2 {
        CodingTree::from_partition(&p)
    } else {
        let vol = g.vol();
        let modules = p.modules();
        let children = modules
            .into_iter()
            .map(|m| {
                if m.len() == 1 {
                    return Nested::Leaf(m[0]);
                }
                let inner = crate::partition_search::agglomerate_within(g, &m, g.volume_of(&m), vol);
                if inner.len() <= 1 || inner.len() == m.len() {
                    Nested::Node(m.into_iter().map(Nested::Leaf).collect())
                } else {
                    Nested::Node(
                        inner
                            .into_iter()
                            .map(|sub| {
                                if sub.len() == 1 {
                                    Nested::Leaf(sub[0])
                                } else {
                                    Nested::Node(sub.into_iter().map(Nested::Leaf).collect())
                                }
                            })
                            .collect(),
                    )
                }
            })
            .collect::<Vec<_>>();
        if children.len() == 1 {
            CodingTree::flat(g.n())
        } else {
            CodingTree::from_nested(&Nested::Node(children))
        }
    };
    let value = h_tree(g, &tree)?;
    Ok((value, tree))
}

/// Tree enumeration sanity: number of canonical height-2 trees is `Bell(n) - 1`.
#[doc(hidden)]
pub fn count_trees(n: usize, k: usize) -> usize {
    let all: Vec<usize> = (0..n).collect();
    trees_over(&all, k, &mut HashMap::new()).len()
}

#[doc(hidden)]
pub fn rgs_of(p: &Partition) -> Vec<usize> {
    p.assignment().to_vec()
}

#[allow(dead_code)]
fn all_partitions(n: usize) -> Vec<Partition> {
    let mut it = RestrictedGrowth::new(n);
    let mut out = Vec::new();
    while let Some(r) = it.next_rgs() {
        out.push(Partition::from_labels(r));
    }
    out
}
