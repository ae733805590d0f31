//! Coding trees: entropy of a tree, module functions, and exact minima by height.

use structure_entropy::coding_tree::{count_trees, h_k_exact, h_k_greedy, h_tree, h_tree_with, Nested};
use structure_entropy::generators::cycle;
use structure_entropy::{CodingTree, ModuleFunction};

fn main() -> structure_entropy::Result<()> {
    let g = cycle(8)?;
    let arcs = Nested::Node(vec![
        Nested::Node(vec![
            Nested::Node((0..2).map(Nested::Leaf).collect()),
            Nested::Node((2..4).map(Nested::Leaf).collect()),
        ]),
        Nested::Node(vec![
            Nested::Node((4..6).map(Nested::Leaf).collect()),
            Nested::Node((6..8).map(Nested::Leaf).collect()),
        ]),
    ]);
    let t = CodingTree::from_nested(&arcs);
    println!("tree of height {}: {}", t.height(), t.to_json());
    println!("H^T (cut)    = {:.4}", h_tree(&g, &t)?);
    println!("H^T (volume) = {:.4}  equals H1 for every tree", h_tree_with(&g, &t, &ModuleFunction::Volume)?);
    println!("H^T (flat)   = {:.4}", h_tree(&g, &CodingTree::flat(8))?);

    for k in 1..=3 {
        let (v, best) = h_k_exact(&g, k)?;
        println!("H^{k} exact = {v:.4} via {}", best.to_json());
    }
    let (v, _) = h_k_greedy(&g, 3)?;
    println!("H^3 greedy = {v:.4}");
    println!("trees of height <= 2 on 6 leaves: {}", count_trees(6, 2));
    Ok(())
}
