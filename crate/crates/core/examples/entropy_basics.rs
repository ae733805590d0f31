//! One- and two-dimensional entropy of a small graph, by hand-picked partitions.

use structure_entropy::entropy::{decompose_partition_entropy, h1, h_partition, security_index};
use structure_entropy::{Graph, Partition};

fn main() -> structure_entropy::Result<()> {
    // two triangles joined by a bridge
    let g = Graph::unweighted(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])?;
    let h = h1(&g)?;
    println!("n = {}, m = {}, vol = {}, H1 = {h:.4}", g.n(), g.m(), g.vol());

    let candidates = [
        ("whole graph", Partition::trivial(6)),
        ("singletons", Partition::singletons(6)),
        ("triangles", Partition::from_labels(&[0, 0, 0, 1, 1, 1])),
        ("uneven", Partition::from_labels(&[0, 0, 1, 1, 1, 1])),
    ];
    for (name, p) in &candidates {
        let hp = h_partition(&g, p)?;
        println!("{name:>12}: H^P = {hp:.4}  R = {:.4}  theta = {:.4}", h - hp, security_index(h, hp)?);
    }

    let dec = decompose_partition_entropy(&g, &candidates[2].1)?;
    println!(
        "triangles split: intra {:.4} + boundary {:.4}; H1 by additivity {:.4}",
        dec.intra_term, dec.boundary_term, dec.h1_by_additivity
    );
    for (j, m) in dec.modules.iter().enumerate() {
        println!("  module {j}: vol {} cut {} phi {:?}", m.volume, m.boundary, m.conductance);
    }
    Ok(())
}
