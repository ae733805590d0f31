//! Security index of trees, grids and complete graphs as they grow.

use structure_entropy::generators::{complete_binary_tree, complete_graph, grid};
use structure_entropy::partition_search::{resistance, Family, Mode};

fn main() -> structure_entropy::Result<()> {
    println!("{:<10} {:>8} {:>8} {:>8} {:>8}", "family", "n", "H1", "R", "theta");
    for h in (6..=16).step_by(2) {
        let r = resistance(&complete_binary_tree(h)?, &Mode::Construction(Family::CompleteBinaryTree { depth: h }))?;
        println!("{:<10} {:>8} {:>8.3} {:>8.3} {:>8.3}", "tree", r.n, r.h1, r.resistance, r.security_index);
    }
    for side in [8, 16, 32, 64] {
        let r = resistance(&grid(side)?, &Mode::Construction(Family::Grid { side }))?;
        println!("{:<10} {:>8} {:>8.3} {:>8.3} {:>8.3}", "grid", r.n, r.h1, r.resistance, r.security_index);
    }
    for n in [16, 64, 256, 1024] {
        let r = resistance(&complete_graph(n)?, &Mode::Construction(Family::Complete))?;
        println!("{:<10} {:>8} {:>8.3} {:>8.3} {:>8.3}", "complete", r.n, r.h1, r.resistance, r.security_index);
    }
    Ok(())
}
