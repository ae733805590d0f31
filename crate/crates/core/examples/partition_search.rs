//! Exact, greedy and construction routes to the two-dimensional entropy.

use structure_entropy::generators::{complete_binary_tree, complete_graph, grid, random_connected};
use structure_entropy::partition_search::{exact_h2, greedy_h2, resistance, Family, Mode};

fn main() -> structure_entropy::Result<()> {
    for n in 7..=10 {
        let g = complete_graph(n)?;
        let (v, p) = exact_h2(&g)?;
        println!("K{n}: H2 = {v:.5}, optimal module sizes {:?}", p.module_sizes());
    }

    let g = random_connected(11, 0.2, false, 42)?;
    let (exact, _) = exact_h2(&g)?;
    let (greedy, p) = greedy_h2(&g)?;
    println!("random graph: exact {exact:.5} <= greedy {greedy:.5} ({} modules)", p.len());

    let cases = [
        ("binary tree H=12", complete_binary_tree(12)?, Family::CompleteBinaryTree { depth: 12 }),
        ("grid 48x48", grid(48)?, Family::Grid { side: 48 }),
        ("K512", complete_graph(512)?, Family::Complete),
    ];
    for (name, g, family) in cases {
        let built = resistance(&g, &Mode::Construction(family))?;
        let greedy = resistance(&g, &Mode::Greedy)?;
        println!(
            "{name}: construction R >= {:.4} ({}), greedy R >= {:.4}",
            built.resistance,
            built.method.label(),
            greedy.resistance
        );
    }
    Ok(())
}
