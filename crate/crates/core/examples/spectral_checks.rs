//! Normalized-Laplacian spectra and the Cheeger lower bound on partitions.

use structure_entropy::generators::{complete_graph, cycle, grid, grid_partition};
use structure_entropy::spectral::{
    cheeger_check_partition, combinatorial_census, laplacian_spectrum, small_eigenvalue_census,
};

fn main() -> structure_entropy::Result<()> {
    for (name, g) in [("K4", complete_graph(4)?), ("C4", cycle(4)?), ("C9", cycle(9)?)] {
        let s = laplacian_spectrum(&g)?;
        let shown: Vec<String> = s.eigenvalues.iter().map(|x| format!("{x:.4}")).collect();
        println!("{name}: [{}] via {:?}", shown.join(", "), s.solver);
    }

    let g = grid(24)?;
    for k in [3, 4, 6, 8] {
        let p = grid_partition(24, k)?;
        let c = cheeger_check_partition(&g, &p)?;
        println!(
            "grid 24, {k}x{k} blocks: k = {}, max phi = {:.4}, lambda_k = {:?}, holds = {}",
            c.k, c.max_phi, c.lambda_k, c.holds
        );
        let census = combinatorial_census(&g, &p, 0.1, 0.3, 100)?;
        println!(
            "  {} of {} modules qualify, volume fraction {:.3}; {} eigenvalues <= {:.3}",
            census.qualified,
            p.len(),
            census.qualified_volume_fraction,
            small_eigenvalue_census(&g, 2.0 * c.max_phi)?,
            2.0 * c.max_phi
        );
    }
    Ok(())
}
