//! Resistance lower bound for bounded-degree graphs from a spanning-tree partition.

use structure_entropy::generators::{random_regular, spanning_tree_partition};

fn main() -> structure_entropy::Result<()> {
    for (n, d) in [(64, 3), (1024, 3), (4096, 3), (1 << 16, 3), (4096, 4)] {
        let cert = spanning_tree_partition(&random_regular(n, d, 5)?)?;
        println!(
            "n = {n}, d = {d}, l = {}: {} modules, R >= {:.4}; bound chain {:.4} {:.4} {:.4} {:.4} {:.4}; (2/d) log2 n = {:.4}",
            cert.l,
            cert.partition.len(),
            cert.resistance,
            cert.size_form,
            cert.truncated_form,
            cert.entropy_form,
            cert.volume_form,
            cert.penultimate,
            cert.asymptotic
        );
    }
    Ok(())
}
