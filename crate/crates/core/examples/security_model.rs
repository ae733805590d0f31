//! Communities grown by the security model, and how secure the result is.

use structure_entropy::entropy::{h1, h_partition, security_index};
use structure_entropy::generators::{natural_partition, security_model, trace_statistics, SecurityModelParams};

fn main() -> structure_entropy::Result<()> {
    for n in [2000, 8000, 20000] {
        let params = SecurityModelParams::new(n, 1.5, 4, 1);
        let (g, trace) = security_model(&params)?;
        let p = natural_partition(&trace);
        let (h, hn) = (h1(&g)?, h_partition(&g, &p)?);
        let stats = trace_statistics(&trace, &g, 1.0)?;
        println!(
            "n = {n}: {} communities (bounds {:.0}..{:.0}), largest {} (bound {:.0}), theta = {:.3}",
            stats.colors,
            stats.color_bounds.0,
            stats.color_bounds.1,
            stats.max_community,
            stats.max_community_bound,
            security_index(h, hn)?
        );
        println!(
            "  local edges {}, global edges {}, shortfall {}, mean g_S after T2 {:?}",
            stats.local_edges, stats.global_edges, stats.shortfall, stats.mean_global_edges_after_t2
        );
    }
    Ok(())
}
