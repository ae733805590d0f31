//! Predicting whether splitting a module helps, without recomputing the entropy.

use structure_entropy::entropy::h_partition;
use structure_entropy::generators::random_regular;
use structure_entropy::partition_search::merge_split_criterion;
use structure_entropy::{Partition, VertexSet};

fn main() -> structure_entropy::Result<()> {
    let g = random_regular(24, 3, 2)?;
    // modules {0..11} and {12..23}; split the first one at `cut`
    let halves = Partition::from_labels(&(0..24).map(|v| v / 12).collect::<Vec<_>>());
    for cut in [1, 3, 6, 9] {
        let y1 = VertexSet::new(24, 0..cut)?;
        let y2 = VertexSet::new(24, cut..12)?;
        let x = y1.union(&y2);
        let c = merge_split_criterion(&g, &x, &y1, &y2)?;
        let labels: Vec<usize> = (0..24).map(|v| if v < cut { 2 } else { v / 12 }).collect();
        let actual = h_partition(&g, &Partition::from_labels(&labels))? - h_partition(&g, &halves)?;
        println!(
            "split at {cut:>2}: lhs {:.3} rhs {:.3} -> {:?}; predicted change {:+.5}, actual {:+.5}",
            c.lhs,
            c.rhs,
            c.predicted,
            c.predicted_delta(g.vol()),
            actual
        );
    }
    Ok(())
}
