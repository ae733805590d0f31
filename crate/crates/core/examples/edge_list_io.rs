//! Reading an edge list with arbitrary ids, analysing it and writing the result.

use structure_entropy::io::{parse_edge_list, parse_partition, write_partition};
use structure_entropy::partition_search::{resistance, Family, Mode};

const EDGES: &str = "\
# two 4-cliques and a bridge
10 11
10 12
10 13
11 12
11 13
12 13
13 20
20 21
20 22
20 23
21 22
21 23
22 23
";

fn main() -> structure_entropy::Result<()> {
    let lg = parse_edge_list(EDGES)?;
    println!("{} vertices, labels {:?}", lg.graph.n(), lg.labels);

    let exact = resistance(&lg.graph, &Mode::Exact)?;
    println!("{}", exact.to_json());
    print!("{}", write_partition(&exact.witness, Some(&lg.labels)));

    let p = parse_partition("10 0\n11 0\n12 0\n13 1\n20 1\n21 2\n22 2\n23 2\n", &lg)?;
    let given = resistance(&lg.graph, &Mode::Construction(Family::Natural(p)))?;
    println!("hand partition: H^P = {:.4} vs optimum {:.4}", given.h2, exact.h2);

    match parse_edge_list("1 2\n2 x\n") {
        Err(e) => println!("bad input: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
