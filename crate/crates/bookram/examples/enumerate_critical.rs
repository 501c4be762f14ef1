//! Determines a small book Ramsey number by isomorph-free enumeration.
//!
//! Level n holds every n-vertex graph, up to isomorphism, avoiding B_r
//! with a complement avoiding B_s. Each level is grown from the one
//! below; the first empty level is the Ramsey number, and the level just
//! under it is the complete set of critical graphs.

use std::time::Duration;

use bookram::graph::BookParams;
use bookram::search::{enumerate_ramsey_graphs, ramsey_number_smallcase};

fn main() {
    let p = BookParams::new(2, 3);
    let budget = Some(Duration::from_secs(120));

    println!("avoiding-graph counts for (B_2,B_3):");
    for n in 5..=10 {
        let level = enumerate_ramsey_graphs(n, p, budget).expect("within budget");
        println!("  n={n:>2}: {:>3} graphs", level.graphs.len());
    }

    let result = ramsey_number_smallcase(p, 16, budget).expect("within budget");
    println!(
        "\nR(B_2,B_3) = {} with {} critical graphs on {} vertices \
         ({} nodes searched, {:.2}s)",
        result.value,
        result.critical_count(),
        result.value - 1,
        result.stats.nodes,
        result.stats.elapsed.as_secs_f64()
    );
    for g in &result.critical_graphs {
        println!("  {g}");
    }
    assert_eq!((result.value, result.critical_count()), (11, 4));
}
