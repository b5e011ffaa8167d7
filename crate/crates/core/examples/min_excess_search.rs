//! Exhaustive minimum-excess search with the conjecture check.
//!
//! ```bash
//! cargo run --example min_excess_search -- 7 4
//! ```
//! Arguments: field order (default 5) and worker count (default 1).

use std::time::Instant;

use kakeya::search::{min_excess_search, verify_conjectures, SearchOptions};
use kakeya::FieldTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let workers: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let field = FieldTable::with_order(q)?;

    let start = Instant::now();
    let outcome = min_excess_search(&SearchOptions::new(&field).workers(workers))?;
    let elapsed = start.elapsed();

    println!("GF({q}): searched {} nodes ({} pruned) in {elapsed:.2?}", outcome.nodes_explored, outcome.nodes_pruned);
    println!(
        "minimum excess {:?}, minimum size {:?}, {} normalized minimizers",
        outcome.min_excess,
        outcome.min_cardinality(),
        outcome.witnesses.len()
    );
    for w in outcome.witnesses.iter().take(5) {
        println!("  {w}");
    }
    let report = verify_conjectures(&outcome)?;
    println!(
        "size bound (q-1)/2 holds: {}; triple points on one line: {}",
        report.conjecture1_holds, report.conjecture2_holds
    );
    Ok(())
}
