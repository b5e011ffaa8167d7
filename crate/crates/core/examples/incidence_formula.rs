//! Size of a union of one line per direction, counted directly and through
//! the multiplicity histogram.
//!
//! ```bash
//! cargo run --example incidence_formula -- 3 0,2,2,0
//! ```
//! Arguments: field order and comma-separated intercepts (slope order
//! 0, 1, ..., q-1, then the vertical line). Defaults to the parabola
//! construction.

use kakeya::{b0_config, incidence_report, multiplicity_map, FieldTable, LineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let field = FieldTable::with_order(q)?;
    let config = match args.next() {
        Some(text) => LineConfig::parse(&field, &text)?,
        None => b0_config(&field),
    };

    let grid = multiplicity_map(&config);
    let report = incidence_report(&config)?;
    println!("intercepts {config}");
    for y in (0..field.q()).rev() {
        let row: String = (0..field.q())
            .map(|x| match grid.counts()[x * field.q() + y] {
                0 => '.',
                m => char::from_digit(m as u32, 36).unwrap_or('#'),
            })
            .collect();
        println!("  {row}");
    }
    println!("multiplicity histogram {:?}", report.histogram);
    println!(
        "size {} = q(q+1)/2 + excess = {} + {}",
        report.cardinality, report.lower_bound, report.excess
    );
    Ok(())
}
