//! Triple points, exception lines and the covering-line check, on the
//! parabola construction and on random configurations.
//!
//! ```bash
//! cargo run --example triple_points -- 7
//! ```

use kakeya::stats::sample_config;
use kakeya::{b0_config, conditional_check, triple_point_exceptions, FieldTable, LineConfig};

fn describe(config: &LineConfig<'_>) {
    let check = conditional_check(config);
    let exceptions = triple_point_exceptions(config);
    println!("{config}");
    println!(
        "  excess {}, {} triple points, max multiplicity {}, {} lines without a triple point",
        check.excess,
        check.triple_points,
        check.max_multiplicity,
        exceptions.len()
    );
    match check.covering_slope {
        Some(s) => println!(
            "  every triple point lies on the line of slope {s}; bound holds: {:?}, tight: {}",
            check.bound_holds(),
            check.is_equality_case()
        ),
        None => println!("  no single line carries every triple point"),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let field = FieldTable::with_order(q)?;
    describe(&b0_config(&field));
    for i in 0..3 {
        describe(&sample_config(&field, 42, i));
    }
    Ok(())
}
