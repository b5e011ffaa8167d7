//! Exact mean and variance of the size of a random configuration, from the
//! closed forms and, for small q, by enumerating every configuration.
//!
//! ```bash
//! cargo run --example random_moments -- 5
//! ```

use kakeya::stats::{
    exact_moments_by_enumeration, expected_cardinality, ratio_string, ratio_to_f64, variance_cardinality,
};
use kakeya::FieldTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let field = FieldTable::with_order(q)?;
    let (mean, var) = (expected_cardinality(q as u64), variance_cardinality(q as u64));
    let q2 = f64::from(q * q);
    println!("mean     {} ~ {:.4} ({:.4} q^2)", ratio_string(&mean), ratio_to_f64(&mean), ratio_to_f64(&mean) / q2);
    println!("variance {} ~ {:.4} ({:.4} q^2)", ratio_string(&var), ratio_to_f64(&var), ratio_to_f64(&var) / q2);

    match exact_moments_by_enumeration(&field) {
        Ok(m) => println!(
            "enumeration agrees: mean {}, variance {}",
            m.mean == mean,
            m.variance == var
        ),
        Err(e) => println!("enumeration skipped: {e}"),
    }

    let e = std::f64::consts::E;
    println!("limits: 1 - 1/e = {:.4}, 1/e - 5/(2e^2) = {:.4}", 1.0 - 1.0 / e, 1.0 / e - 2.5 / (e * e));
    Ok(())
}
