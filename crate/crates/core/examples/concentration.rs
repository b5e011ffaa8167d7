//! Seeded Monte Carlo sampling of random configurations and the Chebyshev
//! tail bound.
//!
//! ```bash
//! cargo run --example concentration -- 101 10000 1 4
//! ```
//! Arguments: field order, sample count, seed, worker count.

use kakeya::stats::{chebyshev_bound, concentration_band, monte_carlo_with_workers};
use kakeya::FieldTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let q: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(31);
    let n: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10_000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let workers: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let field = FieldTable::with_order(q)?;

    let r = monte_carlo_with_workers(&field, n, seed, workers)?;
    let (center, half) = concentration_band(field.q());
    println!("{n} samples over GF({q}), seed {seed}");
    println!("mean     {:.3} (exact {:.3})", r.empirical_mean, r.closed_form_mean);
    println!("variance {:.3} (exact {:.3})", r.empirical_variance, r.closed_form_variance);
    println!(
        "outside {center:.1} +- {half:.1}: {:.4} of samples; Chebyshev bound {:.6}",
        r.band_violation_fraction,
        chebyshev_bound(q as u64)
    );
    Ok(())
}
