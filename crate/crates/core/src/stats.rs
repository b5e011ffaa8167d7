//! Size of a uniformly random configuration: exact moments in closed form,
//! the same moments by full enumeration, seeded Monte Carlo sampling, and the
//! Chebyshev tail bound.
//!
//! Every intercept is drawn independently and uniformly from the field, so
//! each of the q^(q+1) configurations has probability q^-(q+1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::besicovitch::LineConfig;
use crate::gf::{Felt, FieldTable};

/// Largest number of configurations [`exact_moments_by_enumeration`] visits.
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("TooLarge: {configs} configurations exceed the enumeration cap {cap}")]
    TooLarge { configs: u64, cap: u64 },
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

fn frac(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn power_ratio(base_num: u64, base_den: u64, exp: u32) -> BigRational {
    frac(
        BigInt::from(base_num).pow(exp),
        BigInt::from(base_den).pow(exp),
    )
}

/// `(1 - 1/q)^(q+1)`: probability that a fixed point is missed.
fn miss_one(q: u64) -> BigRational {
    power_ratio(q - 1, q, (q + 1) as u32)
}

/// `(1 - 1/q)(1 - 2/q)^q`: probability that two fixed distinct points are
/// both missed.
fn miss_two(q: u64) -> BigRational {
    power_ratio(q - 1, q, 1) * power_ratio(q - 2, q, q as u32)
}

/// `num / q^exp` in lowest terms. Only the primes of `q` can cancel, so this
/// avoids a full gcd on very long integers.
fn over_power_of(mut num: BigInt, q: u64, exp: u32) -> BigRational {
    let mut den = BigInt::one();
    let mut rest = q;
    let mut r = 2;
    while rest > 1 {
        if rest.is_multiple_of(r) {
            let mut mult = 0;
            while rest.is_multiple_of(r) {
                rest /= r;
                mult += 1;
            }
            let mut left = mult * exp;
            while left > 0 && (&num % r).is_zero() {
                num /= r;
                left -= 1;
            }
            den *= BigInt::from(r).pow(left);
        }
        r += 1;
    }
    BigRational::new_raw(num, den)
}

/// `(1 - (1 - 1/q)^(q+1)) q²`.
pub fn expected_cardinality(q: u64) -> BigRational {
    assert!(q >= 2, "field order is at least 2");
    // q^(q+1) (1 - a) q² / q^(q+1) with a = (q-1)^(q+1) / q^(q+1)
    let e = (q + 1) as u32;
    let num = (BigInt::from(q).pow(e) - BigInt::from(q - 1).pow(e)) * BigInt::from(q * q);
    over_power_of(num, q, e)
}

/// `q(q+1)(q-1)²(1-2/q)^q + q²a(1 - q²a)` with `a = (1-1/q)^(q+1)`.
pub fn variance_cardinality(q: u64) -> BigRational {
    assert!(q >= 2, "field order is at least 2");
    // everything over D² where D = q^(q+1) and a = A / D
    let e = (q + 1) as u32;
    let d = BigInt::from(q).pow(e);
    let a = BigInt::from(q - 1).pow(e);
    let q2 = BigInt::from(q * q);
    let pairs = BigInt::from(q) * BigInt::from(q + 1) * BigInt::from((q - 1) * (q - 1))
        * BigInt::from(q - 2).pow(q as u32)
        * BigInt::from(q).pow(q as u32 + 2);
    let missed = &q2 * &a;
    let num = pairs + &missed * &d - &missed * &missed;
    over_power_of(num, q, 2 * e)
}

/// Probability that a fixed point lies in the set (`distinct = false`), or
/// that two fixed distinct points both do (`distinct = true`). Neither
/// depends on which points are chosen.
pub fn joint_point_probability(q: u64, distinct: bool) -> BigRational {
    assert!(q >= 2, "field order is at least 2");
    let one = BigRational::one();
    if distinct {
        one.clone() + miss_two(q) - miss_one(q) * BigRational::from_integer(2.into())
    } else {
        one - miss_one(q)
    }
}

/// Closest `f64` to an exact rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `Var(#) / (q ln q)²`, the Chebyshev bound on
/// `P{|#B - E(#)| ≥ q ln q}`.
pub fn chebyshev_bound(q: u64) -> f64 {
    let eps = q as f64 * (q as f64).ln();
    ratio_to_f64(&variance_cardinality(q)) / (eps * eps)
}

/// Renders as `"num/den"` in lowest terms; integers as `"num/1"`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub variance: BigRational,
}

/// Mean and variance of `#B` over all q^(q+1) configurations, exactly.
pub fn exact_moments_by_enumeration(field: &FieldTable) -> Result<ExactMoments, StatsError> {
    let q = field.q();
    let configs = (q as u64)
        .checked_pow(q as u32 + 1)
        .filter(|&n| n <= ENUMERATION_CAP)
        .ok_or(StatsError::TooLarge {
            configs: (q as u64).saturating_pow(q as u32 + 1),
            cap: ENUMERATION_CAP,
        })?;

    let lines = line_cells(field);
    let mut grid = vec![0u16; q * q];
    let mut sum = 0u128;
    let mut sum_sq = 0u128;

    // depth-first over slots; `covered` tracks cells with m_P ≥ 1
    fn walk(
        slot: usize,
        q: usize,
        covered: u64,
        lines: &[u16],
        grid: &mut [u16],
        sum: &mut u128,
        sum_sq: &mut u128,
    ) {
        if slot == q + 1 {
            *sum += covered as u128;
            *sum_sq += (covered as u128) * (covered as u128);
            return;
        }
        for b in 0..q {
            let cells = &lines[(slot * q + b) * q..(slot * q + b + 1) * q];
            let mut fresh = 0;
            for &c in cells {
                if grid[c as usize] == 0 {
                    fresh += 1;
                }
                grid[c as usize] += 1;
            }
            walk(slot + 1, q, covered + fresh, lines, grid, sum, sum_sq);
            for &c in cells {
                grid[c as usize] -= 1;
            }
        }
    }
    walk(0, q, 0, &lines, &mut grid, &mut sum, &mut sum_sq);

    let n = BigInt::from(configs);
    let s = BigInt::from(sum);
    let mean = frac(s.clone(), n.clone());
    let variance = frac(n.clone() * BigInt::from(sum_sq) - s.clone() * s, n.clone() * n);
    Ok(ExactMoments { mean, variance })
}

/// Cells of every line, indexed `(slot * q + b) * q + t`, slots in slope
/// order with the vertical direction last.
fn line_cells(field: &FieldTable) -> Vec<u16> {
    let q = field.q();
    let mut cells = Vec::with_capacity((q + 1) * q * q);
    for m in field.elements() {
        for b in field.elements() {
            for x in field.elements() {
                cells.push((x.idx() * q + field.add(field.mul(m, x), b).idx()) as u16);
            }
        }
    }
    for a in 0..q {
        cells.extend((0..q).map(|y| (a * q + y) as u16));
    }
    cells
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the generator used for sample `index` of a run seeded with
/// `seed`: the SplitMix64 output at position `index + 1` of the stream
/// started at `seed`.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Uniform draw from `0..q` by rejection on the top `⌈log2 q⌉` bits.
fn uniform_below(rng: &mut Xoshiro256StarStar, q: usize) -> usize {
    let bits = usize::BITS - (q - 1).leading_zeros();
    loop {
        let v = (rng.next_u64() >> (64 - bits)) as usize;
        if v < q {
            return v;
        }
    }
}

/// Intercepts of sample `index` in a run seeded with `seed`.
pub fn sample_intercepts(q: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(substream_seed(seed, index));
    (0..=q).map(|_| uniform_below(&mut rng, q)).collect()
}

/// The configuration drawn as sample `index` of a run seeded with `seed`.
pub fn sample_config(field: &FieldTable, seed: u64, index: u64) -> LineConfig<'_> {
    LineConfig::from_indices(field, &sample_intercepts(field.q(), seed, index))
        .expect("sampled intercepts lie in the field")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub q: usize,
    pub n: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    /// Unbiased (divides by n - 1); zero when n = 1.
    pub empirical_variance: f64,
    pub closed_form_mean: f64,
    pub closed_form_variance: f64,
    /// Fraction of samples with `|#B - (1 - 1/e) q²| ≥ 2 q ln q`.
    pub band_violation_fraction: f64,
}

/// `(1 - 1/e) q²` and `2 q ln q`.
pub fn concentration_band(q: usize) -> (f64, f64) {
    let qf = q as f64;
    ((1.0 - (-1.0f64).exp()) * qf * qf, 2.0 * qf * qf.ln())
}

#[derive(Default, Clone, Copy)]
struct Tally {
    sum: u128,
    sum_sq: u128,
    outside: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            outside: self.outside + other.outside,
        }
    }
}

pub fn monte_carlo(field: &FieldTable, n: u64, seed: u64) -> Result<SampleReport, StatsError> {
    let workers = rayon::current_num_threads();
    monte_carlo_with_workers(field, n, seed, workers)
}

/// Draws `n` configurations; sample `i` uses its own generator seeded from
/// `(seed, i)`, and the merge only adds integers, so the report does not
/// depend on `workers`.
pub fn monte_carlo_with_workers(
    field: &FieldTable,
    n: u64,
    seed: u64,
    workers: usize,
) -> Result<SampleReport, StatsError> {
    if n == 0 {
        return Err(StatsError::NoSamples);
    }
    if workers == 0 {
        return Err(StatsError::NoWorkers);
    }
    let q = field.q();
    let (center, half_width) = concentration_band(q);

    let cardinality = |marks: &mut Vec<u32>, stamp: &mut u32, index: u64| -> u64 {
        *stamp = stamp.wrapping_add(1);
        if *stamp == 0 {
            marks.iter_mut().for_each(|m| *m = 0);
            *stamp = 1;
        }
        let intercepts = sample_intercepts(q, seed, index);
        let mut count = 0;
        for (m, &b) in field.elements().zip(&intercepts) {
            let b: Felt = field.elem(b).expect("sampled intercept lies in the field");
            for x in field.elements() {
                let y = field.add(field.mul(m, x), b);
                let c = x.idx() * q + y.idx();
                if marks[c] != *stamp {
                    marks[c] = *stamp;
                    count += 1;
                }
            }
        }
        let a = intercepts[q];
        for mark in &mut marks[a * q..(a + 1) * q] {
            if *mark != *stamp {
                *mark = *stamp;
                count += 1;
            }
        }
        count
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| StatsError::Pool(e.to_string()))?;
    let tally = pool.install(|| {
        (0..n)
            .into_par_iter()
            .fold(
                || (vec![0u32; q * q], 0u32, Tally::default()),
                |(mut marks, mut stamp, t), i| {
                    let c = cardinality(&mut marks, &mut stamp, i);
                    let outside = ((c as f64 - center).abs() >= half_width) as u64;
                    let t = t.merge(Tally {
                        sum: c as u128,
                        sum_sq: (c as u128) * (c as u128),
                        outside,
                    });
                    (marks, stamp, t)
                },
            )
            .map(|(_, _, t)| t)
            .reduce(Tally::default, Tally::merge)
    });

    let nn = BigInt::from(n);
    let mean = frac(BigInt::from(tally.sum), nn.clone());
    let variance = if n > 1 {
        let s = BigInt::from(tally.sum);
        frac(
            nn.clone() * BigInt::from(tally.sum_sq) - s.clone() * s,
            nn.clone() * BigInt::from(n - 1),
        )
    } else {
        BigRational::zero()
    };

    Ok(SampleReport {
        q,
        n,
        seed,
        empirical_mean: ratio_to_f64(&mean),
        empirical_variance: ratio_to_f64(&variance),
        closed_form_mean: ratio_to_f64(&expected_cardinality(q as u64)),
        closed_form_variance: ratio_to_f64(&variance_cardinality(q as u64)),
        band_violation_fraction: tally.outside as f64 / n as f64,
    })
}
