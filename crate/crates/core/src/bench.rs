//! Timing runs for the exponential-in-d engines, on deterministic
//! guaranteed-nonzero instances.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::gen::generate_positive;
use crate::hadamard::witness_all_ones;
use crate::pit::pit_prime_field;
use crate::scalar::FieldDescriptor;

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub fan_in: usize,
    pub elapsed: Duration,
    pub nonzero: bool,
}

/// Time one all-ones witness evaluation at the given shape. Generation and
/// homogenization happen outside the timed region.
pub fn bench_hadamard_once(
    nvars: usize,
    terms: usize,
    fan_in: usize,
    field: FieldDescriptor,
    seed: u64,
) -> Result<BenchRow> {
    let c = generate_positive(nvars, fan_in, terms, field, seed)?.homogenize();
    let started = Instant::now();
    let witness = witness_all_ones(&c, &c)?;
    let elapsed = started.elapsed();
    Ok(BenchRow {
        fan_in,
        elapsed,
        nonzero: !witness.is_zero(),
    })
}

/// Time the full prime-field pipeline (noncommutative lift plus zero test)
/// at the given shape.
pub fn bench_ncabp_once(
    nvars: usize,
    terms: usize,
    fan_in: usize,
    p: u64,
    seed: u64,
) -> Result<BenchRow> {
    let field = FieldDescriptor::prime_field(p)?;
    let c = generate_positive(nvars, fan_in, terms, field, seed)?;
    let started = Instant::now();
    let verdict = pit_prime_field(&c)?;
    let elapsed = started.elapsed();
    Ok(BenchRow {
        fan_in,
        elapsed,
        nonzero: verdict.verdict == crate::pit::Verdict::Nonzero,
    })
}
