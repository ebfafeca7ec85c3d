//! Acceptance suite: the release gates for the engine, one line per
//! criterion. Runs as a plain binary (`harness = false`) so the criteria
//! execute strictly in order and their timing is not polluted by
//! concurrent tests; `cargo test --test acceptance` prints the table.
//!
//! Everything is oracle-anchored: the deterministic pipelines are compared
//! against full expansion, brute-force permanents and exhaustive word
//! enumeration on seeded instance sweeps, exactly — no tolerances anywhere
//! except the wall-clock bounds of the scaling criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use sps_pit::bench::bench_hadamard_once;
use sps_pit::circuit::Monomial;
use sps_pit::gen::{generate, GenParams};
use sps_pit::pit::Verdict;
use sps_pit::rng::Lcg64;
use sps_pit::scalar::factorial_in_field;
use sps_pit::{
    brute_permanent, build_ncabp, expand, hadamard_circuits, is_zero_oracle, nc_word_coefficient,
    pit_complex, pit_prime_field, pit_rational, raz_shpilka_is_zero, ryser_expand, ryser_permanent,
    witness_all_ones, Circuit, Error, FieldDescriptor, FormMatrix, LinearForm, ProductTerm, Scalar,
};

type CriterionResult = Result<String, String>;
type Criterion = (&'static str, fn() -> CriterionResult);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn main() {
    let criteria: &[Criterion] = &[
        ("oracle equivalence over Q", oracle_equivalence_q),
        ("oracle equivalence over Qi", oracle_equivalence_qi),
        (
            "oracle equivalence over prime fields",
            oracle_equivalence_fp,
        ),
        ("scaled Hadamard coefficient law", coefficient_law),
        ("Ryser permanent vs brute force", ryser_vs_brute),
        ("witness equals oracle square sum", witness_identity),
        ("row-matrix permanent identity", row_matrix_identity),
        ("branching-program test vs word oracle", abp_vs_word_oracle),
        ("characteristic hypothesis guard", characteristic_guard),
        ("exponential scaling trend", scaling_trend),
    ];
    let total = criteria.len();
    let suite_started = Instant::now();
    let mut failures = 0;
    for (idx, (name, criterion)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion));
        let elapsed = started.elapsed().as_secs_f64();
        match outcome {
            Ok(Ok(detail)) => {
                println!(
                    "[{:>2}/{total}] PASS {name} ({elapsed:.1}s) — {detail}",
                    idx + 1
                );
            }
            Ok(Err(message)) => {
                failures += 1;
                println!(
                    "[{:>2}/{total}] FAIL {name} ({elapsed:.1}s) — {message}",
                    idx + 1
                );
            }
            Err(panic) => {
                failures += 1;
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".to_string());
                println!(
                    "[{:>2}/{total}] FAIL {name} ({elapsed:.1}s) — panicked: {message}",
                    idx + 1
                );
            }
        }
    }
    println!(
        "acceptance: {}/{total} criteria passed in {:.1}s",
        total - failures,
        suite_started.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

/// Seeded sweep of circuit shapes with n, d, s cycling through 1..=4.
fn instances(
    count: usize,
    base_seed: u64,
    field: FieldDescriptor,
    force_zero: bool,
) -> Vec<Circuit> {
    (0..count)
        .map(|i| {
            generate(&GenParams {
                nvars: 1 + i % 4,
                max_fan_in: 1 + (i / 4) % 4,
                terms: 1 + (i / 16) % 4,
                field,
                force_zero,
                seed: base_seed + i as u64,
            })
            .expect("generator parameters are valid")
        })
        .collect()
}

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if slot + 1 == current.len() {
            current[slot] = left;
            out.push(Monomial(current.clone()));
            return;
        }
        for e in 0..=left {
            current[slot] = e;
            rec(slot + 1, left - e, current, out);
        }
    }
    let mut out = Vec::new();
    rec(0, degree, &mut vec![0; nvars], &mut out);
    out
}

/// Criterion: on >= 500 seeded random circuits plus >= 100 forced zeros over
/// Q, the deterministic verdict equals the expansion oracle, exactly.
fn oracle_equivalence_q() -> CriterionResult {
    let mut circuits = instances(500, 0xA11CE, FieldDescriptor::Q, false);
    circuits.extend(instances(100, 0x5EED0, FieldDescriptor::Q, true));
    let mut zeros = 0;
    for (i, c) in circuits.iter().enumerate() {
        let verdict = pit_rational(c).expect("pipeline runs");
        let oracle_zero = is_zero_oracle(c).expect("oracle runs");
        ensure!(
            (verdict.verdict == Verdict::Zero) == oracle_zero,
            "instance {i}: verdict {} but oracle zero = {oracle_zero}",
            verdict.verdict
        );
        zeros += oracle_zero as usize;
    }
    Ok(format!(
        "600 instances, {zeros} of them zero, verdicts all agree"
    ))
}

/// Criterion: the same sweep over Qi; additionally the witness is always a
/// real, non-negative scalar.
fn oracle_equivalence_qi() -> CriterionResult {
    let mut circuits = instances(500, 0xA11CE, FieldDescriptor::Qi, false);
    circuits.extend(instances(100, 0x5EED0, FieldDescriptor::Qi, true));
    let mut zeros = 0;
    for (i, c) in circuits.iter().enumerate() {
        let verdict = pit_complex(c).expect("pipeline runs");
        let oracle_zero = is_zero_oracle(c).expect("oracle runs");
        ensure!(
            (verdict.verdict == Verdict::Zero) == oracle_zero,
            "instance {i}: verdict {} but oracle zero = {oracle_zero}",
            verdict.verdict
        );
        match verdict
            .witness
            .as_ref()
            .expect("hadamard path has a witness")
        {
            Scalar::Gaussian { re, im } => {
                ensure!(
                    num_traits::Zero::is_zero(im) && !num_traits::Signed::is_negative(re),
                    "instance {i}: witness not a non-negative real"
                );
            }
            other => return Err(format!("instance {i}: witness {other:?} not Gaussian")),
        }
        zeros += oracle_zero as usize;
    }
    Ok(format!(
        "600 instances, {zeros} of them zero, witnesses all real and non-negative"
    ))
}

/// Criterion: over each p in {5, 7, 11, 13}, >= 200 random circuits with
/// d < p plus >= 50 forced zeros match the oracle exactly.
fn oracle_equivalence_fp() -> CriterionResult {
    let mut checked = 0;
    let mut zeros = 0;
    for p in [5u64, 7, 11, 13] {
        let field = FieldDescriptor::prime_field(p).expect("prime");
        let mut circuits = instances(200, 0xF00D + p, field, false);
        circuits.extend(instances(50, 0xFACE + p, field, true));
        for (i, c) in circuits.iter().enumerate() {
            ensure!(c.max_fan_in() < p as usize, "instance shape violates d < p");
            let verdict = pit_prime_field(c).expect("pipeline runs");
            let oracle_zero = is_zero_oracle(c).expect("oracle runs");
            ensure!(
                (verdict.verdict == Verdict::Zero) == oracle_zero,
                "p={p} instance {i}: verdict {} but oracle zero = {oracle_zero}",
                verdict.verdict
            );
            zeros += oracle_zero as usize;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} instances across 4 primes, {zeros} of them zero, verdicts all agree"
    ))
}

/// Criterion: for >= 100 random homogeneous pairs, every monomial
/// coefficient of the constructed Hadamard product equals
/// m! * [m]c1 * [m]c2 read from the oracle.
fn coefficient_law() -> CriterionResult {
    let mut pairs = 0;
    let mut monomials = 0;
    for i in 0..100usize {
        let nvars = 1 + i % 3;
        let fan_in = 1 + (i / 3) % 3;
        let terms = 1 + (i / 9) % 3;
        let field = if i % 2 == 0 {
            FieldDescriptor::Q
        } else {
            FieldDescriptor::prime_field(7).expect("prime")
        };
        let params = |seed| GenParams {
            nvars,
            max_fan_in: fan_in,
            terms,
            field,
            force_zero: false,
            seed,
        };
        let c1 = generate(&params(0xCAFE + i as u64)).unwrap().homogenize();
        let c2 = generate(&params(0xD00D + i as u64)).unwrap().homogenize();
        let product = hadamard_circuits(&c1, &c2).expect("construction runs");
        let e1 = expand(&c1).unwrap();
        let e2 = expand(&c2).unwrap();
        let ep = expand(&product).unwrap();
        for m in monomials_of_degree(c1.nvars(), fan_in as u32) {
            let expected = &(&m.factorial_in(field) * &e1.coefficient(&m)) * &e2.coefficient(&m);
            ensure!(
                ep.coefficient(&m) == expected,
                "pair {i}: coefficient law fails on {m:?}"
            );
            monomials += 1;
        }
        // No stray monomials of other degrees either.
        ensure!(
            ep.entries().all(|(m, _)| m.degree() == fan_in as u32),
            "pair {i}: product has monomials of the wrong degree"
        );
        pairs += 1;
    }
    Ok(format!(
        "{pairs} pairs, {monomials} monomial coefficients checked"
    ))
}

/// Criterion: Ryser and brute-force permanents agree exactly on >= 200
/// random matrices for every dimension 1..=7, over Q and over F_13.
fn ryser_vs_brute() -> CriterionResult {
    let mut rng = Lcg64::new(0x9E3779B9);
    let mut checked = 0;
    for dim in 1..=7usize {
        for case in 0..200 {
            let matrix: Vec<Vec<Scalar>> = if case % 2 == 0 {
                (0..dim)
                    .map(|_| {
                        (0..dim)
                            .map(|_| {
                                Scalar::Rational(num_rational::BigRational::new(
                                    rng.range_i64(-9, 9).into(),
                                    rng.range_i64(1, 4).into(),
                                ))
                            })
                            .collect()
                    })
                    .collect()
            } else {
                (0..dim)
                    .map(|_| {
                        (0..dim)
                            .map(|_| Scalar::residue(rng.below(13), 13))
                            .collect()
                    })
                    .collect()
            };
            let ryser = ryser_permanent(&matrix).expect("ryser runs");
            let brute = brute_permanent(&matrix).expect("brute force runs");
            ensure!(
                ryser == brute,
                "dim {dim} case {case}: ryser {ryser:?} != brute {brute:?}"
            );
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} matrices (dims 1..7, Q and F_13), all equal"
    ))
}

/// Criterion: on every instance of the first sweep, the all-ones witness of
/// the homogenized circuit equals sum over monomials of m! * [m]c ^ 2 read
/// from the oracle expansion.
fn witness_identity() -> CriterionResult {
    let mut circuits = instances(500, 0xA11CE, FieldDescriptor::Q, false);
    circuits.extend(instances(100, 0x5EED0, FieldDescriptor::Q, true));
    for (i, c) in circuits.iter().enumerate() {
        let h = c.homogenize();
        let witness = witness_all_ones(&h, &h).expect("witness runs");
        let mut expected = Scalar::zero(FieldDescriptor::Q);
        for (m, coeff) in expand(&h).unwrap().entries() {
            expected = &expected + &(&m.factorial_in(FieldDescriptor::Q) * &(coeff * coeff));
        }
        ensure!(
            witness == expected,
            "instance {i}: witness {witness:?} != oracle sum {expected:?}"
        );
    }
    Ok("600 instances, witness equals the oracle square sum on each".to_string())
}

/// Criterion: expanding the permanent of the matrix whose every row is a
/// term's form list evaluates, commutatively, to d! times the term.
fn row_matrix_identity() -> CriterionResult {
    let mut rng = Lcg64::new(0x0DDBA11);
    let mut checked = 0;
    for i in 0..100usize {
        let field = match i % 4 {
            0 => FieldDescriptor::Q,
            1 => FieldDescriptor::prime_field(7).unwrap(),
            2 => FieldDescriptor::prime_field(11).unwrap(),
            _ => FieldDescriptor::prime_field(13).unwrap(),
        };
        let nvars = 1 + rng.below(3) as usize;
        let d = 1 + rng.below(4) as usize;
        let forms: Vec<LinearForm> = (0..d)
            .map(|_| {
                LinearForm::new(
                    Scalar::zero(field),
                    (0..nvars)
                        .map(|_| Scalar::integer(rng.range_i64(-3, 3), field))
                        .collect(),
                )
            })
            .collect();
        let multiplier = Scalar::integer(rng.range_i64(-3, 3), field);
        let term = ProductTerm::new(multiplier.clone(), forms.clone());

        let matrix = FormMatrix::new(vec![forms; d]).expect("rows are homogeneous");
        let mut expanded = ryser_expand(&matrix).expect("expansion runs");
        for t in &mut expanded {
            t.multiplier = &t.multiplier * &multiplier;
        }
        let as_circuit = Circuit::new(field, nvars, expanded).unwrap();

        let point: Vec<Scalar> = (0..nvars)
            .map(|_| Scalar::integer(rng.range_i64(-4, 4), field))
            .collect();
        let lhs = as_circuit.evaluate(&point).unwrap();
        let rhs = &factorial_in_field(d as u64, field) * &term.evaluate(&point);
        ensure!(
            lhs == rhs,
            "case {i}: permanent expansion evaluates to {lhs:?}, d! * P gives {rhs:?}"
        );
        checked += 1;
    }
    Ok(format!("{checked} random terms over Q, F_7, F_11, F_13"))
}

/// Criterion: the branching-program zero test agrees with exhaustive word
/// enumeration on >= 200 random word lists, plus the two canonical fixtures.
fn abp_vs_word_oracle() -> CriterionResult {
    fn word_term(mult: i64, vars: &[usize], nvars: usize, field: FieldDescriptor) -> ProductTerm {
        let forms = vars
            .iter()
            .map(|&v| {
                let mut coeffs = vec![Scalar::zero(field); nvars];
                coeffs[v] = Scalar::one(field);
                LinearForm::new(Scalar::zero(field), coeffs)
            })
            .collect();
        ProductTerm::new(Scalar::integer(mult, field), forms)
    }

    fn all_words_zero(abp: &sps_pit::LayeredABP, nvars: usize, d: usize) -> bool {
        let mut word = vec![0usize; d];
        loop {
            if !nc_word_coefficient(abp, &word).unwrap().is_zero() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == d {
                    return true;
                }
                word[i] += 1;
                if word[i] < nvars {
                    break;
                }
                word[i] = 0;
                i += 1;
            }
        }
    }

    // Fixtures: xy - xy is zero, xy - yx is not.
    let q = FieldDescriptor::Q;
    let cancel = [word_term(1, &[0, 1], 2, q), word_term(-1, &[0, 1], 2, q)];
    ensure!(
        raz_shpilka_is_zero(&build_ncabp(&cancel, 2).unwrap()),
        "xy - xy must test zero"
    );
    let commutator = [word_term(1, &[0, 1], 2, q), word_term(-1, &[1, 0], 2, q)];
    ensure!(
        !raz_shpilka_is_zero(&build_ncabp(&commutator, 2).unwrap()),
        "xy - yx must test nonzero"
    );

    let mut rng = Lcg64::new(0xABCD);
    let mut zeros = 0;
    for i in 0..200usize {
        let field = match i % 4 {
            0 => FieldDescriptor::Q,
            1 => FieldDescriptor::prime_field(5).unwrap(),
            2 => FieldDescriptor::prime_field(7).unwrap(),
            _ => FieldDescriptor::prime_field(13).unwrap(),
        };
        let nvars = 1 + rng.below(3) as usize;
        let d = 1 + rng.below(3) as usize;
        let s = 1 + rng.below(3) as usize;
        let terms: Vec<ProductTerm> = (0..s)
            .map(|_| {
                let forms = (0..d)
                    .map(|_| {
                        LinearForm::new(
                            Scalar::zero(field),
                            (0..nvars)
                                .map(|_| Scalar::integer(rng.range_i64(-3, 3), field))
                                .collect(),
                        )
                    })
                    .collect();
                ProductTerm::new(Scalar::integer(rng.range_i64(-3, 3), field), forms)
            })
            .collect();
        let abp = build_ncabp(&terms, nvars).expect("construction runs");
        let tested_zero = raz_shpilka_is_zero(&abp);
        let oracle_zero = all_words_zero(&abp, nvars, d);
        ensure!(
            tested_zero == oracle_zero,
            "case {i}: test says zero={tested_zero}, word oracle says zero={oracle_zero}"
        );
        zeros += oracle_zero as usize;
    }
    Ok(format!(
        "2 fixtures and 200 random word lists, {zeros} zero, all verdicts agree"
    ))
}

/// Criterion: over F_p with p <= d the prime-field pipeline reports the
/// failed hypothesis as an error and never produces a verdict.
fn characteristic_guard() -> CriterionResult {
    for (p, d) in [(2u64, 2usize), (3, 3), (3, 4), (5, 5), (5, 6), (13, 14)] {
        let field = FieldDescriptor::prime_field(p).unwrap();
        let form = LinearForm::new(Scalar::zero(field), vec![Scalar::one(field)]);
        let term = ProductTerm::new(Scalar::one(field), vec![form; d]);
        let c = Circuit::new(field, 1, vec![term]).unwrap();
        match pit_prime_field(&c) {
            Err(Error::UnsupportedCharacteristic { p: ep, d: ed }) => {
                ensure!(
                    ep == p && ed == d,
                    "guard reported wrong parameters ({ep}, {ed}) for ({p}, {d})"
                );
            }
            Err(other) => return Err(format!("p={p} d={d}: unexpected error {other:?}")),
            Ok(v) => {
                return Err(format!(
                    "p={p} d={d}: got verdict {} instead of the hypothesis error",
                    v.verdict
                ))
            }
        }
    }
    // Boundary: p = d + 1 is inside the hypothesis and must work.
    let field = FieldDescriptor::prime_field(5).unwrap();
    let form = LinearForm::new(Scalar::zero(field), vec![Scalar::one(field)]);
    let term = ProductTerm::new(Scalar::one(field), vec![form; 4]);
    let c = Circuit::new(field, 1, vec![term]).unwrap();
    ensure!(pit_prime_field(&c).is_ok(), "p = d + 1 must be accepted");
    Ok("p <= d rejected for 6 shapes, p = d + 1 accepted".to_string())
}

/// Criterion: the witness engine scales like 2^d — consecutive-d time
/// ratios stay within [1.5, 2.8] from d = 13 up — and the d = 20 instance
/// (n = 50, s = 10) finishes within 10 minutes.
fn scaling_trend() -> CriterionResult {
    let (nvars, terms, seed) = (50, 10, 1);
    let mut best: BTreeMap<usize, Duration> = BTreeMap::new();
    // Two sweeps, keeping the faster run per d, to damp scheduler noise.
    for _ in 0..2 {
        for d in 10..=18 {
            let row =
                bench_hadamard_once(nvars, terms, d, FieldDescriptor::Q, seed).expect("bench runs");
            ensure!(row.nonzero, "bench instance at d={d} must be nonzero");
            best.entry(d)
                .and_modify(|t| *t = (*t).min(row.elapsed))
                .or_insert(row.elapsed);
        }
    }
    let mut ratios = Vec::new();
    for d in 13..=17usize {
        let ratio = best[&(d + 1)].as_secs_f64() / best[&d].as_secs_f64();
        ratios.push(format!("{}->{}: {ratio:.2}", d, d + 1));
        ensure!(
            (1.5..=2.8).contains(&ratio),
            "ratio t({})/t({d}) = {ratio:.2} outside [1.5, 2.8]; times: {:?}",
            d + 1,
            best
        );
    }
    let big = bench_hadamard_once(nvars, terms, 20, FieldDescriptor::Q, seed).expect("bench runs");
    ensure!(big.nonzero, "d=20 instance must be nonzero");
    ensure!(
        big.elapsed < Duration::from_secs(600),
        "d=20 took {:.1}s, over the 600s bound",
        big.elapsed.as_secs_f64()
    );
    Ok(format!(
        "ratios {}; d=20 in {:.1}s",
        ratios.join(", "),
        big.elapsed.as_secs_f64()
    ))
}
