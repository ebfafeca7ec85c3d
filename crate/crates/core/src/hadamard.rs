//! Scaled Hadamard products of homogeneous circuits and the all-ones witness
//! evaluation.
//!
//! The scaled Hadamard product of f and g puts `m! * [m]f * [m]g` on each
//! monomial m. For a pair of product terms it is realized as the permanent of
//! the d x d matrix of coefficient-wise form products, which Ryser's formula
//! turns into 2^d - 1 new product terms. The witness path never materializes
//! those terms: it evaluates each pair's permanent numerically with Gray-code
//! subset enumeration, so one pair costs O(2^d * d) scalar operations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circuit::{Circuit, LinearForm, ProductTerm};
use crate::error::{Error, Result};
use crate::scalar::{FieldDescriptor, Scalar};

/// Fan-in bound for anything that enumerates 2^d subsets.
pub const RYSER_MAX_FANIN: usize = 30;

/// A square grid of constant-free linear forms over one variable set.
#[derive(Debug, Clone)]
pub struct FormMatrix {
    dim: usize,
    entries: Vec<Vec<LinearForm>>,
}

impl FormMatrix {
    pub fn new(entries: Vec<Vec<LinearForm>>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("empty form matrix".into()));
        }
        let nvars = entries[0][0].nvars();
        let field = entries[0][0].constant.field();
        for row in &entries {
            if row.len() != dim {
                return Err(Error::InvalidParameter("form matrix is not square".into()));
            }
            for form in row {
                if !form.is_constant_free() {
                    return Err(Error::NotHomogeneous);
                }
                if form.nvars() != nvars {
                    return Err(Error::InvalidParameter(
                        "form matrix entries disagree on variable count".into(),
                    ));
                }
                if form.constant.field() != field || form.coeffs.iter().any(|c| c.field() != field)
                {
                    return Err(Error::MixedFields);
                }
            }
        }
        Ok(FormMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Vec<LinearForm>] {
        &self.entries
    }
}

/// Scaled Hadamard product of two constant-free linear forms: on degree-1
/// monomials every m! is 1, so this is just the coefficient-wise product.
pub fn hadamard_linear(a: &LinearForm, b: &LinearForm) -> Result<LinearForm> {
    if !a.is_constant_free() || !b.is_constant_free() {
        return Err(Error::NotHomogeneous);
    }
    if a.nvars() != b.nvars() {
        return Err(Error::InvalidParameter(
            "forms disagree on variable count".into(),
        ));
    }
    if a.constant.field() != b.constant.field() {
        return Err(Error::MixedFields);
    }
    let field = a.constant.field();
    Ok(LinearForm::new(
        Scalar::zero(field),
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x.checked_mul(y))
            .collect::<Result<_>>()?,
    ))
}

/// Expand the permanent of a form matrix into 2^d - 1 product terms by
/// Ryser's inclusion-exclusion. The empty subset is skipped: its row sums
/// are all zero forms, so its product term is identically zero. The term for
/// a subset S carries multiplier (-1)^(d + |S|) and, in row order, the forms
/// `sum_{j in S} m[i][j]`.
pub fn ryser_expand(m: &FormMatrix) -> Result<Vec<ProductTerm>> {
    let d = m.dim;
    if d > RYSER_MAX_FANIN {
        return Err(Error::FanInTooLarge {
            fanin: d,
            bound: RYSER_MAX_FANIN,
        });
    }
    let field = m.entries[0][0].constant.field();
    let nvars = m.entries[0][0].nvars();
    let mut terms = Vec::with_capacity((1usize << d) - 1);
    for mask in 1u64..(1u64 << d) {
        let size = mask.count_ones() as usize;
        let sign = if (d + size).is_multiple_of(2) { 1 } else { -1 };
        let forms: Vec<LinearForm> = (0..d)
            .map(|i| {
                let mut sum = LinearForm::zero(nvars, field);
                for j in 0..d {
                    if mask >> j & 1 == 1 {
                        sum = sum.plus(&m.entries[i][j]);
                    }
                }
                sum
            })
            .collect();
        terms.push(ProductTerm::new(Scalar::integer(sign, field), forms));
    }
    Ok(terms)
}

/// Scaled Hadamard product of two homogeneous product terms of equal fan-in,
/// as a list of at most 2^d - 1 product terms.
pub fn hadamard_pair(p: &ProductTerm, q: &ProductTerm) -> Result<Vec<ProductTerm>> {
    if p.fan_in() != q.fan_in() {
        return Err(Error::FanInMismatch {
            left: p.fan_in(),
            right: q.fan_in(),
        });
    }
    let rows: Result<Vec<Vec<LinearForm>>> = p
        .forms
        .iter()
        .map(|a| q.forms.iter().map(|b| hadamard_linear(a, b)).collect())
        .collect();
    let matrix = FormMatrix::new(rows?)?;
    let scale = p.multiplier.checked_mul(&q.multiplier)?;
    let mut terms = ryser_expand(&matrix)?;
    for term in &mut terms {
        term.multiplier = &term.multiplier * &scale;
    }
    Ok(terms)
}

fn check_hadamard_compatible(c1: &Circuit, c2: &Circuit) -> Result<usize> {
    if c1.field() != c2.field() {
        return Err(Error::MixedFields);
    }
    if c1.nvars() != c2.nvars() {
        return Err(Error::InvalidParameter(
            "circuits disagree on variable count".into(),
        ));
    }
    if !c1.is_homogeneous() || !c2.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let (d1, d2) = (c1.max_fan_in(), c2.max_fan_in());
    if d1 != d2 {
        return Err(Error::FanInMismatch {
            left: d1,
            right: d2,
        });
    }
    if d1 > RYSER_MAX_FANIN {
        return Err(Error::FanInTooLarge {
            fanin: d1,
            bound: RYSER_MAX_FANIN,
        });
    }
    Ok(d1)
}

/// Scaled Hadamard product of two homogeneous circuits of the same degree,
/// materialized as a circuit with at most (2^d - 1) * s1 * s2 terms.
pub fn hadamard_circuits(c1: &Circuit, c2: &Circuit) -> Result<Circuit> {
    check_hadamard_compatible(c1, c2)?;
    let mut terms = Vec::new();
    for p in c1.terms() {
        for q in c2.terms() {
            terms.extend(hadamard_pair(p, q)?);
        }
    }
    Circuit::new(c1.field(), c1.nvars(), terms)
}

/// The circuit computing the coefficient-conjugated polynomial. Identity
/// over Q and F_p.
pub fn conjugate_circuit(c: &Circuit) -> Circuit {
    let terms = c.terms().iter().map(ProductTerm::conjugate).collect();
    Circuit::new(c.field(), c.nvars(), terms).expect("conjugation preserves validity")
}

/// (c1 o^s c2)(1, 1, ..., 1) without materializing the product circuit.
///
/// For each term pair the all-ones value of the form-product matrix entry
/// (i, j) is just the dot product of the two coefficient vectors, so the
/// pair contributes mult1 * mult2 * perm(M) for a numeric d x d matrix M,
/// evaluated by Gray-code Ryser. Exact arithmetic makes the accumulation
/// order irrelevant, so the pair loop is free to run in parallel.
///
/// Over Q the whole pair loop runs on scaled integers: both circuits'
/// coefficients are put over a common denominator up front, dot products
/// and row sums stay in machine words whenever the size bounds allow, and
/// one division by (D1*D2)^d at the end restores the exact rational value.
pub fn witness_all_ones(c1: &Circuit, c2: &Circuit) -> Result<Scalar> {
    let d = check_hadamard_compatible(c1, c2)?;
    let field = c1.field();
    if field == FieldDescriptor::Q {
        return Ok(Scalar::Rational(witness_all_ones_q(c1, c2, d)));
    }
    let pairs: Vec<(&ProductTerm, &ProductTerm)> = c1
        .terms()
        .iter()
        .filter(|p| !p.multiplier.is_zero())
        .flat_map(|p| {
            c2.terms()
                .iter()
                .filter(|q| !q.multiplier.is_zero())
                .map(move |q| (p, q))
        })
        .collect();
    let total = pairs
        .par_iter()
        .map(|(p, q)| {
            let matrix = dot_matrix(p, q, field);
            let perm = gray_permanent(&matrix, field);
            &(&p.multiplier * &q.multiplier) * &perm
        })
        .reduce(|| Scalar::zero(field), |a, b| &a + &b);
    Ok(total)
}

/// One circuit's live terms with all form coefficients scaled to integers
/// over a single denominator.
struct ScaledTerms {
    denom: BigInt,
    multipliers: Vec<BigRational>,
    /// [term][form][variable] scaled integer coefficient.
    coeffs: Vec<Vec<Vec<BigInt>>>,
    max_abs: BigInt,
}

fn scale_rational_terms(c: &Circuit) -> ScaledTerms {
    let rat = |s: &Scalar| match s {
        Scalar::Rational(r) => r.clone(),
        _ => unreachable!("caller checked the field"),
    };
    let live: Vec<&ProductTerm> = c
        .terms()
        .iter()
        .filter(|t| !t.multiplier.is_zero())
        .collect();
    let mut denom = BigInt::one();
    for term in &live {
        for form in &term.forms {
            for coeff in &form.coeffs {
                denom = denom.lcm(rat(coeff).denom());
            }
        }
    }
    let mut max_abs = BigInt::zero();
    let coeffs: Vec<Vec<Vec<BigInt>>> = live
        .iter()
        .map(|term| {
            term.forms
                .iter()
                .map(|form| {
                    form.coeffs
                        .iter()
                        .map(|coeff| {
                            let r = rat(coeff);
                            let v = r.numer() * &denom / r.denom();
                            let mag = v.abs();
                            if mag > max_abs {
                                max_abs = mag;
                            }
                            v
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    ScaledTerms {
        denom,
        multipliers: live.iter().map(|t| rat(&t.multiplier)).collect(),
        coeffs,
        max_abs,
    }
}

fn witness_all_ones_q(c1: &Circuit, c2: &Circuit, d: usize) -> BigRational {
    let s1 = scale_rational_terms(c1);
    let s2 = scale_rational_terms(c2);
    if s1.coeffs.is_empty() || s2.coeffs.is_empty() {
        return BigRational::zero();
    }
    let nvars = c1.nvars();

    // Dot products are bounded by nvars * max1 * max2 and row sums by d
    // times that; when everything fits in i64 the whole Gray-code loop
    // runs on machine integers.
    let dot_bound = BigInt::from(nvars) * &s1.max_abs * &s2.max_abs;
    let fits_i64 = s1.max_abs.to_i64().is_some()
        && s2.max_abs.to_i64().is_some()
        && (&dot_bound * BigInt::from(d)).to_i64().is_some();

    let pairs: Vec<(usize, usize)> = (0..s1.coeffs.len())
        .flat_map(|i| (0..s2.coeffs.len()).map(move |j| (i, j)))
        .collect();
    let numerator: BigRational = pairs
        .par_iter()
        .map(|&(i, j)| {
            let t1 = &s1.coeffs[i];
            let t2 = &s2.coeffs[j];
            let perm = if fits_i64 {
                let matrix: Vec<Vec<i64>> = t1
                    .iter()
                    .map(|a| {
                        t2.iter()
                            .map(|b| {
                                let mut acc = 0i64;
                                for (x, y) in a.iter().zip(b) {
                                    // Bounded by dot_bound, which fits.
                                    acc += x.to_i64().unwrap() * y.to_i64().unwrap();
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                gray_permanent_i64(&matrix)
            } else {
                let matrix: Vec<Vec<BigInt>> = t1
                    .iter()
                    .map(|a| {
                        t2.iter()
                            .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                            .collect()
                    })
                    .collect();
                let rows: Vec<&[BigInt]> = matrix.iter().map(|r| r.as_slice()).collect();
                gray_permanent_bigint(&rows)
            };
            (&s1.multipliers[i] * &s2.multipliers[j]) * BigRational::from_integer(perm)
        })
        .reduce(BigRational::zero, |a, b| a + b);
    numerator / BigRational::from_integer((&s1.denom * &s2.denom).pow(d as u32))
}

fn dot_matrix(p: &ProductTerm, q: &ProductTerm, field: FieldDescriptor) -> Vec<Vec<Scalar>> {
    p.forms
        .iter()
        .map(|a| {
            q.forms
                .iter()
                .map(|b| {
                    let mut acc = Scalar::zero(field);
                    for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                        if !x.is_zero() && !y.is_zero() {
                            acc += &(x * y);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Permanent of a numeric matrix by Ryser's formula with Gray-code subset
/// enumeration. Exact over all three fields; dimension capped at 30.
pub fn ryser_permanent(matrix: &[Vec<Scalar>]) -> Result<Scalar> {
    let dim = matrix.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if dim > RYSER_MAX_FANIN {
        return Err(Error::FanInTooLarge {
            fanin: dim,
            bound: RYSER_MAX_FANIN,
        });
    }
    let field = matrix[0][0].field();
    for row in matrix {
        if row.len() != dim {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        if row.iter().any(|e| e.field() != field) {
            return Err(Error::MixedFields);
        }
    }
    Ok(gray_permanent(matrix, field))
}

/// Dispatch on the field: prime fields and rationals get specialized
/// integer loops (this is the engine's hot spot); Gaussian rationals use
/// the generic scalar loop.
fn gray_permanent(matrix: &[Vec<Scalar>], field: FieldDescriptor) -> Scalar {
    match field {
        FieldDescriptor::Fp(p) => {
            let rows: Vec<Vec<u64>> = matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| match e {
                            Scalar::Prime { value, .. } => *value,
                            _ => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            Scalar::residue(gray_permanent_fp(&rows, p), p)
        }
        FieldDescriptor::Q => {
            let rats: Vec<&BigRational> = matrix
                .iter()
                .flatten()
                .map(|e| match e {
                    Scalar::Rational(r) => r,
                    _ => unreachable!(),
                })
                .collect();
            Scalar::Rational(gray_permanent_q(&rats, matrix.len()))
        }
        FieldDescriptor::Qi => gray_permanent_scalar(matrix, field),
    }
}

/// Generic exact Gray-code loop over scalars; the reference the fast paths
/// are tested against.
fn gray_permanent_scalar(matrix: &[Vec<Scalar>], field: FieldDescriptor) -> Scalar {
    let d = matrix.len();
    let mut rowsums = vec![Scalar::zero(field); d];
    let mut total = Scalar::zero(field);
    for k in 1u64..(1u64 << d) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let adding = gray >> j & 1 == 1;
        for (i, sum) in rowsums.iter_mut().enumerate() {
            let e = &matrix[i][j];
            *sum = if adding { &*sum + e } else { &*sum - e };
        }
        let mut prod = Scalar::one(field);
        for sum in &rowsums {
            if sum.is_zero() {
                prod = Scalar::zero(field);
                break;
            }
            prod = &prod * sum;
        }
        if prod.is_zero() {
            continue;
        }
        let positive = (d + gray.count_ones() as usize).is_multiple_of(2);
        if positive {
            total += &prod;
        } else {
            total += &(-&prod);
        }
    }
    total
}

fn gray_permanent_fp(rows: &[Vec<u64>], p: u64) -> u64 {
    let d = rows.len();
    let mut rowsums = vec![0u64; d];
    let mut total = 0u64;
    for k in 1u64..(1u64 << d) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let adding = gray >> j & 1 == 1;
        for (i, sum) in rowsums.iter_mut().enumerate() {
            let e = rows[i][j];
            *sum = if adding {
                (*sum + e) % p
            } else {
                (*sum + p - e) % p
            };
        }
        let mut prod = 1u64;
        for &sum in &rowsums {
            if sum == 0 {
                prod = 0;
                break;
            }
            prod = prod * sum % p;
        }
        if prod == 0 {
            continue;
        }
        if (d + gray.count_ones() as usize).is_multiple_of(2) {
            total = (total + prod) % p;
        } else {
            total = (total + p - prod) % p;
        }
    }
    total
}

/// Rational permanent: clear denominators once, run an integer loop, divide
/// by D^d at the end. When the scaled entries are word-sized the row sums
/// stay in i64 and products are built through i128 chunks, which keeps the
/// per-subset cost to a handful of machine operations plus one big-integer
/// accumulation.
fn gray_permanent_q(entries: &[&BigRational], dim: usize) -> BigRational {
    let mut denom = BigInt::one();
    for r in entries {
        denom = denom.lcm(r.denom());
    }
    let scaled: Vec<BigInt> = entries
        .iter()
        .map(|r| r.numer() * &denom / r.denom())
        .collect();
    let rows: Vec<&[BigInt]> = scaled.chunks(dim).collect();

    let fits_i64 = scaled.iter().all(|v| {
        v.to_i64()
            .map(|x| x.checked_mul(dim as i64).is_some())
            .unwrap_or(false)
    });
    let perm = if fits_i64 {
        let int_rows: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect())
            .collect();
        gray_permanent_i64(&int_rows)
    } else {
        gray_permanent_bigint(&rows)
    };
    BigRational::new(perm, denom.pow(dim as u32))
}

fn gray_permanent_i64(rows: &[Vec<i64>]) -> BigInt {
    let d = rows.len();
    let mut rowsums = vec![0i64; d];
    let mut total = BigInt::zero();
    let mut small: i128 = 0;
    let mut chunks: Vec<i128> = Vec::with_capacity(4);
    for k in 1u64..(1u64 << d) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        if gray >> j & 1 == 1 {
            for (i, sum) in rowsums.iter_mut().enumerate() {
                *sum += rows[i][j];
            }
        } else {
            for (i, sum) in rowsums.iter_mut().enumerate() {
                *sum -= rows[i][j];
            }
        }
        // Product of the d row sums, grown through i128 chunks so the
        // common case never touches the heap.
        chunks.clear();
        let mut cur: i128 = 1;
        let mut zero = false;
        for &sum in &rowsums {
            if sum == 0 {
                zero = true;
                break;
            }
            match cur.checked_mul(sum as i128) {
                Some(next) => cur = next,
                None => {
                    chunks.push(cur);
                    cur = sum as i128;
                }
            }
        }
        if zero {
            continue;
        }
        let negate = !(d + gray.count_ones() as usize).is_multiple_of(2);
        if chunks.is_empty() {
            let signed = if negate { -cur } else { cur };
            match small.checked_add(signed) {
                Some(v) => small = v,
                None => {
                    total += BigInt::from(small);
                    small = signed;
                }
            }
        } else {
            let mut prod = BigInt::from(cur);
            for c in &chunks {
                prod *= BigInt::from(*c);
            }
            if negate {
                total -= prod;
            } else {
                total += prod;
            }
        }
    }
    total + BigInt::from(small)
}

fn gray_permanent_bigint(rows: &[&[BigInt]]) -> BigInt {
    let d = rows.len();
    let mut rowsums = vec![BigInt::zero(); d];
    let mut total = BigInt::zero();
    for k in 1u64..(1u64 << d) {
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let adding = gray >> j & 1 == 1;
        for (i, sum) in rowsums.iter_mut().enumerate() {
            if adding {
                *sum += &rows[i][j];
            } else {
                *sum -= &rows[i][j];
            }
        }
        let mut prod = BigInt::one();
        let mut zero = false;
        for sum in &rowsums {
            if sum.is_zero() {
                zero = true;
                break;
            }
            prod *= sum;
        }
        if zero {
            continue;
        }
        if (d + gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}
