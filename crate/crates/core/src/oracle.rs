//! Independent ground truth at desk scale: dense expansion of a circuit into
//! its monomial map, a brute-force permanent, and a randomized evaluation
//! check. Everything here is deliberately naive and shares nothing with the
//! production pipelines except scalar arithmetic, so a bug in one side
//! cannot cancel a bug in the other.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;

use crate::circuit::{Circuit, Monomial};
use crate::error::{Error, Result};
use crate::rng::Lcg64;
use crate::scalar::{FieldDescriptor, Scalar};

/// Guard on the potential dense size binomial(n + d, d).
pub const EXPANSION_GUARD: u64 = 1_000_000;

/// Dimension bound for permutation enumeration.
pub const BRUTE_PERMANENT_MAX_DIM: usize = 8;

/// Explicit monomial -> coefficient map. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: FieldDescriptor,
    nvars: usize,
    entries: BTreeMap<Monomial, Scalar>,
}

impl DensePoly {
    pub fn zero(field: FieldDescriptor, nvars: usize) -> Self {
        DensePoly {
            field,
            nvars,
            entries: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_monomials(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.entries.iter()
    }

    /// Coefficient of a monomial; zero when absent.
    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.entries
            .get(m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Accumulate one term, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: Monomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.nvars);
        match self.entries.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Entrywise sum of two expansions over the same variables.
    pub fn plus(&self, other: &DensePoly) -> DensePoly {
        let mut out = self.clone();
        for (m, c) in other.entries() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// One line per monomial: `<exponents space-separated> : <scalar>`,
    /// sorted lexicographically by exponent vector. The zero polynomial
    /// renders as a single comment line.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "# zero polynomial\n".to_string();
        }
        let mut out = String::new();
        for (m, c) in &self.entries {
            let exps = m.0.iter().map(|e| e.to_string()).join(" ");
            writeln!(out, "{exps} : {c}").unwrap();
        }
        out
    }
}

fn expansion_guard(nvars: usize, degree: usize) -> Result<()> {
    // binomial(n + d, d), with early exit once past the guard.
    let mut b: u128 = 1;
    for i in 1..=degree as u128 {
        b = b * (nvars as u128 + i) / i;
        if b > u128::from(EXPANSION_GUARD) {
            return Err(Error::TooLarge(format!(
                "dense expansion of {nvars} variables at degree {degree} exceeds {EXPANSION_GUARD} monomials"
            )));
        }
    }
    Ok(())
}

/// Fully expand a circuit into its monomial map.
pub fn expand(c: &Circuit) -> Result<DensePoly> {
    expansion_guard(c.nvars(), c.max_fan_in())?;
    let field = c.field();
    let nvars = c.nvars();
    let mut total = DensePoly::zero(field, nvars);
    for term in c.terms() {
        let mut poly: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        poly.insert(vec![0; nvars], term.multiplier.clone());
        for form in &term.forms {
            let mut next: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
            let bump = |exps: Vec<u32>, add: Scalar, map: &mut BTreeMap<Vec<u32>, Scalar>| {
                if add.is_zero() {
                    return;
                }
                let slot = map.entry(exps).or_insert_with(|| Scalar::zero(field));
                *slot += &add;
            };
            for (exps, coeff) in &poly {
                if !form.constant.is_zero() {
                    bump(exps.clone(), coeff * &form.constant, &mut next);
                }
                for (k, ck) in form.coeffs.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    let mut e = exps.clone();
                    e[k] += 1;
                    bump(e, coeff * ck, &mut next);
                }
            }
            poly = next;
        }
        for (exps, coeff) in poly {
            total.add_term(Monomial(exps), coeff);
        }
    }
    Ok(total)
}

/// True iff the circuit computes the identically zero polynomial, by full
/// expansion.
pub fn is_zero_oracle(c: &Circuit) -> Result<bool> {
    Ok(expand(c)?.is_zero())
}

/// Permanent by explicit enumeration of all permutations.
pub fn brute_permanent(matrix: &[Vec<Scalar>]) -> Result<Scalar> {
    let dim = matrix.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if dim > BRUTE_PERMANENT_MAX_DIM {
        return Err(Error::TooLarge(format!(
            "brute-force permanent limited to dimension {BRUTE_PERMANENT_MAX_DIM}, got {dim}"
        )));
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
    let mut total = Scalar::zero(field);
    for perm in (0..dim).permutations(dim) {
        let mut prod = Scalar::one(field);
        for (i, &j) in perm.iter().enumerate() {
            prod = &prod * &matrix[i][j];
            if prod.is_zero() {
                break;
            }
        }
        total += &prod;
    }
    Ok(total)
}

/// Verdict of the randomized check. Deliberately distinct from the
/// deterministic verdict type: this one can only ever claim "probably".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzVerdict {
    ProbablyZero,
    Nonzero,
}

/// Randomized evaluation check: evaluate at `trials` points with
/// coordinates drawn from `[0, max(2d, 64))` by the fixed LCG. Any nonzero
/// evaluation proves the circuit nonzero; all-zero evaluations only suggest
/// zero. Advisory only — the deterministic pipelines never call this.
pub fn schwartz_zippel_test(c: &Circuit, trials: u32, seed: u64) -> Result<SzVerdict> {
    let d = c.max_fan_in() as u64;
    let range = (2 * d).max(64);
    if let FieldDescriptor::Fp(p) = c.field() {
        if range > p {
            return Err(Error::FieldTooSmall {
                field_size: p,
                needed: range,
            });
        }
    }
    let mut rng = Lcg64::new(seed);
    for _ in 0..trials {
        let point: Vec<Scalar> = (0..c.nvars())
            .map(|_| Scalar::integer(rng.below(range) as i64, c.field()))
            .collect();
        if !c.evaluate(&point)?.is_zero() {
            return Ok(SzVerdict::Nonzero);
        }
    }
    Ok(SzVerdict::ProbablyZero)
}
