//! The depth-3 circuit model: sums of scalar-weighted products of affine
//! linear forms, plus homogenization and exact evaluation.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::scalar::{factorial_in_field, FieldDescriptor, Scalar};

/// Fan-in bound for the permutation-sum coefficient formula (d! permutations
/// are enumerated explicitly).
pub const PERM_SUM_MAX_FANIN: usize = 8;

/// An affine form c0 + c1*x1 + ... + cn*xn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Scalar,
    pub coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(constant: Scalar, coeffs: Vec<Scalar>) -> Self {
        LinearForm { constant, coeffs }
    }

    /// The zero form on `nvars` variables.
    pub fn zero(nvars: usize, field: FieldDescriptor) -> Self {
        LinearForm {
            constant: Scalar::zero(field),
            coeffs: vec![Scalar::zero(field); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant_free(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += &(c * x);
        }
        acc
    }

    /// Entrywise sum; both forms must have the same arity.
    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        debug_assert_eq!(self.nvars(), other.nvars());
        LinearForm {
            constant: &self.constant + &other.constant,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The form scaled by a field element.
    pub fn scaled(&self, k: &Scalar) -> LinearForm {
        LinearForm {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn conjugate(&self) -> LinearForm {
        LinearForm {
            constant: self.constant.conjugate(),
            coeffs: self.coeffs.iter().map(Scalar::conjugate).collect(),
        }
    }
}

/// One product gate: multiplier * L1 * L2 * ... * Ld. Form order is
/// significant; the noncommutative lift reads it left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    pub multiplier: Scalar,
    pub forms: Vec<LinearForm>,
}

impl ProductTerm {
    pub fn new(multiplier: Scalar, forms: Vec<LinearForm>) -> Self {
        ProductTerm { multiplier, forms }
    }

    pub fn fan_in(&self) -> usize {
        self.forms.len()
    }

    pub fn is_constant_free(&self) -> bool {
        self.forms.iter().all(LinearForm::is_constant_free)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.multiplier.clone();
        for form in &self.forms {
            if acc.is_zero() {
                break;
            }
            acc = &acc * &form.evaluate(point);
        }
        acc
    }

    pub fn conjugate(&self) -> ProductTerm {
        ProductTerm {
            multiplier: self.multiplier.conjugate(),
            forms: self.forms.iter().map(LinearForm::conjugate).collect(),
        }
    }
}

/// A depth-3 circuit: a sum of product terms over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    field: FieldDescriptor,
    nvars: usize,
    terms: Vec<ProductTerm>,
}

impl Circuit {
    /// Validates the structural invariants: at least one term, every term
    /// with at least one form, every form of arity `nvars`, and every scalar
    /// drawn from `field`.
    pub fn new(field: FieldDescriptor, nvars: usize, terms: Vec<ProductTerm>) -> Result<Circuit> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter(
                "a circuit needs at least one term".into(),
            ));
        }
        for term in &terms {
            if term.forms.is_empty() {
                return Err(Error::InvalidParameter(
                    "a product term needs at least one linear form".into(),
                ));
            }
            if term.multiplier.field() != field {
                return Err(Error::MixedFields);
            }
            for form in &term.forms {
                if form.nvars() != nvars {
                    return Err(Error::Arity {
                        line: 0,
                        expected: nvars,
                        found: form.nvars(),
                    });
                }
                if form.constant.field() != field || form.coeffs.iter().any(|c| c.field() != field)
                {
                    return Err(Error::MixedFields);
                }
            }
        }
        Ok(Circuit {
            field,
            nvars,
            terms,
        })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// Top fan-in s.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Max product fan-in d.
    pub fn max_fan_in(&self) -> usize {
        self.terms
            .iter()
            .map(ProductTerm::fan_in)
            .max()
            .unwrap_or(0)
    }

    /// True when every form is constant-free and every term has the same
    /// fan-in, i.e. every monomial the circuit produces has degree exactly d.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.max_fan_in();
        self.terms
            .iter()
            .all(|t| t.fan_in() == d && t.is_constant_free())
    }

    /// Exact evaluation at a point of matching arity and field.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, circuit has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|x| x.field() != self.field) {
            return Err(Error::MixedFields);
        }
        let mut acc = Scalar::zero(self.field);
        for term in &self.terms {
            acc += &term.evaluate(point);
        }
        Ok(acc)
    }

    /// Homogenization: introduce a fresh variable z (the last index), move
    /// every constant onto z, and pad shorter terms with bare z forms so
    /// that every term has fan-in exactly d. Setting z = 1 recovers the
    /// original polynomial; zeroness is preserved.
    pub fn homogenize(&self) -> Circuit {
        let d = self.max_fan_in();
        let nvars = self.nvars + 1;
        let z_index = self.nvars;
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let mut forms: Vec<LinearForm> = term
                    .forms
                    .iter()
                    .map(|form| {
                        let mut coeffs = form.coeffs.clone();
                        coeffs.push(form.constant.clone());
                        LinearForm::new(Scalar::zero(self.field), coeffs)
                    })
                    .collect();
                for _ in term.fan_in()..d {
                    let mut z = LinearForm::zero(nvars, self.field);
                    z.coeffs[z_index] = Scalar::one(self.field);
                    forms.push(z);
                }
                ProductTerm::new(term.multiplier.clone(), forms)
            })
            .collect();
        Circuit {
            field: self.field,
            nvars,
            terms,
        }
    }
}

/// A commutative monomial as an exponent vector over the circuit variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// m! — the product of the factorials of the exponents, in the field.
    pub fn factorial_in(&self, field: FieldDescriptor) -> Scalar {
        let mut acc = Scalar::one(field);
        for &e in &self.0 {
            acc = &acc * &factorial_in_field(u64::from(e), field);
        }
        acc
    }

    /// The monomial written out as a nondecreasing sequence of variable
    /// indices, e.g. x0^2 x2 -> [0, 0, 2].
    pub fn variable_sequence(&self) -> Vec<usize> {
        let mut seq = Vec::with_capacity(self.degree() as usize);
        for (var, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                seq.push(var);
            }
        }
        seq
    }
}

/// Coefficient of a monomial in a constant-free product term, by brute-force
/// summation over all d! orderings: the coefficient of m in mult * L1...Ld is
/// `mult / m! * sum over permutations of prod_j [x_i_j] L_sigma(j)`.
///
/// This is a desk-scale reference path, hence the small fan-in guard.
pub fn coefficient_via_perm(term: &ProductTerm, m: &Monomial) -> Result<Scalar> {
    let d = term.fan_in();
    if d > PERM_SUM_MAX_FANIN {
        return Err(Error::FanInTooLarge {
            fanin: d,
            bound: PERM_SUM_MAX_FANIN,
        });
    }
    if !term.is_constant_free() {
        return Err(Error::NotHomogeneous);
    }
    let field = term.multiplier.field();
    let m_fact = m.factorial_in(field);
    if m_fact.is_zero() {
        return Err(Error::NonInvertibleFactorial);
    }
    if m.degree() as usize != d {
        // A homogeneous degree-d product has no monomial of any other degree.
        return Ok(Scalar::zero(field));
    }
    let seq = m.variable_sequence();
    let mut total = Scalar::zero(field);
    for perm in (0..d).permutations(d) {
        let mut prod = Scalar::one(field);
        for (j, &sigma_j) in perm.iter().enumerate() {
            prod = &prod * &term.forms[sigma_j].coeffs[seq[j]];
            if prod.is_zero() {
                break;
            }
        }
        total += &prod;
    }
    Ok(&(&total * &m_fact.inverse().expect("checked nonzero")) * &term.multiplier)
}
