//! Deterministic test-instance generation. Identical parameters and seed
//! always produce a structurally identical circuit, across runs and
//! platforms; the whole stream comes from the fixed LCG in [`crate::rng`].

use num_rational::BigRational;

use crate::circuit::{Circuit, LinearForm, ProductTerm};
use crate::error::{Error, Result};
use crate::rng::Lcg64;
use crate::scalar::{FieldDescriptor, Scalar};

#[derive(Debug, Clone)]
pub struct GenParams {
    pub nvars: usize,
    pub max_fan_in: usize,
    pub terms: usize,
    pub field: FieldDescriptor,
    pub force_zero: bool,
    pub seed: u64,
}

fn check_positive(params: &GenParams) -> Result<()> {
    if params.nvars == 0 || params.max_fan_in == 0 || params.terms == 0 {
        return Err(Error::InvalidParameter(
            "generator needs nvars, fan-in and term count all >= 1".into(),
        ));
    }
    Ok(())
}

fn draw_coeff(rng: &mut Lcg64, field: FieldDescriptor) -> Scalar {
    match field {
        // Genuinely complex draws, so conjugation-sensitive paths get
        // exercised rather than degenerating to the rational case.
        FieldDescriptor::Qi => Scalar::gaussian(
            BigRational::from_integer(rng.range_i64(-3, 3).into()),
            BigRational::from_integer(rng.range_i64(-3, 3).into()),
        ),
        _ => Scalar::integer(rng.range_i64(-3, 3), field),
    }
}

fn draw_form(rng: &mut Lcg64, nvars: usize, field: FieldDescriptor) -> LinearForm {
    LinearForm::new(
        draw_coeff(rng, field),
        (0..nvars).map(|_| draw_coeff(rng, field)).collect(),
    )
}

fn draw_term(rng: &mut Lcg64, nvars: usize, fan_in: usize, field: FieldDescriptor) -> ProductTerm {
    ProductTerm::new(
        draw_coeff(rng, field),
        (0..fan_in).map(|_| draw_form(rng, nvars, field)).collect(),
    )
}

/// Random circuit with coefficients in {-3..3} (reduced mod p over F_p).
///
/// Without `force_zero` the terms are independent draws with fan-ins in
/// 1..=max_fan_in (the last term is forced to the maximum so the declared
/// bound is realized). With `force_zero` every generated term is paired with
/// its negation, an identically-zero difference-of-squares pattern may be
/// mixed in, and the result is shuffled — the output provably computes the
/// zero polynomial.
pub fn generate(params: &GenParams) -> Result<Circuit> {
    check_positive(params)?;
    let mut rng = Lcg64::new(params.seed);
    let field = params.field;
    let d = params.max_fan_in;

    let mut fan_ins: Vec<usize> = (0..params.terms)
        .map(|_| 1 + rng.below(d as u64) as usize)
        .collect();
    if !fan_ins.contains(&d) {
        *fan_ins.last_mut().unwrap() = d;
    }
    let mut terms: Vec<ProductTerm> = fan_ins
        .into_iter()
        .map(|fan_in| draw_term(&mut rng, params.nvars, fan_in, field))
        .collect();

    if params.force_zero {
        let mut cancelled = Vec::with_capacity(2 * terms.len() + 3);
        for term in terms {
            let negated = ProductTerm::new(-&term.multiplier, term.forms.clone());
            cancelled.push(term);
            cancelled.push(negated);
        }
        if params.nvars >= 2 && d >= 2 && rng.below(2) == 1 {
            cancelled.extend(difference_of_squares_pattern(params.nvars, field));
        }
        rng.shuffle(&mut cancelled);
        terms = cancelled;
    }

    Circuit::new(field, params.nvars, terms)
}

/// (x1+x2)(x1-x2) - x1*x1 + x2*x2, padded to `nvars` variables.
fn difference_of_squares_pattern(nvars: usize, field: FieldDescriptor) -> Vec<ProductTerm> {
    let unit = |var: usize| {
        let mut coeffs = vec![Scalar::zero(field); nvars];
        coeffs[var] = Scalar::one(field);
        LinearForm::new(Scalar::zero(field), coeffs)
    };
    let x = unit(0);
    let y = unit(1);
    let x_plus_y = x.plus(&y);
    let x_minus_y = x.plus(&y.scaled(&Scalar::integer(-1, field)));
    vec![
        ProductTerm::new(Scalar::one(field), vec![x_plus_y, x_minus_y]),
        ProductTerm::new(Scalar::integer(-1, field), vec![x.clone(), x]),
        ProductTerm::new(Scalar::one(field), vec![y.clone(), y]),
    ]
}

/// Instance for scaling runs: every fan-in exactly `fan_in`, every scalar in
/// {1..3}. Over Q (and after homogenization) all coefficients are positive,
/// so the circuit is certainly nonzero and needs no oracle to confirm it.
pub fn generate_positive(
    nvars: usize,
    fan_in: usize,
    terms: usize,
    field: FieldDescriptor,
    seed: u64,
) -> Result<Circuit> {
    if nvars == 0 || fan_in == 0 || terms == 0 {
        return Err(Error::InvalidParameter(
            "generator needs nvars, fan-in and term count all >= 1".into(),
        ));
    }
    let mut rng = Lcg64::new(seed);
    let draw = |rng: &mut Lcg64| Scalar::integer(rng.range_i64(1, 3), field);
    let terms = (0..terms)
        .map(|_| {
            let mult = draw(&mut rng);
            let forms = (0..fan_in)
                .map(|_| {
                    LinearForm::new(draw(&mut rng), (0..nvars).map(|_| draw(&mut rng)).collect())
                })
                .collect();
            ProductTerm::new(mult, forms)
        })
        .collect();
    Circuit::new(field, nvars, terms)
}
