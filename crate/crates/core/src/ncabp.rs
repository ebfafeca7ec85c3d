//! Layered noncommutative algebraic branching programs and the
//! deterministic zero test that drives the finite-field pipeline.
//!
//! An ABP here is a layered edge-labeled DAG with one source and one sink;
//! every source-to-sink path multiplies its labels in layer order, and the
//! program's polynomial is the sum over paths. Labels are constant-free
//! linear forms, so a depth-d program computes a homogeneous degree-d
//! noncommutative polynomial: xy and yx are distinct monomials.

use std::collections::BTreeSet;

use crate::circuit::{LinearForm, ProductTerm};
use crate::error::{Error, Result};
use crate::scalar::{FieldDescriptor, Scalar};

/// Edge in a layer transition: (from node, to node, label).
pub type Edge = (usize, usize, LinearForm);

#[derive(Debug, Clone)]
pub struct LayeredABP {
    field: FieldDescriptor,
    nvars: usize,
    /// Node counts per layer; first and last are always 1.
    layer_sizes: Vec<usize>,
    /// Edge lists per transition; `transitions[t]` connects layer t to t+1.
    transitions: Vec<Vec<Edge>>,
}

impl LayeredABP {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of layers of edges (= the degree of the program).
    pub fn depth(&self) -> usize {
        self.transitions.len()
    }

    /// Maximum layer size.
    pub fn width(&self) -> usize {
        self.layer_sizes.iter().copied().max().unwrap_or(1)
    }

    pub fn transitions(&self) -> &[Vec<Edge>] {
        &self.transitions
    }
}

/// Build the parallel-path ABP for a list of product terms read as
/// noncommutative words: one internal path per term, the term's t-th form
/// labeling the path's t-th edge, and the multiplier folded into the first
/// edge's label.
pub fn build_ncabp(terms: &[ProductTerm], nvars: usize) -> Result<LayeredABP> {
    let Some(first) = terms.first() else {
        return Err(Error::InvalidParameter(
            "a branching program needs at least one term".into(),
        ));
    };
    let d = first.fan_in();
    if terms.iter().any(|t| t.fan_in() != d) {
        return Err(Error::NonuniformFanIn);
    }
    for term in terms {
        if !term.is_constant_free() {
            return Err(Error::NotHomogeneous);
        }
        if term.forms.iter().any(|f| f.nvars() != nvars) {
            return Err(Error::InvalidParameter(
                "form arity disagrees with the variable count".into(),
            ));
        }
    }
    let field = first.multiplier.field();
    let s = terms.len();

    let mut layer_sizes = vec![1];
    layer_sizes.extend(std::iter::repeat_n(s, d.saturating_sub(1)));
    layer_sizes.push(1);

    let mut transitions: Vec<Vec<Edge>> = Vec::with_capacity(d);
    for t in 0..d {
        let mut edges = Vec::with_capacity(s);
        for (k, term) in terms.iter().enumerate() {
            let label = if t == 0 {
                term.forms[0].scaled(&term.multiplier)
            } else {
                term.forms[t].clone()
            };
            let from = if t == 0 { 0 } else { k };
            let to = if t == d - 1 { 0 } else { k };
            edges.push((from, to, label));
        }
        transitions.push(edges);
    }
    Ok(LayeredABP {
        field,
        nvars,
        layer_sizes,
        transitions,
    })
}

/// Coefficient of one length-d word, by multiplying per-layer transfer
/// matrices restricted to the word's variable at each position. Test oracle
/// for the noncommutative semantics.
pub fn nc_word_coefficient(abp: &LayeredABP, word: &[usize]) -> Result<Scalar> {
    if word.len() != abp.depth() {
        return Err(Error::WordLengthMismatch {
            expected: abp.depth(),
            found: word.len(),
        });
    }
    let mut vec = vec![Scalar::one(abp.field)];
    for (t, &var) in word.iter().enumerate() {
        let mut next = vec![Scalar::zero(abp.field); abp.layer_sizes[t + 1]];
        for (from, to, label) in &abp.transitions[t] {
            let coeff = &label.coeffs[var];
            if !coeff.is_zero() && !vec[*from].is_zero() {
                next[*to] += &(&vec[*from] * coeff);
            }
        }
        vec = next;
    }
    Ok(vec.swap_remove(0))
}

/// Deterministic zero test: true iff the ABP's noncommutative polynomial is
/// identically zero.
///
/// Layer by layer it maintains a basis, of size at most the layer width, for
/// the row space of the (words x nodes) coefficient matrix: every length-t
/// word's coefficient vector over layer-t nodes is a linear combination of
/// the basis vectors. Extending a word by one variable acts linearly on its
/// vector, so pushing each basis vector through each variable's transfer
/// matrix spans the next layer's row space, and exact Gaussian elimination
/// prunes the candidates back to an independent set. At the sink layer the
/// polynomial is zero iff no nonzero vector survives.
pub fn raz_shpilka_is_zero(abp: &LayeredABP) -> bool {
    // (witness word, coefficient vector); words are carried for diagnostics.
    let mut basis: Vec<(Vec<usize>, Vec<Scalar>)> =
        vec![(Vec::new(), vec![Scalar::one(abp.field)])];
    for t in 0..abp.depth() {
        let to_size = abp.layer_sizes[t + 1];
        let edges = &abp.transitions[t];
        let active: BTreeSet<usize> = edges
            .iter()
            .flat_map(|(_, _, label)| {
                label
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, _)| k)
            })
            .collect();
        let mut reduced: Vec<(usize, Vec<usize>, Vec<Scalar>)> = Vec::new();
        for (word, vec) in &basis {
            for &var in &active {
                let mut next = vec![Scalar::zero(abp.field); to_size];
                for (from, to, label) in edges {
                    let coeff = &label.coeffs[var];
                    if !coeff.is_zero() && !vec[*from].is_zero() {
                        next[*to] += &(&vec[*from] * coeff);
                    }
                }
                if let Some(pair) = reduce_against(&mut next, &reduced) {
                    let mut witness = word.clone();
                    witness.push(var);
                    reduced.push((pair, witness, next));
                    assert!(reduced.len() <= to_size, "basis exceeded the layer width");
                }
            }
        }
        basis = reduced.into_iter().map(|(_, w, v)| (w, v)).collect();
        if basis.is_empty() {
            return true;
        }
    }
    // Sink layer: every surviving basis vector is nonzero by construction.
    basis.is_empty()
}

/// Eliminate `vec` against the pivoted rows; if a nonzero residue remains,
/// normalize its pivot to 1 and return the pivot column.
fn reduce_against(vec: &mut [Scalar], rows: &[(usize, Vec<usize>, Vec<Scalar>)]) -> Option<usize> {
    for (pivot, _, row) in rows {
        let factor = vec[*pivot].clone();
        if factor.is_zero() {
            continue;
        }
        for (slot, r) in vec.iter_mut().zip(row) {
            *slot = &*slot - &(&factor * r);
        }
    }
    let pivot = vec.iter().position(|c| !c.is_zero())?;
    let inv = vec[pivot].inverse().expect("pivot is nonzero");
    for slot in vec.iter_mut() {
        *slot = &*slot * &inv;
    }
    Some(pivot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::rng::Lcg64;

    fn q(v: i64) -> Scalar {
        Scalar::integer(v, FieldDescriptor::Q)
    }

    fn qform(coeffs: &[i64]) -> LinearForm {
        LinearForm::new(
            Scalar::zero(FieldDescriptor::Q),
            coeffs.iter().map(|&c| q(c)).collect(),
        )
    }

    fn word_term(mult: i64, vars: &[usize], nvars: usize) -> ProductTerm {
        let forms = vars
            .iter()
            .map(|&v| {
                let mut coeffs = vec![0i64; nvars];
                coeffs[v] = 1;
                qform(&coeffs)
            })
            .collect();
        ProductTerm::new(q(mult), forms)
    }

    #[test]
    fn single_path_word_coefficients() {
        let abp = build_ncabp(&[word_term(1, &[0, 1], 2)], 2).unwrap();
        assert_eq!(abp.depth(), 2);
        assert_eq!(abp.width(), 1);
        assert_eq!(nc_word_coefficient(&abp, &[0, 1]).unwrap(), q(1));
        assert_eq!(nc_word_coefficient(&abp, &[1, 0]).unwrap(), q(0));
    }

    #[test]
    fn cancelling_terms_give_zero_program() {
        let terms = [word_term(1, &[0, 1], 2), word_term(-1, &[0, 1], 2)];
        let abp = build_ncabp(&terms, 2).unwrap();
        for word in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert_eq!(nc_word_coefficient(&abp, &word).unwrap(), q(0));
        }
        assert!(raz_shpilka_is_zero(&abp));
    }

    #[test]
    fn commutator_is_nonzero() {
        let terms = [word_term(1, &[0, 1], 2), word_term(-1, &[1, 0], 2)];
        let abp = build_ncabp(&terms, 2).unwrap();
        assert_eq!(nc_word_coefficient(&abp, &[0, 1]).unwrap(), q(1));
        assert_eq!(nc_word_coefficient(&abp, &[1, 0]).unwrap(), q(-1));
        assert!(!raz_shpilka_is_zero(&abp));
    }

    #[test]
    fn mixed_form_path() {
        // (x+y) tensor x: the word yx has coefficient 1.
        let term = ProductTerm::new(q(1), vec![qform(&[1, 1]), qform(&[1, 0])]);
        let abp = build_ncabp(&[term], 2).unwrap();
        assert_eq!(nc_word_coefficient(&abp, &[1, 0]).unwrap(), q(1));
        assert_eq!(nc_word_coefficient(&abp, &[0, 0]).unwrap(), q(1));
        assert_eq!(nc_word_coefficient(&abp, &[0, 1]).unwrap(), q(0));
    }

    #[test]
    fn multiplier_is_folded_into_first_edge() {
        let abp = build_ncabp(&[word_term(3, &[0, 0], 1)], 1).unwrap();
        assert_eq!(nc_word_coefficient(&abp, &[0, 0]).unwrap(), q(3));
    }

    #[test]
    fn depth_one_programs() {
        let terms = [word_term(2, &[0], 2), word_term(-2, &[0], 2)];
        let abp = build_ncabp(&terms, 2).unwrap();
        assert_eq!(abp.depth(), 1);
        assert!(raz_shpilka_is_zero(&abp));
        let abp = build_ncabp(&[word_term(5, &[1], 2)], 2).unwrap();
        assert_eq!(nc_word_coefficient(&abp, &[1]).unwrap(), q(5));
        assert!(!raz_shpilka_is_zero(&abp));
    }

    #[test]
    fn construction_errors() {
        let uneven = [word_term(1, &[0], 2), word_term(1, &[0, 1], 2)];
        assert!(matches!(
            build_ncabp(&uneven, 2),
            Err(Error::NonuniformFanIn)
        ));
        assert!(build_ncabp(&[], 2).is_err());
        let affine = ProductTerm::new(q(1), vec![LinearForm::new(q(1), vec![q(1)])]);
        assert!(matches!(
            build_ncabp(&[affine], 1),
            Err(Error::NotHomogeneous)
        ));
    }

    #[test]
    fn word_length_checked() {
        let abp = build_ncabp(&[word_term(1, &[0, 1], 2)], 2).unwrap();
        assert_eq!(
            nc_word_coefficient(&abp, &[0]),
            Err(Error::WordLengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    fn random_terms(rng: &mut Lcg64, field: FieldDescriptor) -> (Vec<ProductTerm>, usize, usize) {
        let nvars = 1 + rng.below(3) as usize;
        let d = 1 + rng.below(3) as usize;
        let s = 1 + rng.below(3) as usize;
        let terms = (0..s)
            .map(|_| {
                let mult = Scalar::integer(rng.range_i64(-3, 3), field);
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
                ProductTerm::new(mult, forms)
            })
            .collect();
        (terms, nvars, d)
    }

    fn all_words_zero(abp: &LayeredABP, nvars: usize, d: usize) -> bool {
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

    #[test]
    fn zero_test_matches_exhaustive_word_oracle() {
        let mut rng = Lcg64::new(31);
        let f5 = FieldDescriptor::prime_field(5).unwrap();
        for i in 0..80 {
            let field = if i % 2 == 0 { FieldDescriptor::Q } else { f5 };
            let (terms, nvars, d) = random_terms(&mut rng, field);
            let abp = build_ncabp(&terms, nvars).unwrap();
            assert_eq!(
                raz_shpilka_is_zero(&abp),
                all_words_zero(&abp, nvars, d),
                "terms: {terms:?}"
            );
        }
    }

    #[test]
    fn word_coefficients_reproduce_commutative_evaluation() {
        let mut rng = Lcg64::new(37);
        for _ in 0..30 {
            let (terms, nvars, d) = random_terms(&mut rng, FieldDescriptor::Q);
            let abp = build_ncabp(&terms, nvars).unwrap();
            let point: Vec<Scalar> = (0..nvars).map(|_| q(rng.range_i64(-3, 3))).collect();
            // Sum over all words of coeff(word) * prod of point values.
            let mut sum = Scalar::zero(FieldDescriptor::Q);
            let mut word = vec![0usize; d];
            'outer: loop {
                let coeff = nc_word_coefficient(&abp, &word).unwrap();
                if !coeff.is_zero() {
                    let mut weight = coeff;
                    for &v in &word {
                        weight = &weight * &point[v];
                    }
                    sum += &weight;
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break 'outer;
                    }
                    word[i] += 1;
                    if word[i] < nvars {
                        break;
                    }
                    word[i] = 0;
                    i += 1;
                }
            }
            let direct = Circuit::new(FieldDescriptor::Q, nvars, terms)
                .unwrap()
                .evaluate(&point)
                .unwrap();
            assert_eq!(sum, direct);
        }
    }
}
