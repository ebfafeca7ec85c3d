//! Deterministic polynomial identity testing for depth-3 circuits whose
//! product gates have bounded fan-in d.
//!
//! A circuit is a sum of scalar-weighted products of affine linear forms
//! over Q, Q(i) or a prime field F_p. Over the characteristic-zero fields
//! the zero test evaluates the scaled Hadamard square of the circuit at the
//! all-ones point in 2^d * poly(n, s) exact operations; over F_p with p > d
//! it lifts the circuit to a noncommutative branching program and runs a
//! deterministic layer-by-layer zero test. A naive expansion oracle, a
//! brute-force permanent and a randomized evaluation check ship alongside
//! the engine so every pipeline can be validated independently at desk
//! scale.

pub mod bench;
pub mod circuit;
pub mod error;
pub mod format;
pub mod gen;
pub mod hadamard;
pub mod ncabp;
pub mod oracle;
pub mod pit;
pub mod rng;
pub mod scalar;

pub use circuit::{coefficient_via_perm, Circuit, LinearForm, Monomial, ProductTerm};
pub use error::{Error, Result};
pub use format::{parse_circuit, parse_matrix, serialize_circuit};
pub use hadamard::{
    conjugate_circuit, hadamard_circuits, hadamard_linear, hadamard_pair, ryser_expand,
    ryser_permanent, witness_all_ones, FormMatrix,
};
pub use ncabp::{build_ncabp, nc_word_coefficient, raz_shpilka_is_zero, LayeredABP};
pub use oracle::{
    brute_permanent, expand, is_zero_oracle, schwartz_zippel_test, DensePoly, SzVerdict,
};
pub use pit::{
    pit_auto, pit_complex, pit_prime_field, pit_rational, Pipeline, PitVerdict, Verdict,
};
pub use scalar::{factorial_in_field, FieldDescriptor, Scalar};
