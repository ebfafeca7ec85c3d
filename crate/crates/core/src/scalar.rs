//! Exact scalar arithmetic over the three supported coefficient fields:
//! rationals, Gaussian rationals, and prime fields F_p with p < 2^31.
//!
//! Everything is exact; there is no floating point anywhere in the engine.
//! A zero/nonzero decision is the whole output of an identity test, so a
//! single rounding error would be fatal.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (must stay below 2^31 so that products
/// of two residues fit in a u64 without splitting).
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// Which field a circuit's scalars live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDescriptor {
    /// Rational numbers.
    Q,
    /// Gaussian rationals, a + bi with a, b rational.
    Qi,
    /// Prime field of the given modulus.
    Fp(u64),
}

impl FieldDescriptor {
    /// Build a prime-field descriptor, checking primality by trial division.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldDescriptor::Fp(p))
    }

    /// Field characteristic; 0 for the characteristic-zero fields.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Q | FieldDescriptor::Qi => 0,
            FieldDescriptor::Fp(p) => *p,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Q => write!(f, "Q"),
            FieldDescriptor::Qi => write!(f, "Qi"),
            FieldDescriptor::Fp(p) => write!(f, "F {p}"),
        }
    }
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// One exact field element. The variant fixes the field; `Prime` carries its
/// modulus so values from different prime fields can never be confused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian { re: BigRational, im: BigRational },
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: FieldDescriptor) -> Scalar {
        Scalar::integer(0, field)
    }

    pub fn one(field: FieldDescriptor) -> Scalar {
        Scalar::integer(1, field)
    }

    /// Canonical embedding of a small integer.
    pub fn integer(v: i64, field: FieldDescriptor) -> Scalar {
        match field {
            FieldDescriptor::Q => Scalar::Rational(BigRational::from_integer(v.into())),
            FieldDescriptor::Qi => Scalar::Gaussian {
                re: BigRational::from_integer(v.into()),
                im: BigRational::zero(),
            },
            FieldDescriptor::Fp(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Embedding of an arbitrary-precision integer.
    pub fn big_integer(v: &BigInt, field: FieldDescriptor) -> Scalar {
        match field {
            FieldDescriptor::Q => Scalar::Rational(BigRational::from_integer(v.clone())),
            FieldDescriptor::Qi => Scalar::Gaussian {
                re: BigRational::from_integer(v.clone()),
                im: BigRational::zero(),
            },
            FieldDescriptor::Fp(p) => {
                let value = v.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                Scalar::Prime { value, modulus: p }
            }
        }
    }

    /// Rational `num/den` over Q. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    /// Gaussian rational from rational parts.
    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Gaussian { re, im }
    }

    /// Prime-field residue; reduces `v` mod `p`.
    pub fn residue(v: u64, p: u64) -> Scalar {
        Scalar::Prime {
            value: v % p,
            modulus: p,
        }
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Q,
            Scalar::Gaussian { .. } => FieldDescriptor::Qi,
            Scalar::Prime { modulus, .. } => FieldDescriptor::Fp(*modulus),
        }
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        self.field() == other.field()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gaussian { re, im } => re.is_one() && im.is_zero(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Fallible addition; reports `MixedFields` instead of panicking.
    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        if !self.same_field(other) {
            return Err(Error::MixedFields);
        }
        Ok(self + other)
    }

    /// Fallible multiplication; reports `MixedFields` instead of panicking.
    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        if !self.same_field(other) {
            return Err(Error::MixedFields);
        }
        Ok(self * other)
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Gaussian { re, im } => {
                // (a + bi)^-1 = (a - bi) / (a^2 + b^2)
                let norm = re * re + im * im;
                Scalar::Gaussian {
                    re: re / &norm,
                    im: -im / &norm,
                }
            }
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Complex conjugation: identity on Q and F_p, negates the imaginary
    /// part on Q(i).
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Gaussian { re, im } => Scalar::Gaussian {
                re: re.clone(),
                im: -im,
            },
            other => other.clone(),
        }
    }
}

/// The image of k! in the given field. May legitimately be zero over F_p
/// when k >= p; callers needing an invertible value must check.
pub fn factorial_in_field(k: u64, field: FieldDescriptor) -> Scalar {
    match field {
        FieldDescriptor::Fp(p) => {
            let mut acc = 1u64;
            for i in 1..=k {
                acc = acc * (i % p) % p;
                if acc == 0 {
                    break;
                }
            }
            Scalar::Prime {
                value: acc,
                modulus: p,
            }
        }
        _ => {
            let mut acc = BigInt::one();
            for i in 1..=k {
                acc *= BigInt::from(i);
            }
            Scalar::big_integer(&acc, field)
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid on (a, p); p prime and a != 0 mod p.
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime and a nonzero");
    old_s.rem_euclid(p as i64) as u64
}

fn assert_same_field(a: &Scalar, b: &Scalar) {
    assert!(
        a.same_field(b),
        "mixed fields: {} vs {}",
        a.field(),
        b.field()
    );
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        assert_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian { re: ar, im: ai }, Scalar::Gaussian { re: br, im: bi }) => {
                Scalar::Gaussian {
                    re: ar + br,
                    im: ai + bi,
                }
            }
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: _,
                },
            ) => Scalar::Prime {
                value: (a + b) % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        assert_same_field(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian { re: ar, im: ai }, Scalar::Gaussian { re: br, im: bi }) => {
                Scalar::Gaussian {
                    re: ar * br - ai * bi,
                    im: ar * bi + ai * br,
                }
            }
            (
                Scalar::Prime { value: a, modulus },
                Scalar::Prime {
                    value: b,
                    modulus: _,
                },
            ) => Scalar::Prime {
                value: a * b % modulus,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Gaussian { re, im } => Scalar::Gaussian { re: -re, im: -im },
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Canonical literal syntax, shared with the circuit text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Gaussian { re, im } => {
                if im.is_zero() {
                    return fmt_rational(re, f);
                }
                if re.is_zero() {
                    fmt_rational(im, f)?;
                    return write!(f, "i");
                }
                fmt_rational(re, f)?;
                if im.is_positive() {
                    write!(f, "+")?;
                }
                fmt_rational(im, f)?;
                write!(f, "i")
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}
