//! End-to-end deterministic identity-testing pipelines.
//!
//! Over Q the witness is (C o^s C)(1,...,1): the scaled Hadamard square has
//! only non-negative coefficients, so the circuit is zero exactly when the
//! witness is. Over Q(i) the square is taken against the conjugated circuit
//! and the witness is the sum of `m! * |[m]C|^2`, again zero iff C is. Over
//! F_p with p > d the circuit is lifted to a noncommutative polynomial whose
//! word coefficients are `m! * [m]C` — nonvanishing factors m! — and a layered
//! branching program test decides zeroness deterministically.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use crate::circuit::{Circuit, ProductTerm};
use crate::error::{Error, Result};
use crate::hadamard::{conjugate_circuit, ryser_expand, witness_all_ones, FormMatrix};
use crate::ncabp::{build_ncabp, raz_shpilka_is_zero};
use crate::scalar::{FieldDescriptor, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    Nonzero,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Zero => write!(f, "ZERO"),
            Verdict::Nonzero => write!(f, "NONZERO"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    HadamardQ,
    HadamardQi,
    NcabpFp,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pipeline::HadamardQ => write!(f, "HADAMARD_Q"),
            Pipeline::HadamardQi => write!(f, "HADAMARD_QI"),
            Pipeline::NcabpFp => write!(f, "NCABP_FP"),
        }
    }
}

/// Instance statistics reported alongside a verdict.
#[derive(Debug, Clone)]
pub struct PitStats {
    pub d: usize,
    pub s: usize,
    pub n: usize,
    /// Term pairs processed by a Hadamard pipeline.
    pub pair_count: Option<u64>,
    /// Width of the branching program built by the F_p pipeline.
    pub abp_width: Option<usize>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct PitVerdict {
    pub verdict: Verdict,
    /// The all-ones Hadamard witness; present exactly on the Hadamard
    /// pipelines, and nonzero exactly when the verdict is NONZERO.
    pub witness: Option<Scalar>,
    pub pipeline: Pipeline,
    pub stats: PitStats,
}

impl PitVerdict {
    /// Stable one-line rendering consumed by the CLI and test harnesses.
    pub fn line(&self) -> String {
        let witness = match &self.witness {
            Some(w) => w.to_string(),
            None => "-".to_string(),
        };
        format!(
            "verdict={} pipeline={} witness={} d={} s={} n={} time_ms={}",
            self.verdict,
            self.pipeline,
            witness,
            self.stats.d,
            self.stats.s,
            self.stats.n,
            self.stats.elapsed.as_millis()
        )
    }
}

fn stats_for(c: &Circuit, started: Instant) -> PitStats {
    PitStats {
        d: c.max_fan_in(),
        s: c.num_terms(),
        n: c.nvars(),
        pair_count: None,
        abp_width: None,
        elapsed: started.elapsed(),
    }
}

/// Homogenize and drop dead terms; `None` means nothing survived and the
/// circuit is trivially zero.
fn prepared(c: &Circuit) -> Option<Circuit> {
    let h = c.homogenize();
    let live: Vec<ProductTerm> = h
        .terms()
        .iter()
        .filter(|t| !t.multiplier.is_zero())
        .cloned()
        .collect();
    if live.is_empty() {
        return None;
    }
    Some(Circuit::new(h.field(), h.nvars(), live).expect("filtered circuit stays valid"))
}

/// Deterministic identity test over Q via the all-ones Hadamard witness.
pub fn pit_rational(c: &Circuit) -> Result<PitVerdict> {
    if c.field() != FieldDescriptor::Q {
        return Err(Error::InvalidParameter(
            "this pipeline requires field Q".into(),
        ));
    }
    let started = Instant::now();
    let mut stats = stats_for(c, started);
    let Some(h) = prepared(c) else {
        stats.pair_count = Some(0);
        stats.elapsed = started.elapsed();
        return Ok(PitVerdict {
            verdict: Verdict::Zero,
            witness: Some(Scalar::zero(FieldDescriptor::Q)),
            pipeline: Pipeline::HadamardQ,
            stats,
        });
    };
    let witness = witness_all_ones(&h, &h)?;
    if let Scalar::Rational(r) = &witness {
        assert!(
            !r.is_negative(),
            "the Hadamard square witness is a sum of squares and cannot be negative"
        );
    }
    stats.pair_count = Some((h.num_terms() * h.num_terms()) as u64);
    stats.elapsed = started.elapsed();
    Ok(PitVerdict {
        verdict: if witness.is_zero() {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        },
        witness: Some(witness),
        pipeline: Pipeline::HadamardQ,
        stats,
    })
}

/// Deterministic identity test over Q(i): the witness is the all-ones value
/// of C o^s conj(C), a sum of `m! * |[m]C|^2`.
pub fn pit_complex(c: &Circuit) -> Result<PitVerdict> {
    if c.field() != FieldDescriptor::Qi {
        return Err(Error::InvalidParameter(
            "this pipeline requires field Qi".into(),
        ));
    }
    let started = Instant::now();
    let mut stats = stats_for(c, started);
    let Some(h) = prepared(c) else {
        stats.pair_count = Some(0);
        stats.elapsed = started.elapsed();
        return Ok(PitVerdict {
            verdict: Verdict::Zero,
            witness: Some(Scalar::zero(FieldDescriptor::Qi)),
            pipeline: Pipeline::HadamardQi,
            stats,
        });
    };
    let witness = witness_all_ones(&h, &conjugate_circuit(&h))?;
    if let Scalar::Gaussian { re, im } = &witness {
        assert!(
            im.is_zero() && !re.is_negative(),
            "the conjugated Hadamard witness is a sum of |.|^2 terms"
        );
    }
    stats.pair_count = Some((h.num_terms() * h.num_terms()) as u64);
    stats.elapsed = started.elapsed();
    Ok(PitVerdict {
        verdict: if witness.is_zero() {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        },
        witness: Some(witness),
        pipeline: Pipeline::HadamardQi,
        stats,
    })
}

/// Deterministic identity test over F_p with p > d, via the noncommutative
/// lift: each term P becomes perm of the d x d matrix whose every row is P's
/// form list, expanded by Ryser into words that are d-fold powers of subset
/// sums; the resulting branching program computes a polynomial whose word
/// coefficients are `m! * [m]C`, and p > d keeps every m! invertible.
pub fn pit_prime_field(c: &Circuit) -> Result<PitVerdict> {
    let FieldDescriptor::Fp(p) = c.field() else {
        return Err(Error::InvalidParameter(
            "this pipeline requires a prime field".into(),
        ));
    };
    let started = Instant::now();
    let mut stats = stats_for(c, started);
    let h = c.homogenize();
    let d = h.max_fan_in();
    if p <= d as u64 {
        return Err(Error::UnsupportedCharacteristic { p, d });
    }
    let live: Vec<&ProductTerm> = h
        .terms()
        .iter()
        .filter(|t| !t.multiplier.is_zero())
        .collect();
    if live.is_empty() {
        stats.elapsed = started.elapsed();
        return Ok(PitVerdict {
            verdict: Verdict::Zero,
            witness: None,
            pipeline: Pipeline::NcabpFp,
            stats,
        });
    }
    let mut nc_terms = Vec::new();
    for term in live {
        let rows = vec![term.forms.clone(); d];
        let matrix = FormMatrix::new(rows)?;
        let mut expanded = ryser_expand(&matrix)?;
        for t in &mut expanded {
            t.multiplier = &t.multiplier * &term.multiplier;
        }
        nc_terms.extend(expanded);
    }
    let abp = build_ncabp(&nc_terms, h.nvars())?;
    stats.abp_width = Some(abp.width());
    let zero = raz_shpilka_is_zero(&abp);
    stats.elapsed = started.elapsed();
    Ok(PitVerdict {
        verdict: if zero {
            Verdict::Zero
        } else {
            Verdict::Nonzero
        },
        witness: None,
        pipeline: Pipeline::NcabpFp,
        stats,
    })
}

/// Dispatch on the circuit's field.
pub fn pit_auto(c: &Circuit) -> Result<PitVerdict> {
    match c.field() {
        FieldDescriptor::Q => pit_rational(c),
        FieldDescriptor::Qi => pit_complex(c),
        FieldDescriptor::Fp(_) => pit_prime_field(c),
    }
}
