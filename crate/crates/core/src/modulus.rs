//! Nondecreasing moduli on the nonnegative rationals.
//!
//! Compression and expansion bounds for coarse embeddings are phrased through
//! nondecreasing maps `[0, oo) -> [0, oo)`. Two concrete shapes cover every
//! use in this crate: right-continuous step functions with finitely many
//! jumps, and nonnegative affine maps (which include the identity). Both
//! implement [`Modulus`]; radii searches additionally need to know whether a
//! modulus eventually exceeds any bound.

use crate::rational::Rational;
use num_traits::Zero;
use thiserror::Error;

/// A nondecreasing map `[0, oo) -> [0, oo)`, evaluated exactly.
pub trait Modulus {
    fn eval(&self, t: &Rational) -> Rational;

    /// True when `eval(t) > bound` for all large enough `t`. Drives the
    /// termination argument of ladder searches.
    fn eventually_exceeds(&self, bound: &Rational) -> bool;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModulusError {
    #[error("PARSE_ERROR: step modulus thresholds must be strictly increasing")]
    ThresholdsNotIncreasing,
    #[error("PARSE_ERROR: step modulus values must be nondecreasing")]
    ValuesDecreasing,
    #[error("PARSE_ERROR: modulus values must be nonnegative")]
    NegativeValue,
}

/// Right-continuous nondecreasing step function: `base` below the first
/// threshold, then the value attached to the largest threshold `<= t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepModulus {
    base: Rational,
    breakpoints: Vec<(Rational, Rational)>,
}

impl StepModulus {
    pub fn new(
        base: Rational,
        breakpoints: Vec<(Rational, Rational)>,
    ) -> Result<Self, ModulusError> {
        if base < Rational::zero() || breakpoints.iter().any(|(_, v)| *v < Rational::zero()) {
            return Err(ModulusError::NegativeValue);
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(ModulusError::ThresholdsNotIncreasing);
            }
        }
        let mut prev = &base;
        for (_, v) in &breakpoints {
            if v < prev {
                return Err(ModulusError::ValuesDecreasing);
            }
            prev = v;
        }
        Ok(StepModulus { base, breakpoints })
    }

    /// The constant map `t -> value`.
    pub fn constant(value: Rational) -> Self {
        StepModulus::new(value, Vec::new()).expect("constant modulus is valid")
    }
}

impl Modulus for StepModulus {
    fn eval(&self, t: &Rational) -> Rational {
        let mut current = &self.base;
        for (threshold, value) in &self.breakpoints {
            if threshold <= t {
                current = value;
            } else {
                break;
            }
        }
        current.clone()
    }

    fn eventually_exceeds(&self, bound: &Rational) -> bool {
        let last = self.breakpoints.last().map_or(&self.base, |(_, v)| v);
        last > bound
    }
}

/// The affine map `t -> slope * t + offset` with `slope, offset >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModulus {
    slope: Rational,
    offset: Rational,
}

impl LinearModulus {
    pub fn new(slope: Rational, offset: Rational) -> Result<Self, ModulusError> {
        if slope < Rational::zero() || offset < Rational::zero() {
            return Err(ModulusError::NegativeValue);
        }
        Ok(LinearModulus { slope, offset })
    }

    /// The identity map.
    pub fn identity() -> Self {
        LinearModulus {
            slope: Rational::from_integer(1.into()),
            offset: Rational::zero(),
        }
    }

    /// `t -> slope * t`.
    pub fn scaling(slope: Rational) -> Result<Self, ModulusError> {
        LinearModulus::new(slope, Rational::zero())
    }
}

impl Modulus for LinearModulus {
    fn eval(&self, t: &Rational) -> Rational {
        self.slope.clone() * t + &self.offset
    }

    fn eventually_exceeds(&self, bound: &Rational) -> bool {
        !self.slope.is_zero() || self.offset > *bound
    }
}
