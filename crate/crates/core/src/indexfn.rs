//! Two classes of integer prefixes and their encodings as finite sets.
//!
//! An I-prefix is `f(1), ..., f(N)` with `f(1) = 0`, nondecreasing, and
//! steps of at most one; it is determined by its set of jump positions.
//! A J-prefix is `g(0), ..., g(M)` with `g(0) = 0` and strictly increasing;
//! it is determined by its image. Both encodings are bijections, and jump
//! sets order I-prefixes: containment of jump sets forces pointwise order.

use crate::set::FinSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexFnError {
    #[error("NOT_IN_CLASS: {0}")]
    NotInClass(String),
}

/// `f(1), ..., f(N)`: starts at zero, never decreases, never jumps by more
/// than one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IPrefix {
    values: Vec<u32>,
}

impl IPrefix {
    pub fn new(values: Vec<u32>) -> Result<Self, IndexFnError> {
        if values.is_empty() {
            return Err(IndexFnError::NotInClass("empty prefix".into()));
        }
        if values[0] != 0 {
            return Err(IndexFnError::NotInClass(format!(
                "f(1) = {}, expected 0",
                values[0]
            )));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(IndexFnError::NotInClass(format!(
                    "f({}) = {} decreases to f({}) = {}",
                    i + 1,
                    w[0],
                    i + 2,
                    w[1]
                )));
            }
            if w[1] > w[0] + 1 {
                return Err(IndexFnError::NotInClass(format!(
                    "f jumps from {} to {} between {} and {}",
                    w[0],
                    w[1],
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(IPrefix { values })
    }

    /// Number of arguments `N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f(n)` for `1 <= n <= N`.
    pub fn value(&self, n: usize) -> u32 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// The positions `n < N` where `f(n+1) > f(n)`.
    pub fn jumps(&self) -> FinSet {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0])
            .map(|(i, _)| (i + 1) as u32)
            .collect()
    }

    /// Rebuilds the prefix of length `n` whose jump set is `a`:
    /// `f(m)` counts the elements of `a` below `m`. Jump positions at or
    /// beyond `n` are ignored.
    pub fn from_jumps(a: &FinSet, n: usize) -> Self {
        assert!(n >= 1);
        let values = (1..=n)
            .map(|m| a.count_in_interval(1, (m - 1) as u32) as u32)
            .collect();
        IPrefix { values }
    }

    /// Pointwise comparison over the common length.
    pub fn le_pointwise(&self, other: &IPrefix) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a <= b)
    }
}

/// `g(0), ..., g(M)`: starts at zero and strictly increases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JPrefix {
    values: Vec<u32>,
}

impl JPrefix {
    pub fn new(values: Vec<u32>) -> Result<Self, IndexFnError> {
        if values.first() != Some(&0) {
            return Err(IndexFnError::NotInClass(
                "prefix must start at g(0) = 0".into(),
            ));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(IndexFnError::NotInClass(format!(
                    "g({}) = {} does not increase past g({}) = {}",
                    i + 1,
                    w[1],
                    i,
                    w[0]
                )));
            }
        }
        Ok(JPrefix { values })
    }

    /// Number of positive arguments `M`.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 1
    }

    /// `g(n)` for `0 <= n <= M`.
    pub fn value(&self, n: usize) -> u32 {
        self.values[n]
    }

    /// The image `{g(1), ..., g(M)}`; strict growth from zero makes every
    /// member positive.
    pub fn image(&self) -> FinSet {
        self.values[1..].iter().copied().collect()
    }

    /// The prefix enumerating `a` in increasing order after the initial
    /// zero.
    pub fn from_image(a: &FinSet) -> Self {
        let mut values = vec![0];
        values.extend(a.elements().iter().copied());
        JPrefix { values }
    }
}
