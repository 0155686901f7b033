//! Finite sets of positive integers.
//!
//! Text form: comma-separated strictly increasing integers, the empty string
//! for the empty set. This is the element type of the interlacing graph and
//! of Schreier families.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A finite subset of the positive integers, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FinSet(Vec<u32>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FinSetError {
    #[error("PARSE_ERROR: set elements must be positive integers, got {0:?}")]
    NotPositive(String),
    #[error("PARSE_ERROR: set elements must be strictly increasing, got {0:?} after {1}")]
    NotIncreasing(String, u32),
}

impl FinSet {
    /// The empty set.
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// Builds a set from arbitrary elements, deduplicating and sorting.
    /// Zero is not a valid element.
    pub fn from_elements(elems: impl IntoIterator<Item = u32>) -> Result<Self, FinSetError> {
        let mut set = BTreeSet::new();
        for e in elems {
            if e == 0 {
                return Err(FinSetError::NotPositive("0".to_owned()));
            }
            set.insert(e);
        }
        Ok(FinSet(set.into_iter().collect()))
    }

    /// Builds a set from a slice of distinct increasing elements; use when the
    /// input is known sorted (debug-asserted).
    pub fn from_sorted(elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.first().map_or(true, |&e| e > 0));
        FinSet(elems)
    }

    /// Parses the text form: `""` for the empty set, otherwise
    /// comma-separated strictly increasing positive integers.
    pub fn parse(s: &str) -> Result<Self, FinSetError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FinSet::empty());
        }
        let mut elems = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let e: u32 = tok
                .parse()
                .map_err(|_| FinSetError::NotPositive(tok.to_owned()))?;
            if e == 0 {
                return Err(FinSetError::NotPositive(tok.to_owned()));
            }
            if let Some(&last) = elems.last() {
                if e <= last {
                    return Err(FinSetError::NotIncreasing(tok.to_owned(), last));
                }
            }
            elems.push(e);
        }
        Ok(FinSet(elems))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_elem(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max_elem(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, e: u32) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn insert(&self, e: u32) -> Self {
        debug_assert!(e > 0);
        match self.0.binary_search(&e) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, e);
                FinSet(v)
            }
        }
    }

    pub fn remove(&self, e: u32) -> Self {
        match self.0.binary_search(&e) {
            Ok(pos) => {
                let mut v = self.0.clone();
                v.remove(pos);
                FinSet(v)
            }
            Err(_) => self.clone(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v: Vec<u32> = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    v.push(a);
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    v.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    v.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    v.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    v.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        FinSet(v)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        let mut v = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    v.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    v.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    v.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    v.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        FinSet(v)
    }

    /// True when `self` is a subset of `other`.
    pub fn is_subset(&self, other: &Self) -> bool {
        let mut j = 0;
        for &a in &self.0 {
            loop {
                match other.0.get(j) {
                    Some(&b) if b < a => j += 1,
                    Some(&b) if b == a => {
                        j += 1;
                        break;
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    /// Number of elements in the closed interval `[lo, hi]`.
    pub fn count_in_interval(&self, lo: u32, hi: u32) -> usize {
        if lo > hi {
            return 0;
        }
        let start = self.0.partition_point(|&e| e < lo);
        let end = self.0.partition_point(|&e| e <= hi);
        end - start
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// Text form (inverse of [`FinSet::parse`]).
    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_text())
    }
}

impl FromIterator<u32> for FinSet {
    /// Collects arbitrary positive integers, sorting and deduplicating.
    /// Panics on zero; use [`FinSet::from_elements`] for fallible input.
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        FinSet::from_elements(iter).expect("set elements must be positive")
    }
}
