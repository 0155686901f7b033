//! Finitely supported sequences of rationals, indexed by positive integers.

use crate::rational::Rational;
use crate::set::FinSet;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A map from positive integer positions to nonzero rational values; all
/// other positions are implicitly zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinSuppSeq(BTreeMap<u32, Rational>);

impl FinSuppSeq {
    pub fn zero() -> Self {
        FinSuppSeq(BTreeMap::new())
    }

    /// Builds a sequence from `(position, value)` pairs; zero values are
    /// dropped, repeated positions accumulate. Position 0 is not valid.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        let mut m: BTreeMap<u32, Rational> = BTreeMap::new();
        for (i, v) in pairs {
            assert!(i > 0, "positions are positive integers");
            let entry = m.entry(i).or_insert_with(Rational::zero);
            *entry += v;
        }
        m.retain(|_, v| !v.is_zero());
        FinSuppSeq(m)
    }

    /// The indicator sequence of a set: 1 on the set, 0 elsewhere.
    pub fn indicator(set: &FinSet) -> Self {
        FinSuppSeq(
            set.iter()
                .map(|e| (e, Rational::from_integer(1.into())))
                .collect(),
        )
    }

    pub fn value_at(&self, i: u32) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Support positions in increasing order.
    pub fn support(&self) -> FinSet {
        FinSet::from_sorted(self.0.keys().copied().collect())
    }

    /// `(position, value)` pairs in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.0.iter().map(|(&i, v)| (i, v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&i, v) in &other.0 {
            let entry = m.entry(i).or_insert_with(Rational::zero);
            *entry -= v;
        }
        m.retain(|_, v| !v.is_zero());
        FinSuppSeq(m)
    }
}
