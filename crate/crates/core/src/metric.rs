//! Finite metric spaces with rational distances.
//!
//! JSON form:
//!
//! ```json
//! {"labels": ["p", "q"], "dist": [["0", "2"], ["2", "0"]]}
//! ```
//!
//! with every distance a rational string (`"p"` or `"p/q"`). Construction
//! validates all metric axioms and reports the first violation.

// Symmetric-matrix math reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A metric on finitely many labeled points, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("PARSE_ERROR: distance matrix must be {expected}x{expected}, row {row} has length {got}")]
    DimensionMismatch {
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("PARSE_ERROR: duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("ASYMMETRIC: d({i},{j}) != d({j},{i})")]
    Asymmetric { i: usize, j: usize },
    #[error("NONZERO_DIAGONAL: d({i},{i}) != 0")]
    NonzeroDiagonal { i: usize },
    #[error("NONPOSITIVE_DISTANCE: d({i},{j}) <= 0")]
    NonpositiveDistance { i: usize, j: usize },
    #[error("TRIANGLE_VIOLATION: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("SINGLETON_SPACE: operation needs at least two points")]
    SingletonSpace,
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
}

impl FiniteMetric {
    /// Validates the axioms in a fixed order (shape, labels, diagonal,
    /// symmetry, positivity, triangle inequality) and returns the metric or
    /// the first violation found.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = labels.len();
        if dist.len() != n {
            return Err(MetricError::DimensionMismatch {
                expected: n,
                row: usize::MAX,
                got: dist.len(),
            });
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::DimensionMismatch {
                    expected: n,
                    row,
                    got: r.len(),
                });
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(MetricError::DuplicateLabel(l.clone()));
            }
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(MetricError::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(MetricError::Asymmetric { i, j });
                }
                if dist[i][j] <= Rational::zero() {
                    return Err(MetricError::NonpositiveDistance { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j].clone() + &dist[j][k] {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(FiniteMetric { labels, dist })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Largest pairwise distance. Needs at least two points.
    pub fn diam(&self) -> Result<Rational, MetricError> {
        self.off_diagonal_extremum(|a, b| a > b)
    }

    /// Smallest pairwise distance (the separation). Needs at least two points.
    pub fn sep(&self) -> Result<Rational, MetricError> {
        self.off_diagonal_extremum(|a, b| a < b)
    }

    /// `diam / sep`.
    pub fn aspect_ratio(&self) -> Result<Rational, MetricError> {
        Ok(self.diam()? / self.sep()?)
    }

    fn off_diagonal_extremum(
        &self,
        better: impl Fn(&Rational, &Rational) -> bool,
    ) -> Result<Rational, MetricError> {
        let n = self.len();
        if n < 2 {
            return Err(MetricError::SingletonSpace);
        }
        let mut best: Option<&Rational> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = &self.dist[i][j];
                if best.map_or(true, |b| better(d, b)) {
                    best = Some(d);
                }
            }
        }
        Ok(best.unwrap().clone())
    }

    /// Parses the JSON form, then validates.
    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        let raw: MetricJson =
            serde_json::from_str(text).map_err(|e| MetricError::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MetricJson::from(self)).expect("metric serialization cannot fail")
    }
}

/// Wire form of [`FiniteMetric`].
#[derive(Debug, Serialize, Deserialize)]
pub struct MetricJson {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<String>>,
}

impl TryFrom<MetricJson> for FiniteMetric {
    type Error = MetricError;

    fn try_from(raw: MetricJson) -> Result<Self, MetricError> {
        let dist = raw
            .dist
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| parse_rational(&s).map_err(|e| MetricError::Parse(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        FiniteMetric::new(raw.labels, dist)
    }
}

impl From<&FiniteMetric> for MetricJson {
    fn from(m: &FiniteMetric) -> Self {
        MetricJson {
            labels: m.labels.clone(),
            dist: m
                .dist
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m2(d: Rational) -> FiniteMetric {
        FiniteMetric::new(
            vec!["p".into(), "q".into()],
            vec![
                vec![Rational::zero(), d.clone()],
                vec![d, Rational::zero()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn accepts_valid_and_reports_extremes() {
        let m = m2(rat_int(2));
        assert_eq!(m.diam().unwrap(), rat_int(2));
        assert_eq!(m.sep().unwrap(), rat_int(2));
        assert_eq!(m.aspect_ratio().unwrap(), rat_int(1));
    }

    #[test]
    fn rejects_each_axiom_violation() {
        let z = Rational::zero;
        let asym = FiniteMetric::new(
            vec!["a".into(), "b".into()],
            vec![vec![z(), rat_int(1)], vec![rat_int(2), z()]],
        );
        assert!(matches!(asym, Err(MetricError::Asymmetric { .. })));

        let diag = FiniteMetric::new(
            vec!["a".into(), "b".into()],
            vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), z()]],
        );
        assert!(matches!(diag, Err(MetricError::NonzeroDiagonal { i: 0 })));

        let neg = FiniteMetric::new(
            vec!["a".into(), "b".into()],
            vec![vec![z(), rat_int(-1)], vec![rat_int(-1), z()]],
        );
        assert!(matches!(neg, Err(MetricError::NonpositiveDistance { .. })));

        // d(a,c)=5 > d(a,b)+d(b,c)=2.
        let tri = FiniteMetric::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![z(), rat_int(1), rat_int(5)],
                vec![rat_int(1), z(), rat_int(1)],
                vec![rat_int(5), rat_int(1), z()],
            ],
        );
        assert!(matches!(tri, Err(MetricError::TriangleViolation { .. })));

        let dup = FiniteMetric::new(
            vec!["a".into(), "a".into()],
            vec![vec![z(), rat_int(1)], vec![rat_int(1), z()]],
        );
        assert!(matches!(dup, Err(MetricError::DuplicateLabel(_))));
    }

    #[test]
    fn singleton_has_no_diameter() {
        let m = FiniteMetric::new(vec!["a".into()], vec![vec![Rational::zero()]]).unwrap();
        assert_eq!(m.diam(), Err(MetricError::SingletonSpace));
        assert_eq!(m.sep(), Err(MetricError::SingletonSpace));
    }

    #[test]
    fn json_round_trip_normalizes() {
        let text = r#"{"labels":["p","q"],"dist":[["0","4/2"],["2","0"]]}"#;
        let m = FiniteMetric::from_json(text).unwrap();
        assert_eq!(m, m2(rat_int(2)));
        let emitted = m.to_json();
        let reparsed = FiniteMetric::from_json(&emitted).unwrap();
        assert_eq!(reparsed, m);
        assert!(emitted.contains("\"2\""));
    }

    #[test]
    fn fractional_distances_survive() {
        let m = m2(rat(3, 2));
        let round = FiniteMetric::from_json(&m.to_json()).unwrap();
        assert_eq!(round.dist(0, 1), &rat(3, 2));
    }
}
