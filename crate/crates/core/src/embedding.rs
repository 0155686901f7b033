//! Low-distortion embeddings of finite metric spaces into the interlacing
//! graph on k-element sets.
//!
//! The pipeline has three stages. `round_metric` snaps a rational metric to
//! multiples of `1/q`, where `q` is the smallest integer with
//! `q >= 1/(sep * epsilon)`, and re-closes under shortest paths; each rounded
//! distance then sits in `((1 - epsilon) d, d]`. Doubling the numerators
//! yields an even integer metric. `claim1_embed` realizes any even metric
//! exactly: it lays the points out in coordinates built from successive
//! distance differences, shifts them to be nonnegative, and reads each
//! coordinate vector off as a union of integer intervals, one per
//! coordinate block. The resulting sets all have the same cardinality and
//! their interlacing-graph distance reproduces the even metric on the nose,
//! so the only distortion in `embed` is the rounding, certified to be at
//! most `1/(1 - epsilon)`.

// Symmetric-matrix math reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

use crate::interlacing::d_sum;
use crate::metric::{FiniteMetric, MetricError};
use crate::rational::{ceil, floor_int, rat, Rational};
use crate::set::FinSet;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("EPSILON_OUT_OF_RANGE: epsilon must satisfy 0 < epsilon < 1, got {0}")]
    EpsilonOutOfRange(String),
    #[error("NOT_Q_INTEGRAL: distance {dist} between points {i} and {j} is not a multiple of 1/{q}")]
    NotQIntegral { i: usize, j: usize, dist: String, q: u64 },
    #[error("ODD_DISTANCE: distance {dist} between points {i} and {j} is odd")]
    OddDistance { i: usize, j: usize, dist: u64 },
    #[error("MISSING_LABEL: result has no set for point {0}")]
    MissingLabel(String),
    #[error("CARDINALITY_NONUNIFORM: sets have sizes {0:?}, expected all equal")]
    CardinalityNonuniform(Vec<u64>),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("instance exceeds integer range: {0}")]
    TooLarge(String),
}

/// A metric with all distances multiples of `1/q`, stored as integer
/// numerators over `q`; obtained from a rational metric by rounding down
/// and re-closing under shortest paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedMetric {
    labels: Vec<String>,
    q: u64,
    num: Vec<Vec<u64>>,
}

impl RoundedMetric {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Numerator of the rounded distance: the distance itself is `num / q`.
    pub fn num(&self, i: usize, j: usize) -> u64 {
        self.num[i][j]
    }

    pub fn dist(&self, i: usize, j: usize) -> Rational {
        rat(self.num[i][j] as i64, self.q as i64)
    }
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64, EmbeddingError> {
    u64::try_from(x).map_err(|_| EmbeddingError::TooLarge(format!("{what} = {x}")))
}

fn check_epsilon(epsilon: &Rational) -> Result<(), EmbeddingError> {
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(EmbeddingError::EpsilonOutOfRange(epsilon.to_string()));
    }
    Ok(())
}

/// Rounds every distance down to a multiple of `1/q` with
/// `q = max(1, ceil(1/(sep * epsilon)))`, then restores the triangle
/// inequality by an all-pairs shortest-path pass. Each rounded distance
/// exceeds `(1 - epsilon)` times the original.
pub fn round_metric(
    m: &FiniteMetric,
    epsilon: &Rational,
) -> Result<RoundedMetric, EmbeddingError> {
    check_epsilon(epsilon)?;
    let sep = m.sep()?;
    let n = m.len();
    let one = Rational::one();
    let q_big = ceil(&(one.clone() / (sep * epsilon)))
        .to_integer()
        .max(BigInt::one());
    let q = to_u64(&q_big, "q")?;
    let q_rat = Rational::from_integer(q_big);

    let mut num = vec![vec![0u64; n]; n];
    let mut max_entry = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let k = to_u64(&floor_int(&(q_rat.clone() * m.dist(i, j))), "floor(q*d)")?;
            num[i][j] = k;
            num[j][i] = k;
            max_entry = max_entry.max(k);
        }
    }
    // Shortest-path sums stay within n * max_entry; keep that inside u64.
    if (n as u64).checked_mul(max_entry).is_none() {
        return Err(EmbeddingError::TooLarge("path weight sum".into()));
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = num[i][via] + num[via][j];
                if through < num[i][j] {
                    num[i][j] = through;
                }
            }
        }
    }
    Ok(RoundedMetric {
        labels: m.labels().to_vec(),
        q,
        num,
    })
}

/// A metric space whose distances are all even nonnegative integers,
/// validated exactly like a rational metric. The exact embedding consumes
/// these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenMetric {
    labels: Vec<String>,
    dist: Vec<Vec<u64>>,
}

impl EvenMetric {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<u64>>) -> Result<Self, EmbeddingError> {
        let n = labels.len();
        if dist.len() != n {
            return Err(MetricError::DimensionMismatch {
                expected: n,
                row: n,
                got: dist.len(),
            }
            .into());
        }
        for (row_idx, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::DimensionMismatch {
                    expected: n,
                    row: row_idx,
                    got: row.len(),
                }
                .into());
            }
        }
        for i in 0..n {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(MetricError::DuplicateLabel(labels[i].clone()).into());
                }
            }
        }
        for (i, row) in dist.iter().enumerate() {
            if row[i] != 0 {
                return Err(MetricError::NonzeroDiagonal { i }.into());
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(MetricError::Asymmetric { i, j }.into());
                }
                if dist[i][j] == 0 {
                    return Err(MetricError::NonpositiveDistance { i, j }.into());
                }
                if dist[i][j] % 2 != 0 {
                    return Err(EmbeddingError::OddDistance {
                        i,
                        j,
                        dist: dist[i][j],
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][j].saturating_add(dist[j][k]) < dist[i][k] {
                        return Err(MetricError::TriangleViolation { i, j, k }.into());
                    }
                }
            }
        }
        Ok(EvenMetric { labels, dist })
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

    pub fn dist(&self, i: usize, j: usize) -> u64 {
        self.dist[i][j]
    }

    pub fn diam(&self) -> u64 {
        self.dist
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// Converts a rational metric whose distances are all multiples of `1/q`
/// into the even integer metric scaled by `2q`.
pub fn evenize(m: &FiniteMetric, q: u64) -> Result<EvenMetric, EmbeddingError> {
    let n = m.len();
    let q_rat = rat(q as i64, 1);
    let mut dist = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let scaled = q_rat.clone() * m.dist(i, j);
            if !scaled.is_integer() {
                return Err(EmbeddingError::NotQIntegral {
                    i,
                    j,
                    dist: m.dist(i, j).to_string(),
                    q,
                });
            }
            let k = to_u64(&scaled.to_integer(), "q*d")?;
            let even = k
                .checked_mul(2)
                .ok_or_else(|| EmbeddingError::TooLarge("2*q*d".into()))?;
            dist[i][j] = even;
            dist[j][i] = even;
        }
    }
    EvenMetric::new(m.labels().to_vec(), dist)
}

/// Output of the exact even-metric embedding: one set per input point, all
/// of cardinality `(n + 3/2) * big_d`, whose pairwise interlacing-graph
/// distances equal the input distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactEmbedding {
    pub big_d: u64,
    pub sets: Vec<FinSet>,
    pub coords: Vec<Vec<u64>>,
}

/// Embeds an even metric exactly. Appends two reference points: one at the
/// smallest even distance `D` with `2D >= diam` from everything, one at
/// formal distance zero. Coordinate `i` of a point `x` is half the
/// difference of its distances to the `i`-th and `(i+1)`-st points of the
/// extended list; adding `D` to every coordinate makes them nonnegative
/// integers, and stacking one integer interval per coordinate produces the
/// sets.
pub fn claim1_embed(even: &EvenMetric) -> Result<ExactEmbedding, EmbeddingError> {
    let n = even.len();
    let diam = even.diam();
    // Smallest even D with 2D >= diam.
    let mut big_d = diam / 2 + diam % 2;
    if big_d % 2 == 1 {
        big_d += 1;
    }

    // Extended point list x_1 .. x_{n+2}: x_1 at distance D from every
    // input point, x_2 .. x_{n+1} the inputs in order, x_{n+2} at formal
    // distance zero. dx(p, i) is the distance from input p to x_i.
    let dx = |p: usize, i: usize| -> u64 {
        if i == 1 {
            big_d
        } else if i == n + 2 {
            0
        } else {
            even.dist(p, i - 2)
        }
    };

    let mut coords = vec![vec![0u64; n + 1]; n];
    for p in 0..n {
        for i in 1..=(n + 1) {
            let (a, b) = (dx(p, i), dx(p, i + 1));
            debug_assert_eq!((a as i64 - b as i64) % 2, 0, "distances must share parity");
            let phi0 = (a as i64 - b as i64) / 2;
            let phi1 = phi0 + big_d as i64;
            debug_assert!(phi1 >= 0, "shifted coordinate must be nonnegative");
            coords[p][i - 1] = phi1 as u64;
        }
    }

    // Block k occupies positions M_{k-1}+1 .. M_k, where M accumulates the
    // per-coordinate maxima; each point takes an initial run of its block.
    let mut offsets = vec![0u64; n + 2];
    for k in 0..(n + 1) {
        let peak = coords.iter().map(|c| c[k]).max().unwrap_or(0);
        offsets[k + 1] = offsets[k]
            .checked_add(peak)
            .ok_or_else(|| EmbeddingError::TooLarge("coordinate block offset".into()))?;
    }
    if u32::try_from(offsets[n + 1]).is_err() {
        return Err(EmbeddingError::TooLarge(format!(
            "ambient universe size {}",
            offsets[n + 1]
        )));
    }

    let mut sets = Vec::with_capacity(n);
    for c in &coords {
        let mut elems = Vec::new();
        for k in 0..(n + 1) {
            let base = offsets[k] as u32;
            elems.extend((1..=c[k] as u32).map(|t| base + t));
        }
        sets.push(FinSet::from_sorted(elems));
    }

    let card = (2 * n as u64 + 3) * big_d / 2;
    debug_assert!(sets.iter().all(|s| s.len() as u64 == card));
    Ok(ExactEmbedding {
        big_d,
        sets,
        coords,
    })
}

/// A certified embedding of a rational metric: the assignment of sets, the
/// scale relating set distance to input distance, and the distortion bound
/// that was actually achieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingResult {
    pub epsilon: Rational,
    pub scale: u64,
    pub k: u64,
    pub assignment: BTreeMap<String, FinSet>,
    pub distortion: Rational,
    pub bound_k: u64,
    pub certified: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct EmbeddingJson {
    epsilon: String,
    scale: u64,
    k: u64,
    sets: BTreeMap<String, Vec<u32>>,
    distortion: String,
    bound_k: u64,
    certified: bool,
}

impl EmbeddingResult {
    pub fn from_json(text: &str) -> Result<Self, EmbeddingError> {
        let raw: EmbeddingJson =
            serde_json::from_str(text).map_err(|e| EmbeddingError::Parse(e.to_string()))?;
        let epsilon = crate::rational::parse_rational(&raw.epsilon)
            .map_err(|e| EmbeddingError::Parse(e.to_string()))?;
        let distortion = crate::rational::parse_rational(&raw.distortion)
            .map_err(|e| EmbeddingError::Parse(e.to_string()))?;
        let mut assignment = BTreeMap::new();
        for (label, elems) in raw.sets {
            let set = FinSet::from_elements(elems)
                .map_err(|e| EmbeddingError::Parse(e.to_string()))?;
            assignment.insert(label, set);
        }
        Ok(EmbeddingResult {
            epsilon,
            scale: raw.scale,
            k: raw.k,
            assignment,
            distortion,
            bound_k: raw.bound_k,
            certified: raw.certified,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = EmbeddingJson {
            epsilon: crate::rational::format_rational(&self.epsilon),
            scale: self.scale,
            k: self.k,
            sets: self
                .assignment
                .iter()
                .map(|(l, s)| (l.clone(), s.elements().to_vec()))
                .collect(),
            distortion: crate::rational::format_rational(&self.distortion),
            bound_k: self.bound_k,
            certified: self.certified,
        };
        serde_json::to_string(&raw).expect("embedding serialization cannot fail")
    }
}

/// Full pipeline: round, evenize, embed exactly, then measure the achieved
/// distortion pair by pair. The sets live in `[N]^k` with
/// `k <= (n + 3/2) (aspect/epsilon + diam + 1)`, recorded in `bound_k`, and
/// `distortion <= 1/(1 - epsilon)`.
pub fn embed(m: &FiniteMetric, epsilon: &Rational) -> Result<EmbeddingResult, EmbeddingError> {
    let rounded = round_metric(m, epsilon)?;
    let n = m.len();
    let q = rounded.q;

    let mut even_dist = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            even_dist[i][j] = rounded
                .num(i, j)
                .checked_mul(2)
                .ok_or_else(|| EmbeddingError::TooLarge("even distance".into()))?;
        }
    }
    let even = EvenMetric::new(m.labels().to_vec(), even_dist)?;
    let exact = claim1_embed(&even)?;

    let scale = q
        .checked_mul(2)
        .ok_or_else(|| EmbeddingError::TooLarge("scale".into()))?;
    let k = exact.sets.first().map_or(0, |s| s.len() as u64);

    // Ratio (set distance / scale) / (input distance) per pair; the
    // distortion is the spread between the extremes.
    let scale_rat = rat(scale as i64, 1);
    let mut min_ratio: Option<Rational> = None;
    let mut max_ratio: Option<Rational> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let di = d_sum(&exact.sets[i], &exact.sets[j]);
            let ratio =
                rat(di as i64, 1) / (scale_rat.clone() * m.dist(i, j));
            if min_ratio.as_ref().map_or(true, |r| ratio < *r) {
                min_ratio = Some(ratio.clone());
            }
            if max_ratio.as_ref().map_or(true, |r| ratio > *r) {
                max_ratio = Some(ratio);
            }
        }
    }
    let one = Rational::one();
    // Each pair must land in the band ((1 - epsilon) d, d] after rescaling;
    // the distortion is the spread between the extremes.
    let in_band = match (&min_ratio, &max_ratio) {
        (Some(lo), Some(hi)) => {
            *lo > one.clone() - epsilon.clone() && *hi <= one
        }
        _ => true,
    };
    let distortion = match (min_ratio, max_ratio) {
        (Some(lo), Some(hi)) => hi / lo,
        _ => Rational::one(),
    };

    let diam = m.diam()?;
    let aspect = m.aspect_ratio()?;
    let bound = rat(2 * n as i64 + 3, 2)
        * (aspect / epsilon + diam + Rational::one());
    let bound_k = to_u64(&floor_int(&bound), "bound_k")?;

    let certified = in_band
        && distortion <= one.clone() / (one - epsilon.clone())
        && k <= bound_k;

    let assignment = m
        .labels()
        .iter()
        .cloned()
        .zip(exact.sets.iter().cloned())
        .collect();
    Ok(EmbeddingResult {
        epsilon: epsilon.clone(),
        scale,
        k,
        assignment,
        distortion,
        bound_k,
        certified,
    })
}

/// Independent re-check of a stored embedding against its source metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub certified: bool,
    pub distortion: Option<Rational>,
    pub errors: Vec<String>,
}

/// Ratio extremes over a batch of point pairs, plus any pairs that
/// collapsed onto one set. Batches merge, so callers may fan the pair list
/// out over threads and combine the scans.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairScan {
    pub min_ratio: Option<Rational>,
    pub max_ratio: Option<Rational>,
    pub collapsed: Vec<(String, String)>,
}

impl PairScan {
    pub fn merge(mut self, other: PairScan) -> PairScan {
        if let Some(r) = other.min_ratio {
            if self.min_ratio.as_ref().map_or(true, |cur| r < *cur) {
                self.min_ratio = Some(r);
            }
        }
        if let Some(r) = other.max_ratio {
            if self.max_ratio.as_ref().map_or(true, |cur| r > *cur) {
                self.max_ratio = Some(r);
            }
        }
        self.collapsed.extend(other.collapsed);
        self
    }
}

/// Extracts the sets for the metric's points in label order; errors name
/// missing labels and nonuniform cardinalities.
pub fn assignment_sets(
    m: &FiniteMetric,
    result: &EmbeddingResult,
) -> Result<Vec<FinSet>, Vec<String>> {
    let mut errors = Vec::new();
    if check_epsilon(&result.epsilon).is_err() {
        errors.push(
            EmbeddingError::EpsilonOutOfRange(result.epsilon.to_string()).to_string(),
        );
    }
    let mut sets = Vec::with_capacity(m.len());
    for label in m.labels() {
        match result.assignment.get(label) {
            Some(s) => sets.push(s.clone()),
            None => errors.push(EmbeddingError::MissingLabel(label.clone()).to_string()),
        }
    }
    let sizes: Vec<u64> = sets.iter().map(|s| s.len() as u64).collect();
    if sizes.iter().any(|&s| s != result.k) {
        errors.push(EmbeddingError::CardinalityNonuniform(sizes).to_string());
    }
    if errors.is_empty() {
        Ok(sets)
    } else {
        Err(errors)
    }
}

/// Recomputes `d_sum / (scale * d)` for the given index pairs.
pub fn scan_pairs(
    m: &FiniteMetric,
    sets: &[FinSet],
    scale: u64,
    pairs: &[(usize, usize)],
) -> PairScan {
    let scale_rat = rat(scale as i64, 1);
    let mut scan = PairScan::default();
    for &(i, j) in pairs {
        let di = d_sum(&sets[i], &sets[j]);
        if di == 0 {
            scan.collapsed
                .push((m.labels()[i].clone(), m.labels()[j].clone()));
        }
        let ratio = rat(di as i64, 1) / (scale_rat.clone() * m.dist(i, j));
        if scan.min_ratio.as_ref().map_or(true, |r| ratio < *r) {
            scan.min_ratio = Some(ratio.clone());
        }
        if scan.max_ratio.as_ref().map_or(true, |r| ratio > *r) {
            scan.max_ratio = Some(ratio);
        }
    }
    scan
}

/// All index pairs `i < j` of an `n`-point space.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Folds a completed scan into the final verdict. The certificate is the
/// two-sided per-pair band: every ratio `d_sum / (scale * d)` must exceed
/// `1 - epsilon` and not exceed one. On top of that the recorded distortion
/// must match the recomputed spread, which then sits within
/// `1/(1 - epsilon)` automatically, and no pair may collapse.
pub fn finish_verification(result: &EmbeddingResult, scan: PairScan) -> VerifyReport {
    let mut errors: Vec<String> = scan
        .collapsed
        .iter()
        .map(|(a, b)| format!("points {a} and {b} are mapped to the same set"))
        .collect();
    if !errors.is_empty() {
        return VerifyReport {
            certified: false,
            distortion: None,
            errors,
        };
    }
    let one = Rational::one();
    if let Some(hi) = &scan.max_ratio {
        if *hi > one {
            errors.push(format!(
                "a set distance exceeds scale times the metric distance (ratio {hi})"
            ));
        }
    }
    if let Some(lo) = &scan.min_ratio {
        let floor = one.clone() - result.epsilon.clone();
        if *lo <= floor {
            errors.push(format!(
                "a set distance drops to (1 - epsilon) of its target or below (ratio {lo})"
            ));
        }
    }
    let distortion = match (scan.min_ratio, scan.max_ratio) {
        (Some(lo), Some(hi)) => hi / lo,
        _ => Rational::one(),
    };
    if distortion != result.distortion {
        errors.push(format!(
            "recorded distortion {} does not match recomputed {}",
            result.distortion, distortion
        ));
    }
    let limit = one.clone() / (one - result.epsilon.clone());
    if distortion > limit {
        errors.push(format!(
            "distortion {distortion} exceeds the certified limit {limit}"
        ));
    }
    VerifyReport {
        certified: errors.is_empty(),
        distortion: Some(distortion),
        errors,
    }
}

/// Recomputes every pairwise set distance and ratio from scratch and
/// confirms: every point has a set, all sets share cardinality `k`, and the
/// distortion both matches the recorded value and stays within
/// `1/(1 - epsilon)`.
pub fn verify_embedding(m: &FiniteMetric, result: &EmbeddingResult) -> VerifyReport {
    let sets = match assignment_sets(m, result) {
        Ok(sets) => sets,
        Err(errors) => {
            return VerifyReport {
                certified: false,
                distortion: None,
                errors,
            }
        }
    };
    let scan = scan_pairs(m, &sets, result.scale, &all_pairs(m.len()));
    finish_verification(result, scan)
}
