//! The interlacing graph on finite sets and its path metric.
//!
//! Vertices are finite subsets of the positive integers. Two distinct sets
//! are adjacent when their sorted enumerations interlace: one set's elements
//! separate the other's, with cardinalities equal or differing by one (the
//! empty set is adjacent exactly to the singletons). The induced path metric
//! equals an interval-counting distance:
//!
//! `d_sum(A, B) = max over intervals E of |#(A and E) - #(B and E)|`
//!
//! which is computable in linear time from the symmetric difference. This
//! module provides that distance, the adjacency test, a BFS oracle that
//! recomputes the path metric from adjacency alone, explicit geodesics, and
//! a cardinality-lifting map that embeds `k`-sets into `m`-sets isometrically.

use crate::rational::Rational;
use crate::seq::FinSuppSeq;
use crate::set::FinSet;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterlacingError {
    #[error("CARDINALITY_MISMATCH: family sets must all have the same cardinality")]
    CardinalityMismatch,
    #[error("M_TOO_SMALL: target cardinality {target} is below the family cardinality {current}")]
    MTooSmall { target: usize, current: usize },
}

/// The summing norm: supremum over intervals `[k, m]` of `|sum of the
/// values at positions in [k, m]|`.
///
/// Equal to `max(P) - min(P)` where `P` ranges over the prefix sums of the
/// support values together with the empty prefix 0, so restricting interval
/// endpoints to sign changes loses nothing.
pub fn summing_norm(seq: &FinSuppSeq) -> Rational {
    let mut prefix = Rational::zero();
    let mut max = Rational::zero();
    let mut min = Rational::zero();
    for (_, v) in seq.iter() {
        prefix += v;
        if prefix > max {
            max = prefix.clone();
        }
        if prefix < min {
            min = prefix.clone();
        }
    }
    max - min
}

/// Interval-counting distance between finite sets:
/// `max over intervals E of |#(A and E) - #(B and E)|`.
///
/// Elements of `A and B` cancel, so the walk runs over the symmetric
/// difference only; the result equals `summing_norm` of the difference of
/// indicator sequences.
pub fn d_sum(a: &FinSet, b: &FinSet) -> u64 {
    let mut prefix: i64 = 0;
    let mut max: i64 = 0;
    let mut min: i64 = 0;
    let (ea, eb) = (a.elements(), b.elements());
    let (mut i, mut j) = (0usize, 0usize);
    while i < ea.len() || j < eb.len() {
        match (ea.get(i), eb.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                continue;
            }
            (Some(&x), Some(&y)) if x < y => {
                prefix += 1;
                i += 1;
            }
            (Some(_), Some(_)) => {
                prefix -= 1;
                j += 1;
            }
            (Some(_), None) => {
                prefix += 1;
                i += 1;
            }
            (None, Some(_)) => {
                prefix -= 1;
                j += 1;
            }
            (None, None) => unreachable!(),
        }
        max = max.max(prefix);
        min = min.min(prefix);
    }
    (max - min) as u64
}

/// Interlacing adjacency. With `A = {a_1 < .. < a_n}`, `B = {b_1 < .. < b_m}`
/// and `A != B`, the sets are adjacent when one of:
///
/// * `n = m + 1` and `a_i <= b_i <= a_{i+1}` for all `i <= m` (or the same
///   with roles swapped);
/// * `n = m` and `a_i <= b_i <= a_{i+1}` for `i < n` with `a_n <= b_n` (or
///   roles swapped).
///
/// With `m = 0` the first rule is vacuous, which connects the empty set to
/// exactly the singletons.
pub fn is_adjacent(a: &FinSet, b: &FinSet) -> bool {
    if a == b {
        return false;
    }
    let (ea, eb) = (a.elements(), b.elements());
    let (n, m) = (ea.len(), eb.len());
    if n == m + 1 {
        interlaces_below(ea, eb)
    } else if m == n + 1 {
        interlaces_below(eb, ea)
    } else if n == m {
        interlaces_equal(ea, eb) || interlaces_equal(eb, ea)
    } else {
        false
    }
}

/// `a_i <= b_i <= a_{i+1}` for `1 <= i <= #b`, where `#a = #b + 1`.
fn interlaces_below(a: &[u32], b: &[u32]) -> bool {
    debug_assert_eq!(a.len(), b.len() + 1);
    b.iter()
        .enumerate()
        .all(|(i, &bi)| a[i] <= bi && bi <= a[i + 1])
}

/// `a_i <= b_i <= a_{i+1}` for `i < n` and `a_n <= b_n`, where `#a = #b = n`.
fn interlaces_equal(a: &[u32], b: &[u32]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    (0..n).all(|i| a[i] <= b[i] && (i + 1 == n || b[i] <= a[i + 1]))
}

/// True when `shifted` moves each element of `a` to the right without
/// overtaking the next one: `a_1 <= a'_1 <= a_2 <= .. <= a_n <= a'_n` with
/// `shifted != a`. Every such pair is at distance exactly 1.
pub fn is_left_shift(a: &FinSet, shifted: &FinSet) -> bool {
    if a == shifted || a.len() != shifted.len() {
        return false;
    }
    let (ea, es) = (a.elements(), shifted.elements());
    let n = ea.len();
    (0..n).all(|i| ea[i] <= es[i] && (i + 1 == n || es[i] <= ea[i + 1]))
}

/// Largest `#(a union b)` the BFS oracle will attempt.
pub const BFS_UNIVERSE_CAP: usize = 22;

/// Graph distance from `a` to `b` computed by breadth-first search over all
/// subsets of `a union b`, using only the adjacency test. Geodesics never
/// need to leave that universe, so this agrees with the path metric of the
/// full graph; it is the independent oracle for [`d_sum`].
///
/// Cost is `O(4^u)` adjacency tests with `u = #(a union b)`; panics when
/// `u > 22` rather than attempt an infeasible search.
pub fn bfs_distance(a: &FinSet, b: &FinSet) -> u64 {
    if a == b {
        return 0;
    }
    let universe: Vec<u32> = a.union(b).elements().to_vec();
    let u = universe.len();
    assert!(
        u <= BFS_UNIVERSE_CAP,
        "bfs_distance explores 2^{u} subsets; refusing above 2^{BFS_UNIVERSE_CAP}"
    );
    let size: usize = 1 << u;
    let decoded: Vec<Vec<u32>> = (0..size)
        .map(|mask| {
            (0..u)
                .filter(|&bit| mask & (1 << bit) != 0)
                .map(|bit| universe[bit])
                .collect()
        })
        .collect();
    let encode = |s: &FinSet| -> usize {
        s.iter()
            .map(|e| 1usize << universe.binary_search(&e).expect("element in universe"))
            .sum()
    };
    let start = encode(a);
    let target = encode(b);

    let words = size.div_ceil(64);
    let mut visited = vec![0u64; words];
    let mut frontier = vec![start];
    visited[start / 64] |= 1 << (start % 64);
    let mut dist = 0u64;
    while !frontier.is_empty() {
        dist += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            let dv = &decoded[v];
            for w in 0..size {
                if visited[w / 64] & (1 << (w % 64)) != 0 {
                    continue;
                }
                if adjacent_slices(dv, &decoded[w]) {
                    if w == target {
                        return dist;
                    }
                    visited[w / 64] |= 1 << (w % 64);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    unreachable!("the interlacing graph is connected on finite universes");
}

fn adjacent_slices(a: &[u32], b: &[u32]) -> bool {
    if a == b {
        return false;
    }
    let (n, m) = (a.len(), b.len());
    if n == m + 1 {
        interlaces_below(a, b)
    } else if m == n + 1 {
        interlaces_below(b, a)
    } else if n == m {
        interlaces_equal(a, b) || interlaces_equal(b, a)
    } else {
        false
    }
}

/// A path in the interlacing graph whose length equals the distance of its
/// endpoints. Produced by [`geodesic`]; consecutive vertices are adjacent by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPath {
    vertices: Vec<FinSet>,
}

impl GeodesicPath {
    pub fn vertices(&self) -> &[FinSet] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> u64 {
        (self.vertices.len() - 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }
}

/// Builds an explicit geodesic from `a` to `b`.
///
/// One step: if one set contains the other, add or remove a single
/// symmetric-difference element (smallest first); otherwise shift the side
/// holding the smallest symmetric-difference element one notch toward the
/// other set, dropping the largest symmetric-difference element as well when
/// the count surplus on some suffix interval reaches the full distance.
/// Each step is adjacent and decreases the distance by exactly one (asserted;
/// a failure would be a bug, not bad input). When `#a = #b` every vertex of
/// the path keeps that cardinality.
pub fn geodesic(a: &FinSet, b: &FinSet) -> GeodesicPath {
    let total = d_sum(a, b);
    let mut vertices = vec![a.clone()];
    build_geodesic(a, b, &mut vertices);
    assert_eq!(
        vertices.len() as u64,
        total + 1,
        "geodesic length must equal the distance"
    );
    for w in vertices.windows(2) {
        assert!(
            is_adjacent(&w[0], &w[1]),
            "geodesic step {} -> {} is not an edge",
            w[0],
            w[1]
        );
    }
    if a.len() == b.len() {
        assert!(
            vertices.iter().all(|v| v.len() == a.len()),
            "equal-cardinality geodesics stay within one cardinality level"
        );
    }
    GeodesicPath { vertices }
}

fn build_geodesic(a: &FinSet, b: &FinSet, out: &mut Vec<FinSet>) {
    if a == b {
        return;
    }
    let m = d_sum(a, b);
    let next = if b.is_subset(a) {
        // Remove one element a holds beyond b.
        let extra = a.symmetric_difference(b);
        a.remove(extra.min_elem().expect("proper inclusion"))
    } else if a.is_subset(b) {
        let extra = b.symmetric_difference(a);
        a.insert(extra.min_elem().expect("proper inclusion"))
    } else {
        let diff = a.symmetric_difference(b);
        let x1 = diff.min_elem().expect("sets differ");
        if b.contains(x1) {
            // Walk from the other end; the whole reversed path is a geodesic.
            let mut rev = vec![b.clone()];
            build_geodesic(b, a, &mut rev);
            rev.reverse();
            out.extend(rev.into_iter().skip(1));
            return;
        }
        shift_step(a, b, &diff, m)
    };
    debug_assert_eq!(d_sum(&next, b), m - 1, "each step closes distance by one");
    out.push(next.clone());
    build_geodesic(&next, b, out);
}

/// One shifting step for incomparable sets with `min(A delta B)` in `A`.
fn shift_step(a: &FinSet, b: &FinSet, diff: &FinSet, m: u64) -> FinSet {
    let xs = diff.elements();
    let l = xs.len();
    let x_last = xs[l - 1];
    // Surplus of A over B on some suffix interval [x_j, x_l] reaching the
    // full distance forces the largest element out in the same step.
    let drop_last = (0..l).any(|j| {
        let lo = xs[j];
        a.count_in_interval(lo, x_last) as i64 - b.count_in_interval(lo, x_last) as i64
            == m as i64
    });
    let mut next = a.clone();
    for i in 0..l - 1 {
        if a.contains(xs[i]) && b.contains(xs[i + 1]) {
            next = next.remove(xs[i]).insert(xs[i + 1]);
        }
    }
    if drop_last {
        next = next.remove(x_last);
    }
    next
}

/// Appends a common tail of fresh elements to every set of an
/// equal-cardinality family, raising the cardinality to `m` without changing
/// any pairwise distance. The tail starts right after the largest element
/// seen anywhere in the family.
pub fn lift_cardinality(family: &[FinSet], m: usize) -> Result<Vec<FinSet>, InterlacingError> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let k = first.len();
    if family.iter().any(|s| s.len() != k) {
        return Err(InterlacingError::CardinalityMismatch);
    }
    if m < k {
        return Err(InterlacingError::MTooSmall {
            target: m,
            current: k,
        });
    }
    let start = family.iter().filter_map(FinSet::max_elem).max().unwrap_or(0) + 1;
    let tail: Vec<u32> = (start..start + (m - k) as u32).collect();
    Ok(family
        .iter()
        .map(|s| {
            let mut elems = s.elements().to_vec();
            elems.extend_from_slice(&tail);
            FinSet::from_sorted(elems)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn fs(s: &str) -> FinSet {
        FinSet::parse(s).unwrap()
    }

    #[test]
    fn summing_norm_examples() {
        let s = FinSuppSeq::from_pairs([(1, rat_int(1)), (2, rat_int(-1))]);
        assert_eq!(summing_norm(&s), rat_int(1));
        let s = FinSuppSeq::from_pairs([(1, rat_int(1)), (2, rat_int(-2)), (3, rat_int(1))]);
        assert_eq!(summing_norm(&s), rat_int(2));
        assert_eq!(summing_norm(&FinSuppSeq::zero()), rat_int(0));
        // All-ones over a set sums the whole block.
        let ones = FinSuppSeq::indicator(&fs("1,2,3,4,5"));
        assert_eq!(summing_norm(&ones), rat_int(5));
    }

    #[test]
    fn d_sum_examples() {
        assert_eq!(d_sum(&fs("1,3"), &fs("2,4")), 1);
        assert_eq!(d_sum(&fs("1,2"), &fs("3,4")), 2);
        assert_eq!(d_sum(&fs("5"), &fs("")), 1);
        assert_eq!(d_sum(&fs(""), &fs("")), 0);
        assert_eq!(d_sum(&fs("1,2,3"), &fs("1,2,3")), 0);
        assert_eq!(d_sum(&fs("1,2,3"), &fs("")), 3);
    }

    #[test]
    fn d_sum_matches_indicator_norm() {
        let pairs = [("1,3", "2,4"), ("1,2", "3,4"), ("1,2,5,9", "3,9"), ("", "2,4,6")];
        for (a, b) in pairs {
            let (a, b) = (fs(a), fs(b));
            let norm = summing_norm(&FinSuppSeq::indicator(&a).sub(&FinSuppSeq::indicator(&b)));
            assert_eq!(norm, rat_int(d_sum(&a, &b) as i64));
        }
    }

    #[test]
    fn adjacency_examples() {
        assert!(is_adjacent(&fs("1,3,5"), &fs("2,4,6")));
        assert!(!is_adjacent(&fs("1,2"), &fs("4,5")));
        assert!(is_adjacent(&fs(""), &fs("7")));
        assert!(!is_adjacent(&fs(""), &fs("1,2")));
        assert!(!is_adjacent(&fs("1,2"), &fs("1,2")));
        // Cardinality gap of two is never adjacent.
        assert!(!is_adjacent(&fs("1"), &fs("2,3,4")));
        // One-sided containment with interlacing positions.
        assert!(is_adjacent(&fs("1,2,3"), &fs("2,3,4")));
    }

    #[test]
    fn left_shift_examples() {
        assert!(is_left_shift(&fs("1,3"), &fs("2,3")));
        assert!(is_left_shift(&fs("1,3"), &fs("1,4")));
        assert!(!is_left_shift(&fs("1,3"), &fs("1,3")));
        // 4 overtakes the next original element (3? no: pair (2,4) vs (1,3)
        // reversed direction) -- moving left is not a left shift.
        assert!(!is_left_shift(&fs("2,4"), &fs("1,3")));
        // a'_1 = 4 > a_2 = 3 overshoots the next element.
        assert!(!is_left_shift(&fs("1,3"), &fs("4,5")));
    }

    #[test]
    fn every_left_shift_is_one_step() {
        // Exhaustive over pairs of subsets of {1..7}.
        let sets: Vec<FinSet> = (0u32..128)
            .map(|mask| (1..=7).filter(|i| mask & (1 << (i - 1)) != 0).collect())
            .collect();
        let mut seen = 0;
        for a in &sets {
            for b in &sets {
                if is_left_shift(a, b) {
                    assert_eq!(d_sum(a, b), 1, "left shift {a} -> {b}");
                    assert!(is_adjacent(a, b), "left shift {a} -> {b}");
                    seen += 1;
                }
            }
        }
        assert!(seen > 100, "the sweep must actually hit left shifts");
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(bfs_distance(&fs("1,3"), &fs("2,4")), 1);
        assert_eq!(bfs_distance(&fs("1,2,3"), &fs("")), 3);
        assert_eq!(bfs_distance(&fs("2"), &fs("2")), 0);
        assert_eq!(bfs_distance(&fs("1,2"), &fs("3,4")), 2);
    }

    #[test]
    fn geodesic_spec_paths() {
        let g = geodesic(&fs("1,2"), &fs("3,4"));
        assert_eq!(g.len(), 2);
        assert_eq!(g.vertices()[1], fs("1,3"));

        let g = geodesic(&fs("1,2,3"), &fs("1"));
        assert_eq!(g.len(), 2);

        let g = geodesic(&fs("2,4"), &fs("2,4"));
        assert_eq!(g.len(), 0);
        assert_eq!(g.vertices(), &[fs("2,4")]);
    }

    #[test]
    fn geodesic_orientation_flip() {
        // min of the symmetric difference lies in b: the path is built from
        // b and reversed, endpoints must still be in order.
        let (a, b) = (fs("2,3"), fs("1,4"));
        let g = geodesic(&a, &b);
        assert_eq!(g.vertices().first().unwrap(), &a);
        assert_eq!(g.vertices().last().unwrap(), &b);
        assert_eq!(g.len(), d_sum(&a, &b));
    }

    #[test]
    fn geodesic_case_two_drops_the_top() {
        // Suffix surplus reaches the distance, so a step also removes the
        // largest symmetric-difference element.
        let (a, b) = (fs("1,3,4"), fs("2"));
        let g = geodesic(&a, &b);
        assert_eq!(g.len(), 2);
        assert_eq!(g.vertices()[1], fs("2,3"));
    }

    #[test]
    fn lift_cardinality_examples() {
        let fam = vec![fs("1,3"), fs("2,4")];
        let lifted = lift_cardinality(&fam, 3).unwrap();
        assert_eq!(lifted, vec![fs("1,3,5"), fs("2,4,5")]);
        assert_eq!(d_sum(&lifted[0], &lifted[1]), d_sum(&fam[0], &fam[1]));

        assert_eq!(
            lift_cardinality(&[fs("1")], 4).unwrap(),
            vec![fs("1,2,3,4")]
        );
        assert_eq!(lift_cardinality(&[], 5).unwrap(), Vec::<FinSet>::new());

        assert_eq!(
            lift_cardinality(&[fs("1,2"), fs("3")], 3),
            Err(InterlacingError::CardinalityMismatch)
        );
        assert_eq!(
            lift_cardinality(&[fs("1,2")], 1),
            Err(InterlacingError::MTooSmall {
                target: 1,
                current: 2
            })
        );
    }
}
