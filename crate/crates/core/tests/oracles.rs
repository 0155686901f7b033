//! Every quantity with a fast implementation is recomputed here along an
//! independent route, straight from its definition, and the two answers are
//! compared exactly: interval counting versus the linear walk, indicator
//! norms versus set distance, adjacency versus distance one, coordinate
//! sums versus metric distance. Scales are chosen so the sweeps are
//! exhaustive where feasible and seeded where not.

// Matrix sweeps read best with explicit indices.
#![allow(clippy::needless_range_loop)]

use interlace::embedding::{claim1_embed, EvenMetric};
use interlace::interlacing::{d_sum, is_adjacent, summing_norm};
use interlace::rational::{rat, Rational};
use interlace::seq::FinSuppSeq;
use interlace::FinSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn power_set(top: u32) -> Vec<FinSet> {
    (0u32..(1 << top))
        .map(|mask| {
            FinSet::from_sorted((1..=top).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        })
        .collect()
}

/// The distance straight from its definition: maximum over integer
/// intervals of the count discrepancy. Quadratic in the ground size, no
/// prefix-sum shortcut.
fn interval_discrepancy(a: &FinSet, b: &FinSet) -> u64 {
    let top = a
        .elements()
        .last()
        .copied()
        .max(b.elements().last().copied())
        .unwrap_or(0);
    let count = |s: &FinSet, lo: u32, hi: u32| -> i64 {
        s.elements().iter().filter(|&&e| lo <= e && e <= hi).count() as i64
    };
    let mut best = 0i64;
    for lo in 1..=top {
        for hi in lo..=top {
            best = best.max((count(a, lo, hi) - count(b, lo, hi)).abs());
        }
    }
    best as u64
}

/// The summing norm straight from its definition, likewise without the
/// prefix-sum shortcut.
fn brute_force_norm(seq: &FinSuppSeq) -> Rational {
    let support: Vec<u32> = seq.support().elements().to_vec();
    let mut best = rat(0, 1);
    for i in 0..support.len() {
        for j in i..support.len() {
            let (lo, hi) = (support[i], support[j]);
            let mut sum = rat(0, 1);
            for (pos, v) in seq.iter() {
                if lo <= pos && pos <= hi {
                    sum += v;
                }
            }
            let abs = if sum < rat(0, 1) { -sum } else { sum };
            if abs > best {
                best = abs;
            }
        }
    }
    best
}

#[test]
fn interval_discrepancy_equals_walk_distance() {
    let sets = power_set(7);
    for a in &sets {
        for b in &sets {
            assert_eq!(
                interval_discrepancy(a, b),
                d_sum(a, b),
                "interval definition disagrees with the walk on ({a}, {b})"
            );
        }
    }
}

#[test]
fn indicator_difference_norm_equals_walk_distance() {
    let sets = power_set(6);
    for a in &sets {
        for b in &sets {
            let diff = FinSuppSeq::indicator(a).sub(&FinSuppSeq::indicator(b));
            assert_eq!(
                summing_norm(&diff),
                rat(d_sum(a, b) as i64, 1),
                "norm of indicator difference disagrees with the walk on ({a}, {b})"
            );
        }
    }
}

#[test]
fn summing_norm_matches_the_interval_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let support_size = rng.gen_range(0..=12usize);
        let mut pairs = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        while pairs.len() < support_size {
            let pos: u32 = rng.gen_range(1..=20);
            if used.insert(pos) {
                let v = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                pairs.push((pos, v));
            }
        }
        let seq = FinSuppSeq::from_pairs(pairs);
        assert_eq!(summing_norm(&seq), brute_force_norm(&seq));
    }
}

#[test]
fn adjacency_is_exactly_distance_one() {
    let sets = power_set(7);
    for a in &sets {
        for b in &sets {
            assert_eq!(
                is_adjacent(a, b),
                d_sum(a, b) == 1,
                "adjacency and distance one disagree on ({a}, {b})"
            );
        }
    }
    // In particular the empty set neighbors exactly the singletons.
    let empty = FinSet::empty();
    for s in &sets {
        assert_eq!(is_adjacent(&empty, s), s.len() == 1);
    }
}

#[test]
fn walk_distance_is_a_metric() {
    let sets = power_set(6);
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            let d = d_sum(a, b);
            assert_eq!(d == 0, i == j, "d({a}, {b}) = {d}");
            assert_eq!(d, d_sum(b, a), "asymmetry at ({a}, {b})");
        }
    }
    for a in &sets {
        for b in &sets {
            let direct = d_sum(a, b);
            for c in &sets {
                assert!(
                    direct <= d_sum(a, c) + d_sum(c, b),
                    "triangle violated at ({a}, {b}) through {c}"
                );
            }
        }
    }
}

#[test]
fn common_relabeling_of_ground_elements_preserves_distance() {
    // Any strictly increasing map of the ground set applied to both sides
    // leaves the distance alone: gaps between elements never matter, only
    // their order. Exhaust all increasing maps {1..6} -> {1..12}.
    let sets = power_set(6);
    let maps: Vec<Vec<u32>> = {
        let mut out = Vec::new();
        let mut pick = vec![0u32; 6];
        fn go(start: u32, depth: usize, pick: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if depth == 6 {
                out.push(pick.clone());
                return;
            }
            for v in start..=(7 + depth as u32) {
                pick[depth] = v;
                go(v + 1, depth + 1, pick, out);
            }
        }
        go(1, 0, &mut pick, &mut out);
        out
    };
    assert_eq!(maps.len(), 924);

    let apply = |map: &[u32], s: &FinSet| -> FinSet {
        FinSet::from_sorted(s.elements().iter().map(|&e| map[e as usize - 1]).collect())
    };
    for map in &maps {
        for i in 0..sets.len() {
            for j in i..sets.len() {
                let (a, b) = (&sets[i], &sets[j]);
                assert_eq!(
                    d_sum(&apply(map, a), &apply(map, b)),
                    d_sum(a, b),
                    "relabeling {map:?} changed d({a}, {b})"
                );
            }
        }
    }
}

#[test]
fn coordinate_differences_sum_to_the_even_distance() {
    // The exact embedding assigns each point an integer coordinate vector
    // whose consecutive partial sums telescope to distance differences, so
    // the summing norm of a coordinate difference recovers the metric; the
    // sets then realize the same number as a graph distance. Check both
    // routes against the input on random even metrics.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let mut dist = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 2 * rng.gen_range(1..=6);
                dist[i][j] = v;
                dist[j][i] = v;
            }
        }
        let m = dist.len();
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        let even = EvenMetric::new(labels, dist).unwrap();
        let exact = claim1_embed(&even).unwrap();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = FinSuppSeq::from_pairs(
                    exact.coords[i]
                        .iter()
                        .zip(&exact.coords[j])
                        .enumerate()
                        .map(|(t, (&x, &y))| (t as u32 + 1, rat(x as i64 - y as i64, 1))),
                );
                assert_eq!(
                    summing_norm(&diff),
                    rat(even.dist(i, j) as i64, 1),
                    "coordinate route broke at ({i}, {j})"
                );
                assert_eq!(
                    d_sum(&exact.sets[i], &exact.sets[j]),
                    even.dist(i, j),
                    "graph route broke at ({i}, {j})"
                );
            }
        }
    }
}
