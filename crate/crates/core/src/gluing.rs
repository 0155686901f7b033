//! Gluing ball embeddings into four global maps.
//!
//! Given embeddings `h_r` of the balls of radius `r` around a basepoint,
//! each with the same compression modulus `rho` and expansion modulus
//! `omega`, four maps suffice to embed the whole space: pick radii
//! `r_0 < r_1 < ...` growing fast enough that `rho(r_{n+1}) > 2 omega(r_n)`
//! and `r_{n+1} >= 2 r_n`, cut space into shells with bump functions
//! supported on `(r_{n-4}, r_n)`, and let the `i`-th map send `x` to
//! `h_{r_n}(alpha_n(|x|) x)` for the first index `n = 4l + i` whose radius
//! exceeds `|x|`. Pairs of points then satisfy
//! `rho(t/2)/2 <= max_i d(F_i(x), F_i(y)) <= 8 omega(3t)` with `t` the
//! original distance, which `verify_glue` checks sample by sample.

use crate::modulus::Modulus;
use crate::rational::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GluingError {
    #[error("RHO_BOUNDED: the compression modulus never exceeds {0}, no valid radius exists")]
    RhoBounded(String),
    #[error("LADDER_TOO_SHORT: index {needed} requested but only {len} radii are available")]
    LadderTooShort { needed: usize, len: usize },
}

/// Increasing radii `r_0 = 0 < r_1 < ...`; indices below zero read as zero
/// so bump supports near the origin degenerate gracefully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiiLadder {
    radii: Vec<u64>,
}

impl RadiiLadder {
    /// Wraps explicit radii; they must start at zero and strictly increase.
    pub fn from_radii(radii: Vec<u64>) -> Self {
        assert!(!radii.is_empty() && radii[0] == 0, "ladder starts at r_0 = 0");
        assert!(
            radii.windows(2).all(|w| w[0] < w[1]),
            "radii must strictly increase"
        );
        RadiiLadder { radii }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `r_i`, with every negative index reading as zero.
    pub fn r(&self, i: i64) -> u64 {
        if i < 0 {
            0
        } else {
            self.radii[i as usize]
        }
    }

    pub fn radii(&self) -> &[u64] {
        &self.radii
    }
}

/// Builds `len` radii: `r_0 = 0` and `r_{n+1}` the least integer that is at
/// least `2 r_n`, exceeds `r_n`, and satisfies `rho(r_{n+1}) > 2 omega(r_n)`.
/// Fails when `rho` is bounded below the required level.
pub fn choose_radii(
    rho: &dyn Modulus,
    omega: &dyn Modulus,
    len: usize,
) -> Result<RadiiLadder, GluingError> {
    assert!(len >= 1);
    let mut radii = vec![0u64];
    while radii.len() < len {
        let prev = *radii.last().unwrap();
        let target = rat(2, 1) * omega.eval(&rat_u64(prev));
        if !rho.eventually_exceeds(&target) {
            return Err(GluingError::RhoBounded(target.to_string()));
        }
        let floor = prev.max(1).max(prev.saturating_mul(2));
        radii.push(least_exceeding(rho, &target, floor));
    }
    Ok(RadiiLadder { radii })
}

fn rat_u64(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Least integer `r >= floor` with `rho(r) > target`; `rho` is
/// nondecreasing, so double until past the target and binary search back.
fn least_exceeding(rho: &dyn Modulus, target: &Rational, floor: u64) -> u64 {
    let mut hi = floor.max(1);
    while rho.eval(&rat_u64(hi)) <= *target {
        hi = hi.saturating_mul(2).max(hi + 1);
    }
    let mut lo = floor;
    // Invariant: rho(hi) > target, and every admissible value is in [lo, hi].
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if rho.eval(&rat_u64(mid)) > *target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Piecewise-linear bump for shell `n`: zero up to `r_{n-4}`, ramps to one
/// by `r_{n-3}`, holds one through `r_{n-1}`, ramps back to zero at `r_n`.
/// Degenerate intervals collapse; the plateau wins at shared endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BumpFn {
    lo: u64,
    plateau_lo: u64,
    plateau_hi: u64,
    hi: u64,
}

impl BumpFn {
    pub fn new(ladder: &RadiiLadder, n: i64) -> Self {
        assert!(n >= 0 && (n as usize) < ladder.len(), "bump index in ladder");
        BumpFn {
            lo: ladder.r(n - 4),
            plateau_lo: ladder.r(n - 3),
            plateau_hi: ladder.r(n - 1),
            hi: ladder.r(n),
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let lo = rat_u64(self.lo);
        let plateau_lo = rat_u64(self.plateau_lo);
        let plateau_hi = rat_u64(self.plateau_hi);
        let hi = rat_u64(self.hi);
        if *t < lo || *t > hi {
            return Rational::zero();
        }
        if *t >= plateau_lo && *t <= plateau_hi {
            return Rational::one();
        }
        if *t < plateau_lo {
            // Here lo <= t < plateau_lo, so the ramp is nondegenerate.
            (t - lo.clone()) / (plateau_lo - lo)
        } else {
            (hi.clone() - t) / (hi - plateau_hi)
        }
    }
}

/// A family of embeddings of balls around a basepoint, one per radius, all
/// sharing compression and expansion moduli. Points must support norm,
/// distance, and scalar shrinking toward the basepoint.
pub trait BallEmbeddingProvider {
    type Point: Clone;
    type Image: Clone;

    fn basepoint(&self) -> Self::Point;
    /// Distance to the basepoint.
    fn norm(&self, x: &Self::Point) -> Rational;
    fn dist(&self, x: &Self::Point, y: &Self::Point) -> Rational;
    /// `c x` for `0 <= c <= 1`, contracting toward the basepoint.
    fn scale(&self, c: &Rational, x: &Self::Point) -> Self::Point;
    /// The embedding of the radius-`radius` ball, applied to `x` with
    /// `norm(x) <= radius`.
    fn embed_ball(&self, radius: u64, x: &Self::Point) -> Self::Image;
    fn image_dist(&self, a: &Self::Image, b: &Self::Image) -> Rational;
}

/// The four glued images of `x`. Component `i` uses the first shell index
/// `n = 4l + i` (with `l >= 1` when `i = 0`) whose radius exceeds `|x|`.
pub fn glue<P: BallEmbeddingProvider>(
    provider: &P,
    ladder: &RadiiLadder,
    x: &P::Point,
) -> Result<[P::Image; 4], GluingError> {
    let norm = provider.norm(x);
    let mut images = Vec::with_capacity(4);
    for i in 0..4i64 {
        let first_l = if i == 0 { 1 } else { 0 };
        let mut chosen = None;
        for l in first_l.. {
            let n = 4 * l + i;
            if n as usize >= ladder.len() {
                return Err(GluingError::LadderTooShort {
                    needed: n as usize,
                    len: ladder.len(),
                });
            }
            if norm < rat_u64(ladder.r(n)) {
                chosen = Some(n);
                break;
            }
        }
        let n = chosen.expect("loop either chooses or errors");
        let c = BumpFn::new(ladder, n).eval(&norm);
        let shrunk = provider.scale(&c, x);
        images.push(provider.embed_ball(ladder.r(n), &shrunk));
    }
    Ok(images.try_into().map_err(|_| ()).expect("exactly four images"))
}

/// Measurements for one pair: input distance, the largest component image
/// distance, and the band it must land in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueCheck {
    pub distance: Rational,
    pub observed: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

impl GlueCheck {
    pub fn ok(&self) -> bool {
        self.observed >= self.lower && self.observed <= self.upper
    }
}

/// Measures `max_i d(F_i(x), F_i(y))` against the band
/// `[rho(t/2)/2, 8 omega(3t)]`, `t` being the input distance.
pub fn glue_check<P: BallEmbeddingProvider>(
    provider: &P,
    ladder: &RadiiLadder,
    rho: &dyn Modulus,
    omega: &dyn Modulus,
    x: &P::Point,
    y: &P::Point,
) -> Result<GlueCheck, GluingError> {
    let fx = glue(provider, ladder, x)?;
    let fy = glue(provider, ladder, y)?;
    let observed = fx
        .iter()
        .zip(fy.iter())
        .map(|(a, b)| provider.image_dist(a, b))
        .max()
        .expect("four components");
    let t = provider.dist(x, y);
    let lower = rho.eval(&(t.clone() / rat(2, 1))) / rat(2, 1);
    let upper = rat(8, 1) * omega.eval(&(rat(3, 1) * t.clone()));
    Ok(GlueCheck {
        distance: t,
        observed,
        lower,
        upper,
    })
}

/// [`glue_check`] reduced to a pass/fail answer: the measurements when the
/// pair escapes the band, `None` when it passes.
pub fn verify_glue<P: BallEmbeddingProvider>(
    provider: &P,
    ladder: &RadiiLadder,
    rho: &dyn Modulus,
    omega: &dyn Modulus,
    x: &P::Point,
    y: &P::Point,
) -> Result<Option<GlueCheck>, GluingError> {
    let check = glue_check(provider, ladder, rho, omega, x, y)?;
    Ok(if check.ok() { None } else { Some(check) })
}

/// Rational `d`-space with the max norm, embedding every ball by the
/// identity: the simplest provider, with both moduli the identity.
#[derive(Debug, Clone)]
pub struct MaxNormSpace {
    dim: usize,
}

impl MaxNormSpace {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        MaxNormSpace { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl BallEmbeddingProvider for MaxNormSpace {
    type Point = Vec<Rational>;
    type Image = Vec<Rational>;

    fn basepoint(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim]
    }

    fn norm(&self, x: &Vec<Rational>) -> Rational {
        debug_assert_eq!(x.len(), self.dim);
        x.iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn dist(&self, x: &Vec<Rational>, y: &Vec<Rational>) -> Rational {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a.clone() - b).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn scale(&self, c: &Rational, x: &Vec<Rational>) -> Vec<Rational> {
        x.iter().map(|v| c * v).collect()
    }

    fn embed_ball(&self, _radius: u64, x: &Vec<Rational>) -> Vec<Rational> {
        x.clone()
    }

    fn image_dist(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Rational {
        self.dist(a, b)
    }
}
