//! Bunches of functions and the vines they form.
//!
//! A bunch over a ground set `G` assigns a point identifier to every
//! function `G -> E`, where `E` is a finite alphabet of rationals containing
//! 0. Bunch `chi` precedes `psi` when `chi`'s ground is an initial segment
//! of `psi`'s and `psi` restricts to `chi` there (functions extend by zero).
//! A vine is a finite set of bunches over one alphabet closed under
//! restriction; removing the maximal bunches is the derivative, and the
//! number of derivations to empty is the rank, mirroring tree rank.
//!
//! Bunch JSON: `{"ground":[2,5],"alphabet":["0","1"],"values":{"0,1":"p"}}`
//! with each key the function's values in ground order; a vine is a JSON
//! array of bunches sharing an alphabet.

use crate::modulus::Modulus;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::set::FinSet;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VineError {
    #[error("PARSE_ERROR: alphabet must contain 0 and have distinct entries")]
    BadAlphabet,
    #[error("PARSE_ERROR: values must cover every function from the ground set into the alphabet, got {got} of {expected}")]
    ValuesNotTotal { expected: u128, got: usize },
    #[error("PARSE_ERROR: value key {0:?} does not match the ground set and alphabet")]
    BadValueKey(String),
    #[error("NOT_A_VINE: restriction of the bunch over {ground} to its first {prefix_len} elements is missing or disagrees")]
    NotAVine { ground: FinSet, prefix_len: usize },
    #[error("NOT_A_VINE: bunches use different alphabets")]
    AlphabetMismatch,
    #[error("MISSING_DISTANCE: no distance for ({0}, {1})")]
    MissingDistance(String, String),
    #[error("PARSE_ERROR: the Lipschitz constant must be positive")]
    NonpositiveConstant,
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("{0}")]
    Family(String),
}

/// The vine of constant bunches over the members of the `alpha`-th Schreier
/// family inside `{1..n}`, all sharing one point. Members are closed under
/// initial segments, so the collection is a vine, and its rank equals the
/// rank of the corresponding tree of members.
pub fn schreier_vine(
    alpha: &crate::ordinal::OrdinalCNF,
    n: u32,
    alphabet: Vec<Rational>,
    limit: usize,
) -> Result<Vine, VineError> {
    let members = crate::schreier::schreier_enumerate(alpha, n, limit)
        .map_err(|e| VineError::Family(e.to_string()))?;
    let bunches = members
        .iter()
        .map(|a| Bunch::constant(a.clone(), alphabet.clone(), "o"))
        .collect::<Result<Vec<_>, _>>()?;
    Vine::new(bunches)
}

/// Assigns a point identifier to every function from `ground` into
/// `alphabet`; function keys are value vectors in ground order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bunch {
    ground: FinSet,
    alphabet: Vec<Rational>,
    values: BTreeMap<Vec<Rational>, String>,
}

impl Bunch {
    pub fn new(
        ground: FinSet,
        alphabet: Vec<Rational>,
        values: BTreeMap<Vec<Rational>, String>,
    ) -> Result<Self, VineError> {
        let distinct: BTreeSet<&Rational> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() || !alphabet.iter().any(Rational::is_zero) {
            return Err(VineError::BadAlphabet);
        }
        let expected = (alphabet.len() as u128)
            .checked_pow(ground.len() as u32)
            .unwrap_or(u128::MAX);
        if values.len() as u128 != expected {
            return Err(VineError::ValuesNotTotal {
                expected,
                got: values.len(),
            });
        }
        for key in values.keys() {
            if key.len() != ground.len() || key.iter().any(|v| !alphabet.contains(v)) {
                return Err(VineError::BadValueKey(render_key(key)));
            }
        }
        Ok(Bunch {
            ground,
            alphabet,
            values,
        })
    }

    /// A bunch sending every function to the same point.
    pub fn constant(
        ground: FinSet,
        alphabet: Vec<Rational>,
        point: &str,
    ) -> Result<Self, VineError> {
        let values = all_functions(&alphabet, ground.len())
            .into_iter()
            .map(|f| (f, point.to_owned()))
            .collect();
        Bunch::new(ground, alphabet, values)
    }

    pub fn ground(&self) -> &FinSet {
        &self.ground
    }

    pub fn alphabet(&self) -> &[Rational] {
        &self.alphabet
    }

    pub fn values(&self) -> &BTreeMap<Vec<Rational>, String> {
        &self.values
    }

    /// The bunch over the first `prefix_len` ground elements: each function
    /// there takes the value of its extension by zero.
    pub fn restrict(&self, prefix_len: usize) -> Bunch {
        assert!(prefix_len <= self.ground.len());
        let ground = FinSet::from_sorted(self.ground.elements()[..prefix_len].to_vec());
        let zero_tail = vec![Rational::zero(); self.ground.len() - prefix_len];
        let values = all_functions(&self.alphabet, prefix_len)
            .into_iter()
            .map(|f| {
                let mut key = f.clone();
                key.extend(zero_tail.iter().cloned());
                let v = self.values[&key].clone();
                (f, v)
            })
            .collect();
        Bunch {
            ground,
            alphabet: self.alphabet.clone(),
            values,
        }
    }

    /// `self` precedes `other`: same alphabet, `self`'s ground an initial
    /// segment of `other`'s, and `other` restricts to `self` there.
    pub fn precedes(&self, other: &Bunch) -> bool {
        if self.alphabet != other.alphabet
            || self.ground.len() > other.ground.len()
            || self.ground.elements() != &other.ground.elements()[..self.ground.len()]
        {
            return false;
        }
        other.restrict(self.ground.len()) == *self
    }

    /// Checks `(1/c) * gap <= d(x_f, x_g) <= c * gap` for every pair of
    /// functions, where `gap` is the sup-distance of the functions. Returns
    /// the first violating pair, or `None` when the bunch passes.
    pub fn check_lipschitz(
        &self,
        dist: &DistanceTable,
        c: &Rational,
    ) -> Result<Option<BunchViolation>, VineError> {
        if *c <= Rational::zero() {
            return Err(VineError::NonpositiveConstant);
        }
        let inv = Rational::from_integer(1.into()) / c;
        self.check_bounds(dist, |gap| inv.clone() * gap, |gap| c.clone() * gap)
    }

    /// Coarse variant: `rho(gap) <= d(x_f, x_g) <= omega(gap)`.
    pub fn check_coarse(
        &self,
        dist: &DistanceTable,
        rho: &dyn Modulus,
        omega: &dyn Modulus,
    ) -> Result<Option<BunchViolation>, VineError> {
        self.check_bounds(dist, |gap| rho.eval(gap), |gap| omega.eval(gap))
    }

    fn check_bounds(
        &self,
        dist: &DistanceTable,
        lower: impl Fn(&Rational) -> Rational,
        upper: impl Fn(&Rational) -> Rational,
    ) -> Result<Option<BunchViolation>, VineError> {
        let funcs: Vec<&Vec<Rational>> = self.values.keys().collect();
        for (i, f) in funcs.iter().enumerate() {
            for g in &funcs[i + 1..] {
                let gap = sup_gap(f, g);
                let observed = dist.get(&self.values[*f], &self.values[*g])?;
                let (lo, hi) = (lower(&gap), upper(&gap));
                if observed < lo || observed > hi {
                    return Ok(Some(BunchViolation {
                        f: render_key(f),
                        g: render_key(g),
                        gap,
                        observed,
                        lower: lo,
                        upper: hi,
                    }));
                }
            }
        }
        Ok(None)
    }

    fn from_json_value(raw: BunchJson) -> Result<Self, VineError> {
        let ground = FinSet::from_elements(raw.ground)
            .map_err(|e| VineError::Parse(e.to_string()))?;
        let alphabet = raw
            .alphabet
            .iter()
            .map(|s| parse_rational(s).map_err(|e| VineError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut values = BTreeMap::new();
        for (key, point) in raw.values {
            values.insert(parse_key(&key)?, point);
        }
        Bunch::new(ground, alphabet, values)
    }

    fn to_json_value(&self) -> BunchJson {
        BunchJson {
            ground: self.ground.elements().to_vec(),
            alphabet: self.alphabet.iter().map(format_rational).collect(),
            values: self
                .values
                .iter()
                .map(|(k, v)| (render_key(k), v.clone()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, VineError> {
        let raw: BunchJson =
            serde_json::from_str(text).map_err(|e| VineError::Parse(e.to_string()))?;
        Bunch::from_json_value(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("bunch serialization cannot fail")
    }
}

/// A pair of functions in one bunch whose point distance escapes the
/// required band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BunchViolation {
    pub f: String,
    pub g: String,
    pub gap: Rational,
    pub observed: Rational,
    pub lower: Rational,
    pub upper: Rational,
}

/// Symmetric lookup table of point distances; identical identifiers are at
/// distance zero.
#[derive(Debug, Clone, Default)]
pub struct DistanceTable {
    entries: BTreeMap<(String, String), Rational>,
}

impl DistanceTable {
    pub fn new(entries: impl IntoIterator<Item = ((String, String), Rational)>) -> Self {
        DistanceTable {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, a: &str, b: &str, d: Rational) {
        self.entries.insert((a.to_owned(), b.to_owned()), d);
    }

    pub fn get(&self, a: &str, b: &str) -> Result<Rational, VineError> {
        if a == b {
            return Ok(Rational::zero());
        }
        self.entries
            .get(&(a.to_owned(), b.to_owned()))
            .or_else(|| self.entries.get(&(b.to_owned(), a.to_owned())))
            .cloned()
            .ok_or_else(|| VineError::MissingDistance(a.to_owned(), b.to_owned()))
    }
}

/// A finite set of bunches over one alphabet, closed under restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vine {
    bunches: BTreeSet<Bunch>,
}

impl Vine {
    pub fn empty() -> Self {
        Vine {
            bunches: BTreeSet::new(),
        }
    }

    /// Validates the common alphabet and closure under restriction: every
    /// initial-segment restriction of a member must itself be a member.
    pub fn new(bunches: impl IntoIterator<Item = Bunch>) -> Result<Self, VineError> {
        let bunches: BTreeSet<Bunch> = bunches.into_iter().collect();
        let mut alphabets = bunches.iter().map(Bunch::alphabet);
        if let Some(first) = alphabets.next() {
            if alphabets.any(|a| a != first) {
                return Err(VineError::AlphabetMismatch);
            }
        }
        for bunch in &bunches {
            for prefix_len in 0..bunch.ground().len() {
                if !bunches.contains(&bunch.restrict(prefix_len)) {
                    return Err(VineError::NotAVine {
                        ground: bunch.ground().clone(),
                        prefix_len,
                    });
                }
            }
        }
        Ok(Vine { bunches })
    }

    pub fn bunches(&self) -> &BTreeSet<Bunch> {
        &self.bunches
    }

    pub fn len(&self) -> usize {
        self.bunches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bunches.is_empty()
    }

    /// Removes the maximal bunches: what survives is exactly the set of
    /// one-step restrictions of members, which stays closed.
    pub fn derivative(&self) -> Vine {
        let bunches: BTreeSet<Bunch> = self
            .bunches
            .iter()
            .filter(|b| !b.ground().is_empty())
            .map(|b| b.restrict(b.ground().len() - 1))
            .collect();
        Vine { bunches }
    }

    /// Number of derivations until empty.
    pub fn rank(&self) -> u64 {
        let mut current = self.clone();
        let mut r = 0;
        while !current.is_empty() {
            current = current.derivative();
            r += 1;
        }
        r
    }

    pub fn from_json(text: &str) -> Result<Self, VineError> {
        let raw: Vec<BunchJson> =
            serde_json::from_str(text).map_err(|e| VineError::Parse(e.to_string()))?;
        let bunches = raw
            .into_iter()
            .map(Bunch::from_json_value)
            .collect::<Result<Vec<_>, _>>()?;
        Vine::new(bunches)
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<BunchJson> = self.bunches.iter().map(Bunch::to_json_value).collect();
        serde_json::to_string(&raw).expect("vine serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BunchJson {
    ground: Vec<u32>,
    alphabet: Vec<String>,
    values: BTreeMap<String, String>,
}

/// All functions from a `len`-element ground set into the alphabet, as value
/// vectors, in lexicographic alphabet order.
fn all_functions(alphabet: &[Rational], len: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for f in &out {
            for a in alphabet {
                let mut g = f.clone();
                g.push(a.clone());
                next.push(g);
            }
        }
        out = next;
    }
    out
}

fn sup_gap(f: &[Rational], g: &[Rational]) -> Rational {
    let mut best = Rational::zero();
    for (a, b) in f.iter().zip(g) {
        let gap = (a.clone() - b).abs();
        if gap > best {
            best = gap;
        }
    }
    best
}

fn render_key(key: &[Rational]) -> String {
    key.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn parse_key(key: &str) -> Result<Vec<Rational>, VineError> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|tok| parse_rational(tok).map_err(|e| VineError::Parse(e.to_string())))
        .collect()
}
