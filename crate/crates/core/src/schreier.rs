//! Schreier families and the points they support.
//!
//! The family `S_alpha` of finite subsets of the positive integers is built
//! by transfinite recursion: `S_0` holds the singletons; `S_(alpha+1)` holds
//! every union of `n` consecutive blocks from `S_alpha` whose first element
//! is at least `n`; at a limit, `A` belongs when it belongs to `S_(beta_n)`
//! for some `n <= min(A)` along the canonical fundamental sequence. The empty
//! set belongs to every family.
//!
//! Membership recurses on that definition with backtracking over block
//! boundaries; enumeration builds members constructively, so filtering all
//! subsets through the membership test is an independent cross-check.

use crate::ordinal::{OrdinalCNF, OrdinalError};
use crate::rational::Rational;
use crate::set::FinSet;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchreierError {
    #[error("BUDGET_EXCEEDED: enumeration grew past {0} entries")]
    BudgetExceeded(usize),
    #[error("SEARCH_EXHAUSTED: no admissible element found below {0}")]
    SearchExhausted(u32),
    #[error("PARSE_ERROR: spreading list must be strictly increasing positive with length >= {0}")]
    BadSpreadingList(u32),
    #[error("PARSE_ERROR: the source ordinal must be strictly below the target ordinal")]
    AlphaNotBelowBeta,
    #[error("PARSE_ERROR: point support {0} is not in the declared family")]
    SupportNotInFamily(FinSet),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

type MemberMemo = HashMap<OrdinalCNF, HashMap<FinSet, bool>>;

/// Whether `a` belongs to `S_alpha`. The empty set always does; at level 0
/// exactly the singletons do.
pub fn schreier_member(a: &FinSet, alpha: &OrdinalCNF) -> bool {
    let mut memo = MemberMemo::new();
    member_memo(a, alpha, &mut memo)
}

fn member_memo(a: &FinSet, alpha: &OrdinalCNF, memo: &mut MemberMemo) -> bool {
    if a.is_empty() {
        return true;
    }
    if let Some(&cached) = memo.get(alpha).and_then(|by_set| by_set.get(a)) {
        return cached;
    }
    let result = if alpha.is_zero() {
        a.len() == 1
    } else if let Some(gamma) = alpha.pred() {
        let max_blocks = a.min_elem().expect("nonempty") as usize;
        splits_into_blocks(a.elements(), &gamma, max_blocks, memo)
    } else {
        let min_a = a.min_elem().expect("nonempty") as u64;
        (1..=min_a).any(|n| {
            let alpha_n = alpha.fundamental_seq(n).expect("limit ordinal");
            member_memo(a, &alpha_n, memo)
        })
    };
    memo.entry(alpha.clone())
        .or_default()
        .insert(a.clone(), result);
    result
}

/// Backtracking search for a split of `elems` into at most `blocks_left`
/// consecutive nonempty blocks, each a member one level down.
fn splits_into_blocks(
    elems: &[u32],
    gamma: &OrdinalCNF,
    blocks_left: usize,
    memo: &mut MemberMemo,
) -> bool {
    if elems.is_empty() {
        return true;
    }
    if blocks_left == 0 {
        return false;
    }
    for cut in 1..=elems.len() {
        let block = FinSet::from_sorted(elems[..cut].to_vec());
        if member_memo(&block, gamma, memo)
            && splits_into_blocks(&elems[cut..], gamma, blocks_left - 1, memo)
        {
            return true;
        }
    }
    false
}

type EnumMemo = HashMap<OrdinalCNF, Rc<Vec<FinSet>>>;

/// All members of `S_alpha` with elements in `{1..n}`, sorted. Fails with
/// `BUDGET_EXCEEDED` when the result would outgrow `limit` entries.
///
/// Members are generated from the recursion itself (block assembly at
/// successors, fundamental-sequence union at limits), not by filtering the
/// power set, so agreement with [`schreier_member`] is a meaningful check.
pub fn schreier_enumerate(
    alpha: &OrdinalCNF,
    n: u32,
    limit: usize,
) -> Result<Vec<FinSet>, SchreierError> {
    let mut memo = EnumMemo::new();
    let all = enumerate_memo(alpha, n, limit, &mut memo)?;
    Ok((*all).clone())
}

fn enumerate_memo(
    alpha: &OrdinalCNF,
    n: u32,
    limit: usize,
    memo: &mut EnumMemo,
) -> Result<Rc<Vec<FinSet>>, SchreierError> {
    if let Some(cached) = memo.get(alpha) {
        return Ok(cached.clone());
    }
    let mut out: BTreeSet<FinSet> = BTreeSet::new();
    out.insert(FinSet::empty());
    if alpha.is_zero() {
        for i in 1..=n {
            out.insert(FinSet::from_sorted(vec![i]));
        }
    } else if let Some(gamma) = alpha.pred() {
        let base = enumerate_memo(&gamma, n, limit, memo)?;
        let nonempty: Vec<FinSet> = base.iter().filter(|s| !s.is_empty()).cloned().collect();
        for first in &nonempty {
            let budget = first.min_elem().expect("nonempty") as usize - 1;
            assemble_unions(first.elements().to_vec(), budget, &nonempty, limit, &mut out)?;
        }
    } else {
        for j in 1..=u64::from(n) {
            let alpha_j = alpha.fundamental_seq(j)?;
            let base = enumerate_memo(&alpha_j, n, limit, memo)?;
            for s in base.iter() {
                if s.min_elem().is_some_and(|m| u64::from(m) >= j) {
                    out.insert(s.clone());
                }
            }
            if out.len() > limit {
                return Err(SchreierError::BudgetExceeded(limit));
            }
        }
    }
    if out.len() > limit {
        return Err(SchreierError::BudgetExceeded(limit));
    }
    let rc = Rc::new(out.into_iter().collect::<Vec<_>>());
    memo.insert(alpha.clone(), rc.clone());
    Ok(rc)
}

/// Every prefix of a block chain is itself a member (it uses fewer blocks),
/// so record `acc` and extend it with any later block while budget remains.
fn assemble_unions(
    acc: Vec<u32>,
    budget: usize,
    nonempty: &[FinSet],
    limit: usize,
    out: &mut BTreeSet<FinSet>,
) -> Result<(), SchreierError> {
    let last = *acc.last().expect("accumulated union is nonempty");
    out.insert(FinSet::from_sorted(acc.clone()));
    if out.len() > limit {
        return Err(SchreierError::BudgetExceeded(limit));
    }
    if budget == 0 {
        return Ok(());
    }
    for next in nonempty {
        if next.min_elem().expect("nonempty") > last {
            let mut extended = acc.clone();
            extended.extend(next.iter());
            assemble_unions(extended, budget - 1, nonempty, limit, out)?;
        }
    }
    Ok(())
}

/// Applies the substitution `i -> l[i-1]` to a set of indices.
fn map_through(l: &[u32], a: &FinSet) -> FinSet {
    FinSet::from_sorted(a.iter().map(|i| l[(i - 1) as usize]).collect())
}

/// Whether the strictly increasing list `l` carries every member of
/// `S_alpha` with elements in `{1..n}` into `S_beta` under `i -> l[i-1]`.
pub fn spreading_check(
    l: &[u32],
    alpha: &OrdinalCNF,
    beta: &OrdinalCNF,
    n: u32,
) -> Result<bool, SchreierError> {
    if alpha >= beta {
        return Err(SchreierError::AlphaNotBelowBeta);
    }
    if l.len() < n as usize
        || l.first().is_some_and(|&x| x == 0)
        || l.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(SchreierError::BadSpreadingList(n));
    }
    let members = schreier_enumerate(alpha, n, 1 << n)?;
    let mut memo = MemberMemo::new();
    Ok(members
        .iter()
        .all(|a| member_memo(&map_through(l, a), beta, &mut memo)))
}

/// Greedy search for a spreading list: each position takes the smallest
/// element above its predecessor that keeps every member ending there inside
/// `S_beta`. Local success at every position implies the full check, which
/// is still re-run before returning.
pub fn spreading_search(
    alpha: &OrdinalCNF,
    beta: &OrdinalCNF,
    n: u32,
    max_element: u32,
) -> Result<Vec<u32>, SchreierError> {
    if alpha >= beta {
        return Err(SchreierError::AlphaNotBelowBeta);
    }
    let members = schreier_enumerate(alpha, n, 1 << n)?;
    let mut memo = MemberMemo::new();
    let mut l: Vec<u32> = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let relevant: Vec<&FinSet> = members
            .iter()
            .filter(|a| a.max_elem() == Some(i))
            .collect();
        let start = l.last().map_or(1, |&p| p + 1);
        let mut found = false;
        for cand in start..=max_element {
            l.push(cand);
            if relevant
                .iter()
                .all(|a| member_memo(&map_through(&l, a), beta, &mut memo))
            {
                found = true;
                break;
            }
            l.pop();
        }
        if !found {
            return Err(SchreierError::SearchExhausted(max_element));
        }
    }
    debug_assert_eq!(spreading_check(&l, alpha, beta, n), Ok(true));
    Ok(l)
}

/// A finitely supported point `sum of c_i e_i` whose support lies in a
/// Schreier family; coefficients are nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SchreierPoint {
    coeffs: BTreeMap<u32, Rational>,
}

impl SchreierPoint {
    /// Validates that coefficients are nonzero and the support belongs to
    /// `S_alpha`.
    pub fn new(
        coeffs: BTreeMap<u32, Rational>,
        alpha: &OrdinalCNF,
    ) -> Result<Self, SchreierError> {
        let coeffs: BTreeMap<u32, Rational> =
            coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let support = FinSet::from_sorted(coeffs.keys().copied().collect());
        if !schreier_member(&support, alpha) {
            return Err(SchreierError::SupportNotInFamily(support));
        }
        Ok(SchreierPoint { coeffs })
    }

    pub fn zero() -> Self {
        SchreierPoint {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn support(&self) -> FinSet {
        FinSet::from_sorted(self.coeffs.keys().copied().collect())
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Sup-metric between two points: the largest coefficient gap over the
/// union of supports.
pub fn d_inf(f: &SchreierPoint, g: &SchreierPoint) -> Rational {
    let mut best = Rational::zero();
    for i in f.coeffs.keys().chain(g.coeffs.keys()) {
        let fv = f.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        let gv = g.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        let gap = (fv - gv).abs();
        if gap > best {
            best = gap;
        }
    }
    best
}

/// Every point with support in `S_alpha` over `{1..n}` and integer
/// coefficients of magnitude `1..=m` (the zero point included), sorted.
pub fn schreier_points(
    alpha: &OrdinalCNF,
    n: u32,
    m: u32,
    limit: usize,
) -> Result<Vec<SchreierPoint>, SchreierError> {
    let supports = schreier_enumerate(alpha, n, limit)?;
    let palette: Vec<Rational> = (1..=i64::from(m))
        .flat_map(|c| [Rational::from_integer((-c).into()), Rational::from_integer(c.into())])
        .collect();
    let mut out: Vec<SchreierPoint> = Vec::new();
    for support in &supports {
        let elems: Vec<u32> = support.iter().collect();
        let mut stack: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new()];
        for &e in &elems {
            let mut next = Vec::with_capacity(stack.len() * palette.len());
            for partial in &stack {
                for c in &palette {
                    let mut extended = partial.clone();
                    extended.insert(e, c.clone());
                    next.push(extended);
                }
            }
            stack = next;
            if out.len() + stack.len() > limit {
                return Err(SchreierError::BudgetExceeded(limit));
            }
        }
        for coeffs in stack {
            out.push(SchreierPoint { coeffs });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn fs(s: &str) -> FinSet {
        FinSet::parse(s).unwrap()
    }

    fn ord(s: &str) -> OrdinalCNF {
        OrdinalCNF::parse(s).unwrap().0
    }

    #[test]
    fn level_zero_and_one_membership() {
        assert!(schreier_member(&fs(""), &ord("0")));
        assert!(schreier_member(&fs("4"), &ord("0")));
        assert!(!schreier_member(&fs("1,2"), &ord("0")));

        // S_1 holds the sets with cardinality at most their minimum.
        assert!(schreier_member(&fs("2,3"), &ord("1")));
        assert!(!schreier_member(&fs("1,2"), &ord("1")));
        assert!(schreier_member(&fs("3,5,9"), &ord("1")));
        assert!(!schreier_member(&fs("2,3,4"), &ord("1")));
    }

    #[test]
    fn level_two_membership() {
        assert!(schreier_member(&fs("2,3,4,5"), &ord("2")));
        assert!(!schreier_member(&fs("1,2"), &ord("2")));
        // {2, ..} with 5 elements: two blocks starting at 2 can cover at
        // most min 2 blocks; {2,3} + {4,5,6,7} needs block {4,5,6,7} in S_1,
        // which holds (4 elements, min 4).
        assert!(schreier_member(&fs("2,3,4,5,6,7"), &ord("2")));
        assert!(!schreier_member(&fs("1,2,3"), &ord("2")));
    }

    #[test]
    fn singletons_belong_everywhere() {
        for alpha in ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2"] {
            for e in [1u32, 2, 5, 8] {
                assert!(
                    schreier_member(&FinSet::from_sorted(vec![e]), &ord(alpha)),
                    "{{{e}}} in S_{alpha}"
                );
            }
            assert!(schreier_member(&fs(""), &ord(alpha)));
        }
    }

    #[test]
    fn limit_membership_uses_the_fundamental_sequence() {
        // A in S_w iff A in S_n for some n <= min(A).
        assert!(schreier_member(&fs("2,3"), &ord("w")));
        assert!(!schreier_member(&fs("1,2"), &ord("w")));
        // {3,4,5}: min 3, and S_3 on min-3 sets is generous enough.
        assert!(schreier_member(&fs("3,4,5"), &ord("w")));
    }

    #[test]
    fn enumerate_small_families() {
        let s1 = schreier_enumerate(&ord("1"), 3, 1000).unwrap();
        let expected: Vec<FinSet> = ["", "1", "2", "2,3", "3"].iter().map(|s| fs(s)).collect();
        let mut sorted = expected.clone();
        sorted.sort();
        assert_eq!(s1, sorted);

        // Count for S_1 over {1..5}: empty + 12 nonempty.
        let s1 = schreier_enumerate(&ord("1"), 5, 1000).unwrap();
        assert_eq!(s1.len(), 13);

        let s0 = schreier_enumerate(&ord("0"), 4, 1000).unwrap();
        assert_eq!(s0.len(), 5);
    }

    #[test]
    fn enumerate_budget_guard() {
        assert_eq!(
            schreier_enumerate(&ord("2"), 8, 3),
            Err(SchreierError::BudgetExceeded(3))
        );
    }

    #[test]
    fn enumerate_agrees_with_member_at_w() {
        let listed = schreier_enumerate(&ord("w"), 6, 10_000).unwrap();
        let filtered: Vec<FinSet> = (0u32..64)
            .map(|mask| (1..=6).filter(|i| mask & (1 << (i - 1)) != 0).collect())
            .filter(|a| schreier_member(a, &ord("w")))
            .collect();
        let mut filtered = filtered;
        filtered.sort();
        assert_eq!(listed, filtered);
    }

    #[test]
    fn spreading_identity_carries_one_level_up() {
        // A single block is always allowed, so S_alpha sits inside
        // S_(alpha+1) and the identity list passes.
        assert_eq!(spreading_check(&[1, 2, 3], &ord("1"), &ord("2"), 3), Ok(true));
        assert_eq!(spreading_check(&[1, 2, 3, 4, 5, 6], &ord("2"), &ord("w"), 6), Ok(true));
    }

    #[test]
    fn spreading_check_rejects_bad_input() {
        assert_eq!(
            spreading_check(&[2, 2, 3], &ord("1"), &ord("2"), 3),
            Err(SchreierError::BadSpreadingList(3))
        );
        assert_eq!(
            spreading_check(&[1, 2], &ord("1"), &ord("2"), 3),
            Err(SchreierError::BadSpreadingList(3))
        );
        assert_eq!(
            spreading_check(&[1, 2, 3], &ord("2"), &ord("1"), 3),
            Err(SchreierError::AlphaNotBelowBeta)
        );
    }

    #[test]
    fn spreading_search_returns_a_verified_list() {
        let l = spreading_search(&ord("1"), &ord("2"), 4, 100).unwrap();
        assert_eq!(l.len(), 4);
        assert!(spreading_check(&l, &ord("1"), &ord("2"), 4).unwrap());
        // Greedy picks the smallest viable prefix.
        assert_eq!(l, vec![1, 2, 3, 4]);
    }

    #[test]
    fn spreading_search_exhausts_on_tiny_bound() {
        // Only elements up to 2 are allowed but 3 positions are needed.
        assert_eq!(
            spreading_search(&ord("1"), &ord("2"), 3, 2),
            Err(SchreierError::SearchExhausted(2))
        );
    }

    #[test]
    fn points_at_level_zero() {
        let pts = schreier_points(&ord("0"), 2, 1, 1000).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts.iter().filter(|p| !p.is_zero()).count(), 4);
        for p in &pts {
            assert!(p.support().len() <= 1);
        }
    }

    #[test]
    fn point_constructor_validates_support() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, rat_int(1));
        coeffs.insert(2, rat_int(1));
        assert!(matches!(
            SchreierPoint::new(coeffs.clone(), &ord("1")),
            Err(SchreierError::SupportNotInFamily(_))
        ));
        // Zero coefficients drop out, shrinking the support into the family.
        coeffs.insert(1, rat_int(0));
        let p = SchreierPoint::new(coeffs, &ord("1")).unwrap();
        assert_eq!(p.support(), fs("2"));
    }

    #[test]
    fn d_inf_examples() {
        let a = SchreierPoint::new(
            [(2, rat_int(2)), (3, rat_int(-1))].into_iter().collect(),
            &ord("1"),
        )
        .unwrap();
        let b = SchreierPoint::new([(2, rat_int(1))].into_iter().collect(), &ord("1")).unwrap();
        assert_eq!(d_inf(&a, &b), rat_int(1));
        assert_eq!(d_inf(&a, &a), rat_int(0));
        assert_eq!(d_inf(&b, &SchreierPoint::zero()), rat_int(1));
    }
}
