//! Ordinals below `w^w` in Cantor normal form.
//!
//! Text grammar, with `w` the first infinite ordinal:
//!
//! ```text
//! ordinal := term ("+" term)*
//! term    := "w" ("^" nat)? ("*" nat)? | nat
//! ```
//!
//! Terms are summed left to right with ordinal addition, so non-canonical
//! spellings like `1+w` collapse (to `w`); [`OrdinalCNF::parse`] reports
//! whether the input was already in canonical form. Comparison is
//! lexicographic on the normal form.

use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// An ordinal below `w^w`: a sum `w^e_1*c_1 + .. + w^e_k*c_k` with strictly
/// decreasing exponents and positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdinalCNF {
    /// `(exponent, coefficient)` pairs, exponents strictly decreasing.
    terms: Vec<(u32, u64)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("NOT_LIMIT: {0} is not a limit ordinal")]
    NotLimit(String),
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        OrdinalCNF { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(0, n)] }
        }
    }

    /// `w^exponent * coefficient`.
    pub fn omega_term(exponent: u32, coefficient: u64) -> Self {
        if coefficient == 0 {
            Self::zero()
        } else {
            OrdinalCNF {
                terms: vec![(exponent, coefficient)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_term(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is the finite ordinal `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// Nonzero with a limit last term (exponent at least 1). Zero is neither
    /// a limit nor a successor.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e >= 1)
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e == 0)
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.1 > 1 {
            last.1 -= 1;
        } else {
            terms.pop();
        }
        Some(OrdinalCNF { terms })
    }

    /// Ordinal addition: the right summand's leading exponent absorbs every
    /// smaller term on the left.
    pub fn add(&self, rhs: &Self) -> Self {
        let Some(&(lead_exp, lead_coeff)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e > lead_exp)
            .collect();
        let merged = if self
            .terms
            .iter()
            .any(|&(e, _)| e == lead_exp)
        {
            let c = self
                .terms
                .iter()
                .find(|&&(e, _)| e == lead_exp)
                .unwrap()
                .1;
            c + lead_coeff
        } else {
            lead_coeff
        };
        terms.push((lead_exp, merged));
        terms.extend(rhs.terms.iter().skip(1).copied());
        OrdinalCNF { terms }
    }

    /// The canonical sequence `(b_n)` increasing to this limit ordinal: with
    /// last term `w^e * c`, drop one `w^e` and append `w^(e-1) * n`. So
    /// `w` yields `n` and `w^2` yields `w*n`.
    pub fn fundamental_seq(&self, n: u64) -> Result<Self, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.to_string()));
        }
        let mut terms = self.terms.clone();
        let (e, c) = *terms.last().unwrap();
        debug_assert!(e >= 1);
        if c > 1 {
            terms.last_mut().unwrap().1 = c - 1;
        } else {
            terms.pop();
        }
        if n > 0 {
            terms.push((e - 1, n));
        }
        Ok(OrdinalCNF { terms })
    }

    /// Parses the grammar; the boolean is true when the input (ignoring
    /// whitespace) already is the canonical rendering of its value.
    pub fn parse(input: &str) -> Result<(Self, bool), OrdinalError> {
        let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(OrdinalError::Parse("empty ordinal".to_owned()));
        }
        let mut value = OrdinalCNF::zero();
        for raw_term in cleaned.split('+') {
            let term = Self::parse_term(raw_term)?;
            value = value.add(&term);
        }
        let canonical = value.to_string() == cleaned;
        Ok((value, canonical))
    }

    fn parse_term(term: &str) -> Result<Self, OrdinalError> {
        if term.is_empty() {
            return Err(OrdinalError::Parse("empty term".to_owned()));
        }
        if let Some(rest) = term.strip_prefix('w') {
            let (exp, rest) = if let Some(r) = rest.strip_prefix('^') {
                let (digits, tail) = Self::take_nat(r, term)?;
                (digits, tail)
            } else {
                (1, rest)
            };
            let coeff = if let Some(r) = rest.strip_prefix('*') {
                let (c, tail) = Self::take_nat(r, term)?;
                if !tail.is_empty() {
                    return Err(OrdinalError::Parse(format!("trailing input in {term:?}")));
                }
                c
            } else if rest.is_empty() {
                1
            } else {
                return Err(OrdinalError::Parse(format!("trailing input in {term:?}")));
            };
            let exp = u32::try_from(exp)
                .map_err(|_| OrdinalError::Parse(format!("exponent too large in {term:?}")))?;
            Ok(OrdinalCNF::omega_term(exp, coeff))
        } else {
            let n: u64 = term
                .parse()
                .map_err(|_| OrdinalError::Parse(format!("invalid term {term:?}")))?;
            Ok(OrdinalCNF::from_nat(n))
        }
    }

    /// Reads a leading decimal number, returns it and the remaining input.
    fn take_nat<'a>(s: &'a str, context: &str) -> Result<(u64, &'a str), OrdinalError> {
        let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            return Err(OrdinalError::Parse(format!("expected number in {context:?}")));
        }
        let n = s[..end]
            .parse()
            .map_err(|_| OrdinalError::Parse(format!("number too large in {context:?}")))?;
        Ok((n, &s[end..]))
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalCNF {
    /// Lexicographic comparison of normal forms, which is the ordinal order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|&(e, c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".to_owned(),
                (1, c) => format!("w*{c}"),
                (e, 1) => format!("w^{e}"),
                (e, c) => format!("w^{e}*{c}"),
            })
            .collect();
        write!(f, "{}", rendered.join("+"))
    }
}
