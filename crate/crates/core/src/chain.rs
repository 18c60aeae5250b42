//! Weighted linear chains and their arithmetic.
//!
//! A chain `[a_1, ..., a_r]` stands for a linear dual graph whose `i`-th
//! vertex has self-intersection `-a_i`. The chain is directed: `a_1` is the
//! head and `a_r` the tail. A chain is *admissible* when it is non-empty and
//! every weight is at least 2.
//!
//! The discriminant `d(A)` is the determinant of the negated intersection
//! matrix, with `d([]) = 1`. For admissible chains the inductance
//! `e(A) = d(head_removed(A)) / d(A)` is a bijection onto the rationals in
//! `(0, 1)`; [`inverse_inductance`] realises the inverse map.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("chain {0} is not admissible (needs at least one entry, all entries >= 2)")]
    NotAdmissible(LinearChain),
    #[error("{0} needs a non-empty chain")]
    Empty(&'static str),
    #[error("inductance must lie strictly between 0 and 1, got {0}")]
    OutOfRange(String),
    #[error("chain weight {0} does not fit in a 64-bit integer")]
    Overflow(BigInt),
    #[error("cannot parse chain {0:?}: {1}")]
    Parse(String, String),
}

/// A directed weighted linear chain; entry `i` is `-(D_i^2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearChain {
    weights: Vec<i64>,
}

impl LinearChain {
    pub fn new(weights: Vec<i64>) -> Self {
        LinearChain { weights }
    }

    pub fn empty() -> Self {
        LinearChain { weights: Vec::new() }
    }

    /// `[m, m, ..., m]` with `n` entries.
    pub fn repeated(m: i64, n: usize) -> Self {
        LinearChain { weights: vec![m; n] }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_admissible(&self) -> bool {
        !self.weights.is_empty() && self.weights.iter().all(|&w| w >= 2)
    }

    fn require_admissible(&self) -> Result<(), ChainError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(ChainError::NotAdmissible(self.clone()))
        }
    }

    /// `[self, w]`.
    pub fn pushed(&self, w: i64) -> Self {
        let mut weights = self.weights.clone();
        weights.push(w);
        LinearChain { weights }
    }

    /// Plain concatenation `[self, other]`.
    pub fn concat(&self, other: &LinearChain) -> Self {
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        LinearChain { weights }
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant(self)
    }
}

impl From<Vec<i64>> for LinearChain {
    fn from(weights: Vec<i64>) -> Self {
        LinearChain { weights }
    }
}

impl fmt::Display for LinearChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for LinearChain {
    type Err = ChainError;

    /// Accepts `[2,2,3]`, `[ 2, 2, 3 ]` and `[]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |why: &str| ChainError::Parse(s.to_string(), why.to_string());
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("expected brackets"))?;
        if body.trim().is_empty() {
            return Ok(LinearChain::empty());
        }
        let weights = body
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| err(&e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinearChain { weights })
    }
}

/// An inductance value, a reduced rational strictly inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inductance(BigRational);

impl Inductance {
    pub fn new(value: BigRational) -> Result<Self, ChainError> {
        if value.is_positive() && value < BigRational::one() {
            Ok(Inductance(value))
        } else {
            Err(ChainError::OutOfRange(format!("{}/{}", value.numer(), value.denom())))
        }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, ChainError> {
        if denom == 0 {
            return Err(ChainError::OutOfRange(format!("{numer}/0")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// `1 - e`, which is again an inductance.
    pub fn complement(&self) -> Inductance {
        Inductance(BigRational::one() - &self.0)
    }
}

impl fmt::Display for Inductance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Inductance {
    type Err = ChainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let q: crate::rational::Q =
            s.parse().map_err(|e: crate::rational::ParseQError| ChainError::Parse(s.to_string(), e.to_string()))?;
        Inductance::new(q.0)
    }
}

/// `d(c)`, evaluated by the three-term recurrence from the tail.
pub fn discriminant(c: &LinearChain) -> BigInt {
    // d of the suffix starting at k, and of the suffix starting at k+1.
    let mut next = BigInt::one();
    let mut after = BigInt::zero();
    for &a in c.weights.iter().rev() {
        let cur = BigInt::from(a) * &next - &after;
        after = std::mem::replace(&mut next, cur);
    }
    next
}

pub fn inductance(c: &LinearChain) -> Result<Inductance, ChainError> {
    c.require_admissible()?;
    let tail = head_removed(c)?;
    Inductance::new(BigRational::new(discriminant(&tail), discriminant(c)))
}

/// The unique admissible chain with inductance `q`.
///
/// Expands `1/q` as a ceiling continued fraction
/// `x = a_1 - 1/(a_2 - 1/(...))`.
pub fn inverse_inductance(q: &Inductance) -> Result<LinearChain, ChainError> {
    let mut x = q.0.recip();
    let mut weights = Vec::new();
    loop {
        let a = x.ceil();
        let w = a.to_integer();
        weights.push(w.to_i64().ok_or_else(|| ChainError::Overflow(w.clone()))?);
        let rest = a - &x;
        if rest.is_zero() {
            break;
        }
        x = rest.recip();
    }
    Ok(LinearChain { weights })
}

/// `A* = e^{-1}(1 - e(transpose(A)))`.
pub fn adjoint(c: &LinearChain) -> Result<LinearChain, ChainError> {
    let e = inductance(&transpose(c))?;
    inverse_inductance(&e.complement())
}

/// `A ⋆ B = [tail_removed(A), a_r + b_1 - 1, head_removed(B)]`.
pub fn star(a: &LinearChain, b: &LinearChain) -> Result<LinearChain, ChainError> {
    let (Some(&last), Some(&first)) = (a.weights.last(), b.weights.first()) else {
        return Err(ChainError::Empty("star"));
    };
    let mut weights = Vec::with_capacity(a.len() + b.len() - 1);
    weights.extend_from_slice(&a.weights[..a.len() - 1]);
    weights.push(last + first - 1);
    weights.extend_from_slice(&b.weights[1..]);
    Ok(LinearChain { weights })
}

/// Left fold of [`star`] over a non-empty sequence of chains.
pub fn star_all<'a, I>(chains: I) -> Result<LinearChain, ChainError>
where
    I: IntoIterator<Item = &'a LinearChain>,
{
    let mut it = chains.into_iter();
    let first = it.next().ok_or(ChainError::Empty("star"))?.clone();
    it.try_fold(first, |acc, c| star(&acc, c))
}

pub fn transpose(c: &LinearChain) -> LinearChain {
    LinearChain { weights: c.weights.iter().rev().copied().collect() }
}

pub fn head_removed(c: &LinearChain) -> Result<LinearChain, ChainError> {
    match c.weights.split_first() {
        Some((_, rest)) => Ok(LinearChain { weights: rest.to_vec() }),
        None => Err(ChainError::Empty("head removal")),
    }
}

pub fn tail_removed(c: &LinearChain) -> Result<LinearChain, ChainError> {
    match c.weights.split_last() {
        Some((_, rest)) => Ok(LinearChain { weights: rest.to_vec() }),
        None => Err(ChainError::Empty("tail removal")),
    }
}

/// `[2, 2, ..., 2]` with `n` entries; `tw(0)` is empty.
pub fn tw(n: usize) -> LinearChain {
    LinearChain::repeated(2, n)
}

/// `gcd(d(A), d(head_removed(A)))`, exposed for the coprimality invariant.
pub fn discriminant_gcd(c: &LinearChain) -> Result<BigInt, ChainError> {
    let tail = head_removed(c)?;
    Ok(discriminant(c).gcd(&discriminant(&tail)))
}
