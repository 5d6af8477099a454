//! Mixed moments by coefficient matching.
//!
//! With the normalization `C = 1`, the identity
//! `∫ (Σ vⱼ Jⱼ)^(2m) = (Σ vⱼ²)^m` holds as polynomials in `v`. Matching the
//! coefficient of `∏ vⱼ^rⱼ` on both sides determines every moment
//! `∫ ∏ Jⱼ^rⱼ` of total degree `2m`, and summing the multinomial expansion of
//! `(Σ Jⱼ²)^m` against those moments reproduces `I(m, n)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_core::{binomial, factorial, BigRational};

/// Exponent vector `(r₁, …, rₙ)` of a monomial moment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    parts: Vec<u64>,
}

impl MultiIndex {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("multi-index needs at least one part".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Multinomial coefficient `|r|! / ∏ rⱼ!`.
    pub fn multinomial(&self) -> BigInt {
        // Product of binomials avoids the large intermediate |r|!.
        let mut acc = BigInt::one();
        let mut running = 0;
        for &r in &self.parts {
            running += r;
            acc *= binomial(running, r);
        }
        acc
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Lazily enumerates every `n`-tuple of non-negative integers summing to `m`.
///
/// Tuples come out with the first part descending, e.g. `(2,0), (1,1), (0,2)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.current.as_mut()?;
        let out = MultiIndex {
            parts: current.clone(),
        };
        // Find the rightmost non-zero part that is not the last one, move one
        // unit to its right neighbour and sweep the tail into that neighbour.
        let n = current.len();
        let pivot = (0..n.saturating_sub(1)).rev().find(|&i| current[i] > 0);
        match pivot {
            Some(i) => {
                let tail: u64 = current[i + 1..].iter().sum();
                current[i] -= 1;
                for part in &mut current[i + 1..] {
                    *part = 0;
                }
                current[i + 1] = tail + 1;
            }
            None => self.current = None,
        }
        Some(out)
    }
}

pub fn compositions(m: u64, n: usize) -> Result<Compositions> {
    if n == 0 {
        return Err(Error::Domain("compositions need at least one part".into()));
    }
    let mut first = vec![0; n];
    first[0] = m;
    Ok(Compositions {
        current: Some(first),
    })
}

/// `∫ ∏ Jⱼ^rⱼ` under the normalized hypothesis (`C = 1`).
///
/// Equal to `m! ∏ rⱼ! / ((2m)! ∏ (rⱼ/2)!)` when every part is even, and zero
/// when some part is odd. Odd total degree is rejected.
pub fn mixed_moment(r: &MultiIndex) -> Result<BigRational> {
    let degree = r.degree();
    if degree % 2 == 1 {
        return Err(Error::Domain(format!(
            "moment {r} has odd total degree {degree}"
        )));
    }
    if r.parts().iter().any(|&p| p % 2 == 1) {
        return Ok(BigRational::zero());
    }
    let m = degree / 2;
    let mut num = factorial(m);
    let mut den = factorial(degree);
    for &p in r.parts() {
        num *= factorial(p);
        den *= factorial(p / 2);
    }
    Ok(BigRational::new(num, den))
}

fn expand_term(s: &MultiIndex) -> BigRational {
    let doubled = MultiIndex {
        parts: s.parts().iter().map(|&p| 2 * p).collect(),
    };
    let moment = mixed_moment(&doubled).expect("doubled index has even degree");
    BigRational::from_integer(s.multinomial()) * moment
}

/// `I(m, n)` by expanding `(Σ Jⱼ²)^m` and integrating term by term with
/// [`mixed_moment`].
pub fn i_mn_expand(m: u64, n: u64) -> Result<BigRational> {
    let n = usize::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    Ok(compositions(m, n)?
        .map(|s| expand_term(&s))
        .fold(BigRational::zero(), |acc, t| acc + t))
}

/// Parallel variant of [`i_mn_expand`]; exact addition makes the result
/// independent of the reduction order.
pub fn i_mn_expand_par(m: u64, n: u64) -> Result<BigRational> {
    let n = usize::try_from(n).map_err(|_| Error::Domain("n too large".into()))?;
    Ok(compositions(m, n)?
        .par_bridge()
        .map(|s| expand_term(&s))
        .reduce(BigRational::zero, |a, b| a + b))
}
