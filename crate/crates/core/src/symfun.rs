//! Exact falling factorials, elementary symmetric polynomials and power sums.
//!
//! Everything here is arbitrary precision. The moment formulas divide very
//! large falling factorials, so fixed-width integers are never used.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymfunError {
    #[error("integer vector must have at least one entry")]
    Empty,
    #[error("integer vector entry {index} is negative ({value})")]
    Negative { index: usize, value: BigInt },
    #[error("Newton route needs at least 3 variables, got {0}; use elementary_symmetric directly")]
    TooShortForNewton(usize),
}

/// A non-empty vector of non-negative exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(values: Vec<BigInt>) -> Result<Self, SymfunError> {
        if values.is_empty() {
            return Err(SymfunError::Empty);
        }
        if let Some((index, value)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(SymfunError::Negative {
                index,
                value: value.clone(),
            });
        }
        Ok(Self(values))
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self, SymfunError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry-wise map, used for E_k(X₁², …) and E_k(kn(c₁,b), …).
    pub fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> IntVector {
        IntVector(self.0.iter().map(f).collect())
    }

    /// Appends zeros; E_k and P_k (k ≥ 1) are unchanged by zero padding.
    pub fn padded(&self, len: usize) -> IntVector {
        let mut v = self.0.clone();
        v.resize(len.max(v.len()), BigInt::zero());
        IntVector(v)
    }
}

/// Knuth's falling factorial a(a−1)···(a−b+1); 1 for b = 0 and 0 for b > a.
pub fn falling_factorial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    (0..b).fold(BigInt::one(), |acc, j| acc * BigInt::from(a - j))
}

/// Falling factorial with a big-integer base. Negative bases never occur in
/// this crate, but b > a still yields 0 through the zero factor.
pub fn falling_factorial_big(a: &BigInt, b: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..b {
        let factor = a - BigInt::from(j);
        if factor.is_zero() {
            return BigInt::zero();
        }
        acc *= factor;
    }
    acc
}

/// E_0, …, E_{max_k} of `v` by the one-row dynamic program.
///
/// Entries for k > s are 0.
pub fn elementary_symmetric_all(v: &IntVector, max_k: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); max_k + 1];
    coeffs[0] = BigInt::one();
    for (seen, x) in v.values().iter().enumerate() {
        let top = (seen + 1).min(max_k);
        for k in (1..=top).rev() {
            let add = &coeffs[k - 1] * x;
            coeffs[k] += add;
        }
    }
    coeffs
}

/// Degree-k elementary symmetric polynomial evaluated at `v`.
pub fn elementary_symmetric(v: &IntVector, k: usize) -> BigInt {
    if k > v.len() {
        return BigInt::zero();
    }
    elementary_symmetric_all(v, k).pop().unwrap_or_else(BigInt::zero)
}

/// E_k for a signed degree; negative degrees are 0.
pub fn elementary_symmetric_signed(v: &IntVector, k: i64) -> BigInt {
    if k < 0 {
        BigInt::zero()
    } else {
        elementary_symmetric(v, k as usize)
    }
}

/// The k-th power sum Σ vᵢᵏ (P_0 = s).
pub fn power_sum(v: &IntVector, k: u32) -> BigInt {
    v.values().iter().map(|x| num_traits::pow(x.clone(), k as usize)).sum()
}

/// (E₁, E₂, E₃) recovered from P₁, P₂, P₃ through Newton's identities.
pub fn e_from_newton(v: &IntVector) -> Result<(BigInt, BigInt, BigInt), SymfunError> {
    if v.len() < 3 {
        return Err(SymfunError::TooShortForNewton(v.len()));
    }
    let p1 = power_sum(v, 1);
    let p2 = power_sum(v, 2);
    let p3 = power_sum(v, 3);
    let e2_twice = &p1 * &p1 - &p2;
    let e3_six = &p1 * &p1 * &p1 - BigInt::from(3) * &p1 * &p2 + BigInt::from(2) * &p3;
    debug_assert!((&e2_twice % BigInt::from(2)).is_zero());
    debug_assert!((&e3_six % BigInt::from(6)).is_zero());
    Ok((p1, e2_twice / 2, e3_six / 6))
}
