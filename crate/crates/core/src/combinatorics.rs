//! Binomial coefficients, falling factorials and combination ranking.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::{Rational, Scalar};

/// C(n, k) in `u128` (exact while it fits).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

/// C(n, k) as an exact big integer.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// n (n−1) ⋯ (n−k+1) as a scalar; zero once a factor vanishes.
pub fn falling<T: Scalar>(n: i64, k: u64) -> T {
    let mut acc = T::one();
    for i in 0..k as i64 {
        acc = acc * T::from_i64(n - i);
    }
    acc
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: u64, k: u64, mut rank: u128) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    let mut next = 0u64;
    for slot in 0..k {
        loop {
            let rest = binomial(n - next - 1, k - slot - 1);
            if rank < rest {
                out.push(next);
                next += 1;
                break;
            }
            rank -= rest;
            next += 1;
        }
    }
    out
}

/// Exact rational 1 / ∏ factors.
pub fn inverse_product(factors: impl IntoIterator<Item = i64>) -> Rational {
    let mut acc = BigInt::one();
    for f in factors {
        acc *= f;
    }
    Rational::new(BigInt::one(), acc)
}

/// Lexicographic successor; false after the last permutation.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
