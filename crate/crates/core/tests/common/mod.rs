//! Independent oracles for the integration tests. Nothing here calls into the
//! library's polynomial routines.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;

/// Counts of partitions with at most `m` parts, each at most `n`, indexed by
/// size. Plain enumeration of weakly decreasing sequences.
pub fn box_partitions_by_size(m: usize, n: usize) -> Vec<u64> {
    fn walk(left: usize, cap: usize, size: usize, counts: &mut [u64]) {
        counts[size] += 1;
        if left == 0 {
            return;
        }
        for part in 1..=cap {
            walk(left - 1, part, size + part, counts);
        }
    }
    let mut counts = vec![0u64; m * n + 1];
    walk(m, n, 0, &mut counts);
    counts
}

/// Number of partitions of `n` via Euler's pentagonal-number recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for total in 1..=n {
        let mut acc = 0i64;
        for k in 1.. {
            let k = k as i64;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > total {
                break;
            }
            acc += sign * p[total - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= total {
                acc += sign * p[total - g2];
            }
        }
        p[total] = acc;
    }
    p[n] as u64
}

fn mul_by_one_minus_q_pow(p: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + k];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + k] -= c;
    }
    out
}

/// Exact division by `1 - q^k`; panics if the division leaves a remainder.
fn div_by_one_minus_q_pow(p: &[BigInt], k: usize) -> Vec<BigInt> {
    // (1 - q^k) Q = P  =>  Q_i = P_i + Q_{i-k}
    let len = p.len() - k;
    let mut q = vec![BigInt::zero(); len];
    for i in 0..len {
        q[i] = p[i].clone()
            + if i >= k {
                q[i - k].clone()
            } else {
                BigInt::zero()
            };
    }
    for i in len..p.len() {
        let back = if i >= k && i - k < len {
            q[i - k].clone()
        } else {
            BigInt::zero()
        };
        assert_eq!(p[i], -back, "inexact division by 1 - q^{k}");
    }
    q
}

/// `binom(m+n, m)_q` from the product of `(1 - q^i)` factors, by exact
/// polynomial division. Coefficients lowest degree first, no trailing zeros.
pub fn gauss_by_division(m: usize, n: usize) -> Vec<BigInt> {
    let mut num = vec![BigInt::from(1)];
    for i in 1..=m + n {
        num = mul_by_one_minus_q_pow(&num, i);
    }
    for i in (1..=m).chain(1..=n) {
        num = div_by_one_minus_q_pow(&num, i);
    }
    while num.last().is_some_and(Zero::is_zero) {
        num.pop();
    }
    num
}

/// Direct convolution on `i64` coefficients.
pub fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Subtracts box-enumeration counts, padded to a common length.
pub fn box_difference(b: usize, c: usize, d: usize, a: usize) -> Vec<i64> {
    let upper = box_partitions_by_size(b, c);
    let lower = box_partitions_by_size(d, a);
    let len = upper.len().max(lower.len());
    let mut out: Vec<i64> = (0..len)
        .map(|i| {
            upper.get(i).copied().unwrap_or(0) as i64 - lower.get(i).copied().unwrap_or(0) as i64
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}
