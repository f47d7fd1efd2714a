//! Zeilberger's KOH decomposition of Gaussian polynomials.
//!
//! For `lambda |- m` with prefix sums `Y_j`, the term is
//!
//! ```text
//! F_lambda(q) = q^(2 * sum_i C(lambda_i, 2))
//!             * prod_j binom(j(n+2) - Y_{j-1} - Y_{j+1}, lambda_j - lambda_{j+1})_q
//! ```
//!
//! and `binom(m+n, m)_q` is the sum of `F_lambda` over all partitions of `m`.
//! Each `F_lambda` is symmetric about `mn/2` with nonnegative, unimodal
//! coefficients. This module also carries the two partition families used in
//! the `a = 3` argument (`lambda^{i,j}` and `mu^i`) together with their closed
//! forms, and the expansion of `binom(d+3, 3)_q` obtained by iterating the
//! decomposition.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::qbinom::qbin;
use crate::qpoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KohError {
    #[error("partitions are defined here for positive integers only (got {0})")]
    NonPositiveWeight(i64),
    #[error("parts must be positive and weakly decreasing: {0:?}")]
    InvalidParts(Vec<usize>),
    #[error("b must be a positive multiple of 3 (got {0})")]
    BNotMultipleOfThree(usize),
    #[error("c must be at least 4 (got {0})")]
    CTooSmall(usize),
    #[error("index i={i} outside 1..={max}")]
    IOutOfRange { i: i64, max: i64 },
    #[error("index j={j} outside 1..={max} for i={i}")]
    JOutOfRange { i: i64, j: i64, max: i64 },
}

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, KohError> {
        let decreasing = parts.windows(2).all(|w| w[0] >= w[1]);
        if parts.contains(&0) || !decreasing {
            return Err(KohError::InvalidParts(parts));
        }
        Ok(Self { parts })
    }

    /// `count` copies of each listed part size, largest sizes first.
    fn from_multiplicities(blocks: &[(usize, usize)]) -> Self {
        let parts = blocks
            .iter()
            .flat_map(|&(size, count)| std::iter::repeat_n(size, count))
            .collect();
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `lambda_j` with 1-based `j`; 0 past the last part.
    pub fn part(&self, j: usize) -> usize {
        j.checked_sub(1)
            .and_then(|idx| self.parts.get(idx).copied())
            .unwrap_or(0)
    }

    /// `[Y_0, Y_1, ..., Y_len]` with `Y_0 = 0`; `Y_i` equals the weight for
    /// every `i` at or beyond the length.
    pub fn partial_sums(&self) -> Vec<usize> {
        std::iter::once(0)
            .chain(self.parts.iter().scan(0, |acc, &p| {
                *acc += p;
                Some(*acc)
            }))
            .collect()
    }

    /// `Y_i` for any `i >= 0`.
    pub fn prefix_sum(&self, i: usize) -> usize {
        self.parts.iter().take(i).sum()
    }

    /// Number of parts equal to `size`.
    pub fn multiplicity(&self, size: usize) -> usize {
        self.parts.iter().filter(|&&p| p == size).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Partitions of `m` in reverse-lexicographic order, starting from `(m)`.
#[derive(Clone, Debug)]
pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Partitions {
    pub fn new(m: usize) -> Self {
        Self {
            next: (m > 0).then(|| vec![m]),
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // Successor: drop trailing 1s, decrement the last part > 1, then
        // refill the freed weight greedily with parts no larger than it.
        let mut parts = current.clone();
        let mut freed = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            freed += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let cap = *last;
            freed += 1;
            while freed > 0 {
                let take = freed.min(cap);
                parts.push(take);
                freed -= take;
            }
            self.next = Some(parts);
        }
        Some(Partition { parts: current })
    }
}

pub fn enumerate_partitions(m: i64) -> Result<Vec<Partition>, KohError> {
    if m <= 0 {
        return Err(KohError::NonPositiveWeight(m));
    }
    Ok(Partitions::new(m as usize).collect())
}

pub fn partial_sums(lambda: &Partition) -> Vec<usize> {
    lambda.partial_sums()
}

/// Parameters of one `binom(top, k)_q` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub top: i64,
    pub k: i64,
}

/// One term `F_lambda(q)` of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KohTerm {
    pub partition: Partition,
    pub exponent: usize,
    pub factors: Vec<Factor>,
    pub value: QPoly,
}

/// `F_lambda(q)` for box height `n`. Factors are listed for
/// `j = 1..=len(lambda)`; past that every `k` is 0 and the factor is 1.
pub fn koh_term(lambda: &Partition, n: usize) -> KohTerm {
    let exponent: usize = lambda.parts().iter().map(|&p| p * (p - 1)).sum();
    let n = n as i64;
    let factors: Vec<Factor> = (1..=lambda.len())
        .map(|j| {
            let top = j as i64 * (n + 2)
                - lambda.prefix_sum(j - 1) as i64
                - lambda.prefix_sum(j + 1) as i64;
            let k = lambda.part(j) as i64 - lambda.part(j + 1) as i64;
            Factor { top, k }
        })
        .collect();
    let value = factors
        .iter()
        .filter(|f| f.k != 0)
        .fold(QPoly::one(), |acc, f| &acc * &qbin(f.top, f.k))
        .shift(exponent);
    KohTerm {
        partition: lambda.clone(),
        exponent,
        factors,
        value,
    }
}

/// All terms of the decomposition of `binom(m+n, m)_q`, in partition order.
pub fn koh_terms(m: i64, n: usize) -> Result<Vec<KohTerm>, KohError> {
    Ok(enumerate_partitions(m)?
        .par_iter()
        .map(|lambda| koh_term(lambda, n))
        .collect())
}

/// `sum_{lambda |- m} F_lambda(q)`, which equals `gauss_box(m, n)`.
pub fn koh_sum(m: i64, n: usize) -> Result<QPoly, KohError> {
    Ok(enumerate_partitions(m)?
        .par_iter()
        .map(|lambda| koh_term(lambda, n).value)
        .reduce(QPoly::zero, |a, b| a + b))
}

fn require_b_c(b: usize, c: usize) -> Result<(), KohError> {
    if b == 0 || !b.is_multiple_of(3) {
        return Err(KohError::BNotMultipleOfThree(b));
    }
    if c < 4 {
        return Err(KohError::CTooSmall(c));
    }
    Ok(())
}

/// Largest admissible `i` for `lambda^{i,j}`: `(b-3)/3`.
pub fn lambda_i_max(b: usize) -> usize {
    (b - 3) / 3
}

/// `floor(b/2 - 2i(c-1)/c)`, evaluated in integers as
/// `floor((bc - 4i(c-1)) / 2c)`. Negative when no `j` is admissible.
pub fn lambda_j_max(b: usize, c: usize, i: usize) -> i64 {
    let num = (b * c) as i64 - 4 * (i * (c - 1)) as i64;
    num.div_euclid(2 * c as i64)
}

/// Every admissible `(i, j)` for the `lambda^{i,j}` family, `i` then `j`
/// ascending.
pub fn lambda_indices(b: usize, c: usize) -> Result<Vec<(usize, usize)>, KohError> {
    require_b_c(b, c)?;
    Ok((1..=lambda_i_max(b))
        .flat_map(|i| (1..=lambda_j_max(b, c, i).max(0) as usize).map(move |j| (i, j)))
        .collect())
}

fn check_lambda_index(b: usize, c: usize, i: i64, j: i64) -> Result<(usize, usize), KohError> {
    require_b_c(b, c)?;
    let i_max = lambda_i_max(b) as i64;
    if i < 1 || i > i_max {
        return Err(KohError::IOutOfRange { i, max: i_max });
    }
    let j_max = lambda_j_max(b, c, i as usize);
    if j < 1 || j > j_max {
        return Err(KohError::JOutOfRange { i, j, max: j_max });
    }
    Ok((i as usize, j as usize))
}

/// Admissible `(i, j)` whose `lambda^{i,j}` has no part equal to 1. These
/// occur only at `c = 4` with `j = (b - 3i)/2`, where the bound on `j` is
/// attained; there the closed form of [`closed_form_lambda`] does not match
/// the KOH term.
pub fn degenerate_lambda_indices(b: usize, c: usize) -> Result<Vec<(usize, usize)>, KohError> {
    Ok(lambda_indices(b, c)?
        .into_iter()
        .filter(|&(i, j)| 3 * i + 2 * j == b)
        .collect())
}

/// `lambda^{i,j} |- b`: `i` threes, `j` twos, and `b - 3i - 2j` ones.
pub fn lambda_family(b: usize, c: usize, i: i64, j: i64) -> Result<Partition, KohError> {
    let (i, j) = check_lambda_index(b, c, i, j)?;
    Ok(Partition::from_multiplicities(&[
        (3, i),
        (2, j),
        (1, b - 3 * i - 2 * j),
    ]))
}

/// Closed form of `F_{lambda^{i,j}}` at height `c`:
/// `q^(6i+2j) [ci-4i+1]_1 [ci-4i+cj-2j+1]_1 [bc-2ci-4i-cj-2j+1]_1`.
pub fn closed_form_lambda(b: usize, c: usize, i: i64, j: i64) -> Result<QPoly, KohError> {
    let (i, j) = check_lambda_index(b, c, i, j)?;
    let (b, c, i, j) = (b as i64, c as i64, i as i64, j as i64);
    let body = &(&qbin(c * i - 4 * i + 1, 1) * &qbin(c * i - 4 * i + c * j - 2 * j + 1, 1))
        * &qbin(b * c - 2 * c * i - 4 * i - c * j - 2 * j + 1, 1);
    Ok(body.shift((6 * i + 2 * j) as usize))
}

/// Truncated first difference of the `lambda^{i,j}` term as the product
/// `(1 + ... + q^{ci-4i}) (q^{6i+2j} + ... + q^{ci+2i+cj})`.
pub fn lambda_first_difference(b: usize, c: usize, i: i64, j: i64) -> Result<QPoly, KohError> {
    let (i, j) = check_lambda_index(b, c, i, j)?;
    Ok(&QPoly::range(c * i - 4 * i) * &QPoly::span(6 * i + 2 * j, c * i + 2 * i + c * j))
}

/// Largest admissible `i` for `mu^i`: `ceil(b/2) - 1`.
pub fn mu_i_max(b: usize) -> usize {
    b.div_ceil(2).saturating_sub(1)
}

fn check_mu_index(b: usize, i: i64) -> Result<usize, KohError> {
    if b == 0 {
        return Err(KohError::NonPositiveWeight(0));
    }
    let max = mu_i_max(b) as i64;
    if i < 1 || i > max {
        return Err(KohError::IOutOfRange { i, max });
    }
    Ok(i as usize)
}

/// `mu^i |- b`: `i` twos and `b - 2i` ones.
pub fn mu_family(b: usize, i: i64) -> Result<Partition, KohError> {
    let i = check_mu_index(b, i)?;
    Ok(Partition::from_multiplicities(&[(2, i), (1, b - 2 * i)]))
}

/// Closed form of `F_{mu^i}` at height `c`:
/// `q^(2i) [ci-2i+1]_1 [bc-ci-2i+1]_1`.
pub fn closed_form_mu(b: usize, c: usize, i: i64) -> Result<QPoly, KohError> {
    let i = check_mu_index(b, i)? as i64;
    let (b, c) = (b as i64, c as i64);
    let body = &qbin(c * i - 2 * i + 1, 1) * &qbin(b * c - c * i - 2 * i + 1, 1);
    Ok(body.shift(2 * i as usize))
}

/// Truncated first difference of the `mu^i` term: `q^{2i} + ... + q^{ci}`.
pub fn mu_first_difference(b: usize, c: usize, i: i64) -> Result<QPoly, KohError> {
    let i = check_mu_index(b, i)?;
    Ok(QPoly::span(2 * i, c * i))
}

/// Terms of the expansion of `binom(d+3, 3)_q`, `d = bc/3`, after iterating
/// the decomposition `b/3` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D3Expansion {
    /// `q^{2b} binom(d - 4b/3 + 3, 3)_q`.
    pub head: QPoly,
    /// For `i = 0..=(b-3)/3`: `q^{6i+2} [d-4i-1]_1 [2d-8i-1]_1`.
    pub pair_terms: Vec<QPoly>,
    /// For `i = 0..=(b-3)/3`: `q^{6i} [3d-12i+1]_1`.
    pub line_terms: Vec<QPoly>,
}

impl D3Expansion {
    pub fn tail_sum(&self) -> QPoly {
        self.pair_terms.iter().chain(&self.line_terms).sum()
    }

    pub fn sum(&self) -> QPoly {
        &self.head + &self.tail_sum()
    }

    /// Head first, then the pair and line term for each `i` in turn.
    pub fn terms(&self) -> Vec<QPoly> {
        let mut out = vec![self.head.clone()];
        for (pair, line) in self.pair_terms.iter().zip(&self.line_terms) {
            out.push(pair.clone());
            out.push(line.clone());
        }
        out
    }
}

pub fn expand_d3(b: usize, c: usize) -> Result<D3Expansion, KohError> {
    require_b_c(b, c)?;
    let (bi, d) = (b as i64, (b * c / 3) as i64);
    let head = qbin(d - 4 * bi / 3 + 3, 3).shift(2 * b);
    let (pair_terms, line_terms) = (0..=lambda_i_max(b) as i64)
        .map(|i| {
            let pair =
                (&qbin(d - 4 * i - 1, 1) * &qbin(2 * d - 8 * i - 1, 1)).shift((6 * i + 2) as usize);
            let line = qbin(3 * d - 12 * i + 1, 1).shift((6 * i) as usize);
            (pair, line)
        })
        .unzip();
    Ok(D3Expansion {
        head,
        pair_terms,
        line_terms,
    })
}

/// `(3, 3, ..., 3) |- b`, whose term is the head of [`expand_d3`].
pub fn all_threes(b: usize) -> Result<Partition, KohError> {
    if b == 0 || !b.is_multiple_of(3) {
        return Err(KohError::BNotMultipleOfThree(b));
    }
    Ok(Partition::from_multiplicities(&[(3, b / 3)]))
}
