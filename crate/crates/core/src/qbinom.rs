//! Gaussian polynomials `binom(m+n, m)_q` and the strict-unimodality checks
//! built on them.
//!
//! The polynomials are generated with the q-Pascal recurrence
//! `G(m, n) = G(m-1, n) + q^m G(m, n-1)`, so no polynomial division is ever
//! needed. Results are memoized in a [`GaussTable`] shared across threads.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use thiserror::Error;

use crate::qpoly::{unimodality_report, QPoly};

/// Default number of `(m, n)` entries a table keeps before it stops caching.
pub const DEFAULT_CACHE_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QBinomError {
    #[error("strict unimodality is classified only for c >= b >= 2 (got b={b}, c={c})")]
    OutsideClassifierRange { b: i64, c: i64 },
}

/// Box dimensions of a Gaussian polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussParams {
    pub m: usize,
    pub n: usize,
}

impl GaussParams {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn degree(&self) -> usize {
        self.m * self.n
    }

    fn key(&self) -> (usize, usize) {
        (self.m.min(self.n), self.m.max(self.n))
    }
}

/// Memo of Gaussian polynomials keyed by `(min(m,n), max(m,n))`.
///
/// Entries are never evicted; once `cap` entries are stored, new results are
/// still computed and returned but not cached. Readers and writers may run
/// concurrently; a fill computes outside the lock and publishes in one write.
#[derive(Debug)]
pub struct GaussTable {
    cap: usize,
    entries: RwLock<HashMap<(usize, usize), Arc<QPoly>>>,
}

impl Default for GaussTable {
    fn default() -> Self {
        Self::with_cap(DEFAULT_CACHE_CAP)
    }
}

impl GaussTable {
    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("gauss table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, m: usize, n: usize) -> Arc<QPoly> {
        let key = GaussParams::new(m, n).key();
        if let Some(hit) = self.entries.read().expect("gauss table poisoned").get(&key) {
            return Arc::clone(hit);
        }
        self.fill(key)
    }

    fn fill(&self, (s, t): (usize, usize)) -> Arc<QPoly> {
        let snapshot = self.entries.read().expect("gauss table poisoned").clone();
        let mut fresh: HashMap<(usize, usize), Arc<QPoly>> = HashMap::new();

        let lookup = |fresh: &HashMap<_, Arc<QPoly>>, k: (usize, usize)| -> Arc<QPoly> {
            fresh
                .get(&k)
                .or_else(|| snapshot.get(&k))
                .map(Arc::clone)
                .expect("recurrence visits smaller boxes first")
        };

        // Row k of the table needs row k-1 through column t and row k through
        // column t-1, so filling rows in order touches each entry once.
        for k in 0..=s {
            for l in k..=t {
                if snapshot.contains_key(&(k, l)) {
                    continue;
                }
                let value = if k == 0 {
                    QPoly::one()
                } else {
                    let above = lookup(&fresh, (k - 1, l));
                    let left = lookup(&fresh, (k.min(l - 1), k.max(l - 1)));
                    &*above + &left.shift(k)
                };
                fresh.insert((k, l), Arc::new(value));
            }
        }

        let result = lookup(&fresh, (s, t));
        let mut entries = self.entries.write().expect("gauss table poisoned");
        for (key, value) in fresh {
            if entries.len() >= self.cap {
                break;
            }
            entries.entry(key).or_insert(value);
        }
        result
    }
}

fn global_table() -> &'static GaussTable {
    static TABLE: OnceLock<GaussTable> = OnceLock::new();
    TABLE.get_or_init(GaussTable::default)
}

/// `binom(m+n, m)_q`: partitions fitting in an `m x n` box, graded by size.
pub fn gauss_box(m: usize, n: usize) -> QPoly {
    (*global_table().get(m, n)).clone()
}

/// Shared handle to the memoized `binom(m+n, m)_q`, avoiding a copy.
pub fn gauss_box_shared(m: usize, n: usize) -> Arc<QPoly> {
    global_table().get(m, n)
}

/// `binom(top, k)_q` in top-over-bottom notation. Total: zero whenever
/// `k < 0`, `top < 0` or `k > top`.
pub fn qbin(top: i64, k: i64) -> QPoly {
    if k < 0 || top < 0 || k > top {
        return QPoly::zero();
    }
    gauss_box(k as usize, (top - k) as usize)
}

/// Ordinary binomial coefficient `C(m+n, m)`, the value of `gauss_box` at 1.
pub fn binomial(m: usize, n: usize) -> BigInt {
    let k = m.min(n);
    let mut acc = BigInt::from(1u32);
    for i in 1..=k {
        acc = acc * BigInt::from(m + n - k + i) / BigInt::from(i);
    }
    acc
}

fn strictly_increasing_from(p: &QPoly, degrees: impl Iterator<Item = usize>) -> bool {
    degrees.into_iter().all(|i| p.coeff(i - 1) < p.coeff(i))
}

/// Whether `binom(b+c, b)_q` is strictly unimodal: unimodal, with
/// `coeff(i-1) < coeff(i)` for every `2 <= i <= floor(bc/2)` (the step from
/// degree 0 to 1 is exempt).
pub fn classify_strict(b: i64, c: i64) -> Result<bool, QBinomError> {
    if b < 2 || c < b {
        return Err(QBinomError::OutsideClassifierRange { b, c });
    }
    let (b, c) = (b as usize, c as usize);
    let p = gauss_box_shared(b, c);
    Ok(unimodality_report(&p).unimodal && strictly_increasing_from(&p, 2..=b * c / 2))
}

/// Whether `binom(b+c, b)_q` strictly increases into every even degree
/// `2 <= i <= floor(bc/2)`.
pub fn even_strict_increase(b: usize, c: usize) -> bool {
    let p = gauss_box_shared(b, c);
    strictly_increasing_from(&p, (2..=b * c / 2).step_by(2))
}

/// One row of a strictness scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StrictVerdict {
    pub b: usize,
    pub c: usize,
    pub strict: bool,
}

/// `classify_strict` over `2 <= b <= c`, `b <= bmax`, `c <= cmax`, row-major.
pub fn classify_grid(bmax: usize, cmax: usize) -> Vec<StrictVerdict> {
    let mut out = Vec::new();
    for b in 2..=bmax {
        for c in b..=cmax {
            let strict = classify_strict(b as i64, c as i64).expect("grid respects c >= b >= 2");
            out.push(StrictVerdict { b, c, strict });
        }
    }
    out
}
