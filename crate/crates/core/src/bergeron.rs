//! Sweeps over quadruples `(a, b, c, d)` with `a` minimal and `ad = bc`,
//! checking that `binom(b+c, b)_q - binom(a+d, d)_q` is symmetric,
//! nonnegative and unimodal.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qbinom::gauss_box_shared;
use crate::qpoly::{check_shape, CheckReport, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadrupleError {
    #[error("all of a, b, c, d must be positive (got {0:?})")]
    NonPositive([i64; 4]),
    #[error("a={a} is not the smallest: {name}={value} < a")]
    NotMinimal { a: i64, name: char, value: i64 },
    #[error("a*d = {ad} differs from b*c = {bc}")]
    ProductMismatch { ad: i64, bc: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quadruple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Quadruple {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, QuadrupleError> {
        if [a, b, c, d].iter().any(|&x| x <= 0) {
            return Err(QuadrupleError::NonPositive([a, b, c, d]));
        }
        for (name, value) in [('b', b), ('c', c), ('d', d)] {
            if value < a {
                return Err(QuadrupleError::NotMinimal { a, name, value });
            }
        }
        let (ad, bc) = (a * d, b * c);
        if ad != bc {
            return Err(QuadrupleError::ProductMismatch { ad, bc });
        }
        Ok(Self {
            a: a as usize,
            b: b as usize,
            c: c as usize,
            d: d as usize,
        })
    }

    /// Common degree `bc = ad` of both q-binomials.
    pub fn degree(&self) -> usize {
        self.b * self.c
    }
}

/// `binom(b+c, b)_q - binom(a+d, d)_q`.
pub fn difference(quad: &Quadruple) -> QPoly {
    let upper = gauss_box_shared(quad.b, quad.c);
    let lower = gauss_box_shared(quad.d, quad.a);
    &*upper - &*lower
}

/// Shape of the difference, examined through and symmetric about `bc`.
pub fn check(quad: &Quadruple) -> CheckReport {
    check_shape(&difference(quad), quad.degree())
}

/// Every valid quadruple with `bc <= max_product` and `b <= c`, in
/// lexicographic `(a, b, c)` order.
pub fn enumerate_quadruples(max_product: usize) -> Vec<Quadruple> {
    let mut out = Vec::new();
    let mut a = 1;
    while a * a <= max_product {
        let mut b = a;
        while b * b <= max_product {
            for c in b..=max_product / b {
                if (b * c) % a == 0 {
                    out.push(Quadruple {
                        a,
                        b,
                        c,
                        d: b * c / a,
                    });
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// A quadruple whose difference polynomial failed a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub quadruple: Quadruple,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub max_product: usize,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

/// Checks every quadruple up to `max_product` on the current rayon pool and
/// returns the failures sorted by quadruple.
pub fn sweep(max_product: usize) -> Vec<Failure> {
    sweep_with(max_product, |_| Ok(())).expect("no sink errors")
}

/// [`sweep`] that hands each failure to `sink` as soon as it is found, in
/// whatever order workers finish. The returned list is sorted.
pub fn sweep_with<F>(max_product: usize, sink: F) -> io::Result<Vec<Failure>>
where
    F: Fn(&Failure) -> io::Result<()> + Sync,
{
    let quads = enumerate_quadruples(max_product);
    let mut failures = quads
        .par_iter()
        .filter_map(|quad| {
            let report = check(quad);
            (!report.passed()).then_some(Failure {
                quadruple: *quad,
                report,
            })
        })
        .map(|f| sink(&f).map(|()| f))
        .collect::<io::Result<Vec<_>>>()?;
    failures.sort_by_key(|f| f.quadruple);
    Ok(failures)
}

/// Runs the sweep on a dedicated pool of `jobs` workers.
pub fn sweep_on(max_product: usize, jobs: usize) -> Vec<Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| sweep(max_product))
}

/// Sweep that appends each failure to `path` as a JSON line the moment it is
/// found, then rewrites the file in sorted order once the sweep completes.
pub fn sweep_to_jsonl(max_product: usize, path: &Path) -> io::Result<SweepSummary> {
    let writer = Mutex::new(BufWriter::new(File::create(path)?));
    let failures = sweep_with(max_product, |failure| {
        let mut w = writer.lock().expect("failure log poisoned");
        serde_json::to_writer(&mut *w, failure)?;
        w.write_all(b"\n")?;
        w.flush()
    })?;
    drop(writer);

    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        for failure in &failures {
            serde_json::to_writer(&mut w, failure)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;

    Ok(SweepSummary {
        max_product,
        checked: enumerate_quadruples(max_product).len(),
        failures,
    })
}

pub fn summarize(max_product: usize, failures: Vec<Failure>) -> SweepSummary {
    SweepSummary {
        max_product,
        checked: enumerate_quadruples(max_product).len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbinom::gauss_box;
    use crate::qpoly::{is_symmetric_about, range_poly, unimodality_report};

    fn quad(a: i64, b: i64, c: i64, d: i64) -> Quadruple {
        Quadruple::new(a, b, c, d).unwrap()
    }

    #[test]
    fn validation_names_the_failure() {
        assert_eq!(
            Quadruple::new(5, 3, 4, 6),
            Err(QuadrupleError::NotMinimal {
                a: 5,
                name: 'b',
                value: 3
            })
        );
        assert_eq!(
            Quadruple::new(2, 3, 4, 5),
            Err(QuadrupleError::ProductMismatch { ad: 10, bc: 12 })
        );
        assert!(matches!(
            Quadruple::new(0, 1, 1, 1),
            Err(QuadrupleError::NonPositive(_))
        ));
    }

    #[test]
    fn difference_examples() {
        assert_eq!(difference(&quad(1, 2, 2, 4)), QPoly::monomial(2));
        assert_eq!(difference(&quad(2, 3, 4, 6)), QPoly::span(3, 9));
        for a in 1..6 {
            assert_eq!(difference(&quad(a, a, a, a)), QPoly::zero());
        }
    }

    #[test]
    fn check_examples() {
        for q in [
            quad(1, 2, 2, 4),
            quad(2, 3, 4, 6),
            quad(3, 6, 6, 12),
            quad(2, 2, 2, 2),
        ] {
            let r = check(&q);
            assert!(r.passed(), "{q:?}: {r:?}");
            assert_eq!(r.degree, q.b * q.c);
        }
    }

    #[test]
    fn enumeration() {
        let four = enumerate_quadruples(4);
        assert!(four.contains(&quad(1, 2, 2, 4)));
        assert!(four.contains(&quad(2, 2, 2, 2)));
        assert_eq!(
            four,
            vec![
                quad(1, 1, 1, 1),
                quad(1, 1, 2, 2),
                quad(1, 1, 3, 3),
                quad(1, 1, 4, 4),
                quad(1, 2, 2, 4),
                quad(2, 2, 2, 2)
            ]
        );
        assert_eq!(enumerate_quadruples(1), vec![quad(1, 1, 1, 1)]);
        let many = enumerate_quadruples(120);
        let mut sorted = many.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, many);
        for q in &many {
            assert_eq!(q.a * q.d, q.b * q.c);
            assert!(q.a <= q.b && q.b <= q.c && q.a <= q.d);
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let max = 60;
        let mut brute = Vec::new();
        for a in 1..=max {
            for b in a..=max {
                for c in b..=max {
                    if b * c > max {
                        continue;
                    }
                    for d in a..=max * max {
                        if a * d == b * c {
                            brute.push(Quadruple { a, b, c, d });
                        }
                    }
                }
            }
        }
        assert_eq!(enumerate_quadruples(max), brute);
    }

    #[test]
    fn differences_are_symmetric() {
        for q in enumerate_quadruples(150) {
            assert!(is_symmetric_about(&difference(&q), q.degree()), "{q:?}");
        }
    }

    #[test]
    fn a_equals_one_reduces_to_gauss_box() {
        for q in enumerate_quadruples(150).into_iter().filter(|q| q.a == 1) {
            let diff = difference(&q);
            assert_eq!(diff, &gauss_box(q.b, q.c) - &range_poly(q.degree()));
            assert!(unimodality_report(&gauss_box(q.b, q.c)).unimodal);
            assert!(check(&q).passed());
        }
    }

    #[test]
    fn small_sweeps_are_clean() {
        assert!(sweep(4).is_empty());
        assert!(sweep(100).is_empty());
    }

    #[test]
    fn jsonl_sink_writes_sorted_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("failures.jsonl");
        let summary = sweep_to_jsonl(30, &path).unwrap();
        assert!(summary.failures.is_empty());
        assert_eq!(summary.checked, enumerate_quadruples(30).len());
        assert_eq!(fs::read_to_string(&path).unwrap(), "");
    }
}
