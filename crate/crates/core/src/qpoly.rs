//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients.
//!
//! Coefficients are stored lowest degree first. Every constructor and every
//! arithmetic operation returns the canonical form (no trailing zeros), so
//! structural equality is polynomial equality. The zero polynomial has an
//! empty coefficient vector and [`QPoly::degree`] returns `None` for it.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Operand length (of the shorter factor) from which multiplication switches
/// from schoolbook convolution to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot shift by a negative power of q (got {0})")]
    NegativeShift(i64),
    #[error("invalid coefficient {0:?}: expected a decimal integer")]
    BadCoefficient(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `1 + q + ... + q^k`.
    pub fn range(k: usize) -> Self {
        Self {
            coeffs: vec![BigInt::one(); k + 1],
        }
    }

    /// `q^lo + q^(lo+1) + ... + q^hi`; zero when `hi < lo`.
    pub fn span(lo: usize, hi: usize) -> Self {
        if hi < lo {
            return Self::zero();
        }
        Self::range(hi - lo).shift(lo)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, i: usize) -> Option<&BigInt> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands in for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `q^k * self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + k);
        coeffs.resize(k, BigInt::zero());
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn try_shift(&self, k: i64) -> Result<Self, PolyError> {
        usize::try_from(k)
            .map(|k| self.shift(k))
            .map_err(|_| PolyError::NegativeShift(k))
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        let keep = self.coeffs.len().min(max_degree + 1);
        Self::from_coeffs(self.coeffs[..keep].to_vec())
    }

    /// Value at `q = 1`, i.e. the coefficient sum.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn mul_schoolbook(&self, other: &Self) -> Self {
        Self::from_coeffs(schoolbook(&self.coeffs, &other.coeffs))
    }

    /// Product using Karatsuba above `threshold` (clamped to at least 2).
    pub fn mul_with_threshold(&self, other: &Self, threshold: usize) -> Self {
        Self::from_coeffs(karatsuba(&self.coeffs, &other.coeffs, threshold.max(2)))
    }
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [BigInt], src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn sub_into(dst: &mut [BigInt], src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= s;
    }
}

fn karatsuba(a: &[BigInt], b: &[BigInt], threshold: usize) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() < threshold || b.len() < threshold {
        return schoolbook(a, b);
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];

    if a.len() != b.len() {
        // Cut the longer operand into blocks the length of the shorter one.
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        for (k, block) in long.chunks(short.len()).enumerate() {
            let part = karatsuba(block, short, threshold);
            add_into(&mut out[k * short.len()..], &part);
        }
        return out;
    }

    let half = a.len() / 2;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let low = karatsuba(a0, b0, threshold);
    let high = karatsuba(a1, b1, threshold);

    let mut asum = a1.to_vec();
    add_into(&mut asum, a0);
    let mut bsum = b1.to_vec();
    add_into(&mut bsum, b0);
    let mut mid = karatsuba(&asum, &bsum, threshold);
    sub_into(&mut mid, &low);
    sub_into(&mut mid, &high);

    add_into(&mut out, &low);
    add_into(&mut out[half..], &mid);
    add_into(&mut out[2 * half..], &high);
    out
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(mut self, rhs: QPoly) -> QPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        add_into(&mut self.coeffs, &rhs.coeffs);
        self.normalize();
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QPoly {
    type Output = QPoly;

    fn sub(mut self, rhs: QPoly) -> QPoly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::zero());
        }
        sub_into(&mut self.coeffs, &rhs.coeffs);
        self.normalize();
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        self.mul_with_threshold(rhs, KARATSUBA_THRESHOLD)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

impl<'a> Sum<&'a QPoly> for QPoly {
    fn sum<I: Iterator<Item = &'a QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |mut acc, p| {
            acc += p;
            acc
        })
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{mag}*q")?,
                _ if unit => write!(f, "q^{i}")?,
                _ => write!(f, "{mag}*q^{i}")?,
            }
        }
        Ok(())
    }
}

// JSON form: array of decimal strings, lowest degree first.
impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs = raw
            .into_iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(PolyError::BadCoefficient(s)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

/// `1 + q + ... + q^k`.
pub fn range_poly(k: usize) -> QPoly {
    QPoly::range(k)
}

/// Palindromic about the polynomial's own degree. The zero polynomial counts
/// as symmetric.
pub fn is_symmetric(p: &QPoly) -> bool {
    match p.degree() {
        None => true,
        Some(deg) => first_asymmetry(p, deg).is_none(),
    }
}

/// Palindromic about a nominal degree: `coeff(i) == coeff(degree - i)` for all
/// `i`, with every coefficient above `degree` required to vanish.
pub fn is_symmetric_about(p: &QPoly, degree: usize) -> bool {
    first_asymmetry(p, degree).is_none()
}

fn first_asymmetry(p: &QPoly, degree: usize) -> Option<usize> {
    let top = p.degree().map_or(degree, |d| d.max(degree));
    (0..=top).find(|&i| {
        let mirror = if i <= degree {
            p.coeff(degree - i)
        } else {
            BigInt::zero()
        };
        p.coeff(i) != mirror
    })
}

/// Shape verdict for one coefficient sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    /// Degree the sequence was examined through (and symmetric about).
    pub degree: usize,
    pub symmetric: bool,
    pub nonnegative: bool,
    pub unimodal: bool,
    pub first_violation_degree: Option<usize>,
    pub first_asymmetry: Option<usize>,
    pub first_negative: Option<usize>,
    /// First strict increase that follows a strict decrease.
    pub first_unimodality_violation: Option<usize>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.nonnegative && self.unimodal
    }
}

/// Nonnegativity, unimodality and symmetry of `p` about its own degree.
/// The zero polynomial passes all three.
pub fn unimodality_report(p: &QPoly) -> CheckReport {
    check_shape(p, p.degree().unwrap_or(0))
}

/// Like [`unimodality_report`] but against a nominal degree, which matters
/// when leading terms cancelled (differences of q-binomials of equal degree).
pub fn check_shape(p: &QPoly, degree: usize) -> CheckReport {
    let top = p.degree().map_or(degree, |d| d.max(degree));
    let mut first_negative = None;
    let mut first_unimodality_violation = None;
    let mut descended = false;
    let mut prev = BigInt::zero();
    for i in 0..=top {
        let c = p.coeff(i);
        if first_negative.is_none() && c.is_negative() {
            first_negative = Some(i);
        }
        if i > 0 {
            if c < prev {
                descended = true;
            } else if c > prev && descended && first_unimodality_violation.is_none() {
                first_unimodality_violation = Some(i);
            }
        }
        prev = c;
    }
    let first_asymmetry = first_asymmetry(p, degree);
    let first_violation_degree = [first_asymmetry, first_negative, first_unimodality_violation]
        .into_iter()
        .flatten()
        .min();
    CheckReport {
        degree,
        symmetric: first_asymmetry.is_none(),
        nonnegative: first_negative.is_none(),
        unimodal: first_unimodality_violation.is_none(),
        first_violation_degree,
        first_asymmetry,
        first_negative,
        first_unimodality_violation,
    }
}

/// `(1 - q) p` kept through degree `floor(deg p / 2)`.
///
/// For a symmetric `p`, the result is nonnegative exactly when `p` is
/// unimodal.
pub fn truncated_first_difference(p: &QPoly) -> QPoly {
    match p.degree() {
        None => QPoly::zero(),
        Some(deg) => first_difference_through(p, deg / 2),
    }
}

/// `(1 - q) p` kept through degree `top`: `d(0) = p(0)` and
/// `d(i) = p(i) - p(i-1)` for `1 <= i <= top`.
pub fn first_difference_through(p: &QPoly, top: usize) -> QPoly {
    let coeffs = (0..=top)
        .map(|i| {
            let cur = p.coeff(i);
            if i == 0 {
                cur
            } else {
                cur - p.coeff(i - 1)
            }
        })
        .collect();
    QPoly::from_coeffs(coeffs)
}

/// Degreewise comparison outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Whether `p >= r` coefficient by coefficient (missing coefficients are 0).
pub fn dominates(p: &QPoly, r: &QPoly) -> DominanceReport {
    let len = p.coeffs().len().max(r.coeffs().len());
    let first_failure = (0..len).find(|&i| p.coeff(i) < r.coeff(i));
    DominanceReport {
        holds: first_failure.is_none(),
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn small_ring_cases() {
        assert_eq!(&p(&[1, 1]) + &p(&[0, 1]), p(&[1, 2]));
        assert_eq!(&p(&[1, 2, 3]) * &QPoly::zero(), QPoly::zero());
        assert_eq!(&p(&[1, 1, 1]) * &p(&[1, 1, 1]), p(&[1, 2, 3, 2, 1]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), QPoly::zero());
        assert_eq!(p(&[3, 0, 0]), p(&[3]));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn shift_rejects_negative_power() {
        assert_eq!(p(&[1]).try_shift(-1), Err(PolyError::NegativeShift(-1)));
        assert_eq!(p(&[1, 2]).try_shift(2).unwrap(), p(&[0, 0, 1, 2]));
        assert_eq!(QPoly::zero().shift(5), QPoly::zero());
    }

    #[test]
    fn range_poly_cases() {
        assert_eq!(range_poly(0), p(&[1]));
        assert_eq!(range_poly(3), p(&[1, 1, 1, 1]));
        assert_eq!(&range_poly(1) * &range_poly(1), p(&[1, 2, 1]));
        assert_eq!(QPoly::span(2, 4), p(&[0, 0, 1, 1, 1]));
        assert_eq!(QPoly::span(4, 2), QPoly::zero());
    }

    #[test]
    fn symmetry() {
        assert!(is_symmetric(&p(&[1, 2, 1])));
        assert!(!is_symmetric(&p(&[1, 2, 3])));
        assert!(is_symmetric(&QPoly::zero()));
        // q^3 + ... + q^9 is symmetric about 12 but not about its own degree.
        let mid = QPoly::span(3, 9);
        assert!(is_symmetric_about(&mid, 12));
        assert!(!is_symmetric(&mid));
        assert!(!is_symmetric_about(&p(&[1, 1]), 0));
    }

    #[test]
    fn unimodality_cases() {
        let r = unimodality_report(&p(&[1, 2, 1]));
        assert!(r.unimodal && r.nonnegative && r.symmetric);
        assert_eq!(r.first_violation_degree, None);

        let r = unimodality_report(&p(&[1, 0, 1]));
        assert!(!r.unimodal);
        assert_eq!(r.first_unimodality_violation, Some(2));
        assert!(r.nonnegative && r.symmetric);

        let r = unimodality_report(&p(&[0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0]));
        assert!(r.unimodal && r.nonnegative);

        let r = unimodality_report(&p(&[1, -1, 1]));
        assert_eq!(r.first_negative, Some(1));
        assert_eq!(r.first_unimodality_violation, Some(2));
        assert_eq!(r.first_violation_degree, Some(1));

        let z = unimodality_report(&QPoly::zero());
        assert!(z.passed());
    }

    #[test]
    fn shape_against_nominal_degree_sees_cancelled_tail() {
        // 1 - q^2 examined through degree 4: the climb back to 0 after -1
        // only shows up once the vanished tail is included.
        let r = check_shape(&p(&[0, 0, -1]), 4);
        assert!(!r.nonnegative);
        assert_eq!(r.first_unimodality_violation, Some(3));
    }

    #[test]
    fn first_difference_cases() {
        assert_eq!(
            truncated_first_difference(&p(&[1, 1, 2, 1, 1])),
            p(&[1, 0, 1])
        );
        assert_eq!(
            truncated_first_difference(&p(&[1, 1, 1, 1, 1])),
            p(&[1, 0, 0])
        );
        // odd degree truncates at floor(deg/2)
        assert_eq!(truncated_first_difference(&p(&[1, 2, 2, 1])), p(&[1, 1]));
        assert_eq!(truncated_first_difference(&QPoly::zero()), QPoly::zero());
        assert_eq!(
            first_difference_through(&p(&[2, 5, 4]), 3),
            p(&[2, 3, -1, -4])
        );
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&p(&[1, 2, 1]), &p(&[1, 1, 1])).holds);
        let r = dominates(&p(&[1, 0]), &p(&[1, 1]));
        assert!(!r.holds);
        assert_eq!(r.first_failure, Some(1));
        assert!(dominates(&p(&[1, 1, 1]), &QPoly::zero()).holds);
        assert!(!dominates(&QPoly::zero(), &p(&[0, 0, 1])).holds);
    }

    #[test]
    fn display_and_json() {
        assert_eq!(p(&[1, -2, 0, 1]).to_string(), "1 - 2*q + q^3");
        assert_eq!(p(&[0, 1]).to_string(), "q");
        assert_eq!(QPoly::zero().to_string(), "0");
        let json = serde_json::to_string(&p(&[1, 1, 2, 1, 1])).unwrap();
        assert_eq!(json, r#"["1","1","2","1","1"]"#);
        let back: QPoly = serde_json::from_str(r#"["0","3","0"]"#).unwrap();
        assert_eq!(back, p(&[0, 3]));
        assert!(serde_json::from_str::<QPoly>(r#"["x"]"#).is_err());
    }

    #[test]
    fn coefficients_do_not_overflow() {
        let big = QPoly::from_coeffs(vec![BigInt::from(u64::MAX); 3]);
        let sq = &big * &big;
        let m = BigInt::from(u64::MAX);
        assert_eq!(sq.coeff(2), &m * &m * 3);
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-20i64..20, 0..12).prop_map(|c| QPoly::from_i64s(&c))
    }

    fn nonneg_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(0i64..6, 1..10).prop_map(|c| QPoly::from_i64s(&c))
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!((&a * &b).degree(), Some(da + db));
            }
        }

        #[test]
        fn karatsuba_matches_schoolbook(
            a in prop::collection::vec(-1000i64..1000, 0..90),
            b in prop::collection::vec(-1000i64..1000, 0..90),
            threshold in 2usize..12,
        ) {
            let (a, b) = (QPoly::from_i64s(&a), QPoly::from_i64s(&b));
            prop_assert_eq!(a.mul_with_threshold(&b, threshold), a.mul_schoolbook(&b));
        }

        #[test]
        fn shift_moves_every_degree(a in small_poly(), k in 0usize..10) {
            let s = a.shift(k);
            for (i, c) in a.coeffs().iter().enumerate() {
                prop_assert_eq!(&s.coeff(i + k), c);
            }
            let mut before: Vec<_> = a.coeffs().iter().filter(|c| !c.is_zero()).cloned().collect();
            let mut after: Vec<_> = s.coeffs().iter().filter(|c| !c.is_zero()).cloned().collect();
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn first_difference_detects_unimodality(half in nonneg_poly(), odd in any::<bool>()) {
            // mirror a random nonnegative sequence into a palindrome
            let h = half.coeffs().to_vec();
            let mut full = h.clone();
            let tail = if odd { &h[..] } else { &h[..h.len().saturating_sub(1)] };
            full.extend(tail.iter().rev().cloned());
            let sym = QPoly::from_coeffs(full);
            prop_assume!(!sym.is_zero() && is_symmetric(&sym));
            let diff = truncated_first_difference(&sym);
            let nonneg = diff.coeffs().iter().all(|c| !c.is_negative());
            prop_assert_eq!(unimodality_report(&sym).unimodal, nonneg);
        }

        #[test]
        fn dominance_is_a_partial_order(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert!(dominates(&a, &a).holds);
            if dominates(&a, &b).holds && dominates(&b, &a).holds {
                prop_assert_eq!(&a, &b);
            }
            if dominates(&a, &b).holds && dominates(&b, &c).holds {
                prop_assert!(dominates(&a, &c).holds);
            }
        }
    }
}
