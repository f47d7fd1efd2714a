mod common;

use kohlab::bergeron::{difference, Quadruple};
use kohlab::kohdec::koh_terms;
use kohlab::qbinom::binomial;
use kohlab::{enumerate_partitions, gauss_box, QPoly};
use num_bigint::BigInt;

#[test]
fn gauss_box_matches_product_formula() {
    for m in 0..=14 {
        for n in 0..=14 {
            let expected = QPoly::from_coeffs(common::gauss_by_division(m, n));
            assert_eq!(gauss_box(m, n), expected, "m={m} n={n}");
        }
    }
}

#[test]
fn gauss_box_matches_box_enumeration() {
    for m in 0..=9 {
        for n in 0..=9 {
            let counts: Vec<i64> = common::box_partitions_by_size(m, n)
                .into_iter()
                .map(|x| x as i64)
                .collect();
            assert_eq!(gauss_box(m, n), QPoly::from_i64s(&counts), "m={m} n={n}");
        }
    }
}

#[test]
fn large_box_coefficients_exceed_u64() {
    let g = gauss_box(40, 40);
    let middle = g.coeff(800);
    assert!(middle > BigInt::from(u64::MAX));
    assert_eq!(g.eval_at_one(), binomial(40, 40));
    let lone = QPoly::from_coeffs(common::gauss_by_division(40, 40));
    assert_eq!(g, lone);
}

#[test]
fn partition_counts_match_pentagonal_recurrence() {
    assert_eq!(common::partition_count(10), 42);
    for m in 1..=30i64 {
        let listed = enumerate_partitions(m).unwrap();
        assert_eq!(
            listed.len() as u64,
            common::partition_count(m as usize),
            "m={m}"
        );
        // a box at least m wide and m tall holds every partition of m
        let g = gauss_box(m as usize, m as usize);
        assert_eq!(g.coeff(m as usize), BigInt::from(listed.len()));
    }
}

#[test]
fn koh_term_count_and_total_value() {
    for m in 1..=9i64 {
        for n in 0..=6usize {
            let terms = koh_terms(m, n).unwrap();
            assert_eq!(terms.len() as u64, common::partition_count(m as usize));
            let total: BigInt = terms.iter().map(|t| t.value.eval_at_one()).sum();
            assert_eq!(total, binomial(m as usize, n), "m={m} n={n}");
        }
    }
}

#[test]
fn differences_match_box_enumeration() {
    for b in 1..=36usize {
        for c in b..=36 / b {
            for a in (1..=b).filter(|a| (b * c) % a == 0) {
                let d = b * c / a;
                let quad = Quadruple::new(a as i64, b as i64, c as i64, d as i64).unwrap();
                let expected = common::box_difference(b, c, d, a);
                assert_eq!(difference(&quad), QPoly::from_i64s(&expected), "{quad:?}");
            }
        }
    }
}

#[test]
fn multiplication_matches_convolution() {
    let a: Vec<i64> = (0..150).map(|i| (i * 7919 % 23) - 11).collect();
    let b: Vec<i64> = (0..97).map(|i| (i * 104_729 % 17) - 8).collect();
    let expected = QPoly::from_i64s(&common::convolve(&a, &b));
    assert_eq!(&QPoly::from_i64s(&a) * &QPoly::from_i64s(&b), expected);
}
