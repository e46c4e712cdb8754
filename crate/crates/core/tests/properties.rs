//! Property tests for the algebraic invariants.

use num_bigint::BigInt;
use proptest::prelude::*;

use intersieve::diffset::{solve_exact, ForbiddenSet};
use intersieve::parse::parse_polynomial;
use intersieve::poly::{IntPolynomial, MultiIndex};
use intersieve::report::{poly_from_json, poly_json};

fn arb_poly(max_vars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = IntPolynomial> {
    (1..=max_vars, 1..=max_terms).prop_flat_map(move |(nv, nt)| {
        let term = (
            proptest::collection::vec(0..=max_deg, nv),
            -50i64..=50,
        );
        proptest::collection::vec(term, nt).prop_map(move |terms| {
            let mut p = IntPolynomial::zero(nv);
            for (exps, c) in terms {
                p.add_term(MultiIndex::new(exps), BigInt::from(c));
            }
            p
        })
    })
}

proptest! {
    #[test]
    fn homogeneous_parts_reconstruct(p in arb_poly(3, 4, 6)) {
        let mut sum = IntPolynomial::zero(p.num_vars());
        if let Some(k) = p.degree() {
            for i in 0..=k {
                sum = sum.add(&p.homogeneous_part(i));
            }
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn euler_identity(p in arb_poly(3, 4, 6)) {
        if let Some(k) = p.degree() {
            let top = p.homogeneous_part(k);
            let mut rhs = IntPolynomial::zero(p.num_vars());
            for (v, d) in top.gradient().into_iter().enumerate() {
                rhs = rhs.add(&IntPolynomial::variable(p.num_vars(), v).mul(&d));
            }
            prop_assert_eq!(top.scale(&BigInt::from(k)), rhs);
        }
    }

    #[test]
    fn substitution_homomorphism(
        p in arb_poly(2, 3, 5),
        d in 1i64..=6,
        r0 in -5i64..=5,
        r1 in -5i64..=5,
        v0 in -8i64..=8,
        v1 in -8i64..=8,
    ) {
        prop_assume!(p.num_vars() == 2);
        let shift = vec![BigInt::from(r0), BigInt::from(r1)];
        let subst = p.affine_substitute(&BigInt::from(d), &shift, None).unwrap();
        let point = vec![BigInt::from(v0), BigInt::from(v1)];
        let lhs = subst.evaluate(&point, None).unwrap();
        let arg = vec![
            BigInt::from(r0 + d * v0),
            BigInt::from(r1 + d * v1),
        ];
        let rhs = p.evaluate(&arg, None).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn content_scales_with_constants(p in arb_poly(2, 3, 5), c in 2i64..=9) {
        prop_assume!(p.terms().any(|(idx, _)| idx.total() > 0));
        let scaled = p.scale(&BigInt::from(c));
        prop_assert_eq!(scaled.content(), p.content() * BigInt::from(c));
    }

    #[test]
    fn display_then_parse_round_trips(p in arb_poly(3, 4, 6)) {
        prop_assume!(!p.is_zero());
        let text = p.to_string();
        let back = parse_polynomial(&text, Some(p.num_vars())).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn json_round_trips(p in arb_poly(3, 4, 6)) {
        let v = poly_json(&p);
        let back = poly_from_json(&v).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn diffset_monotone_and_lipschitz(
        diffs in proptest::collection::btree_set(1u64..=12, 0..6),
        n in 2u64..=14,
    ) {
        let x = ForbiddenSet::from_values(diffs.iter().map(|&d| d as i64));
        let smaller = solve_exact(&x, n - 1, 10_000_000).unwrap();
        let larger = solve_exact(&x, n, 10_000_000).unwrap();
        prop_assert!(larger.size >= smaller.size);
        prop_assert!(larger.size <= smaller.size + 1);
    }

    #[test]
    fn zero_values_never_enter_forbidden_sets(vals in proptest::collection::vec(-20i64..=20, 0..10)) {
        let x = ForbiddenSet::from_values(vals);
        prop_assert!(x.positives().iter().all(|&v| v > 0));
        prop_assert!(!x.contains(0));
        let sorted_ok = x.positives().windows(2).all(|w| w[0] < w[1]);
        prop_assert!(sorted_ok);
    }
}

#[test]
fn zero_polynomial_round_trips_via_json() {
    let z = IntPolynomial::zero(2);
    assert!(z.is_zero());
    let v = poly_json(&z);
    let back = poly_from_json(&v).unwrap();
    assert!(back.is_zero());
    assert_eq!(back.num_vars(), 2);
    assert!(back.degree().is_none());
}
