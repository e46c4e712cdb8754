//! Cross-module invariants that do not fit a single unit-test file: the
//! sieve-weight floor over the auxiliary family, multiplicity stability for
//! integer-root selections, discriminant consistency of the Deligne
//! certifier, and witness re-verification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use intersieve::classify::{deligne_certify, Status, Witness};
use intersieve::padic::{build_auxiliary, exact_root, hensel_lift, primes_up_to, RootSelection};
use intersieve::parse::parse_polynomial;
use intersieve::poly::IntPolynomial;
use intersieve::resultant::discriminant_binary_form;
use intersieve::sieve::SieveProfile;

/// The sieve weight stays bounded away from zero uniformly over the
/// auxiliary family of a strongly Deligne polynomial: the minimum over
/// d <= 100 equals the minimum over d <= 200 at cutoff Y = 50.
#[test]
fn sieve_weight_floor_is_stable_across_the_auxiliary_family() {
    let fixtures: Vec<RootSelection> = vec![
        RootSelection::integer_root(
            parse_polynomial("x^2 + y^2", None).unwrap(),
            vec![BigInt::zero(), BigInt::zero()],
        )
        .unwrap(),
        RootSelection::integer_root(
            parse_polynomial("x^2 + y^2 - 2", None).unwrap(),
            vec![BigInt::one(), BigInt::one()],
        )
        .unwrap(),
        RootSelection::integer_root(
            parse_polynomial("x^4 + x*y^3 + y^4", None).unwrap(),
            vec![BigInt::zero(), BigInt::zero()],
        )
        .unwrap(),
    ];
    for sel in &fixtures {
        let mut weights: Vec<BigRational> = Vec::with_capacity(200);
        for d in 1..=200u64 {
            let aux = build_auxiliary(sel, d).unwrap();
            let profile = SieveProfile::build(&aux.poly, 50, 16, 10_000_000).unwrap();
            let w = profile.weight().clone();
            assert!(
                w.is_positive(),
                "h = {}, d = {d}: weight not positive",
                sel.polynomial()
            );
            weights.push(w);
        }
        let f100 = weights[..100].iter().min().unwrap();
        let f200 = weights.iter().min().unwrap();
        assert!(f200.is_positive());
        assert_eq!(
            f100,
            f200,
            "weight floor moved when the d-range doubled for {}",
            sel.polynomial()
        );
    }
}

/// With the integer-root rule the multiplicity comes from exact integer
/// partials, so it is the same at every prime.
#[test]
fn integer_root_multiplicity_is_prime_independent() {
    let cases = [
        ("x^2 + y^2 - 2", vec![1i64, 1], 1u32),
        ("x^2 + y^2", vec![0, 0], 2),
        ("x^4 - 2*y^4 + 2*x^2*(x+y) + (x+y)^2", vec![0, 0], 2),
        ("x^4 + x*y^3 + y^4", vec![0, 0], 4),
    ];
    for (text, root, expected) in cases {
        let h = parse_polynomial(text, None).unwrap();
        let coords: Vec<BigInt> = root.iter().map(|&v| BigInt::from(v)).collect();
        for p in primes_up_to(100) {
            let r = exact_root(&h, p, &coords).unwrap();
            assert_eq!(r.multiplicity, expected, "{text} at p = {p}");
            assert!(!r.multiplicity_caveat);
        }
    }
}

/// For bivariate polynomials the Deligne certifier agrees with the
/// vanishing of the binary discriminant of the top part on 100 random
/// fixtures.
#[test]
fn bivariate_deligne_agrees_with_discriminant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let k = rng.gen_range(2u32..=4);
        let mut h = IntPolynomial::zero(2);
        for i in 0..=k {
            let c = rng.gen_range(-5i64..=5);
            h.add_term(
                intersieve::poly::MultiIndex::new(vec![i, k - i]),
                BigInt::from(c),
            );
        }
        // A lower-order tail should not affect the verdict.
        h.add_term(
            intersieve::poly::MultiIndex::new(vec![rng.gen_range(0..2), 0]),
            BigInt::from(rng.gen_range(-3i64..=3)),
        );
        if h.degree() != Some(k) {
            continue;
        }
        let disc = discriminant_binary_form(&h.homogeneous_part(k)).unwrap();
        let verdict = deligne_certify(&h, 10_000_000);
        match verdict.status {
            Status::Certified => assert!(!disc.is_zero(), "{h}"),
            Status::Refuted => assert!(disc.is_zero(), "{h}"),
            Status::Unknown => panic!("bivariate certifier must be exact: {h}"),
        }
        checked += 1;
    }
}

/// Refuted verdicts carry witnesses that re-verify by exact evaluation.
#[test]
fn refuted_witnesses_reverify() {
    let surface = parse_polynomial("(x+z)^4 + (x+z)*y^3 + y^4", None).unwrap();
    let v = deligne_certify(&surface, 10_000_000);
    assert_eq!(v.status, Status::Refuted);
    match v.witness {
        Some(Witness::ProjectivePoint { p: None, coords }) => {
            let top = surface.top_part();
            assert!(top.evaluate(&coords, None).unwrap().is_zero());
            for d in top.gradient() {
                assert!(d.evaluate(&coords, None).unwrap().is_zero());
            }
        }
        other => panic!("expected a rational singular point, got {other:?}"),
    }
}

/// Hensel lifts always verify by exact evaluation at the target modulus.
#[test]
fn hensel_lifts_verify_exactly() {
    let fixtures = [
        ("x^2 - 2", 7u64),
        ("x^2 - 2", 17),
        ("x^2 + y^2 - 2", 5),
        ("x^3 + y^3 - 3", 5),
    ];
    for (text, p) in fixtures {
        let h = parse_polynomial(text, None).unwrap();
        let roots = intersieve::padic::find_roots_mod(&h, p, 1, 10_000).unwrap();
        for root in roots.into_iter().filter(|r| r.nonsingular) {
            for v in [2u32, 4, 8] {
                let lifted = hensel_lift(&h, &root, v).unwrap();
                let m = BigInt::from(p).pow(v);
                assert!(
                    h.evaluate(&lifted.residue, Some(&m)).unwrap().is_zero(),
                    "{text} at p = {p}, v = {v}"
                );
            }
        }
    }
}

/// Whenever the sumset upper bound applies, the exact optimum respects it.
#[test]
fn sumset_upper_bound_dominates_exact() {
    use intersieve::diffset::{bounds_report, solve_exact, ForbiddenSet};
    // X contains Y - Y for Y = {1, 4, 9}.
    let x = ForbiddenSet::from_values([3, 5, 8]);
    for n in [10u64, 15, 20, 30] {
        let exact = solve_exact(&x, n, 10_000_000).unwrap();
        assert!(exact.optimal);
        let b = bounds_report(&x, n, Some(&[1, 4, 9])).unwrap();
        let upper = b.sumset_upper.unwrap();
        assert!(
            exact.size <= upper,
            "N = {n}: exact {} > sumset upper {upper}",
            exact.size
        );
        assert!(b.greedy_lower <= exact.size);
    }
}
