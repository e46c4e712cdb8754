//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line (visible with `cargo test -- --nocapture`).

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use intersieve::classify::{
    deligne_certify, dimension_lower, rank_estimate, strongly_deligne_scan,
    DimensionLowerOutcome, LowerMode, RankEstimate, Status, Witness,
};
use intersieve::diffset::{
    bounds_report, inheritance_check, solve_exact, solve_greedy, verify_witness, ForbiddenSet,
};
use intersieve::expsum::{
    complete_sum_mod_p, deligne_with_full_degree, major_arc_compare, oscillatory_integral,
    sieved_local_sum,
};
use intersieve::padic::{build_auxiliary, primes_up_to, AuxiliaryPolynomial, RootSelection};
use intersieve::parse::parse_polynomial;
use intersieve::poly::IntPolynomial;
use intersieve::sieve::{gradient_zero_count, local_vanishing_order, sieve_count_check, SieveProfile};

const BUDGET: u64 = 10_000_000;

fn pass(criterion: u32, what: &str) {
    println!("criterion {criterion}: PASS - {what}");
}

fn corpus() -> Vec<IntPolynomial> {
    [
        "x^2 + y^2",
        "x^3 + y^3",
        "x^4 + x*y^3 + y^4",
        "x^2 + y^2 + z^2",
        "x^3 + y^3 + z^3 + x*y*z",
    ]
    .iter()
    .map(|t| parse_polynomial(t, None).unwrap())
    .collect()
}

#[test]
fn criterion_01_deligne_bound_suite() {
    let started = Instant::now();
    let mut checked = 0;
    for h in corpus() {
        let k = h.degree().unwrap();
        for p in primes_up_to(101).into_iter().filter(|&p| p >= 5) {
            if (k as u64).is_multiple_of(p) || !deligne_with_full_degree(&h, p, BUDGET) {
                continue;
            }
            let rep = complete_sum_mod_p(&h, p, BUDGET).unwrap();
            let bound = rep.bound.expect("bound must attach for Deligne mod p");
            assert!(
                rep.value.norm() <= bound + 1e-6,
                "h = {h}, p = {p}: |S| = {} > {bound}",
                rep.value.norm()
            );
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} (h, p) pairs checked");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    pass(1, &format!("{checked} complete sums within (k-1)^l p^(l/2) in {elapsed:?}"));
}

#[test]
fn criterion_02_gauss_sum_exactness() {
    let mut checked = 0;
    for p in primes_up_to(97).into_iter().filter(|&p| p % 2 == 1) {
        // Three multipliers per prime, none divisible by p.
        for a in (1u64..).filter(|a| a % p != 0).take(3) {
            let h = parse_polynomial(&format!("{a}*x^2"), None).unwrap();
            let rep = complete_sum_mod_p(&h, p, BUDGET).unwrap();
            assert!(
                (rep.value.norm() - (p as f64).sqrt()).abs() < 1e-9,
                "p = {p}, a = {a}: |S| = {}",
                rep.value.norm()
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 3 * primes_up_to(97).iter().filter(|&&p| p % 2 == 1).count());
    // Equality case: p = 5, h = x^2 + y^2 has ratio exactly 1.
    let h = parse_polynomial("x^2 + y^2", None).unwrap();
    let rep = complete_sum_mod_p(&h, 5, BUDGET).unwrap();
    assert!((rep.ratio.unwrap() - 1.0).abs() <= 1e-9);
    pass(2, &format!("{checked} Gauss magnitudes at sqrt(p) within 1e-9; p=5 ratio = 1"));
}

#[test]
fn criterion_03_local_vanishing_and_crt() {
    // 20 instances with some p^v || q, p <= Y, v >= 2 gamma(p).
    let g = parse_polynomial("x^2 + y^2", None).unwrap();
    let instances: Vec<(u64, u64)> = vec![
        (9, 3),
        (16, 3),
        (18, 3),
        (27, 3),
        (32, 3),
        (36, 3),
        (45, 5),
        (48, 3),
        (63, 3),
        (80, 3),
        (81, 3),
        (99, 3),
        (25, 5),
        (50, 5),
        (75, 5),
        (121, 11),
        (49, 7),
        (98, 7),
        (147, 7),
        (169, 13),
    ];
    assert_eq!(instances.len(), 20);
    for &(q, y) in &instances {
        // Verify the precondition before asserting the law.
        let has_vanishing_factor = intersieve::padic::factorize(q).into_iter().any(|(p, v)| {
            p <= y && v >= 2 * local_vanishing_order(&g, p, 16).unwrap()
        });
        assert!(has_vanishing_factor, "q = {q}, Y = {y}: bad instance");
        let rep = sieved_local_sum(&g, q, 1, y, 16, BUDGET).unwrap();
        assert!(rep.value.norm() <= 1e-9, "q = {q}: |S| = {}", rep.value.norm());
        assert!(rep.exact_zero, "q = {q}: bucket counts must certify exact zero");
    }
    // CRT factorization on 20 coprime pairs.
    let fixtures = [
        parse_polynomial("x^2 + y^2", None).unwrap(),
        parse_polynomial("x^3 + y^3", None).unwrap(),
        parse_polynomial("x^2 + y^2 - 2", None).unwrap(),
    ];
    let moduli = [3u64, 4, 5, 7, 8, 9, 11, 13];
    let mut pairs = Vec::new();
    'outer: for (i, &q1) in moduli.iter().enumerate() {
        for &q2 in &moduli[i + 1..] {
            if BigInt::from(q1).gcd(&BigInt::from(q2)).is_one() {
                pairs.push((q1, q2));
                if pairs.len() == 20 {
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(pairs.len(), 20);
    for (i, &(q1, q2)) in pairs.iter().enumerate() {
        let g = &fixtures[i % fixtures.len()];
        let e = BigInt::from(q1).extended_gcd(&BigInt::from(q2));
        // u q1 + v q2 = 1 => 1/(q1 q2) = v/q1 + u/q2 mod 1.
        let a1 = e.y.mod_floor(&BigInt::from(q1)).to_u64().unwrap();
        let a2 = e.x.mod_floor(&BigInt::from(q2)).to_u64().unwrap();
        let whole = sieved_local_sum(g, q1 * q2, 1, 5, 16, BUDGET).unwrap();
        let s1 = sieved_local_sum(g, q1, a1, 5, 16, BUDGET).unwrap();
        let s2 = sieved_local_sum(g, q2, a2, 5, 16, BUDGET).unwrap();
        let err = (whole.value - s1.value * s2.value).norm();
        assert!(err < 1e-9, "q1 = {q1}, q2 = {q2}: err = {err}");
    }
    pass(3, "20 exact-zero instances and 20 CRT factorizations");
}

#[test]
fn criterion_04_sieve_count() {
    let started = Instant::now();
    let g = parse_polynomial("x^2 + y^2", None).unwrap();
    let profile = SieveProfile::build(&g, 3, 16, BUDGET).unwrap();
    let rep = sieve_count_check(&profile, &[12, 12], BUDGET).unwrap();
    assert_eq!(rep.count, 96);
    assert!(rep.error.is_zero(), "E = {:?}", rep.error);
    assert_eq!(
        rep.main_term,
        BigRational::from_integer(BigInt::from(96))
    );
    for x in [60u64, 120, 240] {
        for y in [3u64, 5, 10] {
            let profile = SieveProfile::build(&g, y, 16, BUDGET).unwrap();
            let rep = sieve_count_check(&profile, &[x, x], BUDGET).unwrap();
            let err = rep.error.to_f64().unwrap().abs();
            let cap = 50.0 * x as f64 * (y as f64).ln().powi(2);
            assert!(err <= cap, "X = {x}, Y = {y}: |E| = {err} > {cap}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    pass(4, &format!("12x12 count exactly 96 with E = 0; 9 boxes within the error cap in {elapsed:?}"));
}

#[test]
fn criterion_05_auxiliary_integrality_and_content_stability() {
    let started = Instant::now();
    let fixtures: Vec<RootSelection> = vec![
        RootSelection::integer_root(
            parse_polynomial("x^4 + x*y^3 + y^4", None).unwrap(),
            vec![BigInt::zero(), BigInt::zero()],
        )
        .unwrap(),
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
    ];
    for sel in &fixtures {
        let mut seen_250: BTreeSet<BigInt> = BTreeSet::new();
        let mut seen_500: BTreeSet<BigInt> = BTreeSet::new();
        for d in 1..=500u64 {
            // Integrality: exact division must succeed for every d.
            let aux = build_auxiliary(sel, d).unwrap_or_else(|e| {
                panic!("h = {}, d = {d}: {e}", sel.polynomial());
            });
            let c = aux.poly.content();
            if d <= 250 {
                seen_250.insert(c.clone());
            }
            seen_500.insert(c);
        }
        assert_eq!(
            seen_250, seen_500,
            "content values changed between d <= 250 and d <= 500 for {}",
            sel.polynomial()
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(5, &format!("1500 auxiliaries integral; content sets stable in {elapsed:?}"));
}

#[test]
fn criterion_06_major_arc_agreement() {
    let started = Instant::now();
    let g = parse_polynomial("x^2 + y^2", None).unwrap();
    let aux = AuxiliaryPolynomial::unit(&g);
    let betas = [
        BigRational::zero(),
        BigRational::new(BigInt::one(), BigInt::from(1_000_000)),
    ];
    for &(a, q) in &[(0u64, 1u64), (1, 3), (1, 4), (2, 5)] {
        for beta in &betas {
            let rep = major_arc_compare(&aux, a, q, beta, 120, 3, 16, BUDGET).unwrap();
            let rel = rep.rel_error.unwrap_or(f64::INFINITY);
            assert!(
                rel <= 0.10,
                "(a, q) = ({a}, {q}), beta = {beta}: rel = {rel}"
            );
            if (a, q) == (1, 3) && beta.is_zero() {
                assert!(
                    (rep.main_term.re + 4800.0).abs() < 1e-6 && rep.main_term.im.abs() < 1e-6,
                    "main term = {:?}",
                    rep.main_term
                );
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(6, &format!("8 major-arc comparisons within 10% (main at (1,3,0) = -4800) in {elapsed:?}"));
}

#[test]
fn criterion_07_van_der_corput_decay() {
    for k in [2u32, 3] {
        let g = parse_polynomial(&format!("x^{k}"), None).unwrap();
        let mut pts = Vec::new();
        let mut beta = 10.0f64;
        while beta <= 1e4 + 1.0 {
            let v = oscillatory_integral(&g, beta, 1.0, None, BUDGET).unwrap();
            pts.push((beta.ln(), v.norm().ln()));
            beta *= 10.0f64.sqrt();
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            slope <= -1.0 / k as f64 + 0.05,
            "k = {k}: slope = {slope}"
        );
    }
    pass(7, "log-log decay slopes at most -1/k + 0.05 for k in {2, 3}");
}

#[test]
fn criterion_08_diffset_oracle_equivalence() {
    // Independent oracle: full subset scan by bitmask.
    fn brute_force(x: &ForbiddenSet, n: u64) -> u64 {
        let n = n as usize;
        let mut forb = vec![false; n + 1];
        for &d in x.positives() {
            if (d as usize) <= n {
                forb[d as usize] = true;
            }
        }
        let mut best = 0u32;
        for mask in 0u64..(1u64 << n) {
            let mut ok = true;
            'pairs: for i in 0..n {
                if mask >> i & 1 == 0 {
                    continue;
                }
                for j in i + 1..n {
                    if mask >> j & 1 == 1 && forb[j - i] {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok {
                best = best.max(mask.count_ones());
            }
        }
        best as u64
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let n = rng.gen_range(1..=22u64);
        let mut vals = Vec::new();
        for d in 1..n {
            if rng.gen_bool(0.35) {
                vals.push(d as i64);
            }
        }
        let x = ForbiddenSet::from_values(vals);
        let exact = solve_exact(&x, n, 100_000_000).unwrap();
        assert!(exact.optimal, "case {case}: budget exhausted");
        let oracle = brute_force(&x, n);
        assert_eq!(exact.size, oracle, "case {case}: N = {n}, X = {:?}", x.positives());
        let (greedy, _) = solve_greedy(&x, n);
        let bounds = bounds_report(&x, n, None).unwrap();
        assert!(
            bounds.greedy_lower <= greedy && greedy <= exact.size,
            "case {case}: chain violated"
        );
        assert!(verify_witness(&x, &exact.witness), "case {case}: bad witness");
    }
    // The pinned fixture.
    let x = ForbiddenSet::from_values([1, 4, 9]);
    let r = solve_exact(&x, 10, 1_000_000).unwrap();
    assert_eq!(r.size, 4);
    assert!(verify_witness(&x, &r.witness));
    pass(8, "200 random instances match the subset-scan oracle; D({1,4,9},10) = 4");
}

#[test]
fn criterion_09_classification_regressions() {
    // (x+y)^2: rank 1, not Deligne.
    let square = parse_polynomial("(x+y)^2", None).unwrap();
    assert_eq!(
        rank_estimate(&square, BUDGET).unwrap(),
        RankEstimate::Exact { rank: 1, heuristic: false }
    );
    assert_eq!(deligne_certify(&square, BUDGET).status, Status::Refuted);

    // x^4 + x y^3 + y^4: Deligne with discriminant 229, strongly Deligne
    // via the integer-root criterion.
    let quartic = parse_polynomial("x^4 + x*y^3 + y^4", None).unwrap();
    let dv = deligne_certify(&quartic, BUDGET);
    assert_eq!(dv.status, Status::Certified);
    assert!(dv.certificate.iter().any(|c| c.contains("229")));
    assert_eq!(
        intersieve::resultant::discriminant_binary_form(&quartic).unwrap(),
        BigInt::from(229)
    );
    let sel_q = RootSelection::integer_root(
        quartic.clone(),
        vec![BigInt::zero(), BigInt::zero()],
    )
    .unwrap();
    let strong = strongly_deligne_scan(&quartic, &sel_q, 50, 50, BUDGET);
    assert_eq!(strong.verdict.status, Status::Certified);
    assert!(strong
        .verdict
        .certificate
        .iter()
        .any(|c| c.contains("integer-root criterion")));

    // (x+z)^4 + (x+z) y^3 + y^4: not Deligne with singular witness
    // (1 : 0 : -1), rank 2, and dimension lowering recovers a bivariate
    // strongly Deligne polynomial.
    let surface = parse_polynomial("(x+z)^4 + (x+z)*y^3 + y^4", None).unwrap();
    let sv = deligne_certify(&surface, BUDGET);
    assert_eq!(sv.status, Status::Refuted);
    match sv.witness {
        Some(Witness::ProjectivePoint { p: None, coords }) => {
            assert_eq!(
                coords,
                vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1)]
            );
        }
        other => panic!("expected rational singular point, got {other:?}"),
    }
    assert_eq!(rank_estimate(&surface, BUDGET).unwrap().lower(), 2);
    let lowered = dimension_lower(&surface, LowerMode::IntegerRoot, 100_000, 3, BUDGET).unwrap();
    let reduced = match lowered {
        DimensionLowerOutcome::Reduced { poly, map, rank } => {
            assert_eq!(rank, 2);
            assert_eq!(poly.num_vars(), 2);
            // g = h(M x) exactly.
            let zero = vec![BigInt::zero(); 3];
            assert_eq!(
                surface
                    .affine_substitute(&BigInt::one(), &zero, Some(&map))
                    .unwrap(),
                poly
            );
            poly
        }
        other => panic!("expected reduction, got {other:?}"),
    };
    let sel_r = RootSelection::integer_root(
        reduced.clone(),
        vec![BigInt::zero(), BigInt::zero()],
    )
    .unwrap();
    let strong_r = strongly_deligne_scan(&reduced, &sel_r, 50, 50, BUDGET);
    assert_eq!(strong_r.verdict.status, Status::Certified);

    // The quartic with irrational conic factors: strongly Deligne scan not
    // certified; the d = p family exhibits vanishing discriminants of the
    // degree-2 top parts at primes where 2 is not a quadratic residue.
    let ugly = parse_polynomial("x^4 - 2*y^4 + 2*x^2*(x+y) + (x+y)^2", None).unwrap();
    let sel_u =
        RootSelection::integer_root(ugly.clone(), vec![BigInt::zero(), BigInt::zero()]).unwrap();
    let rep = strongly_deligne_scan(&ugly, &sel_u, 60, 60, BUDGET);
    assert_ne!(rep.verdict.status, Status::Certified);
    let nonresidue_dp: Vec<u64> = rep
        .failures
        .iter()
        .filter(|f| {
            f.d == f.p && f.top_degree == 2 && f.disc_zero_mod_p && (f.p % 8 == 3 || f.p % 8 == 5)
        })
        .map(|f| f.p)
        .collect();
    assert!(
        nonresidue_dp.len() >= 3,
        "non-residue d = p failures: {nonresidue_dp:?}"
    );
    pass(9, "all four regression fixtures classified as in the source");
}

#[test]
fn criterion_10_gradient_locus_bound() {
    for h in corpus() {
        let k = h.degree().unwrap();
        let l = h.num_vars();
        let cap = ((k - 1) as u64).pow(l as u32);
        for p in primes_up_to(199) {
            if (k as u64).is_multiple_of(p) || !deligne_with_full_degree(&h, p, BUDGET) {
                continue;
            }
            // Deligne mod p forces gamma(p) = 1; j(p) is the affine count.
            let gamma = local_vanishing_order(&h, p, 16).unwrap();
            assert_eq!(gamma, 1, "h = {h}, p = {p}");
            let j = gradient_zero_count(&h, p, 1, BUDGET).unwrap();
            assert!(j <= cap, "h = {h}, p = {p}: j = {j} > {cap}");
        }
    }
    pass(10, "gradient zero counts within (k-1)^l for all scanned p <= 199");
}

#[test]
fn criterion_11_inheritance_property() {
    let fixtures: Vec<(RootSelection, u64, u64)> = vec![
        (
            RootSelection::integer_root(
                parse_polynomial("x^2 + y^2", None).unwrap(),
                vec![BigInt::zero(), BigInt::zero()],
            )
            .unwrap(),
            1,
            2,
        ),
        (
            RootSelection::integer_root(
                parse_polynomial("x^2 + y^2 - 2", None).unwrap(),
                vec![BigInt::one(), BigInt::one()],
            )
            .unwrap(),
            1,
            3,
        ),
        (
            RootSelection::integer_root(
                parse_polynomial("x^4 + x*y^3 + y^4", None).unwrap(),
                vec![BigInt::zero(), BigInt::zero()],
            )
            .unwrap(),
            1,
            2,
        ),
    ];
    for (sel, d, q) in &fixtures {
        let rep = inheritance_check(sel, *d, *q, 100, 0, 60, 12, None).unwrap();
        assert!(
            rep.pass,
            "h = {}, q = {q}: {} violations",
            sel.polynomial(),
            rep.violations
        );
        assert_eq!(rep.trials, 100);
    }
    // Mutation self-test: corrupted lambda must be caught.
    let (sel, d, q) = &fixtures[1];
    let honest_lambda = sel.lambda(*q).unwrap();
    let corrupted = inheritance_check(
        sel,
        *d,
        *q,
        100,
        0,
        60,
        12,
        Some(honest_lambda + BigInt::one()),
    )
    .unwrap();
    assert!(!corrupted.pass, "corrupted lambda passed undetected");
    assert!(corrupted.counterexample.is_some());
    pass(11, "3 fixtures x 100 seeded trials pass; corrupted lambda detected");
}

#[test]
fn criterion_12_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_intersieve");
    let commands: Vec<Vec<&str>> = vec![
        vec!["classify", "--poly", "(x+y)^2", "--d-bound", "12", "--prime-bound", "20"],
        vec![
            "classify",
            "--poly",
            "x^4 - 2*y^4 + 2*x^2*(x+y) + (x+y)^2",
            "--d-bound",
            "12",
            "--prime-bound",
            "20",
        ],
        vec!["aux", "--poly", "x^2+y^2-2", "--root", "1,1", "--d", "1..12"],
        vec!["sieve", "--poly", "x^2+y^2", "--y", "3", "--box", "12,12"],
        vec!["expsum", "complete", "--poly", "x^2+y^2", "--p", "5"],
        vec!["expsum", "local", "--poly", "x^2+y^2", "--q", "9", "--a", "1", "--y", "3"],
        vec![
            "expsum", "weyl", "--poly", "x^2+y^2", "--alpha", "1/2", "--m", "10", "--y", "1",
        ],
        vec![
            "expsum",
            "major-compare",
            "--poly",
            "x^2+y^2",
            "--a",
            "1",
            "--q",
            "3",
            "--beta",
            "1e-6",
            "--m",
            "60",
            "--y",
            "3",
        ],
        vec![
            "expsum",
            "minor-report",
            "--poly",
            "x^2+y^2",
            "--alpha",
            "0.01030927835",
            "--x",
            "100",
            "--y",
            "2",
            "--z",
            "3",
            "--q",
            "97",
            "--a",
            "1",
        ],
        vec![
            "expsum", "vdc-fit", "--poly", "x^2", "--steps", "5", "--format", "csv",
        ],
        vec![
            "diffset", "image", "--poly", "x^2+y^2", "--box", "0:3,0:3", "--cap", "20",
        ],
        vec!["diffset", "exact", "--X", "1,4,9", "--N", "10"],
        vec!["diffset", "greedy", "--X", "1,4,9", "--N", "10"],
        vec!["diffset", "bounds", "--X", "3,5,8", "--N", "10", "--Y", "1,4,9"],
        vec![
            "diffset", "scaling", "--poly", "x^2", "--grid", "10,20,30", "--solver", "exact",
        ],
        vec!["lower-dim", "--poly", "(x+z)^4 + (x+z)*y^3 + y^4"],
        vec!["check", "--seed", "7"],
    ];
    for args in &commands {
        let run = |extra_seed: bool| {
            let mut cmd = Command::new(bin);
            cmd.args(args);
            if extra_seed && !args.contains(&"--seed") {
                cmd.args(["--seed", "0"]);
            }
            cmd.output().expect("binary runs")
        };
        let first = run(false);
        let second = run(false);
        assert_eq!(
            first.stdout, second.stdout,
            "stdout differs for {args:?}"
        );
        assert_eq!(first.status.code(), second.status.code(), "exit differs for {args:?}");
    }
    pass(12, "17 CLI commands byte-identical across re-runs");
}
