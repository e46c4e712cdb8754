//! Difference-set thresholds: forbidden sets from polynomial images, the
//! exact D(X, N) by branch and bound over bitsets, the greedy lower bound,
//! the formula bounds, the inheritance property check, and scaling fits.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::padic::{build_auxiliary, RootSelection};
use crate::poly::IntPolynomial;

/// Hard cap on N for the exact solver's u128 bitsets.
pub const EXACT_N_CAP: u64 = 128;

/// A symmetrized set of forbidden differences: positive representatives
/// only, since the difference set of any A is symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    positives: Vec<u64>,
    source: String,
}

impl ForbiddenSet {
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let mut positives: Vec<u64> = values
            .into_iter()
            .filter(|&v| v != 0)
            .map(|v| v.unsigned_abs())
            .collect();
        positives.sort_unstable();
        positives.dedup();
        ForbiddenSet {
            positives,
            source: "explicit".into(),
        }
    }

    pub fn positives(&self) -> &[u64] {
        &self.positives
    }

    pub fn contains(&self, diff: u64) -> bool {
        self.positives.binary_search(&diff).is_ok()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Count of `X ∩ [-N, N]`, both signs of each positive entry.
    pub fn count_within(&self, n: u64) -> u64 {
        2 * self.positives.iter().take_while(|&&x| x <= n).count() as u64
    }
}

/// Image set `{|h(n)| : n in box, 0 < |h(n)| <= cap}` sorted ascending.
pub fn generate_image(
    h: &IntPolynomial,
    input_box: &[(i64, i64)],
    value_cap: u64,
    point_budget: u64,
) -> Result<ForbiddenSet> {
    let l = h.num_vars();
    if input_box.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: input_box.len(),
        });
    }
    let mut total: u128 = 1;
    for &(lo, hi) in input_box {
        if hi < lo {
            return Err(Error::InvalidParameter(format!(
                "empty box range [{lo}, {hi}]"
            )));
        }
        total = total.saturating_mul((hi - lo + 1) as u128);
    }
    if total > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "image enumeration",
            needed: total,
            limit: point_budget as u128,
        });
    }
    let mut values = Vec::new();
    let mut coords: Vec<i64> = input_box.iter().map(|&(lo, _)| lo).collect();
    let mut pt = vec![BigInt::zero(); l];
    loop {
        for (b, &c) in pt.iter_mut().zip(&coords) {
            *b = BigInt::from(c);
        }
        let v = h.evaluate(&pt, None)?;
        if !v.is_zero() {
            if let Some(a) = v.abs().to_u64() {
                if a <= value_cap {
                    values.push(a);
                }
            }
        }
        let mut i = l;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= input_box[i].1 {
                break false;
            }
            coords[i] = input_box[i].0;
        };
        if done {
            break;
        }
    }
    values.sort_unstable();
    values.dedup();
    Ok(ForbiddenSet {
        positives: values,
        source: format!("polynomial image over box {input_box:?}"),
    })
}

fn conflict_masks(x: &ForbiddenSet, n: u64) -> Vec<u128> {
    // adj[v-1]: bit (u-1) set iff |u - v| is forbidden.
    let n = n as usize;
    let mut adj = vec![0u128; n];
    for v in 1..=n {
        for &d in x.positives() {
            let d = d as usize;
            if d == 0 || d >= n {
                if d >= n {
                    break;
                }
                continue;
            }
            if v > d {
                adj[v - 1] |= 1u128 << (v - d - 1);
            }
            if v + d <= n {
                adj[v - 1] |= 1u128 << (v + d - 1);
            }
        }
    }
    adj
}

fn mask_to_set(mask: u128) -> Vec<u64> {
    (0..128)
        .filter(|&b| mask >> b & 1 == 1)
        .map(|b| b as u64 + 1)
        .collect()
}

/// Ascending greedy scan: take every element compatible with all taken.
pub fn solve_greedy(x: &ForbiddenSet, n: u64) -> (u64, Vec<u64>) {
    let mut taken: Vec<u64> = Vec::new();
    for v in 1..=n {
        if taken
            .iter()
            .all(|&t| !x.contains(v - t))
        {
            taken.push(v);
        }
    }
    (taken.len() as u64, taken)
}

struct BranchBound<'a> {
    adj: &'a [u128],
    best_size: u32,
    best_mask: u128,
    nodes: u64,
    node_budget: u64,
    exhausted: bool,
}

impl BranchBound<'_> {
    fn run(&mut self, cand: u128, cur_size: u32, cur_mask: u128) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.exhausted = true;
            return;
        }
        let remaining = cand.count_ones();
        if cur_size + remaining <= self.best_size {
            return;
        }
        if cand == 0 {
            if cur_size > self.best_size {
                self.best_size = cur_size;
                self.best_mask = cur_mask;
            }
            return;
        }
        // Pivot: maximum degree within the candidate set, smallest index on
        // ties.
        let mut pivot = 0usize;
        let mut scan = cand;
        let mut best_deg = 0i64;
        let mut first = true;
        while scan != 0 {
            let b = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (self.adj[b] & cand).count_ones() as i64;
            if first || deg > best_deg {
                best_deg = deg;
                pivot = b;
                first = false;
            }
        }
        let bit = 1u128 << pivot;
        // Include the pivot first (keeps the greedy warm start on ties).
        self.run(cand & !self.adj[pivot] & !bit, cur_size + 1, cur_mask | bit);
        self.run(cand & !bit, cur_size, cur_mask);
    }
}

/// Exact solver outcome.
#[derive(Debug, Clone)]
pub struct ExactResult {
    pub size: u64,
    pub witness: Vec<u64>,
    /// False when the node budget ran out and `size` is only best-found.
    pub optimal: bool,
    /// Witness is the lexicographically smallest optimum when true.
    pub witness_lexmin: bool,
    pub nodes: u64,
}

/// Exact `D(X, N)` by branch and bound over bitset candidate sets with a
/// greedy warm start and max-degree pivoting; after the optimum is proven,
/// the witness is rebuilt as the lexicographically smallest optimum while
/// budget remains.
pub fn solve_exact(x: &ForbiddenSet, n: u64, node_budget: u64) -> Result<ExactResult> {
    if n == 0 {
        return Ok(ExactResult {
            size: 0,
            witness: Vec::new(),
            optimal: true,
            witness_lexmin: true,
            nodes: 0,
        });
    }
    if n > EXACT_N_CAP {
        return Err(Error::InvalidParameter(format!(
            "exact solver capped at N = {EXACT_N_CAP}, got {n}"
        )));
    }
    let adj = conflict_masks(x, n);
    let full: u128 = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };
    let (greedy_size, greedy_set) = solve_greedy(x, n);
    let mut greedy_mask = 0u128;
    for &v in &greedy_set {
        greedy_mask |= 1u128 << (v - 1);
    }
    let mut bb = BranchBound {
        adj: &adj,
        best_size: greedy_size as u32,
        best_mask: greedy_mask,
        nodes: 0,
        node_budget,
        exhausted: false,
    };
    bb.run(full, 0, 0);
    let optimal = !bb.exhausted;
    let size = bb.best_size as u64;
    let mut witness_mask = bb.best_mask;
    let mut witness_lexmin = false;
    if optimal {
        // Lexicographically smallest optimum: fix vertices in ascending
        // order whenever the remainder still reaches the optimum.
        let mut mask = 0u128;
        let mut cand = full;
        let mut picked = 0u32;
        let mut ok = true;
        for v in 0..n as usize {
            let bit = 1u128 << v;
            if cand & bit == 0 {
                continue;
            }
            let reduced = cand & !adj[v] & !bit;
            let mut probe = BranchBound {
                adj: &adj,
                best_size: (size as u32).saturating_sub(picked + 2),
                best_mask: 0,
                nodes: bb.nodes,
                node_budget,
                exhausted: false,
            };
            probe.run(reduced, 0, 0);
            bb.nodes = probe.nodes;
            if probe.exhausted {
                ok = false;
                break;
            }
            if picked + 1 + probe.best_size >= size as u32 {
                mask |= bit;
                picked += 1;
                cand = reduced;
                if picked == size as u32 {
                    break;
                }
            } else {
                cand &= !bit;
            }
        }
        if ok && mask.count_ones() == size as u32 {
            witness_mask = mask;
            witness_lexmin = true;
        }
    }
    let witness = mask_to_set(witness_mask);
    debug_assert!(verify_witness(x, &witness));
    Ok(ExactResult {
        size,
        witness,
        optimal,
        witness_lexmin,
        nodes: bb.nodes,
    })
}

/// Checks `(A - A) ∩ X ⊆ {0}` directly.
pub fn verify_witness(x: &ForbiddenSet, a: &[u64]) -> bool {
    for (i, &u) in a.iter().enumerate() {
        for &v in &a[i + 1..] {
            if x.contains(v.abs_diff(u)) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// `ceil((N-1) / (|X ∩ [-N,N]| + 1))`, the greedy guarantee.
    pub greedy_lower: u64,
    /// `floor(2N / |Y|)` when `Y - Y ⊆ X ∪ {0}` is verified.
    pub sumset_upper: Option<u64>,
}

/// The two formula bounds. The sumset upper bound is refused unless every
/// pairwise difference of Y lies in X (up to sign).
pub fn bounds_report(x: &ForbiddenSet, n: u64, y: Option<&[u64]>) -> Result<BoundsReport> {
    let count = x.count_within(n);
    let greedy_lower = if n == 0 { 0 } else { (n - 1).div_ceil(count + 1) };
    let sumset_upper = match y {
        Some(y_set) if !y_set.is_empty() => {
            for (i, &u) in y_set.iter().enumerate() {
                for &v in &y_set[i + 1..] {
                    let d = v.abs_diff(u);
                    if d != 0 && !x.contains(d) {
                        return Err(Error::SumsetNotContained { difference: d });
                    }
                }
            }
            Some(2 * n / y_set.len() as u64)
        }
        _ => None,
    };
    Ok(BoundsReport {
        greedy_lower,
        sumset_upper,
    })
}

/// Outcome of the randomized inheritance check.
#[derive(Debug, Clone)]
pub struct InheritanceReport {
    pub pass: bool,
    pub trials: u64,
    pub violations: u64,
    pub counterexample: Option<InheritanceCounterexample>,
}

#[derive(Debug, Clone)]
pub struct InheritanceCounterexample {
    pub trial: u64,
    pub shift: i64,
    pub a_prime: Vec<u64>,
    pub violating_difference: u64,
}

/// Randomized check of the auxiliary inheritance law: sets avoiding
/// `h_d`-differences compress along `a -> x + lambda(q) a` to sets avoiding
/// `h_{qd}`-differences. A violation is a counterexample (and, with an
/// uncorrupted lambda, an implementation bug). `lambda_override` exists for
/// the harness mutation self-test.
#[allow(clippy::too_many_arguments)]
pub fn inheritance_check(
    sel: &RootSelection,
    d: u64,
    q: u64,
    trials: u64,
    seed: u64,
    n0: u64,
    input_half_width: i64,
    lambda_override: Option<BigInt>,
) -> Result<InheritanceReport> {
    let h = sel.polynomial();
    let l = h.num_vars();
    let aux_d = build_auxiliary(sel, d)?;
    let aux_qd = build_auxiliary(sel, q * d)?;
    let boxed: Vec<(i64, i64)> = vec![(-input_half_width, input_half_width); l];
    let budget = 50_000_000;
    let forbidden_d = generate_image(&aux_d.poly, &boxed, n0, budget)?;
    let forbidden_qd = generate_image(&aux_qd.poly, &boxed, n0, budget)?;
    let lambda_q = match lambda_override {
        Some(v) => v,
        None => sel.lambda(q)?,
    };
    let lam = lambda_q.to_i64().ok_or_else(|| {
        Error::InvalidParameter("lambda(q) too large for the harness".into())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u64;
    let mut counterexample = None;
    for trial in 0..trials {
        // A built greedily from a random order on [1, n0].
        let mut order: Vec<u64> = (1..=n0).collect();
        order.shuffle(&mut rng);
        let mut a_set: Vec<u64> = Vec::new();
        for &v in &order {
            if a_set.iter().all(|&t| !forbidden_d.contains(v.abs_diff(t))) {
                a_set.push(v);
            }
        }
        a_set.sort_unstable();
        let x_shift: i64 = rng.gen_range(-(n0 as i64)..=n0 as i64);
        let mut a_prime: Vec<u64> = Vec::new();
        for a in 1..=n0 as i64 {
            let target = x_shift + lam * a;
            if target >= 1 && target <= n0 as i64 && a_set.binary_search(&(target as u64)).is_ok()
            {
                a_prime.push(a as u64);
            }
        }
        for (i, &u) in a_prime.iter().enumerate() {
            for &v in &a_prime[i + 1..] {
                let diff = v.abs_diff(u);
                if forbidden_qd.contains(diff) {
                    violations += 1;
                    if counterexample.is_none() {
                        counterexample = Some(InheritanceCounterexample {
                            trial,
                            shift: x_shift,
                            a_prime: a_prime.clone(),
                            violating_difference: diff,
                        });
                    }
                }
            }
        }
    }
    Ok(InheritanceReport {
        pass: violations == 0,
        trials,
        violations,
        counterexample,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct ScalingRow {
    pub n: u64,
    pub d_value: u64,
    pub method: SolverKind,
}

#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub c: f64,
    pub mu: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub fit: Option<ScalingFit>,
}

/// Table of D values over an N grid with a descriptive two-parameter fit
/// of `D = N exp(-c (log N)^mu)`: grid search over mu, linear solve for c.
/// No assertion is made against any asymptotic exponent.
pub fn scaling_report(
    h: &IntPolynomial,
    n_grid: &[u64],
    solver: SolverKind,
    node_budget: u64,
    point_budget: u64,
) -> Result<ScalingReport> {
    let l = h.num_vars();
    let k = h.degree().unwrap_or(1).max(1);
    // Rows are emitted sorted ascending in N regardless of grid order.
    let mut grid: Vec<u64> = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut rows = Vec::new();
    for &n in &grid {
        let half = (n as f64).powf(1.0 / k as f64).ceil() as i64 + 1;
        let boxed: Vec<(i64, i64)> = vec![(-half, half); l];
        let x = generate_image(h, &boxed, n, point_budget)?;
        let d_value = match solver {
            SolverKind::Exact => solve_exact(&x, n, node_budget)?.size,
            SolverKind::Greedy => solve_greedy(&x, n).0,
        };
        rows.push(ScalingRow {
            n,
            d_value,
            method: solver,
        });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 3 && r.d_value >= 1)
        .map(|r| {
            let y = (r.n as f64 / r.d_value as f64).ln();
            ((r.n as f64).ln(), y)
        })
        .collect();
    let fit = if pts.len() >= 2 {
        let mut best: Option<ScalingFit> = None;
        let mut mu = 0.01f64;
        while mu <= 1.0 + 1e-9 {
            let t: Vec<f64> = pts.iter().map(|p| p.0.powf(mu)).collect();
            let num: f64 = t.iter().zip(&pts).map(|(ti, p)| ti * p.1).sum();
            let den: f64 = t.iter().map(|ti| ti * ti).sum();
            if den > 0.0 {
                let c = (num / den).max(0.0);
                let residual: f64 = t
                    .iter()
                    .zip(&pts)
                    .map(|(ti, p)| {
                        let e = p.1 - c * ti;
                        e * e
                    })
                    .sum();
                if best.as_ref().is_none_or(|b| residual < b.residual) {
                    best = Some(ScalingFit { c, mu, residual });
                }
            }
            mu += 0.01;
        }
        best
    } else {
        None
    };
    Ok(ScalingReport { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn image_generation() {
        let h = parse_polynomial("x^2 + y^2", None).unwrap();
        let set = generate_image(&h, &[(0, 3), (0, 3)], 20, 10_000).unwrap();
        assert_eq!(set.positives(), &[1, 2, 4, 5, 8, 9, 10, 13, 18]);

        let sq = parse_polynomial("x^2", None).unwrap();
        let s2 = generate_image(&sq, &[(1, 5)], 30, 10_000).unwrap();
        assert_eq!(s2.positives(), &[1, 4, 9, 16, 25]);

        let comp = parse_polynomial("(x+y)^2", None).unwrap();
        let s3 = generate_image(&comp, &[(0, 2), (0, 2)], 20, 10_000).unwrap();
        assert_eq!(s3.positives(), &[1, 4, 9, 16]);
    }

    #[test]
    fn greedy_examples() {
        let x = ForbiddenSet::from_values([1, 4, 9]);
        let (size, witness) = solve_greedy(&x, 10);
        assert_eq!(size, 4);
        assert_eq!(witness, vec![1, 3, 6, 8]);

        let empty = ForbiddenSet::from_values([]);
        let (s2, w2) = solve_greedy(&empty, 7);
        assert_eq!(s2, 7);
        assert_eq!(w2, (1..=7).collect::<Vec<_>>());

        let ones = ForbiddenSet::from_values([1]);
        let (s3, w3) = solve_greedy(&ones, 5);
        assert_eq!(s3, 3);
        assert_eq!(w3, vec![1, 3, 5]);
    }

    #[test]
    fn exact_small_fixtures() {
        let x1 = ForbiddenSet::from_values([1]);
        let r1 = solve_exact(&x1, 5, 1_000_000).unwrap();
        assert_eq!(r1.size, 3);
        assert_eq!(r1.witness, vec![1, 3, 5]);

        let x2 = ForbiddenSet::from_values([2]);
        let r2 = solve_exact(&x2, 8, 1_000_000).unwrap();
        assert_eq!(r2.size, 4);

        let x3 = ForbiddenSet::from_values([1, 4, 9]);
        let r3 = solve_exact(&x3, 10, 1_000_000).unwrap();
        assert_eq!(r3.size, 4);
        assert_eq!(r3.witness, vec![1, 3, 6, 8]);
        assert!(r3.witness_lexmin);
        assert!(verify_witness(&x3, &r3.witness));
    }

    /// Independent oracle: subset DP over bitmasks.
    fn brute_force_mis(x: &ForbiddenSet, n: u64) -> u64 {
        let n = n as usize;
        let adj = conflict_masks(x, n as u64);
        let mut best = 0u32;
        for mask in 0u64..(1u64 << n) {
            let mask = mask as u128;
            let mut ok = true;
            let mut scan = mask;
            while scan != 0 {
                let b = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                if adj[b] & mask != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                best = best.max(mask.count_ones());
            }
        }
        best as u64
    }

    #[test]
    fn oracle_equivalence_random_instances() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..40 {
            let n = rng.gen_range(4..=16u64);
            let mut vals = Vec::new();
            for d in 1..n {
                if rng.gen_bool(0.3) {
                    vals.push(d as i64);
                }
            }
            let x = ForbiddenSet::from_values(vals);
            let exact = solve_exact(&x, n, 10_000_000).unwrap();
            assert!(exact.optimal);
            let oracle = brute_force_mis(&x, n);
            assert_eq!(exact.size, oracle, "case {case} N={n} X={:?}", x.positives());
            let (greedy, _) = solve_greedy(&x, n);
            let bounds = bounds_report(&x, n, None).unwrap();
            assert!(bounds.greedy_lower <= greedy);
            assert!(greedy <= exact.size);
        }
    }

    #[test]
    fn monotonicity_in_n() {
        let x = ForbiddenSet::from_values([1, 4, 9, 16]);
        let mut prev = 0;
        for n in 1..=24 {
            let cur = solve_exact(&x, n, 10_000_000).unwrap().size;
            assert!(cur >= prev && cur <= prev + 1, "N={n}");
            prev = cur;
        }
    }

    #[test]
    fn bounds_formulas() {
        let x = ForbiddenSet::from_values([1, 4, 9]);
        let b = bounds_report(&x, 10, None).unwrap();
        assert_eq!(b.greedy_lower, 2); // ceil(9/7)

        let empty = ForbiddenSet::from_values([]);
        assert_eq!(bounds_report(&empty, 10, None).unwrap().greedy_lower, 9);

        // Y = {1,4,9}: differences {3,5,8} all forbidden in X' => upper bound.
        let x2 = ForbiddenSet::from_values([3, 5, 8]);
        let b2 = bounds_report(&x2, 10, Some(&[1, 4, 9])).unwrap();
        assert_eq!(b2.sumset_upper, Some(6)); // floor(20/3)

        // Refused when a difference is missing.
        let x3 = ForbiddenSet::from_values([3, 5]);
        assert!(matches!(
            bounds_report(&x3, 10, Some(&[1, 4, 9])),
            Err(Error::SumsetNotContained { difference: 8 })
        ));
    }

    #[test]
    fn symmetrization_soundness() {
        // D is invariant under sign: the solver sees positive representatives.
        let a = ForbiddenSet::from_values([3, -5, 5]);
        let b = ForbiddenSet::from_values([3, 5]);
        assert_eq!(a, b);
    }

    #[test]
    fn inheritance_passes_for_circle() {
        let h = parse_polynomial("x^2 + y^2", None).unwrap();
        let sel = RootSelection::integer_root(h, vec![BigInt::zero(), BigInt::zero()]).unwrap();
        let rep = inheritance_check(&sel, 1, 2, 50, 0, 60, 12, None).unwrap();
        assert!(rep.pass, "violations: {}", rep.violations);
    }

    #[test]
    fn inheritance_mutation_detected() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel =
            RootSelection::integer_root(h, vec![BigInt::from(1), BigInt::from(1)]).unwrap();
        // Honest lambda passes.
        let ok = inheritance_check(&sel, 1, 3, 50, 0, 60, 12, None).unwrap();
        assert!(ok.pass, "violations: {}", ok.violations);
        // Corrupted lambda(3) = 4 must be caught.
        let bad = inheritance_check(&sel, 1, 3, 100, 0, 60, 12, Some(BigInt::from(4))).unwrap();
        assert!(!bad.pass, "corrupted lambda not detected");
        assert!(bad.counterexample.is_some());
    }

    #[test]
    fn scaling_table_rows() {
        let h = parse_polynomial("x^2 + y^2", None).unwrap();
        let rep = scaling_report(&h, &[20, 40, 80], SolverKind::Greedy, 1_000_000, 1_000_000)
            .unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.fit.is_some());

        let empty = scaling_report(&h, &[], SolverKind::Greedy, 1_000, 1_000).unwrap();
        assert!(empty.rows.is_empty());
        assert!(empty.fit.is_none());

        // Monotone nondecreasing D for squares, exact solver.
        let sq = parse_polynomial("x^2", None).unwrap();
        let grid: Vec<u64> = (1..=6).map(|i| i * 10).collect();
        let rep2 = scaling_report(&sq, &grid, SolverKind::Exact, 10_000_000, 1_000_000).unwrap();
        let ds: Vec<u64> = rep2.rows.iter().map(|r| r.d_value).collect();
        assert!(ds.windows(2).all(|w| w[0] <= w[1]), "{ds:?}");
    }
}
