//! The gradient sieve: local vanishing orders gamma(p), gradient zero
//! counts j(p), membership in W(Y), the exact rational sieve weight, and
//! the inclusion-exclusion count check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::primes_up_to;
use crate::poly::{IntPolynomial, MultiIndex};
use crate::scan::{for_each_point, point_count, ScanGradient};

/// Points at which the identical-vanishing test switches from exhaustive
/// scanning to the binomial-coefficient-basis divisibility criterion.
pub const IDENTICAL_VANISHING_SCAN_LIMIT: u128 = 1_000_000;

/// Coefficients of `g` in the binomial basis `binom(x, i)`, obtained by
/// iterated forward differences evaluated at 0. A polynomial vanishes
/// identically as a function mod q exactly when q divides every one of
/// these coefficients.
pub fn binomial_basis_coeffs(g: &IntPolynomial) -> Vec<(MultiIndex, BigInt)> {
    fn shift_var(g: &IntPolynomial, var: usize) -> IntPolynomial {
        let l = g.num_vars();
        let mut shift = vec![BigInt::zero(); l];
        shift[var] = BigInt::one();
        g.affine_substitute(&BigInt::one(), &shift, None).unwrap()
    }
    fn rec(
        g: &IntPolynomial,
        var: usize,
        prefix: &mut Vec<u32>,
        out: &mut Vec<(MultiIndex, BigInt)>,
    ) {
        let l = g.num_vars();
        if var == l {
            let zero = vec![BigInt::zero(); l];
            let c = g.evaluate(&zero, None).unwrap();
            if !c.is_zero() {
                out.push((MultiIndex::new(prefix.clone()), c));
            }
            return;
        }
        let max_e = g
            .terms()
            .map(|(idx, _)| idx.exps()[var])
            .max()
            .unwrap_or(0);
        let mut cur = g.clone();
        for e in 0..=max_e {
            prefix.push(e);
            rec(&cur, var + 1, prefix, out);
            prefix.pop();
            if e < max_e {
                cur = shift_var(&cur, var).sub(&cur);
            }
        }
    }
    let mut out = Vec::new();
    rec(g, 0, &mut Vec::new(), &mut out);
    out
}

/// gcd of the binomial-basis coefficients.
pub fn binomial_content(g: &IntPolynomial) -> BigInt {
    let mut acc = BigInt::zero();
    for (_, c) in binomial_basis_coeffs(g) {
        acc = acc.gcd(&c);
    }
    acc
}

/// Whether `g` is identically zero as a function on `(Z/q)^l`. Exhaustive
/// for small moduli, binomial-basis divisibility beyond the scan limit.
pub fn identically_zero_mod(g: &IntPolynomial, q: u64) -> bool {
    let l = g.num_vars();
    if point_count(q, l) <= IDENTICAL_VANISHING_SCAN_LIMIT {
        let sp = crate::scan::ScanPoly::new(g, q);
        if sp.is_zero_poly() {
            return true;
        }
        let mut all_zero = true;
        for_each_point(q, l, |pt| {
            if all_zero && sp.eval(pt) != 0 {
                all_zero = false;
            }
        });
        all_zero
    } else {
        binomial_content(g).is_multiple_of(&BigInt::from(q))
    }
}

/// Smallest `gamma` such that some partial derivative of `g` is not
/// identically zero as a function on `(Z/p^gamma)^l`.
pub fn local_vanishing_order(g: &IntPolynomial, p: u64, max_gamma: u32) -> Result<u32> {
    let grads = g.gradient();
    if grads.iter().all(|d| d.is_zero()) {
        return Err(Error::InvalidParameter(
            "gradient is identically zero as a polynomial".into(),
        ));
    }
    for gamma in 1..=max_gamma {
        let q = p
            .checked_pow(gamma)
            .ok_or_else(|| max_gamma_error(g, p, max_gamma))?;
        if grads.iter().any(|d| !identically_zero_mod(d, q)) {
            return Ok(gamma);
        }
    }
    Err(max_gamma_error(g, p, max_gamma))
}

fn max_gamma_error(g: &IntPolynomial, p: u64, max_gamma: u32) -> Error {
    // A-priori cap: if a partial vanishes identically mod q, then q divides
    // k! times the gcd of that partial's coefficients.
    let k = g.degree().unwrap_or(0);
    let mut kfact = BigInt::one();
    for t in 2..=k as u64 {
        kfact *= t;
    }
    let cap = g
        .gradient()
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| (&kfact * d.full_content()).to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Error::MaxGammaExceeded {
        p,
        max_gamma,
        cap: format!("per-partial caps k!*gcd = [{cap}]"),
    }
}

/// Exact count of gradient zeros in `(Z/p^gamma)^l`.
pub fn gradient_zero_count(
    g: &IntPolynomial,
    p: u64,
    gamma: u32,
    point_budget: u64,
) -> Result<u64> {
    let l = g.num_vars();
    let q = p.checked_pow(gamma).ok_or(Error::BudgetExceeded {
        what: "gradient zero count modulus",
        needed: u128::MAX,
        limit: point_budget as u128,
    })?;
    let points = point_count(q, l);
    if points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "gradient zero count",
            needed: points,
            limit: point_budget as u128,
        });
    }
    let grad = ScanGradient::new(g, q);
    let mut count = 0u64;
    for_each_point(q, l, |pt| {
        if grad.vanishes_at(pt) {
            count += 1;
        }
    });
    Ok(count)
}

/// Per-prime sieve data for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveEntry {
    pub p: u64,
    pub gamma: u32,
    pub j: u64,
}

/// The sieve table for all primes up to Y together with the exact weight
/// `w = prod (1 - j(p) / p^{gamma(p) l})`.
#[derive(Debug, Clone)]
pub struct SieveProfile {
    polynomial: IntPolynomial,
    y: u64,
    table: Vec<SieveEntry>,
    weight: BigRational,
}

impl SieveProfile {
    pub fn build(g: &IntPolynomial, y: u64, max_gamma: u32, point_budget: u64) -> Result<Self> {
        let l = g.num_vars();
        let mut table = Vec::new();
        let mut weight = BigRational::one();
        for p in primes_up_to(y) {
            let gamma = local_vanishing_order(g, p, max_gamma)?;
            let j = gradient_zero_count(g, p, gamma, point_budget)?;
            let modulus = BigInt::from(p).pow(gamma * l as u32);
            let term = BigRational::one()
                - BigRational::new(BigInt::from(j), modulus);
            weight *= term;
            table.push(SieveEntry { p, gamma, j });
        }
        debug_assert!(weight.is_positive() && weight <= BigRational::one());
        Ok(SieveProfile {
            polynomial: g.clone(),
            y,
            table,
            weight,
        })
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.polynomial
    }

    pub fn cutoff(&self) -> u64 {
        self.y
    }

    pub fn entries(&self) -> &[SieveEntry] {
        &self.table
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    /// Partial weight over primes whose modulus `p^gamma` does not divide q.
    pub fn weight_excluding_divisors_of(&self, q: u64, l: usize) -> BigRational {
        let mut w = BigRational::one();
        for e in &self.table {
            let pg = e.p.pow(e.gamma);
            if !q.is_multiple_of(pg) {
                let modulus = BigInt::from(e.p).pow(e.gamma * l as u32);
                w *= BigRational::one() - BigRational::new(BigInt::from(e.j), modulus);
            }
        }
        w
    }
}

/// Membership of an integer point in the sieved set W(Y): the gradient is
/// nonzero mod `p^gamma(p)` for every prime up to the cutoff.
pub fn sieve_membership(n: &[BigInt], profile: &SieveProfile) -> Result<bool> {
    let g = &profile.polynomial;
    if n.len() != g.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vars(),
            got: n.len(),
        });
    }
    let grads = g.gradient();
    for e in &profile.table {
        let m = BigInt::from(e.p).pow(e.gamma);
        let vanishes = grads
            .iter()
            .all(|d| d.evaluate(n, Some(&m)).unwrap().is_zero());
        if vanishes {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of the inclusion-exclusion count check over a box.
#[derive(Debug, Clone)]
pub struct SieveCountReport {
    pub count: u64,
    /// `x_1 ... x_l * w`, exact.
    pub main_term: BigRational,
    /// `count - main_term`, exact.
    pub error: BigRational,
}

/// Exact `|B ∩ W(Y)|` for the box `[1, x_1] x ... x [1, x_l]` by scan,
/// with the product main term and residual.
pub fn sieve_count_check(
    profile: &SieveProfile,
    box_bounds: &[u64],
    point_budget: u64,
) -> Result<SieveCountReport> {
    let g = &profile.polynomial;
    let l = g.num_vars();
    if box_bounds.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: box_bounds.len(),
        });
    }
    let total: u128 = box_bounds.iter().map(|&x| x as u128).product();
    if total > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "sieve box scan",
            needed: total,
            limit: point_budget as u128,
        });
    }
    // Per-prime scan gradients at modulus p^gamma; box points reduced.
    let mods: Vec<(u64, ScanGradient)> = profile
        .table
        .iter()
        .map(|e| {
            let m = e.p.pow(e.gamma);
            (m, ScanGradient::new(g, m))
        })
        .collect();
    let mut count = 0u64;
    let mut coords = vec![1u64; l];
    let mut reduced = vec![0u64; l];
    loop {
        let mut member = true;
        for (m, grad) in &mods {
            for (r, &c) in reduced.iter_mut().zip(&coords) {
                *r = c % m;
            }
            if grad.vanishes_at(&reduced) {
                member = false;
                break;
            }
        }
        if member {
            count += 1;
        }
        let mut i = l;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= box_bounds[i] {
                break false;
            }
            coords[i] = 1;
        };
        if done {
            break;
        }
    }
    let volume: BigInt = box_bounds.iter().map(|&x| BigInt::from(x)).product();
    let main_term = BigRational::from_integer(volume) * profile.weight();
    let error = BigRational::from_integer(BigInt::from(count)) - &main_term;
    Ok(SieveCountReport {
        count,
        main_term,
        error,
    })
}
