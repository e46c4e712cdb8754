//! p-adic root data: finding and lifting roots, multiplicities, the
//! completely multiplicative lambda, and auxiliary polynomials
//! `h_d(x) = h(r_d + d x) / lambda(d)` with verified integrality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, MultiIndex};
use crate::scan::{for_each_point, point_count, ScanGradient, ScanPoly};

/// A root residue of `h` modulo `p^j` with its local data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRoot {
    pub prime: u64,
    /// Precision exponent `j >= 1`: the residue is known modulo `p^j`.
    pub precision: u32,
    /// Entries in `[0, p^j)`.
    pub residue: Vec<BigInt>,
    /// Multiplicity computed at this precision (exact for integer roots).
    pub multiplicity: u32,
    /// Gradient nonzero modulo `p`; implies multiplicity 1.
    pub nonsingular: bool,
    /// The exact integer root this residue reduces, when known.
    pub exact: Option<Vec<BigInt>>,
    /// Set when some partial order below `multiplicity` vanished only at
    /// finite precision, so the true multiplicity could be smaller.
    pub multiplicity_caveat: bool,
}

pub fn prime_power(p: u64, j: u32) -> BigInt {
    BigInt::from(p).pow(j)
}

fn ord_p(v: &BigInt, p: u64) -> Option<u32> {
    if v.is_zero() {
        return None; // infinite order
    }
    let pb = BigInt::from(p);
    let mut v = v.clone();
    let mut ord = 0u32;
    loop {
        let (q, r) = v.div_rem(&pb);
        if !r.is_zero() {
            return Some(ord);
        }
        ord += 1;
        v = q;
    }
}

/// All multi-indices of total degree `t` in `nvars` variables, ascending lex.
fn compositions(t: u32, nvars: usize) -> Vec<MultiIndex> {
    fn rec(t: u32, pos: usize, nvars: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos + 1 == nvars {
            cur.push(t);
            out.push(MultiIndex::new(cur.clone()));
            cur.pop();
            return;
        }
        for v in 0..=t {
            cur.push(v);
            rec(t - v, pos + 1, nvars, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, 0, nvars, &mut Vec::new(), &mut out);
    out
}

/// Multiplicity of a root, scanning partial derivative orders upward.
///
/// For an exact integer root the partials are evaluated in `Z`, so the
/// answer is exact and the caveat flag stays clear. For a residue known
/// only modulo `p^j`, nonvanishing is certified once a partial is nonzero
/// mod `p^j`; the caveat flag records that lower orders vanished only at
/// finite precision.
pub fn multiplicity_at_root(h: &IntPolynomial, root: &PAdicRoot) -> (u32, bool) {
    let k = match h.degree() {
        Some(k) => k,
        None => return (0, false),
    };
    if let Some(n) = &root.exact {
        for t in 1..=k {
            for idx in compositions(t, h.num_vars()) {
                let d = h.partial(&idx);
                if !d.evaluate(n, None).unwrap().is_zero() {
                    return (t, false);
                }
            }
        }
        // Unreachable for nonzero h: an order-k partial is a nonzero constant.
        return (k, false);
    }
    let m = prime_power(root.prime, root.precision);
    for t in 1..k {
        for idx in compositions(t, h.num_vars()) {
            let d = h.partial(&idx);
            if !d.evaluate(&root.residue, Some(&m)).unwrap().is_zero() {
                return (t, t >= 2);
            }
        }
    }
    // Order-k partials are constants and can be judged exactly.
    (k, k >= 2)
}

fn make_root(h: &IntPolynomial, p: u64, j: u32, residue: Vec<BigInt>) -> PAdicRoot {
    let pb = BigInt::from(p);
    let grad_nonzero = h
        .gradient()
        .iter()
        .any(|d| !d.evaluate(&residue, Some(&pb)).unwrap().is_zero());
    let mut root = PAdicRoot {
        prime: p,
        precision: j,
        residue,
        multiplicity: 1,
        nonsingular: grad_nonzero,
        exact: None,
        multiplicity_caveat: false,
    };
    if grad_nonzero {
        root.multiplicity = 1;
    } else {
        let (m, caveat) = multiplicity_at_root(h, &root);
        root.multiplicity = m;
        root.multiplicity_caveat = caveat;
    }
    root
}

/// Builds a root record from a residue, verifying `h = 0 mod p^j` and
/// computing the local data.
pub fn root_from_residue(
    h: &IntPolynomial,
    p: u64,
    j: u32,
    residue: Vec<BigInt>,
) -> Result<PAdicRoot> {
    if j == 0 {
        return Err(Error::InvalidParameter("precision must be at least 1".into()));
    }
    let m = prime_power(p, j);
    let residue: Vec<BigInt> = residue.into_iter().map(|x| x.mod_floor(&m)).collect();
    let v = h.evaluate(&residue, Some(&m))?;
    if !v.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "residue is not a root of the polynomial mod {p}^{j}"
        )));
    }
    Ok(make_root(h, p, j, residue))
}

/// Builds the root record for a verified exact integer root.
pub fn exact_root(h: &IntPolynomial, p: u64, n: &[BigInt]) -> Result<PAdicRoot> {
    let v = h.evaluate(n, None)?;
    if !v.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "claimed integer root evaluates to {v}, not 0"
        )));
    }
    let pb = BigInt::from(p);
    let residue: Vec<BigInt> = n.iter().map(|x| x.mod_floor(&pb)).collect();
    let grad_nonzero = h
        .gradient()
        .iter()
        .any(|d| !d.evaluate(n, None).unwrap().mod_floor(&pb).is_zero());
    let mut root = PAdicRoot {
        prime: p,
        precision: 1,
        residue,
        multiplicity: 1,
        nonsingular: grad_nonzero,
        exact: Some(n.to_vec()),
        multiplicity_caveat: false,
    };
    let (m, caveat) = multiplicity_at_root(h, &root);
    root.multiplicity = m;
    root.multiplicity_caveat = caveat;
    Ok(root)
}

/// All residues modulo `p^j` where `h` vanishes, with multiplicity and
/// nonsingularity, in ascending lexicographic order.
pub fn find_roots_mod(
    h: &IntPolynomial,
    p: u64,
    j: u32,
    budget: u64,
) -> Result<Vec<PAdicRoot>> {
    let l = h.num_vars();
    let m = p.checked_pow(j).ok_or(Error::BudgetExceeded {
        what: "root scan modulus",
        needed: u128::MAX,
        limit: budget as u128,
    })?;
    let points = point_count(m, l);
    if j > 1 && points > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "root scan",
            needed: points,
            limit: budget as u128,
        });
    }
    let sp = ScanPoly::new(h, m);
    let grad = ScanGradient::new(h, p);
    let mut out = Vec::new();
    let mut ppoint = vec![0u64; l];
    for_each_point(m, l, |pt| {
        if sp.eval(pt) == 0 {
            for (a, b) in ppoint.iter_mut().zip(pt) {
                *a = b % p;
            }
            let nonsingular = !grad.vanishes_at(&ppoint);
            let residue: Vec<BigInt> = pt.iter().map(|&x| BigInt::from(x)).collect();
            let mut root = PAdicRoot {
                prime: p,
                precision: j,
                residue,
                multiplicity: 1,
                nonsingular,
                exact: None,
                multiplicity_caveat: false,
            };
            if !nonsingular {
                let (mu, caveat) = multiplicity_at_root(h, &root);
                root.multiplicity = mu;
                root.multiplicity_caveat = caveat;
            }
            out.push(root);
        }
    });
    Ok(out)
}

/// Lifts a root to precision `v` by Newton iteration in the coordinate with
/// the smallest gradient valuation (multivariable Hensel). The hypothesis
/// `h(n) = 0 mod p^{2g-1}`, `grad h(n) != 0 mod p^g` must hold at the
/// stored representative.
pub fn hensel_lift(h: &IntPolynomial, root: &PAdicRoot, target_precision: u32) -> Result<PAdicRoot> {
    let p = root.prime;
    let v = target_precision;
    if root.precision >= v {
        return Ok(root.clone());
    }
    let pv = prime_power(p, v);
    if let Some(n) = &root.exact {
        // An exact integer root lifts to itself at any precision.
        let residue: Vec<BigInt> = n.iter().map(|x| x.mod_floor(&pv)).collect();
        let mut out = root.clone();
        out.precision = v;
        out.residue = residue;
        return Ok(out);
    }
    let mut n: Vec<BigInt> = root.residue.clone();
    let grads = h.gradient();
    // Valuation of the best gradient coordinate at the representative.
    let (best_i, c) = grads
        .iter()
        .enumerate()
        .filter_map(|(i, d)| ord_p(&d.evaluate(&n, None).unwrap(), p).map(|o| (i, o)))
        .min_by_key(|&(_, o)| o)
        .ok_or(Error::HenselHypothesis {
            p,
            precision: root.precision,
        })?;
    let gamma = c + 1;
    let need = 2 * gamma - 1;
    let h_at = h.evaluate(&n, None)?;
    let s0 = ord_p(&h_at, p);
    if let Some(s0) = s0 {
        if s0 < need {
            return Err(Error::HenselHypothesis {
                p,
                precision: root.precision,
            });
        }
    }
    // Newton steps modulo p^v; the residual valuation strictly increases,
    // so v + 2 iterations suffice.
    let mut guard = v + 2;
    loop {
        let u = h.evaluate(&n, Some(&pv))?;
        if u.is_zero() {
            break;
        }
        if guard == 0 {
            return Err(Error::HenselHypothesis {
                p,
                precision: root.precision,
            });
        }
        guard -= 1;
        let d = grads[best_i].evaluate(&n, None)?;
        let c_now = ord_p(&d, p).expect("gradient coordinate vanished during lift");
        debug_assert_eq!(c_now, c);
        let p_c = prime_power(p, c_now);
        let d_unit = &d / &p_c;
        let e = d_unit.extended_gcd(&pv);
        // gcd(d_unit, p^v) = 1, so x is the modular inverse.
        debug_assert!(e.gcd.is_one());
        let inv = e.x.mod_floor(&pv);
        let u_shift = &u / &p_c; // exact: ord(u) >= 2*gamma - 1 > c
        let delta = (&u_shift * &inv).mod_floor(&pv);
        n[best_i] = (&n[best_i] - &delta).mod_floor(&pv);
    }
    let residue: Vec<BigInt> = n.iter().map(|x| x.mod_floor(&pv)).collect();
    // Verified by exact evaluation mod p^v.
    debug_assert!(h.evaluate(&residue, Some(&pv)).unwrap().is_zero());
    let mut out = make_root(h, p, v, residue);
    out.exact = None;
    // Consistency: the lift must reduce to the input root.
    let pj = prime_power(p, root.precision);
    for (a, b) in out.residue.iter().zip(&root.residue) {
        debug_assert_eq!(a.mod_floor(&pj), b.mod_floor(&pj));
    }
    Ok(out)
}

/// Rule for extending a root table beyond its stored primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootRule {
    /// A single exact integer root used for every prime.
    IntegerRoot(Vec<BigInt>),
    /// Only the stored per-prime table is available.
    Table,
}

/// A fixed choice of p-adic roots of `h`, one per prime.
#[derive(Debug, Clone)]
pub struct RootSelection {
    polynomial: IntPolynomial,
    rule: RootRule,
    roots: BTreeMap<u64, PAdicRoot>,
}

impl RootSelection {
    pub fn integer_root(h: IntPolynomial, n: Vec<BigInt>) -> Result<Self> {
        let v = h.evaluate(&n, None)?;
        if !v.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "claimed integer root evaluates to {v}, not 0"
            )));
        }
        Ok(RootSelection {
            polynomial: h,
            rule: RootRule::IntegerRoot(n),
            roots: BTreeMap::new(),
        })
    }

    pub fn from_table(h: IntPolynomial, roots: Vec<PAdicRoot>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in roots {
            let m = prime_power(r.prime, r.precision);
            let val = h.evaluate(&r.residue, Some(&m))?;
            if !val.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "stored root for p={} does not satisfy h = 0 mod p^{}",
                    r.prime, r.precision
                )));
            }
            map.insert(r.prime, r);
        }
        Ok(RootSelection {
            polynomial: h,
            rule: RootRule::Table,
            roots: map,
        })
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.polynomial
    }

    pub fn rule(&self) -> &RootRule {
        &self.rule
    }

    pub fn stored_roots(&self) -> impl Iterator<Item = (&u64, &PAdicRoot)> {
        self.roots.iter()
    }

    pub fn insert(&mut self, root: PAdicRoot) {
        self.roots.insert(root.prime, root);
    }

    /// Root data for `p` at precision at least `j`, lifting or falling back
    /// to the integer-root rule as needed.
    pub fn root_at(&self, p: u64, j: u32) -> Result<PAdicRoot> {
        if let Some(stored) = self.roots.get(&p) {
            if stored.precision >= j {
                return Ok(stored.clone());
            }
            return hensel_lift(&self.polynomial, stored, j);
        }
        match &self.rule {
            RootRule::IntegerRoot(n) => {
                let base = exact_root(&self.polynomial, p, n)?;
                hensel_lift(&self.polynomial, &base, j)
            }
            RootRule::Table => Err(Error::MissingRootData { p }),
        }
    }

    /// Multiplicity `m_p` for the selected root at `p`.
    pub fn multiplicity(&self, p: u64) -> Result<u32> {
        match self.roots.get(&p) {
            Some(r) => Ok(r.multiplicity),
            None => match &self.rule {
                RootRule::IntegerRoot(n) => {
                    let r = exact_root(&self.polynomial, p, n)?;
                    Ok(r.multiplicity)
                }
                RootRule::Table => Err(Error::MissingRootData { p }),
            },
        }
    }

    /// `lambda(d) = prod p^{m_p ord_p(d)}`, completely multiplicative.
    pub fn lambda(&self, d: u64) -> Result<BigInt> {
        let mut acc = BigInt::one();
        for (p, e) in factorize(d) {
            let m = self.multiplicity(p)?;
            acc *= prime_power(p, m * e);
        }
        Ok(acc)
    }
}

/// Auxiliary polynomial data for a scaling parameter `d`.
#[derive(Debug, Clone)]
pub struct AuxiliaryPolynomial {
    pub d: u64,
    /// Entries in `(-d, 0]`, congruent to the selected roots modulo the
    /// prime powers dividing `d`.
    pub r_d: Vec<BigInt>,
    pub lambda_d: BigInt,
    pub poly: IntPolynomial,
}

impl AuxiliaryPolynomial {
    /// The trivial d = 1 member of the family: r = 0, lambda = 1.
    pub fn unit(h: &IntPolynomial) -> Self {
        AuxiliaryPolynomial {
            d: 1,
            r_d: vec![BigInt::zero(); h.num_vars()],
            lambda_d: BigInt::one(),
            poly: h.clone(),
        }
    }
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Constructs `h_d` for the given selection: `r_d` by CRT into `(-d, 0]`,
/// `lambda(d)` from the multiplicities, and `h_d = h(r_d + d x) / lambda(d)`
/// with integrality verified by exact division.
pub fn build_auxiliary(sel: &RootSelection, d: u64) -> Result<AuxiliaryPolynomial> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let h = sel.polynomial();
    let l = h.num_vars();
    let factors = factorize(d);
    let mut lambda = BigInt::one();
    let mut crt: Vec<(BigInt, BigInt)> = vec![(BigInt::zero(), BigInt::one()); l]; // (value, modulus)
    for &(p, e) in &factors {
        let root = sel.root_at(p, e)?;
        // lambda is fixed by the selection's per-prime multiplicity, not by
        // the lifted root's precision-dependent recomputation; a stale
        // multiplicity then shows up as a NonIntegralQuotient below.
        lambda *= prime_power(p, sel.multiplicity(p)? * e);
        let pe = prime_power(p, e);
        for (i, slot) in crt.iter_mut().enumerate() {
            let target = root.residue[i].mod_floor(&pe);
            let (value, modulus) = slot.clone();
            // CRT merge: x = value mod modulus, x = target mod pe.
            let eg = modulus.extended_gcd(&pe);
            debug_assert!(eg.gcd.is_one());
            let diff = (&target - &value).mod_floor(&pe);
            let t = (&diff * eg.x.mod_floor(&pe)).mod_floor(&pe);
            let new_mod = &modulus * &pe;
            let new_val = (&value + &modulus * &t).mod_floor(&new_mod);
            *slot = (new_val, new_mod);
        }
    }
    let db = BigInt::from(d);
    let r_d: Vec<BigInt> = crt
        .into_iter()
        .map(|(v, _)| {
            let v = v.mod_floor(&db);
            if v.is_zero() {
                v
            } else {
                v - &db
            }
        })
        .collect();
    let substituted = h.affine_substitute(&db, &r_d, None)?;
    let poly = substituted.exact_divide(&lambda)?;
    Ok(AuxiliaryPolynomial {
        d,
        r_d,
        lambda_d: lambda,
        poly,
    })
}

/// Outcome of the intersectivity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectivityVerdict {
    /// Certified for every prime via an integer root or a rational root
    /// system with coprime denominators.
    CertifiedAllPrimes { reason: String },
    CertifiedUpTo(u64),
    /// A modulus with no root of `h`, so the image misses its multiples.
    NonIntersectiveWitness { q: BigInt },
    Unknown { p: u64, reason: String },
}

/// Searches for integer roots of `h` with coordinates bounded by `height`;
/// for univariate polynomials the divisors of the constant term are tested
/// as well. Results sorted by (max-norm, lex).
pub fn find_integer_roots(h: &IntPolynomial, height: i64) -> Vec<Vec<BigInt>> {
    let l = h.num_vars();
    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let mut cur = vec![BigInt::zero(); l];
    fn rec(
        h: &IntPolynomial,
        height: i64,
        pos: usize,
        cur: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if pos == cur.len() {
            if h.evaluate(cur, None).unwrap().is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        for v in -height..=height {
            cur[pos] = BigInt::from(v);
            rec(h, height, pos + 1, cur, out);
        }
    }
    rec(h, height, 0, &mut cur, &mut candidates);
    if l == 1 {
        let c0 = h.constant_term();
        if !c0.is_zero() {
            let bound = c0.abs();
            let mut dv = BigInt::one();
            while &dv * &dv <= bound {
                if bound.is_multiple_of(&dv) {
                    for cand in [
                        dv.clone(),
                        -dv.clone(),
                        &bound / &dv,
                        -(&bound / &dv),
                    ] {
                        if cand.abs() > BigInt::from(height)
                            && h.evaluate(std::slice::from_ref(&cand), None).unwrap().is_zero()
                        {
                            candidates.push(vec![cand]);
                        }
                    }
                }
                dv += 1;
            }
        }
    }
    candidates.sort_by_key(|r| {
        (
            r.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero),
            r.clone(),
        )
    });
    candidates.dedup();
    candidates
}

/// Univariate rational roots a/b in lowest terms (b > 0).
fn rational_roots_univar(h: &IntPolynomial) -> Vec<(BigInt, BigInt)> {
    if h.num_vars() != 1 || h.is_zero() {
        return Vec::new();
    }
    let k = h.degree().unwrap();
    let lead = h.coefficient(&MultiIndex::unit(1, 0, k));
    // Strip trailing zero roots: x | h contributes root 0/1.
    let mut roots = Vec::new();
    let mut poly_coeffs: Vec<BigInt> = (0..=k)
        .map(|i| h.coefficient(&MultiIndex::unit(1, 0, i)))
        .collect();
    while poly_coeffs.first().is_some_and(|c| c.is_zero()) {
        poly_coeffs.remove(0);
        if !roots.contains(&(BigInt::zero(), BigInt::one())) {
            roots.push((BigInt::zero(), BigInt::one()));
        }
    }
    if poly_coeffs.is_empty() {
        return roots;
    }
    let c0 = poly_coeffs[0].abs();
    let cl = lead.abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if n.is_multiple_of(&d) {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out.sort();
        out.dedup();
        out
    };
    let eval_rat = |num: &BigInt, den: &BigInt| -> BigInt {
        // den^k * h(num/den)
        let mut acc = BigInt::zero();
        let deg = poly_coeffs.len() - 1;
        for (i, c) in poly_coeffs.iter().enumerate() {
            acc += c * num.pow(i as u32) * den.pow((deg - i) as u32);
        }
        acc
    };
    for a in divisors(&c0) {
        for b in divisors(&cl) {
            if a.gcd(&b).is_one() {
                for num in [a.clone(), -a.clone()] {
                    if eval_rat(&num, &b).is_zero() {
                        let pair = (num, b.clone());
                        if !roots.contains(&pair) {
                            roots.push(pair);
                        }
                    }
                }
            }
        }
    }
    roots
}

/// Certification outcome for one prime inside the scan.
enum PrimeOutcome {
    Certified,
    Witness(BigInt),
    Unknown(String),
}

fn certify_prime(h: &IntPolynomial, p: u64, depth_budget: u64, point_budget: u64) -> PrimeOutcome {
    let l = h.num_vars();
    // Depth-first deepening of singular roots; a level with no roots at all
    // is a non-intersectivity witness.
    let roots1 = match find_roots_mod(h, p, 1, point_budget) {
        Ok(r) => r,
        Err(_) => return PrimeOutcome::Unknown("level-1 scan over budget".into()),
    };
    if roots1.is_empty() {
        return PrimeOutcome::Witness(BigInt::from(p));
    }
    if roots1.iter().any(|r| r.nonsingular) {
        return PrimeOutcome::Certified;
    }
    // All level-1 roots singular: deepen level by level.
    let mut frontier: Vec<Vec<BigInt>> = roots1.into_iter().map(|r| r.residue).collect();
    let mut nodes: u64 = 0;
    let mut j = 1u32;
    loop {
        j += 1;
        let pj = prime_power(p, j);
        let pj_prev = prime_power(p, j - 1);
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for base in &frontier {
            // Extensions base + p^{j-1} * t, t in [0,p)^l.
            let mut t = vec![0u64; l];
            loop {
                nodes += 1;
                if nodes > depth_budget {
                    return PrimeOutcome::Unknown(format!("depth budget exhausted at p^{j}"));
                }
                let cand: Vec<BigInt> = base
                    .iter()
                    .zip(&t)
                    .map(|(b, &ti)| b + &pj_prev * BigInt::from(ti))
                    .collect();
                if h.evaluate(&cand, Some(&pj)).unwrap().is_zero() {
                    if hensel_certified(h, &cand, p) {
                        return PrimeOutcome::Certified;
                    }
                    next.push(cand);
                }
                // Odometer over t.
                let mut i = l;
                let done = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    t[i] += 1;
                    if t[i] < p {
                        break false;
                    }
                    t[i] = 0;
                };
                if done {
                    break;
                }
            }
        }
        if next.is_empty() {
            return PrimeOutcome::Witness(pj);
        }
        frontier = next;
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n as usize {
        if sieve[p] {
            let mut q = p * p;
            while q <= n as usize {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i as usize]).collect()
}

/// Scans intersectivity: every prime up to `prime_bound` either certifies a
/// Z_p root (Hensel-liftable residue) or yields a witness modulus with no
/// roots; an integer root or a rational root system with coprime
/// denominators certifies all primes at once.
pub fn intersectivity_scan(
    h: &IntPolynomial,
    prime_bound: u64,
    depth_budget: u64,
) -> IntersectivityVerdict {
    if h.is_zero() {
        return IntersectivityVerdict::NonIntersectiveWitness { q: BigInt::one() };
    }
    let int_roots = find_integer_roots(h, 4);
    if let Some(r) = int_roots.first() {
        let coords: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        return IntersectivityVerdict::CertifiedAllPrimes {
            reason: format!("integer root ({})", coords.join(",")),
        };
    }
    if h.num_vars() == 1 {
        let rats = rational_roots_univar(h);
        if !rats.is_empty() {
            let mut g = BigInt::zero();
            for (_, den) in &rats {
                g = g.gcd(den);
            }
            if g.is_one() {
                return IntersectivityVerdict::CertifiedAllPrimes {
                    reason: "rational roots with coprime denominators".into(),
                };
            }
        }
    }
    let point_budget = 10_000_000u64;
    for p in primes_up_to(prime_bound) {
        match certify_prime(h, p, depth_budget, point_budget) {
            PrimeOutcome::Certified => {}
            PrimeOutcome::Witness(q) => {
                return IntersectivityVerdict::NonIntersectiveWitness { q }
            }
            PrimeOutcome::Unknown(reason) => return IntersectivityVerdict::Unknown { p, reason },
        }
    }
    IntersectivityVerdict::CertifiedUpTo(prime_bound)
}

/// Automatic per-prime root choice: exact integer roots first (smallest
/// max-norm, then lex), then nonsingular roots with minimal residue in lex
/// order, then minimal-multiplicity deepened roots.
pub fn select_root(
    h: &IntPolynomial,
    p: u64,
    depth_budget: u64,
    integer_height: i64,
) -> Result<Option<PAdicRoot>> {
    let ints = find_integer_roots(h, integer_height);
    if let Some(n) = ints.first() {
        return Ok(Some(exact_root(h, p, n)?));
    }
    let roots = find_roots_mod(h, p, 1, 10_000_000)?;
    if roots.is_empty() {
        return Ok(None);
    }
    if let Some(best) = roots.iter().find(|r| r.nonsingular) {
        return Ok(Some(best.clone()));
    }
    // All mod-p roots are singular: deepen level by level, preferring the
    // first residue whose representative satisfies the Hensel hypothesis.
    // Such a residue lies below a genuine Z_p root with nonvanishing
    // gradient, so its true multiplicity is 1; uncertified residues (which
    // may not lift at all) are only a fallback, keeping their finite-
    // precision multiplicity and caveat.
    let mut fallback: Option<PAdicRoot> = None;
    let mut frontier = roots;
    let mut budget = depth_budget;
    for _ in 0..8 {
        for r in &frontier {
            if hensel_certified(h, &r.residue, p) {
                let mut out = r.clone();
                out.multiplicity = 1;
                out.multiplicity_caveat = false;
                return Ok(Some(out));
            }
            match &mut fallback {
                Some(b) if b.multiplicity <= r.multiplicity => {}
                _ => fallback = Some(r.clone()),
            }
        }
        let j = frontier[0].precision + 1;
        if prime_power(p, j)
            .to_u64()
            .is_none_or(|m| point_count(m, h.num_vars()) > budget as u128)
        {
            break;
        }
        let next = find_roots_mod(h, p, j, budget)?;
        budget = budget
            .saturating_sub(point_count(prime_power(p, j).to_u64().unwrap(), h.num_vars()) as u64);
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(fallback)
}

/// Whether the representative satisfies the multivariable Hensel
/// hypothesis by exact evaluation: `h(n) = 0 mod p^{2 gamma - 1}` with
/// `grad h(n) != 0 mod p^gamma`, for `gamma` one more than the smallest
/// gradient valuation.
pub fn hensel_certified(h: &IntPolynomial, n: &[BigInt], p: u64) -> bool {
    let c = h
        .gradient()
        .iter()
        .filter_map(|d| ord_p(&d.evaluate(n, None).unwrap(), p))
        .min();
    let Some(c) = c else { return false };
    let gamma = c + 1;
    match ord_p(&h.evaluate(n, None).unwrap(), p) {
        None => true, // exact root
        Some(s) => s >= 2 * gamma - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn pt(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|&v| bi(v)).collect()
    }

    #[test]
    fn roots_of_circle_minus_two_mod_three() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let roots = find_roots_mod(&h, 3, 1, 1_000).unwrap();
        let residues: Vec<(i64, i64)> = roots
            .iter()
            .map(|r| {
                (
                    r.residue[0].to_i64().unwrap(),
                    r.residue[1].to_i64().unwrap(),
                )
            })
            .collect();
        assert_eq!(residues, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        assert!(roots.iter().all(|r| r.nonsingular && r.multiplicity == 1));
    }

    #[test]
    fn cyclotomic_root_mod_three_is_singular() {
        let h = parse_polynomial("x^2 + x + 1", None).unwrap();
        let roots = find_roots_mod(&h, 3, 1, 1_000).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].residue, pt(&[1]));
        assert!(!roots[0].nonsingular);
        assert_eq!(roots[0].multiplicity, 2);
        assert!(roots[0].multiplicity_caveat);
    }

    #[test]
    fn no_roots_mod_four() {
        let h = parse_polynomial("x^2 + y^2 + 1", None).unwrap();
        let roots = find_roots_mod(&h, 2, 2, 1_000).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn hensel_lift_sqrt_two_mod_49() {
        let h = parse_polynomial("x^2 - 2", None).unwrap();
        let root = find_roots_mod(&h, 7, 1, 100)
            .unwrap()
            .into_iter()
            .find(|r| r.residue == pt(&[3]))
            .unwrap();
        let lifted = hensel_lift(&h, &root, 2).unwrap();
        assert_eq!(lifted.residue, pt(&[10]));
        assert_eq!(lifted.precision, 2);
    }

    #[test]
    fn hensel_lift_circle_mod_nine() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let root = find_roots_mod(&h, 3, 1, 1_000)
            .unwrap()
            .into_iter()
            .find(|r| r.residue == pt(&[1, 1]))
            .unwrap();
        let lifted = hensel_lift(&h, &root, 2).unwrap();
        let m = prime_power(3, 2);
        assert!(h.evaluate(&lifted.residue, Some(&m)).unwrap().is_zero());
        // Reduces to the input root mod 3.
        let p = BigInt::from(3);
        assert_eq!(lifted.residue[0].mod_floor(&p), bi(1));
        assert_eq!(lifted.residue[1].mod_floor(&p), bi(1));
        // Already at target precision: unchanged.
        let again = hensel_lift(&h, &lifted, 2).unwrap();
        assert_eq!(again, lifted);
    }

    #[test]
    fn multiplicity_examples() {
        let circle = parse_polynomial("x^2 + y^2", None).unwrap();
        let r0 = exact_root(&circle, 5, &pt(&[0, 0])).unwrap();
        assert_eq!(r0.multiplicity, 2);
        assert!(!r0.multiplicity_caveat);

        let shifted = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        for p in [2u64, 3, 5, 97] {
            let r = exact_root(&shifted, p, &pt(&[1, 1])).unwrap();
            assert_eq!(r.multiplicity, 1, "p={p}");
        }

        let square = parse_polynomial("(x+y)^2", None).unwrap();
        let r2 = exact_root(&square, 7, &pt(&[0, 0])).unwrap();
        assert_eq!(r2.multiplicity, 2);
    }

    #[test]
    fn auxiliary_homogeneous_origin_root() {
        // h = x^2 + y^2, z_p = 0 for all p: lambda(d) = d^2 and h_d = h.
        let h = parse_polynomial("x^2 + y^2", None).unwrap();
        let sel = RootSelection::integer_root(h.clone(), pt(&[0, 0])).unwrap();
        for d in [1u64, 2, 6, 12, 90] {
            let aux = build_auxiliary(&sel, d).unwrap();
            assert_eq!(aux.lambda_d, BigInt::from(d) * BigInt::from(d), "d={d}");
            assert_eq!(aux.poly, h, "d={d}");
            assert!(aux.r_d.iter().all(|r| r.is_zero()));
        }
    }

    #[test]
    fn auxiliary_shifted_circle_d_two() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel = RootSelection::integer_root(h.clone(), pt(&[1, 1])).unwrap();
        let aux = build_auxiliary(&sel, 2).unwrap();
        assert_eq!(aux.r_d, pt(&[-1, -1]));
        assert_eq!(aux.lambda_d, bi(2));
        let expected = parse_polynomial("2*x^2 - 2*x + 2*y^2 - 2*y", None).unwrap();
        assert_eq!(aux.poly, expected);
    }

    #[test]
    fn lambda_is_completely_multiplicative_with_mixed_multiplicities() {
        // h = (x-1)(x-4)^2 with z_2 = 1 (m=1) and z_3 = 4 (m=2).
        let h = parse_polynomial("(x-1)*(x-4)^2", None).unwrap();
        let r2 = exact_root(&h, 2, &pt(&[1])).unwrap();
        assert_eq!(r2.multiplicity, 1);
        let r3 = exact_root(&h, 3, &pt(&[4])).unwrap();
        assert_eq!(r3.multiplicity, 2);
        let sel = RootSelection::from_table(h.clone(), vec![r2, r3]).unwrap();
        assert_eq!(sel.lambda(12).unwrap(), bi(36));
        assert_eq!(
            sel.lambda(6).unwrap() * sel.lambda(2).unwrap(),
            sel.lambda(12).unwrap()
        );
        // Auxiliary integrality at d = 12.
        let aux = build_auxiliary(&sel, 12).unwrap();
        assert_eq!(aux.r_d, pt(&[-11]));
        assert_eq!(aux.lambda_d, bi(36));
        // lambda(12) h_12(x) = h(r + 12 x) exactly.
        let subbed = h
            .affine_substitute(&bi(12), &aux.r_d, None)
            .unwrap();
        assert_eq!(aux.poly.scale(&aux.lambda_d), subbed);
    }

    #[test]
    fn top_degree_relation() {
        // h_d^k = (d^k / lambda(d)) h^k
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel = RootSelection::integer_root(h.clone(), pt(&[1, 1])).unwrap();
        let k = h.degree().unwrap();
        for d in [2u64, 3, 4, 15] {
            let aux = build_auxiliary(&sel, d).unwrap();
            let scale = BigInt::from(d).pow(k) / &aux.lambda_d;
            assert_eq!(
                aux.poly.homogeneous_part(k),
                h.homogeneous_part(k).scale(&scale),
                "d={d}"
            );
        }
    }

    #[test]
    fn crt_coherence_r_qd_equals_r_d_mod_d() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel = RootSelection::integer_root(h.clone(), pt(&[1, 1])).unwrap();
        for (q, d) in [(2u64, 3u64), (3, 4), (5, 6), (2, 2)] {
            let a_d = build_auxiliary(&sel, d).unwrap();
            let a_qd = build_auxiliary(&sel, q * d).unwrap();
            let db = BigInt::from(d);
            for (r1, r2) in a_qd.r_d.iter().zip(&a_d.r_d) {
                assert_eq!(r1.mod_floor(&db), r2.mod_floor(&db), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn intersectivity_fixtures() {
        let circle = parse_polynomial("x^2 + y^2", None).unwrap();
        assert!(matches!(
            intersectivity_scan(&circle, 20, 100_000),
            IntersectivityVerdict::CertifiedAllPrimes { .. }
        ));

        let blocked = parse_polynomial("x^2 + y^2 + 1", None).unwrap();
        match intersectivity_scan(&blocked, 20, 100_000) {
            IntersectivityVerdict::NonIntersectiveWitness { q } => assert_eq!(q, bi(4)),
            other => panic!("expected witness, got {other:?}"),
        }

        let classic = parse_polynomial("(x^3 - 19)*(x^2 + x + 1)", None).unwrap();
        assert_eq!(
            intersectivity_scan(&classic, 100, 1_000_000),
            IntersectivityVerdict::CertifiedUpTo(100)
        );
    }

    #[test]
    fn selection_prefers_certified_branches() {
        // (x^3 - 19)(x^2 + x + 1) mod 27 has residues like 1 that are
        // roots of the product without lying below any Z_3 root; the
        // selection must land on the certified cube-root branch (7 mod 9)
        // so the auxiliary family stays integral at every 3-power.
        let h = parse_polynomial("(x^3 - 19)*(x^2 + x + 1)", None).unwrap();
        let root = select_root(&h, 3, 1_000_000, 4).unwrap().unwrap();
        assert_eq!(root.multiplicity, 1);
        assert!(!root.multiplicity_caveat);
        let nine = BigInt::from(9);
        assert_eq!(root.residue[0].mod_floor(&nine), bi(7));
        let mut sel = RootSelection::from_table(h.clone(), Vec::new()).unwrap();
        sel.insert(root);
        for d in [3u64, 9, 27, 81] {
            let aux = build_auxiliary(&sel, d).unwrap();
            assert_eq!(aux.lambda_d, BigInt::from(d));
            // lambda(d) h_d(x) = h(r_d + d x) exactly.
            let subbed = h
                .affine_substitute(&BigInt::from(d), &aux.r_d, None)
                .unwrap();
            assert_eq!(aux.poly.scale(&aux.lambda_d), subbed, "d = {d}");
        }
    }

    #[test]
    fn integer_root_search_prefers_small_roots() {
        let ugly = parse_polynomial("x^4 - 2*y^4 + 2*x^2*(x+y) + (x+y)^2", None).unwrap();
        let roots = find_integer_roots(&ugly, 3);
        assert!(roots.contains(&pt(&[0, 0])));
        assert!(roots.contains(&pt(&[-1, 0])));
        assert_eq!(roots[0], pt(&[0, 0]));
    }
}
