//! Complete, local, and sieved exponential sums; oscillatory integrals;
//! Dirichlet rational approximation with arc classification; and the
//! explicit-bound reports for the major- and minor-arc estimates.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{factorize, AuxiliaryPolynomial};
use crate::poly::IntPolynomial;
use crate::scan::{for_each_point, point_count, I128Poly, ScanPoly};
use crate::sieve::SieveProfile;

/// Neumaier compensated accumulator for complex sums; the summation order
/// is part of the contract (lexicographic over the input box), so partial
/// sums are never re-associated.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: Complex64) {
        let t_re = self.sum_re + v.re;
        if self.sum_re.abs() >= v.re.abs() {
            self.c_re += (self.sum_re - t_re) + v.re;
        } else {
            self.c_re += (v.re - t_re) + self.sum_re;
        }
        self.sum_re = t_re;
        let t_im = self.sum_im + v.im;
        if self.sum_im.abs() >= v.im.abs() {
            self.c_im += (self.sum_im - t_im) + v.im;
        } else {
            self.c_im += (v.im - t_im) + self.sum_im;
        }
        self.sum_im = t_im;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

fn unit_roots(m: u64) -> Vec<Complex64> {
    (0..m)
        .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64))
        .collect()
}

/// An exponential-sum report: the complex value, the explicit bound when it
/// applies, their ratio, and the input parameters echoed.
#[derive(Debug, Clone)]
pub struct ExpSumReport {
    pub value: Complex64,
    pub bound: Option<f64>,
    /// The formula behind the bound, when one applies.
    pub bound_expression: Option<String>,
    pub ratio: Option<f64>,
    pub terms: u64,
    pub params: Vec<(String, String)>,
    /// Exact-vanishing certificate from integer residue bucketing, set when
    /// the bucket counts force the sum to be exactly zero.
    pub exact_zero: bool,
}

impl ExpSumReport {
    fn with_bound(mut self, bound: Option<f64>) -> Self {
        self.bound = bound;
        self.ratio = bound.map(|b| {
            if b == 0.0 {
                // Exact-zero bounds: numerically zero values count as met.
                if self.value.norm() <= 1e-9 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                self.value.norm() / b
            }
        });
        self
    }
}

/// Whether the reduction of `h` mod p is Deligne with full degree: p does
/// not divide `k = deg h`, the top part survives reduction, and it is
/// smooth mod p by exhaustive scan.
pub fn deligne_with_full_degree(h: &IntPolynomial, p: u64, point_budget: u64) -> bool {
    let Some(k) = h.degree() else { return false };
    if k == 0 || (k as u64).is_multiple_of(p) {
        return false;
    }
    let top = h.top_part().reduce_mod(&BigInt::from(p));
    if top.degree() != Some(k) {
        return false;
    }
    if k == 1 {
        return true;
    }
    matches!(
        crate::classify::smooth_mod_p(&top, p, point_budget),
        Ok(crate::classify::SmoothScan::Smooth)
    )
}

/// Complete sum over `F_p^l` of `e(h(x)/p)` via a residue bucket table and
/// a precomputed p-th root-of-unity table. Carries the square-root
/// cancellation bound `(k-1)^l p^{l/2}` when `h` is Deligne mod p.
pub fn complete_sum_mod_p(h: &IntPolynomial, p: u64, point_budget: u64) -> Result<ExpSumReport> {
    let l = h.num_vars();
    let points = point_count(p, l);
    if points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "complete sum",
            needed: points,
            limit: point_budget as u128,
        });
    }
    let sp = ScanPoly::new(h, p);
    let mut counts = vec![0u64; p as usize];
    for_each_point(p, l, |pt| {
        counts[sp.eval(pt) as usize] += 1;
    });
    let roots = unit_roots(p);
    let mut acc = CompensatedSum::default();
    for (r, &c) in counts.iter().enumerate() {
        if c > 0 {
            acc.add(roots[r] * c as f64);
        }
    }
    let k = h.degree().unwrap_or(0);
    let bound = if deligne_with_full_degree(h, p, point_budget) {
        Some(((k as f64) - 1.0).powi(l as i32) * (p as f64).powf(l as f64 / 2.0))
    } else {
        None
    };
    Ok(ExpSumReport {
        value: acc.value(),
        bound: None,
        bound_expression: bound
            .map(|_| format!("(k-1)^l p^(l/2) = ({k}-1)^{l} {p}^({l}/2)")),
        ratio: None,
        terms: points as u64,
        params: vec![
            ("p".into(), p.to_string()),
            ("l".into(), l.to_string()),
            ("k".into(), k.to_string()),
        ],
        exact_zero: false,
    }
    .with_bound(bound))
}

/// Local data for the sieved sum: which prime-power moduli of the profile
/// divide q, as membership conditions on `{0,..,q-1}^l`.
fn local_membership_moduli(profile: &SieveProfile, q: u64) -> Vec<u64> {
    profile
        .entries()
        .iter()
        .map(|e| e.p.pow(e.gamma))
        .filter(|pg| q.is_multiple_of(*pg))
        .collect()
}

/// Sieved local sum `sum_{s in [0,q)^l ∩ W^q(Y)} e(g(s) a / q)`.
///
/// The bound is attached only when every prime factor of q falls in an
/// explicit case of the local-cancellation lemma: `p <= Y` Deligne mod p
/// with `v = gamma(p) = 1` contributes `(k-1)^l p^{l/2} + j(p)`, and
/// `p <= Y` with `v >= 2 gamma(p)` forces the factor (hence the sum) to be
/// exactly zero.
pub fn sieved_local_sum(
    g: &IntPolynomial,
    q: u64,
    a: u64,
    y: u64,
    max_gamma: u32,
    point_budget: u64,
) -> Result<ExpSumReport> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    let a = a % q;
    if BigInt::from(a).gcd(&BigInt::from(q)) != BigInt::one() {
        return Err(Error::NotCoprime { a, q });
    }
    let l = g.num_vars();
    let points = point_count(q, l);
    if points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "sieved local sum",
            needed: points,
            limit: point_budget as u128,
        });
    }
    let profile = SieveProfile::build(g, y, max_gamma, point_budget)?;
    let conditions: Vec<(u64, crate::scan::ScanGradient)> = local_membership_moduli(&profile, q)
        .into_iter()
        .map(|m| (m, crate::scan::ScanGradient::new(g, m)))
        .collect();
    let sp = ScanPoly::new(g, q);
    let mut counts = vec![0u64; q as usize];
    let mut kept = 0u64;
    let mut reduced = vec![0u64; l];
    for_each_point(q, l, |pt| {
        for (m, grad) in &conditions {
            for (r, &c) in reduced.iter_mut().zip(pt) {
                *r = c % m;
            }
            if grad.vanishes_at(&reduced) {
                return;
            }
        }
        kept += 1;
        let v = crate::scan::mulmod(sp.eval(pt), a, q);
        counts[v as usize] += 1;
    });
    let roots = unit_roots(q);
    let mut acc = CompensatedSum::default();
    for (r, &c) in counts.iter().enumerate() {
        if c > 0 {
            acc.add(roots[r] * c as f64);
        }
    }
    // Explicit bound assembly per prime factor. A factor with
    // v >= 2 gamma(p) is exactly zero and annihilates the CRT product, so
    // it overrides any inexplicit factor.
    let k = g.degree().unwrap_or(0);
    let factors = factorize(q);
    let forces_zero = factors.iter().any(|&(p, v)| {
        profile
            .entries()
            .iter()
            .find(|e| e.p == p)
            .is_some_and(|e| v >= 2 * e.gamma)
    });
    let mut bound: Option<f64> = Some(1.0);
    let mut bound_parts: Vec<String> = Vec::new();
    if forces_zero {
        bound = Some(0.0);
        bound_parts.push("0 (some p^v || q has v >= 2 gamma(p))".into());
    } else {
        for &(p, v) in &factors {
            let entry = profile.entries().iter().find(|e| e.p == p);
            match entry {
                Some(e)
                    if v == 1
                        && e.gamma == 1
                        && deligne_with_full_degree(g, p, point_budget) =>
                {
                    let factor = ((k as f64) - 1.0).powi(l as i32)
                        * (p as f64).powf(l as f64 / 2.0)
                        + e.j as f64;
                    bound = bound.map(|b| b * factor);
                    bound_parts.push(format!(
                        "((k-1)^l p^(l/2) + j(p)) at p = {p} with j = {}",
                        e.j
                    ));
                }
                _ => {
                    bound = None;
                    bound_parts.clear();
                    break;
                }
            }
        }
    }
    // Exact-zero certificate: bucket counts constant along progressions of
    // step q / p^{v - (2 gamma - 1)} when some p^v || q with v >= 2 gamma.
    let mut exact_zero = false;
    if forces_zero {
        'outer: for (p, v) in factors {
            if let Some(e) = profile.entries().iter().find(|e| e.p == p) {
                if v >= 2 * e.gamma {
                    let w = 2 * e.gamma - 1;
                    let step = q / p.pow(v - w);
                    let period_ok = (0..q as usize)
                        .all(|r| counts[r] == counts[(r + step as usize) % q as usize]);
                    if period_ok {
                        exact_zero = true;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(ExpSumReport {
        value: acc.value(),
        bound: None,
        bound_expression: if bound_parts.is_empty() {
            None
        } else {
            Some(bound_parts.join(" * "))
        },
        ratio: None,
        terms: kept,
        params: vec![
            ("q".into(), q.to_string()),
            ("a".into(), a.to_string()),
            ("Y".into(), y.to_string()),
        ],
        exact_zero,
    }
    .with_bound(bound))
}

/// Splitting of a frequency alpha into `a/q + beta` for phase evaluation.
#[derive(Debug, Clone)]
pub struct PhaseSplit {
    pub a: u64,
    pub q: u64,
    pub beta: BigRational,
}

/// Largest exact denominator for the root-of-unity table; larger
/// denominators split into a Dirichlet convergent plus a beta remainder.
const PHASE_TABLE_CAP: u64 = 1 << 20;

impl PhaseSplit {
    /// Exact when alpha's reduced denominator is small enough for the
    /// root-of-unity table; otherwise a Dirichlet convergent with the
    /// remainder folded into beta.
    pub fn of(alpha: &BigRational) -> PhaseSplit {
        let frac = alpha - alpha.floor();
        if let Some(q) = frac.denom().to_u64() {
            if q > 0 && q <= PHASE_TABLE_CAP {
                let a = frac.numer().to_u64().unwrap_or(0) % q.max(1);
                return PhaseSplit {
                    a,
                    q,
                    beta: BigRational::zero(),
                };
            }
        }
        let arc = rational_approximation(alpha, PHASE_TABLE_CAP, None);
        PhaseSplit {
            a: arc.a,
            q: arc.q,
            beta: arc.beta,
        }
    }
}

/// Sieved Weyl sum `S(alpha) = sum_{n in [1,M]^l ∩ W_d(Y)} e(h_d(n) alpha)`
/// by direct streaming in lexicographic order with compensated summation.
pub fn sieved_weyl_sum(
    aux: &AuxiliaryPolynomial,
    alpha: &BigRational,
    m_box: u64,
    y: u64,
    max_gamma: u32,
    point_budget: u64,
) -> Result<ExpSumReport> {
    let g = &aux.poly;
    let l = g.num_vars();
    let points = point_count(m_box, l);
    if points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "sieved Weyl sum",
            needed: points,
            limit: point_budget as u128,
        });
    }
    let profile = SieveProfile::build(g, y, max_gamma, point_budget)?;
    let mods: Vec<(u64, crate::scan::ScanGradient)> = profile
        .entries()
        .iter()
        .map(|e| {
            let m = e.p.pow(e.gamma);
            (m, crate::scan::ScanGradient::new(g, m))
        })
        .collect();
    let split = PhaseSplit::of(alpha);
    let beta_f = split.beta.to_f64().unwrap_or(0.0);
    let qroots = unit_roots(split.q);
    // Values h_d(n) in the box fit i128 comfortably at desk scale; verify.
    // With a nonzero beta the fast path also converts values to f64 for the
    // phase, which caps usable magnitudes at 2^53; beyond either cap the
    // exact-rational path takes over.
    let max_coord = BigInt::from(m_box);
    let bound_estimate = g.coeff_abs_sum()
        * max_coord.pow(g.degree().unwrap_or(0));
    let value_cap = if split.beta.is_zero() { 100u32 } else { 53 };
    let use_i128 = bound_estimate < (BigInt::one() << value_cap);
    let ipoly = if use_i128 { I128Poly::new(g) } else { None };
    let mut acc = CompensatedSum::default();
    let mut kept = 0u64;
    let mut coords = vec![1u64; l];
    let mut reduced = vec![0u64; l];
    let mut ipt = vec![0i128; l];
    let mut bpt = vec![BigInt::zero(); l];
    loop {
        let mut member = true;
        for (mm, grad) in &mods {
            for (r, &c) in reduced.iter_mut().zip(&coords) {
                *r = c % mm;
            }
            if grad.vanishes_at(&reduced) {
                member = false;
                break;
            }
        }
        if member {
            kept += 1;
            let term = match &ipoly {
                Some(ip) => {
                    for (d, &c) in ipt.iter_mut().zip(&coords) {
                        *d = c as i128;
                    }
                    let v = ip.eval(&ipt);
                    let r = v.rem_euclid(split.q as i128) as u64;
                    let idx = crate::scan::mulmod(r, split.a, split.q);
                    let main = qroots[idx as usize];
                    if beta_f != 0.0 {
                        let phase = beta_f * v as f64;
                        main * Complex64::from_polar(1.0, 2.0 * PI * (phase - phase.round()))
                    } else {
                        main
                    }
                }
                None => {
                    for (d, c) in bpt.iter_mut().zip(&coords) {
                        *d = BigInt::from(*c);
                    }
                    let v = g.evaluate(&bpt, None)?;
                    let qb = BigInt::from(split.q);
                    let r = v.mod_floor(&qb).to_u64().unwrap();
                    let idx = crate::scan::mulmod(r, split.a, split.q);
                    let main = qroots[idx as usize];
                    if !split.beta.is_zero() {
                        let phase_rat = &split.beta * BigRational::from_integer(v);
                        let frac = (&phase_rat - phase_rat.round()).to_f64().unwrap();
                        main * Complex64::from_polar(1.0, 2.0 * PI * frac)
                    } else {
                        main
                    }
                }
            };
            acc.add(term);
        }
        let mut i = l;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] <= m_box {
                break false;
            }
            coords[i] = 1;
        };
        if done {
            break;
        }
    }
    Ok(ExpSumReport {
        value: acc.value(),
        bound: None,
        bound_expression: None,
        ratio: None,
        terms: kept,
        params: vec![
            ("d".into(), aux.d.to_string()),
            ("M".into(), m_box.to_string()),
            ("Y".into(), y.to_string()),
            ("alpha".into(), alpha.to_string()),
        ],
        exact_zero: false,
    })
}

/// Tensor-grid composite Simpson quadrature of
/// `int_{[0,X]^l} e(g(x) beta) dx` with at least 20 points per phase
/// oscillation per axis.
pub fn oscillatory_integral(
    g: &IntPolynomial,
    beta: f64,
    x_len: f64,
    quadrature_points: Option<u64>,
    point_budget: u64,
) -> Result<Complex64> {
    let l = g.num_vars();
    if beta == 0.0 {
        return Ok(Complex64::new(x_len.powi(l as i32), 0.0));
    }
    let k = g.degree().unwrap_or(0);
    let j: f64 = g.coeff_abs_sum().to_f64().unwrap_or(f64::MAX);
    let needed = (20.0 * (1.0 + k as f64 * j * x_len.powi(k as i32) * beta.abs())).ceil() as u64;
    let n = match quadrature_points {
        Some(p) => {
            if p < needed {
                return Err(Error::ResolutionInsufficient { needed, got: p });
            }
            p
        }
        None => needed,
    };
    let n = if n % 2 == 1 { n + 1 } else { n }; // Simpson needs even panels
    let grid_points = point_count(n + 1, l);
    if grid_points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "quadrature grid",
            needed: grid_points,
            limit: point_budget as u128,
        });
    }
    let h = x_len / n as f64;
    let w1 = |i: u64| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    // Coefficients as f64 once.
    let terms: Vec<(Vec<u32>, f64)> = g
        .terms()
        .map(|(idx, c)| (idx.exps().to_vec(), c.to_f64().unwrap()))
        .collect();
    let eval = |pt: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (exps, c) in &terms {
            let mut v = *c;
            for (i, &e) in exps.iter().enumerate() {
                v *= pt[i].powi(e as i32);
            }
            acc += v;
        }
        acc
    };
    let mut acc = CompensatedSum::default();
    let mut idx = vec![0u64; l];
    let mut pt = vec![0.0f64; l];
    loop {
        let mut w = 1.0;
        for (i, &d) in idx.iter().enumerate() {
            w *= w1(d);
            pt[i] = d as f64 * h;
        }
        let phase = beta * eval(&pt);
        acc.add(Complex64::from_polar(w, 2.0 * PI * (phase - phase.round())));
        let mut i = l;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] <= n {
                break false;
            }
            idx[i] = 0;
        };
        if done {
            break;
        }
    }
    let scale = (h / 3.0).powi(l as i32);
    Ok(acc.value() * scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arc {
    Major { q: u64 },
    Minor,
}

/// A frequency with its Dirichlet rational approximation and arc class.
#[derive(Debug, Clone)]
pub struct ArcPoint {
    pub alpha: BigRational,
    pub a: u64,
    pub q: u64,
    pub beta: BigRational,
    pub q_bound: u64,
    pub arc: Arc,
}

/// Continued-fraction convergents of a rational in `[0,1)` with
/// denominators up to the cap.
fn convergents(alpha: &BigRational, q_cap: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut num = alpha.numer().clone();
    let mut den = alpha.denom().clone();
    // h_{-2}/k_{-2} = 0/1, h_{-1}/k_{-1} = 1/0.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    while !den.is_zero() {
        let (a, r) = num.div_rem(&den);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > q_cap {
            break;
        }
        out.push((p2.clone(), q2.clone()));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        num = den;
        den = r;
    }
    out
}

/// Dirichlet approximation by continued-fraction convergents: returns the
/// last convergent with denominator at most Q, which satisfies
/// `|alpha - a/q| < 1/(q Q) <= q^{-2}`. The arc field compares `(q, |beta|)`
/// against `(Q, gamma)`, with `gamma` defaulting to `1/(2 Q^2)`.
pub fn rational_approximation(
    alpha: &BigRational,
    q_bound: u64,
    gamma: Option<BigRational>,
) -> ArcPoint {
    let q_bound = q_bound.max(1);
    let frac = alpha - alpha.floor();
    let cap = BigInt::from(q_bound);
    let gamma = gamma.unwrap_or_else(|| {
        BigRational::new(BigInt::one(), BigInt::from(2) * &cap * &cap)
    });
    let convs = convergents(&frac, &cap);
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut major = false;
    for (p, q) in &convs {
        if q > &cap || q.is_zero() {
            continue;
        }
        let approx = BigRational::new(p.clone(), q.clone());
        let dist = (&frac - &approx).abs();
        if dist < gamma {
            major = true;
        }
        best = Some((p.clone(), q.clone()));
    }
    let (a_big, q_big) = best.unwrap_or((BigInt::zero(), BigInt::one()));
    let q = q_big.to_u64().unwrap();
    let beta = &frac - BigRational::new(a_big.clone(), q_big);
    let a = a_big.mod_floor(&BigInt::from(q)).to_u64().unwrap();
    ArcPoint {
        alpha: frac,
        a,
        q,
        beta,
        q_bound,
        arc: if major { Arc::Major { q } } else { Arc::Minor },
    }
}

/// Comparison of the sieved Weyl sum against the major-arc main term
/// `q^{-l} w_q' S_loc(a/q) int_{[0,M]^l} e(g(x) beta) dx`.
#[derive(Debug, Clone)]
pub struct MajorArcReport {
    pub computed: Complex64,
    pub main_term: Complex64,
    pub abs_error: f64,
    pub rel_error: Option<f64>,
    pub local_sum: Complex64,
    pub weight_partial: BigRational,
    pub integral: Complex64,
}

#[allow(clippy::too_many_arguments)]
pub fn major_arc_compare(
    aux: &AuxiliaryPolynomial,
    a: u64,
    q: u64,
    beta: &BigRational,
    m_box: u64,
    y: u64,
    max_gamma: u32,
    point_budget: u64,
) -> Result<MajorArcReport> {
    let g = &aux.poly;
    let l = g.num_vars();
    if q == 0 {
        return Err(Error::InvalidParameter("q must be positive".into()));
    }
    if BigInt::from(a % q).gcd(&BigInt::from(q)) != BigInt::one() {
        return Err(Error::NotCoprime { a: a % q, q });
    }
    let profile = SieveProfile::build(g, y, max_gamma, point_budget)?;
    let w_partial = profile.weight_excluding_divisors_of(q, l);
    let local = sieved_local_sum(g, q, a % q, y, max_gamma, point_budget)?;
    let beta_f = beta.to_f64().unwrap_or(0.0);
    let integral = oscillatory_integral(g, beta_f, m_box as f64, None, point_budget)?;
    let qf = (q as f64).powi(l as i32);
    let wf = w_partial.to_f64().unwrap();
    let main = local.value * integral * (wf / qf);
    let alpha = BigRational::new(BigInt::from(a), BigInt::from(q)) + beta;
    let computed = sieved_weyl_sum(aux, &alpha, m_box, y, max_gamma, point_budget)?;
    let abs_error = (computed.value - main).norm();
    let rel_error = if main.norm() > 0.0 {
        Some(abs_error / main.norm())
    } else {
        None
    };
    Ok(MajorArcReport {
        computed: computed.value,
        main_term: main,
        abs_error,
        rel_error,
        local_sum: local.value,
        weight_partial: w_partial,
        integral,
    })
}

/// Value of the minor-arc bound expression with every implicit constant
/// set to 1:
/// `cont^6 (log Y)^(e k) X^l (exp(-log Z / log Y)
///  + (J log^(k^2)(J q X) (1/q + Z/X + q Z^k / X^k))^(2^-k))`.
#[allow(clippy::too_many_arguments)]
pub fn minor_arc_bound_value(
    k: u32,
    l: usize,
    coeff_abs_sum: f64,
    cont: f64,
    x: f64,
    y: f64,
    z: f64,
    q: f64,
) -> f64 {
    let kf = k as f64;
    let inner = coeff_abs_sum
        * (coeff_abs_sum * q * x).ln().powf(kf * kf)
        * (1.0 / q + z / x + q * z.powf(kf) / x.powf(kf));
    cont.powi(6)
        * y.ln().powf(std::f64::consts::E * kf)
        * x.powi(l as i32)
        * ((-z.ln() / y.ln()).exp() + inner.powf(2f64.powi(-(k as i32))))
}

/// Minor-arc bound evaluation with every implicit constant set to 1.
/// This is a report, never an assertion: the estimate's constants are
/// ineffective, so the ratio is informational only.
#[derive(Debug, Clone)]
pub struct MinorArcReport {
    pub computed_abs: f64,
    pub bound_value: f64,
    pub ratio: f64,
    pub terms: u64,
}

#[allow(clippy::too_many_arguments)]
pub fn minor_arc_report(
    g: &IntPolynomial,
    alpha: &BigRational,
    x_len: u64,
    y: u64,
    z: u64,
    q: u64,
    a: u64,
    max_gamma: u32,
    point_budget: u64,
) -> Result<MinorArcReport> {
    if x_len < 2 || y < 2 || z < 2 {
        return Err(Error::InvalidParameter("X, Y, Z must all be at least 2".into()));
    }
    if y.saturating_mul(z) > x_len {
        return Err(Error::InvalidParameter("YZ <= X required".into()));
    }
    if BigInt::from(a % q).gcd(&BigInt::from(q)) != BigInt::one() {
        return Err(Error::NotCoprime { a: a % q, q });
    }
    let approx = BigRational::new(BigInt::from(a), BigInt::from(q));
    let dist = (alpha - &approx).abs();
    let qsq = BigRational::new(BigInt::one(), BigInt::from(q) * BigInt::from(q));
    if dist >= qsq {
        return Err(Error::InvalidParameter(
            "|alpha - a/q| < q^{-2} required".into(),
        ));
    }
    let l = g.num_vars();
    let k = g.degree().unwrap_or(0);
    let j: f64 = g.coeff_abs_sum().to_f64().unwrap();
    let cont: f64 = g.content().to_f64().unwrap().max(1.0);
    let bound = minor_arc_bound_value(k, l, j, cont, x_len as f64, y as f64, z as f64, q as f64);
    let aux = AuxiliaryPolynomial::unit(g);
    let s = sieved_weyl_sum(&aux, alpha, x_len, y, max_gamma, point_budget)?;
    Ok(MinorArcReport {
        computed_abs: s.value.norm(),
        bound_value: bound,
        ratio: s.value.norm() / bound,
        terms: s.terms,
    })
}

/// The proof's parameter schedule: `Q = eta^{-2}`, `Y = eta^{-2k}`,
/// `gamma = eta^{-2k} / N`, `Z = N^{c0}`.
#[derive(Debug, Clone, Copy)]
pub struct PaperSchedule {
    pub q_bound: f64,
    pub y: f64,
    pub gamma: f64,
    pub z: f64,
}

pub fn paper_schedule(eta: f64, k: u32, n: f64, c0: f64) -> PaperSchedule {
    PaperSchedule {
        q_bound: eta.powi(-2),
        y: eta.powf(-2.0 * k as f64),
        gamma: eta.powf(-2.0 * k as f64) / n,
        z: n.powf(c0),
    }
}
