//! The nonsingularity hierarchy: smoothness mod p, the Deligne property,
//! rank of a form, the strongly Deligne scan over the auxiliary family, and
//! constructive dimension lowering along integer hyperplanes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{
    build_auxiliary, find_integer_roots, intersectivity_scan, primes_up_to, IntersectivityVerdict,
    RootRule, RootSelection,
};
use crate::poly::{IntPolynomial, LinearMap, MultiIndex};
use crate::resultant::discriminant_binary_form;
use crate::scan::{point_count, ScanGradient, ScanPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    SmoothModP,
    Deligne,
    StronglyDeligne,
    SmoothlyIntersective,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Certified,
    Refuted,
    Unknown,
}

/// One (d, p) pair where the reduction of `h_d` failed to be Deligne.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeligneFailure {
    pub d: u64,
    pub p: u64,
    /// Degree of the top nonvanishing part of `h_d` modulo `p`.
    pub top_degree: u32,
    /// For bivariate forms: the discriminant of that top part vanished mod p.
    pub disc_zero_mod_p: bool,
    /// A singular projective point mod p, when one was scanned.
    pub singular_point: Option<Vec<u64>>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Singular projective point, rational (`p = None`) or modulo a prime.
    ProjectivePoint { p: Option<u64>, coords: Vec<BigInt> },
    Prime(u64),
    Rank(u32),
    RepeatedFactor(IntPolynomial),
    FailureFamily(Vec<DeligneFailure>),
    DValue(u64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BudgetUsed {
    pub points_scanned: u128,
    pub limits_hit: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ClassificationVerdict {
    pub property: Property,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Human-readable derivation chain, one step per entry.
    pub certificate: Vec<String>,
    pub budget_used: BudgetUsed,
}

impl ClassificationVerdict {
    fn new(property: Property, status: Status) -> Self {
        ClassificationVerdict {
            property,
            status,
            witness: None,
            certificate: Vec::new(),
            budget_used: BudgetUsed::default(),
        }
    }
}

/// Outcome of the exhaustive projective scan modulo p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmoothScan {
    Smooth,
    /// First singular point in canonical order (affine representative with
    /// leading coordinate 1 after leading zeros).
    SingularPoint(Vec<u64>),
}

/// Scans all projective representatives over `F_p` for common zeros of the
/// form and its partials. Representatives are enumerated with pivot
/// coordinate set to 1 after leading zeros, free coordinates ascending.
pub fn smooth_mod_p(g: &IntPolynomial, p: u64, point_budget: u64) -> Result<SmoothScan> {
    if !g.is_homogeneous() || g.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let l = g.num_vars();
    let total: u128 = (0..l).map(|i| point_count(p, l - 1 - i)).sum();
    if total > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "projective smoothness scan",
            needed: total,
            limit: point_budget as u128,
        });
    }
    let gp = ScanPoly::new(g, p);
    let grad = ScanGradient::new(g, p);
    let mut point = vec![0u64; l];
    for pivot in 0..l {
        for slot in point.iter_mut().take(pivot) {
            *slot = 0;
        }
        point[pivot] = 1;
        let free = l - 1 - pivot;
        let mut found: Option<Vec<u64>> = None;
        crate::scan::for_each_point(p, free, |tail| {
            if found.is_some() {
                return;
            }
            let mut pt = point.clone();
            pt[pivot + 1..].copy_from_slice(tail);
            if gp.eval(&pt) == 0 && grad.vanishes_at(&pt) {
                found = Some(pt);
            }
        });
        if let Some(pt) = found {
            return Ok(SmoothScan::SingularPoint(pt));
        }
    }
    Ok(SmoothScan::Smooth)
}

/// Count of affine points in `F_p^l` where the whole gradient vanishes.
pub fn gradient_locus_count(g: &IntPolynomial, p: u64, point_budget: u64) -> Result<u64> {
    let l = g.num_vars();
    let points = point_count(p, l);
    if points > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "gradient locus scan",
            needed: points,
            limit: point_budget as u128,
        });
    }
    let grad = ScanGradient::new(g, p);
    let mut count = 0u64;
    crate::scan::for_each_point(p, l, |pt| {
        if grad.vanishes_at(pt) {
            count += 1;
        }
    });
    Ok(count)
}

/// Default scan primes: the primes below 100 not dividing `k`.
pub fn scan_primes(k: u32) -> Vec<u64> {
    primes_up_to(99)
        .into_iter()
        .filter(|&p| !(k as u64).is_multiple_of(p))
        .collect()
}

/// Small-height search for a rational singular point of a form: primitive
/// integer vectors ordered by max-norm then lex, first nonzero coordinate
/// positive, checked by exact evaluation of the form and all partials.
pub fn rational_singular_point(g: &IntPolynomial, height: i64) -> Option<Vec<BigInt>> {
    let l = g.num_vars();
    let grads = g.gradient();
    let mut best: Option<Vec<BigInt>> = None;
    let mut cur = vec![0i64; l];
    fn rec(
        pos: usize,
        height: i64,
        cur: &mut Vec<i64>,
        candidates: &mut Vec<Vec<i64>>,
    ) {
        if pos == cur.len() {
            candidates.push(cur.clone());
            return;
        }
        for v in -height..=height {
            cur[pos] = v;
            rec(pos + 1, height, cur, candidates);
        }
    }
    let mut candidates = Vec::new();
    rec(0, height, &mut cur, &mut candidates);
    candidates.sort_by_key(|c| (c.iter().map(|v| v.abs()).max().unwrap_or(0), c.clone()));
    for c in candidates {
        if c.iter().all(|&v| v == 0) {
            continue;
        }
        let first_nonzero = c.iter().find(|&&v| v != 0).copied().unwrap();
        if first_nonzero < 0 {
            continue;
        }
        let gcd = c.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if gcd != 1 {
            continue;
        }
        let pt: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
        let on_variety = g.evaluate(&pt, None).unwrap().is_zero();
        let singular = grads
            .iter()
            .all(|d| d.evaluate(&pt, None).unwrap().is_zero());
        if on_variety && singular {
            best = Some(pt);
            break;
        }
    }
    best
}

fn projective_points(p: u64, l: usize) -> u128 {
    (0..l).map(|i| point_count(p, l - 1 - i)).sum()
}

/// Certification of smoothness over the rationals for a homogeneous form:
/// exact for one and two variables, scan-based for three or more.
fn certify_smooth_over_q_tracked(
    g: &IntPolynomial,
    point_budget: u64,
    budget: &mut BudgetUsed,
) -> (Status, Option<Witness>, Vec<String>) {
    let l = g.num_vars();
    let mut cert = Vec::new();
    if g.is_zero() {
        cert.push("form is identically zero".into());
        return (Status::Refuted, None, cert);
    }
    let k = g.degree().unwrap();
    if l == 1 {
        cert.push("nonzero univariate form: empty projective singular locus".into());
        return (Status::Certified, None, cert);
    }
    if l == 2 {
        if k < 2 {
            cert.push("nonzero linear form is smooth".into());
            return (Status::Certified, None, cert);
        }
        let disc = discriminant_binary_form(g).unwrap();
        if disc.is_zero() {
            cert.push("binary discriminant vanishes: repeated projective root".into());
            let coeffs = crate::resultant::binary_form_coeffs(g, k).unwrap();
            let fp = crate::resultant::uni_derivative(&coeffs);
            let gcd = crate::resultant::uni_gcd(&coeffs, &fp);
            let factor = IntPolynomial::from_terms(
                2,
                gcd.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(
                    |(i, c)| {
                        (
                            MultiIndex::new(vec![
                                i as u32,
                                (gcd.len() - 1 - i) as u32,
                            ]),
                            c.clone(),
                        )
                    },
                ),
            );
            return (Status::Refuted, Some(Witness::RepeatedFactor(factor)), cert);
        }
        cert.push(format!("binary discriminant = {disc} != 0"));
        return (Status::Certified, None, cert);
    }
    if let Some(pt) = rational_singular_point(g, 2) {
        let coords: Vec<String> = pt.iter().map(|c| c.to_string()).collect();
        cert.push(format!(
            "rational singular point ({}) verified by exact evaluation",
            coords.join(":")
        ));
        return (
            Status::Refuted,
            Some(Witness::ProjectivePoint { p: None, coords: pt }),
            cert,
        );
    }
    for p in scan_primes(k) {
        match smooth_mod_p(g, p, point_budget) {
            Ok(SmoothScan::Smooth) => {
                budget.points_scanned += projective_points(p, l);
                cert.push(format!(
                    "smooth over F_{p} by exhaustive projective scan; p does not divide {k}"
                ));
                return (Status::Certified, Some(Witness::Prime(p)), cert);
            }
            Ok(SmoothScan::SingularPoint(_)) => {
                budget.points_scanned += projective_points(p, l);
                continue;
            }
            Err(_) => {
                budget
                    .limits_hit
                    .push(format!("projective scan budget at p = {p}"));
                cert.push(format!("scan budget exceeded at p = {p}"));
                break;
            }
        }
    }
    cert.push("no smoothness certificate found at scan primes".into());
    (Status::Unknown, None, cert)
}

/// Decides the Deligne property of `h`: exact via the binary discriminant
/// for two variables; for three or more, refuted by a verified rational
/// singular point of the top part, certified by a smooth projective scan at
/// a prime not dividing the degree.
pub fn deligne_certify(h: &IntPolynomial, point_budget: u64) -> ClassificationVerdict {
    let mut v = ClassificationVerdict::new(Property::Deligne, Status::Unknown);
    if h.is_zero() {
        v.status = Status::Refuted;
        v.certificate.push("zero polynomial has no degree".into());
        return v;
    }
    let k = h.degree().unwrap();
    if k == 0 {
        v.status = Status::Refuted;
        v.certificate.push("constant polynomials are not Deligne".into());
        return v;
    }
    let top = h.top_part();
    v.certificate
        .push(format!("top homogeneous part has degree {k}"));
    let (status, witness, mut cert) =
        certify_smooth_over_q_tracked(&top, point_budget, &mut v.budget_used);
    v.certificate.append(&mut cert);
    v.status = status;
    v.witness = witness;
    if v.status == Status::Refuted && h.num_vars() == 2 && v.witness.is_some() {
        v.certificate
            .push("rank of the top part is 1 (repeated factor)".into());
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankEstimate {
    Exact { rank: u32, heuristic: bool },
    Interval { lo: u32, hi: u32 },
}

impl RankEstimate {
    pub fn lower(&self) -> u32 {
        match self {
            RankEstimate::Exact { rank, .. } => *rank,
            RankEstimate::Interval { lo, .. } => *lo,
        }
    }
}

/// Rank of a homogeneous form: the codimension of the projective singular
/// locus, with the convention that an empty singular locus gives rank equal
/// to the variable count.
///
/// Exact for one and two variables. For three, the singular-locus dimension
/// is read off singular-point counts over the scan primes (bounded counts
/// mean dimension 0; counts growing like p mean dimension 1); this growth
/// classification is flagged as heuristic.
pub fn rank_estimate(g: &IntPolynomial, point_budget: u64) -> Result<RankEstimate> {
    if !g.is_homogeneous() || g.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let l = g.num_vars();
    let k = g.degree().unwrap();
    if l == 1 {
        return Ok(RankEstimate::Exact {
            rank: 1,
            heuristic: false,
        });
    }
    if l == 2 {
        if k < 2 {
            return Ok(RankEstimate::Exact {
                rank: 2,
                heuristic: false,
            });
        }
        let disc = discriminant_binary_form(g)?;
        let rank = if disc.is_zero() { 1 } else { 2 };
        return Ok(RankEstimate::Exact {
            rank,
            heuristic: false,
        });
    }
    // Count projective singular points over the scan primes. Singular
    // points at a sporadic few primes are bad reduction, not a singular
    // locus over the rationals, so emptiness is judged by the fraction of
    // primes with points together with the exact small-height search.
    let primes: Vec<u64> = scan_primes(k);
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for p in &primes {
        let count = projective_singular_count(g, *p, point_budget)?;
        counts.push((*p, count));
    }
    if counts.len() < 5 {
        return Ok(RankEstimate::Interval { lo: 1, hi: l as u32 });
    }
    let positive = counts.iter().filter(|&&(_, c)| c > 0).count();
    let nonempty =
        rational_singular_point(g, 2).is_some() || 3 * positive > counts.len();
    if l == 3 {
        if !nonempty {
            return Ok(RankEstimate::Exact {
                rank: 3,
                heuristic: true,
            });
        }
        let bounded_cap = (k as u64 - 1) * k as u64 * l as u64;
        let max_count = counts.iter().map(|&(_, c)| c).max().unwrap();
        if max_count <= bounded_cap {
            return Ok(RankEstimate::Exact {
                rank: 2,
                heuristic: true,
            });
        }
        // Least-squares slope of count vs p.
        let slope = least_squares_slope(
            &counts
                .iter()
                .map(|&(p, c)| (p as f64, c as f64))
                .collect::<Vec<_>>(),
        );
        if slope > 0.5 {
            return Ok(RankEstimate::Exact {
                rank: 1,
                heuristic: true,
            });
        }
        return Ok(RankEstimate::Exact {
            rank: 2,
            heuristic: true,
        });
    }
    // l >= 4: coarse interval from growth in log p.
    if !nonempty {
        return Ok(RankEstimate::Interval {
            lo: l as u32 - 1,
            hi: l as u32,
        });
    }
    let logfit = least_squares_slope(
        &counts
            .iter()
            .filter(|&&(_, c)| c > 0)
            .map(|&(p, c)| ((p as f64).ln(), (c as f64).ln()))
            .collect::<Vec<_>>(),
    );
    let dim = logfit.round().max(0.0) as u32; // estimated dimension of the singular locus
    let rank = (l as u32 - 1).saturating_sub(dim).max(1);
    Ok(RankEstimate::Interval {
        lo: rank.saturating_sub(1).max(1),
        hi: rank.min(l as u32),
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return 0.0;
    }
    (n * sxy - sx * sy) / denom
}

fn projective_singular_count(g: &IntPolynomial, p: u64, point_budget: u64) -> Result<u64> {
    if !g.is_homogeneous() || g.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let l = g.num_vars();
    let total: u128 = (0..l).map(|i| point_count(p, l - 1 - i)).sum();
    if total > point_budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "projective singular count",
            needed: total,
            limit: point_budget as u128,
        });
    }
    let gp = ScanPoly::new(g, p);
    let grad = ScanGradient::new(g, p);
    let mut count = 0u64;
    let mut point = vec![0u64; l];
    for pivot in 0..l {
        for slot in point.iter_mut().take(pivot) {
            *slot = 0;
        }
        point[pivot] = 1;
        let free = l - 1 - pivot;
        crate::scan::for_each_point(p, free, |tail| {
            let mut pt = point.clone();
            pt[pivot + 1..].copy_from_slice(tail);
            if gp.eval(&pt) == 0 && grad.vanishes_at(&pt) {
                count += 1;
            }
        });
    }
    Ok(count)
}

/// Deligne test for a reduction modulo p: the top nonvanishing part mod p
/// must have degree not divisible by p and be smooth mod p.
fn deligne_mod_p(h: &IntPolynomial, p: u64, point_budget: u64) -> Result<std::result::Result<(), DeligneFailure>> {
    let pb = BigInt::from(p);
    let reduced = h.reduce_mod(&pb);
    let Some(kp) = reduced.degree() else {
        return Ok(Err(DeligneFailure {
            d: 0,
            p,
            top_degree: 0,
            disc_zero_mod_p: false,
            singular_point: None,
            reason: "reduction is identically zero".into(),
        }));
    };
    if kp == 0 {
        return Ok(Err(DeligneFailure {
            d: 0,
            p,
            top_degree: 0,
            disc_zero_mod_p: false,
            singular_point: None,
            reason: "reduction is constant".into(),
        }));
    }
    let top = reduced.homogeneous_part(kp);
    if (kp as u64).is_multiple_of(p) {
        return Ok(Err(DeligneFailure {
            d: 0,
            p,
            top_degree: kp,
            disc_zero_mod_p: false,
            singular_point: None,
            reason: format!("characteristic {p} divides top degree {kp}"),
        }));
    }
    if h.num_vars() == 2 {
        if kp == 1 {
            return Ok(Ok(())); // nonzero linear forms are smooth
        }
        let disc = discriminant_binary_form(&top)?;
        if disc.mod_floor(&pb).is_zero() {
            return Ok(Err(DeligneFailure {
                d: 0,
                p,
                top_degree: kp,
                disc_zero_mod_p: true,
                singular_point: None,
                reason: format!("discriminant of degree-{kp} top part vanishes mod {p}"),
            }));
        }
        return Ok(Ok(()));
    }
    match smooth_mod_p(&top, p, point_budget)? {
        SmoothScan::Smooth => Ok(Ok(())),
        SmoothScan::SingularPoint(pt) => Ok(Err(DeligneFailure {
            d: 0,
            p,
            top_degree: kp,
            disc_zero_mod_p: false,
            singular_point: Some(pt),
            reason: format!("singular point of top part mod {p}"),
        })),
    }
}

/// Searches for a linear polynomial with integer coefficients of height at
/// most `height` dividing `h` (linear polynomials are geometrically
/// irreducible).
fn linear_factor(h: &IntPolynomial, height: i64) -> Option<IntPolynomial> {
    let l = h.num_vars();
    let mut coeffs = vec![0i64; l + 1]; // constant + per-variable
    let mut candidates = Vec::new();
    fn rec(pos: usize, height: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in -height..=height {
            cur[pos] = v;
            rec(pos + 1, height, cur, out);
        }
    }
    rec(0, height, &mut coeffs, &mut candidates);
    candidates.sort_by_key(|c| (c.iter().map(|v| v.abs()).max().unwrap_or(0), c.clone()));
    for cand in candidates {
        let (c0, vars) = cand.split_first().unwrap();
        if vars.iter().all(|&v| v == 0) {
            continue;
        }
        let first_nonzero = vars.iter().find(|&&v| v != 0).copied().unwrap();
        if first_nonzero < 0 {
            continue;
        }
        let g = cand.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if g != 1 {
            continue;
        }
        let mut lin = IntPolynomial::constant(l, *c0);
        for (i, &v) in vars.iter().enumerate() {
            if v != 0 {
                lin.add_term(MultiIndex::unit(l, i, 1), BigInt::from(v));
            }
        }
        if divides(&lin, h) {
            return Some(lin);
        }
    }
    None
}

/// Whether the linear polynomial `lin` divides `h` over the rationals,
/// via substitution of the cleared-denominator root hyperplane.
fn divides(lin: &IntPolynomial, h: &IntPolynomial) -> bool {
    // lin = c_v x_v + rest; h divisible by lin over Q iff substituting
    // x_v = -rest / c_v kills h, checked after clearing denominators.
    let l = h.num_vars();
    let var = (0..l).find(|&v| {
        !lin.coefficient(&MultiIndex::unit(l, v, 1)).is_zero()
    });
    let Some(v) = var else { return false };
    let cv = lin.coefficient(&MultiIndex::unit(l, v, 1));
    let mut rest = lin.clone();
    rest.add_term(MultiIndex::unit(l, v, 1), -cv.clone());
    let neg_rest = rest.neg();
    let dv = h
        .terms()
        .map(|(idx, _)| idx.exps()[v])
        .max()
        .unwrap_or(0);
    // S = c_v^{dv} * h with x_v replaced by (-rest)/c_v, cleared.
    let mut s = IntPolynomial::zero(l);
    for (idx, c) in h.terms() {
        let e = idx.exps()[v];
        let mut exps = idx.exps().to_vec();
        exps[v] = 0;
        let mono = IntPolynomial::from_terms(l, [(MultiIndex::new(exps), c.clone())]);
        let term = mono
            .mul(&neg_rest.pow(e))
            .scale(&cv.pow(dv - e));
        s = s.add(&term);
    }
    s.is_zero()
}

/// Evidence and verdict of the strongly Deligne scan.
#[derive(Debug, Clone)]
pub struct StronglyDeligneReport {
    pub verdict: ClassificationVerdict,
    pub failures: Vec<DeligneFailure>,
    /// Primes where no root with multiplicity 1 or k was found in the scan.
    pub awkward_primes: Vec<u64>,
}

/// Certification paths, in order: the integer-root criterion (smooth top
/// and bottom parts of a translate), degree 2 with Deligne and certified
/// intersectivity, three or more variables with Deligne and certified
/// intersectivity, and smoothly-intersective evidence backed by a
/// geometrically irreducible factor certificate. Otherwise runs the
/// empirical (d, p) scan over the auxiliary family and reports the exact
/// failure pairs.
pub fn strongly_deligne_scan(
    h: &IntPolynomial,
    sel: &RootSelection,
    d_bound: u64,
    prime_bound: u64,
    point_budget: u64,
) -> StronglyDeligneReport {
    let mut verdict = ClassificationVerdict::new(Property::StronglyDeligne, Status::Unknown);
    let mut failures: Vec<DeligneFailure> = Vec::new();
    let mut awkward: Vec<u64> = Vec::new();
    if h.is_zero() || h.degree() == Some(0) {
        verdict.status = Status::Refuted;
        verdict.certificate.push("degenerate polynomial".into());
        return StronglyDeligneReport {
            verdict,
            failures,
            awkward_primes: awkward,
        };
    }
    let k = h.degree().unwrap();

    // Path (a): integer root with smooth top and bottom parts.
    let mut int_roots: Vec<Vec<BigInt>> = Vec::new();
    if let RootRule::IntegerRoot(n) = sel.rule() {
        int_roots.push(n.clone());
    }
    for r in find_integer_roots(h, 4) {
        if !int_roots.contains(&r) {
            int_roots.push(r);
        }
    }
    for n in &int_roots {
        let translated = h
            .affine_substitute(&BigInt::from(1), n, None)
            .expect("translation");
        let top = translated.top_part();
        let bottom = translated.bottom_part();
        let (ts, _, tcert) =
            certify_smooth_over_q_tracked(&top, point_budget, &mut verdict.budget_used);
        let (bs, _, bcert) =
            certify_smooth_over_q_tracked(&bottom, point_budget, &mut verdict.budget_used);
        if ts == Status::Certified && bs == Status::Certified {
            let coords: Vec<String> = n.iter().map(|x| x.to_string()).collect();
            verdict.status = Status::Certified;
            verdict
                .certificate
                .push(format!("integer root ({})", coords.join(",")));
            verdict.certificate.push(format!(
                "highest-degree part (degree {k}) smooth: {}",
                tcert.join("; ")
            ));
            verdict.certificate.push(format!(
                "lowest-degree part (degree {}) smooth: {}",
                translated.lowest_degree().unwrap(),
                bcert.join("; ")
            ));
            verdict
                .certificate
                .push("integer-root criterion: strongly Deligne".into());
            return StronglyDeligneReport {
                verdict,
                failures,
                awkward_primes: awkward,
            };
        }
    }

    // Paths (b) and (c) need Deligne plus certified intersectivity.
    let deligne = deligne_certify(h, point_budget);
    let inter = intersectivity_scan(h, prime_bound.min(100), 2_000_000);
    let fully_intersective = matches!(
        inter,
        IntersectivityVerdict::CertifiedAllPrimes { .. }
    );
    if deligne.status == Status::Certified && fully_intersective {
        if k == 2 {
            verdict.status = Status::Certified;
            verdict
                .certificate
                .push("Deligne, intersective, and degree 2: strongly Deligne".into());
            return StronglyDeligneReport {
                verdict,
                failures,
                awkward_primes: awkward,
            };
        }
        if h.num_vars() >= 3 {
            verdict.status = Status::Certified;
            verdict.certificate.push(
                "Deligne and intersective in at least 3 variables: geometrically irreducible, hence smoothly intersective and strongly Deligne".into(),
            );
            return StronglyDeligneReport {
                verdict,
                failures,
                awkward_primes: awkward,
            };
        }
        // Path (d): geometrically irreducible rational factor certificate.
        if let Some(lin) = linear_factor(h, 2) {
            verdict.status = Status::Certified;
            verdict.certificate.push(format!(
                "linear factor {lin} is geometrically irreducible: smoothly intersective, hence strongly Deligne"
            ));
            return StronglyDeligneReport {
                verdict,
                failures,
                awkward_primes: awkward,
            };
        }
    }

    // Empirical scan: per-prime multiplicity evidence plus the (d, p)
    // family checks on the auxiliary polynomials.
    let primes = scan_primes(k)
        .into_iter()
        .filter(|&p| p <= prime_bound)
        .collect::<Vec<_>>();
    for &p in &primes {
        // Does any root mod p have m_p in {1, k}? Nonsingular affine point
        // scan per the mod-p equivalence lemma.
        if point_count(p, h.num_vars()) <= point_budget as u128 {
            verdict.budget_used.points_scanned += point_count(p, h.num_vars());
            let hp = ScanPoly::new(h, p);
            let grad = ScanGradient::new(h, p);
            let mut has_nonsingular = false;
            crate::scan::for_each_point(p, h.num_vars(), |pt| {
                if !has_nonsingular && hp.eval(pt) == 0 && !grad.vanishes_at(pt) {
                    has_nonsingular = true;
                }
            });
            if !has_nonsingular {
                // Minimal multiplicity k would also do (top part stays).
                let mult_ok = sel.multiplicity(p).map(|m| m == k).unwrap_or(false);
                if !mult_ok {
                    awkward.push(p);
                }
            }
        }
    }
    let mut d_values: Vec<u64> = (1..=d_bound.min(60)).collect();
    for &p in &primes {
        if p <= d_bound && !d_values.contains(&p) {
            d_values.push(p);
        }
    }
    d_values.sort_unstable();
    for &d in &d_values {
        let aux = match build_auxiliary(sel, d) {
            Ok(a) => a,
            Err(_) => continue, // missing root data for a prime divisor of d
        };
        for &p in &primes {
            if aux.poly.num_vars() >= 3 {
                verdict.budget_used.points_scanned +=
                    projective_points(p, aux.poly.num_vars());
            }
            match deligne_mod_p(&aux.poly, p, point_budget) {
                Ok(Ok(())) => {}
                Ok(Err(mut f)) => {
                    f.d = d;
                    failures.push(f);
                }
                Err(_) => {
                    verdict
                        .budget_used
                        .limits_hit
                        .push(format!("Deligne check budget at d = {d}, p = {p}"));
                }
            }
        }
    }
    if !failures.is_empty() {
        verdict.status = Status::Unknown;
        verdict.certificate.push(format!(
            "no certification criterion applied; scan found {} (d, p) Deligne failures in the auxiliary family",
            failures.len()
        ));
        if !awkward.is_empty() {
            verdict.certificate.push(format!(
                "primes with no nonsingular F_p point and multiplicity outside {{1, {k}}}: {awkward:?}"
            ));
        }
        verdict.witness = Some(Witness::FailureFamily(failures.clone()));
    } else {
        verdict.status = Status::Unknown;
        verdict.certificate.push(format!(
            "no certification criterion applied; no Deligne failures observed for d <= {} and scan primes <= {}",
            d_values.last().copied().unwrap_or(0),
            prime_bound
        ));
    }
    StronglyDeligneReport {
        verdict,
        failures,
        awkward_primes: awkward,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerMode {
    IntegerRoot,
    General,
}

#[derive(Debug, Clone)]
pub enum DimensionLowerOutcome {
    Reduced {
        poly: IntPolynomial,
        /// Integer matrix with `g = h(M x)` exactly.
        map: LinearMap,
        rank: u32,
    },
    RankTooLow {
        rank: u32,
    },
    Exhausted,
}

/// Constructive dimension lowering: searches integer hyperplanes
/// `x_l = a_1 x_1 + ... + a_{l-1} x_{l-1}` with coefficients up to
/// `coefficient_height`, ordered by max-norm then lex, accepting a
/// substitution when the degree pattern survives and the rank conditions
/// verify; iterates down to `r` variables. Every accepted output satisfies
/// `g = h(M x)` by construction.
pub fn dimension_lower(
    h: &IntPolynomial,
    mode: LowerMode,
    trial_budget: u64,
    coefficient_height: i64,
    point_budget: u64,
) -> Result<DimensionLowerOutcome> {
    if h.is_zero() {
        return Err(Error::InvalidParameter("zero polynomial".into()));
    }
    if mode == LowerMode::IntegerRoot && !h.constant_term().is_zero() {
        return Err(Error::InvalidParameter(
            "integer_root mode requires h(0) = 0".into(),
        ));
    }
    let k = h.degree().unwrap();
    let j = h.lowest_degree().unwrap();
    let rank_of = |g: &IntPolynomial| -> Result<u32> {
        Ok(rank_estimate(g, point_budget)?.lower())
    };
    let target_rank = match mode {
        LowerMode::IntegerRoot => {
            let rk = rank_of(&h.homogeneous_part(k))?;
            let rj = rank_of(&h.homogeneous_part(j))?;
            rk.min(rj)
        }
        LowerMode::General => rank_of(&h.homogeneous_part(k))?,
    };
    if target_rank < 2 {
        return Ok(DimensionLowerOutcome::RankTooLow { rank: target_rank });
    }
    let mut current = h.clone();
    let mut total_map = LinearMap::identity(h.num_vars());
    let mut trials: u64 = 0;
    while current.num_vars() as u32 > target_rank {
        let l = current.num_vars();
        let mut accepted: Option<(IntPolynomial, LinearMap)> = None;
        let mut coeffs = vec![0i64; l - 1];
        let mut candidates = Vec::new();
        fn rec(pos: usize, height: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for v in -height..=height {
                cur[pos] = v;
                rec(pos + 1, height, cur, out);
            }
        }
        rec(0, coefficient_height, &mut coeffs, &mut candidates);
        candidates.sort_by_key(|c| (c.iter().map(|v| v.abs()).max().unwrap_or(0), c.clone()));
        for cand in candidates {
            trials += 1;
            if trials > trial_budget {
                return Ok(DimensionLowerOutcome::Exhausted);
            }
            // Step map: identity on the first l-1 variables, last row = cand.
            let mut rows: Vec<Vec<i64>> = Vec::with_capacity(l);
            for i in 0..l - 1 {
                let mut row = vec![0i64; l - 1];
                row[i] = 1;
                rows.push(row);
            }
            rows.push(cand.clone());
            let step = LinearMap::from_rows(&rows).unwrap();
            let zero_shift = vec![BigInt::zero(); l];
            let g = current
                .affine_substitute(&BigInt::from(1), &zero_shift, Some(&step))
                .unwrap();
            if g.degree() != Some(k) {
                continue;
            }
            if mode == LowerMode::IntegerRoot && g.lowest_degree() != Some(j) {
                continue;
            }
            let ok_top = rank_of(&g.homogeneous_part(k)).map(|r| r >= target_rank) == Ok(true);
            let ok_bottom = match mode {
                LowerMode::IntegerRoot => {
                    rank_of(&g.homogeneous_part(j)).map(|r| r >= target_rank) == Ok(true)
                }
                LowerMode::General => true,
            };
            if ok_top && ok_bottom {
                accepted = Some((g, step));
                break;
            }
        }
        match accepted {
            Some((g, step)) => {
                total_map = total_map.compose(&step)?;
                current = g;
            }
            None => return Ok(DimensionLowerOutcome::Exhausted),
        }
    }
    Ok(DimensionLowerOutcome::Reduced {
        poly: current,
        map: total_map,
        rank: target_rank,
    })
}
