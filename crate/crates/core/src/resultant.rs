//! Sylvester resultants, binary-form discriminants, and exact univariate gcd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Dense univariate polynomial, coefficients ascending by degree.
pub type UniPoly = Vec<BigInt>;

pub fn uni_trim(p: &mut UniPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn uni_degree(p: &UniPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn uni_derivative(p: &UniPoly) -> UniPoly {
    let mut out: UniPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    uni_trim(&mut out);
    out
}

fn uni_content(p: &UniPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

fn uni_primitive(mut p: UniPoly) -> UniPoly {
    uni_trim(&mut p);
    let c = uni_content(&p);
    if c.is_zero() || c.is_one() {
        return p;
    }
    for a in &mut p {
        *a = &*a / &c;
    }
    p
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero).
fn uni_prem(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let db = uni_degree(b).expect("pseudo-remainder by zero");
    let mut r = a.clone();
    uni_trim(&mut r);
    let lb = b[db].clone();
    while let Some(dr) = uni_degree(&r) {
        if dr < db {
            break;
        }
        let lead = r[dr].clone();
        // r := lb * r - lead * x^{dr-db} * b
        for c in &mut r {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] -= &lead * bc;
        }
        uni_trim(&mut r);
    }
    r
}

/// Primitive gcd of two integer polynomials (positive leading coefficient;
/// constant 1 when coprime).
pub fn uni_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = uni_primitive(a.clone());
    let mut b = uni_primitive(b.clone());
    if a.is_empty() {
        return normalize_sign(b);
    }
    if b.is_empty() {
        return normalize_sign(a);
    }
    if uni_degree(&a) < uni_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = uni_primitive(uni_prem(&a, &b));
        a = b;
        b = r;
    }
    normalize_sign(a)
}

fn normalize_sign(mut p: UniPoly) -> UniPoly {
    if let Some(d) = uni_degree(&p) {
        if p[d].is_negative() {
            for c in &mut p {
                *c = -c.clone();
            }
        }
    }
    p
}

/// Exact integer determinant by fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match pivot {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Resultant with declared degrees (leading coefficients may be zero only
/// when the declared degree exceeds the actual one, as for binary forms).
pub fn sylvester_resultant(f: &UniPoly, deg_f: usize, g: &UniPoly, deg_g: usize) -> BigInt {
    if deg_f == 0 && deg_g == 0 {
        return BigInt::one();
    }
    let n = deg_f + deg_g;
    let coeff = |p: &UniPoly, i: usize| -> BigInt { p.get(i).cloned().unwrap_or_else(BigInt::zero) };
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..deg_g {
        for (j, col) in (0..=deg_f).rev().enumerate() {
            m[r][r + j] = coeff(f, col);
        }
    }
    for r in 0..deg_f {
        for (j, col) in (0..=deg_g).rev().enumerate() {
            m[deg_g + r][r + j] = coeff(g, col);
        }
    }
    bareiss_determinant(m)
}

/// Resultant of two univariate integer polynomials at their actual degrees.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> BigInt {
    let df = uni_degree(f);
    let dg = uni_degree(g);
    match (df, dg) {
        (Some(df), Some(dg)) => sylvester_resultant(f, df, g, dg),
        _ => BigInt::zero(),
    }
}

/// Coefficient vector of a binary form: entry `i` is the coefficient of
/// `x^i y^{k-i}`.
pub fn binary_form_coeffs(g: &IntPolynomial, k: u32) -> Result<UniPoly> {
    if g.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    let mut v = vec![BigInt::zero(); k as usize + 1];
    for (idx, c) in g.terms() {
        let e = idx.exps();
        if e[0] + e[1] != k {
            return Err(Error::NotHomogeneous);
        }
        v[e[0] as usize] = c.clone();
    }
    Ok(v)
}

/// Discriminant of a homogeneous bivariate form of degree `k >= 2` with the
/// classical normalization: zero exactly when the form has a repeated
/// projective root over the algebraic closure.
///
/// Primary route: dehomogenize at `y = 1` (swapping variables if the `x^k`
/// coefficient vanishes) and take `(-1)^{k(k-1)/2} Res(f, f') / lc(f)`.
/// When both end coefficients vanish (the form is divisible by `x*y`), the
/// discriminant is computed from the resultant of the two partials:
/// `(-1)^{k(k-1)/2} Res(g_x, g_y) / k^{k-2}`.
pub fn discriminant_binary_form(g: &IntPolynomial) -> Result<BigInt> {
    if g.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    if !g.is_homogeneous() || g.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let k = g.degree().unwrap();
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "binary discriminant needs degree >= 2, got {k}"
        )));
    }
    let coeffs = binary_form_coeffs(g, k)?;
    let sign = if (k as u64 * (k as u64 - 1) / 2).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let from_dehom = |f: UniPoly| -> BigInt {
        let df = uni_degree(&f).unwrap();
        let lead = f[df].clone();
        let fp = uni_derivative(&f);
        let res = match uni_degree(&fp) {
            Some(dfp) => sylvester_resultant(&f, df, &fp, dfp),
            None => BigInt::zero(),
        };
        &sign * res / lead
    };
    if !coeffs[k as usize].is_zero() {
        Ok(from_dehom(coeffs))
    } else if !coeffs[0].is_zero() {
        let mut rev = coeffs;
        rev.reverse();
        Ok(from_dehom(rev))
    } else {
        // Divisible by x*y: use the defining resultant of the partials.
        let gx = binary_form_coeffs(&g.partial_derivative(0), k - 1)?;
        let gy = binary_form_coeffs(&g.partial_derivative(1), k - 1)?;
        let res = sylvester_resultant(&gx, k as usize - 1, &gy, k as usize - 1);
        let mut kpow = BigInt::one();
        for _ in 0..k.saturating_sub(2) {
            kpow *= BigInt::from(k);
        }
        let (q, r) = (&sign * res).div_rem(&kpow);
        debug_assert!(r.is_zero(), "partials-resultant identity must divide");
        Ok(q)
    }
}
