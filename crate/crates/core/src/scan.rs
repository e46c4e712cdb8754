//! Fast exhaustive-scan helpers over `(Z/m)^l` with `u64` arithmetic.
//!
//! These back the per-prime scans (root finding, smoothness, gradient
//! counts, sieve membership). Moduli here always fit in `u64`; anything
//! needing unbounded precision stays on `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::IntPolynomial;

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut base: u64, mut e: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Iterates all points of `{0,..,m-1}^nvars` in ascending lexicographic
/// order (first coordinate most significant).
pub fn for_each_point(m: u64, nvars: usize, mut f: impl FnMut(&[u64])) {
    let mut coords = vec![0u64; nvars];
    loop {
        f(&coords);
        let mut i = nvars;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < m {
                break;
            }
            coords[i] = 0;
        }
    }
}

/// Number of points `m^nvars` as u128 for budget checks.
pub fn point_count(m: u64, nvars: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..nvars {
        acc = acc.saturating_mul(m as u128);
    }
    acc
}

/// Polynomial with coefficients reduced mod `m <= u64::MAX`, for scan loops.
pub struct ScanPoly {
    nvars: usize,
    m: u64,
    terms: Vec<(Vec<u32>, u64)>,
    max_exp: u32,
    // pow_table[x * (max_exp+1) + e] = x^e mod m, built when small enough
    pow_table: Option<Vec<u64>>,
}

const POW_TABLE_LIMIT: u128 = 1 << 24;

impl ScanPoly {
    pub fn new(p: &IntPolynomial, m: u64) -> Self {
        let mb = BigInt::from(m);
        let mut terms = Vec::new();
        let mut max_exp = 0u32;
        for (idx, c) in p.terms() {
            let r = c.mod_floor(&mb).to_u64().unwrap();
            if r != 0 {
                max_exp = max_exp.max(idx.exps().iter().copied().max().unwrap_or(0));
                terms.push((idx.exps().to_vec(), r));
            }
        }
        let pow_table = if (m as u128) * (max_exp as u128 + 1) <= POW_TABLE_LIMIT {
            let w = max_exp as usize + 1;
            let mut t = vec![0u64; m as usize * w];
            for x in 0..m {
                t[x as usize * w] = 1 % m;
                for e in 1..w {
                    t[x as usize * w + e] = mulmod(t[x as usize * w + e - 1], x, m);
                }
            }
            Some(t)
        } else {
            None
        };
        ScanPoly {
            nvars: p.num_vars(),
            m,
            terms,
            max_exp,
            pow_table,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    /// True when every coefficient reduced to zero.
    pub fn is_zero_poly(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn eval(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc: u64 = 0;
        match &self.pow_table {
            Some(t) => {
                let w = self.max_exp as usize + 1;
                for (exps, c) in &self.terms {
                    let mut v = *c;
                    for (i, &e) in exps.iter().enumerate() {
                        if e > 0 {
                            v = mulmod(v, t[point[i] as usize * w + e as usize], self.m);
                        }
                    }
                    acc = (acc + v) % self.m;
                }
            }
            None => {
                for (exps, c) in &self.terms {
                    let mut v = *c;
                    for (i, &e) in exps.iter().enumerate() {
                        if e > 0 {
                            v = mulmod(v, powmod(point[i], e, self.m), self.m);
                        }
                    }
                    acc = (acc + v) % self.m;
                }
            }
        }
        acc
    }
}

/// Gradient of `p` prepared for scanning mod `m`.
pub struct ScanGradient {
    parts: Vec<ScanPoly>,
}

impl ScanGradient {
    pub fn new(p: &IntPolynomial, m: u64) -> Self {
        ScanGradient {
            parts: p.gradient().iter().map(|d| ScanPoly::new(d, m)).collect(),
        }
    }

    /// True iff every partial vanishes at the point.
    #[inline]
    pub fn vanishes_at(&self, point: &[u64]) -> bool {
        self.parts.iter().all(|g| g.eval(point) == 0)
    }
}

/// Exact `i128` evaluator for box sums where values stay well inside `i128`.
pub struct I128Poly {
    nvars: usize,
    terms: Vec<(Vec<u32>, i128)>,
}

impl I128Poly {
    /// Fails (returns None) if a coefficient does not fit in `i128`.
    pub fn new(p: &IntPolynomial) -> Option<Self> {
        let mut terms = Vec::new();
        for (idx, c) in p.terms() {
            terms.push((idx.exps().to_vec(), c.to_i128()?));
        }
        Some(I128Poly {
            nvars: p.num_vars(),
            terms,
        })
    }

    #[inline]
    pub fn eval(&self, point: &[i128]) -> i128 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc: i128 = 0;
        for (exps, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    v *= point[i];
                }
            }
            acc += v;
        }
        acc
    }
}
