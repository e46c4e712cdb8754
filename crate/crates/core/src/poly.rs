//! Exact sparse multivariate polynomial arithmetic over the integers.
//!
//! Coefficients are arbitrary-precision integers throughout; terms are kept
//! in a canonical graded-lexicographic order and zero coefficients are never
//! stored. The zero polynomial has degree `None`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent tuple of a monomial, one entry per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex { exps }
    }

    pub fn zero(num_vars: usize) -> Self {
        MultiIndex {
            exps: vec![0; num_vars],
        }
    }

    /// Index with a single entry `e` in position `var`.
    pub fn unit(num_vars: usize, var: usize, e: u32) -> Self {
        let mut exps = vec![0; num_vars];
        exps[var] = e;
        MultiIndex { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree `|i|`.
    pub fn total(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `i!` as a big integer.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.exps {
            for t in 2..=e as u64 {
                acc *= t;
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Integer matrix mapping new variables to old ones: column `j` is the image
/// of the `j`-th new variable in the old coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl LinearMap {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(LinearMap {
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        LinearMap {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        LinearMap::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    /// Matrix product `self * rhs`.
    pub fn compose(&self, rhs: &LinearMap) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut entries = vec![BigInt::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    acc += self.entry(i, t) * rhs.entry(t, j);
                }
                entries[i * rhs.cols + j] = acc;
            }
        }
        LinearMap::new(self.rows, rhs.cols, entries)
    }

    /// Apply to an integer vector of length `cols`.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *slot += self.entry(i, j) * vj;
            }
        }
        Ok(out)
    }
}

/// Sparse multivariate polynomial with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, BigInt>,
}

impl IntPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        assert!(num_vars >= 1, "ambient variable count must be at least 1");
        IntPolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = IntPolynomial::zero(num_vars);
        p.add_term(MultiIndex::zero(num_vars), c.into());
        p
    }

    pub fn variable(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars);
        let mut p = IntPolynomial::zero(num_vars);
        p.add_term(MultiIndex::unit(num_vars, var, 1), BigInt::one());
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, BigInt)>,
    {
        let mut p = IntPolynomial::zero(num_vars);
        for (idx, c) in terms {
            p.add_term(idx, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> BigInt {
        self.terms.get(idx).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&MultiIndex::zero(self.num_vars))
    }

    /// Total degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<u32> {
        // Graded-lex order puts a maximal-degree term last.
        self.terms.keys().next_back().map(|i| i.total())
    }

    /// Lowest total degree among the nonzero terms.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|i| i.total())
    }

    pub fn leading_term(&self) -> Option<(&MultiIndex, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Adds `c * x^idx`, dropping the term if the result cancels.
    pub fn add_term(&mut self, idx: MultiIndex, c: BigInt) {
        assert_eq!(idx.len(), self.num_vars, "multi-index arity mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (idx, c) in rhs.terms() {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (idx, c) in rhs.terms() {
            out.add_term(idx.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, c) in self.terms() {
            out.terms.insert(idx.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = IntPolynomial::zero(self.num_vars);
        for (ia, ca) in self.terms() {
            for (ib, cb) in rhs.terms() {
                let exps: Vec<u32> = ia
                    .exps()
                    .iter()
                    .zip(ib.exps())
                    .map(|(a, b)| a + b)
                    .collect();
                out.add_term(MultiIndex::new(exps), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPolynomial::zero(self.num_vars);
        }
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, a) in self.terms() {
            out.terms.insert(idx.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPolynomial::constant(self.num_vars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at an integer point; with `modulus`, the value reduced
    /// into `[0, m)`.
    pub fn evaluate(&self, point: &[BigInt], modulus: Option<&BigInt>) -> Result<BigInt> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let max_exp: Vec<u32> = (0..self.num_vars)
            .map(|v| self.terms.keys().map(|i| i.exps()[v]).max().unwrap_or(0))
            .collect();
        // Power tables per variable up to the largest needed exponent.
        let mut pows: Vec<Vec<BigInt>> = Vec::with_capacity(self.num_vars);
        for v in 0..self.num_vars {
            let mut col = Vec::with_capacity(max_exp[v] as usize + 1);
            col.push(BigInt::one());
            for e in 1..=max_exp[v] as usize {
                let mut next = &col[e - 1] * &point[v];
                if let Some(m) = modulus {
                    next = next.mod_floor(m);
                }
                col.push(next);
            }
            pows.push(col);
        }
        let mut acc = BigInt::zero();
        for (idx, c) in self.terms() {
            let mut t = c.clone();
            for (v, &e) in idx.exps().iter().enumerate() {
                if e > 0 {
                    t *= &pows[v][e as usize];
                }
            }
            acc += t;
            if let Some(m) = modulus {
                acc = acc.mod_floor(m);
            }
        }
        if let Some(m) = modulus {
            acc = acc.mod_floor(m);
        }
        Ok(acc)
    }

    /// The degree-`i` homogeneous part (possibly zero).
    pub fn homogeneous_part(&self, i: u32) -> Self {
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, c) in self.terms() {
            if idx.total() == i {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// Highest-degree homogeneous part; zero polynomial for zero input.
    pub fn top_part(&self) -> Self {
        match self.degree() {
            Some(k) => self.homogeneous_part(k),
            None => IntPolynomial::zero(self.num_vars),
        }
    }

    /// Lowest-degree homogeneous part among nonzero terms.
    pub fn bottom_part(&self) -> Self {
        match self.lowest_degree() {
            Some(j) => self.homogeneous_part(j),
            None => IntPolynomial::zero(self.num_vars),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.degree(), self.lowest_degree()) {
            (Some(k), Some(j)) => k == j,
            _ => true,
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.num_vars);
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, c) in self.terms() {
            let e = idx.exps()[var];
            if e > 0 {
                let mut exps = idx.exps().to_vec();
                exps[var] = e - 1;
                out.add_term(MultiIndex::new(exps), c * BigInt::from(e));
            }
        }
        out
    }

    /// Formal gradient, one polynomial per variable.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars)
            .map(|v| self.partial_derivative(v))
            .collect()
    }

    /// Iterated partial derivative `∂^i`.
    pub fn partial(&self, idx: &MultiIndex) -> Self {
        assert_eq!(idx.len(), self.num_vars);
        let mut out = self.clone();
        for (v, &e) in idx.exps().iter().enumerate() {
            for _ in 0..e {
                out = out.partial_derivative(v);
            }
        }
        out
    }

    /// `p(r + d * M * x)` expanded exactly. With `d = 1`, `r = 0`, and the
    /// identity map this is the input.
    pub fn affine_substitute(
        &self,
        scale: &BigInt,
        shift: &[BigInt],
        linear_map: Option<&LinearMap>,
    ) -> Result<Self> {
        if shift.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: shift.len(),
            });
        }
        let new_vars = match linear_map {
            Some(m) => {
                if m.rows() != self.num_vars {
                    return Err(Error::DimensionMismatch {
                        expected: self.num_vars,
                        got: m.rows(),
                    });
                }
                m.cols()
            }
            None => self.num_vars,
        };
        // Image of each old variable as a polynomial in the new variables.
        let mut images: Vec<IntPolynomial> = Vec::with_capacity(self.num_vars);
        for (i, shift_i) in shift.iter().enumerate() {
            let mut img = IntPolynomial::constant(new_vars, shift_i.clone());
            for j in 0..new_vars {
                let coef = match linear_map {
                    Some(m) => m.entry(i, j) * scale,
                    None => {
                        if i == j {
                            scale.clone()
                        } else {
                            BigInt::zero()
                        }
                    }
                };
                if !coef.is_zero() {
                    img.add_term(MultiIndex::unit(new_vars, j, 1), coef);
                }
            }
            images.push(img);
        }
        // Memoized powers of each image.
        let max_exp: Vec<u32> = (0..self.num_vars)
            .map(|v| self.terms.keys().map(|i| i.exps()[v]).max().unwrap_or(0))
            .collect();
        let mut img_pows: Vec<Vec<IntPolynomial>> = Vec::with_capacity(self.num_vars);
        for (v, img) in images.iter().enumerate() {
            let mut col = vec![IntPolynomial::constant(new_vars, 1)];
            for e in 1..=max_exp[v] as usize {
                let next = col[e - 1].mul(img);
                col.push(next);
            }
            img_pows.push(col);
        }
        let mut out = IntPolynomial::zero(new_vars);
        for (idx, c) in self.terms() {
            let mut t = IntPolynomial::constant(new_vars, c.clone());
            for (v, &e) in idx.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&img_pows[v][e as usize]);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// gcd of the non-constant coefficients, excluding the constant term;
    /// 0 when no non-constant terms exist.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (idx, c) in self.terms() {
            if idx.total() > 0 {
                g = g.gcd(c);
            }
        }
        g
    }

    /// gcd of all coefficients including the constant term.
    pub fn full_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in self.terms() {
            g = g.gcd(c);
        }
        g
    }

    /// Divides every coefficient by `n`, failing on the first non-divisible
    /// coefficient.
    pub fn exact_divide(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, c) in self.terms() {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::NonIntegralQuotient { index: idx.clone() });
            }
            out.terms.insert(idx.clone(), q);
        }
        Ok(out)
    }

    /// Sum of the absolute values of all coefficients (the quantity `J`).
    pub fn coeff_abs_sum(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Largest coefficient magnitude.
    pub fn coeff_abs_max(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Reduction modulo `m`, coefficients in `[0, m)`. Keeps the ambient
    /// variable count.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        let mut out = IntPolynomial::zero(self.num_vars);
        for (idx, c) in self.terms() {
            out.add_term(idx.clone(), c.mod_floor(m));
        }
        out
    }

    /// Extends or reinterprets the polynomial in an ambient space with
    /// `new_vars >= num_vars` variables (extra variables unused).
    pub fn extend_vars(&self, new_vars: usize) -> Self {
        assert!(new_vars >= self.num_vars);
        let mut out = IntPolynomial::zero(new_vars);
        for (idx, c) in self.terms() {
            let mut exps = idx.exps().to_vec();
            exps.resize(new_vars, 0);
            out.terms.insert(MultiIndex::new(exps), c.clone());
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.num_vars)
            .map(|v| match (self.num_vars, v) {
                (n, 0) if n <= 3 => "x".to_string(),
                (n, 1) if n <= 3 => "y".to_string(),
                (n, 2) if n <= 3 => "z".to_string(),
                (_, v) => format!("x{}", v + 1),
            })
            .collect();
        let mut first = true;
        // Leading term first.
        for (idx, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut printed = false;
            if !mag.is_one() || idx.total() == 0 {
                write!(f, "{mag}")?;
                printed = true;
            }
            for (v, &e) in idx.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", names[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

/// Polynomial with coefficients reduced into `[0, m)` for a modulus `m >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPolynomial {
    base: IntPolynomial,
    modulus: BigInt,
}

impl ModPolynomial {
    pub fn reduce(p: &IntPolynomial, m: &BigInt) -> Result<Self> {
        if m < &BigInt::from(2) {
            return Err(Error::InvalidParameter(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        Ok(ModPolynomial {
            base: p.reduce_mod(m),
            modulus: m.clone(),
        })
    }

    pub fn base(&self) -> &IntPolynomial {
        &self.base
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Degree of the reduction (top nonvanishing part mod m).
    pub fn degree(&self) -> Option<u32> {
        self.base.degree()
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        self.base.evaluate(point, Some(&self.modulus))
    }
}
