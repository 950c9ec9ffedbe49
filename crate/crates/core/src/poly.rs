//! Sparse bivariate polynomials over the reals.
//!
//! A [`Poly2`] maps exponent pairs `(i, j)` (the monomial `x^i y^j`) to
//! nonzero `f64` coefficients. Every arithmetic operation chops coefficients
//! whose magnitude is at most `eps * max(1, largest |coeff|)`; the default
//! `eps` is [`DEFAULT_CHOP`]. The `*_with_chop` variants take an explicit
//! tolerance.

use std::collections::BTreeMap;
use std::fmt;

/// Default relative chop tolerance.
pub const DEFAULT_CHOP: f64 = 1e-9;

/// Exponent pair `(i, j)` for the monomial `x^i y^j`.
pub type Exponent = (u32, u32);

/// A sparse polynomial in `x` and `y` with real coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly2 {
    terms: BTreeMap<Exponent, f64>,
}

/// The homogeneous part of a polynomial of a fixed total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPart {
    pub degree: u32,
    pub poly: Poly2,
}

/// A general substitution `x -> p, y -> q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionMap {
    pub p: Poly2,
    pub q: Poly2,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    /// `c * x^i * y^j`.
    pub fn monomial(c: f64, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(i, j, coeff)` triples, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, f64)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Exponent, f64> = BTreeMap::new();
        for (i, j, c) in iter {
            *terms.entry((i, j)).or_insert(0.0) += c;
        }
        Self { terms }.chop(DEFAULT_CHOP)
    }

    /// Adds `c * x^i * y^j` without chopping other coefficients.
    pub fn add_raw_term(mut self, i: u32, j: u32, c: f64) -> Self {
        let e = self.terms.entry((i, j)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(i, j));
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Degree in `y` alone, or `None` for the zero polynomial.
    pub fn degree_in_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, f64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops every coefficient with `|c| <= eps * max(1, max_abs)`.
    pub fn chop(mut self, eps: f64) -> Self {
        let cut = eps * self.max_abs().max(1.0);
        self.terms.retain(|_, c| c.abs() > cut);
        self
    }

    fn raw_add(&self, other: &Self, factor: f64) -> Self {
        let mut terms = self.terms.clone();
        for (&e, &c) in &other.terms {
            *terms.entry(e).or_insert(0.0) += factor * c;
        }
        terms.retain(|_, c| *c != 0.0);
        Self { terms }
    }

    fn raw_mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Exponent, f64> = BTreeMap::new();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &other.terms {
                *terms.entry((i1 + i2, j1 + j2)).or_insert(0.0) += c1 * c2;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.raw_add(other, 1.0).chop(DEFAULT_CHOP)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.raw_add(other, -1.0).chop(DEFAULT_CHOP)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.raw_mul(other).chop(DEFAULT_CHOP)
    }

    pub fn scale(&self, k: f64) -> Self {
        self.scale_with_chop(k, DEFAULT_CHOP)
    }

    pub fn scale_with_chop(&self, k: f64, eps: f64) -> Self {
        let terms = self.terms.iter().map(|(&e, &c)| (e, c * k)).collect();
        Self { terms }.chop(eps)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, n: u32) -> Self {
        self.pow_with_chop(n, DEFAULT_CHOP)
    }

    fn pow_with_chop(&self, mut n: u32, eps: f64) -> Self {
        let mut result = Self::constant(1.0);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.raw_mul(&base).chop(eps);
            }
            n >>= 1;
            if n > 0 {
                base = base.raw_mul(&base).chop(eps);
            }
        }
        result
    }

    /// Substitutes `x -> s.p`, `y -> s.q` and expands.
    pub fn compose(&self, s: &SubstitutionMap) -> Self {
        self.compose_with_chop(s, DEFAULT_CHOP)
    }

    pub fn compose_with_chop(&self, s: &SubstitutionMap, eps: f64) -> Self {
        let max_i = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        // Power tables are kept unchopped so that chopping happens once, on
        // the final sum.
        let p_pows = power_table(&s.p, max_i);
        let q_pows = power_table(&s.q, max_j);
        let mut out = Self::zero();
        for (&(i, j), &c) in &self.terms {
            let term = p_pows[i as usize].raw_mul(&q_pows[j as usize]);
            out = out.raw_add(&term, c);
        }
        out.chop(eps)
    }

    /// Sum of the terms of total degree `k`.
    pub fn homogeneous_component(&self, k: u32) -> HomogeneousPart {
        let terms = self
            .terms
            .iter()
            .filter(|(&(i, j), _)| i + j == k)
            .map(|(&e, &c)| (e, c))
            .collect();
        HomogeneousPart {
            degree: k,
            poly: Self { terms },
        }
    }

    /// Partial derivatives `(df/dx, df/dy)`.
    pub fn gradient(&self) -> (Self, Self) {
        (self.diff_x(), self.diff_y())
    }

    pub fn diff_x(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&(i, _), _)| i > 0)
            .map(|(&(i, j), &c)| ((i - 1, j), c * i as f64))
            .collect();
        Self { terms }
    }

    pub fn diff_y(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&(_, j), _)| j > 0)
            .map(|(&(i, j), &c)| ((i, j - 1), c * j as f64))
            .collect();
        Self { terms }
    }

    /// Evaluates at a real point, Horner-style in `y` then `x`.
    pub fn evaluate(&self, x0: f64, y0: f64) -> f64 {
        self.eval_generic(x0, y0, 0.0)
    }

    /// Evaluates at a complex point.
    pub fn evaluate_complex(
        &self,
        x0: num_complex::Complex64,
        y0: num_complex::Complex64,
    ) -> num_complex::Complex64 {
        self.eval_generic(x0, y0, num_complex::Complex64::new(0.0, 0.0))
    }

    fn eval_generic<T>(&self, x0: T, y0: T, zero: T) -> T
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<Output = T> + From<f64>,
    {
        let Some(max_i) = self.terms.keys().map(|e| e.0).max() else {
            return zero;
        };
        let mut acc = zero;
        for i in (0..=max_i).rev() {
            // Horner in y over the coefficients of x^i.
            let row: Vec<(u32, f64)> = self
                .terms
                .range((i, 0)..=(i, u32::MAX))
                .map(|(&(_, j), &c)| (j, c))
                .collect();
            let mut inner = zero;
            if let Some(&(max_j, _)) = row.last() {
                let mut k = row.len();
                for j in (0..=max_j).rev() {
                    let c = if k > 0 && row[k - 1].0 == j {
                        k -= 1;
                        row[k].1
                    } else {
                        0.0
                    };
                    inner = inner * y0 + T::from(c);
                }
            }
            acc = acc * x0 + inner;
        }
        acc
    }

    /// Max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.raw_add(other, -1.0).max_abs()
    }
}

fn power_table(base: &Poly2, n: u32) -> Vec<Poly2> {
    let mut table = Vec::with_capacity(n as usize + 1);
    table.push(Poly2::constant(1.0));
    for k in 1..=n as usize {
        let next = table[k - 1].raw_mul(base);
        table.push(next);
    }
    table
}

impl SubstitutionMap {
    pub fn new(p: Poly2, q: Poly2) -> Self {
        Self { p, q }
    }

    pub fn identity() -> Self {
        Self::new(Poly2::x(), Poly2::y())
    }

    /// `outer ∘ inner`: substitutes `outer` into the components of `inner`,
    /// so that `f.compose(&then(inner, outer)) == f.compose(inner).compose(outer)`.
    pub fn then(inner: &Self, outer: &Self) -> Self {
        Self::new(inner.p.compose(outer), inner.q.compose(outer))
    }
}

impl fmt::Display for SubstitutionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.p, self.q)
    }
}

/// Graded lexicographic display order: total degree descending, then the
/// power of `x` descending.
fn display_order(terms: &BTreeMap<Exponent, f64>) -> Vec<(Exponent, f64)> {
    let mut v: Vec<_> = terms.iter().map(|(&e, &c)| (e, c)).collect();
    v.sort_by(|a, b| {
        let da = a.0 .0 + a.0 .1;
        let db = b.0 .0 + b.0 .1;
        db.cmp(&da).then(b.0 .0.cmp(&a.0 .0))
    });
    v
}

fn monomial_text(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    parts.join("*")
}

impl fmt::Display for Poly2 {
    /// Prints in a form accepted by the parser. Coefficients use the shortest
    /// round-trip decimal representation, so parsing the output reproduces
    /// the polynomial exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, j), c)) in display_order(&self.terms).into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = monomial_text(i, j);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}
