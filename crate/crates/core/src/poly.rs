//! Sparse multivariate polynomials over `ℤ` in the variables `ε_1, ..., ε_N`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration
//! (and therefore the text format) is lexicographic in the exponents. No
//! stored coefficient is ever zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::symgroup::{Root, Word};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Box<[u16]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1);
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars].into_boxed_slice(), c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `ε_i`, one-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, 1, &[(i, 1)])
    }

    /// `coeff · ∏ ε_i^{e}` for the listed `(i, e)` pairs (one-based `i`).
    pub fn monomial(nvars: usize, coeff: impl Into<BigInt>, powers: &[(usize, u16)]) -> Self {
        let mut exps = vec![0u16; nvars];
        for &(i, e) in powers {
            assert!(
                i >= 1 && i <= nvars,
                "variable ε_{i} out of range 1..={nvars}"
            );
            exps[i - 1] += e;
        }
        let mut p = Self::zero(nvars);
        p.add_term(exps.into_boxed_slice(), coeff.into());
        p
    }

    /// The linear form `ε_i - ε_j` of a root.
    pub fn from_root(nvars: usize, root: Root) -> Self {
        Self::var(nvars, root.i()) - Self::var(nvars, root.j())
    }

    /// Builds a polynomial from raw `(exponents, coefficient)` pairs.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            p.add_term(exps.into_boxed_slice(), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigInt)> {
        self.terms.iter().map(|(e, c)| (&e[..], c))
    }

    /// Total polynomial degree `|α|` of the top monomial. Under the grading
    /// `deg ε_i = 2` the cohomological degree is twice this.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| total_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The value of a degree-0 polynomial.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials live in rings with different numbers of variables"
        );
    }

    /// `w · f`, substituting `ε_i ↦ ε_{w(i)}`.
    pub fn act(&self, w: &Permutation) -> Result<Self> {
        if w.degree() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: w.degree(),
            });
        }
        let raw = w.raw();
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u16; self.nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[raw[i] as usize] = x;
            }
            out.terms.insert(ne.into_boxed_slice(), c.clone());
        }
        Ok(out)
    }

    /// `s_i · f`, swapping `ε_i` and `ε_{i+1}`.
    pub fn swap_vars(&self, i: usize) -> Self {
        self.transpose_vars(i, i + 1)
    }

    /// Exchanges the variables `ε_i` and `ε_j`.
    pub fn transpose_vars(&self, i: usize, j: usize) -> Self {
        assert!(i >= 1 && i <= self.nvars && j >= 1 && j <= self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne.swap(i - 1, j - 1);
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Exact quotient by the linear form `ε_i - ε_j`.
    ///
    /// Treats `self` as a polynomial in `x = ε_i` whose coefficients live in
    /// the remaining variables and runs synthetic division by `x - ε_j`. A
    /// non-zero remainder is reported as [`Error::NotDivisible`].
    pub fn div_exact_linear(&self, i: usize, j: usize) -> Result<Self> {
        assert!(i != j && i >= 1 && i <= self.nvars && j >= 1 && j <= self.nvars);
        let (xi, yj) = (i - 1, j - 1);
        // coefficient of x^d, as a map from the remaining exponent vectors
        let mut by_deg: BTreeMap<u16, BTreeMap<Exponents, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[xi];
            let mut rest = e.clone();
            rest[xi] = 0;
            by_deg.entry(d).or_default().insert(rest, c.clone());
        }
        let Some(&top) = by_deg.keys().next_back() else {
            return Ok(Self::zero(self.nvars));
        };
        let mut quotient = Self::zero(self.nvars);
        // q_{d-1} = c_d, q_{k-1} = c_k + y q_k; remainder c_0 + y q_0
        let mut carry: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for d in (0..=top).rev() {
            let mut cur = by_deg.remove(&d).unwrap_or_default();
            for (mut e, c) in std::mem::take(&mut carry) {
                e[yj] += 1;
                add_into(&mut cur, e, c);
            }
            if d == 0 {
                if !cur.is_empty() {
                    return Err(Error::NotDivisible {
                        dividend: self.to_string(),
                        divisor: format!("e{i} - e{j}"),
                    });
                }
                break;
            }
            for (e, c) in &cur {
                let mut qe = e.clone();
                qe[xi] = d - 1;
                quotient.add_term(qe, c.clone());
            }
            carry = cur;
        }
        Ok(quotient)
    }

    /// Exact quotient by the linear form of a root.
    pub fn div_exact_root(&self, root: Root) -> Result<Self> {
        self.div_exact_linear(root.i(), root.j())
    }

    /// The divided difference `∂_i f = (f - s_i f) / (ε_i - ε_{i+1})`.
    ///
    /// # Panics
    ///
    /// If `i` is out of range, or if the synthetic division leaves a
    /// remainder (which would mean the arithmetic itself is broken).
    pub fn divided_difference(&self, i: usize) -> Self {
        assert!(
            i >= 1 && i < self.nvars,
            "∂_{i} is undefined on {} variables",
            self.nvars
        );
        let numer = self - &self.swap_vars(i);
        numer
            .div_exact_linear(i, i + 1)
            .expect("f - s_i f must be divisible by ε_i - ε_{i+1}")
    }

    /// `∂_{i_1} ∘ ... ∘ ∂_{i_m}` applied to `self`; the last letter acts first.
    pub fn divided_difference_word(&self, word: &Word) -> Result<Self> {
        if word.ambient() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: word.ambient(),
            });
        }
        let mut f = self.clone();
        for &i in word.letters().iter().rev() {
            if f.is_zero() {
                break;
            }
            f = f.divided_difference(i);
        }
        Ok(f)
    }

    /// Sets every variable `ε_i` with `pred(i)` true to zero.
    pub fn specialize_to_zero(&self, pred: impl Fn(usize) -> bool) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let killed = e.iter().enumerate().any(|(k, &x)| x > 0 && pred(k + 1));
            if !killed {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    /// Embeds into a ring with more variables, keeping indices.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = e.to_vec();
            ne.resize(nvars, 0);
            out.terms.insert(ne.into_boxed_slice(), c.clone());
        }
        out
    }
}

fn total_degree(e: &[u16]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

fn add_into(map: &mut BTreeMap<Exponents, BigInt>, e: Exponents, c: BigInt) {
    match map.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    // exponent vectors add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_ring(rhs);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// `c*e1^a1*...*eN^aN` terms joined by ` + ` / ` - `, in canonical order.
/// Zero exponents are written out so every term names all `N` variables.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c.abs())?;
            for (i, x) in e.iter().enumerate() {
                write!(f, "*e{}^{}", i + 1, x)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

/// Parses the text format produced by `Display`. Variables not mentioned in
/// a term get exponent zero; `nvars` must be given since `0` carries none.
pub fn parse_polynomial(nvars: usize, s: &str) -> Result<Polynomial> {
    let bad = |why: &str| Error::Parse(format!("polynomial {s:?}: {why}"));
    let s = s.trim();
    if s == "0" {
        return Ok(Polynomial::zero(nvars));
    }
    let mut out = Polynomial::zero(nvars);
    let mut rest = s;
    let mut sign = BigInt::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r;
    }
    loop {
        let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
            (None, None) => (rest, None),
            (Some(p), None) => (&rest[..p], Some((p, 1))),
            (None, Some(m)) => (&rest[..m], Some((m, -1))),
            (Some(p), Some(m)) if p < m => (&rest[..p], Some((p, 1))),
            (_, Some(m)) => (&rest[..m], Some((m, -1))),
        };
        let mut factors = term.split('*');
        let coeff: BigInt = factors
            .next()
            .ok_or_else(|| bad("empty term"))?
            .trim()
            .parse()
            .map_err(|_| bad("bad coefficient"))?;
        let mut exps = vec![0u16; nvars];
        for fac in factors {
            let fac = fac.trim();
            let body = fac
                .strip_prefix('e')
                .ok_or_else(|| bad("expected e<i>^<k>"))?;
            let (idx, pow) = body.split_once('^').unwrap_or((body, "1"));
            let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
            let pow: u16 = pow.parse().map_err(|_| bad("bad exponent"))?;
            if idx == 0 || idx > nvars {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    max: nvars,
                });
            }
            exps[idx - 1] += pow;
        }
        out.add_term(exps.into_boxed_slice(), &sign * coeff);
        match next {
            None => break,
            Some((pos, sg)) => {
                sign = BigInt::from(sg);
                rest = &rest[pos + 3..];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn divided_difference_basic_cases() {
        assert_eq!(e(2, 1).divided_difference(1), Polynomial::one(2));
        assert!((e(2, 1) * e(2, 2)).divided_difference(1).is_zero());
        assert_eq!(e(2, 2).divided_difference(1), Polynomial::constant(2, -1));
    }

    #[test]
    fn canonical_form_drops_cancelled_terms() {
        let p = e(3, 1) - e(3, 1);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(p, Polynomial::zero(3));
    }

    #[test]
    fn non_divisible_is_reported() {
        let err = e(3, 1).div_exact_linear(2, 3).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { .. }));
    }

    #[test]
    fn divides_by_non_adjacent_roots() {
        let a = e(4, 1) - e(4, 4);
        let q = &e(4, 2) * &e(4, 3).pow(2) + e(4, 1);
        let prod = &a * &q;
        assert_eq!(prod.div_exact_linear(1, 4).unwrap(), q);
        assert_eq!(prod.div_exact_linear(4, 1).unwrap(), -q);
    }

    #[test]
    fn text_format_is_canonical() {
        let p = e(2, 1).pow(2) - Polynomial::constant(2, 3) * e(2, 2);
        let s = p.to_string();
        assert_eq!(s, "-3*e1^0*e2^1 + 1*e1^2*e2^0");
        assert_eq!(parse_polynomial(2, &s).unwrap(), p);
        assert_eq!(parse_polynomial(2, "0").unwrap(), Polynomial::zero(2));
    }

    #[test]
    fn act_checks_dimension() {
        let w = Permutation::identity(3);
        assert!(e(2, 1).act(&w).is_err());
    }

    #[test]
    fn as_integer_only_for_constants() {
        assert_eq!(
            Polynomial::constant(3, 7).as_integer(),
            Some(BigInt::from(7))
        );
        assert_eq!(Polynomial::zero(3).as_integer(), Some(BigInt::zero()));
        assert_eq!(e(3, 1).as_integer(), None);
    }
}
