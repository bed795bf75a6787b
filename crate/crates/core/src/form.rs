//! Sparse homogeneous forms with exact rational coefficients.
//!
//! A [`Form`] stores its nonzero terms in a `BTreeMap` keyed by
//! [`MultiIndex`]. Every key has the same total degree, and the zero form
//! keeps the degree tag it was built with so that callers can still reason
//! about "the zero form of degree d". Arithmetic treats a zero operand as
//! compatible with any degree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default cap on the number of terms a product may produce.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector `w` of a monomial `x^w`.
///
/// Ordered graded-lexicographically: higher total degree is greater, ties
/// are broken lexicographically with `x1` most significant, so
/// `x1^2 > x1 x2 > x2^2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The exponent of `x_{i+1}` raised to `degree`.
    pub fn pure_power(nvars: usize, i: usize, degree: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = degree;
        MultiIndex(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|w|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some coordinate would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Evaluates the monomial `x^w` at `point`.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Number of monomials of degree `d` in `n` variables, `C(d+n-1, n-1)`.
/// `None` on overflow.
pub fn simplex_size(n: usize, d: u32) -> Option<u128> {
    if n == 0 {
        return Some(if d == 0 { 1 } else { 0 });
    }
    let k = (n - 1) as u128;
    let top = d as u128 + k;
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(top - k + i)? / i;
    }
    Some(acc)
}

/// A homogeneous polynomial over the rationals.
#[derive(Clone, Debug)]
pub struct Form {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.terms == other.terms
            && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Form {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn monomial(exponent: MultiIndex, coeff: Rational) -> Self {
        let mut f = Form::zero(exponent.nvars(), exponent.degree());
        if !coeff.is_zero() {
            f.terms.insert(exponent, coeff);
        }
        f
    }

    /// The variable `x_{i+1}`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::pure_power(nvars, i, 1), Rational::one())
    }

    /// `x1 + ... + xn`.
    pub fn variable_sum(nvars: usize) -> Self {
        let terms = (0..nvars)
            .map(|i| (MultiIndex::pure_power(nvars, i, 1), Rational::one()))
            .collect();
        Form {
            nvars,
            degree: 1,
            terms,
        }
    }

    /// Builds a form from `(exponent, coefficient)` pairs. Repeated exponents
    /// are summed and zero coefficients are dropped.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        if nvars == 0 {
            return Err(Error::NoVariables);
        }
        let mut map: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        let mut bad_degrees = BTreeSet::new();
        for (w, c) in terms {
            if w.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: w.nvars(),
                });
            }
            if w.degree() != degree {
                bad_degrees.insert(w.degree());
            }
            *map.entry(w).or_insert_with(Rational::zero) += c;
        }
        if !bad_degrees.is_empty() {
            bad_degrees.insert(degree);
            return Err(Error::Inhomogeneous {
                degrees: bad_degrees.into_iter().collect(),
            });
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Form {
            nvars,
            degree,
            terms: map,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &MultiIndex) -> Option<&Rational> {
        self.terms.get(w)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    /// Terms in the canonical print order (descending graded-lex).
    pub fn terms_canonical(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter().rev()
    }

    /// The same form carrying a different degree tag. Only meaningful for the
    /// zero form; nonzero forms must already have that degree.
    pub fn with_degree_tag(mut self, degree: u32) -> Result<Self> {
        if !self.is_zero() && self.degree != degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: degree,
            });
        }
        self.degree = degree;
        Ok(self)
    }

    fn check_nvars(&self, other: &Form) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_nvars(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        Ok(Form {
            nvars: self.nvars,
            degree: self.degree,
            terms,
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Form {
        if c.is_zero() {
            return Form::zero(self.nvars, self.degree);
        }
        Form {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.mul_with_budget(other, DEFAULT_TERM_BUDGET)
    }

    /// Product with an explicit cap on the number of output terms.
    pub fn mul_with_budget(&self, other: &Form, budget: usize) -> Result<Form> {
        self.check_nvars(other)?;
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return Ok(Form::zero(self.nvars, degree));
        }
        let pairs = (self.len() as u128) * (other.len() as u128);
        let bound = simplex_size(self.nvars, degree).map_or(pairs, |s| s.min(pairs));
        if bound > budget as u128 {
            return Err(Error::TermBudget {
                limit: budget,
                required: bound,
            });
        }
        let mut acc: HashMap<MultiIndex, Rational> = HashMap::with_capacity(bound as usize);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                *acc.entry(u.add(v)).or_insert_with(Rational::zero) += a * b;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Form {
            nvars: self.nvars,
            degree,
            terms,
        })
    }

    /// `self^m` by iterated multiplication.
    pub fn pow(&self, m: u32) -> Result<Form> {
        let mut table = PowerTable::new(self.clone());
        table.get(m).cloned()
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (w, c)| acc + c * w.eval(point)))
    }

    /// The exponents of nonzero terms.
    pub fn support_points(&self) -> BTreeSet<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    /// True iff every monomial of degree `d` occurs with a positive
    /// coefficient. False for the zero form.
    pub fn has_strictly_positive_coefficients(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let full = simplex_size(self.nvars, self.degree);
        full == Some(self.len() as u128) && self.terms.values().all(|c| c.is_positive())
    }

    /// True iff no stored coefficient is negative (gaps allowed).
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Whether the support is all of `(Z_+^n)_d`.
    pub fn is_fully_supported(&self) -> bool {
        simplex_size(self.nvars, self.degree) == Some(self.len() as u128)
    }

    /// Keeps exactly the terms whose exponent lies in `exponents`.
    pub fn restrict_to_exponents(&self, exponents: &BTreeSet<MultiIndex>) -> Form {
        Form {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| exponents.contains(*w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits `self = x^gamma * g` with `gamma` the coordinatewise minimum of
    /// the support.
    pub fn strip_monomial_gcd(&self) -> Result<(MultiIndex, Form)> {
        let mut gamma: Option<Vec<u32>> = None;
        for w in self.terms.keys() {
            gamma = Some(match gamma {
                None => w.exponents().to_vec(),
                Some(g) => g
                    .iter()
                    .zip(w.exponents())
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            });
        }
        let gamma = MultiIndex(gamma.ok_or(Error::ZeroForm)?);
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.checked_sub(&gamma).expect("gcd divides"), c.clone()))
            .collect();
        let g = Form {
            nvars: self.nvars,
            degree: self.degree - gamma.degree(),
            terms,
        };
        Ok((gamma, g))
    }

    /// Multiplies by the monomial `x^gamma`.
    pub fn shift(&self, gamma: &MultiIndex) -> Form {
        Form {
            nvars: self.nvars,
            degree: self.degree + gamma.degree(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.add(gamma), c.clone()))
                .collect(),
        }
    }

    /// Relabels variables: old variable `i` becomes variable `perm[i]`.
    pub fn permute_variables(&self, perm: &[usize]) -> Form {
        assert_eq!(perm.len(), self.nvars, "permutation length");
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| {
                let mut e = vec![0; self.nvars];
                for (i, &x) in w.exponents().iter().enumerate() {
                    e[perm[i]] = x;
                }
                (MultiIndex(e), c.clone())
            })
            .collect();
        Form {
            nvars: self.nvars,
            degree: self.degree,
            terms,
        }
    }

    /// Indices of variables that occur with a positive exponent somewhere.
    pub fn active_variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|w| w.get(i) > 0))
            .collect()
    }

    /// Keeps only the coordinates listed in `vars`, in that order. Terms with
    /// a positive exponent in a dropped coordinate are an error.
    pub fn project_onto(&self, vars: &[usize]) -> Result<Form> {
        if vars.is_empty() {
            return Err(Error::NoVariables);
        }
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let kept: u32 = vars.iter().map(|&i| w.get(i)).sum();
            if kept != w.degree() {
                return Err(Error::Precondition(format!(
                    "term {:?} uses a variable outside {:?}",
                    w.exponents(),
                    vars
                )));
            }
            terms.insert(
                MultiIndex(vars.iter().map(|&i| w.get(i)).collect()),
                c.clone(),
            );
        }
        Ok(Form {
            nvars: vars.len(),
            degree: self.degree,
            terms,
        })
    }

    /// Inverse of [`Form::project_onto`]: places coordinate `j` of `self`
    /// at position `vars[j]` of an `nvars`-variable form.
    pub fn embed_into(&self, nvars: usize, vars: &[usize]) -> Form {
        assert_eq!(vars.len(), self.nvars, "embedding length");
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (embed_index(w, nvars, vars), c.clone()))
            .collect();
        Form {
            nvars,
            degree: self.degree,
            terms,
        }
    }
}

/// Places coordinate `j` of `w` at position `vars[j]`; other coordinates are
/// zero.
pub fn embed_index(w: &MultiIndex, nvars: usize, vars: &[usize]) -> MultiIndex {
    let mut e = vec![0; nvars];
    for (j, &i) in vars.iter().enumerate() {
        e[i] = w.get(j);
    }
    MultiIndex(e)
}

/// Drops every coordinate not listed in `vars`.
pub fn project_index(w: &MultiIndex, vars: &[usize]) -> MultiIndex {
    MultiIndex(vars.iter().map(|&i| w.get(i)).collect())
}

/// Cache of `base^0, base^1, ...` filled by iterated multiplication.
#[derive(Clone, Debug)]
pub struct PowerTable {
    powers: Vec<Form>,
    budget: usize,
}

impl PowerTable {
    pub fn new(base: Form) -> Self {
        Self::with_budget(base, DEFAULT_TERM_BUDGET)
    }

    pub fn with_budget(base: Form, budget: usize) -> Self {
        let one = Form::constant(base.nvars(), Rational::one());
        PowerTable {
            powers: vec![one, base],
            budget,
        }
    }

    pub fn base(&self) -> &Form {
        &self.powers[1]
    }

    /// Largest exponent computed so far.
    pub fn computed(&self) -> u32 {
        (self.powers.len() - 1) as u32
    }

    pub fn get(&mut self, m: u32) -> Result<&Form> {
        while self.powers.len() <= m as usize {
            let next = self
                .powers
                .last()
                .expect("table is never empty")
                .mul_with_budget(&self.powers[1], self.budget)?;
            self.powers.push(next);
        }
        Ok(&self.powers[m as usize])
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms_canonical().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let constant = w.degree() == 0;
            if constant || !magnitude.is_one() {
                write!(f, "{}", magnitude)?;
                if !constant {
                    f.write_str(" ")?;
                }
            }
            let mut first = true;
            for (i, &e) in w.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "x{}", i + 1)?;
                } else {
                    write!(f, "x{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}
