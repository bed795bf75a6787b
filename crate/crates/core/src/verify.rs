//! Independent re-checking of certificates.
//!
//! Everything here expands products with a dense coefficient array indexed
//! by the rank of each exponent vector among all vectors of that degree. It
//! shares no code with the sparse `BTreeMap` arithmetic in [`crate::form`]
//! beyond reading a form's terms, so a certificate that passes here was
//! confirmed along a second route.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::form::{Form, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("verification failed: {0}")]
pub struct VerificationError(pub String);

type Check = Result<(), VerificationError>;

fn fail<T>(msg: impl Into<String>) -> Result<T, VerificationError> {
    Err(VerificationError(msg.into()))
}

/// `C(a, b)` in `u128`, or `None` on overflow.
fn binomial(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul((a - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of exponent vectors of length `n` summing to `d`.
fn count(n: usize, d: u64) -> Option<u128> {
    if n == 0 {
        return Some(u128::from(d == 0));
    }
    binomial(d + n as u64 - 1, n as u64 - 1)
}

/// Position of `w` in the descending-lex listing of its degree slice.
fn rank(w: &[u64]) -> usize {
    let mut left: u64 = w.iter().sum();
    let mut r: u128 = 0;
    for (i, &wi) in w.iter().enumerate() {
        let rest = w.len() - i - 1;
        if rest == 0 {
            break;
        }
        // Vectors with a larger entry here come first:
        // sum over t < left - wi of count(rest, t) = count(rest + 1, left - wi - 1).
        if left > wi {
            r += count(rest + 1, left - wi - 1).expect("slice size fits");
        }
        left -= wi;
    }
    r as usize
}

fn listing(n: usize, d: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// A form stored as one coefficient per monomial of its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseForm {
    nvars: usize,
    degree: u64,
    coeffs: Vec<Rational>,
}

/// Dense arrays above this size are refused rather than allocated.
const DENSE_LIMIT: u128 = 20_000_000;

impl DenseForm {
    pub fn from_form(f: &Form) -> Result<Self, VerificationError> {
        let n = f.nvars();
        let degree = f.degree() as u64;
        let size = match count(n, degree) {
            Some(s) if s <= DENSE_LIMIT => s as usize,
            _ => return fail("dense expansion too large"),
        };
        let mut coeffs = vec![Rational::zero(); size];
        for (w, c) in f.terms() {
            let w: Vec<u64> = w.exponents().iter().map(|&x| x as u64).collect();
            coeffs[rank(&w)] += c;
        }
        Ok(DenseForm {
            nvars: n,
            degree,
            coeffs,
        })
    }

    pub fn one(nvars: usize) -> Self {
        DenseForm {
            nvars,
            degree: 0,
            coeffs: vec![Rational::one()],
        }
    }

    pub fn mul(&self, other: &DenseForm) -> Result<DenseForm, VerificationError> {
        if self.nvars != other.nvars {
            return fail("variable count mismatch");
        }
        let degree = self.degree + other.degree;
        let size = match count(self.nvars, degree) {
            Some(s) if s <= DENSE_LIMIT => s as usize,
            _ => return fail("dense expansion too large"),
        };
        let left = listing(self.nvars, self.degree);
        let right = listing(self.nvars, other.degree);
        let mut coeffs = vec![Rational::zero(); size];
        for (u, a) in left.iter().zip(&self.coeffs) {
            if a.is_zero() {
                continue;
            }
            for (v, b) in right.iter().zip(&other.coeffs) {
                if b.is_zero() {
                    continue;
                }
                let w: Vec<u64> = u.iter().zip(v).map(|(x, y)| x + y).collect();
                coeffs[rank(&w)] += a * b;
            }
        }
        Ok(DenseForm {
            nvars: self.nvars,
            degree,
            coeffs,
        })
    }

    pub fn pow(&self, m: u32) -> Result<DenseForm, VerificationError> {
        let mut acc = DenseForm::one(self.nvars);
        for _ in 0..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn all_positive(&self) -> bool {
        self.coeffs.iter().all(Signed::is_positive)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Term-by-term evaluation at a point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, VerificationError> {
        if point.len() != self.nvars {
            return fail("point has the wrong length");
        }
        let mut acc = Rational::zero();
        for (w, c) in listing(self.nvars, self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(w) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

/// `base^m * tail`, expanded densely.
pub fn expand_power_times(
    base: &Form,
    m: u32,
    tail: &Form,
) -> Result<DenseForm, VerificationError> {
    DenseForm::from_form(base)?
        .pow(m)?
        .mul(&DenseForm::from_form(tail)?)
}

/// `(x1 + ... + xn)^exponent * q` has strictly positive coefficients.
pub fn check_polya(q: &Form, exponent: u32) -> Check {
    let sum = Form::variable_sum(q.nvars());
    if expand_power_times(&sum, exponent, q)?.all_positive() {
        Ok(())
    } else {
        fail(format!(
            "(x1+...+xn)^{exponent} q has a nonpositive coefficient"
        ))
    }
}

/// `f^m g` has strictly positive (or nonnegative, nonzero) coefficients.
pub fn check_power(f: &Form, g: &Form, m: u32, strict: bool) -> Check {
    let e = expand_power_times(f, m, g)?;
    let ok = if strict {
        e.all_positive()
    } else {
        e.all_nonnegative() && !e.is_zero()
    };
    if ok {
        Ok(())
    } else {
        fail(format!(
            "f^{m} g does not have {} coefficients",
            if strict {
                "strictly positive"
            } else {
                "nonnegative"
            }
        ))
    }
}

/// `form(point) <= 0`, and `point` lies in the closed orthant (or its
/// interior when `interior` is set).
pub fn check_nonpositive_point(form: &Form, point: &[Rational], interior: bool) -> Check {
    if point.iter().any(|x| x.is_negative()) || point.iter().all(Zero::is_zero) {
        return fail("witness is not a nonzero point of the orthant");
    }
    if interior && point.iter().any(Zero::is_zero) {
        return fail("witness is not interior");
    }
    let v = DenseForm::from_form(form)?.eval(point)?;
    if v.is_positive() {
        return fail(format!("form is positive ({v}) at the witness"));
    }
    Ok(())
}
