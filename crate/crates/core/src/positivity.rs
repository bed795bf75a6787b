//! Positivity on the positive orthant and the eventual-positivity certifier.
//!
//! Strict positivity of a form `q` on `R_+^n \ {0}` is semi-decided two ways
//! at once: Pólya certificates (`(x1 + ... + xn)^N q` with strictly positive
//! coefficients proves positivity) and a search for a rational point of the
//! standard simplex where `q <= 0` (which refutes it). Neither side uses
//! floating point.
//!
//! The certifier builds the finite object behind "`p^m q` has strictly
//! positive coefficients for all `m >= m0`": an exponent `s` with `p^s`
//! strictly positive and a window `m0, ..., m0 + s - 1` of exponents that
//! all work. Any larger `m` is `m0 + i + t s` with `0 <= i < s`, and
//! `p^m q = (p^s)^t (p^(m0+i) q)` is a product of forms with strictly
//! positive coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Form, MultiIndex, PowerTable, Rational, DEFAULT_TERM_BUDGET};
use crate::newton::dilated_simplex;
use crate::serde_util;
use crate::verify::{self, VerificationError};

pub const DEFAULT_POLYA_MAX: u32 = 64;
pub const DEFAULT_GRID_DEPTH: u32 = 6;
pub const DEFAULT_M_MAX: u32 = 200;
pub const DEFAULT_S_CAP: u32 = 200;
/// How many times [`positive_split`] halves `c` before giving up.
pub const SPLIT_MAX_HALVINGS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyaBudget {
    pub n_max: u32,
    pub grid_depth: u32,
}

impl Default for PolyaBudget {
    fn default() -> Self {
        PolyaBudget {
            n_max: DEFAULT_POLYA_MAX,
            grid_depth: DEFAULT_GRID_DEPTH,
        }
    }
}

/// Where positivity is asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `R_+^n \ {0}`; refutation points may lie on the boundary.
    PuncturedOrthant,
    /// The open orthant; refutation points have all coordinates positive.
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedPositive,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BudgetUsed {
    /// Number of Pólya exponents tried.
    pub polya_steps: u32,
    /// Deepest grid level evaluated (0 = vertices only).
    pub grid_levels: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthantPositivityOutcome {
    pub verdict: Verdict,
    pub region: Region,
    pub polya_exponent: Option<u32>,
    #[serde(with = "serde_util::option_rational_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(with = "serde_util::option_rational")]
    pub witness_value: Option<Rational>,
    pub budget_used: BudgetUsed,
}

impl OrthantPositivityOutcome {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedPositive
    }

    /// Re-checks the outcome against `q` through the dense expansion path.
    pub fn verify(&self, q: &Form) -> std::result::Result<(), VerificationError> {
        match self.verdict {
            Verdict::CertifiedPositive => {
                let n = self.polya_exponent.ok_or_else(|| {
                    VerificationError("certified outcome without an exponent".into())
                })?;
                verify::check_polya(q, n)
            }
            Verdict::Refuted => {
                let point = self
                    .witness
                    .as_ref()
                    .ok_or_else(|| VerificationError("refuted outcome without a witness".into()))?;
                verify::check_nonpositive_point(q, point, self.region == Region::Interior)
            }
            Verdict::Inconclusive => Ok(()),
        }
    }
}

/// Why a form cannot have the property that was asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationReason {
    /// Nonpositive at the barycenter `(1/n, ..., 1/n)`, equivalently at
    /// `(1, ..., 1)`.
    NonpositiveAtBarycenter,
    /// Nonpositive at a vertex `e_i` of the simplex.
    NonpositiveAtVertex,
    /// Negative at a vertex of the simplex.
    NegativeAtVertex,
    /// Nonpositive at a point of the rational search grid.
    GridPoint,
}

/// A point of the standard simplex with the form's exact value there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub reason: RefutationReason,
    #[serde(with = "serde_util::rational_vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_util::rational")]
    pub value: Rational,
}

pub fn barycenter(n: usize) -> Vec<Rational> {
    vec![Rational::new(BigInt::one(), BigInt::from(n)); n]
}

pub fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

fn vertex(n: usize, i: usize) -> Vec<Rational> {
    (0..n)
        .map(|j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `q` scaled by a positive integer to integer coefficients.
struct IntegerForm {
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl IntegerForm {
    fn new(q: &Form) -> Self {
        let lcm = q
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms = q
            .terms()
            .map(|(w, c)| {
                let scaled = c * Rational::from_integer(lcm.clone());
                (w.exponents().to_vec(), scaled.to_integer())
            })
            .collect();
        IntegerForm { terms }
    }

    /// Sign of `q(w)` for an integer point `w`.
    fn sign_at(&self, w: &[u32]) -> std::cmp::Ordering {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (&x, &k) in w.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(BigInt::from(x), k as usize);
                }
            }
            acc += t;
        }
        acc.sign().cmp(&num_bigint::Sign::NoSign)
    }
}

/// Grid resolution at level `t`: vertices, then `n * 2^(t-1)` so every level
/// after the first contains the barycenter.
fn grid_resolution(n: usize, level: u32) -> u32 {
    if level == 0 {
        1
    } else {
        (n as u32) << (level - 1)
    }
}

/// First grid point of the given level where `q <= 0`, scanning in
/// descending graded-lex order.
fn grid_search(q: &Form, iq: &IntegerForm, level: u32, region: Region) -> Option<Refutation> {
    let n = q.nvars();
    let r = grid_resolution(n, level);
    for w in dilated_simplex(n, r) {
        let e = w.exponents();
        if region == Region::Interior && e.contains(&0) {
            continue;
        }
        // Points already visited at a coarser level.
        if level >= 2 && e.iter().all(|x| x % 2 == 0) {
            continue;
        }
        if level == 1 && region == Region::PuncturedOrthant && e.contains(&r) {
            continue;
        }
        if iq.sign_at(e) != std::cmp::Ordering::Greater {
            let point: Vec<Rational> = e
                .iter()
                .map(|&x| Rational::new(BigInt::from(x), BigInt::from(r)))
                .collect();
            let value = q.eval(&point).expect("point has nvars entries");
            let reason = if level == 0 {
                RefutationReason::NonpositiveAtVertex
            } else {
                RefutationReason::GridPoint
            };
            return Some(Refutation {
                reason,
                point,
                value,
            });
        }
    }
    None
}

/// Semi-decides strict positivity of `q` on `R_+^n \ {0}`.
pub fn orthant_positivity(q: &Form, budget: PolyaBudget) -> Result<OrthantPositivityOutcome> {
    orthant_positivity_in(q, budget, Region::PuncturedOrthant)
}

/// As [`orthant_positivity`], with refutation points restricted to `region`.
///
/// Pólya exponents `N = 0, 1, ...` are tried in order, so a certificate
/// carries the least `N`; after each step the grid search goes one level
/// deeper.
pub fn orthant_positivity_in(
    q: &Form,
    budget: PolyaBudget,
    region: Region,
) -> Result<OrthantPositivityOutcome> {
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let iq = IntegerForm::new(q);
    let mut used = BudgetUsed::default();
    let refuted = |r: Refutation, used: BudgetUsed| OrthantPositivityOutcome {
        verdict: Verdict::Refuted,
        region,
        polya_exponent: None,
        witness: Some(r.point),
        witness_value: Some(r.value),
        budget_used: used,
    };

    if region == Region::PuncturedOrthant {
        if let Some(r) = grid_search(q, &iq, 0, region) {
            return Ok(refuted(r, used));
        }
    }
    let sum = Form::variable_sum(q.nvars());
    let mut product = Some(q.clone());
    for n_exp in 0..=budget.n_max {
        if let Some(prod) = &product {
            used.polya_steps = n_exp + 1;
            if prod.has_strictly_positive_coefficients() {
                return Ok(OrthantPositivityOutcome {
                    verdict: Verdict::CertifiedPositive,
                    region,
                    polya_exponent: Some(n_exp),
                    witness: None,
                    witness_value: None,
                    budget_used: used,
                });
            }
        }
        if used.grid_levels < budget.grid_depth {
            used.grid_levels += 1;
            if let Some(r) = grid_search(q, &iq, used.grid_levels, region) {
                return Ok(refuted(r, used));
            }
        }
        if n_exp < budget.n_max {
            // A term-budget overflow ends the Pólya side; the grid goes on.
            product = product.and_then(|p| p.mul_with_budget(&sum, DEFAULT_TERM_BUDGET).ok());
        }
    }
    while used.grid_levels < budget.grid_depth {
        used.grid_levels += 1;
        if let Some(r) = grid_search(q, &iq, used.grid_levels, region) {
            return Ok(refuted(r, used));
        }
    }
    Ok(OrthantPositivityOutcome {
        verdict: Verdict::Inconclusive,
        region,
        polya_exponent: None,
        witness: None,
        witness_value: None,
        budget_used: used,
    })
}

/// `g = c (x1 + ... + xn)^deg(g) + h` with `h` fully supported and
/// certified positive on the punctured orthant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveSplit {
    #[serde(with = "serde_util::rational")]
    pub c: Rational,
    pub g_prime: Form,
    pub h: Form,
    pub h_polya_exponent: u32,
    pub attempts: u32,
}

/// Splits off a small multiple of `(x1 + ... + xn)^deg(g)`, halving `c`
/// from `1/2` until the remainder is fully supported and Pólya-certified.
pub fn positive_split(g: &Form, budget: PolyaBudget) -> Result<PositiveSplit> {
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !orthant_positivity(g, budget)?.is_certified() {
        return Err(Error::Precondition(
            "g is not certified positive on the punctured orthant".into(),
        ));
    }
    let base = Form::variable_sum(g.nvars()).pow(g.degree())?;
    let mut c = Rational::new(BigInt::one(), BigInt::from(2));
    for attempt in 1..=SPLIT_MAX_HALVINGS {
        let g_prime = base.scale(&c);
        let h = g.sub(&g_prime)?;
        if h.is_fully_supported() {
            let outcome = orthant_positivity(&h, budget)?;
            if let Some(n) = outcome.polya_exponent {
                return Ok(PositiveSplit {
                    c,
                    g_prime,
                    h,
                    h_polya_exponent: n,
                    attempts: attempt,
                });
            }
        }
        c /= Rational::from_integer(BigInt::from(2));
    }
    Err(Error::BudgetExhausted(format!(
        "no split found after {SPLIT_MAX_HALVINGS} halvings of c"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMode {
    Nonnegative,
    Strict,
}

impl CoefficientMode {
    fn accepts(self, f: &Form) -> bool {
        match self {
            CoefficientMode::Nonnegative => !f.is_zero() && f.has_nonnegative_coefficients(),
            CoefficientMode::Strict => f.has_strictly_positive_coefficients(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PowerSearch {
    Found {
        m: u32,
    },
    /// No exponent can ever work; the refutation says why.
    ProvablyNever {
        refutation: Refutation,
    },
    NotFound {
        searched_up_to: u32,
    },
}

/// Where an unfinished power search stopped: `product = f^next_m g`.
#[derive(Clone, Debug)]
pub struct PowerCursor {
    pub next_m: u32,
    pub product: Form,
}

#[derive(Clone, Debug)]
pub struct PowerSearchResult {
    pub outcome: PowerSearch,
    pub cursor: Option<PowerCursor>,
}

/// Least `m` in `1..=m_max` with `f^m g` having nonnegative (or strictly
/// positive) coefficients, for `f` nonconstant with strictly positive
/// coefficients.
pub fn find_power_exponent(
    f: &Form,
    g: &Form,
    mode: CoefficientMode,
    m_max: u32,
) -> Result<PowerSearchResult> {
    check_power_inputs(f, g)?;
    if let Some(refutation) = power_refutation(g, mode) {
        return Ok(PowerSearchResult {
            outcome: PowerSearch::ProvablyNever { refutation },
            cursor: None,
        });
    }
    let cursor = PowerCursor {
        next_m: 1,
        product: f.mul(g)?,
    };
    resume_power_search(f, cursor, mode, m_max)
}

/// Continues a search that stopped at `cursor`, up to `m_max`.
pub fn resume_power_search(
    f: &Form,
    cursor: PowerCursor,
    mode: CoefficientMode,
    m_max: u32,
) -> Result<PowerSearchResult> {
    let PowerCursor {
        mut next_m,
        mut product,
    } = cursor;
    while next_m <= m_max {
        if mode.accepts(&product) {
            return Ok(PowerSearchResult {
                outcome: PowerSearch::Found { m: next_m },
                cursor: None,
            });
        }
        product = product.mul(f)?;
        next_m += 1;
    }
    Ok(PowerSearchResult {
        outcome: PowerSearch::NotFound {
            searched_up_to: m_max,
        },
        cursor: Some(PowerCursor { next_m, product }),
    })
}

fn check_power_inputs(f: &Form, g: &Form) -> Result<()> {
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch {
            left: f.nvars(),
            right: g.nvars(),
        });
    }
    if f.degree() == 0 || !f.has_strictly_positive_coefficients() {
        return Err(Error::Precondition(
            "f must be nonconstant with strictly positive coefficients".into(),
        ));
    }
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(())
}

/// If `f^m g` has nonnegative coefficients and is nonzero it is positive on
/// the open orthant, and nonnegative on its boundary; strictly positive
/// coefficients make it positive on the whole punctured orthant. Since
/// `f > 0` there, a point where `g` breaks this rules out every `m`.
fn power_refutation(g: &Form, mode: CoefficientMode) -> Option<Refutation> {
    let n = g.nvars();
    let b = barycenter(n);
    let v = g.eval(&b).expect("length n");
    if !v.is_positive() {
        return Some(Refutation {
            reason: RefutationReason::NonpositiveAtBarycenter,
            point: b,
            value: v,
        });
    }
    for i in 0..n {
        let c = g
            .coefficient(&MultiIndex::pure_power(n, i, g.degree()))
            .cloned()
            .unwrap_or_else(Rational::zero);
        let bad = match mode {
            CoefficientMode::Nonnegative => c.is_negative(),
            CoefficientMode::Strict => !c.is_positive(),
        };
        if bad {
            return Some(Refutation {
                reason: if c.is_negative() {
                    RefutationReason::NegativeAtVertex
                } else {
                    RefutationReason::NonpositiveAtVertex
                },
                point: vertex(n, i),
                value: c,
            });
        }
    }
    None
}

/// Condition (B): `p^m` strictly positive and `p(point) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivePowerAndPoint {
    pub m: u32,
    #[serde(with = "serde_util::rational_vec")]
    pub point: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremConditions {
    /// Least `m <= cap` with `p^m` strictly positive.
    pub least_m: Option<u32>,
    /// Least odd such `m`: condition (A).
    pub cond_a: Option<u32>,
    /// Condition (B), witnessed at `(1, ..., 1)`.
    pub cond_b: Option<PositivePowerAndPoint>,
    #[serde(with = "serde_util::rational")]
    pub value_at_ones: Rational,
    /// Present when (A) and (B) provably fail for every `m`.
    pub refutation: Option<Refutation>,
    pub searched_up_to: u32,
}

/// Searches `m <= cap` for strictly positive powers of `p`.
pub fn check_theorem_conditions(p: &Form, cap: u32) -> Result<TheoremConditions> {
    if p.degree() == 0 || p.is_zero() {
        return Err(Error::Precondition("p must be a nonconstant form".into()));
    }
    let n = p.nvars();
    let value_at_ones = p.eval(&ones(n))?;

    // p^m strictly positive forces p^m > 0 on the punctured orthant, so p has
    // no zero there and, for odd m, is positive. A zero at the barycenter or
    // a vertex rules out every power; a negative value rules out (A) and (B).
    let mut refutation = None;
    let mut hopeless = false;
    let b = barycenter(n);
    let vb = p.eval(&b)?;
    if !vb.is_positive() {
        hopeless = vb.is_zero();
        refutation = Some(Refutation {
            reason: RefutationReason::NonpositiveAtBarycenter,
            point: b,
            value: vb,
        });
    }
    for i in 0..n {
        let c = p
            .coefficient(&MultiIndex::pure_power(n, i, p.degree()))
            .cloned()
            .unwrap_or_else(Rational::zero);
        if !c.is_positive() {
            hopeless |= c.is_zero();
            if refutation.is_none() || c.is_zero() {
                refutation = Some(Refutation {
                    reason: if c.is_zero() {
                        RefutationReason::NonpositiveAtVertex
                    } else {
                        RefutationReason::NegativeAtVertex
                    },
                    point: vertex(n, i),
                    value: c,
                });
            }
        }
    }

    let mut least_m = None;
    let mut least_odd = None;
    let mut searched = 0;
    if !hopeless {
        let mut table = PowerTable::new(p.clone());
        for m in 1..=cap {
            searched = m;
            if table.get(m)?.has_strictly_positive_coefficients() {
                least_m.get_or_insert(m);
                if m % 2 == 1 && refutation.is_none() {
                    least_odd = Some(m);
                }
            }
            if least_m.is_some() && (least_odd.is_some() || refutation.is_some()) {
                break;
            }
        }
    }
    let cond_b = match (&refutation, least_m) {
        (None, Some(m)) => Some(PositivePowerAndPoint { m, point: ones(n) }),
        _ => None,
    };
    Ok(TheoremConditions {
        least_m,
        cond_a: least_odd,
        cond_b,
        value_at_ones,
        refutation,
        searched_up_to: searched,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyBudget {
    pub s_cap: u32,
    pub m_max: u32,
    pub polya: PolyaBudget,
}

impl Default for CertifyBudget {
    fn default() -> Self {
        CertifyBudget {
            s_cap: DEFAULT_S_CAP,
            m_max: DEFAULT_M_MAX,
            polya: PolyaBudget::default(),
        }
    }
}

/// Finite proof that `p^m q` has strictly positive coefficients for every
/// `m >= m0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualPositivityCertificate {
    pub p: Form,
    pub q: Form,
    /// `p^s` has strictly positive coefficients.
    pub s: u32,
    pub m0: u32,
    /// `m0, ..., m0 + s - 1`, each with `p^m q` strictly positive.
    pub window: Vec<u32>,
    /// Pólya exponent certifying `q > 0` on the punctured orthant.
    pub q_polya_exponent: u32,
}

impl EventualPositivityCertificate {
    /// Re-checks every claim by dense expansion.
    pub fn verify(&self) -> std::result::Result<(), VerificationError> {
        let expected: Vec<u32> = (self.m0..self.m0 + self.s).collect();
        if self.s == 0 || self.window != expected {
            return Err(VerificationError(
                "window is not m0..m0+s-1 with s >= 1".into(),
            ));
        }
        let one = Form::constant(self.p.nvars(), Rational::one());
        verify::check_power(&self.p, &one, self.s, true)?;
        for &m in &self.window {
            verify::check_power(&self.p, &self.q, m, true)?;
        }
        verify::check_polya(&self.q, self.q_polya_exponent)
    }

    /// Expands `p^m q` for `m` in `m0..=m0 + extra` and checks each.
    pub fn spot_check(&self, extra: u32) -> std::result::Result<(), VerificationError> {
        for m in self.m0..=self.m0 + extra {
            verify::check_power(&self.p, &self.q, m, true)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutedInput {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Certified {
        certificate: EventualPositivityCertificate,
    },
    /// No `m0` exists. `definitive` marks the evaluation-at-a-point
    /// shortcut, which needs no search at all.
    Refuted {
        input: RefutedInput,
        refutation: Refutation,
        definitive: bool,
    },
    Inconclusive {
        reason: String,
        /// First `m0` not yet tried, when the window search ran out.
        next_m0: Option<u32>,
    },
}

/// Builds an eventual-positivity certificate for `(p, q)`.
pub fn certify_eventual_positivity(
    p: &Form,
    q: &Form,
    budget: CertifyBudget,
) -> Result<CertifyOutcome> {
    if p.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    if q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let n = q.nvars();
    let b = barycenter(n);
    let vq = q.eval(&b)?;
    if !vq.is_positive() {
        return Ok(CertifyOutcome::Refuted {
            input: RefutedInput::Q,
            refutation: Refutation {
                reason: RefutationReason::NonpositiveAtBarycenter,
                point: b,
                value: vq,
            },
            definitive: true,
        });
    }
    let q_outcome = orthant_positivity(q, budget.polya)?;
    let q_polya_exponent = match q_outcome.verdict {
        Verdict::CertifiedPositive => q_outcome.polya_exponent.expect("certified"),
        Verdict::Refuted => {
            let point = q_outcome.witness.expect("refuted");
            return Ok(CertifyOutcome::Refuted {
                input: RefutedInput::Q,
                refutation: Refutation {
                    reason: RefutationReason::GridPoint,
                    point,
                    value: q_outcome.witness_value.expect("refuted"),
                },
                definitive: false,
            });
        }
        Verdict::Inconclusive => {
            return Ok(CertifyOutcome::Inconclusive {
                reason: "positivity of q on the orthant is undecided within budget".into(),
                next_m0: None,
            })
        }
    };

    let conditions = check_theorem_conditions(p, budget.s_cap)?;
    if let Some(refutation) = conditions.refutation {
        return Ok(CertifyOutcome::Refuted {
            input: RefutedInput::P,
            definitive: true,
            refutation,
        });
    }
    let Some(s) = conditions.least_m else {
        return Ok(CertifyOutcome::Inconclusive {
            reason: format!("no strictly positive power of p up to {}", budget.s_cap),
            next_m0: None,
        });
    };

    match find_window(p, q, s, 0, budget.m_max)? {
        Some(m0) => Ok(CertifyOutcome::Certified {
            certificate: EventualPositivityCertificate {
                p: p.clone(),
                q: q.clone(),
                s,
                m0,
                window: (m0..m0 + s).collect(),
                q_polya_exponent,
            },
        }),
        None => Ok(CertifyOutcome::Inconclusive {
            reason: format!(
                "no window of {s} consecutive exponents starting at or below {}",
                budget.m_max
            ),
            next_m0: Some(budget.m_max + 1),
        }),
    }
}

/// Least `m0` in `from..=to` such that `p^m q` has strictly positive
/// coefficients for all `m` in `m0..m0 + s`.
pub fn find_window(p: &Form, q: &Form, s: u32, from: u32, to: u32) -> Result<Option<u32>> {
    if s == 0 {
        return Err(Error::Precondition("window length must be positive".into()));
    }
    let mut product = p.pow(from)?.mul(q)?;
    let mut run = 0;
    let mut m = from;
    loop {
        if product.has_strictly_positive_coefficients() {
            run += 1;
            if run == s {
                return Ok(Some(m + 1 - s));
            }
        } else {
            run = 0;
        }
        // The window starting at m + 1 - run cannot start past `to`.
        if m + 1 - run > to {
            return Ok(None);
        }
        m += 1;
        product = product.mul(p)?;
    }
}
