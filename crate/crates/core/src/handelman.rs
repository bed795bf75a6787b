//! Handelman's face and stratum criterion for `p^m q` to have nonnegative
//! coefficients, decided recursively.
//!
//! With `p` having nonnegative coefficients, some `p^m q` has nonnegative
//! coefficients exactly when (a) `q_E` is strictly positive on the open
//! orthant for every dominant stratum `E` of `Log(q)` with respect to the
//! improper face `Log(p)`, and (b) the pair `(p_F, q_E)` passes the same
//! test for every proper relative face `F` and dominant stratum `E` with
//! respect to `F`. Pairs in (b) live in fewer variables once a monomial
//! factor is removed, which is what the recursion runs on.
//!
//! A `yes` always carries an `m` found by search and rechecked by
//! expansion. A `no` is reported only when the failing pair is known
//! exactly (the closed form for full dilated simplices, or the stratum
//! being all of `Log(q)`); other failures make the verdict inconclusive.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{embed_index, Form, MultiIndex, Rational};
use crate::newton::{
    enumerate_relative_faces_with_limit, simplex_faces, RelativeFace, FACE_ENUMERATION_LIMIT,
};
use crate::positivity::{orthant_positivity_in, PolyaBudget, Region, Verdict, DEFAULT_M_MAX};
use crate::serde_util;
use crate::strata::{
    closed_form_strata, enumerate_strata_bounded, Dominance, Stratum, StratumBounds,
};
use crate::verify::{self, VerificationError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandelmanBudget {
    pub polya: PolyaBudget,
    /// Largest `m` tried when searching for the exponent.
    pub m_max: u32,
    /// Largest support handed to generic face enumeration.
    pub face_limit: usize,
}

impl Default for HandelmanBudget {
    fn default() -> Self {
        HandelmanBudget {
            polya: PolyaBudget::default(),
            m_max: DEFAULT_M_MAX,
            face_limit: FACE_ENUMERATION_LIMIT,
        }
    }
}

/// A relative face of `Log(p)` with one of its dominant strata in `Log(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominantPair {
    pub face: RelativeFace,
    pub stratum: Stratum,
    pub improper: bool,
    /// Both supports were full dilated simplices, so faces, strata and
    /// dominance came from the closed form and are exact.
    pub closed_form: bool,
}

/// Every nonempty relative face of `Log(p)` paired with each stratum of
/// `Log(q)` that is dominant or of unknown dominance.
pub fn dominant_strata_of_pair(p: &Form, q: &Form, face_limit: usize) -> Result<Vec<DominantPair>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroForm);
    }
    if p.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    let n = p.nvars();
    let logp = p.support();
    let logq = q.support();
    let mut out = Vec::new();

    if logp.is_dilated_simplex() && logq.is_dilated_simplex() {
        for sf in simplex_faces(n, p.degree()) {
            if sf.zeroed.len() == n {
                continue;
            }
            for s in closed_form_strata(n, p.degree(), q.degree(), &sf.zeroed)? {
                if s.stratum.dominance == Dominance::No {
                    continue;
                }
                out.push(DominantPair {
                    face: sf.face.clone(),
                    stratum: s.stratum,
                    improper: sf.zeroed.is_empty(),
                    closed_form: true,
                });
            }
        }
        return Ok(out);
    }

    let bounds = StratumBounds::default_for(p.degree(), q.degree());
    for face in enumerate_relative_faces_with_limit(&logp, face_limit)? {
        if face.points.is_empty() {
            continue;
        }
        let improper = face.points.len() == logp.len();
        for stratum in enumerate_strata_bounded(&logq, &logp, &face.points, bounds)? {
            if stratum.dominance == Dominance::No {
                continue;
            }
            out.push(DominantPair {
                face: face.clone(),
                stratum,
                improper,
                closed_form: false,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `q_E > 0` on the open orthant, for the improper face.
    A,
    /// The pair `(p_F, q_E)` recursively, for a proper face.
    B,
}

/// One condition check at one level. Faces and strata are given as
/// exponents of the level's own `p` and `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub face: BTreeSet<MultiIndex>,
    pub stratum: BTreeSet<MultiIndex>,
    pub dominance: Dominance,
    /// Whether a failure here is a proof of `no`.
    pub exact: bool,
    pub status: CheckStatus,
    pub polya_exponent: Option<u32>,
    #[serde(with = "serde_util::option_rational_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(with = "serde_util::option_rational")]
    pub witness_value: Option<Rational>,
    pub note: Option<String>,
    pub sub: Option<Box<TraceNode>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// At most one active variable: both forms are monomials up to scaling.
    Trivial,
    ClosedForm,
    Bounded,
}

/// One level of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub p: Form,
    pub q: Form,
    /// Variables still present after removing monomial factors.
    pub active: Vec<usize>,
    pub geometry: Geometry,
    pub checks: Vec<ConditionCheck>,
    pub answer: Answer,
    pub m: Option<u32>,
    pub note: Option<String>,
}

/// The condition that settled a `no`, down to the interior witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FailingCondition {
    A {
        stratum: BTreeSet<MultiIndex>,
        q_e: Form,
        #[serde(with = "serde_util::rational_vec")]
        witness: Vec<Rational>,
        #[serde(with = "serde_util::rational")]
        value: Rational,
    },
    B {
        face: BTreeSet<MultiIndex>,
        stratum: BTreeSet<MultiIndex>,
        p_f: Form,
        q_e: Form,
        cause: Box<FailingCondition>,
    },
}

impl FailingCondition {
    /// The innermost condition (a) failure.
    pub fn root(&self) -> &FailingCondition {
        match self {
            FailingCondition::A { .. } => self,
            FailingCondition::B { cause, .. } => cause.root(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandelmanVerdict {
    pub verdict: Answer,
    pub m: Option<u32>,
    pub failing_condition: Option<FailingCondition>,
    pub trace: TraceNode,
}

impl HandelmanVerdict {
    /// Re-checks a `yes` by expanding `p^m q`, and a `no` by evaluating the
    /// innermost `q_E` at its witness.
    pub fn verify(&self, p: &Form, q: &Form) -> std::result::Result<(), VerificationError> {
        match self.verdict {
            Answer::Yes => {
                let m = self
                    .m
                    .ok_or_else(|| VerificationError("yes without an exponent".into()))?;
                verify::check_power(p, q, m, false)
            }
            Answer::No => match self.failing_condition.as_ref().map(FailingCondition::root) {
                Some(FailingCondition::A {
                    stratum,
                    q_e,
                    witness,
                    ..
                }) => {
                    let support: BTreeSet<MultiIndex> = q_e.support_points();
                    if &support != stratum {
                        return Err(VerificationError(
                            "q_E does not have the recorded stratum as support".into(),
                        ));
                    }
                    verify::check_nonpositive_point(q_e, witness, true)
                }
                _ => Err(VerificationError("no without a failing condition".into())),
            },
            Answer::Inconclusive => Ok(()),
        }
    }
}

/// Decides whether `p^m q` has nonnegative coefficients for some `m >= 1`.
pub fn handelman_decide(p: &Form, q: &Form, budget: HandelmanBudget) -> Result<HandelmanVerdict> {
    if p.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch {
            left: p.nvars(),
            right: q.nvars(),
        });
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !p.has_nonnegative_coefficients() {
        return Err(Error::Precondition(
            "p must have nonnegative coefficients".into(),
        ));
    }
    let (trace, failing) = decide_level(p, q, &budget, None)?;
    Ok(HandelmanVerdict {
        verdict: trace.answer,
        m: trace.m,
        failing_condition: failing,
        trace,
    })
}

/// Interior point of the simplex: `point` on `vars`, `1` elsewhere, scaled
/// to coordinate sum one.
fn lift_point(point: &[Rational], nvars: usize, vars: &[usize]) -> Vec<Rational> {
    let mut out = vec![Rational::one(); nvars];
    for (j, &i) in vars.iter().enumerate() {
        out[i] = point[j].clone();
    }
    let total: Rational = out.iter().cloned().sum();
    out.into_iter().map(|x| x / &total).collect()
}

fn lift_set(
    set: &BTreeSet<MultiIndex>,
    nvars: usize,
    vars: &[usize],
    gamma: &MultiIndex,
) -> BTreeSet<MultiIndex> {
    set.iter()
        .map(|w| embed_index(w, nvars, vars).add(gamma))
        .collect()
}

fn least_power(p: &Form, q: &Form, m_max: u32) -> Result<Option<u32>> {
    let mut product = q.clone();
    for m in 1..=m_max {
        product = product.mul(p)?;
        if !product.is_zero() && product.has_nonnegative_coefficients() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

struct InteriorCheck {
    status: CheckStatus,
    polya_exponent: Option<u32>,
    witness: Option<(Vec<Rational>, Rational)>,
    note: Option<String>,
}

/// Condition (a) for `q_e`: Pólya on the stripped form certifies positivity
/// on the open orthant, an interior point with value `<= 0` refutes it.
fn interior_positivity(q_e: &Form, polya: PolyaBudget) -> Result<InteriorCheck> {
    let n = q_e.nvars();
    let (_, stripped) = q_e.strip_monomial_gcd()?;
    let vars = stripped.active_variables();
    if vars.is_empty() {
        // A monomial: the sign of its coefficient decides.
        let c = stripped
            .terms()
            .next()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        if c.is_positive() {
            return Ok(InteriorCheck {
                status: CheckStatus::Passed,
                polya_exponent: Some(0),
                witness: None,
                note: None,
            });
        }
        let point = lift_point(&[], n, &[]);
        let value = q_e.eval(&point)?;
        return Ok(InteriorCheck {
            status: CheckStatus::Failed,
            polya_exponent: None,
            witness: Some((point, value)),
            note: None,
        });
    }
    let reduced = stripped.project_onto(&vars)?;
    let outcome = orthant_positivity_in(&reduced, polya, Region::Interior)?;
    Ok(match outcome.verdict {
        Verdict::CertifiedPositive => InteriorCheck {
            status: CheckStatus::Passed,
            polya_exponent: outcome.polya_exponent,
            witness: None,
            note: None,
        },
        Verdict::Refuted => {
            let point = lift_point(&outcome.witness.expect("refuted"), n, &vars);
            let value = q_e.eval(&point)?;
            InteriorCheck {
                status: CheckStatus::Failed,
                polya_exponent: None,
                witness: Some((point, value)),
                note: None,
            }
        }
        Verdict::Inconclusive => InteriorCheck {
            status: CheckStatus::Inconclusive,
            polya_exponent: None,
            witness: None,
            note: Some(format!(
                "positivity undecided after {} Pólya steps and {} grid levels",
                outcome.budget_used.polya_steps, outcome.budget_used.grid_levels
            )),
        },
    })
}

type Level = (TraceNode, Option<FailingCondition>);

fn decide_level(
    p: &Form,
    q: &Form,
    budget: &HandelmanBudget,
    parent_active: Option<usize>,
) -> Result<Level> {
    let n = p.nvars();
    let (gp, sp) = p.strip_monomial_gcd()?;
    let (gq, sq) = q.strip_monomial_gcd()?;
    let active: Vec<usize> = (0..n)
        .filter(|&i| sp.terms().chain(sq.terms()).any(|(w, _)| w.get(i) > 0))
        .collect();
    let mut node = TraceNode {
        p: p.clone(),
        q: q.clone(),
        active: active.clone(),
        geometry: Geometry::Trivial,
        checks: Vec::new(),
        answer: Answer::Inconclusive,
        m: None,
        note: None,
    };
    if let Some(limit) = parent_active {
        if active.len() >= limit {
            node.note = Some("face did not reduce the number of variables".into());
            return Ok((node, None));
        }
    }

    let mut failing = None;
    let mut undecided = false;
    if active.len() <= 1 {
        let check = interior_positivity(q, budget.polya)?;
        let exact = true;
        let status = check.status;
        let stratum = q.support_points();
        let face = p.support_points();
        if let (CheckStatus::Failed, Some((point, value))) = (status, &check.witness) {
            failing = Some(FailingCondition::A {
                stratum: stratum.clone(),
                q_e: q.clone(),
                witness: point.clone(),
                value: value.clone(),
            });
        }
        undecided |= status != CheckStatus::Passed;
        node.checks.push(ConditionCheck {
            condition: Condition::A,
            face,
            stratum,
            dominance: Dominance::Yes,
            exact,
            status,
            polya_exponent: check.polya_exponent,
            witness: check.witness.as_ref().map(|(w, _)| w.clone()),
            witness_value: check.witness.map(|(_, v)| v),
            note: check.note,
            sub: None,
        });
    } else {
        let pa = sp.project_onto(&active)?;
        let qa = sq.project_onto(&active)?;
        let mut pairs = match dominant_strata_of_pair(&pa, &qa, budget.face_limit) {
            Ok(pairs) => pairs,
            Err(Error::EnumerationBudget { size, limit }) => {
                node.geometry = Geometry::Bounded;
                node.note = Some(format!(
                    "support of p has {size} points, above the face enumeration limit {limit}"
                ));
                return Ok((node, None));
            }
            Err(e) => return Err(e),
        };
        node.geometry = if pairs.first().is_some_and(|pr| pr.closed_form) {
            Geometry::ClosedForm
        } else {
            Geometry::Bounded
        };
        // Proper faces first: they recurse into fewer variables and a failure
        // there ends the level before the costlier interior check.
        pairs.sort_by_key(|pr| pr.improper);
        let whole_q = qa.support_points();
        for pair in pairs {
            let face = lift_set(&pair.face.points, n, &active, &gp);
            let stratum = lift_set(&pair.stratum.points, n, &active, &gq);
            let q_e = q.restrict_to_exponents(&stratum);
            let mut check = ConditionCheck {
                condition: if pair.improper {
                    Condition::A
                } else {
                    Condition::B
                },
                face: face.clone(),
                stratum: stratum.clone(),
                dominance: pair.stratum.dominance,
                exact: pair.closed_form,
                status: CheckStatus::Inconclusive,
                polya_exponent: None,
                witness: None,
                witness_value: None,
                note: None,
                sub: None,
            };
            if pair.improper {
                // q <= 0 somewhere inside the orthant rules out every m on its
                // own, so the whole support needs no stratum theory.
                check.exact |= pair.stratum.points == whole_q;
                let res = interior_positivity(&q_e, budget.polya)?;
                check.status = res.status;
                check.polya_exponent = res.polya_exponent;
                check.note = res.note;
                if let Some((point, value)) = res.witness {
                    if check.exact {
                        failing = Some(FailingCondition::A {
                            stratum: stratum.clone(),
                            q_e: q_e.clone(),
                            witness: point.clone(),
                            value: value.clone(),
                        });
                    }
                    check.witness = Some(point);
                    check.witness_value = Some(value);
                }
            } else {
                let p_f = p.restrict_to_exponents(&face);
                let (sub, sub_failing) = decide_level(&p_f, &q_e, budget, Some(active.len()))?;
                check.status = match sub.answer {
                    Answer::Yes => CheckStatus::Passed,
                    Answer::No => CheckStatus::Failed,
                    Answer::Inconclusive => CheckStatus::Inconclusive,
                };
                if let (true, Some(cause)) = (check.exact, sub_failing) {
                    failing = Some(FailingCondition::B {
                        face,
                        stratum,
                        p_f,
                        q_e,
                        cause: Box::new(cause),
                    });
                }
                check.sub = Some(Box::new(sub));
            }
            if check.status == CheckStatus::Failed && !check.exact {
                check.note.get_or_insert_with(|| {
                    "failure on a pair found by bounded search is not a proof".into()
                });
            }
            undecided |= check.status != CheckStatus::Passed;
            node.checks.push(check);
            if failing.is_some() {
                break;
            }
        }
    }

    if failing.is_some() {
        node.answer = Answer::No;
        return Ok((node, failing));
    }
    if undecided {
        return Ok((node, None));
    }
    match least_power(p, q, budget.m_max)? {
        Some(m) => {
            node.answer = Answer::Yes;
            node.m = Some(m);
        }
        None => {
            node.note = Some(format!(
                "conditions hold but no m <= {} was found",
                budget.m_max
            ));
        }
    }
    Ok((node, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{int, rat};
    use crate::parse::parse;

    fn f2(s: &str) -> Form {
        parse(s, 2).unwrap()
    }

    fn decide(p: &str, q: &str, n: usize) -> HandelmanVerdict {
        let p = parse(p, n).unwrap();
        let q = parse(q, n).unwrap();
        let v = handelman_decide(&p, &q, HandelmanBudget::default()).unwrap();
        v.verify(&p, &q).unwrap();
        v
    }

    #[test]
    fn full_simplices_give_the_closed_form_list() {
        let pairs = dominant_strata_of_pair(
            &parse("x1 + x2 + x3", 3).unwrap(),
            &Form::variable_sum(3).pow(2).unwrap(),
            FACE_ENUMERATION_LIMIT,
        )
        .unwrap();
        // Improper face plus six proper faces, one dominant stratum each.
        assert_eq!(pairs.len(), 7);
        assert!(pairs.iter().all(|p| p.closed_form));
        assert_eq!(pairs[0].stratum.points.len(), 6);
        assert!(pairs[0].improper);
        for pair in &pairs[1..] {
            let zeroed: Vec<usize> = (0..3)
                .filter(|&i| pair.face.points.iter().all(|w| w.get(i) == 0))
                .collect();
            assert!(pair
                .stratum
                .points
                .iter()
                .all(|w| zeroed.iter().all(|&j| w.get(j) == 0)));
        }
    }

    #[test]
    fn gappy_support_pairs_with_whole_support() {
        let pairs =
            dominant_strata_of_pair(&f2("x1 + x2"), &f2("x1^3 + x2^3"), FACE_ENUMERATION_LIMIT)
                .unwrap();
        let improper: Vec<_> = pairs.iter().filter(|p| p.improper).collect();
        assert_eq!(improper.len(), 1);
        let expected: BTreeSet<MultiIndex> =
            [MultiIndex::new(vec![3, 0]), MultiIndex::new(vec![0, 3])].into();
        assert_eq!(improper[0].stratum.points, expected);
    }

    #[test]
    fn single_monomial_pairs_with_every_face() {
        let pairs = dominant_strata_of_pair(&f2("x1 + x2"), &f2("x1^2 x2"), FACE_ENUMERATION_LIMIT)
            .unwrap();
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|p| p.stratum.points.len() == 1));
    }

    #[test]
    fn polya_form_is_yes_with_one() {
        let v = decide("x1 + x2", "x1^2 - x1 x2 + x2^2", 2);
        assert_eq!(v.verdict, Answer::Yes);
        assert_eq!(v.m, Some(1));
        assert_eq!(v.trace.geometry, Geometry::ClosedForm);
        assert_eq!(v.trace.checks.len(), 3);
    }

    #[test]
    fn negative_at_barycenter_is_no() {
        let v = decide("x1 + x2", "x1^2 - 3 x1 x2 + x2^2", 2);
        assert_eq!(v.verdict, Answer::No);
        match v.failing_condition.unwrap() {
            FailingCondition::A { witness, value, .. } => {
                assert_eq!(witness, vec![rat(1, 2), rat(1, 2)]);
                assert_eq!(value, rat(-1, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagonal_zero_is_no() {
        let v = decide("x1 + x2", "x1^2 - 2 x1 x2 + x2^2", 2);
        assert_eq!(v.verdict, Answer::No);
        match v.failing_condition.unwrap() {
            FailingCondition::A { witness, value, .. } => {
                assert_eq!(witness, vec![rat(1, 2), rat(1, 2)]);
                assert_eq!(value, int(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn face_failure_recurses() {
        // q restricted to x3 = 0 is (x1 - x2)^2, which no power of x1 + x2
        // can fix, though q itself is positive inside the orthant.
        let v = decide(
            "x1 + x2 + x3",
            "x1^2 - 2 x1 x2 + x2^2 + x1 x3 + x2 x3 + x3^2",
            3,
        );
        assert_eq!(v.verdict, Answer::No);
        let failing = v.failing_condition.unwrap();
        assert!(matches!(failing, FailingCondition::B { .. }));
        match failing.root() {
            FailingCondition::A { value, .. } => assert_eq!(*value, int(0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn univariate_cases() {
        let v = decide("x1^2", "-x1^3", 2);
        assert_eq!(v.verdict, Answer::No);
        assert_eq!(v.trace.geometry, Geometry::Trivial);
        let v = decide("x1^2", "3 x2", 2);
        assert_eq!((v.verdict, v.m), (Answer::Yes, Some(1)));
    }

    #[test]
    fn gappy_yes() {
        let v = decide("x1 + x2", "x1^3 + x2^3", 2);
        assert_eq!((v.verdict, v.m), (Answer::Yes, Some(1)));
        assert_eq!(v.trace.geometry, Geometry::Bounded);
    }

    #[test]
    fn rejects_negative_p() {
        assert!(matches!(
            handelman_decide(&f2("x1 - x2"), &f2("x1"), HandelmanBudget::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn verdict_serializes() {
        let v = decide("x1 + x2", "x1^2 - x1 x2 + x2^2", 2);
        let s = serde_json::to_string(&v).unwrap();
        let back: HandelmanVerdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
