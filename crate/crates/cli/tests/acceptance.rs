//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use posicert_cli::{CertificateDocument, Outcome};
use posicert_core::form::{rat, Form, MultiIndex, Rational};
use posicert_core::handelman::{handelman_decide, Answer, FailingCondition, HandelmanBudget};
use posicert_core::newton::{
    dilated_simplex, enumerate_relative_faces, simplex_faces, NewtonDiagram,
};
use posicert_core::positivity::{
    certify_eventual_positivity, check_theorem_conditions, find_power_exponent, orthant_positivity,
    positive_split, CertifyBudget, CertifyOutcome, CoefficientMode, PolyaBudget, PowerSearch,
    RefutationReason, RefutedInput, Verdict,
};
use posicert_core::strata::{
    closed_form_strata, enumerate_strata_bounded, is_violation, Dominance, StratumBounds,
};
use posicert_core::verify::{check_nonpositive_point, check_power, DenseForm};
use posicert_core::{parse, Result};

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn form(text: &str, n: usize) -> Form {
    parse(text, n).expect("fixture parses")
}

fn criterion_1() -> Check {
    let f = form("x1 + x2", 2);
    let q = form("x1^2 - x1 x2 + x2^2", 2);
    let nonneg = ok(find_power_exponent(
        &f,
        &q,
        CoefficientMode::Nonnegative,
        200,
    ))?;
    ensure(
        nonneg.outcome == PowerSearch::Found { m: 1 },
        "nonnegative exponent is not 1",
    )?;
    let strict = ok(find_power_exponent(&f, &q, CoefficientMode::Strict, 200))?;
    ensure(
        strict.outcome == PowerSearch::Found { m: 3 },
        "strict exponent is not 3",
    )?;
    // Dense expansion: (x+y)q = x^3 + y^3, so 1 and 2 fail strictly and 3 passes.
    check_power(&f, &q, 1, false).map_err(|e| e.to_string())?;
    for m in 1..=2 {
        ensure(
            check_power(&f, &q, m, true).is_err(),
            format!("m = {m} is strict by expansion"),
        )?;
    }
    check_power(&f, &q, 3, true).map_err(|e| e.to_string())
}

fn negative_middle(lambda_hat: Rational) -> Form {
    let mid = Form::monomial(MultiIndex::new(vec![2, 2]), -lambda_hat);
    form("x1^4 + 4 x1^3 x2 + 4 x1 x2^3 + x2^4", 2)
        .add(&mid)
        .unwrap()
}

fn criterion_2() -> Check {
    // Least strictly positive power, computed by hand from the coefficient
    // vector (1, 4, -lambda_hat, 4, 1).
    for (lambda_hat, s_oracle) in [(rat(1, 5), 2u32), (rat(1, 1), 4u32)] {
        let p = negative_middle(lambda_hat.clone());
        ensure(
            !p.has_strictly_positive_coefficients(),
            "p is strictly positive",
        )?;
        let at_ones = ok(p.eval(&[rat(1, 1), rat(1, 1)]))?;
        ensure(
            at_ones == rat(10, 1) - &lambda_hat,
            "p(1,1) differs from 16 - lambda",
        )?;
        ensure(at_ones > rat(0, 1), "p(1,1) is not positive")?;

        let cond = ok(check_theorem_conditions(&p, 200))?;
        let s = cond.least_m.ok_or("no strictly positive power up to 200")?;
        ensure(s == s_oracle, format!("s = {s}, expected {s_oracle}"))?;
        let one = Form::constant(2, rat(1, 1));
        check_power(&p, &one, s, true).map_err(|e| e.to_string())?;
        for m in 1..s {
            ensure(
                check_power(&p, &one, m, true).is_err(),
                format!("p^{m} is already strict"),
            )?;
        }

        let q = form("x1^2 + x1 x2 + x2^2", 2);
        match ok(certify_eventual_positivity(
            &p,
            &q,
            CertifyBudget::default(),
        ))? {
            CertifyOutcome::Certified { certificate } => {
                ensure(certificate.s == s, "certificate s disagrees")?;
                certificate.verify().map_err(|e| e.to_string())?;
                certificate
                    .spot_check(3 * certificate.s)
                    .map_err(|e| e.to_string())?;
            }
            other => return Err(format!("no certificate: {other:?}")),
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    for n in 2..=3usize {
        for d in 1..=3u32 {
            for e in 1..=4u32 {
                let ambient = NewtonDiagram::dilated_simplex(n, e);
                let logp = NewtonDiagram::dilated_simplex(n, d);
                for sf in simplex_faces(n, d) {
                    if sf.zeroed.len() == n {
                        continue;
                    }
                    let ctx = format!("n={n} d={d} e={e} J={:?}", sf.zeroed);
                    let closed: BTreeSet<(Vec<MultiIndex>, Dominance)> =
                        ok(closed_form_strata(n, d, e, &sf.zeroed))?
                            .into_iter()
                            .map(|s| (s.stratum.points.into_iter().collect(), s.stratum.dominance))
                            .collect();
                    let bounds = StratumBounds::default_for(d, e);
                    let bounded = ok(enumerate_strata_bounded(
                        &ambient,
                        &logp,
                        &sf.face.points,
                        bounds,
                    ))?;
                    for s in &bounded {
                        if s.dominance == Dominance::No {
                            let v = s.violation.as_ref().ok_or(format!("{ctx}: no violation"))?;
                            ensure(
                                is_violation(&s.points, &ambient, &logp, &sf.face.points, v),
                                format!("{ctx}: violation does not re-check"),
                            )?;
                        }
                    }
                    let bounded: BTreeSet<(Vec<MultiIndex>, Dominance)> = bounded
                        .into_iter()
                        .map(|s| (s.points.into_iter().collect(), s.dominance))
                        .collect();
                    ensure(closed == bounded, format!("{ctx}: strata differ"))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    for n in 2..=3usize {
        for d in 1..=4u32 {
            let diagram = NewtonDiagram::dilated_simplex(n, d);
            let faces = ok(enumerate_relative_faces(&diagram))?;
            let found: BTreeSet<BTreeSet<MultiIndex>> =
                faces.iter().map(|f| f.points.clone()).collect();
            let expected: BTreeSet<BTreeSet<MultiIndex>> = simplex_faces(n, d)
                .into_iter()
                .map(|f| f.face.points)
                .collect();
            ensure(found == expected, format!("n={n} d={d}: faces differ"))?;
            ensure(found.len() == faces.len(), "duplicate faces")?;
            for f in &faces {
                let w = f.witness.as_ref().ok_or("face without witness")?;
                ensure(
                    w.certifies(diagram.points(), &f.points),
                    format!("n={n} d={d}: witness fails for {:?}", f.points),
                )?;
            }
        }
    }
    Ok(())
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, d: u32, lo: i64, hi: i64) -> Form {
    let terms: Vec<(MultiIndex, Rational)> = dilated_simplex(n, d)
        .into_iter()
        .map(|w| (w, rat(rng.gen_range(lo..=hi), rng.gen_range(1..=3))))
        .collect();
    Form::from_terms(n, d, terms).unwrap()
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let quick = PolyaBudget {
        n_max: 16,
        grid_depth: 2,
    };
    let mut pairs = 0;
    while pairs < 50 {
        let n = rng.gen_range(1..=3);
        let deg = rng.gen_range(1..=4);
        let g = random_form(&mut rng, n, deg, -2, 5);
        if g.is_zero() || !ok(orthant_positivity(&g, quick))?.is_certified() {
            continue;
        }
        let deg = rng.gen_range(1..=2);
        let f = random_form(&mut rng, n, deg, 1, 4);
        let split = ok(positive_split(&g, PolyaBudget::default()))?;
        let v = ok(handelman_decide(&f, &split.h, HandelmanBudget::default()))?;
        let ctx = format!("f = {f}, h = {}", split.h);
        ensure(
            v.verdict == Answer::Yes,
            format!("{ctx}: verdict {:?}", v.verdict),
        )?;
        let m = v.m.ok_or(format!("{ctx}: yes without m"))?;
        check_power(&f, &split.h, m, false).map_err(|e| format!("{ctx}: {e}"))?;
        pairs += 1;
    }

    let p = form("x1 + x2", 2);
    for (q, value) in [
        ("x1^2 - 3 x1 x2 + x2^2", rat(-1, 4)),
        ("x1^2 - 2 x1 x2 + x2^2", rat(0, 1)),
    ] {
        let q = form(q, 2);
        let v = ok(handelman_decide(&p, &q, HandelmanBudget::default()))?;
        ensure(
            v.verdict == Answer::No,
            format!("{q}: verdict {:?}", v.verdict),
        )?;
        match v.failing_condition.as_ref().map(FailingCondition::root) {
            Some(FailingCondition::A {
                q_e,
                witness,
                value: got,
                ..
            }) => {
                ensure(
                    witness == &vec![rat(1, 2), rat(1, 2)],
                    format!("{q}: witness {witness:?}"),
                )?;
                ensure(got == &value, format!("{q}: value {got}"))?;
                check_nonpositive_point(q_e, witness, true).map_err(|e| e.to_string())?;
            }
            other => return Err(format!("{q}: failing condition {other:?}")),
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let p = form("x1 + x2", 2);
    let q = form("x1^2 - 2 x1 x2 + x2^2", 2);
    match ok(certify_eventual_positivity(
        &p,
        &q,
        CertifyBudget::default(),
    ))? {
        CertifyOutcome::Refuted {
            input: RefutedInput::Q,
            refutation,
            definitive: true,
        } => {
            ensure(
                refutation.reason == RefutationReason::NonpositiveAtBarycenter,
                "not the evaluation shortcut",
            )?;
            ensure(
                refutation.point == vec![rat(1, 2), rat(1, 2)],
                "witness is not (1/2, 1/2)",
            )?;
            ensure(refutation.value == rat(0, 1), "witness value is not 0")?;
            check_nonpositive_point(&q, &refutation.point, false).map_err(|e| e.to_string())?;
        }
        other => return Err(format!("expected definitive refutation, got {other:?}")),
    }
    let cond = ok(check_theorem_conditions(&form("x1 - x2", 2), 200))?;
    ensure(
        cond.least_m.is_none() && cond.cond_a.is_none() && cond.cond_b.is_none(),
        "x1 - x2 has a condition",
    )?;
    let r = cond.refutation.ok_or("x1 - x2 is not refuted")?;
    ensure(r.value == rat(0, 1), "refutation value is not 0")?;
    ensure(
        cond.searched_up_to == 0,
        "search ran although it is provably never",
    )
}

fn any_form(rng: &mut ChaCha8Rng, n: usize, d: u32) -> Form {
    let mut terms = Vec::new();
    for w in dilated_simplex(n, d) {
        if rng.gen_bool(0.7) {
            terms.push((w, rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))));
        }
    }
    Form::from_terms(n, d, terms).unwrap()
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(0..=3);
        let (a, b, c) = (
            any_form(&mut rng, n, d),
            any_form(&mut rng, n, d),
            any_form(&mut rng, n, d),
        );
        let ctx = format!("case {case}: a = {a}, b = {b}, c = {c}");
        let add = |x: &Form, y: &Form| x.add(y).unwrap();
        let mul = |x: &Form, y: &Form| x.mul(y).unwrap();
        ensure(add(&a, &b) == add(&b, &a), format!("{ctx}: + commutes"))?;
        ensure(
            add(&add(&a, &b), &c) == add(&a, &add(&b, &c)),
            format!("{ctx}: + associates"),
        )?;
        ensure(mul(&a, &b) == mul(&b, &a), format!("{ctx}: * commutes"))?;
        ensure(
            mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)),
            format!("{ctx}: * associates"),
        )?;
        ensure(
            mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c)),
            format!("{ctx}: distributes"),
        )?;
        ensure(a.sub(&a).unwrap().is_zero(), format!("{ctx}: a - a"))?;
        ensure(
            DenseForm::from_form(&mul(&a, &b)).unwrap()
                == posicert_core::verify::expand_power_times(&a, 1, &b).unwrap(),
            format!("{ctx}: sparse and dense products differ"),
        )?;

        let (i, j) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        ensure(
            mul(&a.pow(i).unwrap(), &a.pow(j).unwrap()) == a.pow(i + j).unwrap(),
            format!("{ctx}: a^{i} a^{j}"),
        )?;

        let deg = rng.gen_range(0..=3);
        let f = random_form(&mut rng, n, deg, 1, 9);
        let deg = rng.gen_range(0..=3);
        let g = random_form(&mut rng, n, deg, 1, 9);
        ensure(
            mul(&f, &g).has_strictly_positive_coefficients(),
            format!("{ctx}: strict product"),
        )?;

        let mut perm: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            perm.swap(k, rng.gen_range(0..=k));
        }
        ensure(
            mul(&a, &b).permute_variables(&perm)
                == mul(&a.permute_variables(&perm), &b.permute_variables(&perm)),
            format!("{ctx}: permutation {perm:?}"),
        )?;
        ensure(
            a.has_strictly_positive_coefficients()
                == a.permute_variables(&perm)
                    .has_strictly_positive_coefficients(),
            format!("{ctx}: permuted positivity"),
        )?;

        let text = a.to_string();
        let back = parse(&text, n).map_err(|e| format!("{ctx}: {e}"))?;
        ensure(back.to_string() == text, format!("{ctx}: print round trip"))?;
        ensure(a.is_zero() || back == a, format!("{ctx}: parse round trip"))?;
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> std::result::Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_posicert"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by a signal")?;
    Ok((
        code,
        String::from_utf8(out.stdout).map_err(|e| e.to_string())?,
    ))
}

/// Re-checks an exit-0 document without going through the CLI's own check.
fn reverify(doc: &CertificateDocument) -> Check {
    let read = |t: &Option<String>| parse(t.as_deref().unwrap_or("0"), doc.inputs.nvars);
    let p = read(&doc.inputs.p).map_err(|e| e.to_string())?;
    let q = read(&doc.inputs.q).map_err(|e| e.to_string())?;
    let e = |e: posicert_core::verify::VerificationError| e.to_string();
    match &doc.outcome {
        Outcome::Polya(o) => {
            ensure(
                o.verdict == Verdict::CertifiedPositive,
                "exit 0 without certificate",
            )?;
            posicert_core::verify::check_polya(&q, o.polya_exponent.ok_or("no exponent")?)
                .map_err(e)
        }
        Outcome::Certify(CertifyOutcome::Certified { certificate }) => {
            ensure(
                certificate.p == p && certificate.q == q,
                "certificate for other forms",
            )?;
            certificate.verify().map_err(e)
        }
        Outcome::Power(PowerSearch::Found { m }) => {
            let strict = doc.inputs.mode == Some(CoefficientMode::Strict);
            check_power(&p, &q, *m, strict).map_err(e)
        }
        Outcome::Handelman(v) => {
            ensure(v.verdict == Answer::Yes, "exit 0 without yes")?;
            check_power(&p, &q, v.m.ok_or("no m")?, false).map_err(e)
        }
        Outcome::Faces(f) => {
            let support = p.support_points();
            for face in &f.faces {
                let w = face.witness.as_ref().ok_or("face without witness")?;
                ensure(w.certifies(&support, &face.points), "witness fails")?;
            }
            Ok(())
        }
        other => Err(format!("unexpected exit-0 outcome {other:?}")),
    }
}

fn criterion_8() -> Check {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: &[(&str, &[&str])] = &[
        (
            "polya_three",
            &["polya", "-n", "2", "-q", "x1^2 - x1 x2 + x2^2"],
        ),
        (
            "certify_linear",
            &[
                "certify",
                "-n",
                "2",
                "-p",
                "x1 + x2",
                "-q",
                "x1^2 - x1 x2 + x2^2",
            ],
        ),
        (
            "certify_negative_middle",
            &[
                "certify",
                "-n",
                "2",
                "-p",
                "x1^4 + 4 x1^3 x2 - 1/5 x1^2 x2^2 + 4 x1 x2^3 + x2^4",
                "-q",
                "x1^2 + x1 x2 + x2^2",
            ],
        ),
        (
            "power_strict",
            &[
                "power",
                "-n",
                "2",
                "-p",
                "x1 + x2",
                "-q",
                "x1^2 - x1 x2 + x2^2",
                "--mode",
                "strict",
            ],
        ),
        (
            "handelman_yes",
            &[
                "handelman",
                "-n",
                "2",
                "-p",
                "x1 + x2",
                "-q",
                "x1^2 - x1 x2 + x2^2",
            ],
        ),
        ("faces_simplex", &["faces", "-n", "3", "-p", "x1 + x2 + x3"]),
        (
            "polya_diagonal",
            &["polya", "-n", "2", "-q", "x1^2 - 2 x1 x2 + x2^2"],
        ),
    ];
    for (name, args) in cases {
        let mut texts = Vec::new();
        for _ in 0..2 {
            let (code, stdout) = run_cli(args)?;
            let doc: CertificateDocument =
                serde_json::from_str(&stdout).map_err(|e| format!("{name}: {e}"))?;
            if code == 0 {
                reverify(&doc).map_err(|e| format!("{name}: {e}"))?;
            }
            texts.push(doc.canonical().to_json() + "\n");
        }
        ensure(texts[0] == texts[1], format!("{name}: runs differ"))?;
        let want = std::fs::read_to_string(golden.join(format!("{name}.json")))
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(texts[0] == want, format!("{name}: differs from golden"))?;
    }
    Ok(())
}

type Criterion = (u32, &'static str, fn() -> Check, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            1,
            "Pólya fixture: exponents 1 (nonnegative) and 3 (strict)",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            2,
            "negative middle coefficient: s, certificate, spot checks",
            criterion_2,
            Duration::from_secs(60),
        ),
        (
            3,
            "bounded strata agree with the closed form",
            criterion_3,
            Duration::from_secs(30),
        ),
        (
            4,
            "face enumeration agrees with the simplex faces",
            criterion_4,
            Duration::from_secs(10),
        ),
        (
            5,
            "Handelman consistency on split pairs and refutations",
            criterion_5,
            Duration::from_secs(120),
        ),
        (
            6,
            "negative controls refute definitively",
            criterion_6,
            Duration::from_secs(1),
        ),
        (
            7,
            "algebraic properties on 200 random cases",
            criterion_7,
            Duration::from_secs(30),
        ),
        (
            8,
            "CLI certificates re-verify and match goldens",
            criterion_8,
            Duration::from_secs(120),
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(
                elapsed <= limit,
                format!("took {elapsed:.2?}, limit {limit:?}"),
            )
        });
        match result {
            Ok(()) => println!("criterion {id} PASS {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
