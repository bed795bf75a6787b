use std::path::PathBuf;
use std::process::Command;

use posicert_cli::{CertificateDocument, Outcome, EXIT_INPUT};
use posicert_core::positivity::CertifyOutcome;

/// (golden name, arguments, expected exit code)
const CASES: &[(&str, &[&str], i32)] = &[
    (
        "polya_three",
        &["polya", "-n", "2", "-q", "x1^2 - x1 x2 + x2^2"],
        0,
    ),
    (
        "polya_diagonal",
        &["polya", "-n", "2", "-q", "x1^2 - 2 x1 x2 + x2^2"],
        1,
    ),
    (
        "polya_small_budget",
        &[
            "polya",
            "-n",
            "2",
            "-q",
            "x1^2 - x1 x2 + x2^2",
            "--n-max",
            "2",
            "--grid-depth",
            "2",
        ],
        2,
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
        0,
    ),
    (
        "certify_diagonal",
        &[
            "certify",
            "-n",
            "2",
            "-p",
            "x1 + x2",
            "-q",
            "x1^2 - 2 x1 x2 + x2^2",
        ],
        1,
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
        0,
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
        0,
    ),
    (
        "power_nonneg",
        &[
            "power",
            "-n",
            "2",
            "-p",
            "x1 + x2",
            "-q",
            "x1^2 - x1 x2 + x2^2",
        ],
        0,
    ),
    (
        "power_never",
        &[
            "power",
            "-n",
            "2",
            "-p",
            "x1 + x2",
            "-q",
            "x1^2 - 2 x1 x2 + x2^2",
        ],
        1,
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
        0,
    ),
    (
        "handelman_no",
        &[
            "handelman",
            "-n",
            "2",
            "-p",
            "x1 + x2",
            "-q",
            "x1^2 - 3 x1 x2 + x2^2",
        ],
        1,
    ),
    ("faces_gappy", &["faces", "-n", "2", "-p", "x1^2 + x2^2"], 0),
    (
        "faces_simplex",
        &["faces", "-n", "3", "-p", "x1 + x2 + x3"],
        0,
    ),
    (
        "strata_gappy",
        &["strata", "-n", "2", "-p", "x1 + x2", "-q", "x1^3 + x2^3"],
        0,
    ),
    (
        "strata_simplex",
        &[
            "strata",
            "-n",
            "2",
            "-p",
            "x1 + x2",
            "-q",
            "x1^2 + x1 x2 + x2^2",
        ],
        0,
    ),
    (
        "expand_cube",
        &["expand", "-n", "2", "-p", "x1 - x2", "-m", "3"],
        0,
    ),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_posicert"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8"),
        String::from_utf8(out.stderr).expect("utf8"),
    )
}

fn canonical(stdout: &str) -> String {
    let doc: CertificateDocument = serde_json::from_str(stdout).expect("one JSON document");
    doc.canonical().to_json() + "\n"
}

#[test]
fn goldens_match() {
    let bless = std::env::var_os("POSICERT_BLESS").is_some();
    for (name, args, code) in CASES {
        let (got, stdout, stderr) = run(args);
        assert_eq!(got, *code, "{name}: exit code, stderr: {stderr}");
        let text = canonical(&stdout);
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else {
            let want = std::fs::read_to_string(&path)
                .unwrap_or_else(|_| panic!("missing golden {}", path.display()));
            assert_eq!(text, want, "{name}: output differs from golden");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    for (name, args, _) in CASES.iter().take(6) {
        let a = canonical(&run(args).1);
        let b = canonical(&run(args).1);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn documents_round_trip_byte_for_byte() {
    for (name, args, _) in CASES {
        let (_, stdout, _) = run(args);
        let doc: CertificateDocument = serde_json::from_str(&stdout).unwrap();
        assert_eq!(doc.to_json() + "\n", stdout, "{name}");
    }
}

#[test]
fn certified_runs_reverify() {
    let (code, stdout, _) = run(CASES[3].1);
    assert_eq!(code, 0);
    let doc: CertificateDocument = serde_json::from_str(&stdout).unwrap();
    match doc.outcome {
        Outcome::Certify(CertifyOutcome::Certified { certificate }) => {
            assert_eq!((certificate.s, certificate.m0), (1, 3));
            certificate.verify().unwrap();
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn input_errors_exit_three() {
    for args in [
        &["polya", "-n", "2", "-q", "x1^2 + x3^2"][..],
        &["polya", "-n", "2", "-q", "x1^2 + x2"],
        &["polya", "-n", "2", "-q", "(x1 + x2)^2"],
        &["polya", "-n", "2"],
        &["certify", "-n", "2", "-p", "x1", "-q", "0"],
        &["handelman", "-n", "2", "-p", "x1 - x2", "-q", "x1"],
        &["frobnicate"],
    ] {
        let (code, stdout, stderr) = run(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(stdout.is_empty(), "{args:?}");
        assert!(!stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let path_str = path.to_str().unwrap();
    let (code, stdout, _) = run(&[
        "polya",
        "-n",
        "2",
        "-q",
        "x1^2 - x1 x2 + x2^2",
        "--output",
        path_str,
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}
