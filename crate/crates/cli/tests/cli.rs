use std::path::PathBuf;
use std::process::Command;

use curveter_cli::{run, CommandResult, MAX_CANDIDATES_ENV};
use curveter_core::wire::{
    CertificateWire, ConnectFailureWire, DecompositionWire, EnumerationWire, ReportWire,
    SmoothCheckWire,
};
use curveter_core::{
    check_counting_identity, FieldSpec, SingularityRecord, DEFAULT_MAX_CANDIDATES,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

fn cli(args: &[&str]) -> CommandResult {
    run(args.iter().copied())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "docs",
        "schemas",
        name,
    ]
    .iter()
    .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(doc: &str, schema_name: &str) {
    let value: Value = serde_json::from_str(doc).unwrap();
    let v = schema(schema_name);
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{doc}");
}

/// Parses into the wire type and serializes back to the identical text.
fn assert_roundtrip<T: Serialize + DeserializeOwned>(doc: &str) -> T {
    let parsed: T = serde_json::from_str(doc).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap() + "\n", doc);
    parsed
}

#[test]
fn tacnode_invariants() {
    let r = cli(&[
        "invariants",
        "--char",
        "0",
        "--cond",
        "2,2",
        "--gens",
        "(t1, t2)",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert_eq!(
        r.stdout,
        "{\"m\":2,\"conductances\":[2,2],\"delta\":2,\"genus\":1,\"local\":true}\n"
    );
    assert_valid(&r.stdout, "invariants.schema.json");
    assert_roundtrip::<SingularityRecord>(&r.stdout);
}

#[test]
fn invariants_of_partition_points() {
    let r = cli(&[
        "invariants",
        "--char",
        "2",
        "--cond",
        "3,2",
        "--plus",
        "--n",
        "2,2",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    let rec: SingularityRecord = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(
        (rec.delta, rec.genus, rec.conductances),
        (3, Some(2), vec![2, 2])
    );

    let r = cli(&[
        "invariants",
        "--char",
        "2",
        "--cond",
        "2,2",
        "--plus",
        "--genus",
        "1",
    ]);
    let rec: SingularityRecord = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(rec.conductances, vec![2, 1]);

    let r = cli(&[
        "invariants",
        "--char",
        "2",
        "--cond",
        "2,2",
        "--plus",
        "--genus",
        "3",
    ]);
    assert_eq!(r.exit_code, 1);
}

#[test]
fn non_local_point_has_null_genus() {
    let r = cli(&[
        "invariants",
        "--char",
        "0",
        "--cond",
        "1,1",
        "--gens",
        "(1, 0)",
    ]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stdout.contains("\"genus\":null"), "{}", r.stdout);
    assert_valid(&r.stdout, "invariants.schema.json");
}

#[test]
fn projective_line_of_tacnodes() {
    let r = cli(&[
        "enumerate",
        "--char",
        "2",
        "--cond",
        "2,2",
        "--plus",
        "--corank",
        "1",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("{\"algebra\""));
    assert_valid(&r.stdout, "enumeration.schema.json");
    let e: EnumerationWire = assert_roundtrip(&r.stdout);
    assert_eq!(e.total, 3);
    for p in &e.points {
        assert_eq!(p.to_subalgebra().unwrap().corank(), 1);
    }
}

#[test]
fn enumeration_of_full_algebra_reports_components() {
    let r = cli(&[
        "enumerate",
        "--char",
        "2",
        "--cond",
        "2,2",
        "--corank",
        "2",
        "--pretty",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert_valid(&r.stdout, "enumeration.schema.json");
    let e: EnumerationWire = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(e.total, 4);
    assert!(e.identity_holds);
    assert_eq!(e.components.iter().map(|c| c.count).sum::<usize>(), 4);
}

#[test]
fn report_document_matches_schema() {
    let report =
        check_counting_identity(FieldSpec::prime(3), &[2, 2], 1, DEFAULT_MAX_CANDIDATES).unwrap();
    let doc = serde_json::to_string(&ReportWire::from_report(&report)).unwrap() + "\n";
    assert_valid(&doc, "report.schema.json");
    assert_roundtrip::<ReportWire>(&doc);
}

#[test]
fn tacnode_connects_in_one_pencil() {
    let r = cli(&[
        "connect", "--char", "0", "--cond", "2,2", "--plus", "--gens", "(t1, t2)",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert_valid(&r.stdout, "certificate.schema.json");
    let w: CertificateWire = assert_roundtrip(&r.stdout);
    assert_eq!(w.pencils.len(), 1);
    let cert = w.to_certificate().unwrap();
    cert.verify().unwrap();
    assert_eq!(
        cert.end,
        curveter_core::make_partition_singularity(FieldSpec::rationals(), &[1, 2], &[2, 2])
            .unwrap()
    );
}

#[test]
fn connect_with_custom_weights() {
    let r = cli(&[
        "connect",
        "--char",
        "3",
        "--cond",
        "3,2",
        "--plus",
        "--gens",
        "(t1 + t1^2, t2)",
        "--weights",
        "2,1",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    let w: CertificateWire = serde_json::from_str(&r.stdout).unwrap();
    w.to_certificate().unwrap().verify().unwrap();
    let r = cli(&[
        "connect",
        "--char",
        "3",
        "--cond",
        "3,2",
        "--plus",
        "--weights",
        "1",
    ]);
    assert_eq!(r.exit_code, 2);
}

#[test]
fn decomposition_of_node_and_cusp() {
    let r = cli(&[
        "decompose",
        "--char",
        "0",
        "--cond",
        "1,1,2",
        "--gens",
        "(1, 1, 0)",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert_valid(&r.stdout, "decomposition.schema.json");
    let w: DecompositionWire = assert_roundtrip(&r.stdout);
    assert_eq!(w.index.partition, vec![vec![1, 2], vec![3]]);
    assert_eq!(w.index.delta, 2);
    let point = w.to_point().unwrap();
    assert_eq!(point.index.genus, vec![0, 1]);
}

#[test]
fn smoothing_checks() {
    let r = cli(&[
        "smooth-check",
        "--char",
        "0",
        "--n",
        "2",
        "--x",
        "0,1",
        "--trunc",
        "1,1",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert_valid(&r.stdout, "smooth-check.schema.json");
    let w: SmoothCheckWire = assert_roundtrip(&r.stdout);
    assert!(w.flat);
    assert_eq!(w.fiber_coranks, vec![1; 4]);
    assert_eq!(w.germ_record.genus, Some(0));

    let r = cli(&["smooth-check", "--char", "0", "--n", "2,1", "--x", "0,0;0"]);
    let w: SmoothCheckWire = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(w.germ_record.genus, Some(1));
    assert_eq!(w.germ_record.conductances, vec![2, 1]);

    let r = cli(&[
        "smooth-check",
        "--char",
        "5",
        "--n",
        "3",
        "--x",
        "0,0,1",
        "--trunc",
        "1,1",
    ]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("raise the truncation"));
}

#[test]
fn seeded_output_is_byte_identical() {
    for args in [
        &["smooth-check", "--char", "5", "--n", "2,2", "--seed", "17"][..],
        &[
            "smooth-check",
            "--char",
            "0",
            "--n",
            "3",
            "--seed",
            "4",
            "--distinct",
        ][..],
        &["enumerate", "--char", "3", "--cond", "2,1", "--corank", "1"][..],
        &[
            "connect", "--char", "2", "--cond", "5", "--plus", "--gens", "(t1^2)",
        ][..],
    ] {
        let a = cli(args);
        let b = cli(args);
        assert_eq!(a.exit_code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a, b);
    }
    let a = cli(&["smooth-check", "--char", "101", "--n", "3", "--seed", "1"]);
    let b = cli(&["smooth-check", "--char", "101", "--n", "3", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (
            &["invariants", "--char", "0", "--cond", "2", "--gens", "(t1)"],
            0,
        ),
        (
            &[
                "enumerate",
                "--char",
                "2",
                "--cond",
                "1,1",
                "--plus",
                "--corank",
                "1",
            ],
            1,
        ),
        (
            &[
                "invariants",
                "--char",
                "2",
                "--cond",
                "2",
                "--plus",
                "--genus",
                "2",
            ],
            1,
        ),
        (&["frobnicate"], 2),
        (&["invariants", "--char", "0", "--cond", "2", "--bogus"], 2),
        (&["invariants", "--char", "4", "--cond", "2"], 2),
        (
            &[
                "invariants",
                "--char",
                "0",
                "--cond",
                "2,2",
                "--gens",
                "(t1)",
            ],
            2,
        ),
        (
            &[
                "invariants",
                "--char",
                "0",
                "--cond",
                "2,2",
                "--gens",
                "(t1 +, t2)",
            ],
            2,
        ),
        (
            &[
                "invariants",
                "--char",
                "0",
                "--cond",
                "1,1",
                "--plus",
                "--gens",
                "(1, 2)",
            ],
            2,
        ),
        (
            &["enumerate", "--char", "0", "--cond", "2", "--corank", "1"],
            2,
        ),
        (
            &[
                "enumerate",
                "--char",
                "2",
                "--cond",
                "3,3",
                "--corank",
                "2",
                "--max-candidates",
                "10",
            ],
            2,
        ),
        (&["decompose", "--char", "2", "--cond", "2", "--plus"], 2),
        (&["connect", "--char", "2", "--cond", "2"], 2),
        (
            &["smooth-check", "--char", "5", "--n", "2", "--cut", "1"],
            2,
        ),
        (
            &["smooth-check", "--char", "2", "--n", "3", "--distinct"],
            2,
        ),
    ];
    for (args, code) in cases {
        let r = cli(args);
        assert_eq!(
            r.exit_code, *code,
            "{args:?}\nstdout: {}\nstderr: {}",
            r.stdout, r.stderr
        );
        if *code == 2 {
            assert!(r.stdout.is_empty());
            assert!(!r.stderr.is_empty());
        }
    }
}

#[test]
fn failures_still_emit_documents() {
    let r = cli(&[
        "enumerate",
        "--char",
        "2",
        "--cond",
        "1,1",
        "--plus",
        "--corank",
        "1",
    ]);
    assert_eq!(r.exit_code, 1);
    assert_valid(&r.stdout, "enumeration.schema.json");
    assert!(r.stderr.contains("empty"));
    // schema of the failure document for connect, checked on a hand-built instance
    let doc = serde_json::to_string(&ConnectFailureWire {
        reason: "example".into(),
        visited: vec![],
    })
    .unwrap()
        + "\n";
    assert_valid(&doc, "connect-failure.schema.json");
}

#[test]
fn truncation_note_goes_to_stderr() {
    let r = cli(&[
        "invariants",
        "--char",
        "0",
        "--cond",
        "2,2",
        "--plus",
        "--gens",
        "(1 + t1^2, 1)",
    ]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stderr.contains("dropped t1^2"));
    assert!(!r.stdout.contains("dropped"));
}

#[test]
fn help_is_not_an_error() {
    let r = cli(&["--help"]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stdout.contains("enumerate"));
}

#[test]
fn binary_honours_work_bound_precedence() {
    let bin = env!("CARGO_BIN_EXE_curveter");
    let args = ["enumerate", "--char", "2", "--cond", "2,2", "--corank", "1"];
    let out = Command::new(bin)
        .args(args)
        .env(MAX_CANDIDATES_ENV, "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("work bound 2"));

    let out = Command::new(bin)
        .args(args)
        .args(["--max-candidates", "1000"])
        .env(MAX_CANDIDATES_ENV, "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(bin)
        .args(args)
        .env_remove(MAX_CANDIDATES_ENV)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let direct = cli(&args);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), direct.stdout);
}
