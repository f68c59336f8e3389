use std::fs;
use std::process::{Command, Output};

fn nested(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nested"))
        .args(args)
        .env("NESTED_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn eq_reports_and_exits() {
    let o = nested(&["eq", "--builtin", "real_line(10)", "0.(9)", "1.(0)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Equivalent\nwitness: 0.(9) -> 1.(0)\n");

    let o = nested(&["eq", "--builtin", "gasket", "0.(1)", "2.(0)"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "NotFoundUpToDepth\n");

    let o = nested(&["eq", "--builtin", "cantor", "0.(1)", "0.(1)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Equal\n");

    let o = nested(&[
        "eq",
        "--builtin",
        "real_line(2)",
        "0.(1)",
        "1.(0)",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "Equivalent");
    assert_eq!(v["witness"], serde_json::json!(["0.(1)", "1.(0)"]));
}

#[test]
fn witness_under_context() {
    let o = nested(&["eq", "--builtin", "real_line(10)", "12.(9)", "13.(0)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Equivalent\nwitness: 12.(9) -> 13.(0)\n");
    let o = nested(&["eq", "--builtin", "gasket", "1.(1)", "10.(0)"]);
    assert_eq!(stdout(&o), "Equivalent\nwitness: 1.(1) -> 10.(0)\n");
}

#[test]
fn errors_exit_two() {
    for args in [
        &["eq", "--builtin", "gasket", "0.(3)", "1.(0)"][..],
        &["eq", "0.(1)", "1.(0)"],
        &["eq", "--builtin", "nowhere", "0.(1)", "1.(0)"],
        &[
            "eq",
            "--builtin",
            "gasket",
            "--spec",
            "x.nsp",
            "0.(1)",
            "1.(0)",
        ],
        &["class", "--builtin", "gasket", "0.(", ""],
        &["graph", "--builtin", "gasket", "--level", "20"],
        &[
            "graph",
            "--builtin",
            "gasket_compact",
            "--root",
            "1",
            "--scale",
            "1",
            "--level",
            "1",
        ],
        &["graph", "--builtin", "gasket_lattice", "--level", "2"],
        &["eq", "--builtin", "unit_interval(2)", "10.(0)", "1.(0)"],
        &[
            "eq",
            "--builtin",
            "gasket",
            "--depth",
            "0",
            "0.(1)",
            "1.(0)",
        ],
        &["parse", "/nonexistent/file.nsp"],
        &["frobnicate"],
    ] {
        let o = nested(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).contains("panicked"), "{args:?}");
    }
    let o = nested(&["graph", "--builtin", "gasket", "--level", "20"]);
    assert!(stderr(&o).contains("size limit"));
}

#[test]
fn class_impose_scale() {
    let o = nested(&["class", "--builtin", "real_line(10)", "1.(0)"]);
    assert_eq!(stdout(&o), "0.(9)\n1.(0)\n");

    let o = nested(&["impose", "--builtin", "real_line(2)", "10.(0)", "1.(0)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.split(" ~ ").any(|m| m == "11.(0)")));

    let o = nested(&[
        "impose",
        "--builtin",
        "real_line(2)",
        "10.(0)",
        "1.(0)",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["classes"].as_array().unwrap().iter().any(|c| c["members"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!("11.(0)"))));

    let o = nested(&["scale", "--builtin", "real_line(2)", "1.(0)", "--", "-2"]);
    assert_eq!(stdout(&o), "0.01(0)\n");
    let o = nested(&["scale", "--builtin", "real_line(10)", "0.(21)", "2"]);
    assert_eq!(stdout(&o), "21.(21)\n");
}

#[test]
fn eval_and_pair() {
    let o = nested(&["eval", "--builtin", "real_line(10)", "0.(9)"]);
    assert_eq!(stdout(&o), "exact: 1\napprox: 1\n");
    let o = nested(&["eval", "--builtin", "real_line(2)", "0.(01)", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "1/3");

    let o = nested(&["pair", "--builtin", "gasket", "2.0(12)"]);
    assert_eq!(stdout(&o), "(0, 20(12))\n");
    let o = nested(&["pair", "--builtin", "gasket", "--from", "3", "0010(0)"]);
    assert_eq!(stdout(&o), "10.(0)\n");
    let o = nested(&["pair", "--builtin", "gasket", "--from", "2", "120(0)"]);
    assert_eq!(stdout(&o), "120.(0)\n");
}

#[test]
fn graph_counts_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let o = nested(&[
        "graph",
        "--builtin",
        "gasket_compact",
        "--root",
        "0",
        "--level",
        "1",
        "--mode",
        "vertex",
        "--format",
        "json",
        "-o",
        p,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "nodes 6, edges 9, components 1\n");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(json["edges"].as_array().unwrap().len(), 9);
    assert_eq!(json["mode"], "vertex");
    assert_eq!(json["level"], 1);

    let csv = dir.path().join("g.csv");
    let o = nested(&[
        "graph",
        "--builtin",
        "real_line(2)",
        "--root",
        "0",
        "--level",
        "3",
        "--format",
        "csv",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "nodes 9, edges 8, components 1\n");
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.ends_with('\n'));

    let o = nested(&[
        "graph",
        "--builtin",
        "cantor",
        "--root",
        "0",
        "--level",
        "4",
        "--mode",
        "cell",
        "--format",
        "dot",
    ]);
    assert_eq!(stderr(&o), "nodes 16, edges 0, components 16\n");
    assert_eq!(stdout(&o).matches("[label=").count(), 16);
    assert!(!stdout(&o).contains("--"));
}

#[test]
fn dot_golden() {
    let o = nested(&["graph", "--builtin", "real_line(2)", "--level", "1"]);
    assert_eq!(
        stdout(&o),
        "graph level_graph {\n  v0 [label=\"0.(0)\"];\n  v1 [label=\"0.0(1)\"];\n  v2 [label=\"0.(1)\"];\n  v0 -- v1;\n  v1 -- v2;\n}\n"
    );
    let o = nested(&[
        "graph",
        "--builtin",
        "real_line(2)",
        "--level",
        "1",
        "--format",
        "graphml",
    ]);
    assert!(stdout(&o).starts_with("<?xml"));
    assert!(stdout(&o).ends_with("</graphml>\n"));
}

#[test]
fn graph_output_is_deterministic() {
    let args = [
        "graph",
        "--builtin",
        "gasket_lattice",
        "--root",
        "0",
        "--scale",
        "2",
        "--level",
        "2",
        "--format",
        "json",
    ];
    let a = nested(&args);
    let b = nested(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stderr(&a), "nodes 15, edges 27, components 1\n");
}

#[test]
fn classify_parts() {
    let o = nested(&["classify", "--builtin", "gasket"]);
    assert_eq!(stdout(&o), "0 EdgePart\n1 EdgePart\n2 EdgePart\n");
    let o = nested(&["classify", "--builtin", "real_line(10)"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.ends_with(" MiddlingPart")));
    let o = nested(&["classify", "--builtin", "cantor"]);
    assert_eq!(stdout(&o), "0 IsolatedPart\n1 IsolatedPart\n");
}

const GASKET_NSP: &str = "\
space tri {
  parts 3;   # three corners
  corner 2.(2);
  rule 1.(0) = 0.(1);
  rule 0.(2) = 2.(0);
  rule 1.(2) = 2.(1);
  corner 0.(0);
  corner 1.(1);
  restrict left 1;
}
";

#[test]
fn spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.nsp");
    fs::write(&path, GASKET_NSP).unwrap();
    let p = path.to_str().unwrap();

    let o = nested(&["parse", p]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "space tri: 3 parts, 3 rules, 3 corners\n");

    let o = nested(&["eq", "--spec", p, "0.(2)", "2.(0)"]);
    assert_eq!(code(&o), 0);
    let o = nested(&["graph", "--spec", p, "--level", "2", "--format", "csv"]);
    assert_eq!(stderr(&o), "nodes 15, edges 27, components 1\n");

    let o = nested(&["fmt", p]);
    let canonical = stdout(&o);
    assert_eq!(
        canonical,
        "space tri {\n    parts 3;\n    restrict left 1;\n    rule 0.(1) = 1.(0);\n    rule 0.(2) = 2.(0);\n    rule 1.(2) = 2.(1);\n    corner 0.(0);\n    corner 1.(1);\n    corner 2.(2);\n}\n"
    );
    assert_eq!(code(&nested(&["fmt", "--check", p])), 1);
    assert_eq!(code(&nested(&["fmt", "--write", p])), 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), canonical);
    assert_eq!(code(&nested(&["fmt", "--check", p])), 0);
}

#[test]
fn spec_file_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.nsp");
    fs::write(&path, "space bad {\n  parts 3;\n  rule 0.(3) = 1.(0);\n}\n").unwrap();
    let p = path.to_str().unwrap();
    let o = nested(&["parse", p]);
    assert_eq!(code(&o), 2);
    assert_eq!(
        stderr(&o),
        format!("{p}:3:8: error: digit 3 out of range for base 3\n")
    );

    let o = nested(&["parse", p, "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["diagnostics"][0]["kind"], "DigitOutOfRange");
    assert_eq!(v["diagnostics"][0]["line"], 3);

    let two = dir.path().join("two.nsp");
    fs::write(
        &two,
        "space a { parts 2; }\nspace b { parts 3; rule 0.(2) = 2.(0); }\n",
    )
    .unwrap();
    let t = two.to_str().unwrap();
    assert_eq!(code(&nested(&["classify", "--spec", t])), 2);
    let o = nested(&["classify", "--spec", t, "--space", "b"]);
    assert_eq!(stdout(&o), "0 EdgePart\n1 IsolatedPart\n2 EdgePart\n");
}

#[test]
fn fuzzed_argv_never_panics() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    const TOKENS: &[&str] = &[
        "eq",
        "class",
        "impose",
        "scale",
        "eval",
        "pair",
        "graph",
        "classify",
        "parse",
        "fmt",
        "--builtin",
        "gasket",
        "real_line(3)",
        "cantor",
        "naturals(2)",
        "--level",
        "--root",
        "--scale",
        "--mode",
        "cell",
        "--format",
        "csv",
        "--depth",
        "--class-cap",
        "1",
        "0",
        "-3",
        "--",
        "0.(1)",
        "1.(0)",
        "12.(",
        "z",
        "--from",
        "--json",
        "ω",
        "",
    ];
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..150 {
        let argv: Vec<&str> = (0..rng.random_range(0..8))
            .map(|_| TOKENS[rng.random_range(0..TOKENS.len())])
            .collect();
        let o = nested(&argv);
        let c = code(&o);
        assert!((0..=2).contains(&c), "{argv:?} exited {c}");
        assert!(!stderr(&o).contains("panicked"), "{argv:?}: {}", stderr(&o));
    }
}
