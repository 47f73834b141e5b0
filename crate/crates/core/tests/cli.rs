use std::process::Command;

use binomsum::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("binomsum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn diagnostic_line(err: &str) -> &str {
    err.lines()
        .rev()
        .find(|l| l.starts_with("binomsum: "))
        .expect("diagnostic line")
}

#[test]
fn eval_prints_fraction_and_valuation() {
    let (code, out, _) = call(&["eval", "f", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "5/2  nu2=-1\n");
    let (_, out, _) = call(&["eval", "f", "--n", "6"]);
    assert_eq!(out, "151/60  nu2=-2\n");
}

#[test]
fn empty_range_is_a_usage_error() {
    let (code, _, err) = call(&["verify", "conj1", "--e-min", "5", "--e-max", "4"]);
    assert_eq!(code, 2);
    assert!(diagnostic_line(&err).starts_with("binomsum: error=domain "));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        vec!["verify", "conj9"],
        vec!["verify"],
        vec!["eval", "g", "--n", "2"],
        vec!["trace", "--spec", "cyclic:1"],
        vec!["trace", "--spec", "finite:6", "--max-exponent", "99"],
        vec!["hypothesis", "--spec", "list:3,1", "--horizon", "5"],
        vec!["verify", "conj1", "--jobs", "0"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(diagnostic_line(&err).contains("error="), "{args:?}");
    }
}

#[test]
fn csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let (code, _, _) = call(&[
        "verify",
        "conj1",
        "--e-max",
        "6",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "e,k,i,nu,bound,slack,equal");
    assert_eq!(lines.len(), 1 + 126);
    assert_eq!(lines[1], "1,0,,-1,-1,0,1");
    for line in &lines[1..] {
        assert_eq!(line.trim_end(), *line);
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 7);
        assert_eq!(f[2], "");
        assert!(f[6] == "0" || f[6] == "1");
    }

    let (_, _, _) = call(&[
        "verify",
        "thm-a",
        "--e-max",
        "4",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text
        .lines()
        .skip(1)
        .all(|l| !l.split(',').nth(2).unwrap().is_empty()));

    call(&[
        "verify",
        "symm-i",
        "--e-max",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("\n2,0,,inf,0,inf,0\n"), "{text}");
}

#[test]
fn equality_only_keeps_equality_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("eq.csv");
    let (code, _, _) = call(&[
        "verify",
        "conj1",
        "--e-max",
        "8",
        "--equality-only",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let ks: Vec<(u32, u64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f[6], "1");
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    let expected: Vec<(u32, u64)> = (1..=8u32)
        .flat_map(|e| {
            [(1u64 << e).checked_sub(4), Some((1u64 << e) - 2)]
                .into_iter()
                .flatten()
                .map(move |k| (e, k))
        })
        .collect();
    assert_eq!(ks, expected);
}

#[test]
fn json_keys_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let (code, _, _) = call(&[
        "verify",
        "conj2",
        "--e-max",
        "5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&json).unwrap();
    let keys = [
        "\"check\"",
        "\"params\"",
        "\"e_min\"",
        "\"e_max\"",
        "\"engine\"",
        "\"precision\"",
        "\"jobs\"",
        "\"rows_total\"",
        "\"violations\"",
        "\"equality_cases\"",
        "\"duration_ms\"",
        "\"artifact_version\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["check"], "conj2");
    assert_eq!(v["rows_total"], 31);
    assert_eq!(v["precision"], serde_json::Value::Null);
    let eq = v["equality_cases"].as_array().unwrap();
    assert_eq!(eq.len(), 4);
    assert_eq!(eq[0]["e"], 2);
    assert_eq!(eq[0]["k"], 0);
    assert_eq!(eq[0]["i"], serde_json::Value::Null);
}

#[test]
fn violations_exit_one_and_fail_fast_keeps_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("v.json");
    let j = json.to_str().unwrap();

    let (code, _, err) = call(&[
        "verify",
        "conj2",
        "--e-max",
        "6",
        "--tighten",
        "1",
        "--json",
        j,
    ]);
    assert_eq!(code, 1);
    assert!(diagnostic_line(&err).starts_with("binomsum: violation check=conj2"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let all = v["violations"].as_array().unwrap().len();
    assert!(all > 1);

    let (code, _, err) = call(&[
        "verify",
        "conj2",
        "--e-max",
        "6",
        "--tighten",
        "1",
        "--fail-fast",
        "--json",
        j,
    ]);
    assert_eq!(code, 1);
    assert!(diagnostic_line(&err).ends_with("stopped-early"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = v["violations"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["e"], 2);

    // no violations, exit 0, empty array
    let (code, _, _) = call(&["verify", "conj2", "--e-max", "6", "--json", j]);
    assert_eq!(code, 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn exhausted_precision_exits_three() {
    let (code, _, err) = call(&[
        "verify",
        "conj1",
        "--e-max",
        "3",
        "--engine",
        "padic",
        "--precision",
        "1",
        "--max-precision",
        "1",
        "--no-exact-fallback",
    ]);
    assert_eq!(code, 3);
    assert!(diagnostic_line(&err).starts_with("binomsum: error=precision-exhausted"));

    let (code, _, _) = call(&[
        "verify",
        "conj1",
        "--e-max",
        "3",
        "--engine",
        "padic",
        "--precision",
        "1",
        "--max-precision",
        "1",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn padic_verify_matches_exact_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    call(&[
        "verify",
        "conj1",
        "--e-max",
        "7",
        "--csv",
        a.to_str().unwrap(),
    ]);
    let (code, _, _) = call(&[
        "verify",
        "conj1",
        "--e-max",
        "7",
        "--engine",
        "padic",
        "--precision",
        "16",
        "--csv",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn trace_and_hypothesis() {
    let (code, out, _) = call(&["trace", "--spec", "finite:6", "--max-exponent", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "i,e_i,x_prev,step_val,conj1_bound,conj2_bound,distance,excess"
    );
    assert_eq!(lines[1], "1,1,0,-1,-1,,2,1");
    assert_eq!(lines[2], "2,2,2,-2,-2,,4,0");
    assert!(lines[3].starts_with("cauchy: label=converging-evidence"));

    let (code, out, _) = call(&[
        "hypothesis",
        "--spec",
        "affine:e1=0,a=3,b=1",
        "--horizon",
        "100",
        "--which",
        "cor2",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("cor2: verdict=consistent "));
    let (_, out, _) = call(&[
        "hypothesis",
        "--spec",
        "periodic:pre=,block=1",
        "--horizon",
        "40",
    ]);
    assert!(out.starts_with("cor1: verdict=inconsistent "));
}

#[test]
fn binary_reads_precision_from_environment() {
    let bin = env!("CARGO_BIN_EXE_binomsum");
    let run = |extra: &[&str]| {
        Command::new(bin)
            .args(["eval", "f", "--n", "3", "--engine", "padic"])
            .args(extra)
            .env("BINOMSUM_PRECISION", "8")
            .output()
            .unwrap()
    };
    let o = run(&[]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8_lossy(&o.stdout),
        "2^3 * 171 + O(2^11)  nu2=3\n"
    );
    let o = run(&["--precision", "4"]);
    assert_eq!(
        String::from_utf8_lossy(&o.stdout),
        "2^3 * 11 + O(2^7)  nu2=3\n"
    );

    let o = Command::new(bin)
        .args(["verify", "conj1", "--e-min", "5", "--e-max", "4"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
}
