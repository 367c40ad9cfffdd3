use multifact::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("multifact").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compute_default_method() {
    assert_eq!(call(&["compute", "f", "36"]), (EXIT_OK, "9\n".into(), String::new()));
    assert_eq!(call(&["compute", "h_l", "36", "--l", "2"]).1, "6\n");
    assert_eq!(call(&["compute", "bell", "10"]).1, "115975\n");
}

#[test]
fn compute_power_product() {
    let (code, a, _) = call(&["compute", "g", "2^3*3^2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(a, call(&["compute", "g", "72"]).1);
}

#[test]
fn compute_all_methods_text() {
    let (code, out, _) = call(&["compute", "F_k", "36", "--k", "2", "--all-methods"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"consistent"));
    assert!(lines[..lines.len() - 1].iter().all(|l| l.ends_with(" 5")));
}

#[test]
fn compute_json_records() {
    let (code, out, err) = call(&["compute", "f_kl", "36", "--k", "3", "--l", "2", "--all-methods", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(err.trim(), "consistent");
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["function"], "f_kl");
        assert_eq!(v["n"], "36");
        assert_eq!(v["k"], 3);
        assert_eq!(v["l"], 2);
        assert!(v["j"].is_null());
        assert_eq!(v["value"], "2");
        assert!(v["method"].is_string());
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["compute", "f", "36", "--k", "2"][..],
        &["compute", "f_k", "36"],
        &["compute", "nope", "36"],
        &["compute", "f", "0"],
        &["compute", "h_l", "36", "--l", "1", "--method", "fedorov"],
        &["bfile", "f", "--max", "1"],
        &["frobnicate"],
    ] {
        let (code, _, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn bfile_format() {
    let (code, out, err) = call(&["bfile", "f", "--max", "12"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(err.trim(), "offset 2");
    let want = "2 1\n3 1\n4 2\n5 1\n6 2\n7 1\n8 3\n9 2\n10 2\n11 1\n12 4\n";
    assert_eq!(out, want);
    let (_, out, err) = call(&["bfile", "r_l", "--max", "5", "--l", "1"]);
    assert_eq!(err.trim(), "offset 1");
    assert_eq!(out, "1 1\n2 2\n3 2\n4 3\n5 2\n");
}

#[test]
fn verify_small_passes() {
    let (code, out, _) = call(&["--threads", "2", "verify", "--max", "30"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.ends_with(" 0 failed")));
}

#[test]
fn bench_reports_every_method() {
    let (code, out, _) = call(&["bench", "f", "360", "--repeat", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("f n=360 value="));
    for m in ["recursion", "partition-sum", "kappa-recursion", "fedorov", "oracle"] {
        assert!(out.lines().any(|l| l.starts_with(m)), "{m} missing");
    }
    assert_eq!(call(&["bench", "f", "36", "--repeat", "0"]).0, EXIT_USAGE);
}

#[test]
fn exit_code_constants_distinct() {
    assert_ne!(EXIT_FAILURE, EXIT_OK);
    assert_ne!(EXIT_FAILURE, EXIT_USAGE);
}
