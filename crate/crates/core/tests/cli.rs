use serde_json::Value;
use splitoct::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("splitoct").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text.trim()).expect("valid json")
}

#[test]
fn mul_basis_products() {
    assert_eq!(invoke(&["mul", "0,1,0,0,0,0,0,0", "0,0,1,0,0,0,0,0"]).1.trim(), "0,0,0,1,0,0,0,0");
    assert_eq!(invoke(&["mul", "0,0,0,0,1,0,0,0", "0,0,0,0,1,0,0,0"]).1.trim(), "1,0,0,0,0,0,0,0");
    assert_eq!(invoke(&["mul", "0,1,0,0,0,0,0,0", "0,1,0,0,0,0,0,0"]).1.trim(), "-1,0,0,0,0,0,0,0");
}

#[test]
fn mul_zero_divisor_and_negative_positional() {
    let (code, out, _) = invoke(&["mul", "1,0,0,0,1,0,0,0", "1,0,0,0,-1,0,0,0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "0,0,0,0,0,0,0,0");
    let (code, out, _) = invoke(&["mul", "-1,0,0,0,0,0,0,0", "1/2,0,0,0,0,0,0,0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "-1/2,0,0,0,0,0,0,0");
}

#[test]
fn mul_flags_algorithms_agree() {
    let x = "1,-2,3/4,0.5,5,-6,7,8";
    let b = "-8,7,6,-5/3,4,3,-2,1";
    let direct = invoke(&["mul", "--x", x, "--b", b, "--algo", "direct"]);
    let fast = invoke(&["mul", "--x", x, "--b", b, "--algo", "fast", "--check"]);
    assert_eq!(direct.0, EXIT_OK);
    assert_eq!(fast.0, EXIT_OK);
    assert_eq!(direct.1, fast.1);
}

#[test]
fn mul_json_and_float() {
    let (code, out, _) = invoke(&["mul", "1,2,0,0,0,0,0,0", "3,0,0,0,0,0,0,0", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 8);
    assert_eq!(coeffs[0], "3");
    assert_eq!(coeffs[1], "6");

    let (code, out, _) = invoke(&["mul", "1.5,0,0,0,0,0,0,0", "2,0,0,0,0,0,0,0", "--float", "--check", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["coeffs"][0].as_f64(), Some(3.0));
}

#[test]
fn mul_usage_errors() {
    for args in [
        &["mul", "1,2,3", "0,0,0,0,0,0,0,0"][..],
        &["mul", "1,0,0,0,0,0,0,0", "a,0,0,0,0,0,0,0"],
        &["mul", "1/0,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0"],
        &["mul", "1,0,0,0,0,0,0,0"],
        &["mul", "1,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0", "--algo", "slow"],
        &["frobnicate"],
        &["bench", "--iters", "0"],
    ] {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_ok() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for cmd in ["mul", "verify", "count", "bench"] {
        assert!(out.contains(cmd));
    }
}

#[test]
fn count_reports() {
    let (_, out, _) = invoke(&["count", "--algo", "direct", "--format", "json"]);
    let v = json(&out);
    assert_eq!((v["mults"].as_u64(), v["adds"].as_u64()), (Some(64), Some(56)));

    let (_, out, _) = invoke(&["count", "--format", "json"]);
    let v = json(&out);
    assert_eq!((v["mults"].as_u64(), v["adds"].as_u64(), v["shifts"].as_u64()), (Some(28), Some(92), Some(14)));

    let (_, out, _) = invoke(&["count", "--algo", "prepared", "--format", "json"]);
    let v = json(&out);
    assert_eq!((v["mults"].as_u64(), v["adds"].as_u64()), (Some(28), Some(68)));
    assert_eq!((v["prep"]["mults"].as_u64(), v["prep"]["adds"].as_u64()), (Some(0), Some(24)));

    let (code, out, _) = invoke(&["count"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("28") && out.contains("92"));
}

#[test]
fn verify_passes_text_and_json() {
    let (code, out, _) = invoke(&["verify", "--random", "200", "--seed", "3", "--symbolic"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "pass: true"), "{out}");

    let (code, out, _) = invoke(&["verify", "--random", "50", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    for key in ["basis", "random", "symbolic", "counts", "pass"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["pass"], true);
    assert_eq!(v["basis"]["passed"], 64);
    assert_eq!(v["random"]["passed"], 50);
    assert!(v["symbolic"].is_null());
    assert_eq!(v["counts"]["mult_savings"], 36);
}

#[test]
fn verify_without_random_pairs() {
    let (code, out, _) = invoke(&["verify", "--random", "0", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["random"]["requested"], 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_detects_injected_faults() {
    for fault in ["table-sign", "coefficient", "post-step"] {
        let (code, out, err) = invoke(&["verify", "--random", "20", "--symbolic", "--inject-fault", fault, "--format", "json"]);
        assert_eq!(code, EXIT_FAILURE, "{fault}");
        assert_eq!(json(&out)["pass"], false, "{fault}");
        assert!(!err.is_empty());
    }
}

#[test]
fn bench_rows() {
    let (code, out, _) = invoke(&["bench", "--iters", "50", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["checksums_match"], true);

    let (code, out, _) = invoke(&["bench", "--iters", "50", "--reuse-prepared", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["path"].as_str().unwrap()).collect();
    assert_eq!(names, ["direct", "fast", "prepared-apply"]);
    assert!(rows.iter().all(|r| r["ns_per_op"].as_f64().is_some_and(f64::is_finite)));

    let (code, out, _) = invoke(&["bench", "--iters", "20"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("checksums_match: true"));
}
