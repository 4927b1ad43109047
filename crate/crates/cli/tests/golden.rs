use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hermdens")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn mu_golden() {
    let (out, code) = run(&["mu", "--q", "3", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), r#"{"mu":"8"}"#);
    assert_eq!(out, golden("mu_q3_a1_b1.json"));
}

#[test]
fn density_golden() {
    let (out, code) = run(&["density", "--q", "3", "--form", "diag", "--a", "0", "--b", "0", "--eps1", "1", "--s", "split"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""coeffs":["1","4","-1"]"#), "{out}");
    assert_eq!(out, golden("density_q3_diag00_split.json"));
}

#[test]
fn normalize_golden() {
    let (out, code) = run(&["normalize", "--p", "3", "--gram", "[[1,0],[0,3]]"]);
    assert_eq!(code, 0);
    assert!(out.starts_with(r#"{"form":"diag","a":1,"b":0,"eps1":1"#), "{out}");
    assert_eq!(out, golden("normalize_p3_diag_1_3.json"));
}

#[test]
fn output_is_stable_across_runs_and_thread_counts() {
    let args = ["count", "--p", "3", "--ell", "2", "--S", "[[-1,0],[0,1]]", "--T", "[[3,0],[0,-1]]"];
    let (first, _) = run(&args);
    for threads in ["1", "2", "4"] {
        let mut a = args.to_vec();
        a.extend(["--threads", threads]);
        assert_eq!(run(&a).0, first);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["mu", "--q", "3", "--a", "1"]).1, 2);
    assert_eq!(run(&["normalize", "--p", "4", "--gram", "[[1,0],[0,1]]"]).1, 2);
    assert_eq!(run(&["normalize", "--p", "3", "--gram", "[[1,0],[0"]).1, 2);
    let over = ["--budget", "100", "count", "--p", "3", "--ell", "2", "--S", "[[-1,0],[0,1]]", "--T", "[[-1,0],[0,1]]"];
    assert_eq!(run(&over).1, 3);
    assert_eq!(run(&["verify", "assembly", "--q", "3", "--ab-max", "2"]).1, 0);
}

#[test]
fn text_format() {
    let (out, code) = run(&["--format", "text", "mu", "--q", "5", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "mu: 12\n");
}
