use std::fs;
use std::process::{Command, Output};

fn extraconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extraconn"))
        .args(args)
        .env_remove("EXTRACONN_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = extraconn(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    extraconn(args).status.code().unwrap()
}

#[test]
fn scalar_commands() {
    assert_eq!(
        stdout(&["xi", "--n", "5", "--family", "q2", "--m", "6"]),
        "22\n"
    );
    assert_eq!(
        stdout(&["xi", "--n", "4", "--family", "q2", "--m", "8"]),
        "8\n"
    );
    assert_eq!(stdout(&["xi", "--n", "4", "--k", "2", "--m", "8"]), "8\n");
    assert_eq!(
        stdout(&["ex", "--n", "4", "--family", "q2", "--m", "4"]),
        "8\n"
    );
    assert_eq!(
        stdout(&["ex", "--n", "4", "--family", "q2", "--m", "8"]),
        "32\n"
    );
    assert_eq!(
        stdout(&["lambda", "--n", "9", "--family", "q2", "--h", "58"]),
        "254\n"
    );
    assert_eq!(
        stdout(&["lambda", "--n", "9", "--family", "q2", "--h", "59"]),
        "256\n"
    );
}

#[test]
fn domain_errors_exit_1() {
    let out = extraconn(&["xi", "--n", "5", "--family", "q2", "--m", "17"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(code(&["xi", "--n", "5", "--family", "fqn", "--m", "3"]), 1);
    assert_eq!(code(&["bitmap", "--n", "14", "--k", "2"]), 1);
    assert_eq!(
        code(&["verify", "--n", "6", "--k", "2", "--mode", "exact"]),
        1
    );
    assert_eq!(code(&["ratio", "--n-min", "3", "--n-max", "10"]), 1);

    let out = extraconn(&["concentration", "--n", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("breakpoints --n 8"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["xi", "--n", "5"]), 2);
    assert_eq!(code(&["xi", "--n", "5", "--family", "q3", "--m", "1"]), 2);
    assert_eq!(
        code(&["xi", "--n", "5", "--family", "q2", "--k", "2", "--m", "1"]),
        2
    );
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(
        code(&["profile", "--n", "5", "--family", "q2", "--format", "pbm"]),
        2
    );
    assert_eq!(
        code(&["bitmap", "--n", "4", "--k", "2", "--format", "csv"]),
        2
    );
}

#[test]
fn budget_override_is_checked() {
    let out = Command::new(env!("CARGO_BIN_EXE_extraconn"))
        .args(["verify", "--n", "4", "--k", "2", "--mode", "exact"])
        .env("EXTRACONN_BUDGET", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_extraconn"))
        .args(["verify", "--n", "4", "--k", "2", "--mode", "exact"])
        .env("EXTRACONN_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn profile_rows() {
    let csv = stdout(&["profile", "--n", "9", "--family", "q2"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "h,xi,lambda,optimal");
    assert_eq!(lines.len(), 257);
    assert_eq!(lines[58], "58,254,254,1");
    assert_eq!(lines[59], "59,256,256,1");
    assert_eq!(lines[61], "61,258,256,0");
    assert!(!csv.contains('\r'));
}

#[test]
fn profile_json() {
    let json = stdout(&["profile", "--n", "4", "--family", "q2", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[7]["xi"], 8);
    assert_eq!(rows[2]["lambda"], 8);
    assert_eq!(rows[2]["optimal"], false);
}

#[test]
fn breakpoints_and_concentration() {
    assert_eq!(stdout(&["breakpoints", "--n", "9"]), "59 60 64 256\n");
    assert_eq!(stdout(&["breakpoints", "--n", "10"]), "118 120 128 512\n");
    assert_eq!(stdout(&["breakpoints", "--n", "7"]), "15 16 64\n");

    let report = stdout(&["concentration", "--n", "9"]);
    assert!(report.contains("breakpoints: 59 60 64 256\n"));
    assert!(report.contains("optimal_h: 59 60 64 256\n"));
    assert!(report.contains("tightness: lambda_58 = 254 (gap 2)\n"));
    assert!(report.ends_with("status: PASS\n"));
    let report = stdout(&["concentration", "--n", "10"]);
    assert!(report.contains("constant: 512\n"));
    assert!(report.contains("tightness: lambda_117 = 511 (gap 1)\n"));
}

#[test]
fn ratio_rows() {
    let csv = stdout(&["ratio", "--n-min", "4", "--n-max", "31"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,g,R_percent");
    assert_eq!(lines.len(), 29);
    assert!(lines.contains(&"4,7,87.500000"));
    assert!(lines.contains(&"14,6315,77.087402"));
    assert!(lines.contains(&"31,827675990,77.083333"));
}

#[test]
fn bitmaps() {
    let pbm = stdout(&["bitmap", "--n", "4", "--k", "2"]);
    let mut lines = pbm.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("16 16"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for row in rows {
        assert_eq!(row.split(' ').filter(|&c| c == "1").count(), 5);
    }

    let pbm = stdout(&["bitmap", "--n", "3", "--family", "fqn"]);
    for row in pbm.lines().skip(2) {
        assert_eq!(row.split(' ').filter(|&c| c == "1").count(), 4);
    }
}

#[test]
fn file_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("p.csv", vec!["profile", "--n", "8", "--family", "q2"]),
        ("r.csv", vec!["ratio", "--n-min", "4", "--n-max", "40"]),
        ("b.pbm", vec!["bitmap", "--n", "7", "--k", "2"]),
    ] {
        let a = dir.path().join(format!("a-{name}"));
        let b = dir.path().join(format!("b-{name}"));
        for path in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--out", path.to_str().unwrap()]);
            assert_eq!(stdout(&full), "");
        }
        let first = fs::read(&a).unwrap();
        assert!(!first.is_empty());
        assert_eq!(first, fs::read(&b).unwrap(), "{name}");
    }

    let sample = [
        "verify",
        "--n",
        "6",
        "--k",
        "2",
        "--mode",
        "sample",
        "--samples",
        "500",
        "--seed",
        "3",
    ];
    assert_eq!(stdout(&sample), stdout(&sample));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = extraconn(&[
        "profile",
        "--n",
        "5",
        "--family",
        "q2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_exact_n4() {
    let report = stdout(&["verify", "--n", "4", "--k", "2", "--mode", "exact"]);
    assert!(report.ends_with("8/8 PASS\n"));
    assert!(report.contains("m=8 xi_oracle=8 xi_formula=8 lambda_oracle=8 lambda_formula=8 PASS\n"));
    let report = stdout(&["verify", "--n", "4", "--family", "qn", "--mode", "exact"]);
    assert!(report.ends_with("8/8 PASS\n"));
}

#[test]
fn verify_exact_n5() {
    let report = stdout(&["verify", "--n", "5", "--k", "2", "--mode", "exact"]);
    assert!(report.ends_with("16/16 PASS\n"));
}

#[test]
fn verify_sample_n9() {
    let report = stdout(&[
        "verify",
        "--n",
        "9",
        "--k",
        "2",
        "--mode",
        "sample",
        "--samples",
        "10000",
        "--seed",
        "1",
    ]);
    assert!(report.contains("samples: 10000\n"));
    assert!(report.ends_with("violations: 0\n"));
}
