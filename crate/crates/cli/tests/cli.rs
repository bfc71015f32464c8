use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cbosel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbosel"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

/// UCI-HAR layout with 561 columns; column 3 carries the class, the rest is
/// a deterministic pattern.
fn fake_ucihar(dir: &Path) {
    for (part, n, offset) in [("train", 60, 0), ("test", 30, 1000)] {
        let (mut x, mut y) = (String::new(), String::new());
        for i in 0..n {
            let label = i % 6;
            let row: Vec<String> = (0..561)
                .map(|j| {
                    let v = if j == 3 {
                        label as f64 / 5.0
                    } else {
                        (((i + offset) * 37 + j * 11) % 101) as f64 / 50.0 - 1.0
                    };
                    format!("{v:.7e}")
                })
                .collect();
            x.push_str(&row.join(" "));
            x.push('\n');
            y.push_str(&format!("{}\n", label + 1));
        }
        fs::write(dir.join(format!("X_{part}.txt")), x).unwrap();
        fs::write(dir.join(format!("y_{part}.txt")), y).unwrap();
    }
}

#[test]
fn ucihar_layout_runs_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let har = tmp.path().join("har");
    fs::create_dir(&har).unwrap();
    fake_ucihar(&har);
    let har = har.to_str().unwrap();
    let common = [
        "--dataset",
        "ucihar",
        "--data-dir",
        har,
        "--classifier",
        "knn",
        "--knn-k",
        "1",
        "--population",
        "4",
        "--iterations",
        "2",
        "--train-samples",
        "48",
        "--test-samples",
        "24",
    ];
    let mut args = vec!["select"];
    args.extend(common);
    args.extend(["--output", "sel.json"]);
    let out = cbosel(&args, tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sel = fs::read_to_string(tmp.path().join("sel.json")).unwrap();
    assert!(sel.contains("\"optimizer\": \"cbo\""), "{sel}");

    let mut args = vec!["evaluate"];
    args.extend(common);
    args.extend(["--mask", "sel.json"]);
    let out = cbosel(&args, tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("CBO-KNN,"), "{csv}");
    assert!(row.ends_with(",published"), "{csv}");
}

#[test]
fn artifact_goes_to_stdout_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cbosel(
        &["bench-opt", "--function", "sphere", "--dim", "2", "--iterations", "3"],
        tmp.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("iteration,cbo,pso,ff,random\n"), "{stdout}");
    assert_eq!(stdout.lines().count(), 5);
    assert!(String::from_utf8(out.stderr).unwrap().contains("median final"));
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn config_file_and_flags_combine() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("exp.cfg"),
        "# benchmark settings\nfunction = rastrigin\ndim = 3\niterations = 4\n",
    )
    .unwrap();
    let out = cbosel(
        &[
            "bench-opt",
            "--config",
            "exp.cfg",
            "--iterations",
            "2",
            "--output",
            "out/b.csv",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("out/b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let summary = fs::read_to_string(tmp.path().join("out/b.txt")).unwrap();
    assert!(summary.starts_with("rastrigin dim 3"), "{summary}");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| cbosel(args, tmp.path()).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["select", "--no-such-flag"]), 64);
    assert_eq!(code(&["select", "--threshold", "1.5"]), 64);
    assert_eq!(code(&["select", "--dataset", "wisdm", "--data-dir", "missing-dir"]), 2);
    assert_eq!(code(&["select", "--config", "missing.cfg"]), 2);
    fs::write(tmp.path().join("bad.cfg"), "colour = blue\n").unwrap();
    assert_eq!(code(&["select", "--config", "bad.cfg"]), 64);
    fs::write(tmp.path().join("bad.csv"), "Algorithm,Recall\nx,1\n").unwrap();
    let out = cbosel(&["report", "bad.csv"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Recall"));
}
