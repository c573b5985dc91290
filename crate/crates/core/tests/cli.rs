use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn boseq(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boseq"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("BOSEQ_DIM_CAP")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> Value {
    let o = boseq(args, out);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("summary JSON on stdout")
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

#[test]
fn entangler_output_layout() {
    let dir = tempfile::tempdir().unwrap();
    let summary = ok(&["entangler", "--n", "1,4", "--steps", "20"], dir.path());
    let text = fs::read_to_string(dir.path().join("entangler_N1.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# boseq 0.1.0");
    assert!(lines[1].starts_with("# config: {"));
    assert_eq!(lines[2], "t,entropy_bits,entropy_norm");
    assert_eq!(lines[3], "0.0,0.0,0.0");
    assert_eq!(lines.len(), 3 + 21);
    assert!(!text.contains('\r'));

    let fig = data_lines(&dir.path().join("entangling_entropy.csv"));
    assert_eq!(fig[0], "N,entropy_at_pi_over_4N");
    assert!(fig[1].starts_with("1,0.99999999999999"), "{}", fig[1]);

    // checksums in the summary match the files
    assert_eq!(summary["command"], "entangler");
    for f in summary["files"].as_array().unwrap() {
        let bytes = fs::read(dir.path().join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"], boseq::cli::sha256_hex(&bytes));
    }
    assert!(dir.path().join("entangler_summary.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["grover", "--m", "2", "--n", "1,3", "--steps", "150"];
    ok(&args, dir.path());
    let first: Vec<(String, Vec<u8>)> = {
        let mut v: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect();
        v.sort();
        v
    };
    ok(&args, dir.path());
    for (name, bytes) in &first {
        assert_eq!(&fs::read(dir.path().join(name)).unwrap(), bytes, "{name}");
    }
}

#[test]
fn parallel_sweep_matches_sequential() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["deutsch", "--n", "1,2,5"];
    ok(&args, a.path());
    let mut par = args.to_vec();
    par.extend(["--jobs", "3"]);
    ok(&par, b.path());
    assert_eq!(
        data_lines(&a.path().join("deutsch.csv")),
        data_lines(&b.path().join("deutsch.csv"))
    );
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["cnot", "--n", "1,2", "--format", "json"], dir.path());
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cnot.json")).unwrap()).unwrap();
    assert_eq!(doc["columns"][0], "N");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn ambiguous_deutsch_runs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let o = boseq(
        &[
            "deutsch",
            "--oracle",
            "BAL01",
            "--n",
            "2",
            "--oracle-time",
            "0.7853981633974483",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ambiguous"));
    let rows = data_lines(&dir.path().join("deutsch.csv"));
    assert!(rows[1].contains("ambiguous"), "{}", rows[1]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage errors
    assert_eq!(
        boseq(&["entangler", "--n", "0"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        boseq(&["deutsch", "--oracle", "BAL11"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        boseq(&["grover", "--steps", "10"], dir.path())
            .status
            .code(),
        Some(2)
    );
    // dimension cap
    let capped = Command::new(env!("CARGO_BIN_EXE_boseq"))
        .args(["entangler", "--n", "30", "--steps", "10", "--out"])
        .arg(dir.path())
        .env("BOSEQ_DIM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
    // output directory blocked by a file
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert_eq!(
        boseq(&["cnot", "--n", "1"], &blocker).status.code(),
        Some(1)
    );
    // missing schedule
    let missing = dir.path().join("none.bsched");
    let o = boseq(
        &["compile", "--in", missing.to_str().unwrap(), "--n", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compile_and_run_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("flip.bsched");
    fs::write(
        &src,
        "# quarter turn about x\nqubits 1\nterm 1.0 X1\nevolve pi/4\nmeasure 1 z\n",
    )
    .unwrap();
    ok(
        &["compile", "--in", src.to_str().unwrap(), "--n", "3"],
        dir.path(),
    );
    let compiled = fs::read_to_string(dir.path().join("flip_N3.bsched")).unwrap();
    assert!(
        compiled.contains("bosons 3\nterm 3.0 X1\nevolve pi/4/N\n"),
        "{compiled}"
    );

    // the compiled file runs as is: a quarter turn about x takes |z+> onto the equator
    let compiled_path = dir.path().join("flip_N3.bsched");
    ok(
        &["run-schedule", "--in", compiled_path.to_str().unwrap()],
        dir.path(),
    );
    let rows = data_lines(&dir.path().join("run_schedule.csv"));
    let last: Vec<&str> = rows.last().unwrap().split(',').collect();
    assert_eq!(&last[1..3], &["1", "z"]);
    let v: f64 = last[3].parse().unwrap();
    assert!((v - 0.0).abs() < 1e-12, "{v}");

    // bad schedule text is a usage error with a location
    let bad = dir.path().join("bad.bsched");
    fs::write(&bad, "qubits 1\nterm 1.0 Z2\n").unwrap();
    let o = boseq(
        &["compile", "--in", bad.to_str().unwrap(), "--n", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
