//! End-to-end checks of the command-line surface: file formats, exit
//! codes, determinism of repeated invocations, and the table cache.

use std::path::Path;
use std::process::{Command, Output};

fn kolmolab(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kolmolab"));
    cmd.args(args);
    cmd
}

fn run_ok(args: &[&str]) -> Output {
    let out = kolmolab(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_of(args: &[&str]) -> String {
    String::from_utf8(run_ok(args).stdout).unwrap()
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn kraft_and_canonical_code() {
    assert_eq!(
        stdout_of(&["kraft", "--lengths", "1,2,3,3"]),
        "sum 1 status Complete\n"
    );
    assert_eq!(
        stdout_of(&["code-from-lengths", "--lengths", "1,2,3,3"]),
        "0\t0\n1\t10\n2\t110\n3\t111\n"
    );
    // Kraft violation is a clean machine-readable failure
    let out = kolmolab(&["code-from-lengths", "--lengths", "1,1,1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr must be JSON");
    assert!(err["error"].as_str().unwrap().contains("3/2"));
}

#[test]
fn natural_roundtrip() {
    assert_eq!(stdout_of(&["natural", "encode", "5"]), "10110\n");
    assert_eq!(
        stdout_of(&["natural", "decode", "10110"]),
        "value 5 consumed 5\n"
    );
}

#[test]
fn measures_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write_file(dir.path(), "d.txt", "a\t1/2\nb\t1/3\nc\t1/6\n");
    assert_eq!(stdout_of(&["entropy", "--dist", &dist]), "1.459147917\n");

    let joint = write_file(dir.path(), "j.txt", "0\t0\t1/4\n0\t1\t1/4\n1\t0\t1/4\n1\t1\t1/4\n");
    assert_eq!(stdout_of(&["mi", "--joint", &joint]), "0.000000000\n");

    let g = write_file(dir.path(), "g.txt", "a\t1/3\nb\t1/3\nc\t1/3\n");
    let kl = stdout_of(&["kl", "--f", &dist, "--g", &g]);
    assert!(kl.starts_with("0.1258145"), "kl = {kl}");

    let map = write_file(dir.path(), "m.txt", "0\tz\n1\tz\n");
    let dpi = stdout_of(&["dpi", "--joint", &joint, "--map", &map]);
    assert!(dpi.ends_with("holds true\n"));
}

#[test]
fn structfn_deterministic_and_json() {
    let a = stdout_of(&["structfn", "--x", "0110", "--family", "masks", "--lmax", "14"]);
    let b = stdout_of(&["structfn", "--x", "0110", "--family", "masks", "--lmax", "14"]);
    assert_eq!(a, b, "identical config must give identical bytes");
    assert!(a.starts_with("R,h,lambda,beta,witness\n"));

    let json = stdout_of(&[
        "--format",
        "json",
        "suffstat",
        "--stat",
        "ones",
        "--n",
        "3",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["header"][0], "theta");
    assert_eq!(parsed["rows"][0][2], "true");
}

#[test]
fn threads_flag_does_not_change_output() {
    let one = stdout_of(&[
        "--threads", "1", "kolmo-table", "--lmax", "12", "--steps", "500", "--cond", "upto:2",
    ]);
    let four = stdout_of(&[
        "--threads", "4", "kolmo-table", "--lmax", "12", "--steps", "500", "--cond", "upto:2",
    ]);
    assert_eq!(one, four);
    assert!(one.starts_with("condition,outputs,halting_programs,kraft_sum\n"));
}

#[test]
fn kolmo_table_cache_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let out = kolmolab(&["kolmo-table", "--lmax", "12", "--steps", "500", "--cond", "101"])
            .env("KOLMOLAB_CACHE", dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    let cached_files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached_files.len(), 1, "one cached table file");
    let second = run();
    assert_eq!(first, second);
}

#[test]
fn rd_subcommands() {
    let got = stdout_of(&["rd", "brute", "--set-distortion", "3", "--m", "1", "--rate", "1"]);
    let line = got.lines().nth(1).unwrap();
    assert!(line.starts_with("1.000000000,2.000000000,BruteForce1"), "{line}");

    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(
        dir.path(),
        "inst.txt",
        "0 1\n0 1\n1/2 1/2\n0 1\n1 0\n",
    );
    let ba = stdout_of(&["rd", "ba", "--instance", &inst, "--distortion", "0.0"]);
    assert!(ba.lines().nth(1).unwrap().starts_with("1.000000000,0.000000000,BA"));

    let sf = stdout_of(&["rd", "sfbinary", "--p", "1/2", "--rate", "0.25"]);
    assert!(sf.lines().nth(1).unwrap().starts_with("0.250000000,0.750000000,ClosedForm"));

    let exp = stdout_of(&["rd", "expstruct", "--n", "2", "--m", "1", "--rates", "1,2"]);
    assert!(exp.starts_with("R,expected_h,D,measured_shift\n"));
}

#[test]
fn ucode_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "in.txt", "011011100010\n");
    let encoded = dir.path().join("out.bin");
    run_ok(&[
        "--output",
        encoded.to_str().unwrap(),
        "ucode",
        "encode",
        "--input",
        &input,
    ]);
    let bytes = std::fs::read(&encoded).unwrap();
    let bit_count = u32::from_le_bytes(bytes[..4].try_into().unwrap());
    assert!(bit_count > 0);
    let decoded = stdout_of(&["ucode", "decode", "--input", encoded.to_str().unwrap()]);
    assert_eq!(decoded, "011011100010\n");
}

#[test]
fn ucode_generation_requires_seed() {
    let out = kolmolab(&["ucode", "report", "--gen-bernoulli", "0.2,64"])
        .output()
        .unwrap();
    assert!(!out.status.success(), "seedless generation must be rejected");
}

#[test]
fn wiske_reports_bounded_rows() {
    let got = stdout_of(&["wiske", "--stat", "ones", "--n-min", "2", "--n-max", "4", "--lmax", "16"]);
    for line in got.lines().skip(1) {
        assert!(line.ends_with(",true"), "unbounded row: {line}");
    }
}

#[test]
fn selftest_passes() {
    let got = stdout_of(&["selftest"]);
    assert!(got.lines().count() >= 10);
    assert!(got.lines().all(|l| l.starts_with("PASS ")));
}
