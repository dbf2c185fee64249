use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn juoan2(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_juoan2")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const APPENDIX_PUB: &str = "JUOAN2 PUBLIC KEY v1\nn=8\nnp=8\nM=dfd\nC=7f2,d30,86,58,962,2ea,b11,25f\n";
const APPENDIX_PRV: &str = "JUOAN2 PRIVATE KEY v1\nn=8\nnp=8\nM=dfd\nA=2,4,b,1d,4c,c7,20b,558\nNW=a9e\nDI=467\n";

fn appendix_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("a.pub"), APPENDIX_PUB).unwrap();
    fs::write(dir.path().join("a.prv"), APPENDIX_PRV).unwrap();
    dir
}

#[test]
fn keygen_is_reproducible_from_seed() {
    let dir = TempDir::new().unwrap();
    for base in ["k1", "k2"] {
        let o = juoan2(&["keygen", "-n", "16", "--seed", "c0ffee", "-o", base], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read = |f: &str| fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("k1.pub"), read("k2.pub"));
    assert_eq!(read("k1.prv"), read("k2.prv"));
    let text = String::from_utf8(read("k1.pub")).unwrap();
    assert!(text.starts_with("JUOAN2 PUBLIC KEY v1\nn=24\nnp=16\n"), "{text}");
    let o = juoan2(&["keygen", "-n", "16", "--seed", "c0ffef", "-o", "k3"], dir.path());
    assert!(o.status.success());
    assert_ne!(read("k1.pub"), read("k3.pub"));
}

#[test]
fn encrypt_is_reproducible_from_seed() {
    let dir = TempDir::new().unwrap();
    assert!(juoan2(&["keygen", "-n", "8", "--seed", "1", "-o", "k"], dir.path()).status.success());
    fs::write(dir.path().join("m.txt"), b"hello").unwrap();
    for out in ["c1", "c2"] {
        let o = juoan2(&["encrypt", "--pub", "k.pub", "--in", "m.txt", "--out", out, "--seed", "2"], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let c1 = fs::read(dir.path().join("c1")).unwrap();
    assert_eq!(c1, fs::read(dir.path().join("c2")).unwrap());
    assert_eq!(&c1[..5], b"J2CT\x01");
    // 40 message bits plus the terminator in 8-bit blocks.
    assert_eq!(&c1[5..13], &[0, 0, 0, 8, 0, 0, 0, 6]);
}

#[test]
fn raw_block_encryption_matches_worked_example() {
    let dir = appendix_dir();
    let o = juoan2(&["encrypt", "--pub", "a.pub", "--block", "10101001", "--noise", "00100111"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "3204\n");
    let o = juoan2(&["encrypt", "--pub", "a.pub", "--block", "101"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn raw_block_decryption_reports_first_success_and_audit() {
    let dir = appendix_dir();
    let o = juoan2(&["decrypt", "--prv", "a.prv", "--block", "3204"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("00000001\nk=12 s0=1260 "), "{out}");
    let o = juoan2(&["decrypt", "--prv", "a.prv", "--block", "3204", "--audit"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("  k=115 bits=10101001\n"), "{}", stdout(&o));
    let o = juoan2(&["decrypt", "--prv", "a.prv", "--block", "3204", "--jobs", "4"], dir.path());
    assert!(stdout(&o).starts_with("00000001\nk=12 "));
    let o = juoan2(&["decrypt", "--prv", "a.prv", "--block", "9999"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid ciphertext"));
}

#[test]
fn corrupted_ciphertext_file_fails() {
    let dir = TempDir::new().unwrap();
    assert!(juoan2(&["keygen", "-n", "8", "--seed", "5", "-o", "k"], dir.path()).status.success());
    fs::write(dir.path().join("bad.ct"), b"J2CT\x01\x00\x00\x00\x08\x00\x00\x00\x02\x00\x01").unwrap();
    let o = juoan2(&["decrypt", "--prv", "k.prv", "--in", "bad.ct", "--out", "p"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid ciphertext"), "{}", stderr(&o));
    fs::write(dir.path().join("junk.ct"), b"not a ciphertext").unwrap();
    let o = juoan2(&["decrypt", "--prv", "k.prv", "--in", "junk.ct", "--out", "p"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid ciphertext"));
    assert!(!dir.path().join("p").exists());
}

#[test]
fn message_decrypt_exit_status_matches_outcome() {
    let dir = TempDir::new().unwrap();
    assert!(juoan2(&["keygen", "-n", "4", "--seed", "9", "-o", "k"], dir.path()).status.success());
    fs::write(dir.path().join("m"), b"A").unwrap();
    let o = juoan2(&["encrypt", "--pub", "k.pub", "--in", "m", "--out", "c", "--seed", "3"], dir.path());
    assert!(o.status.success());
    let o = juoan2(&["decrypt", "--prv", "k.prv", "--in", "c", "--out", "p", "--audit"], dir.path());
    let audit = stdout(&o);
    assert_eq!(audit.lines().filter(|l| l.starts_with("block ")).count(), 3, "{audit}");
    match o.status.code() {
        Some(0) => assert_eq!(fs::read(dir.path().join("p")).unwrap(), b"A"),
        Some(1) => assert!(stderr(&o).contains("invalid ciphertext"), "{}", stderr(&o)),
        other => panic!("unexpected status {other:?}"),
    }
}

#[test]
fn density_report() {
    let dir = TempDir::new().unwrap();
    let o = juoan2(&["density", "--assp", "-n", "10", "--lgM", "20"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let d: f64 = out.split("D=").nth(1).and_then(|r| r.split_whitespace().next()).unwrap().parse().unwrap();
    assert!((d - 1.09).abs() < 0.005, "{out}");
    assert!(out.contains("class=supercritical"), "{out}");
    let o = juoan2(&["density", "--ssp", "-n", "20", "--lgM", "40"], dir.path());
    assert!(stdout(&o).contains("D=0.5000") && stdout(&o).contains("class=lll-vulnerable"), "{}", stdout(&o));
    assert_eq!(juoan2(&["density", "-n", "10", "--lgM", "20"], dir.path()).status.code(), Some(2));
}

#[test]
fn oracle_lists_the_worked_example_pattern() {
    let dir = appendix_dir();
    let o = juoan2(&["oracle", "--pub", "a.pub", "--S", "3204"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "patterns=1\nb=10101001 noise={6,7}\n");
    assert_eq!(juoan2(&["oracle", "--pub", "a.pub", "--S", "x"], dir.path()).status.code(), Some(2));
}

#[test]
fn attack_experiment_writes_csv() {
    let dir = TempDir::new().unwrap();
    let o = juoan2(
        &[
            "attack",
            "--experiment",
            "ssp",
            "-n",
            "10",
            "--density",
            "0.5",
            "--instances",
            "3",
            "--csv",
            "r.csv",
            "--seed",
            "4",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,lgM,density,attack_outcome,wall_time_ms");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("10,20.0000,"), "{csv}");
}

#[test]
fn attack_on_ciphertext_file_reports_each_block() {
    let dir = TempDir::new().unwrap();
    assert!(juoan2(&["keygen", "-n", "4", "--seed", "7", "-o", "k"], dir.path()).status.success());
    fs::write(dir.path().join("m"), b"Z").unwrap();
    assert!(juoan2(&["encrypt", "--pub", "k.pub", "--in", "m", "--out", "c", "--seed", "8"], dir.path())
        .status
        .success());
    let o = juoan2(&["attack", "--pub", "k.pub", "--ct", "c", "--trials", "2", "--seed", "1"], dir.path());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3, "{out}");
    let failed = out.lines().filter(|l| l.ends_with("failed")).count();
    assert_eq!(o.status.code(), Some(if failed == 0 { 0 } else { 1 }));
}

#[test]
fn vectors_replay_reports_blind_scan_mismatch() {
    let dir = TempDir::new().unwrap();
    let o = juoan2(&["vectors", "appendix-a"], dir.path());
    let out = stdout(&o);
    for line in [
        "C = 2034,3376,134,88,2402,746,2833,607 ok",
        "S = 3204 ok",
        "S0 = 1260 ok",
        "k = 115 ok",
        "target = 2283 ok",
        "greedy bits = 10101001 ok",
        "decrypt k = 12 MISMATCH (expected 115)",
    ] {
        assert!(out.contains(line), "missing {line:?} in\n{out}");
    }
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&juoan2(&["vectors", "appendix-a"], dir.path())), out);
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["frobnicate"][..],
        &["keygen", "-n", "16"],
        &["keygen", "-n", "7", "-o", "k"],
        &["keygen", "-n", "16", "--seed", "xyz", "-o", "k"],
        &["decrypt", "--prv", "k.prv"],
        &["vectors", "appendix-b"],
        &["decrypt", "--prv", "k.prv", "--block", "1", "--jobs", "0"],
    ] {
        let o = juoan2(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = juoan2(&["encrypt", "--pub", "missing.pub", "--block", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
