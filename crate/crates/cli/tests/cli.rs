use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hwz_core::codec;
use hwz_core::{pgm, GrayImage};

fn hwz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwz"))
        .args(args)
        .env("HWZ_THREADS", "2")
        .output()
        .expect("run hwz")
}

fn block8() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/block8.pgm")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn sample_image(dir: &Path) -> PathBuf {
    let (w, h) = (37, 21);
    let pixels = (0..w * h)
        .map(|i| ((i % w) * 5 + (i / w) * 3 + (i * 7919) % 13) as u8)
        .collect();
    let path = dir.join("sample.pgm");
    pgm::write_pgm(&GrayImage::new(w, h, pixels), &path, true).unwrap();
    path
}

#[test]
fn compress_decompress_roundtrip_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_image(dir.path());
    let packed = dir.path().join("out.hwz");
    let restored = dir.path().join("back.pgm");
    for mode in [["--mode", "standard"], ["--mode", "pyramid"]] {
        let o = hwz(&["compress", s(&input), s(&packed), mode[0], mode[1]]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("mse: 0"));
        let o = hwz(&["decompress", s(&packed), s(&restored)]);
        assert!(o.status.success());
        assert_eq!(pgm::read_pgm(&restored).unwrap(), pgm::read_pgm(&input).unwrap());
    }
}

#[test]
fn target_cr_on_block8() {
    let dir = tempfile::tempdir().unwrap();
    let packed = dir.path().join("b.hwz");
    let o = hwz(&["compress", s(&block8()), s(&packed), "--target-cr", "2.0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("cr: 2.56"), "{out}");
    assert!(out.contains("target: met"));
    let (header, sparse) = codec::decode(&fs::read(&packed).unwrap()).unwrap();
    assert_eq!(header.epsilon, 0.5f64.next_up());
    assert_eq!(sparse.nnz(), 25);
}

#[test]
fn threshold_flags_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_image(dir.path());
    let packed = dir.path().join("x.hwz");
    for (flags, method) in [
        (vec!["--soft", "4"], 2u8),
        (vec!["--universal"], 3),
        (vec!["--hard", "4", "--mode", "pyramid", "--levels", "3"], 1),
        (vec!["--target-psnr", "35", "--tol", "1"], 1),
    ] {
        let mut args = vec!["compress", s(&input), s(&packed)];
        args.extend(flags.iter().copied());
        let o = hwz(&args);
        assert!(
            o.status.success(),
            "{flags:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let bytes = fs::read(&packed).unwrap();
        assert_eq!(bytes[7], method, "{flags:?}");
    }
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_image(dir.path());
    let o = hwz(&["verify", s(&input)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("PASS: standard"));
    assert!(out.contains("PASS: pyramid"));
    assert!(
        hwz(&["verify", s(&block8()), "--mode", "pyramid", "--levels", "2"])
            .status
            .success()
    );
}

#[test]
fn analyze_row_accounting() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = hwz(&["analyze", s(&block8()), "--eps", "15,20,25", "--out", s(&csv)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "epsilon,method,cr,mse,psnr_db,energy_retained_pct,nnz");
    assert_eq!(lines.len(), 1 + 7);
    assert!(lines[1].starts_with("15,hard,"));
    assert!(lines[4].starts_with("15,soft,"));
    assert!(lines[7].contains(",universal,"));

    let o = hwz(&["analyze", s(&block8()), "--eps", "0:2:0.5", "--out", s(&csv)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1 + 2 * 5 + 1);
}

#[test]
fn metrics_text_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.pgm");
    let b = dir.path().join("b.pgm");
    fs::write(&a, "P2\n2 2\n255\n1 2 3 4\n").unwrap();
    fs::write(&b, "P2\n2 2\n255\n1 2 3 0\n").unwrap();
    let o = hwz(&["metrics", s(&a), s(&b)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mse: 4\n"));
    let o = hwz(&["metrics", s(&a), s(&a), "--csv"]);
    assert_eq!(stdout(&o), "mse,psnr_db,energy_retained_pct\n0,inf,100\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_image(dir.path());
    let out = dir.path().join("o.hwz");

    // usage errors
    assert_eq!(hwz(&[]).status.code(), Some(1));
    assert_eq!(hwz(&["compress", s(&input)]).status.code(), Some(1));
    assert_eq!(
        hwz(&["compress", s(&input), s(&out), "--hard", "1", "--soft", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hwz(&["compress", s(&input), s(&out), "--hard", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hwz(&["compress", s(&input), s(&out), "--mode", "wavelet"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hwz(&[
            "compress",
            s(&input),
            s(&out),
            "--mode",
            "pyramid",
            "--levels",
            "9"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        hwz(&["compress", s(&input), s(&out), "--target-cr", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hwz(&["analyze", s(&input), "--eps", "a,b", "--out", s(&out)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hwz(&["--help"]).status.code(), Some(0));

    // I/O and format errors
    let missing = dir.path().join("missing.pgm");
    assert_eq!(hwz(&["verify", s(&missing)]).status.code(), Some(2));
    let junk = dir.path().join("junk.hwz");
    fs::write(&junk, b"JUNKJUNKJUNK").unwrap();
    let o = hwz(&["decompress", s(&junk), s(&dir.path().join("x.pgm"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("magic"));
    fs::write(&junk, b"P2\n1 1\n65535\n0\n").unwrap();
    assert_eq!(hwz(&["verify", s(&junk)]).status.code(), Some(2));
}
