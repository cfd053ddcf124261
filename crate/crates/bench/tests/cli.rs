use std::fs;
use std::path::Path;
use std::process::Command;

use dsfft::fft::ifft;
use dsfft::Complex64;
use dsfft_bench::{gen_instance, read_dense, write_dense};

fn dsfft(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_dsfft")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read_sparse(path: &Path) -> Vec<(usize, Complex64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| {
            let t: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(t.len(), 3);
            (t[0].parse().unwrap(), Complex64::new(t[1].parse().unwrap(), t[2].parse().unwrap()))
        })
        .collect()
}

#[test]
fn forward_and_inverse_files() {
    let dir = tempfile::tempdir().unwrap();
    let instance = gen_instance(11, 12, 4).unwrap();
    let x = ifft(&instance.to_dense()).unwrap();
    let input = dir.path().join("x.txt");
    write_dense(fs::File::create(&input).unwrap(), &x).unwrap();

    let sparse = dir.path().join("y.txt");
    dsfft(&["fft", "--input", input.to_str().unwrap(), "--out", sparse.to_str().unwrap()]);
    let got = read_sparse(&sparse);
    assert_eq!(got.iter().map(|e| e.0).collect::<Vec<_>>(), instance.support);
    for ((_, v), want) in got.iter().zip(&instance.values) {
        assert!((v - want).norm() < 1e-8);
    }

    // Dense spectrum of the sparse vector itself, then back through the sparse inverse.
    let sparse_input = dir.path().join("s.txt");
    write_dense(fs::File::create(&sparse_input).unwrap(), &instance.to_dense()).unwrap();
    let spectrum = dir.path().join("shat.txt");
    dsfft(&["fft", "--dense", "--input", sparse_input.to_str().unwrap(), "--out", spectrum.to_str().unwrap()]);
    assert_eq!(read_dense(fs::read_to_string(&spectrum).unwrap().as_bytes()).unwrap().len(), 2048);

    let back = dir.path().join("back.txt");
    dsfft(&["ifft", "--input", spectrum.to_str().unwrap(), "--out", back.to_str().unwrap()]);
    let back = read_sparse(&back);
    assert_eq!(back.iter().map(|e| e.0).collect::<Vec<_>>(), instance.support);
    for ((_, v), want) in back.iter().zip(&instance.values) {
        assert!((v - want).norm() < 1e-8);
    }
}

#[test]
fn sweep_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rates.csv");
    dsfft(&["error-rate", "--J", "10", "--M", "4,8", "--trials", "5", "--out", path.to_str().unwrap()]);
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,failures,trials,rate_percent");
    assert_eq!(&lines[1..], ["4,0,5,0.0", "8,0,5,0.0"]);

    let out = dsfft(&["cond-table", "--J", "12", "--M", "10", "--trials", "3", "--cmax", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("J,M,c_max,mean_kappa,mean_gershgorin,runs\n12,10,5,"));

    let out = dsfft(&[
        "scaling", "--J", "10,12", "--M", "5", "--trials", "2", "--row-policy", "adaptive",
        "--sigma-policy", "distance-only", "--sequential",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("log-log slope"));
}

#[test]
fn recover_reports_levels() {
    let out = dsfft(&["recover", "--J", "13", "--M", "15", "--seed", "2"]);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("Sparse"));
    assert!(stderr.contains("success"));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 15);
}

#[test]
fn rejects_bad_input() {
    let out = Command::new(env!("CARGO_BIN_EXE_dsfft"))
        .args(["error-rate", "--cmax", "0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
