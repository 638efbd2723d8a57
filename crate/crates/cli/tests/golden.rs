use std::fs;
use std::path::PathBuf;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roughsig::rough_path::PiecewiseLinearPath;

const SEED: u64 = 20240917;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn seeded_path() -> PiecewiseLinearPath {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let n = 12;
    let times: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let mut points = vec![vec![0.0, 0.0]];
    for _ in 1..n {
        let last = points.last().unwrap();
        let next = vec![
            last[0] + rng.random_range(-0.5..0.5),
            last[1] + rng.random_range(-0.5..0.5),
        ];
        points.push(next);
    }
    PiecewiseLinearPath::new(times, points).unwrap()
}

fn sign(path: &PathBuf) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_roughsig"))
        .args(["sign", path.to_str().unwrap(), "--level", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    out.stdout
}

/// Rewrites the frozen fixture. Run with `--ignored` only when the format
/// changes on purpose.
#[test]
#[ignore]
fn regenerate_golden_fixture() {
    let csv = fixtures().join("seeded_path.csv");
    fs::write(&csv, seeded_path().to_csv()).unwrap();
    fs::write(fixtures().join("seeded_path.sign4.json"), sign(&csv)).unwrap();
}

#[test]
fn fixture_path_is_the_seeded_path() {
    let stored = fs::read_to_string(fixtures().join("seeded_path.csv")).unwrap();
    assert_eq!(stored, seeded_path().to_csv());
}

#[test]
fn sign_matches_frozen_output() {
    let expected = fs::read(fixtures().join("seeded_path.sign4.json")).unwrap();
    let csv = fixtures().join("seeded_path.csv");
    assert_eq!(sign(&csv), expected);
    assert_eq!(sign(&csv), expected);
}
