use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

use moyal::basis::{f_grid, h_grid, hh_grid};
use moyal::io::{read_file, write_file, Data, Format};
use moyal::{star_coeff, synthesize, CoefficientMatrix, GridSpec1, GridSpec2};

fn moyal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(args)
        .env_remove("MOYAL_GRID")
        .output()
        .expect("spawn moyal")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_coeff(dir: &TempDir, name: &str, c: &CoefficientMatrix) -> PathBuf {
    let p = path(dir, name);
    write_file(&p, &Data::Coeff(c.clone()), Format::Json).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn basis_writes_f00_with_centre_value_two() {
    let dir = TempDir::new().unwrap();
    for format in ["json", "csv", "bin"] {
        let out = path(&dir, &format!("f00.{format}"));
        let run = moyal(&["basis", "--m", "0", "--n", "0", "--grid", "n=256,step=0.0625", "--out", s(&out)]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        let Data::Grid2(g) = read_file(&out).unwrap() else { panic!("expected grid2") };
        assert_eq!(g.spec(), GridSpec2::square(GridSpec1::new(256, 0.0625).unwrap()));
        assert_eq!(g.at(128, 128), Complex64::new(2.0, 0.0));
    }
}

#[test]
fn basis_line_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "h1.json");
    assert_eq!(code(&moyal(&["basis", "--m", "1", "--line", "--out", s(&out)])), 0);
    let Data::Grid1(h) = read_file(&out).unwrap() else { panic!("expected grid1") };
    assert_eq!(h, h_grid(1, GridSpec1::default_axis()));

    assert_eq!(code(&moyal(&["basis", "--m", "0"])), 2);
    assert_eq!(code(&moyal(&["basis", "--m", "0", "--grid", "n=7", "--out", s(&out)])), 2);
    assert_eq!(code(&moyal(&["frobnicate"])), 2);
    assert_eq!(code(&moyal(&["--help"])), 0);
}

#[test]
fn grid_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "h0.bin");
    let run = Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(["basis", "--m", "0", "--line", "--out", s(&out)])
        .env("MOYAL_GRID", "n=64,step=0.25")
        .output()
        .unwrap();
    assert_eq!(code(&run), 0);
    let Data::Grid1(h) = read_file(&out).unwrap() else { panic!() };
    assert_eq!(h.spec(), GridSpec1::new(64, 0.25).unwrap());
}

#[test]
fn star_coefficient_mode() {
    let dir = TempDir::new().unwrap();
    let a = write_coeff(&dir, "e01.json", &CoefficientMatrix::unit(3, 0, 1));
    let b = write_coeff(&dir, "e11.json", &CoefficientMatrix::unit(3, 1, 1));
    let z = write_coeff(&dir, "zero.json", &CoefficientMatrix::zeros(3));
    let out = path(&dir, "prod.json");
    assert_eq!(code(&moyal(&["star", s(&a), s(&b), "--out", s(&out)])), 0);
    assert_eq!(read_file(&out).unwrap(), Data::Coeff(CoefficientMatrix::unit(3, 0, 1)));
    assert_eq!(code(&moyal(&["star", s(&z), s(&a), "--out", s(&out)])), 0);
    assert_eq!(read_file(&out).unwrap(), Data::Coeff(CoefficientMatrix::zeros(3)));
    let missing = path(&dir, "nope.json");
    assert_eq!(code(&moyal(&["star", s(&missing), s(&a), "--out", s(&out)])), 3);
}

#[test]
fn star_grid_mode_agrees_with_coefficients() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut random = || {
        CoefficientMatrix::from_fn(6, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    };
    let (a, b) = (random(), random());
    let pa = write_coeff(&dir, "a.json", &a);
    let pb = write_coeff(&dir, "b.json", &b);
    let out = path(&dir, "ab.bin");
    let run = moyal(&["star", s(&pa), s(&pb), "--mode", "grid", "--out", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let Data::Grid2(g) = read_file(&out).unwrap() else { panic!() };
    let want = synthesize(&star_coeff(&a, &b), GridSpec2::default());
    assert!(g.max_abs_diff(&want) < 1e-6);

    // A grid input analyzed back to coefficients.
    let ga = path(&dir, "a-grid.bin");
    write_file(&ga, &Data::Grid2(synthesize(&a, GridSpec2::default())), Format::Bin).unwrap();
    let out = path(&dir, "ab.json");
    assert_eq!(code(&moyal(&["star", s(&ga), s(&pb), "--order", "6", "--out", s(&out)])), 0);
    let Data::Coeff(c) = read_file(&out).unwrap() else { panic!() };
    assert!(c.max_abs_diff(&star_coeff(&a, &b)) < 1e-6);
}

#[test]
fn wigner_and_weyl() {
    let dir = TempDir::new().unwrap();
    let spec = GridSpec2::default();
    let f00 = path(&dir, "f00.bin");
    write_file(&f00, &Data::Grid2(f_grid(0, 0, spec)), Format::Bin).unwrap();
    let w = path(&dir, "w.bin");
    assert_eq!(code(&moyal(&["wigner", s(&f00), "--direction", "forward", "--out", s(&w)])), 0);
    let Data::Grid2(g) = read_file(&w).unwrap() else { panic!() };
    assert!(g.max_abs_diff(&hh_grid(0, 0, spec)) < 1e-7);
    let back = path(&dir, "back.bin");
    assert_eq!(code(&moyal(&["wigner", s(&w), "--direction", "inverse", "--out", s(&back)])), 0);
    let Data::Grid2(b) = read_file(&back).unwrap() else { panic!() };
    assert!(b.max_abs_diff(&f_grid(0, 0, spec)) < 1e-12);

    let symbol = path(&dir, "f21.bin");
    write_file(&symbol, &Data::Grid2(f_grid(2, 1, spec)), Format::Bin).unwrap();
    let phi = path(&dir, "h1.bin");
    write_file(&phi, &Data::Grid1(h_grid(1, spec.p)), Format::Bin).unwrap();
    let out = path(&dir, "out.bin");
    assert_eq!(code(&moyal(&["weyl", s(&symbol), s(&phi), "--out", s(&out)])), 0);
    let Data::Grid1(r) = read_file(&out).unwrap() else { panic!() };
    assert!(r.max_abs_diff(&h_grid(2, spec.q)) < 1e-7);

    assert_eq!(code(&moyal(&["weyl", s(&symbol), s(&symbol), "--out", s(&out)])), 2);
}

#[test]
fn undecayed_input_is_a_check_failure() {
    let dir = TempDir::new().unwrap();
    let axis = GridSpec1::new(32, 0.25).unwrap();
    let f = path(&dir, "wide.bin");
    write_file(&f, &Data::Grid2(f_grid(0, 0, GridSpec2::square(axis))), Format::Bin).unwrap();
    let out = path(&dir, "o.bin");
    let run = moyal(&["wigner", s(&f), "--out", s(&out)]);
    assert_eq!(code(&run), 1);
    assert!(String::from_utf8_lossy(&run.stderr).contains("grid too small"));
}

#[test]
fn classify_reports() {
    let v = json(&moyal(&["classify", "sep(exp(1.0), one)"]));
    assert_eq!(
        (v["ML"].clone(), v["MR"].clone(), v["M"].clone()),
        (Value::Bool(true), Value::Bool(false), Value::Bool(false))
    );
    let v = json(&moyal(&["classify", "sep(one, exp(1.0))"]));
    assert_eq!((v["ML"].as_bool(), v["MR"].as_bool()), (Some(false), Some(true)));
    let v = json(&moyal(&[
        "classify",
        "diag(one)",
        "--weights",
        "-1,-1",
        "--weights",
        "0,-1",
        "--space",
        "B(0,0)",
    ]));
    assert_eq!(v["M"], Value::Bool(true));
    let squared = v["norms"][0]["squared"].as_f64().unwrap();
    assert!((squared - std::f64::consts::PI.powi(2) / 8.0).abs() < 1e-10);
    assert_eq!(v["norms"][1]["outcome"], "divergent");
    assert_eq!(v["spaces"][0]["verdict"], "In");
    let v = json(&moyal(&["classify", "sep(pow(-1), pow(-1))"]));
    assert_eq!(v["M"], Value::Bool(false));
    assert_eq!(v["ml_witness"]["at"].as_f64(), Some(1.0));

    assert_eq!(code(&moyal(&["classify", "sep(exp(1.0)"])), 2);
    assert_eq!(code(&moyal(&["classify"])), 2);
}

#[test]
fn classify_truncated_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write_coeff(&dir, "e12.json", &CoefficientMatrix::unit(3, 1, 2));
    let v = json(&moyal(&["classify", "--matrix", s(&p), "--weights", "2,0"]));
    assert!(v.get("ML").is_none());
    assert_eq!(v["spaces"][0]["truncation"].as_u64(), Some(3));
    assert!((v["spaces"][0]["norm"].as_f64().unwrap() - 3.0).abs() < 1e-14);
}

#[test]
fn factorize_certificate_and_factors() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = CoefficientMatrix::from_fn(8, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let input = write_coeff(&dir, "c.json", &c);
    let (g, h) = (path(&dir, "g.bin"), path(&dir, "h.csv"));
    let run = moyal(&["factorize", s(&input), "--r", "2", "--g", s(&g), "--h", s(&h)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let v = json(&run);
    assert_eq!(v["holds"], Value::Bool(true));
    assert!(v["trace_norm"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
    let (Data::Coeff(g), Data::Coeff(h)) = (read_file(&g).unwrap(), read_file(&h).unwrap()) else { panic!() };
    assert!(star_coeff(&g, &h).max_abs_diff(&c) < 1e-12);

    assert_eq!(code(&moyal(&["factorize", s(&input), "--r", "1"])), 2);
}

#[test]
fn verify_class_suite() {
    let run = moyal(&["verify", "--suite", "class", "--json", "--seed", "5"]);
    assert_eq!(code(&run), 0);
    let v = json(&run);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["seed"].as_u64(), Some(5));
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"A09"));

    let strict = moyal(&["verify", "--suite", "class", "--tol", "A10.residual=-1"]);
    assert_eq!(code(&strict), 1);
    assert!(String::from_utf8_lossy(&strict.stdout).contains("FAIL A10.residual"));
    assert_eq!(code(&moyal(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&moyal(&["verify", "--suite", "class", "--tol", "oops"])), 2);
}

#[test]
fn deterministic_output() {
    let a = moyal(&["verify", "--suite", "class", "--json"]);
    let b = moyal(&["verify", "--suite", "class", "--json"]);
    let strip = |o: &Output| {
        let mut v = json(o);
        for c in v["checks"].as_array_mut().unwrap() {
            c["seconds"] = Value::Null;
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
}
