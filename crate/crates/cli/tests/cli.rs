use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use blockcoh::linalg::c64;
use blockcoh::{random, CMatrix};
use blockcoh_cli::doc;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_blockcoh"));
    c.env_remove("BLOCKCOH_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{out}"))
        .to_string()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn doc(&self, name: &str, v: &Value) -> PathBuf {
        let p = self.dir.path().join(name);
        doc::write(&p, v).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn pair_states(f: &Fixture) -> (PathBuf, PathBuf, PathBuf) {
    let st = f.file("s.json", r#"{"groups": [[0, 1], [2, 3]]}"#);
    let a = (0.7f64 / 2.0).sqrt();
    let b = (0.3f64 / 2.0).sqrt();
    let x = f.file("x.json", r#"{"amplitudes": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]}"#);
    let y = f.doc(
        "y.json",
        &doc::state_doc(&blockcoh::CVector::from_vec(vec![c64(a, 0.0), c64(a, 0.0), c64(b, 0.0), c64(b, 0.0)])),
    );
    (st, x, y)
}

fn hadamard(f: &Fixture) -> (PathBuf, PathBuf) {
    let r = c64(0.5f64.sqrt(), 0.0);
    let h = blockcoh::linalg::kron(&CMatrix::from_row_slice(2, 2, &[r, r, r, -r]), &CMatrix::identity(2, 2));
    (
        f.doc("h.json", &doc::channel_doc(&[h])),
        f.file("s.json", r#"{"groups": [[0, 1], [2, 3]]}"#),
    )
}

#[test]
fn documents_round_trip_bit_identically() {
    let f = Fixture::new();
    let mut rng = random::rng(1);
    let m = random::gaussian_matrix(&mut rng, 3, 3) * c64(1.0 / 3.0, 0.0);
    let p = f.doc("m.json", &doc::density_doc(&m));
    let first = fs::read_to_string(&p).unwrap();
    let back = doc::density(&p).unwrap();
    for (a, b) in m.iter().zip(back.iter()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
    doc::write(&p, &doc::density_doc(&back)).unwrap();
    assert_eq!(first, fs::read_to_string(&p).unwrap());

    let u = random::haar_unitary(&mut rng, 4);
    let k = f.doc("k.json", &doc::channel_doc(std::slice::from_ref(&u)));
    assert_eq!(doc::channel(&k).unwrap()[0], u);
}

#[test]
fn convert_reports_gammas_and_emits_kraus() {
    let f = Fixture::new();
    let (st, x, y) = pair_states(&f);
    let out_path = f.path("kraus.json");
    let before = fs::read_to_string(&x).unwrap();
    let o = run(&["convert", "--from", s(&x), "--to", s(&y), "--structure", s(&st), "--emit-kraus", s(&out_path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for key in ["gamma_sq.0", "gamma_sq.1"] {
        assert!((value(&out, key).parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    }
    assert!((value(&out, "fidelity").parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(value(&out, "block_incoherent"), "true");
    assert_eq!(before, fs::read_to_string(&x).unwrap());

    let o = run(&["check-channel", "--channel", s(&out_path), "--structure", s(&st)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "block_incoherent"), "true");
}

#[test]
fn reversed_conversion_exits_three() {
    let f = Fixture::new();
    let (st, x, y) = pair_states(&f);
    let o = run(&["convert", "--from", s(&y), "--to", s(&x), "--structure", s(&st)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("prefix 1"), "{}", stderr(&o));
}

#[test]
fn malformed_json_names_line_and_column() {
    let f = Fixture::new();
    let st = f.file("s.json", "{\"groups\":\n  [[0, 1],, [2]]}");
    let x = f.file("x.json", r#"{"amplitudes": [[1, 0], [0, 0], [0, 0]]}"#);
    let o = run(&["measure", "--state", s(&x), "--structure", s(&st)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("s.json:2:11"), "{}", stderr(&o));
}

#[test]
fn schema_violations_carry_pointers() {
    let f = Fixture::new();
    let st = f.file("s.json", r#"{"groups": [[0], [1]]}"#);
    let x = f.file("x.json", r#"{"amplitudes": [[1, 0], [0]]}"#);
    let o = run(&["measure", "--state", s(&x), "--structure", s(&st)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/amplitudes/1"), "{}", stderr(&o));

    let bad = f.file("bad.json", r#"{"groups": [[0], [2]]}"#);
    let o = run(&["measure", "--state", s(&x), "--structure", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("schema violation at /groups"), "{}", stderr(&o));

    let k = f.file("k.json", r#"{"kraus": [[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}"#);
    let o = run(&["check-channel", "--channel", s(&k), "--structure", s(&st)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("residual"), "{}", stderr(&o));
    assert!(stderr(&o).contains("/kraus"), "{}", stderr(&o));
}

#[test]
fn dimension_mismatch_prints_both_dims() {
    let f = Fixture::new();
    let st = f.file("s.json", r#"{"groups": [[0, 1], [2]]}"#);
    let x = f.file("x.json", r#"{"amplitudes": [[1, 0], [0, 0]]}"#);
    let o = run(&["measure", "--state", s(&x), "--structure", s(&st)]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains('3') && e.contains('2'), "{e}");
}

#[test]
fn measure_pure_and_mixed() {
    let f = Fixture::new();
    let single = f.file("one.json", r#"{"groups": [[0, 1]]}"#);
    let x = f.file("x.json", r#"{"amplitudes": [[1, 0], [0, 0]]}"#);
    let o = run(&["measure", "--state", s(&x), "--structure", s(&single)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "weights"), "[1.0]");
    assert_eq!(value(&out, "c_l1").parse::<f64>().unwrap(), 0.0);

    let st = f.file("s.json", r#"{"groups": [[0], [1]]}"#);
    let rho = f.file("rho.json", r#"{"density": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}"#);
    let o = run(&["--json", "measure", "--density", "--state", s(&rho), "--structure", s(&st)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["c_l1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["c_entropy"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["structure.blocks"], 2);
}

#[test]
fn powers_of_the_block_hadamard() {
    let f = Fixture::new();
    let (h, st) = hadamard(&f);
    for cmd in ["bcp", "bdp"] {
        let o = run(&[cmd, "--channel", s(&h), "--structure", s(&st), "--restarts", "4"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let out = stdout(&o);
        assert!((value(&out, "value").parse::<f64>().unwrap() - 1.0).abs() < 1e-6, "{out}");
        assert_eq!(value(&out, "restarts"), "4");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let f = Fixture::new();
    let mut rng = random::rng(5);
    let st = f.file("s.json", r#"{"groups": [[0], [1, 2]]}"#);
    let ch = f.doc("u.json", &doc::channel_doc(&[random::haar_unitary(&mut rng, 3)]));
    let args = ["bcp", "--channel", s(&ch), "--structure", s(&st), "--restarts", "3"];
    let a = bin().args(args).env("BLOCKCOH_SEED", "17").output().unwrap();
    let b = bin().args(args).arg("--seed").arg("17").output().unwrap();
    let c = run(&args);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn gate_subcommand() {
    let f = Fixture::new();
    let mut rng = random::rng(6);
    let st = f.file("s.json", r#"{"groups": [[0, 2], [1]]}"#);
    let u = f.doc("u.json", &doc::unitary_doc(&random::haar_unitary(&mut rng, 3)));
    let x = f.doc("x.json", &doc::state_doc(&random::unit_vector(&mut rng, 3)));
    let o = run(&["gate", "--unitary", s(&u), "--structure", s(&st), "--state", s(&x)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!((value(&out, "fidelity").parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert!((value(&out, "ancilla_c_l1_before").parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert!(value(&out, "ancilla_c_l1_after").parse::<f64>().unwrap() < 1e-9);
    assert_eq!(value(&out, "completion"), "true");
}

#[test]
fn kcoh_subcommand() {
    let o = run(&["kcoh", "--d", "4", "--k", "2", "--trials", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "structures"), "10");
    assert_eq!(value(&out, "probe.certificate_violations"), "0");
    assert!(out.contains("[[0,1],[2,3]]"));

    let o = run(&["kcoh", "--d", "6", "--k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stdout(&o).contains("probe."));
    assert_eq!(run(&["kcoh", "--d", "6", "--k", "3", "--trials", "5"]).status.code(), Some(2));
    assert_eq!(run(&["kcoh", "--d", "9", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn demo_is_deterministic_and_passes() {
    let a = run(&["demo"]);
    assert!(a.status.success(), "{}", stdout(&a));
    let out = stdout(&a);
    assert!(out.contains("C_l1(MC, M=4) = 3"));
    assert!(out.contains("BDP(H) = 1"));
    assert!(out.contains("failed=0"));
    assert_eq!(out, stdout(&run(&["demo"])));
    let j = run(&["--json", "demo"]);
    let rows: Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["pass"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["convert"]).status.code(), Some(2));
    let o = run(&["measure", "--state", "/nonexistent.json", "--structure", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
}
