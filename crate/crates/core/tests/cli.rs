//! End-to-end runs of the `fracdw` binary.

use std::path::Path;
use std::process::{Command, Output};

fn fracdw(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdw"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("FRACDW_OUT")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const BAD_K: &str = "\
[problem]
kind = diffusion
alpha = 0.5
l = 1
T = 1
[coefficients]
k = x - 0.5
q = 0
f = 1
[boundary]
kind = dirichlet
[initial]
u0 = sin(pi*x)
";

const GOOD: &str = "\
[problem]
kind = diffusion
alpha = 0.5
l = 1
T = 1
[coefficients]
k = 1 + 0.5*sin(pi*x)*exp(-t)
q = 1
f = sin(pi*x)
[boundary]
kind = dirichlet
[initial]
u0 = sin(pi*x)
";

#[test]
fn solve_writes_field_and_norms() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdw(
        &[
            "solve",
            "--catalog",
            "diffusion-dirichlet-poly",
            "--alpha",
            "0.5",
            "--nx",
            "8",
            "--nt",
            "8",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let field =
        std::fs::read_to_string(dir.path().join("diffusion-dirichlet-poly_field.csv")).unwrap();
    assert!(field.contains("# t, x, u"));
    assert!(dir
        .path()
        .join("diffusion-dirichlet-poly_norms.csv")
        .exists());
    assert!(stdout(&o).contains("max error"));
}

#[test]
fn solve_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "solve",
        "--catalog",
        "wave-robin-poly",
        "--alpha",
        "0.7",
        "--nx",
        "32",
        "--nt",
        "16",
    ];
    assert_eq!(code(&fracdw(&args, a.path())), 0);
    assert_eq!(code(&fracdw(&args, b.path())), 0);
    for f in ["wave-robin-poly_field.csv", "wave-robin-poly_norms.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn out_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fracdw"))
        .args([
            "solve",
            "--catalog",
            "diffusion-varcoef",
            "--alpha",
            "0.5",
            "--nx",
            "4",
            "--nt",
            "4",
        ])
        .env("FRACDW_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("diffusion-varcoef_field.csv").exists());
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdw(
        &[
            "solve",
            "--catalog",
            "diffusion-dirichlet-pol",
            "--alpha",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("diffusion-dirichlet-poly"));
    for alpha in ["1.0", "0", "-0.2", "nan"] {
        let o = fracdw(
            &["solve", "--catalog", "diffusion-varcoef", "--alpha", alpha],
            dir.path(),
        );
        assert_eq!(code(&o), 2, "alpha {alpha}");
    }
    let o = fracdw(
        &[
            "solve",
            "--catalog",
            "diffusion-varcoef",
            "--alpha",
            "0.5",
            "--nx",
            "6",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    let o = fracdw(
        &[
            "converge",
            "--catalog",
            "diffusion-varcoef",
            "--alpha",
            "0.5",
            "--levels",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn violated_hypothesis_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.problem");
    std::fs::write(&file, BAD_K).unwrap();
    let o = fracdw(
        &["solve", "--problem-file", file.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypotheses"));
}

#[test]
fn problem_file_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("good.problem");
    std::fs::write(&file, GOOD).unwrap();
    let o = fracdw(
        &[
            "verify",
            "--problem-file",
            file.to_str().unwrap(),
            "--nx",
            "16",
            "--nt",
            "16",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks pass"));
}

#[test]
fn io_failure_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = fracdw(
        &[
            "solve",
            "--catalog",
            "diffusion-varcoef",
            "--alpha",
            "0.5",
            "--nx",
            "4",
            "--nt",
            "4",
        ],
        &blocker,
    );
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdw(
        &[
            "verify",
            "--catalog",
            "wave-dirichlet-poly",
            "--alpha",
            "0.5",
            "--nx",
            "32",
            "--nt",
            "32",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("(informational)"));
    let o = fracdw(
        &[
            "verify",
            "--catalog",
            "diffusion-robin-poly",
            "--alpha",
            "0.5",
            "--nx",
            "32",
            "--nt",
            "32",
            "--constant",
            "0.01",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn converge_reports_exact_row_and_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdw(
        &[
            "converge",
            "--catalog",
            "diffusion-dirichlet-poly",
            "--alpha",
            "0.5",
            "--levels",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let csv =
        std::fs::read_to_string(dir.path().join("diffusion-dirichlet-poly_converge.csv")).unwrap();
    let exact_row = csv.lines().find(|l| l.ends_with("exact, exact")).unwrap();
    let max: f64 = exact_row.split(", ").nth(2).unwrap().parse().unwrap();
    assert_eq!(max, 0.0);
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn suite_selection_and_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = fracdw(&["suite", "--only", "lemma1,4"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(dir.path().join("row03_lemma1.csv").exists());
    assert!(dir.path().join("row04_lemma2.csv").exists());
    let o = fracdw(&["suite", "--only", "lemma1", "--tol", "0"], dir.path());
    assert_eq!(code(&o), 1);
    let o = fracdw(&["suite", "--only", "nonsense"], dir.path());
    assert_eq!(code(&o), 2);
}
