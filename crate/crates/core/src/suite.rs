//! The verification battery behind `fracdw suite` and the acceptance test.
//!
//! Each row is a list of named sub-checks. Rows are independent and run
//! concurrently; their CSV output is a pure function of the configuration,
//! so two runs produce identical bytes.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy_monitor::{
    calibrate, check_lemma1, check_lemma2, check_ordering, check_poincare, check_theorem,
    check_theorem1, check_theorem3_printed, l1_fractional_ode, lemma1_quadratic_margin,
    lemma1_sos_margin, norms, theorem1_constant, trace_margin, Calibration, EstimateReport,
    CALIBRATION_SET,
};
use crate::exec::Execution;
use crate::fractional_ops::{
    caputo_l1, gamma_fn, l1_weights, rl_integral, FracOrder, TimeGrid, TimeSeries,
};
use crate::mittag_leffler::{branches, ml_one, ml_two};
use crate::numeric::observed_order;
use crate::problem_spec::{manufactured, ScalarFn, SpaceTimeFn, Theorem};
use crate::solver::{solve_with, SolutionField, SolverOptions};

/// Row number, selection key and title.
pub const ROWS: [(usize, &str, &str); 10] = [
    (1, "special", "special functions"),
    (2, "operators", "operator accuracy"),
    (3, "lemma1", "Lemma 1 coercivity"),
    (4, "lemma2", "Lemma 2 Gronwall bound"),
    (5, "theorem1", "Theorem 1 with explicit constant"),
    (6, "theorems234", "Theorems 2-4 calibrated constants"),
    (7, "auxiliary", "auxiliary inequalities"),
    (8, "dependence", "continuous dependence"),
    (9, "convergence", "solver convergence"),
    (10, "determinism", "runtime and determinism"),
];

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Multiplies every tolerance; `0` leaves only exact agreement.
    pub tol_scale: f64,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tol_scale: 1.0,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    /// Wall-clock checks are kept out of the CSV output.
    pub timed: bool,
}

impl SubCheck {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        SubCheck {
            name: name.into(),
            pass,
            detail,
            timed: false,
        }
    }

    /// `value ≤ bound`.
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        SubCheck::new(
            name,
            value <= bound,
            format!("value = {value:.16e} bound = {bound:.16e}"),
        )
    }

    /// `value ≥ bound`.
    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        SubCheck::new(
            name,
            value >= bound,
            format!("value = {value:.16e} floor = {bound:.16e}"),
        )
    }

    fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        SubCheck::new(
            name,
            value >= lo && value <= hi,
            format!("value = {value:.16e} window = [{lo:.16e}, {hi:.16e}]"),
        )
    }

    fn runtime(name: impl Into<String>, took: Duration, limit: Duration) -> Self {
        SubCheck {
            name: name.into(),
            pass: took <= limit,
            detail: format!(
                "{:.3} s (limit {:.0} s)",
                took.as_secs_f64(),
                limit.as_secs_f64()
            ),
            timed: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub id: usize,
    pub key: &'static str,
    pub title: &'static str,
    pub checks: Vec<SubCheck>,
    /// Output files by name.
    pub files: BTreeMap<String, String>,
}

impl RowOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&SubCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Sub-check table as CSV.
    pub fn checks_csv(&self) -> String {
        let mut s = format!(
            "## row = {}\n## title = {}\n# check, pass, detail\n",
            self.id, self.title
        );
        for c in self.checks.iter().filter(|c| !c.timed) {
            let _ = writeln!(s, "{}, {}, {}", c.name, c.pass, c.detail);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub rows: Vec<RowOutcome>,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(RowOutcome::pass)
    }

    /// One line per row, then one line per failed sub-check.
    pub fn matrix(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let ok = r.checks.iter().filter(|c| c.pass).count();
            let _ = writeln!(
                s,
                "{:>2} {:<12} {} ({}/{}) {}",
                r.id,
                r.key,
                if r.pass() { "PASS" } else { "FAIL" },
                ok,
                r.checks.len(),
                r.title
            );
        }
        for r in &self.rows {
            for c in r.failures() {
                let _ = writeln!(s, "   row {} failed: {}: {}", r.id, c.name, c.detail);
            }
        }
        s
    }

    /// Writes every row's files under `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for r in &self.rows {
            for (name, body) in all_files(r) {
                std::fs::write(dir.join(name), body)?;
            }
        }
        Ok(())
    }
}

fn all_files(r: &RowOutcome) -> BTreeMap<String, String> {
    let mut files = r.files.clone();
    files.insert(format!("row{:02}_{}.csv", r.id, r.key), r.checks_csv());
    files
}

/// Resolves a selection entry (key or number) to a row id.
pub fn row_id(sel: &str) -> Option<usize> {
    ROWS.iter()
        .find(|(id, key, _)| *key == sel || id.to_string() == sel)
        .map(|r| r.0)
}

/// Runs the selected rows (all when `only` is empty) concurrently.
pub fn run_suite(cfg: &SuiteConfig, only: &[usize]) -> SuiteOutcome {
    let ids: Vec<usize> = if only.is_empty() {
        ROWS.iter().map(|r| r.0).collect()
    } else {
        ROWS.iter()
            .map(|r| r.0)
            .filter(|id| only.contains(id))
            .collect()
    };
    let rows = cfg.exec.map_slice(&ids, |&id| run_row(id, cfg));
    SuiteOutcome { rows }
}

pub fn run_row(id: usize, cfg: &SuiteConfig) -> RowOutcome {
    let (_, key, title) = ROWS[id - 1];
    let mut files = BTreeMap::new();
    let checks = match id {
        1 => row_special(cfg),
        2 => row_operators(cfg),
        3 => row_lemma1(cfg),
        4 => row_lemma2(cfg, &mut files),
        5 => row_theorem1(cfg, &mut files),
        6 => row_theorems234(cfg, &mut files),
        7 => row_auxiliary(cfg),
        8 => row_dependence(cfg, &mut files),
        9 => row_convergence(cfg, &mut files),
        10 => row_determinism(cfg),
        _ => unreachable!("row ids are 1..=10"),
    };
    RowOutcome {
        id,
        key,
        title,
        checks,
        files,
    }
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).expect("suite orders lie in (0, 1)")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn report_check(name: impl Into<String>, r: &EstimateReport, cfg: &SuiteConfig) -> SubCheck {
    let mut r = r.clone();
    r.retolerance(r.tol_report / r.rhs.max().max(1.0) * cfg.tol_scale);
    let mut c = SubCheck::at_least(name, r.min_margin, -r.tol_report);
    c.pass = r.holds();
    c
}

fn solve_or_fail(
    spec: &crate::problem_spec::ProblemSpec,
    nx: usize,
    nt: usize,
    cfg: &SuiteConfig,
) -> Result<SolutionField, String> {
    let grid = spec.grid(nx, nt).map_err(|e| e.to_string())?;
    let opts = SolverOptions {
        exec: cfg.exec,
        ..SolverOptions::default()
    };
    solve_with(spec, &grid, &opts).map_err(|e| e.to_string())
}

fn error_check(name: impl Into<String>, err: String) -> SubCheck {
    SubCheck::new(name, false, format!("error: {err}"))
}

// ---------------------------------------------------------------------------
// row 1

fn row_special(cfg: &SuiteConfig) -> Vec<SubCheck> {
    let start = Instant::now();
    let tol = 1e-10 * cfg.tol_scale;
    let mut out = Vec::new();
    let mut value = |name: &str, got: Result<f64, _>, want: f64| match got {
        Ok(v) => out.push(SubCheck::at_most(name, rel(v, want), tol)),
        Err(e) => out.push(error_check(name, format!("{e}"))),
    };
    value("E_1(1) = e", ml_one(1.0, 1.0), E);
    value("E_2(1) = cosh 1", ml_one(2.0, 1.0), 1f64.cosh());
    value("E_1,2(1) = e - 1", ml_two(1.0, 2.0, 1.0), E - 1.0);
    for (a, mu) in [(0.3, 0.7), (0.5, 1.0), (0.8, 2.5), (1.5, 4.0)] {
        let want = 1.0 / gamma_fn(mu).expect("positive argument");
        value(
            &format!("E_{a},{mu}(0) = 1/Gamma({mu})"),
            ml_two(a, mu, 0.0),
            want,
        );
    }

    // branch agreement on 8 <= |z| <= 12
    let seam_tol = 1e-7 * cfg.tol_scale;
    for a in [0.3, 0.5, 0.8] {
        for mu in [1.0, a] {
            let mut pos: f64 = 0.0;
            let mut neg: f64 = 0.0;
            for k in 0..=40 {
                let z = 8.0 + 0.1 * k as f64;
                let s = branches::series_scaled(a, mu, z);
                let x = branches::exponential_asymptotic_scaled(a, mu, z);
                pos = pos.max(rel(x, s));
                let q = branches::integral_negative(a, mu, -z);
                let (asym, _) = branches::algebraic_asymptotic(a, mu, -z);
                neg = neg.max(rel(asym, q));
            }
            out.push(SubCheck::at_most(
                format!("alpha={a} mu={mu:.1}: series vs exponential asymptotic, z in [8, 12]"),
                pos,
                seam_tol,
            ));
            out.push(SubCheck::at_most(
                format!("alpha={a} mu={mu:.1}: integral vs algebraic asymptotic, z in [-12, -8]"),
                neg,
                seam_tol,
            ));
        }
    }
    out.push(SubCheck::runtime(
        "runtime",
        start.elapsed(),
        Duration::from_secs(1),
    ));
    out
}

// ---------------------------------------------------------------------------
// row 2

fn row_operators(cfg: &SuiteConfig) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let levels = [64, 128, 256, 512];
    for a in [0.3, 0.5, 0.8] {
        let alpha = order(a);
        let g3 = gamma_fn(3.0 - a).expect("positive argument");
        let errs: Vec<f64> = levels
            .iter()
            .map(|&nt| {
                let grid = TimeGrid::new(1.0, nt).expect("valid grid");
                let d = caputo_l1(&TimeSeries::from_fn(grid, |t| t * t), alpha);
                d.values()
                    .iter()
                    .enumerate()
                    .map(|(n, v)| (v - 2.0 * grid.t(n).powf(2.0 - a) / g3).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let half = 0.2 * cfg.tol_scale;
        for (w, nts) in errs.windows(2).zip(levels.windows(2)) {
            out.push(SubCheck::within(
                format!("caputo_l1 t^2 order alpha={a} Nt {}->{}", nts[0], nts[1]),
                observed_order(w[0], w[1]),
                2.0 - a - half,
                2.0 - a + half,
            ));
        }

        let grid = TimeGrid::new(1.5, 64).expect("valid grid");
        let g1 = gamma_fn(1.0 + a).expect("positive argument");
        let g2 = gamma_fn(2.0 + a).expect("positive argument");
        let c = rl_integral(&TimeSeries::from_fn(grid, |_| 3.0), alpha);
        let lin = rl_integral(&TimeSeries::from_fn(grid, |t| 2.0 - t), alpha);
        let mut worst: f64 = 0.0;
        for n in 0..=grid.nt() {
            let t = grid.t(n);
            let tc = 3.0 * t.powf(a) / g1;
            let tl = 2.0 * t.powf(a) / g1 - t.powf(1.0 + a) / g2;
            worst = worst
                .max((c.values()[n] - tc).abs())
                .max((lin.values()[n] - tl).abs());
        }
        out.push(SubCheck::at_most(
            format!("rl_integral exact on constants and linears alpha={a}"),
            worst,
            1e-13 * cfg.tol_scale,
        ));

        let comp: Vec<f64> = levels
            .iter()
            .map(|&nt| {
                let grid = TimeGrid::new(1.0, nt).expect("valid grid");
                let v = TimeSeries::from_fn(grid, |t| (2.0 * t).sin() + t * t);
                let back = rl_integral(&caputo_l1(&v, alpha), alpha);
                back.values()
                    .iter()
                    .zip(v.values())
                    .map(|(b, v0)| (b - (v0 - v.values()[0])).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        out.push(SubCheck::at_least(
            format!("composition D^-a caputo order alpha={a} Nt 256->512"),
            observed_order(comp[2], comp[3]),
            1.0,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// row 3

const ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn row_lemma1(cfg: &SuiteConfig) -> Vec<SubCheck> {
    let start = Instant::now();
    let tol = 1e-10 * cfg.tol_scale;
    let mut out = Vec::new();

    let seeds: Vec<u64> = (0..1000).collect();
    let worst = cfg.exec.map_slice(&seeds, |&seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a1 ^ seed);
        let nt = rng.random_range(1..=256);
        let grid = TimeGrid::new(rng.random_range(0.1..4.0), nt).expect("valid grid");
        let vals: Vec<f64> = (0..=nt).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v = TimeSeries::new(grid, vals).expect("length matches");
        ALPHAS
            .iter()
            .map(|&a| check_lemma1(&v, order(a)).min_margin)
            .fold(f64::INFINITY, f64::min)
    });
    let worst = worst.into_iter().fold(f64::INFINITY, f64::min);
    out.push(SubCheck::at_least(
        "1000 random series x 9 orders: min margin",
        worst,
        -tol,
    ));

    // every increment pattern in {-1, 0, 1}^6
    let grid = TimeGrid::new(1.0, 6).expect("valid grid");
    let mut op_worst = f64::INFINITY;
    let mut sos_worst = f64::INFINITY;
    let mut route_gap: f64 = 0.0;
    let mut psd = true;
    for &a in &ALPHAS {
        let alpha = order(a);
        let b = l1_weights(a, 7);
        psd &= b.windows(2).all(|w| w[1] <= w[0]);
        for code in 0..3usize.pow(6) {
            let mut v = vec![0.0; 7];
            let mut c = code;
            for j in 0..6 {
                v[j + 1] = v[j] + (c % 3) as f64 - 1.0;
                c /= 3;
            }
            let series = TimeSeries::new(grid, v.clone()).expect("length matches");
            let r = check_lemma1(&series, alpha);
            op_worst = op_worst.min(r.min_margin);
            for n in 1..=6 {
                let q = lemma1_quadratic_margin(&v, alpha, grid.tau(), n);
                let s = lemma1_sos_margin(&v, alpha, grid.tau(), n);
                sos_worst = sos_worst.min(s);
                route_gap = route_gap.max((q - r.margins()[n]).abs());
            }
        }
    }
    out.push(SubCheck::at_least(
        "brute force Nt=6: operator margin",
        op_worst,
        -tol,
    ));
    out.push(SubCheck::at_least(
        "brute force Nt=6: sum-of-squares margin",
        sos_worst,
        0.0,
    ));
    out.push(SubCheck::at_most(
        "brute force Nt=6: operator vs quadratic form",
        route_gap,
        tol,
    ));
    out.push(SubCheck::new(
        "quadratic form positive semidefinite (weights nonincreasing)",
        psd,
        format!("{psd}"),
    ));
    out.push(SubCheck::runtime(
        "runtime",
        start.elapsed(),
        Duration::from_secs(30),
    ));
    out
}

// ---------------------------------------------------------------------------
// row 4

fn row_lemma2(cfg: &SuiteConfig, files: &mut BTreeMap<String, String>) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let alpha = order(0.5);
    let grid = TimeGrid::new(1.0, 1024).expect("valid grid");
    let y = match l1_fractional_ode(1.0, |_| 1.0, 0.0, alpha, grid) {
        Ok(y) => y,
        Err(e) => return vec![error_check("L1 stepping", e.to_string())],
    };
    let ones = TimeSeries::from_fn(grid, |_| 1.0);
    match check_lemma2(&y, 1.0, &ones, alpha) {
        Ok(r) => {
            out.push(SubCheck::at_least(
                "bound margin",
                r.min_margin,
                -1e-6 * cfg.tol_scale,
            ));
            out.push(SubCheck::new(
                "hypothesis caputo(y) <= y + 1",
                r.hypothesis == Some(true),
                format!("{:?}", r.hypothesis),
            ));
            files.insert("lemma2.csv".to_string(), r.to_csv());
        }
        Err(e) => out.push(error_check("bound", e.to_string())),
    }
    match ml_two(0.5, 1.5, 1.0) {
        Ok(exact) => out.push(SubCheck::at_most(
            "y(1) vs E_0.5,1.5(1)",
            rel(y.last(), exact),
            1e-3 * cfg.tol_scale,
        )),
        Err(e) => out.push(error_check("closed form", e.to_string())),
    }
    out
}

// ---------------------------------------------------------------------------
// row 5

fn row_theorem1(cfg: &SuiteConfig, files: &mut BTreeMap<String, String>) -> Vec<SubCheck> {
    let start = Instant::now();
    let mut out = Vec::new();
    for name in ["diffusion-dirichlet-poly", "diffusion-varcoef"] {
        for a in [0.3, 0.5, 0.8] {
            let label = format!("{name} alpha={a}");
            let m = manufactured(name, order(a)).expect("catalog name");
            let field = match solve_or_fail(&m.spec, 128, 128, cfg) {
                Ok(f) => f,
                Err(e) => {
                    out.push(error_check(label, e));
                    continue;
                }
            };
            match check_theorem1(&field, &m.spec, None) {
                Ok(r) => {
                    out.push(report_check(label, &r, cfg));
                    files.insert(format!("theorem1_{name}_a{a}.csv"), r.to_csv());
                }
                Err(e) => out.push(error_check(label, e.to_string())),
            }
        }
    }
    out.push(SubCheck::runtime(
        "runtime",
        start.elapsed(),
        Duration::from_secs(20),
    ));
    out
}

// ---------------------------------------------------------------------------
// row 6

fn row_theorems234(cfg: &SuiteConfig, files: &mut BTreeMap<String, String>) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let base = order(0.5);
    let cal: Calibration = match calibrate(base, 128, cfg.exec) {
        Ok(c) => c,
        Err(e) => return vec![error_check("calibration", e.to_string())],
    };
    files.insert(
        "calibration.csv".to_string(),
        format!(
            "# theorem, constant\ntheorem2, {:.16e}\ntheorem3, {:.16e}\ntheorem4, {:.16e}\n",
            cal.theorem2, cal.theorem3, cal.theorem4
        ),
    );
    for (theorem, name) in CALIBRATION_SET {
        let constant = cal.get(theorem);
        let m = manufactured(name, base).expect("catalog name");
        let run = |spec: &crate::problem_spec::ProblemSpec, n: usize| {
            solve_or_fail(spec, n, n, cfg)
                .and_then(|f| check_theorem(&f, spec, constant).map_err(|e| e.to_string()))
        };
        let mut variants = vec![
            ("scaled x3", m.spec.scaled(3.0)),
            (
                "alpha 0.3",
                manufactured(name, order(0.3)).expect("catalog name").spec,
            ),
            (
                "alpha 0.8",
                manufactured(name, order(0.8)).expect("catalog name").spec,
            ),
        ];
        if theorem != Theorem::WaveDirichlet {
            variants.push(("mu shifted +0.5", m.spec.mu_shifted(0.5)));
        }
        let base_report = run(&m.spec, 128);
        for (tag, spec) in &variants {
            let label = format!("{} {name} {tag}", theorem.name());
            match run(spec, 128) {
                Ok(r) => {
                    out.push(report_check(label, &r, cfg));
                    if *tag == "scaled x3" {
                        if let Ok(b) = &base_report {
                            out.push(SubCheck::at_most(
                                format!(
                                    "{} {name} scaling invariance of empirical constant",
                                    theorem.name()
                                ),
                                rel(r.empirical_constant, b.empirical_constant),
                                1e-8 * cfg.tol_scale,
                            ));
                        }
                    }
                }
                Err(e) => out.push(error_check(label, e)),
            }
        }
        let mut sweep = Vec::new();
        for n in [64, 128, 256, 512] {
            match run(&m.spec, n) {
                Ok(r) => {
                    files.insert(format!("{}_{name}_n{n}.csv", theorem.name()), r.to_csv());
                    if theorem == Theorem::WaveDirichlet {
                        if let Ok(f) = solve_or_fail(&m.spec, n, n, cfg) {
                            if let Ok(p) = check_theorem3_printed(&f, &m.spec, r.constant_used) {
                                files.insert(
                                    format!("theorem3-printed_{name}_n{n}.csv"),
                                    p.to_csv(),
                                );
                            }
                        }
                    }
                    sweep.push(r.empirical_constant);
                }
                Err(e) => out.push(error_check(format!("{} {name} n={n}", theorem.name()), e)),
            }
        }
        if let [.., c256, c512] = sweep[..] {
            out.push(SubCheck::at_most(
                format!(
                    "{} {name} empirical constant variation Nt 256->512",
                    theorem.name()
                ),
                rel(c256, c512),
                0.05 * cfg.tol_scale,
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// row 7

fn row_auxiliary(cfg: &SuiteConfig) -> Vec<SubCheck> {
    let tol = 1e-9 * cfg.tol_scale;
    let mut out = Vec::new();
    for name in [
        "diffusion-dirichlet-poly",
        "diffusion-varcoef",
        "wave-dirichlet-poly",
    ] {
        let m = manufactured(name, order(0.5)).expect("catalog name");
        let label = format!("Poincare on every row of {name}");
        match solve_or_fail(&m.spec, 64, 64, cfg) {
            Ok(field) => match check_poincare(&field) {
                Ok(r) => out.push(SubCheck::at_least(label, r.min_margin, 0.0)),
                Err(e) => out.push(error_check(label, e.to_string())),
            },
            Err(e) => out.push(error_check(label, e)),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x7ace);
    for eps in [0.1, 1.0, 10.0] {
        let mut worst = f64::INFINITY;
        for _ in 0..100 {
            let nx = 64;
            let l = rng.random_range(0.5..3.0);
            let row: Vec<f64> = (0..=nx).map(|_| rng.random_range(-1.0..1.0)).collect();
            let m = trace_margin(&row, l / nx as f64, eps).expect("positive epsilon");
            worst = worst.min(m);
        }
        out.push(SubCheck::at_least(
            format!("trace inequality eps={eps} on 100 random grid functions"),
            worst,
            -tol,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x02de);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let nt = rng.random_range(4..=128);
        let grid = TimeGrid::new(rng.random_range(0.2..3.0), nt).expect("valid grid");
        let vals: Vec<f64> = (0..=nt).map(|_| rng.random_range(0.0..1.0)).collect();
        let h = TimeSeries::new(grid, vals).expect("length matches");
        for &a in &ALPHAS {
            worst = worst.min(
                check_ordering(&h, order(a))
                    .expect("valid input")
                    .min_margin,
            );
        }
    }
    out.push(SubCheck::at_least(
        "D^-2a ordering on 100 random series x 9 orders",
        worst,
        -tol,
    ));
    out
}

// ---------------------------------------------------------------------------
// row 8

fn row_dependence(cfg: &SuiteConfig, files: &mut BTreeMap<String, String>) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let m = manufactured("diffusion-dirichlet-poly", order(0.5)).expect("catalog name");
    let l = m.spec.l;
    let delta = 1e-3;
    let bump = ScalarFn::new(move |x| delta * (PI * x / l).sin());
    let u0 = m.spec.init.u0.clone();
    let perturbed = {
        let b = bump.clone();
        m.spec.with_initial(
            ScalarFn::new(move |x| u0.eval(x) + b.eval(x)),
            "u0+1e-3 sin",
        )
    };
    let (a, b) = match (
        solve_or_fail(&m.spec, 128, 128, cfg),
        solve_or_fail(&perturbed, 128, 128, cfg),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return vec![error_check("solve", e)],
    };
    let diff = b.difference(&a).expect("same grid");
    let diff_spec = m
        .spec
        .with_forcing(SpaceTimeFn::constant(0.0), "0")
        .with_initial(bump, "1e-3 sin");
    match check_theorem1(&diff, &diff_spec, None) {
        Ok(r) => {
            files.insert("dependence_theorem1.csv".to_string(), r.to_csv());
            out.push(report_check(
                "difference field satisfies the estimate with f = 0",
                &r,
                cfg,
            ));
        }
        Err(e) => out.push(error_check("difference field", e.to_string())),
    }
    let nt = norms(&diff);
    let m_const = theorem1_constant(l, 1.0);
    let bound = m_const * nt.l2_sq.values()[0];
    let worst = nt.l2_sq.max();
    out.push(SubCheck::at_most(
        "max_t |du|^2 <= M |du0|^2",
        worst,
        bound * (1.0 + 1e-8 * cfg.tol_scale),
    ));
    out
}

// ---------------------------------------------------------------------------
// row 9

fn convergence_table(label: &str, sizes: &[usize], errs: &[f64]) -> String {
    let mut s = format!("## study = {label}\n# n, max_error, order\n");
    for (i, (n, e)) in sizes.iter().zip(errs).enumerate() {
        let o = if i == 0 {
            f64::NAN
        } else {
            observed_order(errs[i - 1], *e)
        };
        let _ = writeln!(s, "{n}, {e:.16e}, {o:.16e}");
    }
    s
}

fn row_convergence(cfg: &SuiteConfig, files: &mut BTreeMap<String, String>) -> Vec<SubCheck> {
    let mut out = Vec::new();
    let a = 0.5;
    let half = 0.3 * cfg.tol_scale;

    let d1 = manufactured("diffusion-dirichlet-poly", order(a)).expect("catalog name");
    let nxs = [4, 8, 16, 32];
    let mut errs = Vec::new();
    for &nx in &nxs {
        match solve_or_fail(&d1.spec, nx, 2048, cfg) {
            Ok(f) => errs.push(f.errors_against(&d1.exact).0),
            Err(e) => return vec![error_check(format!("D1 nx={nx}"), e)],
        }
    }
    files.insert(
        "convergence_space_d1.csv".to_string(),
        convergence_table("D1 space, Nt = 2048", &nxs, &errs),
    );
    out.push(SubCheck::within(
        "D1 spatial order Nx 16->32",
        observed_order(errs[2], errs[3]),
        2.0 - half,
        2.0 + half,
    ));

    let w1 = manufactured("wave-dirichlet-poly", order(a)).expect("catalog name");
    let nts = [16, 32, 64, 128];
    let mut errs = Vec::new();
    for &nt in &nts {
        match solve_or_fail(&w1.spec, 1024, nt, cfg) {
            Ok(f) => errs.push(f.errors_against(&w1.exact).0),
            Err(e) => return vec![error_check(format!("W1 nt={nt}"), e)],
        }
    }
    files.insert(
        "convergence_time_w1.csv".to_string(),
        convergence_table("W1 time, Nx = 1024", &nts, &errs),
    );
    out.push(SubCheck::within(
        "W1 temporal order Nt 64->128",
        observed_order(errs[2], errs[3]),
        2.0 - a - half,
        2.0 - a + half,
    ));
    out
}

// ---------------------------------------------------------------------------
// row 10

fn row_determinism(cfg: &SuiteConfig) -> Vec<SubCheck> {
    let others: Vec<usize> = (1..=9).collect();
    let start = Instant::now();
    let first = run_suite(cfg, &others);
    let took = start.elapsed();
    let second = run_suite(cfg, &others);
    let mut out = Vec::new();
    let mut mismatched = Vec::new();
    for (a, b) in first.rows.iter().zip(&second.rows) {
        if all_files(a) != all_files(b) {
            mismatched.push(a.key);
        }
    }
    out.push(SubCheck::new(
        "rows 1-9 produce byte-identical CSVs on a second run",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "identical".to_string()
        } else {
            format!("differs: {}", mismatched.join(" "))
        },
    ));
    out.push(SubCheck::runtime(
        "rows 1-9 runtime",
        took,
        Duration::from_secs(120),
    ));
    out
}
