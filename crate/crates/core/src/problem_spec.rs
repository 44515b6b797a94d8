//! Boundary value problems, hypothesis validation and the manufactured catalog.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exec::Execution;
use crate::expr::{self, Expr, ParseError};
use crate::fractional_ops::{gamma_fn, FracError, FracOrder, UniformGrid};

/// Pure function of `(x, t)`.
#[derive(Clone)]
pub struct SpaceTimeFn(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>);

impl SpaceTimeFn {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        SpaceTimeFn(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c)
    }

    #[inline]
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.0)(x, t)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let f = self.clone();
        Self::new(move |x, t| s * f.eval(x, t))
    }
}

impl fmt::Debug for SpaceTimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SpaceTimeFn")
    }
}

/// Pure function of a single variable (`x` for initial data, `t` for boundary data).
#[derive(Clone)]
pub struct ScalarFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        (self.0)(s)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let f = self.clone();
        Self::new(move |v| s * f.eval(v))
    }

    pub fn shifted(&self, d: f64) -> Self {
        let f = self.clone();
        Self::new(move |v| f.eval(v) + d)
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarFn")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationKind {
    Diffusion,
    Wave,
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquationKind::Diffusion => "diffusion",
            EquationKind::Wave => "wave",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    Dirichlet,
    Robin,
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Robin => "robin",
        })
    }
}

/// Which a priori estimate governs a `(kind, bc)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    DiffusionDirichlet,
    DiffusionRobin,
    WaveDirichlet,
    WaveRobin,
}

impl Theorem {
    pub fn of(kind: EquationKind, bc: BcKind) -> Self {
        match (kind, bc) {
            (EquationKind::Diffusion, BcKind::Dirichlet) => Theorem::DiffusionDirichlet,
            (EquationKind::Diffusion, BcKind::Robin) => Theorem::DiffusionRobin,
            (EquationKind::Wave, BcKind::Dirichlet) => Theorem::WaveDirichlet,
            (EquationKind::Wave, BcKind::Robin) => Theorem::WaveRobin,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Theorem::DiffusionDirichlet => 1,
            Theorem::DiffusionRobin => 2,
            Theorem::WaveDirichlet => 3,
            Theorem::WaveRobin => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::DiffusionDirichlet => "theorem1",
            Theorem::DiffusionRobin => "theorem2",
            Theorem::WaveDirichlet => "theorem3",
            Theorem::WaveRobin => "theorem4",
        }
    }
}

/// Bounds a problem declares for its coefficients; absent ones are inferred by sampling.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DeclaredBounds {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub c3: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Coefficients {
    pub k: SpaceTimeFn,
    pub q: SpaceTimeFn,
    pub f: SpaceTimeFn,
    pub bounds: DeclaredBounds,
}

#[derive(Debug, Clone)]
pub struct RobinData {
    pub beta1: ScalarFn,
    pub beta2: ScalarFn,
    pub mu1: ScalarFn,
    pub mu2: ScalarFn,
    /// Cap on `|β_i|` (diffusion) or lower bound on `β_i` (wave).
    pub beta: Option<f64>,
    /// Cap on `|β_i'|` (wave).
    pub c4: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin(RobinData),
}

impl BoundaryCondition {
    pub fn kind(&self) -> BcKind {
        match self {
            BoundaryCondition::Dirichlet => BcKind::Dirichlet,
            BoundaryCondition::Robin(_) => BcKind::Robin,
        }
    }

    pub fn robin(&self) -> Option<&RobinData> {
        match self {
            BoundaryCondition::Robin(r) => Some(r),
            BoundaryCondition::Dirichlet => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InitialData {
    pub u0: ScalarFn,
    pub u1: Option<ScalarFn>,
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// Identifier used in reports and to derive the spec hash.
    pub label: String,
    pub kind: EquationKind,
    pub alpha: FracOrder,
    pub l: f64,
    pub t_end: f64,
    pub coefficients: Coefficients,
    pub bc: BoundaryCondition,
    pub init: InitialData,
}

impl ProblemSpec {
    pub fn theorem(&self) -> Theorem {
        Theorem::of(self.kind, self.bc.kind())
    }

    /// Spatial grid matching the spec's domain.
    pub fn grid(&self, nx: usize, nt: usize) -> Result<UniformGrid, FracError> {
        UniformGrid::new(self.l, self.t_end, nx, nt)
    }

    /// Every datum (`f`, `μ_i`, `u0`, `u1`) multiplied by `s`.
    pub fn scaled(&self, s: f64) -> ProblemSpec {
        let mut out = self.clone();
        out.label = format!("{} scaled {s:?}", self.label);
        out.coefficients.f = self.coefficients.f.scaled(s);
        if let BoundaryCondition::Robin(r) = &mut out.bc {
            r.mu1 = r.mu1.scaled(s);
            r.mu2 = r.mu2.scaled(s);
        }
        out.init.u0 = self.init.u0.scaled(s);
        out.init.u1 = self.init.u1.as_ref().map(|u| u.scaled(s));
        out
    }

    /// Robin data `μ_i + d`; Dirichlet specs are returned unchanged.
    pub fn mu_shifted(&self, d: f64) -> ProblemSpec {
        let mut out = self.clone();
        if let BoundaryCondition::Robin(r) = &mut out.bc {
            out.label = format!("{} mu-shift {d:?}", self.label);
            r.mu1 = r.mu1.shifted(d);
            r.mu2 = r.mu2.shifted(d);
        }
        out
    }

    pub fn with_forcing(&self, f: SpaceTimeFn, tag: &str) -> ProblemSpec {
        let mut out = self.clone();
        out.label = format!("{} f={tag}", self.label);
        out.coefficients.f = f;
        out
    }

    pub fn with_initial(&self, u0: ScalarFn, tag: &str) -> ProblemSpec {
        let mut out = self.clone();
        out.label = format!("{} u0={tag}", self.label);
        out.init.u0 = u0;
        out
    }
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown catalog problem '{name}'; available: {}", available.join(", "))]
    UnknownCatalog {
        name: String,
        available: Vec<&'static str>,
    },
    #[error("problem file {0}")]
    Parse(#[from] ParseError),
    #[error("problem file: missing key '{key}' in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("problem file line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    Order(#[from] FracError),
}

// ---------------------------------------------------------------------------
// validation

/// Outcome of one sampled hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: String,
    pub pass: bool,
    /// Worst node `(x, t)` and the offending value, when the check samples nodes.
    pub worst: Option<(f64, f64, f64)>,
    pub detail: String,
}

/// Bounds in force after validation: declared where given, sampled otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveBounds {
    pub c1: f64,
    pub c2: f64,
    pub m1: f64,
    pub m2: f64,
    pub c3: f64,
    pub beta: f64,
    pub c4: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub theorem: Theorem,
    pub checks: Vec<HypothesisCheck>,
    pub bounds: EffectiveBounds,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&HypothesisCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .failures()
            .iter()
            .map(|c| match c.worst {
                Some((x, t, v)) => format!("{} (x = {x:.6}, t = {t:.6}, value = {v:.6e})", c.name),
                None => format!("{} ({})", c.name, c.detail),
            })
            .collect();
        if failed.is_empty() {
            format!("all hypotheses of {} hold", self.theorem.name())
        } else {
            format!(
                "{} hypotheses violated: {}",
                self.theorem.name(),
                failed.join("; ")
            )
        }
    }
}

/// Sampling factor relative to the solver grid.
pub const VALIDATION_OVERSAMPLE: usize = 4;

#[derive(Clone, Copy)]
struct Extremum {
    min: (f64, f64, f64),
    max: (f64, f64, f64),
    abs_max: (f64, f64, f64),
    finite: bool,
}

impl Extremum {
    fn new() -> Self {
        let inf = f64::INFINITY;
        Extremum {
            min: (0.0, 0.0, inf),
            max: (0.0, 0.0, -inf),
            abs_max: (0.0, 0.0, -inf),
            finite: true,
        }
    }

    fn push(&mut self, x: f64, t: f64, v: f64) {
        if !v.is_finite() {
            self.finite = false;
        }
        if v < self.min.2 {
            self.min = (x, t, v);
        }
        if v > self.max.2 {
            self.max = (x, t, v);
        }
        if v.abs() > self.abs_max.2 {
            self.abs_max = (x, t, v.abs());
        }
    }

    fn merge(mut self, o: Extremum) -> Self {
        if o.min.2 < self.min.2 {
            self.min = o.min;
        }
        if o.max.2 > self.max.2 {
            self.max = o.max;
        }
        if o.abs_max.2 > self.abs_max.2 {
            self.abs_max = o.abs_max;
        }
        self.finite &= o.finite;
        self
    }
}

fn scan_space_time(
    nx: usize,
    nt: usize,
    l: f64,
    t_end: f64,
    exec: Execution,
    f: impl Fn(f64, f64) -> f64 + Sync + Send,
) -> Extremum {
    let rows = exec.map_indices(nt + 1, |n| {
        let t = if n == nt {
            t_end
        } else {
            n as f64 * t_end / nt as f64
        };
        let mut e = Extremum::new();
        for i in 0..=nx {
            let x = if i == nx { l } else { i as f64 * l / nx as f64 };
            e.push(x, t, f(x, t));
        }
        e
    });
    rows.into_iter().fold(Extremum::new(), Extremum::merge)
}

fn scan_time(nt: usize, t_end: f64, f: impl Fn(f64) -> f64) -> Extremum {
    let mut e = Extremum::new();
    for n in 0..=nt {
        let t = if n == nt {
            t_end
        } else {
            n as f64 * t_end / nt as f64
        };
        e.push(0.0, t, f(t));
    }
    e
}

fn check(
    name: &str,
    pass: bool,
    worst: Option<(f64, f64, f64)>,
    detail: String,
) -> HypothesisCheck {
    HypothesisCheck {
        name: name.to_string(),
        pass,
        worst,
        detail,
    }
}

/// Samples every hypothesis of the theorem that matches `(spec.kind, spec.bc)`
/// on a grid `VALIDATION_OVERSAMPLE` times finer than `grid`.
pub fn validate(spec: &ProblemSpec, grid: &UniformGrid) -> ValidationReport {
    validate_with(spec, grid, Execution::default())
}

pub fn validate_with(spec: &ProblemSpec, grid: &UniformGrid, exec: Execution) -> ValidationReport {
    let theorem = spec.theorem();
    let wave = spec.kind == EquationKind::Wave;
    let nx = grid.nx() * VALIDATION_OVERSAMPLE;
    let nt = grid.nt() * VALIDATION_OVERSAMPLE;
    let (l, t_end) = (spec.l, spec.t_end);
    let dt = t_end / nt as f64;
    let c = &spec.coefficients;
    let decl = c.bounds;
    let mut checks = Vec::new();

    if (grid.l() - l).abs() > 1e-12 * l || (grid.t_end() - t_end).abs() > 1e-12 * t_end {
        checks.push(check(
            "grid matches domain",
            false,
            None,
            format!(
                "grid [0,{}]x[0,{}] vs domain [0,{l}]x[0,{t_end}]",
                grid.l(),
                grid.t_end()
            ),
        ));
    }

    let k = scan_space_time(nx, nt, l, t_end, exec, |x, t| c.k.eval(x, t));
    let q = scan_space_time(nx, nt, l, t_end, exec, |x, t| c.q.eval(x, t));
    let f = scan_space_time(nx, nt, l, t_end, exec, |x, t| c.f.eval(x, t));
    for (name, e) in [("k finite", &k), ("q finite", &q), ("f finite", &f)] {
        checks.push(check(name, e.finite, None, String::new()));
    }

    let c1 = decl.c1.unwrap_or(k.min.2);
    let c1_ok = c1 > 0.0 && k.min.2 >= c1;
    checks.push(check(
        "k >= c1 > 0",
        c1_ok,
        Some(k.min),
        format!("c1 = {c1:e}, min k = {:e}", k.min.2),
    ));
    let c2 = decl.c2.unwrap_or(k.max.2);
    let m1 = decl.m1.unwrap_or(q.min.2);
    let m2 = decl.m2.unwrap_or(q.max.2);
    let mut c3 = decl.c3.unwrap_or(0.0);

    if wave {
        checks.push(check(
            "k <= c2",
            k.max.2 <= c2,
            Some(k.max),
            format!("c2 = {c2:e}, max k = {:e}", k.max.2),
        ));
        checks.push(check(
            "0 < m1 <= q",
            m1 > 0.0 && q.min.2 >= m1,
            Some(q.min),
            format!("m1 = {m1:e}, min q = {:e}", q.min.2),
        ));
        checks.push(check(
            "q <= m2",
            q.max.2 <= m2,
            Some(q.max),
            format!("m2 = {m2:e}, max q = {:e}", q.max.2),
        ));
        let time_derivative = |g: &SpaceTimeFn| {
            scan_space_time(nx, nt, l, t_end, exec, |x, t| {
                let (a, b) = ((t - dt).max(0.0), (t + dt).min(t_end));
                (g.eval(x, b) - g.eval(x, a)) / (b - a)
            })
        };
        let kt = time_derivative(&c.k);
        let qt = time_derivative(&c.q);
        let sampled = kt.abs_max.2.max(qt.abs_max.2);
        if decl.c3.is_none() {
            c3 = sampled;
        }
        let worst = if kt.abs_max.2 >= qt.abs_max.2 {
            kt.abs_max
        } else {
            qt.abs_max
        };
        checks.push(check(
            "|k_t|, |q_t| <= c3",
            sampled <= c3 * (1.0 + 1e-12),
            Some(worst),
            format!("c3 = {c3:e}, sampled = {sampled:e}"),
        ));
    } else {
        checks.push(check(
            "q >= 0",
            q.min.2 >= 0.0,
            Some(q.min),
            format!("min q = {:e}", q.min.2),
        ));
    }

    // initial data
    let u0 = scan_time(nx, l, |x| spec.init.u0.eval(x));
    checks.push(check("u0 finite", u0.finite, None, String::new()));
    match (&spec.init.u1, wave) {
        (Some(u1), true) => {
            let e = scan_time(nx, l, |x| u1.eval(x));
            checks.push(check("u1 finite", e.finite, None, String::new()));
        }
        (None, true) => checks.push(check(
            "u1 present",
            false,
            None,
            "wave problem needs u1".into(),
        )),
        (Some(_), false) => checks.push(check(
            "u1 absent",
            false,
            None,
            "diffusion problem takes no u1".into(),
        )),
        (None, false) => {}
    }

    let mut beta = 0.0;
    let mut c4 = 0.0;
    match &spec.bc {
        BoundaryCondition::Dirichlet => {
            let a = spec.init.u0.eval(0.0);
            let b = spec.init.u0.eval(l);
            let worst = if a.abs() >= b.abs() {
                (0.0, 0.0, a)
            } else {
                (l, 0.0, b)
            };
            checks.push(check(
                "u0(0) = u0(l) = 0",
                a.abs() <= 1e-12 && b.abs() <= 1e-12,
                Some(worst),
                String::new(),
            ));
        }
        BoundaryCondition::Robin(r) => {
            let b1 = scan_time(nt, t_end, |t| r.beta1.eval(t));
            let b2 = scan_time(nt, t_end, |t| r.beta2.eval(t));
            let m1s = scan_time(nt, t_end, |t| r.mu1.eval(t));
            let m2s = scan_time(nt, t_end, |t| r.mu2.eval(t));
            let finite = b1.finite && b2.finite && m1s.finite && m2s.finite;
            checks.push(check("beta_i, mu_i finite", finite, None, String::new()));
            if wave {
                let low = b1.min.2.min(b2.min.2);
                beta = r.beta.unwrap_or(low);
                let worst = if b1.min.2 <= b2.min.2 { b1.min } else { b2.min };
                checks.push(check(
                    "beta_i >= beta > 0",
                    beta > 0.0 && low >= beta,
                    Some(worst),
                    format!("beta = {beta:e}, min beta_i = {low:e}"),
                ));
                let deriv = |g: &ScalarFn| {
                    scan_time(nt, t_end, |t| {
                        let (a, b) = ((t - dt).max(0.0), (t + dt).min(t_end));
                        (g.eval(b) - g.eval(a)) / (b - a)
                    })
                };
                let d1 = deriv(&r.beta1);
                let d2 = deriv(&r.beta2);
                let sampled = d1.abs_max.2.max(d2.abs_max.2);
                c4 = r.c4.unwrap_or(sampled);
                let worst = if d1.abs_max.2 >= d2.abs_max.2 {
                    d1.abs_max
                } else {
                    d2.abs_max
                };
                checks.push(check(
                    "|beta_i'| <= c4",
                    sampled <= c4 * (1.0 + 1e-12),
                    Some(worst),
                    format!("c4 = {c4:e}, sampled = {sampled:e}"),
                ));
            } else {
                let high = b1.abs_max.2.max(b2.abs_max.2);
                beta = r.beta.unwrap_or(high);
                let worst = if b1.abs_max.2 >= b2.abs_max.2 {
                    b1.abs_max
                } else {
                    b2.abs_max
                };
                checks.push(check(
                    "|beta_i| <= beta",
                    high <= beta,
                    Some(worst),
                    format!("beta = {beta:e}, max |beta_i| = {high:e}"),
                ));
            }
        }
    }

    ValidationReport {
        theorem,
        checks,
        bounds: EffectiveBounds {
            c1,
            c2,
            m1,
            m2,
            c3,
            beta,
            c4,
        },
    }
}

// ---------------------------------------------------------------------------
// manufactured catalog

pub const CATALOG: [&str; 5] = [
    "diffusion-dirichlet-poly",
    "diffusion-robin-poly",
    "wave-dirichlet-poly",
    "wave-robin-poly",
    "diffusion-varcoef",
];

/// A catalog problem together with its closed-form solution.
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub spec: ProblemSpec,
    pub exact: SpaceTimeFn,
}

/// Catalog problem on `[0, 1] × [0, 1]`.
pub fn manufactured(name: &str, alpha: FracOrder) -> Result<Manufactured, ProblemError> {
    manufactured_on(name, alpha, 1.0, 1.0)
}

/// Catalog problem on `[0, l] × [0, t_end]`.
pub fn manufactured_on(
    name: &str,
    alpha: FracOrder,
    l: f64,
    t_end: f64,
) -> Result<Manufactured, ProblemError> {
    use std::f64::consts::PI;
    let a = alpha.value();
    let w = PI / l;
    // Caputo derivatives of the time profile 1 + t²
    let g3 = gamma_fn(3.0 - a)?;
    let g2 = gamma_fn(2.0 - a)?;
    let d_alpha = move |t: f64| 2.0 * t.powf(2.0 - a) / g3;
    let d_wave = move |t: f64| 2.0 * t.powf(1.0 - a) / g2;
    let profile = |t: f64| 1.0 + t * t;
    let sine = move |x: f64| (w * x).sin();
    let poly = move |x: f64| 1.0 + x * (l - x);

    let (kind, k, q, f, bc, exact, bounds): (
        EquationKind,
        SpaceTimeFn,
        SpaceTimeFn,
        SpaceTimeFn,
        BoundaryCondition,
        SpaceTimeFn,
        DeclaredBounds,
    ) = match name {
        "diffusion-dirichlet-poly" | "wave-dirichlet-poly" => {
            let wave = name.starts_with("wave");
            let f = SpaceTimeFn::new(move |x, t| {
                let dt = if wave { d_wave(t) } else { d_alpha(t) };
                (dt + (w * w + 1.0) * profile(t)) * sine(x)
            });
            (
                if wave {
                    EquationKind::Wave
                } else {
                    EquationKind::Diffusion
                },
                SpaceTimeFn::constant(1.0),
                SpaceTimeFn::constant(1.0),
                f,
                BoundaryCondition::Dirichlet,
                SpaceTimeFn::new(move |x, t| profile(t) * sine(x)),
                DeclaredBounds {
                    c1: Some(1.0),
                    c2: Some(1.0),
                    m1: Some(1.0),
                    m2: Some(1.0),
                    c3: Some(0.0),
                },
            )
        }
        "diffusion-robin-poly" | "wave-robin-poly" => {
            let wave = name.starts_with("wave");
            let f = SpaceTimeFn::new(move |x, t| {
                let dt = if wave { d_wave(t) } else { d_alpha(t) };
                dt * poly(x) + 2.0 * profile(t) + profile(t) * poly(x)
            });
            // k u_x(0) = β₁u(0) − μ₁ and −k u_x(l) = β₂u(l) − μ₂ with β_i = 1
            let mu = ScalarFn::new(move |t| profile(t) * (1.0 - l));
            let bc = BoundaryCondition::Robin(RobinData {
                beta1: ScalarFn::constant(1.0),
                beta2: ScalarFn::constant(1.0),
                mu1: mu.clone(),
                mu2: mu,
                beta: Some(1.0),
                c4: Some(0.0),
            });
            (
                if wave {
                    EquationKind::Wave
                } else {
                    EquationKind::Diffusion
                },
                SpaceTimeFn::constant(1.0),
                SpaceTimeFn::constant(1.0),
                f,
                bc,
                SpaceTimeFn::new(move |x, t| profile(t) * poly(x)),
                DeclaredBounds {
                    c1: Some(1.0),
                    c2: Some(1.0),
                    m1: Some(1.0),
                    m2: Some(1.0),
                    c3: Some(0.0),
                },
            )
        }
        "diffusion-varcoef" => {
            let k = move |x: f64, t: f64| 1.0 + 0.5 * sine(x) * (-t).exp();
            let f = SpaceTimeFn::new(move |x, t| {
                let p = profile(t);
                let (s, c) = (w * x).sin_cos();
                let kx = 0.5 * w * c * (-t).exp();
                let ux = p * w * c;
                let uxx = -p * w * w * s;
                d_alpha(t) * s - (kx * ux + k(x, t) * uxx) + x * t * p * s
            });
            (
                EquationKind::Diffusion,
                SpaceTimeFn::new(k),
                SpaceTimeFn::new(|x, t| x * t),
                f,
                BoundaryCondition::Dirichlet,
                SpaceTimeFn::new(move |x, t| profile(t) * sine(x)),
                DeclaredBounds {
                    c1: Some(1.0),
                    c2: Some(1.5),
                    m1: None,
                    m2: None,
                    c3: Some(0.5_f64.max(l)),
                },
            )
        }
        _ => {
            return Err(ProblemError::UnknownCatalog {
                name: name.to_string(),
                available: CATALOG.to_vec(),
            })
        }
    };

    let u0 = {
        let e = exact.clone();
        ScalarFn::new(move |x| e.eval(x, 0.0))
    };
    let u1 = match kind {
        EquationKind::Wave => Some(ScalarFn::constant(0.0)),
        EquationKind::Diffusion => None,
    };
    let spec = ProblemSpec {
        label: format!("catalog:{name} alpha={a:?} l={l:?} T={t_end:?}"),
        kind,
        alpha,
        l,
        t_end,
        coefficients: Coefficients { k, q, f, bounds },
        bc,
        init: InitialData { u0, u1 },
    };
    Ok(Manufactured { spec, exact })
}

// ---------------------------------------------------------------------------
// problem files

/// A problem read from a file, with its optional closed-form solution.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub exact: Option<SpaceTimeFn>,
}

struct Entry {
    value: String,
    line: usize,
    column: usize,
}

#[derive(Default)]
struct Sections(Vec<(String, Vec<(String, Entry)>)>);

impl Sections {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.0
            .iter()
            .filter(|(s, _)| s == section)
            .flat_map(|(_, kv)| kv.iter())
            .find(|(k, _)| k == key)
            .map(|(_, e)| e)
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ProblemError> {
        self.get(section, key)
            .ok_or_else(|| ProblemError::MissingKey {
                section: section.to_string(),
                key: key.to_string(),
            })
    }
}

const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("problem", &["name", "kind", "alpha", "l", "T"]),
    (
        "coefficients",
        &["k", "q", "f", "c1", "c2", "m1", "m2", "c3"],
    ),
    (
        "boundary",
        &["kind", "beta1", "beta2", "mu1", "mu2", "beta", "c4"],
    ),
    ("initial", &["u0", "u1"]),
    ("exact", &["u"]),
];

fn split_sections(text: &str) -> Result<Sections, ProblemError> {
    let mut out = Sections::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ProblemError::Invalid {
                    line,
                    message: format!("malformed section header '{trimmed}'"),
                })?;
            let name = name.trim().to_string();
            if !KNOWN_KEYS.iter().any(|(s, _)| *s == name) {
                return Err(ProblemError::Invalid {
                    line,
                    message: format!("unknown section [{name}]"),
                });
            }
            out.0.push((name, Vec::new()));
            continue;
        }
        let eq = content.find('=').ok_or_else(|| ProblemError::Invalid {
            line,
            message: format!("expected 'key = value', found '{trimmed}'"),
        })?;
        let key = content[..eq].trim().to_string();
        let value_raw = &content[eq + 1..];
        let lead = value_raw.len() - value_raw.trim_start().len();
        let column = content[..eq + 1 + lead].chars().count() + 1;
        let (section, entries) = out.0.last_mut().ok_or_else(|| ProblemError::Invalid {
            line,
            message: "key outside of any section".to_string(),
        })?;
        let allowed = KNOWN_KEYS
            .iter()
            .find(|(s, _)| s == section)
            .map(|(_, k)| *k)
            .unwrap_or(&[]);
        if !allowed.contains(&key.as_str()) {
            return Err(ProblemError::Invalid {
                line,
                message: format!("unknown key '{key}' in section [{section}]"),
            });
        }
        entries.push((
            key,
            Entry {
                value: value_raw.trim().to_string(),
                line,
                column,
            },
        ));
    }
    Ok(out)
}

fn parse_expr(e: &Entry) -> Result<Expr, ProblemError> {
    Ok(expr::parse_at(&e.value, e.line, e.column)?)
}

fn parse_number(e: &Entry) -> Result<f64, ProblemError> {
    let v = parse_expr(e)?;
    if v.uses_x() || v.uses_t() {
        return Err(ProblemError::Invalid {
            line: e.line,
            message: "expected a constant".to_string(),
        });
    }
    // l is unknown while reading [problem]; constants there must not use it
    Ok(v.eval(0.0, 0.0, f64::NAN))
}

fn space_time(e: &Entry, l: f64) -> Result<SpaceTimeFn, ProblemError> {
    let ex = parse_expr(e)?;
    Ok(SpaceTimeFn::new(move |x, t| ex.eval(x, t, l)))
}

fn of_x(e: &Entry, l: f64) -> Result<ScalarFn, ProblemError> {
    let ex = parse_expr(e)?;
    if ex.uses_t() {
        return Err(ProblemError::Invalid {
            line: e.line,
            message: "initial data may depend on x only".to_string(),
        });
    }
    Ok(ScalarFn::new(move |x| ex.eval(x, 0.0, l)))
}

fn of_t(e: &Entry, l: f64) -> Result<ScalarFn, ProblemError> {
    let ex = parse_expr(e)?;
    if ex.uses_x() {
        return Err(ProblemError::Invalid {
            line: e.line,
            message: "boundary data may depend on t only".to_string(),
        });
    }
    Ok(ScalarFn::new(move |t| ex.eval(0.0, t, l)))
}

/// Parses the bracketed key-value problem format.
///
/// ```text
/// [problem]
/// kind = diffusion        # or wave
/// alpha = 0.5
/// l = 1
/// T = 1
/// [coefficients]
/// k = 1 + 0.5*sin(pi*x/l)*exp(-t)
/// q = 0
/// f = sin(pi*x/l)
/// c1 = 1                  # optional bounds: c1 c2 m1 m2 c3
/// [boundary]
/// kind = dirichlet        # or robin with beta1 beta2 mu1 mu2 [beta c4]
/// [initial]
/// u0 = sin(pi*x/l)
/// u1 = 0                  # wave only
/// [exact]                 # optional
/// u = ...
/// ```
///
/// `alpha_override` replaces the file's `alpha` when given.
pub fn parse_problem(text: &str, alpha_override: Option<f64>) -> Result<ProblemFile, ProblemError> {
    let s = split_sections(text)?;
    let kind_e = s.require("problem", "kind")?;
    let kind = match kind_e.value.as_str() {
        "diffusion" => EquationKind::Diffusion,
        "wave" => EquationKind::Wave,
        other => {
            return Err(ProblemError::Invalid {
                line: kind_e.line,
                message: format!("kind must be diffusion or wave, got '{other}'"),
            })
        }
    };
    let alpha = match alpha_override {
        Some(a) => a,
        None => parse_number(s.require("problem", "alpha")?)?,
    };
    let alpha = FracOrder::new(alpha)?;
    let l = s
        .get("problem", "l")
        .map(parse_number)
        .transpose()?
        .unwrap_or(1.0);
    let t_end = s
        .get("problem", "T")
        .map(parse_number)
        .transpose()?
        .unwrap_or(1.0);
    for (name, v, e) in [
        ("l", l, s.get("problem", "l")),
        ("T", t_end, s.get("problem", "T")),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ProblemError::Invalid {
                line: e.map_or(0, |e| e.line),
                message: format!("{name} must be positive and finite"),
            });
        }
    }
    let name = s
        .get("problem", "name")
        .map(|e| e.value.clone())
        .unwrap_or_else(|| "unnamed".to_string());

    let k = space_time(s.require("coefficients", "k")?, l)?;
    let q = match s.get("coefficients", "q") {
        Some(e) => space_time(e, l)?,
        None => SpaceTimeFn::constant(0.0),
    };
    let f = match s.get("coefficients", "f") {
        Some(e) => space_time(e, l)?,
        None => SpaceTimeFn::constant(0.0),
    };
    let num = |key: &str| -> Result<Option<f64>, ProblemError> {
        s.get("coefficients", key).map(parse_number).transpose()
    };
    let bounds = DeclaredBounds {
        c1: num("c1")?,
        c2: num("c2")?,
        m1: num("m1")?,
        m2: num("m2")?,
        c3: num("c3")?,
    };

    let bc_e = s.require("boundary", "kind")?;
    let bc = match bc_e.value.as_str() {
        "dirichlet" => BoundaryCondition::Dirichlet,
        "robin" => BoundaryCondition::Robin(RobinData {
            beta1: of_t(s.require("boundary", "beta1")?, l)?,
            beta2: of_t(s.require("boundary", "beta2")?, l)?,
            mu1: match s.get("boundary", "mu1") {
                Some(e) => of_t(e, l)?,
                None => ScalarFn::constant(0.0),
            },
            mu2: match s.get("boundary", "mu2") {
                Some(e) => of_t(e, l)?,
                None => ScalarFn::constant(0.0),
            },
            beta: s.get("boundary", "beta").map(parse_number).transpose()?,
            c4: s.get("boundary", "c4").map(parse_number).transpose()?,
        }),
        other => {
            return Err(ProblemError::Invalid {
                line: bc_e.line,
                message: format!("boundary kind must be dirichlet or robin, got '{other}'"),
            })
        }
    };

    let u0 = of_x(s.require("initial", "u0")?, l)?;
    let u1 = s.get("initial", "u1").map(|e| of_x(e, l)).transpose()?;
    let exact = s.get("exact", "u").map(|e| space_time(e, l)).transpose()?;

    let spec = ProblemSpec {
        label: format!("file:{name} alpha={:?} text={}", alpha.value(), text),
        kind,
        alpha,
        l,
        t_end,
        coefficients: Coefficients { k, q, f, bounds },
        bc,
        init: InitialData { u0, u1 },
    };
    Ok(ProblemFile { spec, exact })
}
