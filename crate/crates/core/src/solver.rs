//! Implicit finite-difference solvers for the diffusion and diffusion-wave problems.
//!
//! Space: conservative three-point flux with `a_i = k(x_i + h/2, t)`; Robin
//! rows come from a flux balance over the half cells `[0, h/2]` and
//! `[l − h/2, l]`. Time: the L1 convolution, applied to `u` itself for the
//! diffusion equation and to the backward-difference velocity chain for the
//! wave equation.

use std::fmt;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exec::Execution;
use crate::fractional_ops::{l1_weights, FracError, FracOrder, TimeSeries, UniformGrid};
use crate::numeric::CompensatedSum;
use crate::problem_spec::{
    validate_with, BcKind, BoundaryCondition, EquationKind, ProblemSpec, SpaceTimeFn,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),
    #[error("expected a {expected} problem, got {got}")]
    KindMismatch {
        expected: EquationKind,
        got: EquationKind,
    },
    #[error("grid needs nx >= 4 and nt >= 4, got nx = {nx}, nt = {nt}")]
    GridTooCoarse { nx: usize, nt: usize },
    #[error("grid does not cover the problem domain")]
    DomainMismatch,
    #[error("zero pivot in tridiagonal solve at row {index}")]
    ZeroPivot { index: usize },
    #[error("non-finite value produced at time step {step}")]
    NonFinite { step: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Frac(#[from] FracError),
}

/// Tridiagonal system `sub[i]·x[i−1] + diag[i]·x[i] + sup[i]·x[i+1] = rhs[i]`.
///
/// `sub[0]` and `sup[n−1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn zeros(n: usize) -> Self {
        TridiagonalSystem {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Smallest `|diag_i| − |sub_i| − |sup_i|` over all rows.
    pub fn dominance_margin(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let s = if i > 0 { self.sub[i].abs() } else { 0.0 };
                let u = if i + 1 < n { self.sup[i].abs() } else { 0.0 };
                self.diag[i].abs() - s - u
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Thomas algorithm. Fails on an exactly zero or non-finite pivot.
pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>, SolverError> {
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = sys.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(SolverError::ZeroPivot { index: 0 });
    }
    c[0] = if n > 1 { sys.sup[0] / pivot } else { 0.0 };
    d[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.sub[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(SolverError::ZeroPivot { index: i });
        }
        c[i] = if i + 1 < n { sys.sup[i] / pivot } else { 0.0 };
        d[i] = (sys.rhs[i] - sys.sub[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Time level at which the wave equation's spatial operator is coupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveCoupling {
    /// `Λ(½(uⁿ + uⁿ⁻¹))` with data at `t_{n−1/2}`, where the velocity-chain
    /// L1 operator is centred.
    Midpoint,
    /// `Λuⁿ` with data at `t_n`.
    Implicit,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub exec: Execution,
    pub wave_coupling: WaveCoupling,
    /// Refuse to run when [`validate_with`] reports a violated hypothesis.
    pub validate: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            exec: Execution::default(),
            wave_coupling: WaveCoupling::Midpoint,
            validate: true,
        }
    }
}

/// Discrete solution `u(x_i, t_n)` and the metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    grid: UniformGrid,
    values: Vec<f64>,
    kind: EquationKind,
    alpha: FracOrder,
    bc: BcKind,
    scheme: String,
    spec_hash: String,
}

/// First 16 hex digits of the SHA-256 of a spec label.
pub fn spec_hash(label: &str) -> String {
    Sha256::digest(label.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl SolutionField {
    /// Field sampled from a closed-form function, tagged as such.
    pub fn sampled(spec: &ProblemSpec, grid: &UniformGrid, u: &SpaceTimeFn) -> Self {
        let xs = grid.xs();
        let mut values = Vec::with_capacity((grid.nt() + 1) * xs.len());
        for n in 0..=grid.nt() {
            let t = grid.t(n);
            values.extend(xs.iter().map(|&x| u.eval(x, t)));
        }
        SolutionField {
            grid: *grid,
            values,
            kind: spec.kind,
            alpha: spec.alpha,
            bc: spec.bc.kind(),
            scheme: "sampled".to_string(),
            spec_hash: spec_hash(&spec.label),
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn bc(&self) -> BcKind {
        self.bc
    }

    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    pub fn spec_hash(&self) -> &str {
        &self.spec_hash
    }

    pub fn nx(&self) -> usize {
        self.grid.nx()
    }

    pub fn nt(&self) -> usize {
        self.grid.nt()
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let w = self.grid.nx() + 1;
        &self.values[n * w..(n + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.grid.nx() + 1)
    }

    pub fn at(&self, n: usize, i: usize) -> f64 {
        self.values[n * (self.grid.nx() + 1) + i]
    }

    /// Time trace at node `i`.
    pub fn column(&self, i: usize) -> TimeSeries {
        let vals = (0..=self.nt()).map(|n| self.at(n, i)).collect();
        TimeSeries::new(self.grid.time(), vals).expect("length matches grid")
    }

    /// `self − other`, used for continuous-dependence checks.
    pub fn difference(&self, other: &SolutionField) -> Result<SolutionField, SolverError> {
        if self.grid != other.grid {
            return Err(SolverError::GridMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a -= b;
        }
        out.scheme = format!("difference({}, {})", self.scheme, other.scheme);
        Ok(out)
    }

    /// Largest nodal error against `u` over all levels, and the largest
    /// trapezoid L² error over all levels.
    pub fn errors_against(&self, u: &SpaceTimeFn) -> (f64, f64) {
        let xs = self.grid.xs();
        let h = self.grid.h();
        let mut max_abs: f64 = 0.0;
        let mut max_l2: f64 = 0.0;
        for n in 0..=self.nt() {
            let t = self.grid.t(n);
            let row = self.row(n);
            let mut acc = CompensatedSum::new();
            for (i, (&x, &v)) in xs.iter().zip(row).enumerate() {
                let e = v - u.eval(x, t);
                max_abs = max_abs.max(e.abs());
                let w = if i == 0 || i == xs.len() - 1 {
                    0.5 * h
                } else {
                    h
                };
                acc.add(w * e * e);
            }
            max_l2 = max_l2.max(acc.value().sqrt());
        }
        (max_abs, max_l2)
    }

    /// CSV with `##` metadata lines, a `# t, x, u` header and one row per node.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * self.values.len() + 512);
        let meta = [
            ("kind", self.kind.to_string()),
            ("bc", self.bc.to_string()),
            ("alpha", format!("{:.16e}", self.alpha.value())),
            ("l", format!("{:.16e}", self.grid.l())),
            ("T", format!("{:.16e}", self.grid.t_end())),
            ("nx", self.nx().to_string()),
            ("nt", self.nt().to_string()),
            ("scheme", self.scheme.clone()),
            ("spec_hash", self.spec_hash.clone()),
        ];
        for (k, v) in meta {
            s.push_str(&format!("## {k} = {v}\n"));
        }
        s.push_str("# t, x, u\n");
        let xs = self.grid.xs();
        for n in 0..=self.nt() {
            let t = self.grid.t(n);
            for (x, u) in xs.iter().zip(self.row(n)) {
                s.push_str(&format!("{t:.16e}, {x:.16e}, {u:.16e}\n"));
            }
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

impl fmt::Display for SolutionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} field, alpha = {}, {}x{} ({})",
            self.kind,
            self.bc,
            self.alpha,
            self.nx(),
            self.nt(),
            self.scheme
        )
    }
}

/// Discrete `Λ(t)u = (k u_x)_x − q u` as three diagonals, plus the source
/// `g(t)` carrying `f` and the Robin data.
struct SpatialOperator {
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
    g: Vec<f64>,
}

impl SpatialOperator {
    fn assemble(spec: &ProblemSpec, grid: &UniformGrid, xs: &[f64], t: f64) -> Self {
        let nx = grid.nx();
        let h = grid.h();
        let h2 = h * h;
        let c = &spec.coefficients;
        let a: Vec<f64> = (0..nx).map(|i| c.k.eval(xs[i] + 0.5 * h, t)).collect();
        let mut op = SpatialOperator {
            lo: vec![0.0; nx + 1],
            di: vec![0.0; nx + 1],
            up: vec![0.0; nx + 1],
            g: vec![0.0; nx + 1],
        };
        for i in 1..nx {
            op.lo[i] = a[i - 1] / h2;
            op.up[i] = a[i] / h2;
            op.di[i] = -(a[i - 1] + a[i]) / h2 - c.q.eval(xs[i], t);
            op.g[i] = c.f.eval(xs[i], t);
        }
        if let BoundaryCondition::Robin(r) = &spec.bc {
            // half-cell balances, divided by h/2
            op.up[0] = 2.0 * a[0] / h2;
            op.di[0] = -2.0 * a[0] / h2 - 2.0 * r.beta1.eval(t) / h - c.q.eval(xs[0], t);
            op.g[0] = c.f.eval(xs[0], t) + 2.0 * r.mu1.eval(t) / h;
            op.lo[nx] = 2.0 * a[nx - 1] / h2;
            op.di[nx] = -2.0 * a[nx - 1] / h2 - 2.0 * r.beta2.eval(t) / h - c.q.eval(xs[nx], t);
            op.g[nx] = c.f.eval(xs[nx], t) + 2.0 * r.mu2.eval(t) / h;
        }
        op
    }

    fn apply(&self, u: &[f64], i: usize) -> f64 {
        let n = u.len();
        let mut v = self.di[i] * u[i];
        if i > 0 {
            v += self.lo[i] * u[i - 1];
        }
        if i + 1 < n {
            v += self.up[i] * u[i + 1];
        }
        v
    }
}

const HISTORY_CHUNK: usize = 64;

/// `H_i = Σ_{j<len} b[m − j]·inc[j][i]` with `m = inc.len()`, ascending in `j`.
fn history(inc: &[Vec<f64>], b: &[f64], width: usize, exec: Execution) -> Vec<f64> {
    let m = inc.len();
    let mut out = vec![0.0; width];
    if m == 0 {
        return out;
    }
    exec.for_each_chunk_mut(&mut out, HISTORY_CHUNK, |off, part| {
        let mut acc = vec![CompensatedSum::new(); part.len()];
        for (j, row) in inc.iter().enumerate() {
            let w = b[m - j];
            for (a, &d) in acc.iter_mut().zip(&row[off..off + part.len()]) {
                a.add(w * d);
            }
        }
        for (o, a) in part.iter_mut().zip(&acc) {
            *o = a.value();
        }
    });
    out
}

fn check_inputs(
    spec: &ProblemSpec,
    grid: &UniformGrid,
    kind: EquationKind,
    opts: &SolverOptions,
) -> Result<(), SolverError> {
    if spec.kind != kind {
        return Err(SolverError::KindMismatch {
            expected: kind,
            got: spec.kind,
        });
    }
    if grid.nx() < 4 || grid.nt() < 4 {
        return Err(SolverError::GridTooCoarse {
            nx: grid.nx(),
            nt: grid.nt(),
        });
    }
    if (grid.l() - spec.l).abs() > 1e-12 * spec.l
        || (grid.t_end() - spec.t_end).abs() > 1e-12 * spec.t_end
    {
        return Err(SolverError::DomainMismatch);
    }
    if opts.validate {
        let report = validate_with(spec, grid, opts.exec);
        if !report.passed() {
            return Err(SolverError::Hypothesis(report.summary()));
        }
    }
    Ok(())
}

fn initial_row(spec: &ProblemSpec, xs: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = xs.iter().map(|&x| spec.init.u0.eval(x)).collect();
    if spec.bc.kind() == BcKind::Dirichlet {
        let n = u.len() - 1;
        u[0] = 0.0;
        u[n] = 0.0;
    }
    u
}

fn finish(spec: &ProblemSpec, grid: &UniformGrid, values: Vec<f64>, scheme: &str) -> SolutionField {
    SolutionField {
        grid: *grid,
        values,
        kind: spec.kind,
        alpha: spec.alpha,
        bc: spec.bc.kind(),
        scheme: scheme.to_string(),
        spec_hash: crate::solver::spec_hash(&spec.label),
    }
}

fn pin_dirichlet(sys: &mut TridiagonalSystem, dirichlet: bool) {
    if dirichlet {
        let n = sys.len() - 1;
        for i in [0, n] {
            sys.sub[i] = 0.0;
            sys.sup[i] = 0.0;
            sys.diag[i] = 1.0;
            sys.rhs[i] = 0.0;
        }
    }
}

/// Dispatches on the spec's equation kind.
pub fn solve(spec: &ProblemSpec, grid: &UniformGrid) -> Result<SolutionField, SolverError> {
    solve_with(spec, grid, &SolverOptions::default())
}

pub fn solve_with(
    spec: &ProblemSpec,
    grid: &UniformGrid,
    opts: &SolverOptions,
) -> Result<SolutionField, SolverError> {
    match spec.kind {
        EquationKind::Diffusion => solve_diffusion_with(spec, grid, opts),
        EquationKind::Wave => solve_wave_with(spec, grid, opts),
    }
}

pub fn solve_diffusion(
    spec: &ProblemSpec,
    grid: &UniformGrid,
) -> Result<SolutionField, SolverError> {
    solve_diffusion_with(spec, grid, &SolverOptions::default())
}

/// L1 in time, fully implicit in space:
/// `(σI − Λ_n)uⁿ = σuⁿ⁻¹ − σHⁿ + gⁿ`, `σ = τ^{−α}/Γ(2−α)`.
pub fn solve_diffusion_with(
    spec: &ProblemSpec,
    grid: &UniformGrid,
    opts: &SolverOptions,
) -> Result<SolutionField, SolverError> {
    check_inputs(spec, grid, EquationKind::Diffusion, opts)?;
    let (nx, nt) = (grid.nx(), grid.nt());
    let width = nx + 1;
    let xs = grid.xs();
    let sigma = spec.alpha.l1_scale(grid.tau());
    let b = l1_weights(spec.alpha.value(), nt + 1);
    let dirichlet = spec.bc.kind() == BcKind::Dirichlet;

    let mut values = Vec::with_capacity(width * (nt + 1));
    let mut prev = initial_row(spec, &xs);
    values.extend_from_slice(&prev);
    let mut inc: Vec<Vec<f64>> = Vec::with_capacity(nt);
    let mut sys = TridiagonalSystem::zeros(width);

    for n in 1..=nt {
        let op = SpatialOperator::assemble(spec, grid, &xs, grid.t(n));
        let hist = history(&inc, &b, width, opts.exec);
        for i in 0..width {
            sys.sub[i] = -op.lo[i];
            sys.sup[i] = -op.up[i];
            sys.diag[i] = sigma - op.di[i];
            sys.rhs[i] = sigma * (prev[i] - hist[i]) + op.g[i];
        }
        pin_dirichlet(&mut sys, dirichlet);
        let next = thomas_solve(&sys)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite { step: n });
        }
        inc.push(next.iter().zip(&prev).map(|(a, b)| a - b).collect());
        values.extend_from_slice(&next);
        prev = next;
    }
    Ok(finish(spec, grid, values, "l1-implicit"))
}

pub fn solve_wave(spec: &ProblemSpec, grid: &UniformGrid) -> Result<SolutionField, SolverError> {
    solve_wave_with(spec, grid, &SolverOptions::default())
}

/// L1 on the velocity chain `W_0 = u1`, `W_m = (u^m − u^{m−1})/τ`:
///
/// `(σ/τ − θΛ)uⁿ = (σ/τ)uⁿ⁻¹ + σW_{n−1} − σHⁿ + (1−θ)Λuⁿ⁻¹ + g`,
/// with `θ = ½` (data at `t_{n−1/2}`) or `θ = 1` (data at `t_n`).
pub fn solve_wave_with(
    spec: &ProblemSpec,
    grid: &UniformGrid,
    opts: &SolverOptions,
) -> Result<SolutionField, SolverError> {
    check_inputs(spec, grid, EquationKind::Wave, opts)?;
    let u1 = spec
        .init
        .u1
        .as_ref()
        .ok_or_else(|| SolverError::Hypothesis("wave problem needs u1".to_string()))?;
    let (nx, nt) = (grid.nx(), grid.nt());
    let width = nx + 1;
    let xs = grid.xs();
    let tau = grid.tau();
    let sigma = spec.alpha.l1_scale(tau);
    let b = l1_weights(spec.alpha.value(), nt + 1);
    let dirichlet = spec.bc.kind() == BcKind::Dirichlet;
    let (theta, scheme) = match opts.wave_coupling {
        WaveCoupling::Midpoint => (0.5, "l1-wave-midpoint"),
        WaveCoupling::Implicit => (1.0, "l1-wave-implicit"),
    };

    let mut values = Vec::with_capacity(width * (nt + 1));
    let mut prev = initial_row(spec, &xs);
    values.extend_from_slice(&prev);
    let mut vel: Vec<f64> = xs.iter().map(|&x| u1.eval(x)).collect();
    let mut inc: Vec<Vec<f64>> = Vec::with_capacity(nt);
    let mut sys = TridiagonalSystem::zeros(width);

    for n in 1..=nt {
        let t = grid.t(n - 1) + theta * tau;
        let op = SpatialOperator::assemble(spec, grid, &xs, t);
        let hist = history(&inc, &b, width, opts.exec);
        for i in 0..width {
            sys.sub[i] = -theta * op.lo[i];
            sys.sup[i] = -theta * op.up[i];
            sys.diag[i] = sigma / tau - theta * op.di[i];
            sys.rhs[i] = sigma / tau * prev[i]
                + sigma * (vel[i] - hist[i])
                + (1.0 - theta) * op.apply(&prev, i)
                + op.g[i];
        }
        pin_dirichlet(&mut sys, dirichlet);
        let next = thomas_solve(&sys)?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::NonFinite { step: n });
        }
        let new_vel: Vec<f64> = next.iter().zip(&prev).map(|(a, b)| (a - b) / tau).collect();
        inc.push(new_vel.iter().zip(&vel).map(|(a, b)| a - b).collect());
        vel = new_vel;
        values.extend_from_slice(&next);
        prev = next;
    }
    Ok(finish(spec, grid, values, scheme))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem_spec::{manufactured, ScalarFn};

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn thomas_small_systems() {
        let sys = TridiagonalSystem {
            sub: vec![0.0, -1.0, -1.0],
            diag: vec![2.0; 3],
            sup: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0, 0.0, 1.0],
        };
        let x = thomas_solve(&sys).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let mut id = TridiagonalSystem::zeros(4);
        id.diag = vec![1.0; 4];
        id.rhs = vec![3.0, -1.0, 0.5, 2.0];
        assert_eq!(thomas_solve(&id).unwrap(), id.rhs);
    }

    #[test]
    fn thomas_reports_zero_pivot() {
        let mut sys = TridiagonalSystem::zeros(3);
        sys.diag = vec![1.0, 1.0, 1.0];
        sys.sub = vec![0.0, 1.0, 0.0];
        sys.sup = vec![1.0, 0.0, 0.0];
        assert!(matches!(
            thomas_solve(&sys),
            Err(SolverError::ZeroPivot { index: 1 })
        ));
    }

    fn zero_data(name: &str) -> ProblemSpec {
        let spec = manufactured(name, order(0.5)).unwrap().spec;
        let mut spec = spec
            .with_forcing(SpaceTimeFn::constant(0.0), "0")
            .with_initial(ScalarFn::constant(0.0), "0");
        if let BoundaryCondition::Robin(r) = &mut spec.bc {
            r.mu1 = ScalarFn::constant(0.0);
            r.mu2 = ScalarFn::constant(0.0);
        }
        spec
    }

    #[test]
    fn zero_data_gives_zero_field() {
        for name in crate::problem_spec::CATALOG {
            let spec = zero_data(name);
            let grid = spec.grid(8, 8).unwrap();
            let field = solve(&spec, &grid).unwrap();
            assert!(field.rows().flatten().all(|&v| v == 0.0), "{name}");
        }
    }

    #[test]
    fn dirichlet_rows_pinned() {
        let m = manufactured("wave-dirichlet-poly", order(0.3)).unwrap();
        let grid = m.spec.grid(16, 16).unwrap();
        let field = solve(&m.spec, &grid).unwrap();
        for row in field.rows() {
            assert_eq!(row[0], 0.0);
            assert_eq!(row[16], 0.0);
        }
    }

    #[test]
    fn assembled_step_is_diagonally_dominant() {
        let m = manufactured("diffusion-varcoef", order(0.5)).unwrap();
        let grid = m.spec.grid(32, 32).unwrap();
        let xs = grid.xs();
        let op = SpatialOperator::assemble(&m.spec, &grid, &xs, 0.5);
        let sigma = m.spec.alpha.l1_scale(grid.tau());
        let mut sys = TridiagonalSystem::zeros(33);
        for i in 0..33 {
            sys.sub[i] = -op.lo[i];
            sys.sup[i] = -op.up[i];
            sys.diag[i] = sigma - op.di[i];
        }
        pin_dirichlet(&mut sys, true);
        assert!(sys.dominance_margin() > 0.0);
    }

    #[test]
    fn refuses_violated_hypotheses_and_wrong_kind() {
        let mut spec = manufactured("diffusion-dirichlet-poly", order(0.5))
            .unwrap()
            .spec;
        let grid = spec.grid(8, 8).unwrap();
        assert!(matches!(
            solve_wave(&spec, &grid),
            Err(SolverError::KindMismatch { .. })
        ));
        spec.coefficients.q = SpaceTimeFn::constant(-1.0);
        assert!(matches!(
            solve(&spec, &grid),
            Err(SolverError::Hypothesis(_))
        ));
        let coarse = spec.grid(2, 8).unwrap();
        assert!(matches!(
            solve(&spec, &coarse),
            Err(SolverError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn spec_hash_is_sixteen_hex_digits() {
        let h = spec_hash("abc");
        assert_eq!(h, "ba7816bf8f01cfea");
    }
}
