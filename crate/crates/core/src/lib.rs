//! Fractional diffusion-wave boundary value problems: discrete Caputo and
//! Riemann-Liouville operators, Mittag-Leffler functions, implicit
//! finite-difference solvers, and numerical checks of the energy a priori
//! estimates these problems satisfy.

pub mod energy_monitor;
pub mod exec;
pub mod expr;
pub mod fractional_ops;
pub mod mittag_leffler;
pub mod numeric;
pub mod problem_spec;
pub mod quadrature;
pub mod solver;
pub mod suite;

pub use exec::Execution;
pub use fractional_ops::{FracError, FracOrder, TimeGrid, TimeSeries, UniformGrid};
