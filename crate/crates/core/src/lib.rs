//! Approximation scheme for the parametric knapsack problem.
//!
//! Item profits are affine in a real parameter λ. [`solve_parametric`]
//! partitions the real line into alternating single-point and open
//! intervals and attaches to each a knapsack solution that is
//! `(1 − ε)`-optimal for every λ in it. All parameter-space arithmetic is
//! exact.

pub mod affine;
pub mod bench;
pub mod envelope;
pub mod export;
pub mod generator;
pub mod greedy;
pub mod io;
pub mod knapsack;
pub mod model;
pub mod oracle;
pub mod parametric;
pub mod piecewise;
pub mod rational;
pub mod subdivision;

pub use affine::AffineFunction;
pub use envelope::{upper_envelope, Envelope};
pub use greedy::{compute_phi, greedy_half_fixed, HalfApproxFunction};
pub use model::{Instance, InstanceError, Item, KnapsackSolution};
pub use oracle::{brute_force_fixed, brute_force_parametric, ExactProfitFunction, ORACLE_MAX_ITEMS};
pub use parametric::{certify, solve_parametric, CertificateReport, InnerMode, SolutionSchedule};
pub use piecewise::{Interval, IntervalKind, PiecewiseLinearFunction};
pub use rational::{Epsilon, Rational};
pub use subdivision::{build_intervals, critical_lambdas, CriticalSet};
