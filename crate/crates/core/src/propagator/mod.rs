//! The propagator: the lower-triangular system for the chaos coefficients
//! `u_α(t)`, its statistics and weighted norms, the Krylov–Veretennikov
//! recursion, and pairings with stochastic exponentials.

mod kv;
mod pairing;
mod solve;
mod stats;

pub use kv::{kv_recursion, KvLevel, KvReport, LevelSlice};
pub use pairing::{u_h_pairing, PairingResult};
pub use solve::{default_weights, solve, PropagatorSolution, SolveOptions, DEFAULT_CAP, DEFAULT_R};
pub use stats::{
    mean_and_moments, solution_norm_sq, solution_norm_sq_by_order, solve_statistics, trajectory_norm,
    weighted_norm_at_by_order, Moments, SolutionStatistics,
};
