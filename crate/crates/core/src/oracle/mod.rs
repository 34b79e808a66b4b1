//! Independent checks: Monte Carlo for the Itô equations, closed-form
//! per-mode moments, and the deterministic `h`-perturbed equation.

mod closed_form;
mod deterministic;
mod mc;

pub use closed_form::{
    closed_form_moment, moment_integrability, wick_space_noise_integrability, wick_space_noise_norm,
    wick_space_noise_series, Integrability,
};
pub use deterministic::{solve_deterministic_h, STABILITY_BUDGET};
pub use mc::{mc_ito, output_steps, McResult, CHUNK, MAX_OUTPUTS};
