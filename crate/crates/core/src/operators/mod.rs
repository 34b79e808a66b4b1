//! The deterministic side of the equation: generators `A(t)`, noise
//! operators `M_k(t)`, noise models, time stepping and the constants `C_k`.

mod ck;
mod family;
mod grid;
mod noise;
mod noise_op;
mod problem;
mod stepper;

pub use ck::{estimate_all_ck, estimate_ck, trapezoid_weights, CkEstimate, CkOptions};
pub use family::{LinOp, OperatorFamily, Representation};
pub use grid::PeriodicGrid;
pub use noise::{cosine_mode, time_modes, NoiseModel, TimeBasis, TimeModeFn};
pub use noise_op::{apply_mk, derivative_multiplier, NoiseOperatorFamily, SpatialAction};
pub use problem::{EvolutionProblem, Forcing};
pub use stepper::{Stepper, StepperKind};
