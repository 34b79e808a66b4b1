//! Cameron–Martin chaos: basis evaluation, the Wick product, the Malliavin
//! derivative and Skorokhod integral in coordinates, weighted norms, and
//! stochastic exponentials.

mod hermite;
mod norms;
mod series;
mod space;

pub use hermite::{hermite, xi_eval, MAX_HERMITE_ORDER};
pub use norms::{
    dual_norm_sq, dual_pairing, e_alpha_norm_sq, order_energy, smallness_radius, stoch_exp,
    weighted_norm_sq, weighted_norm_sq_by_order, DirectionH, DualPairing, WeightSequence,
    SMALLNESS_GRID,
};
pub use series::{
    malliavin, skorokhod, skorokhod_into, skorokhod_via_wick, wick_product, wick_product_with,
    BoxPolicy, ChaosSeries, UChaosSeries, WickOutcome,
};
pub use space::{fft_wavenumbers, CoefficientSpace, SpaceKind};

pub use num_complex::Complex64 as Coeff;

/// A coefficient vector in a [`CoefficientSpace`].
pub type CVec = Vec<Coeff>;
