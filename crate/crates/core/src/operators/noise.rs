use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::PeriodicGrid;
use crate::error::{Error, Result};

/// A user-supplied time basis `(k, t) ↦ m_k(t)`.
pub type TimeModeFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// Orthonormal basis of `L₂((0, T))` used for time-white noise.
#[derive(Clone, Default)]
pub enum TimeBasis {
    /// `m_1 = 1/√T`, `m_k = √(2/T) cos((k−1)πt/T)`.
    #[default]
    Cosine,
    Custom(TimeModeFn),
}

impl fmt::Debug for TimeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cosine => f.write_str("Cosine"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl TimeBasis {
    pub fn eval(&self, k: usize, t: f64, horizon: f64) -> f64 {
        match self {
            Self::Cosine => cosine_mode(k, t, horizon),
            Self::Custom(m) => m(k, t),
        }
    }
}

/// The cosine basis of `L₂((0, T))`.
pub fn cosine_mode(k: usize, t: f64, horizon: f64) -> f64 {
    assert!(k >= 1);
    if k == 1 {
        1.0 / horizon.sqrt()
    } else {
        (2.0 / horizon).sqrt() * ((k - 1) as f64 * PI * t / horizon).cos()
    }
}

/// Which Gaussian white noise drives the equation and how its basis
/// `{𝔲_k}` is laid out.
#[derive(Clone, Debug)]
pub enum NoiseModel {
    /// `𝒰 = L₂((0, T))`, `ξ_k = ∫ m_k dW`.
    TimeWhite {
        horizon: f64,
        modes: usize,
        basis: TimeBasis,
    },
    /// `𝒰 = L₂` of the periodic box with trigonometric modes.
    SpaceWhite { grid: PeriodicGrid, modes: usize },
    /// Tensor basis `m_i(t) h_j(x)`, flattened row-major by time index:
    /// `k − 1 = (i − 1)·space_modes + (j − 1)`.
    SpaceTime {
        horizon: f64,
        grid: PeriodicGrid,
        time_modes: usize,
        space_modes: usize,
        basis: TimeBasis,
    },
    /// One standard Gaussian `ξ`, constant in time.
    SingleGaussian,
}

impl NoiseModel {
    pub fn time_white(horizon: f64, modes: usize) -> Self {
        Self::TimeWhite {
            horizon,
            modes,
            basis: TimeBasis::Cosine,
        }
    }

    pub fn space_time(horizon: f64, grid: PeriodicGrid, time_modes: usize, space_modes: usize) -> Self {
        Self::SpaceTime {
            horizon,
            grid,
            time_modes,
            space_modes,
            basis: TimeBasis::Cosine,
        }
    }

    /// Number of basis elements `𝔲_k` carried by the model.
    pub fn mode_count(&self) -> usize {
        match self {
            Self::TimeWhite { modes, .. } | Self::SpaceWhite { modes, .. } => *modes,
            Self::SpaceTime {
                time_modes,
                space_modes,
                ..
            } => time_modes * space_modes,
            Self::SingleGaussian => 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::TimeWhite { .. } => "time-white",
            Self::SpaceWhite { .. } => "space-white",
            Self::SpaceTime { .. } => "space-time",
            Self::SingleGaussian => "single-gaussian",
        }
    }

    /// `(i, j)` → `k` for space-time noise.
    pub fn flatten(&self, i: usize, j: usize) -> Result<usize> {
        match self {
            Self::SpaceTime {
                time_modes,
                space_modes,
                ..
            } => {
                if i == 0 || i > *time_modes {
                    return Err(Error::ModeOutOfRange { k: i, bound: *time_modes });
                }
                if j == 0 || j > *space_modes {
                    return Err(Error::ModeOutOfRange { k: j, bound: *space_modes });
                }
                Ok((i - 1) * space_modes + j)
            }
            _ => Err(Error::Unsupported(format!("flatten on {} noise", self.label()))),
        }
    }

    /// `k` → `(time index, space index)`; absent components are `None`.
    pub fn split(&self, k: usize) -> Result<(Option<usize>, Option<usize>)> {
        let bound = self.mode_count();
        if k == 0 || k > bound {
            return Err(Error::ModeOutOfRange { k, bound });
        }
        Ok(match self {
            Self::TimeWhite { .. } => (Some(k), None),
            Self::SpaceWhite { .. } => (None, Some(k)),
            Self::SpaceTime { space_modes, .. } => (Some((k - 1) / space_modes + 1), Some((k - 1) % space_modes + 1)),
            Self::SingleGaussian => (None, None),
        })
    }

    /// Scalar time profile `c_k(t)` of mode `k`: `m_i(t)` when the mode has
    /// a time component, `1` otherwise.
    pub fn time_profile(&self, k: usize, t: f64) -> Result<f64> {
        let (i, _) = self.split(k)?;
        match (self, i) {
            (Self::TimeWhite { horizon, basis, .. }, Some(i)) | (Self::SpaceTime { horizon, basis, .. }, Some(i)) => {
                check_time(t, *horizon)?;
                Ok(basis.eval(i, t, *horizon))
            }
            _ => Ok(1.0),
        }
    }

    /// Spatial mode values `h_j(x)` on the grid for mode `k`, if any.
    pub fn space_profile(&self, k: usize) -> Result<Option<Vec<f64>>> {
        let (_, j) = self.split(k)?;
        Ok(match (self, j) {
            (Self::SpaceWhite { grid, .. }, Some(j)) | (Self::SpaceTime { grid, .. }, Some(j)) => Some(grid.space_mode_values(j)),
            _ => None,
        })
    }

    pub fn horizon(&self) -> Option<f64> {
        match self {
            Self::TimeWhite { horizon, .. } | Self::SpaceTime { horizon, .. } => Some(*horizon),
            _ => None,
        }
    }
}

fn check_time(t: f64, horizon: f64) -> Result<()> {
    let slack = 1e-12 * horizon.max(1.0);
    if t < -slack || t > horizon + slack {
        return Err(Error::TimeOutOfRange { t, horizon });
    }
    Ok(())
}

/// `m_k(t)` of a time-white or space-time model, `1` for time-independent modes.
pub fn time_modes(noise: &NoiseModel, k: usize, t: f64) -> Result<f64> {
    noise.time_profile(k, t)
}
