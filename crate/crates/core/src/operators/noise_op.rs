use nalgebra::DMatrix;

use super::{LinOp, NoiseModel, PeriodicGrid};
use crate::chaos::{CVec, Coeff, CoefficientSpace};
use crate::error::{Error, Result};

/// `σ (iy)^m` on the given wavenumbers.
pub fn derivative_multiplier(wavenumbers: &[f64], sigma: f64, m_order: u32) -> CVec {
    wavenumbers
        .iter()
        .map(|&y| Coeff::new(0.0, y).powu(m_order) * sigma)
        .collect()
}

/// The spatial part `B_k` of a noise operator `M_k(t) = c_k(t) B_k`.
#[derive(Clone, Debug)]
pub enum SpatialAction {
    Zero,
    /// Multiplication by a real constant.
    Scalar(f64),
    /// A diagonal action on Fourier modes, e.g. `σ∂^m`.
    Multiplier(CVec),
    /// `v ↦ h · (D v)` with `h` given on the physical grid and `D` diagonal
    /// on Fourier modes.
    Multiply {
        grid: PeriodicGrid,
        values: Vec<f64>,
        multiplier: CVec,
    },
    Matrix(DMatrix<Coeff>),
}

impl SpatialAction {
    /// `σ∂^m` on a Fourier space.
    pub fn derivative(space: &CoefficientSpace, sigma: f64, m_order: u32) -> Result<Self> {
        let ys = space
            .wavenumbers()
            .ok_or_else(|| Error::Dimension("∂^m needs a Fourier space".into()))?;
        Ok(Self::Multiplier(derivative_multiplier(ys, sigma, m_order)))
    }

    /// `v ↦ h · σ∂^m v`.
    pub fn multiply(grid: &PeriodicGrid, values: Vec<f64>, sigma: f64, m_order: u32) -> Self {
        Self::Multiply {
            grid: grid.clone(),
            multiplier: derivative_multiplier(&grid.wavenumbers(), sigma, m_order),
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Scalar(s) => *s == 0.0,
            Self::Multiplier(d) => d.iter().all(|c| c.norm_sqr() == 0.0),
            Self::Multiply { values, multiplier, .. } => {
                values.iter().all(|v| *v == 0.0) || multiplier.iter().all(|c| c.norm_sqr() == 0.0)
            }
            Self::Matrix(m) => m.iter().all(|c| c.norm_sqr() == 0.0),
        }
    }

    pub fn apply(&self, v: &[Coeff]) -> CVec {
        match self {
            Self::Zero => vec![Coeff::new(0.0, 0.0); v.len()],
            Self::Scalar(s) => v.iter().map(|c| c * *s).collect(),
            Self::Multiplier(d) => LinOp::Diag(d.clone()).apply(v),
            Self::Multiply {
                grid,
                values,
                multiplier,
            } => {
                let dv: CVec = multiplier.iter().zip(v).map(|(a, b)| a * b).collect();
                let mut phys = grid.inverse(&dv);
                for (p, h) in phys.iter_mut().zip(values) {
                    *p *= *h;
                }
                grid.forward(&phys)
            }
            Self::Matrix(m) => LinOp::Dense(m.clone()).apply(v),
        }
    }

    /// Conjugate transpose (Euclidean) applied to `v`.
    pub fn apply_adjoint(&self, v: &[Coeff]) -> CVec {
        match self {
            Self::Zero => vec![Coeff::new(0.0, 0.0); v.len()],
            Self::Scalar(s) => v.iter().map(|c| c * *s).collect(),
            Self::Multiplier(d) => d.iter().zip(v).map(|(a, b)| a.conj() * b).collect(),
            Self::Multiply {
                grid,
                values,
                multiplier,
            } => {
                let mut phys = grid.inverse(v);
                for (p, h) in phys.iter_mut().zip(values) {
                    *p *= *h;
                }
                grid.forward(&phys)
                    .iter()
                    .zip(multiplier)
                    .map(|(a, m)| a * m.conj())
                    .collect()
            }
            Self::Matrix(m) => LinOp::Dense(m.clone()).apply_adjoint(v),
        }
    }
}

/// The noise operators `M_k(t) = c_k(t) B_k`, `k = 1..=K`.
#[derive(Clone, Debug)]
pub struct NoiseOperatorFamily {
    noise: NoiseModel,
    actions: Vec<SpatialAction>,
}

impl NoiseOperatorFamily {
    /// The same spatial action for every mode.
    pub fn uniform(noise: NoiseModel, action: SpatialAction) -> Self {
        Self {
            noise,
            actions: vec![action],
        }
    }

    /// One spatial action per mode.
    pub fn per_mode(noise: NoiseModel, actions: Vec<SpatialAction>) -> Result<Self> {
        if actions.len() != noise.mode_count() {
            return Err(Error::Dimension(format!(
                "{} actions for {} noise modes",
                actions.len(),
                noise.mode_count()
            )));
        }
        Ok(Self { noise, actions })
    }

    /// `B_k v = h_k · σ∂^m v` for space-white or space-time noise, with
    /// `h_k` the spatial component of mode `k`.
    pub fn space_multiplication(noise: NoiseModel, grid: &PeriodicGrid, sigma: f64, m_order: u32) -> Result<Self> {
        let actions = (1..=noise.mode_count())
            .map(|k| {
                let h = noise
                    .space_profile(k)?
                    .ok_or_else(|| Error::Unsupported(format!("{} noise has no space modes", noise.label())))?;
                Ok(SpatialAction::multiply(grid, h, sigma, m_order))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::per_mode(noise, actions)
    }

    pub fn zero(noise: NoiseModel) -> Self {
        Self::uniform(noise, SpatialAction::Zero)
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn mode_count(&self) -> usize {
        self.noise.mode_count()
    }

    pub fn action(&self, k: usize) -> Result<&SpatialAction> {
        let bound = self.mode_count();
        if k == 0 || k > bound {
            return Err(Error::ModeOutOfRange { k, bound });
        }
        Ok(if self.actions.len() == 1 {
            &self.actions[0]
        } else {
            &self.actions[k - 1]
        })
    }

    pub fn is_zero(&self) -> bool {
        self.actions.iter().all(SpatialAction::is_zero)
    }

    pub fn profile(&self, k: usize, t: f64) -> Result<f64> {
        self.noise.time_profile(k, t)
    }

    /// `M_k(t) v = c_k(t) · B_k v`.
    pub fn apply_mk(&self, k: usize, t: f64, v: &[Coeff]) -> Result<CVec> {
        let b = self.action(k)?;
        let c = self.profile(k, t)?;
        Ok(b.apply(v).into_iter().map(|x| x * c).collect())
    }

    /// `M_k(t)^* v` in the Euclidean coefficient inner product.
    pub fn apply_mk_adjoint(&self, k: usize, t: f64, v: &[Coeff]) -> Result<CVec> {
        let b = self.action(k)?;
        let c = self.profile(k, t)?;
        Ok(b.apply_adjoint(v).into_iter().map(|x| x * c).collect())
    }
}

/// `M_k(t) v` as a free function.
pub fn apply_mk(m: &NoiseOperatorFamily, k: usize, t: f64, v: &[Coeff]) -> Result<CVec> {
    m.apply_mk(k, t, v)
}
