use std::f64::consts::PI;

use super::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Scalar,
    RealGrid,
    FourierModes,
}

/// The finite-dimensional Hilbert space `X` holding chaos coefficients.
///
/// `‖f‖_X² = Σ_j w_j |f_j|²`. For Fourier modes the weights realize the
/// physical `L₂` norm through Parseval, and `‖f‖_V²` adds the `(1 + y²)`
/// Sobolev factor. For the other kinds `V = H`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSpace {
    kind: SpaceKind,
    inner_weights: Vec<f64>,
    wavenumbers: Option<Vec<f64>>,
}

impl CoefficientSpace {
    pub fn scalar() -> Self {
        Self {
            kind: SpaceKind::Scalar,
            inner_weights: vec![1.0],
            wavenumbers: None,
        }
    }

    /// Physical values on a grid with quadrature weights.
    pub fn real_grid(weights: Vec<f64>) -> Self {
        assert!(
            !weights.is_empty() && weights.iter().all(|&w| w > 0.0),
            "quadrature weights must be positive"
        );
        Self {
            kind: SpaceKind::RealGrid,
            inner_weights: weights,
            wavenumbers: None,
        }
    }

    /// Unnormalized DFT coefficients of a periodic function on `[0, length)`
    /// sampled at `n` points, in standard FFT ordering.
    pub fn fourier(length: f64, n: usize) -> Self {
        assert!(length > 0.0 && n >= 1);
        Self {
            kind: SpaceKind::FourierModes,
            inner_weights: vec![length / (n * n) as f64; n],
            wavenumbers: Some(fft_wavenumbers(length, n)),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.inner_weights.len()
    }

    pub fn inner_weights(&self) -> &[f64] {
        &self.inner_weights
    }

    pub fn wavenumbers(&self) -> Option<&[f64]> {
        self.wavenumbers.as_deref()
    }

    /// Weights of the `V` norm.
    pub fn v_weights(&self) -> Vec<f64> {
        match &self.wavenumbers {
            Some(ys) => self
                .inner_weights
                .iter()
                .zip(ys)
                .map(|(w, y)| w * (1.0 + y * y))
                .collect(),
            None => self.inner_weights.clone(),
        }
    }

    pub fn norm_sq(&self, v: &[Coeff]) -> f64 {
        debug_assert_eq!(v.len(), self.dim());
        v.iter()
            .zip(&self.inner_weights)
            .map(|(c, w)| w * c.norm_sqr())
            .sum()
    }

    pub fn norm_v_sq(&self, v: &[Coeff]) -> f64 {
        match &self.wavenumbers {
            Some(ys) => v
                .iter()
                .zip(&self.inner_weights)
                .zip(ys)
                .map(|((c, w), y)| w * (1.0 + y * y) * c.norm_sqr())
                .sum(),
            None => self.norm_sq(v),
        }
    }

    /// `(v, w)_X`, conjugate-linear in the second argument.
    pub fn inner(&self, v: &[Coeff], w: &[Coeff]) -> Coeff {
        v.iter()
            .zip(w)
            .zip(&self.inner_weights)
            .map(|((a, b), q)| a * b.conj() * *q)
            .sum()
    }

    pub fn zeros(&self) -> Vec<Coeff> {
        vec![Coeff::new(0.0, 0.0); self.dim()]
    }
}

/// `2π/L · (0, 1, ..., n/2 − 1, −n/2, ..., −1)`.
pub fn fft_wavenumbers(length: f64, n: usize) -> Vec<f64> {
    let scale = 2.0 * PI / length;
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as i64 } else { j as i64 - n as i64 };
            scale * m as f64
        })
        .collect()
}
