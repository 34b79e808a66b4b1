use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::chaos::{CVec, Coeff, CoefficientSpace};

/// Uniform periodic grid on `[0, L)` with a cached FFT plan.
#[derive(Clone)]
pub struct PeriodicGrid {
    length: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("length", &self.length)
            .field("n", &self.n)
            .finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.n == other.n
    }
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Self {
        assert!(length > 0.0 && n >= 1, "grid needs L > 0 and n ≥ 1");
        let mut planner = FftPlanner::new();
        Self {
            length,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.dx()).collect()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        crate::chaos::fft_wavenumbers(self.length, self.n)
    }

    /// The coefficient space of unnormalized DFT coefficients on this grid.
    pub fn fourier_space(&self) -> CoefficientSpace {
        CoefficientSpace::fourier(self.length, self.n)
    }

    /// Quadrature weights of the physical grid.
    pub fn physical_space(&self) -> CoefficientSpace {
        CoefficientSpace::real_grid(vec![self.dx(); self.n])
    }

    /// Unnormalized DFT `û_j = Σ_x u(x) e^{−i y_j x}`.
    pub fn forward(&self, values: &[Coeff]) -> CVec {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    pub fn forward_real(&self, values: &[f64]) -> CVec {
        let buf: CVec = values.iter().map(|&v| Coeff::new(v, 0.0)).collect();
        self.forward(&buf)
    }

    /// Inverse of [`forward`](Self::forward), including the `1/n` factor.
    pub fn inverse(&self, coeffs: &[Coeff]) -> CVec {
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= s);
        buf
    }

    /// Samples `f` on the grid points.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points().into_iter().map(f).collect()
    }

    /// Gaussian bump `exp(−(x − L/2)²/(2w²))` centred in the box.
    pub fn gaussian_bump(&self, width: f64) -> Vec<f64> {
        let c = self.length / 2.0;
        self.sample(|x| (-(x - c) * (x - c) / (2.0 * width * width)).exp())
    }

    /// Orthonormal trigonometric space modes: `h_1 = 1/√L`,
    /// `h_{2m} = √(2/L) cos(2πmx/L)`, `h_{2m+1} = √(2/L) sin(2πmx/L)`.
    pub fn space_mode(&self, k: usize, x: f64) -> f64 {
        assert!(k >= 1);
        let l = self.length;
        if k == 1 {
            return 1.0 / l.sqrt();
        }
        let m = (k / 2) as f64;
        let arg = 2.0 * PI * m * x / l;
        let s = (2.0 / l).sqrt();
        if k % 2 == 0 {
            s * arg.cos()
        } else {
            s * arg.sin()
        }
    }

    pub fn space_mode_values(&self, k: usize) -> Vec<f64> {
        self.sample(|x| self.space_mode(k, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_round_trip() {
        let g = PeriodicGrid::new(2.0 * PI, 16);
        let u = g.gaussian_bump(0.7);
        let back = g.inverse(&g.forward_real(&u));
        for (a, b) in u.iter().zip(&back) {
            assert!((a - b.re).abs() < 1e-14 && b.im.abs() < 1e-14);
        }
    }

    #[test]
    fn space_modes_orthonormal() {
        let g = PeriodicGrid::new(3.0, 32);
        for i in 1..=15 {
            let hi = g.space_mode_values(i);
            for j in 1..=15 {
                let hj = g.space_mode_values(j);
                let ip: f64 = hi.iter().zip(&hj).map(|(a, b)| a * b * g.dx()).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-10, "{i} {j} {ip}");
            }
        }
    }
}
