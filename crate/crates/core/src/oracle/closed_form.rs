use crate::chaos::Coeff;

/// Whether a per-mode second moment stays integrable over all wavenumbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrability {
    /// Decays in `y`.
    Integrable,
    /// Exponent vanishes identically; integrable exactly when the initial
    /// datum is.
    Boundary,
    /// Grows without bound in `y`.
    NonIntegrable,
}

impl Integrability {
    pub fn label(self) -> &'static str {
        match self {
            Self::Integrable => "integrable",
            Self::Boundary => "boundary",
            Self::NonIntegrable => "non-integrable",
        }
    }

    /// `true` unless the moment blows up.
    pub fn is_finite(self) -> bool {
        self != Self::NonIntegrable
    }
}

const BOUNDARY_TOL: f64 = 1e-12;

/// `𝔼|û(t, y)|² = |û₀|² exp((σ²y^{2m} − 2y²) t)` for the Itô equation
/// `du = u_xx dt + σ ∂^m u dW`.
pub fn closed_form_moment(m_order: u32, sigma: f64, y: f64, t: f64, u0hat: Coeff) -> f64 {
    let growth = sigma * sigma * y.powi(2 * m_order as i32);
    u0hat.norm_sqr() * ((growth - 2.0 * y * y) * t).exp()
}

/// The exponent `σ²y^{2m} − 2y²` as a polynomial in `y`, classified by its
/// leading behaviour.
pub fn moment_integrability(m_order: u32, sigma: f64) -> Integrability {
    let s2 = sigma * sigma;
    match m_order {
        0 => Integrability::Integrable,
        1 => {
            if (s2 - 2.0).abs() <= BOUNDARY_TOL {
                Integrability::Boundary
            } else if s2 < 2.0 {
                Integrability::Integrable
            } else {
                Integrability::NonIntegrable
            }
        }
        _ => {
            if s2 == 0.0 {
                Integrability::Integrable
            } else {
                Integrability::NonIntegrable
            }
        }
    }
}

/// Per-mode chaos second moment of `du = u_xx dt + u_x ◇ ξ dt`:
/// `Σ_n |û₀|² e^{−2y²t} (y²t²)ⁿ/n! = |û₀|² e^{y²t(t−2)}`.
pub fn wick_space_noise_norm(t: f64, y: f64, u0hat: Coeff) -> f64 {
    u0hat.norm_sqr() * (y * y * t * (t - 2.0)).exp()
}

/// The same moment summed from the chaos coefficients
/// `û_{nε} = (iyt)ⁿ e^{−y²t} û₀/√n!` up to order `n_max`.
pub fn wick_space_noise_series(t: f64, y: f64, u0hat: Coeff, n_max: u32) -> f64 {
    let x = y * y * t * t;
    let mut term = 1.0;
    let mut acc = 1.0;
    for n in 1..=n_max {
        term *= x / n as f64;
        acc += term;
    }
    u0hat.norm_sqr() * (-2.0 * y * y * t).exp() * acc
}

/// Integrability of [`wick_space_noise_norm`] in `y` at time `t`.
pub fn wick_space_noise_integrability(t: f64) -> Integrability {
    if (t - 2.0).abs() <= BOUNDARY_TOL {
        Integrability::Boundary
    } else if t < 2.0 {
        Integrability::Integrable
    } else {
        Integrability::NonIntegrable
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifier_flips_at_sqrt_two() {
        assert_eq!(moment_integrability(1, 1.4), Integrability::Integrable);
        assert_eq!(moment_integrability(1, 2f64.sqrt()), Integrability::Boundary);
        assert_eq!(moment_integrability(1, 1.415), Integrability::NonIntegrable);
        assert_eq!(moment_integrability(0, 10.0), Integrability::Integrable);
        assert_eq!(moment_integrability(2, 0.1), Integrability::NonIntegrable);
        assert_eq!(moment_integrability(2, 0.0), Integrability::Integrable);
    }

    #[test]
    fn moment_values() {
        let s = 2f64.sqrt();
        for &y in &[0.0, 1.0, 5.0, 40.0] {
            assert!((closed_form_moment(1, s, y, 0.7, Coeff::new(2f64.sqrt(), 0.0)) - 2.0).abs() < 1e-9 * (1.0 + y * y));
        }
        assert!((closed_form_moment(2, 0.1, 10.0, 1.0, Coeff::new(0.0, 1.0)) - (100.0f64 - 200.0).exp()).abs() < 1e-50);
        // σ = 0 reduces to the squared heat decay
        assert_eq!(closed_form_moment(1, 0.0, 3.0, 0.5, Coeff::new(1.0, 0.0)), (-9.0f64).exp());
    }

    #[test]
    fn wick_series_matches_closed_form() {
        for &(t, y) in &[(0.3, 1.0), (1.0, 2.0), (2.0, 1.5), (1.7, 0.5)] {
            let a = wick_space_noise_norm(t, y, Coeff::new(1.3f64.sqrt(), 0.0));
            let b = wick_space_noise_series(t, y, Coeff::new(1.3f64.sqrt(), 0.0), 80);
            assert!((a - b).abs() < 1e-12 * a.max(1.0), "{t} {y}");
        }
        assert_eq!(wick_space_noise_integrability(1.0), Integrability::Integrable);
        assert_eq!(wick_space_noise_integrability(2.0), Integrability::Boundary);
        assert_eq!(wick_space_noise_integrability(2.5), Integrability::NonIntegrable);
        assert!((wick_space_noise_norm(1e-12, 3.0, Coeff::new(0.0, 0.4f64.sqrt())) - 0.4).abs() < 1e-9);
    }
}
