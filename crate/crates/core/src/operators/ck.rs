use super::{EvolutionProblem, Stepper, StepperKind};
use crate::chaos::{CVec, Coeff};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
    pub stepper: StepperKind,
}

impl Default for CkOptions {
    fn default() -> Self {
        Self {
            max_iter: 20,
            rel_tol: 1e-6,
            stepper: StepperKind::default(),
        }
    }
}

/// Power-iteration estimate of an operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// The time-gridded operator `v ↦ ∫₀^t Φ_{t,s} M_k(s) v(s) ds` on
/// `𝒱(T)`, with its adjoint in the weighted inner product.
struct Volterra<'a> {
    problem: &'a EvolutionProblem,
    stepper: Stepper,
    k: usize,
    times: Vec<f64>,
    /// `ω_j · w^V_i`
    gram: Vec<Vec<f64>>,
}

impl Volterra<'_> {
    fn forward(&self, v: &[CVec]) -> Result<Vec<CVec>> {
        let g = v
            .iter()
            .zip(&self.times)
            .map(|(x, &t)| self.problem.m.apply_mk(self.k, t, x))
            .collect::<Result<Vec<_>>>()?;
        let zero = vec![Coeff::new(0.0, 0.0); self.problem.space.dim()];
        self.stepper.integrate(&zero, Some(&g))
    }

    fn adjoint(&self, z: &[CVec]) -> Result<Vec<CVec>> {
        let y: Vec<CVec> = z
            .iter()
            .zip(&self.gram)
            .map(|(x, w)| x.iter().zip(w).map(|(c, g)| c * *g).collect())
            .collect();
        let back = self.stepper.integrate_adjoint(&y)?;
        back.iter()
            .zip(&self.times)
            .zip(&self.gram)
            .map(|((x, &t), w)| {
                let m = self.problem.m.apply_mk_adjoint(self.k, t, x)?;
                Ok(m.iter().zip(w).map(|(c, g)| c / *g).collect())
            })
            .collect()
    }

    fn norm(&self, v: &[CVec]) -> f64 {
        v.iter()
            .zip(&self.gram)
            .map(|(x, w)| x.iter().zip(w).map(|(c, g)| g * c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }
}

/// Trapezoid weights on the problem's time grid.
pub fn trapezoid_weights(nt: usize, dt: f64) -> Vec<f64> {
    (0..=nt)
        .map(|j| if j == 0 || j == nt { 0.5 * dt } else { dt })
        .collect()
}

/// Estimates the constant `C_k` bounding
/// `‖∫₀^t Φ_{t,s} M_k(s) v(s) ds‖_{𝒱(T)} ≤ C_k ‖v‖_{𝒱(T)}` on the discrete
/// time grid. The result is an approximation; `converged` reports whether
/// the relative change dropped below the tolerance.
pub fn estimate_ck(problem: &EvolutionProblem, k: usize, opts: CkOptions) -> Result<CkEstimate> {
    let action = problem.m.action(k)?;
    if action.is_zero() {
        return Ok(CkEstimate {
            value: 0.0,
            converged: true,
            iterations: 0,
        });
    }
    let stepper = Stepper::new(&problem.a, problem.horizon, problem.nt, opts.stepper)?;
    let times = stepper.times();
    let vw = problem.space.v_weights();
    let gram = trapezoid_weights(problem.nt, problem.dt())
        .into_iter()
        .map(|w| vw.iter().map(|v| v * w).collect())
        .collect();
    let op = Volterra {
        problem,
        stepper,
        k,
        times,
        gram,
    };
    let dim = problem.space.dim();
    let mut x: Vec<CVec> = (0..=problem.nt)
        .map(|j| {
            (0..dim)
                .map(|i| Coeff::new(1.0 + 0.25 * ((j * 7 + i * 13) as f64).sin(), 0.0))
                .collect()
        })
        .collect();
    let mut prev = 0.0;
    let mut value = 0.0;
    for it in 1..=opts.max_iter {
        let nx = op.norm(&x);
        if nx == 0.0 {
            break;
        }
        x.iter_mut().flatten().for_each(|c| *c /= nx);
        let tx = op.forward(&x)?;
        value = op.norm(&tx);
        if value == 0.0 {
            return Ok(CkEstimate {
                value,
                converged: true,
                iterations: it,
            });
        }
        if it > 1 && (value - prev).abs() <= opts.rel_tol * value {
            return Ok(CkEstimate {
                value,
                converged: true,
                iterations: it,
            });
        }
        prev = value;
        x = op.adjoint(&tx)?;
    }
    Ok(CkEstimate {
        value,
        converged: false,
        iterations: opts.max_iter,
    })
}

/// `C_1, …, C_K` for every mode in the problem's box.
pub fn estimate_all_ck(problem: &EvolutionProblem, opts: CkOptions) -> Result<Vec<CkEstimate>> {
    (1..=problem.tbox.max_modes).map(|k| estimate_ck(problem, k, opts)).collect()
}
