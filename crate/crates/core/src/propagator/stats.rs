use std::collections::BTreeMap;

use super::solve::{check_cap, solve_level, weights_for, SolveOptions};
use super::PropagatorSolution;
use crate::chaos::{CVec, WeightSequence};
use crate::error::Result;
use crate::multiindex::{factorial, MultiIndex};
use crate::operators::{trapezoid_weights, CkEstimate, EvolutionProblem, Stepper};

/// Mean and pointwise second moment at every grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    /// `𝔼u(t_j) = u_(0)(t_j)`
    pub mean: Vec<CVec>,
    /// `Σ_α |u_α(t_j)|²` componentwise.
    pub second_moment: Vec<Vec<f64>>,
}

/// `(𝔼u, 𝔼|u|²)` from the chaos coefficients.
pub fn mean_and_moments(sol: &PropagatorSolution) -> Moments {
    let dim = sol.space().dim();
    let mut second = vec![vec![0.0; dim]; sol.times().len()];
    for (_, tr) in sol.iter() {
        for (acc, v) in second.iter_mut().zip(tr) {
            for (a, c) in acc.iter_mut().zip(v) {
                *a += c.norm_sqr();
            }
        }
    }
    Moments {
        mean: sol.mean().to_vec(),
        second_moment: second,
    }
}

/// `Σ_α q^{2rα} ‖u_α(t_j)‖_V² / |α|!` at one node, grouped by order.
pub fn weighted_norm_at_by_order(sol: &PropagatorSolution, j: usize, q: &WeightSequence, r: f64) -> Vec<f64> {
    let mut out = vec![0.0; sol.tbox().max_order as usize + 1];
    for (a, tr) in sol.iter() {
        let n = a.order();
        out[n as usize] += q.pow(a, 2.0 * r) * sol.space().norm_v_sq(&tr[j]) / factorial(n);
    }
    out
}

/// Discrete `‖u‖²_{Q,r;𝒱(T)}`, grouped by order.
pub fn solution_norm_sq_by_order(sol: &PropagatorSolution, q: &WeightSequence, r: f64) -> Vec<f64> {
    let w = trapezoid_weights(sol.problem().nt, sol.problem().dt());
    let mut out = vec![0.0; sol.tbox().max_order as usize + 1];
    for (a, tr) in sol.iter() {
        let n = a.order();
        let time_int: f64 = tr.iter().zip(&w).map(|(v, wj)| wj * sol.space().norm_v_sq(v)).sum();
        out[n as usize] += q.pow(a, 2.0 * r) * time_int / factorial(n);
    }
    out
}

/// Trapezoid quadrature of `Σ_α q^{2rα} ‖u_α(t)‖_V² / |α|!` over `[0, T]`.
pub fn solution_norm_sq(sol: &PropagatorSolution, q: &WeightSequence, r: f64) -> f64 {
    solution_norm_sq_by_order(sol, q, r).iter().sum()
}

/// `‖u_α‖_{𝒱(T)}` for one trajectory.
pub fn trajectory_norm(sol: &PropagatorSolution, alpha: &MultiIndex) -> f64 {
    let w = trapezoid_weights(sol.problem().nt, sol.problem().dt());
    sol.trajectory(alpha).map_or(0.0, |tr| {
        tr.iter()
            .zip(&w)
            .map(|(v, wj)| wj * sol.space().norm_v_sq(v))
            .sum::<f64>()
            .sqrt()
    })
}

impl PropagatorSolution {
    /// `‖u_(0)(t_j)‖_H`
    pub fn mean_norm(&self, j: usize) -> f64 {
        self.space().norm_sq(&self.mean()[j]).sqrt()
    }

    /// `𝔼‖u(t_j)‖_H² = Σ_α ‖u_α(t_j)‖_H²`
    pub fn second_moment_norm(&self, j: usize) -> f64 {
        self.iter().map(|(_, tr)| self.space().norm_sq(&tr[j])).sum()
    }

    /// Pointwise-in-time weighted norm with `Q°`, `r°`.
    pub fn weighted_norm_at(&self, j: usize) -> f64 {
        weighted_norm_at_by_order(self, j, self.weights(), self.r_exponent()).iter().sum()
    }
}

/// Running statistics from a solve that keeps only two levels in memory.
#[derive(Clone, Debug)]
pub struct SolutionStatistics {
    pub times: Vec<f64>,
    pub mean: Vec<CVec>,
    /// `Σ_α |u_α(t_j)|²` componentwise.
    pub second_moment: Vec<Vec<f64>>,
    /// `Σ_α ‖u_α(t_j)‖_H²`
    pub second_moment_norm: Vec<f64>,
    /// `Σ_α q^{2rα} ‖u_α(t_j)‖_V² / |α|!` with `Q°`, `r°`.
    pub weighted_norm: Vec<f64>,
    /// Time-integrated weighted norm, grouped by order.
    pub weighted_norm_sq_by_order: Vec<f64>,
    pub ck: Vec<CkEstimate>,
    pub weights: WeightSequence,
    pub r: f64,
}

/// Like [`solve`](super::solve) but accumulates statistics level by level
/// instead of keeping every trajectory.
pub fn solve_statistics(problem: &EvolutionProblem, opts: &SolveOptions) -> Result<SolutionStatistics> {
    problem.validate()?;
    check_cap(problem.tbox, opts.cap)?;
    let (ck, weights) = weights_for(problem, opts)?;
    let stepper = Stepper::new(&problem.a, problem.horizon, problem.nt, opts.stepper)?;
    let times = stepper.times();
    let tw = trapezoid_weights(problem.nt, problem.dt());
    let space = &problem.space;
    let dim = space.dim();
    let nodes = times.len();
    let mut stats = SolutionStatistics {
        times: times.clone(),
        mean: Vec::new(),
        second_moment: vec![vec![0.0; dim]; nodes],
        second_moment_norm: vec![0.0; nodes],
        weighted_norm: vec![0.0; nodes],
        weighted_norm_sq_by_order: vec![0.0; problem.tbox.max_order as usize + 1],
        ck,
        weights,
        r: opts.r_exponent,
    };
    let mut lower: BTreeMap<MultiIndex, Vec<CVec>> = BTreeMap::new();
    for n in 0..=problem.tbox.max_order {
        let level = if n == 0 {
            let zero = MultiIndex::zero();
            let tr = stepper.integrate(&problem.u0.coeff(&zero), problem.forcing.coefficient(&zero))?;
            stats.mean = tr.clone();
            BTreeMap::from([(zero, tr)])
        } else {
            solve_level(problem, &stepper, &times, n, &lower)?
        };
        for (a, tr) in &level {
            let qa = stats.weights.pow(a, 2.0 * stats.r) / factorial(n);
            for (j, v) in tr.iter().enumerate() {
                for (acc, c) in stats.second_moment[j].iter_mut().zip(v) {
                    *acc += c.norm_sqr();
                }
                stats.second_moment_norm[j] += space.norm_sq(v);
                let vn = space.norm_v_sq(v);
                stats.weighted_norm[j] += qa * vn;
                stats.weighted_norm_sq_by_order[n as usize] += qa * vn * tw[j];
            }
        }
        lower = level;
    }
    Ok(stats)
}
