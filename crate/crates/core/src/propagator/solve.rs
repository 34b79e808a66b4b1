use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::chaos::{CVec, ChaosSeries, Coeff, CoefficientSpace, WeightSequence};
use crate::error::{Error, Result};
use crate::multiindex::{enumerate_level, MultiIndex, TruncationBox};
use crate::operators::{estimate_ck, CkEstimate, CkOptions, EvolutionProblem, Stepper, StepperKind};

/// Default exponent `r°` for solution norms.
pub const DEFAULT_R: f64 = -2.5;

/// Default cap on `binomial(N + K, K)`.
pub const DEFAULT_CAP: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub cap: u128,
    pub stepper: StepperKind,
    /// Estimate `C_k` and build `Q°`; otherwise `C_k = 0` is used.
    pub estimate_ck: bool,
    pub ck: CkOptions,
    pub r_exponent: f64,
    /// Use `q_k ≡ c` instead of `Q°`.
    pub constant_weight: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            stepper: StepperKind::default(),
            estimate_ck: true,
            ck: CkOptions::default(),
            r_exponent: DEFAULT_R,
            constant_weight: None,
        }
    }
}

impl SolveOptions {
    pub fn without_ck(mut self) -> Self {
        self.estimate_ck = false;
        self
    }

    pub fn with_stepper(mut self, stepper: StepperKind) -> Self {
        self.stepper = stepper;
        self.ck.stepper = stepper;
        self
    }
}

/// `q°_k = 2k(1 + C_k)`.
pub fn default_weights(c: &[f64]) -> Result<WeightSequence> {
    WeightSequence::derived(c.to_vec())
}

/// Time-gridded chaos coefficients `u_α(t_j)` of the solution.
#[derive(Clone, Debug)]
pub struct PropagatorSolution {
    problem: EvolutionProblem,
    times: Vec<f64>,
    trajectories: BTreeMap<MultiIndex, Vec<CVec>>,
    ck: Vec<CkEstimate>,
    weights: WeightSequence,
    r: f64,
}

impl PropagatorSolution {
    pub fn problem(&self) -> &EvolutionProblem {
        &self.problem
    }

    pub fn space(&self) -> &CoefficientSpace {
        &self.problem.space
    }

    pub fn tbox(&self) -> TruncationBox {
        self.problem.tbox
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn ck(&self) -> &[CkEstimate] {
        &self.ck
    }

    pub fn ck_values(&self) -> Vec<f64> {
        self.ck.iter().map(|c| c.value).collect()
    }

    /// `Q°` built from the `C_k` estimates.
    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn r_exponent(&self) -> f64 {
        self.r
    }

    /// Stored trajectories in canonical order. Indices that the recursion
    /// never reaches are absent and mean zero.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<CVec>)> {
        self.trajectories.iter()
    }

    pub fn trajectory(&self, alpha: &MultiIndex) -> Option<&[CVec]> {
        self.trajectories.get(alpha).map(Vec::as_slice)
    }

    /// `u_α(t_j)`, zero when absent.
    pub fn coefficient(&self, alpha: &MultiIndex, j: usize) -> CVec {
        self.trajectory(alpha)
            .map_or_else(|| self.space().zeros(), |tr| tr[j].clone())
    }

    /// The mean `u_(0)(t_j)`.
    pub fn mean(&self) -> &[CVec] {
        self.trajectory(&MultiIndex::zero()).expect("level 0 is always stored")
    }

    /// The solution at node `j` as a chaos series.
    pub fn snapshot(&self, j: usize) -> ChaosSeries {
        let mut s = ChaosSeries::new(self.space().clone(), self.tbox());
        for (a, tr) in self.iter() {
            s.insert(a.clone(), tr[j].clone()).expect("stored keys lie in the box");
        }
        s
    }

    /// Index of the grid node closest to `t`.
    pub fn node(&self, t: f64) -> usize {
        let dt = self.problem.dt();
        ((t / dt).round().max(0.0) as usize).min(self.problem.nt)
    }
}

/// `g_α(t_j) = f_α(t_j) + Σ_k √α_k M_k(t_j) u_{α−ε_k}(t_j)`, or `None` when
/// every contribution is structurally zero.
pub(crate) fn level_forcing(
    problem: &EvolutionProblem,
    times: &[f64],
    alpha: &MultiIndex,
    lower: &BTreeMap<MultiIndex, Vec<CVec>>,
    scale: impl Fn(usize) -> f64,
) -> Result<Option<Vec<CVec>>> {
    let dim = problem.space.dim();
    let mut g: Option<Vec<CVec>> = problem.forcing.coefficient(alpha).map(<[CVec]>::to_vec);
    for (k, m) in alpha.iter() {
        let Some(prev) = alpha.sub_one(k).and_then(|b| lower.get(&b)) else {
            continue;
        };
        if problem.m.action(k)?.is_zero() {
            continue;
        }
        let w = (m as f64).sqrt() * scale(k);
        let acc = g.get_or_insert_with(|| vec![vec![Coeff::new(0.0, 0.0); dim]; times.len()]);
        for ((slot, u), &t) in acc.iter_mut().zip(prev).zip(times) {
            let mu = problem.m.apply_mk(k, t, u)?;
            for (s, x) in slot.iter_mut().zip(mu) {
                *s += x * w;
            }
        }
    }
    Ok(g)
}

fn check_finite(alpha: &MultiIndex, tr: &[CVec]) -> Result<()> {
    if tr.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Divergence(alpha.to_string()));
    }
    Ok(())
}

pub(crate) fn check_cap(tbox: TruncationBox, cap: u128) -> Result<()> {
    let size = tbox.cardinality();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(())
}

/// Solves one level given the previous one. Indices whose data is
/// structurally zero are skipped.
pub(crate) fn solve_level(
    problem: &EvolutionProblem,
    stepper: &Stepper,
    times: &[f64],
    n: u32,
    lower: &BTreeMap<MultiIndex, Vec<CVec>>,
) -> Result<BTreeMap<MultiIndex, Vec<CVec>>> {
    let indices = enumerate_level(n, problem.tbox.max_modes);
    let results: Vec<Result<Option<(MultiIndex, Vec<CVec>)>>> = indices
        .into_par_iter()
        .map(|alpha| {
            let g = level_forcing(problem, times, &alpha, lower, |_| 1.0)?;
            let u0 = problem.u0.get(&alpha);
            if g.is_none() && u0.is_none() {
                return Ok(None);
            }
            let start = u0.map_or_else(|| problem.space.zeros(), <[Coeff]>::to_vec);
            let tr = stepper.integrate(&start, g.as_deref())?;
            check_finite(&alpha, &tr)?;
            Ok(Some((alpha, tr)))
        })
        .collect();
    let mut out = BTreeMap::new();
    for r in results {
        if let Some((a, tr)) = r? {
            out.insert(a, tr);
        }
    }
    Ok(out)
}

pub(crate) fn weights_for(problem: &EvolutionProblem, opts: &SolveOptions) -> Result<(Vec<CkEstimate>, WeightSequence)> {
    let ck = if opts.estimate_ck {
        (1..=problem.tbox.max_modes)
            .map(|k| estimate_ck(problem, k, opts.ck))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![
            CkEstimate {
                value: 0.0,
                converged: false,
                iterations: 0,
            };
            problem.tbox.max_modes
        ]
    };
    let weights = match opts.constant_weight {
        Some(c) => WeightSequence::constant(c)?,
        None => default_weights(&ck.iter().map(|c| c.value).collect::<Vec<_>>())?,
    };
    Ok((ck, weights))
}

/// Integrates the propagator level by level in graded order.
pub fn solve(problem: &EvolutionProblem, opts: &SolveOptions) -> Result<PropagatorSolution> {
    problem.validate()?;
    check_cap(problem.tbox, opts.cap)?;
    let stepper = Stepper::new(&problem.a, problem.horizon, problem.nt, opts.stepper)?;
    let times = stepper.times();
    let mut trajectories = BTreeMap::new();
    let mut lower = BTreeMap::new();
    for n in 0..=problem.tbox.max_order {
        let level = if n == 0 {
            let zero = MultiIndex::zero();
            let u0 = problem.u0.coeff(&zero);
            let tr = stepper.integrate(&u0, problem.forcing.coefficient(&zero))?;
            check_finite(&zero, &tr)?;
            BTreeMap::from([(zero, tr)])
        } else {
            solve_level(problem, &stepper, &times, n, &lower)?
        };
        trajectories.extend(level.iter().map(|(a, t)| (a.clone(), t.clone())));
        lower = level;
    }
    let (ck, weights) = weights_for(problem, opts)?;
    Ok(PropagatorSolution {
        problem: problem.clone(),
        times,
        trajectories,
        ck,
        weights,
        r: opts.r_exponent,
    })
}
