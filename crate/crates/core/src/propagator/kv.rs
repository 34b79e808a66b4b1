use std::collections::BTreeMap;

use super::PropagatorSolution;
use crate::chaos::{skorokhod, CVec, UChaosSeries, WeightSequence};
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, TruncationBox};
use crate::operators::Stepper;

/// Trajectories of one level `U_n(t) = Σ_{|α|=n} (U_n)_α(t) ξ_α`.
pub type LevelSlice = BTreeMap<MultiIndex, Vec<CVec>>;

#[derive(Clone, Debug, PartialEq)]
pub struct KvLevel {
    pub n: usize,
    /// `max |U_n − Σ q^α u_α ξ_α|` over indices, nodes and components.
    pub max_abs_deviation: f64,
    /// The same, divided by the largest `|q^α u_α|` of the level.
    pub max_deviation: f64,
    pub scale: f64,
}

#[derive(Clone, Debug)]
pub struct KvReport {
    pub levels: Vec<KvLevel>,
    pub slices: Vec<LevelSlice>,
}

impl KvReport {
    pub fn max_deviation(&self) -> f64 {
        self.levels.iter().map(|l| l.max_deviation).fold(0.0, f64::max)
    }

    /// Fails with the first level whose relative deviation exceeds `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        match self.levels.iter().find(|l| !(l.max_deviation <= tol)) {
            Some(l) => Err(Error::Mismatch {
                level: l.n,
                deviation: l.max_deviation,
                tolerance: tol,
            }),
            None => Ok(()),
        }
    }
}

/// Runs `U_0 = u_(0)`, `U_{n+1}(t) = ∫₀^t Φ_{t,s} δ(M°(s) U_n(s)) ds` with
/// `M°_k = q_k M_k`, and compares each level with `Σ_{|α|=n} q^α u_α ξ_α`.
pub fn kv_recursion(sol: &PropagatorSolution, q: &WeightSequence, n_max: usize) -> Result<KvReport> {
    let problem = sol.problem();
    if !problem.has_deterministic_data() {
        return Err(Error::NonDeterministicData(
            "the recursion needs a deterministic initial datum and forcing".into(),
        ));
    }
    let stepper = Stepper::new(&problem.a, problem.horizon, problem.nt, Default::default())?;
    let times = sol.times();
    let modes = problem.tbox.max_modes;
    let n_max = n_max.min(problem.tbox.max_order as usize);
    let zero = MultiIndex::zero();
    let mut current: LevelSlice = BTreeMap::from([(zero.clone(), sol.mean().to_vec())]);
    let mut levels = vec![compare(sol, q, 0, &current)];
    let mut slices = vec![current.clone()];
    for n in 0..n_max {
        let ubox = TruncationBox::new(n as u32, modes);
        let mut forcing: BTreeMap<MultiIndex, Vec<CVec>> = BTreeMap::new();
        for (j, &t) in times.iter().enumerate() {
            let mut f = UChaosSeries::new(problem.space.clone(), ubox, modes);
            for (beta, tr) in &current {
                for k in 1..=modes {
                    if problem.m.action(k)?.is_zero() {
                        continue;
                    }
                    let mk: CVec = problem.m.apply_mk(k, t, &tr[j])?.into_iter().map(|c| c * q.q(k)).collect();
                    f.add_to(k, beta.clone(), &mk)?;
                }
            }
            for (alpha, v) in skorokhod(&f).iter() {
                forcing
                    .entry(alpha.clone())
                    .or_insert_with(|| vec![problem.space.zeros(); times.len()])[j] = v.clone();
            }
        }
        let zero_start = problem.space.zeros();
        let mut next = LevelSlice::new();
        for (alpha, g) in forcing {
            next.insert(alpha, stepper.integrate(&zero_start, Some(&g))?);
        }
        levels.push(compare(sol, q, n + 1, &next));
        slices.push(next.clone());
        current = next;
    }
    Ok(KvReport { levels, slices })
}

fn compare(sol: &PropagatorSolution, q: &WeightSequence, n: usize, slice: &LevelSlice) -> KvLevel {
    let mut keys: Vec<&MultiIndex> = slice
        .keys()
        .chain(sol.iter().map(|(a, _)| a).filter(|a| a.order() as usize == n))
        .collect();
    keys.sort();
    keys.dedup();
    let (mut dev, mut scale) = (0.0f64, 0.0f64);
    for alpha in keys {
        let qa = q.pow(alpha, 1.0);
        for j in 0..sol.times().len() {
            let u = sol.coefficient(alpha, j);
            let w = slice.get(alpha).map_or_else(|| sol.space().zeros(), |tr| tr[j].clone());
            for (a, b) in u.iter().zip(&w) {
                dev = dev.max((a * qa - b).norm());
                scale = scale.max((a * qa).norm());
            }
        }
    }
    KvLevel {
        n,
        max_abs_deviation: dev,
        max_deviation: if scale > 0.0 { dev / scale } else { dev },
        scale,
    }
}
