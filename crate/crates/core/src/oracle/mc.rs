use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::chaos::{CVec, Coeff};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::operators::{EvolutionProblem, Forcing, LinOp, NoiseModel, SpatialAction};

/// Paths per deterministic reduction chunk.
pub const CHUNK: usize = 1024;

/// Maximum number of output times (including `t = 0`).
pub const MAX_OUTPUTS: usize = 33;

/// Monte Carlo estimates at the output times.
///
/// `mean` is `𝔼 Re(u(t), e)_H` with `e = u₀/‖u₀‖_H`, and `m2` is
/// `𝔼‖u(t)‖_H²`.
#[derive(Clone, Debug, PartialEq)]
pub struct McResult {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    pub m2: Vec<f64>,
    pub m2_se: Vec<f64>,
    pub paths: usize,
    pub steps: usize,
}

#[derive(Default, Clone)]
struct Sums {
    s1: Vec<f64>,
    s1_sq: Vec<f64>,
    s2: Vec<f64>,
    s2_sq: Vec<f64>,
}

impl Sums {
    fn new(n: usize) -> Self {
        Self {
            s1: vec![0.0; n],
            s1_sq: vec![0.0; n],
            s2: vec![0.0; n],
            s2_sq: vec![0.0; n],
        }
    }

    fn add(&mut self, o: &Sums) {
        for (a, b) in [
            (&mut self.s1, &o.s1),
            (&mut self.s1_sq, &o.s1_sq),
            (&mut self.s2, &o.s2),
            (&mut self.s2_sq, &o.s2_sq),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

/// Per-mode data of the scalar SDEs `dû = a û dt + b û dW`.
struct ModeSystem {
    a: Vec<Coeff>,
    b: Vec<Coeff>,
    u0: Vec<Coeff>,
    /// `w_j` times the multiplicity of the representative mode.
    weight: Vec<f64>,
    /// `w_j · conj(e_j)` times the multiplicity.
    probe: Vec<Coeff>,
}

fn diagonal(op: &LinOp) -> Option<&CVec> {
    match op {
        LinOp::Diag(d) => Some(d),
        LinOp::Dense(_) => None,
    }
}

fn mode_system(problem: &EvolutionProblem) -> Result<ModeSystem> {
    if !matches!(problem.noise(), NoiseModel::TimeWhite { .. }) {
        return Err(Error::Unsupported(format!(
            "Monte Carlo needs time-white noise, got {}",
            problem.noise().label()
        )));
    }
    if problem.a.pieces().len() != 1 {
        return Err(Error::Unsupported("Monte Carlo needs a time-independent generator".into()));
    }
    let a = diagonal(&problem.a.pieces()[0])
        .ok_or_else(|| Error::Unsupported("Monte Carlo needs a diagonal generator".into()))?
        .clone();
    let dim = a.len();
    let b: CVec = match problem.m.action(1)? {
        SpatialAction::Zero => vec![Coeff::new(0.0, 0.0); dim],
        SpatialAction::Scalar(s) => vec![Coeff::new(*s, 0.0); dim],
        SpatialAction::Multiplier(d) => d.clone(),
        _ => return Err(Error::Unsupported("Monte Carlo needs a diagonal noise action".into())),
    };
    for k in 2..=problem.m.mode_count() {
        if !std::ptr::eq(problem.m.action(k)?, problem.m.action(1)?) {
            return Err(Error::Unsupported("Monte Carlo needs one noise action for all time modes".into()));
        }
    }
    if !matches!(problem.forcing, Forcing::Zero) {
        return Err(Error::Unsupported("Monte Carlo supports zero forcing only".into()));
    }
    if !problem.u0.is_deterministic() {
        return Err(Error::NonDeterministicData("Monte Carlo needs a deterministic u₀".into()));
    }
    let u0 = problem.u0.coeff(&MultiIndex::zero());
    let w = problem.space.inner_weights();
    let norm = problem.space.norm_sq(&u0).sqrt();
    let e: CVec = u0.iter().map(|c| if norm > 0.0 { c / norm } else { Coeff::new(0.0, 0.0) }).collect();

    // Conjugate pairs j ↔ n−j evolve as complex conjugates when all data is
    // Hermitian; then one representative per pair suffices.
    let partner = |j: usize| (dim - j) % dim;
    let close = |x: Coeff, y: Coeff| (x - y).norm() <= 1e-12 * (1.0 + x.norm());
    let hermitian = problem.space.wavenumbers().is_some()
        && (0..dim).all(|j| {
            let p = partner(j);
            close(a[p], a[j].conj()) && close(b[p], b[j].conj()) && close(u0[p], u0[j].conj())
        });
    let mut sys = ModeSystem {
        a: Vec::new(),
        b: Vec::new(),
        u0: Vec::new(),
        weight: Vec::new(),
        probe: Vec::new(),
    };
    for j in 0..dim {
        let mult = if hermitian {
            match partner(j).cmp(&j) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => 1.0,
                std::cmp::Ordering::Greater => 2.0,
            }
        } else {
            1.0
        };
        sys.a.push(a[j]);
        sys.b.push(b[j]);
        sys.u0.push(u0[j]);
        sys.weight.push(w[j] * mult);
        sys.probe.push(e[j].conj() * w[j] * mult);
    }
    Ok(sys)
}

/// Output node indices on a grid of `steps` intervals.
pub fn output_steps(steps: usize) -> Vec<usize> {
    let stride = steps.div_ceil(MAX_OUTPUTS - 1).max(1);
    let mut out: Vec<usize> = (0..=steps).step_by(stride).collect();
    if *out.last().expect("non-empty") != steps {
        out.push(steps);
    }
    out
}

/// Euler–Maruyama for the Itô equation `dû = a(y) û dt + b(y) û dW`, one
/// scalar SDE per Fourier mode, all driven by the same Brownian motion.
///
/// Path `p` draws its increments from a ChaCha stream keyed by
/// `(seed, p)`, and paths are reduced in fixed chunks in path order, so the
/// result does not depend on scheduling.
pub fn mc_ito(problem: &EvolutionProblem, paths: usize, dt: f64, seed: u64) -> Result<McResult> {
    if paths < 2 {
        return Err(Error::InvalidProblem("Monte Carlo needs at least two paths".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidProblem("dt must be positive".into()));
    }
    let sys = mode_system(problem)?;
    let steps = ((problem.horizon / dt).round() as usize).max(1);
    let h = problem.horizon / steps as f64;
    let sqrt_h = h.sqrt();
    let outs = output_steps(steps);
    let n_out = outs.len();
    let chunks = paths.div_ceil(CHUNK);
    let drift: Vec<Coeff> = sys.a.iter().map(|a| Coeff::new(1.0, 0.0) + a * h).collect();

    let per_chunk: Vec<Sums> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sums = Sums::new(n_out);
            let mut u = sys.u0.clone();
            for p in c * CHUNK..((c + 1) * CHUNK).min(paths) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(p as u64);
                u.copy_from_slice(&sys.u0);
                let mut next_out = 0;
                for step in 0..=steps {
                    if outs[next_out] == step {
                        let mut lin = 0.0;
                        let mut sq = 0.0;
                        for ((x, w), e) in u.iter().zip(&sys.weight).zip(&sys.probe) {
                            lin += (x * e).re;
                            sq += w * x.norm_sqr();
                        }
                        sums.s1[next_out] += lin;
                        sums.s1_sq[next_out] += lin * lin;
                        sums.s2[next_out] += sq;
                        sums.s2_sq[next_out] += sq * sq;
                        next_out += 1;
                    }
                    if step == steps {
                        break;
                    }
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let dw = z * sqrt_h;
                    for ((x, d), b) in u.iter_mut().zip(&drift).zip(&sys.b) {
                        *x *= d + b * dw;
                    }
                }
            }
            sums
        })
        .collect();
    let mut total = Sums::new(n_out);
    for s in &per_chunk {
        total.add(s);
    }
    let n = paths as f64;
    let stat = |s: &[f64], sq: &[f64]| -> (Vec<f64>, Vec<f64>) {
        s.iter()
            .zip(sq)
            .map(|(a, b)| {
                let mean = a / n;
                let var = ((b / n - mean * mean) * n / (n - 1.0)).max(0.0);
                (mean, (var / n).sqrt())
            })
            .unzip()
    };
    let (mean, mean_se) = stat(&total.s1, &total.s1_sq);
    let (m2, m2_se) = stat(&total.s2, &total.s2_sq);
    Ok(McResult {
        times: outs.iter().map(|&s| s as f64 * h).collect(),
        mean,
        mean_se,
        m2,
        m2_se,
        paths,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{ChaosSeries, CoefficientSpace};
    use crate::multiindex::TruncationBox;
    use crate::operators::{NoiseOperatorFamily, OperatorFamily};

    fn scalar_problem(sigma: f64) -> EvolutionProblem {
        let tb = TruncationBox::new(2, 2);
        EvolutionProblem::new(
            OperatorFamily::scalar(-0.5),
            NoiseOperatorFamily::uniform(NoiseModel::time_white(1.0, 2), SpatialAction::Scalar(sigma)),
            ChaosSeries::deterministic(CoefficientSpace::scalar(), tb, vec![Coeff::new(2.0, 0.0)]).unwrap(),
            1.0,
            8,
            tb,
        )
        .unwrap()
    }

    #[test]
    fn sigma_zero_is_deterministic() {
        let r = mc_ito(&scalar_problem(0.0), 64, 1.0 / 256.0, 3).unwrap();
        let last = r.times.len() - 1;
        let exact = 2.0 * (1.0 - 0.5 / 256.0f64).powi(256);
        assert!((r.mean[last] - exact).abs() < 1e-12);
        assert!(r.mean_se[last] < 1e-7 && r.m2_se[last] < 1e-7);
    }

    #[test]
    fn seed_determinism() {
        let a = mc_ito(&scalar_problem(0.7), 3000, 1.0 / 64.0, 11).unwrap();
        let b = mc_ito(&scalar_problem(0.7), 3000, 1.0 / 64.0, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_ito(&scalar_problem(0.7), 3000, 1.0 / 64.0, 12).unwrap();
        assert_ne!(a.m2, c.m2);
        assert!(a.times.len() <= MAX_OUTPUTS);
    }

    #[test]
    fn output_grid() {
        assert_eq!(output_steps(4), vec![0, 1, 2, 3, 4]);
        let o = output_steps(4096);
        assert_eq!(o.len(), 33);
        assert_eq!(*o.last().unwrap(), 4096);
    }
}
