use crate::chaos::{CVec, Coeff, DirectionH};
use crate::error::{Error, Result};
use crate::operators::{EvolutionProblem, LinOp, SpatialAction};

/// Largest `Δ · ‖Σ_k h_k M_k‖` accepted by [`solve_deterministic_h`].
pub const STABILITY_BUDGET: f64 = 2.5;

fn action_bound(b: &SpatialAction) -> f64 {
    match b {
        SpatialAction::Zero => 0.0,
        SpatialAction::Scalar(s) => s.abs(),
        SpatialAction::Multiplier(d) => d.iter().map(|c| c.norm()).fold(0.0, f64::max),
        SpatialAction::Multiply { values, multiplier, .. } => {
            values.iter().map(|v| v.abs()).fold(0.0, f64::max) * multiplier.iter().map(|c| c.norm()).fold(0.0, f64::max)
        }
        SpatialAction::Matrix(m) => m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
    }
}

/// Cubic interpolation of node values at `t_j + Δ/2`.
fn midpoint(values: &[CVec], j: usize) -> CVec {
    let n = values.len() - 1;
    if n < 3 {
        return values[j].iter().zip(&values[j + 1]).map(|(a, b)| (a + b) * 0.5).collect();
    }
    let start = j.saturating_sub(1).min(n - 3);
    let x = j as f64 + 0.5 - start as f64;
    let nodes = [0.0, 1.0, 2.0, 3.0];
    let mut out = vec![Coeff::new(0.0, 0.0); values[j].len()];
    for i in 0..4 {
        let l: f64 = (0..4)
            .filter(|&m| m != i)
            .map(|m| (x - nodes[m]) / (nodes[i] - nodes[m]))
            .product();
        for (o, v) in out.iter_mut().zip(&values[start + i]) {
            *o += v * l;
        }
    }
    out
}

/// Solves `u_h' = A u_h + f_h + Σ_k h_k M_k(t) u_h`, `u_h(0) = u⁰_h`, with
/// `u⁰_h`, `f_h` the pairings of the data with `ℰ_h`, on the problem's
/// time grid.
///
/// This is a Lawson (integrating-factor) fourth-order Runge–Kutta scheme,
/// independent of the propagator's stepper.
pub fn solve_deterministic_h(problem: &EvolutionProblem, h: &DirectionH) -> Result<Vec<CVec>> {
    let modes = problem.m.mode_count();
    if h.coords.iter().skip(modes).any(|&x| x != 0.0) {
        return Err(Error::Dimension(format!("direction longer than the {modes} noise modes")));
    }
    let dt = problem.dt();
    let times = problem.times();
    let active: Vec<(usize, f64)> = h
        .coords
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(i, &x)| (i + 1, x))
        .collect();
    let mut bound = 0.0;
    for &(k, hk) in &active {
        let prof = times
            .iter()
            .map(|&t| problem.m.profile(k, t).map(f64::abs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        bound += hk.abs() * prof * action_bound(problem.m.action(k)?);
    }
    if dt * bound > STABILITY_BUDGET {
        return Err(Error::Divergence(format!(
            "Δ·‖Σ h_k M_k‖ ≈ {:.3} exceeds the stability budget {STABILITY_BUDGET}",
            dt * bound
        )));
    }

    let pair = |get: &dyn Fn(&crate::multiindex::MultiIndex) -> Option<CVec>| -> Result<Option<CVec>> {
        let mut acc: Option<CVec> = None;
        for a in crate::multiindex::enumerate(problem.tbox) {
            let w = h.monomial(&a) / a.factorial()?.sqrt();
            if w == 0.0 {
                continue;
            }
            if let Some(v) = get(&a) {
                let slot = acc.get_or_insert_with(|| problem.space.zeros());
                for (s, x) in slot.iter_mut().zip(v) {
                    *s += x * w;
                }
            }
        }
        Ok(acc)
    };
    let u0 = pair(&|a| problem.u0.get(a).map(<[Coeff]>::to_vec))?.unwrap_or_else(|| problem.space.zeros());
    let f_nodes: Option<Vec<CVec>> = {
        let mut any = false;
        let nodes = (0..=problem.nt)
            .map(|j| {
                let v = pair(&|a| problem.forcing.coefficient(a).map(|tr| tr[j].clone()))?;
                any |= v.is_some();
                Ok(v.unwrap_or_else(|| problem.space.zeros()))
            })
            .collect::<Result<Vec<_>>>()?;
        any.then_some(nodes)
    };

    let rhs = |t: f64, u: &[Coeff], f: Option<&CVec>| -> Result<CVec> {
        let mut out = f.cloned().unwrap_or_else(|| problem.space.zeros());
        for &(k, hk) in &active {
            let mk = problem.m.apply_mk(k, t, u)?;
            for (o, x) in out.iter_mut().zip(mk) {
                *o += x * hk;
            }
        }
        Ok(out)
    };
    let axpy = |u: &[Coeff], s: f64, k: &[Coeff]| -> CVec { u.iter().zip(k).map(|(a, b)| a + b * s).collect() };

    let mut out = Vec::with_capacity(problem.nt + 1);
    out.push(u0);
    for j in 0..problem.nt {
        let op: &LinOp = problem.a.piece_for_interval(j, problem.nt)?;
        let half = op.exp_scaled(dt / 2.0);
        let full = op.exp_scaled(dt);
        let (t0, tm, t1) = (times[j], times[j] + dt / 2.0, times[j + 1]);
        let fm = f_nodes.as_ref().map(|f| midpoint(f, j));
        let (f0, f1) = (f_nodes.as_ref().map(|f| &f[j]), f_nodes.as_ref().map(|f| &f[j + 1]));
        let u = &out[j];
        let k1 = rhs(t0, u, f0)?;
        let ue = half.apply(u);
        let k1e = half.apply(&k1);
        let k2 = rhs(tm, &axpy(&ue, dt / 2.0, &k1e), fm.as_ref())?;
        let k3 = rhs(tm, &axpy(&ue, dt / 2.0, &k2), fm.as_ref())?;
        let k3e = half.apply(&k3);
        let k4 = rhs(t1, &axpy(&full.apply(u), dt, &k3e), f1)?;
        let k23 = half.apply(&axpy(&k2, 1.0, &k3));
        let k1f = full.apply(&k1);
        let base = full.apply(u);
        let next: CVec = base
            .iter()
            .zip(&k1f)
            .zip(&k23)
            .zip(&k4)
            .map(|(((b, a1), a23), a4)| b + (a1 + a23 * 2.0 + a4) * (dt / 6.0))
            .collect();
        if next.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Divergence(format!("h-perturbed equation at step {j}")));
        }
        out.push(next);
    }
    Ok(out)
}
