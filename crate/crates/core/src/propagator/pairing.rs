use super::PropagatorSolution;
use crate::chaos::{smallness_radius, CVec, DirectionH};
use crate::error::{Error, Result};

/// `u_h(t_j)` and an estimate of the truncation tail at each node.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingResult {
    pub trajectory: Vec<CVec>,
    /// `‖Σ_{|α|=N} u_α(t_j) h^α/√α!‖_H`, the contribution of the top level.
    pub tail: Vec<f64>,
}

/// `u_h(t) = Σ_α u_α(t) h^α/√α!`, defined when `h` is small relative to
/// the solution's weights.
pub fn u_h_pairing(sol: &PropagatorSolution, h: &DirectionH) -> Result<PairingResult> {
    let modes = sol.tbox().max_modes;
    if h.coords.iter().skip(modes).any(|&x| x != 0.0) {
        return Err(Error::Dimension(format!(
            "direction has non-zero coordinates beyond the {modes} modes of the box"
        )));
    }
    if smallness_radius(h, sol.weights()).is_none() {
        return Err(Error::NotSmall);
    }
    let top = sol.tbox().max_order;
    let nodes = sol.times().len();
    let space = sol.space();
    let mut trajectory = vec![space.zeros(); nodes];
    let mut top_level = vec![space.zeros(); nodes];
    for (alpha, tr) in sol.iter() {
        let w = h.monomial(alpha) / alpha.factorial()?.sqrt();
        if w == 0.0 {
            continue;
        }
        let is_top = alpha.order() == top;
        for (j, v) in tr.iter().enumerate() {
            for (i, c) in v.iter().enumerate() {
                trajectory[j][i] += c * w;
                if is_top {
                    top_level[j][i] += c * w;
                }
            }
        }
    }
    let tail = top_level.iter().map(|v| space.norm_sq(v).sqrt()).collect();
    Ok(PairingResult { trajectory, tail })
}
