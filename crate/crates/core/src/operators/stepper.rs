//! Exponential integrators for `u' = A u + g(t)` on a uniform grid, with
//! `A` constant on each grid interval and `g` known at the grid nodes.
//!
//! One step reads `u_{j+1} = e^{AΔ} u_j + Σ_i W_i g_{s+i}` where the
//! forcing is replaced by its Lagrange interpolant through a few
//! neighbouring nodes and the resulting integral is evaluated exactly.

use nalgebra::DMatrix;

use super::{LinOp, OperatorFamily};
use crate::chaos::{CVec, Coeff};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepperKind {
    /// Linear interpolation of the forcing on each interval (order 2).
    ExpTrapezoid,
    /// Cubic interpolation through four neighbouring nodes (order 4).
    #[default]
    ExpLagrange4,
}

impl StepperKind {
    pub fn stencil(self) -> usize {
        match self {
            Self::ExpTrapezoid => 2,
            Self::ExpLagrange4 => 4,
        }
    }
}

#[derive(Clone, Debug)]
struct PieceWeights {
    phi: LinOp,
    /// `w[offset][i]`
    w: Vec<Vec<LinOp>>,
}

#[derive(Clone, Debug)]
pub struct Stepper {
    kind: StepperKind,
    nt: usize,
    dt: f64,
    stencil: usize,
    pieces: Vec<PieceWeights>,
}

/// `μ_p(z) = ∫₀¹ e^{z(1−θ)} θ^p dθ` for `p < count`.
fn mu(z: Coeff, count: usize) -> Vec<Coeff> {
    if z.norm() < 1.0 {
        (0..count)
            .map(|p| {
                let mut term = Coeff::new(1.0 / (p as f64 + 1.0), 0.0);
                let mut acc = term;
                for m in 0..60 {
                    term *= z / (m as f64 + p as f64 + 2.0);
                    acc += term;
                    if term.norm() < 1e-18 * acc.norm() {
                        break;
                    }
                }
                acc
            })
            .collect()
    } else {
        let mut out = Vec::with_capacity(count);
        out.push((z.exp() - 1.0) / z);
        for p in 1..count {
            let prev = out[p - 1];
            out.push((prev * p as f64 - 1.0) / z);
        }
        out
    }
}

/// Monomial coefficients `c[i][p]` of the Lagrange basis on `nodes`.
fn lagrange_coefficients(nodes: &[f64]) -> Vec<Vec<f64>> {
    let s = nodes.len();
    (0..s)
        .map(|i| {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (l, &x) in nodes.iter().enumerate() {
                if l == i {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &c) in poly.iter().enumerate() {
                    next[p + 1] += c;
                    next[p] -= x * c;
                }
                poly = next;
                denom *= nodes[i] - x;
            }
            poly.iter().map(|c| c / denom).collect()
        })
        .collect()
}

/// `[e^Z, μ_0(Z), …, μ_{count−1}(Z)]` for a dense `Z`, from one exponential
/// of an augmented block matrix.
fn dense_mu(z: &DMatrix<Coeff>, count: usize) -> (DMatrix<Coeff>, Vec<DMatrix<Coeff>>) {
    let n = z.nrows();
    let blocks = count + 1;
    let mut big = DMatrix::<Coeff>::zeros(n * blocks, n * blocks);
    big.view_mut((0, 0), (n, n)).copy_from(z);
    for b in 0..count {
        for i in 0..n {
            big[(b * n + i, (b + 1) * n + i)] = Coeff::new(1.0, 0.0);
        }
    }
    let e = big.exp();
    let phi = e.view((0, 0), (n, n)).into_owned();
    let mut fact = 1.0;
    let mus = (0..count)
        .map(|p| {
            if p > 0 {
                fact *= p as f64;
            }
            e.view((0, (p + 1) * n), (n, n)).into_owned() * Coeff::new(fact, 0.0)
        })
        .collect();
    (phi, mus)
}

impl Stepper {
    pub fn new(a: &OperatorFamily, horizon: f64, nt: usize, kind: StepperKind) -> Result<Self> {
        if nt == 0 || !(horizon > 0.0) {
            return Err(Error::InvalidProblem("stepper needs nt ≥ 1 and T > 0".into()));
        }
        let dt = horizon / nt as f64;
        let stencil = kind.stencil().min(nt + 1);
        let coeffs: Vec<Vec<Vec<f64>>> = (0..stencil)
            .map(|o| {
                let nodes: Vec<f64> = (0..stencil).map(|i| i as f64 - o as f64).collect();
                lagrange_coefficients(&nodes)
            })
            .collect();
        let ops: Vec<&LinOp> = match a.schedule() {
            None => vec![&a.pieces()[0]],
            Some(_) => (0..nt).map(|j| a.piece_for_interval(j, nt)).collect::<Result<_>>()?,
        };
        let pieces = ops
            .into_iter()
            .map(|op| Self::piece_weights(op, dt, stencil, &coeffs))
            .collect();
        Ok(Self {
            kind,
            nt,
            dt,
            stencil,
            pieces,
        })
    }

    fn piece_weights(op: &LinOp, dt: f64, stencil: usize, coeffs: &[Vec<Vec<f64>>]) -> PieceWeights {
        match op {
            LinOp::Diag(d) => {
                let mus: Vec<Vec<Coeff>> = d.iter().map(|a| mu(a * dt, stencil)).collect();
                let phi = LinOp::Diag(d.iter().map(|a| (a * dt).exp()).collect());
                let w = coeffs
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|ci| {
                                LinOp::Diag(
                                    mus.iter()
                                        .map(|m| ci.iter().zip(m).map(|(cp, mp)| mp * *cp).sum::<Coeff>() * dt)
                                        .collect(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                PieceWeights { phi, w }
            }
            LinOp::Dense(m) => {
                let z = m * Coeff::new(dt, 0.0);
                let (phi, mus) = dense_mu(&z, stencil);
                let n = m.nrows();
                let w = coeffs
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|ci| {
                                let mut acc = DMatrix::<Coeff>::zeros(n, n);
                                for (cp, mp) in ci.iter().zip(&mus) {
                                    acc += mp * Coeff::new(cp * dt, 0.0);
                                }
                                LinOp::Dense(acc)
                            })
                            .collect()
                    })
                    .collect();
                PieceWeights {
                    phi: LinOp::Dense(phi),
                    w,
                }
            }
        }
    }

    pub fn kind(&self) -> StepperKind {
        self.kind
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.nt).map(|j| j as f64 * self.dt).collect()
    }

    /// First stencil node and the position of `j` inside the stencil.
    fn window(&self, j: usize) -> (usize, usize) {
        let back = self.stencil / 2 - 1;
        let start = j.saturating_sub(back).min(self.nt + 1 - self.stencil);
        (start, j - start)
    }

    fn piece(&self, j: usize) -> &PieceWeights {
        if self.pieces.len() == 1 {
            &self.pieces[0]
        } else {
            &self.pieces[j]
        }
    }

    /// States at all `nt + 1` nodes. `forcing`, when given, holds `g` at
    /// every node.
    pub fn integrate(&self, u0: &[Coeff], forcing: Option<&[CVec]>) -> Result<Vec<CVec>> {
        if let Some(g) = forcing {
            if g.len() != self.nt + 1 {
                return Err(Error::Dimension(format!(
                    "forcing has {} nodes, expected {}",
                    g.len(),
                    self.nt + 1
                )));
            }
        }
        let mut out = Vec::with_capacity(self.nt + 1);
        out.push(u0.to_vec());
        for j in 0..self.nt {
            let pw = self.piece(j);
            let mut next = pw.phi.apply(&out[j]);
            if let Some(g) = forcing {
                let (start, o) = self.window(j);
                for (i, w) in pw.w[o].iter().enumerate() {
                    w.apply_add(&g[start + i], &mut next);
                }
            }
            out.push(next);
        }
        if out.last().is_some_and(|v| v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite())) {
            return Err(Error::Divergence("time integration".into()));
        }
        Ok(out)
    }

    /// Euclidean adjoint of the map `g ↦ (u_0 = 0, u_1, …, u_nt)`, applied
    /// to `y`; returns one vector per forcing node.
    pub fn integrate_adjoint(&self, y: &[CVec]) -> Result<Vec<CVec>> {
        if y.len() != self.nt + 1 {
            return Err(Error::Dimension("adjoint input length".into()));
        }
        let dim = y[0].len();
        let mut g = vec![vec![Coeff::new(0.0, 0.0); dim]; self.nt + 1];
        let mut r = y[self.nt].clone();
        for j in (0..self.nt).rev() {
            let pw = self.piece(j);
            let (start, o) = self.window(j);
            for (i, w) in pw.w[o].iter().enumerate() {
                let c = w.apply_adjoint(&r);
                for (a, b) in g[start + i].iter_mut().zip(c) {
                    *a += b;
                }
            }
            let mut back = pw.phi.apply_adjoint(&r);
            for (a, b) in back.iter_mut().zip(&y[j]) {
                *a += b;
            }
            r = back;
        }
        Ok(g)
    }
}
