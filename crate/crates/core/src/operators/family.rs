use nalgebra::{DMatrix, DVector};

use crate::chaos::{CVec, Coeff, CoefficientSpace, SpaceKind};
use crate::error::{Error, Result};

/// A linear map on coefficient vectors: diagonal or dense.
#[derive(Clone, Debug, PartialEq)]
pub enum LinOp {
    Diag(CVec),
    Dense(DMatrix<Coeff>),
}

impl LinOp {
    pub fn dim(&self) -> usize {
        match self {
            Self::Diag(d) => d.len(),
            Self::Dense(m) => m.nrows(),
        }
    }

    pub fn apply(&self, v: &[Coeff]) -> CVec {
        match self {
            Self::Diag(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            Self::Dense(m) => (m * DVector::from_column_slice(v)).as_slice().to_vec(),
        }
    }

    /// `out += self · v`
    pub fn apply_add(&self, v: &[Coeff], out: &mut [Coeff]) {
        match self {
            Self::Diag(d) => {
                for ((o, a), b) in out.iter_mut().zip(d).zip(v) {
                    *o += a * b;
                }
            }
            Self::Dense(m) => {
                let r = m * DVector::from_column_slice(v);
                for (o, x) in out.iter_mut().zip(r.iter()) {
                    *o += x;
                }
            }
        }
    }

    /// Conjugate transpose applied to `v`.
    pub fn apply_adjoint(&self, v: &[Coeff]) -> CVec {
        match self {
            Self::Diag(d) => d.iter().zip(v).map(|(a, b)| a.conj() * b).collect(),
            Self::Dense(m) => (m.adjoint() * DVector::from_column_slice(v)).as_slice().to_vec(),
        }
    }

    pub fn adjoint(&self) -> LinOp {
        match self {
            Self::Diag(d) => Self::Diag(d.iter().map(|a| a.conj()).collect()),
            Self::Dense(m) => Self::Dense(m.adjoint()),
        }
    }

    /// `exp(τ · self)`
    pub fn exp_scaled(&self, tau: f64) -> LinOp {
        match self {
            Self::Diag(d) => Self::Diag(d.iter().map(|a| (a * tau).exp()).collect()),
            Self::Dense(m) => Self::Dense((m * Coeff::new(tau, 0.0)).exp()),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Coeff> {
        match self {
            Self::Diag(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
            Self::Dense(m) => m.clone(),
        }
    }
}

/// How the generator `A` is specified.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    /// `a(y) = −a₂y² + i a₁y + a₀` acting on Fourier modes.
    Multiplier { a2: f64, a1: f64, a0: f64 },
    /// Multiplication by a constant in a one-dimensional space.
    Scalar(Coeff),
    /// Explicit matrix on the coefficient space.
    Matrix(DMatrix<Coeff>),
}

/// The generator `A(t)`, constant or piecewise constant on the uniform time
/// grid of `nt` intervals on `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorFamily {
    space: CoefficientSpace,
    reps: Vec<Representation>,
    ops: Vec<LinOp>,
    schedule: Option<(f64, usize)>,
}

impl OperatorFamily {
    fn build(space: CoefficientSpace, rep: &Representation) -> Result<LinOp> {
        match rep {
            Representation::Multiplier { a2, a1, a0 } => {
                let ys = space
                    .wavenumbers()
                    .ok_or_else(|| Error::Dimension("a Fourier multiplier needs a Fourier space".into()))?;
                Ok(LinOp::Diag(ys.iter().map(|&y| Coeff::new(a0 - a2 * y * y, a1 * y)).collect()))
            }
            Representation::Scalar(a) => {
                if space.dim() != 1 {
                    return Err(Error::Dimension("a scalar generator needs a one-dimensional space".into()));
                }
                Ok(LinOp::Diag(vec![*a]))
            }
            Representation::Matrix(m) => {
                if m.nrows() != space.dim() || m.ncols() != space.dim() {
                    return Err(Error::Dimension(format!(
                        "{}x{} generator on a space of dimension {}",
                        m.nrows(),
                        m.ncols(),
                        space.dim()
                    )));
                }
                Ok(LinOp::Dense(m.clone()))
            }
        }
    }

    pub fn constant(space: CoefficientSpace, rep: Representation) -> Result<Self> {
        let op = Self::build(space.clone(), &rep)?;
        Ok(Self {
            space,
            reps: vec![rep],
            ops: vec![op],
            schedule: None,
        })
    }

    /// `a(y) = −a₂y² + i a₁y + a₀` on Fourier modes.
    pub fn multiplier(space: CoefficientSpace, a2: f64, a1: f64, a0: f64) -> Result<Self> {
        Self::constant(space, Representation::Multiplier { a2, a1, a0 })
    }

    /// `a₂ ∂²` on Fourier modes.
    pub fn heat(space: CoefficientSpace, a2: f64) -> Result<Self> {
        Self::multiplier(space, a2, 0.0, 0.0)
    }

    pub fn scalar(a: f64) -> Self {
        Self::constant(CoefficientSpace::scalar(), Representation::Scalar(Coeff::new(a, 0.0))).expect("scalar space")
    }

    pub fn matrix(space: CoefficientSpace, m: DMatrix<Coeff>) -> Result<Self> {
        Self::constant(space, Representation::Matrix(m))
    }

    /// One representation per grid interval `[t_j, t_{j+1})`.
    pub fn piecewise(space: CoefficientSpace, horizon: f64, reps: Vec<Representation>) -> Result<Self> {
        if reps.is_empty() || !(horizon > 0.0) {
            return Err(Error::InvalidProblem("piecewise generator needs pieces and T > 0".into()));
        }
        let ops = reps.iter().map(|r| Self::build(space.clone(), r)).collect::<Result<Vec<_>>>()?;
        let nt = reps.len();
        Ok(Self {
            space,
            reps,
            ops,
            schedule: Some((horizon, nt)),
        })
    }

    pub fn space(&self) -> &CoefficientSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn representations(&self) -> &[Representation] {
        &self.reps
    }

    pub fn schedule(&self) -> Option<(f64, usize)> {
        self.schedule
    }

    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|o| matches!(o, LinOp::Diag(_)))
    }

    pub fn pieces(&self) -> &[LinOp] {
        &self.ops
    }

    /// The generator acting on interval `j` of an `nt`-step grid.
    pub fn piece_for_interval(&self, j: usize, nt: usize) -> Result<&LinOp> {
        match self.schedule {
            None => Ok(&self.ops[0]),
            Some((_, n)) if n == nt => Ok(&self.ops[j]),
            Some((_, n)) => Err(Error::InvalidProblem(format!(
                "generator has {n} pieces but the time grid has {nt} intervals"
            ))),
        }
    }

    fn piece_index(&self, t: f64) -> usize {
        match self.schedule {
            None => 0,
            Some((horizon, n)) => (((t / horizon) * n as f64).floor().max(0.0) as usize).min(n - 1),
        }
    }

    pub fn apply(&self, t: f64, v: &[Coeff]) -> CVec {
        self.ops[self.piece_index(t)].apply(v)
    }

    /// `Φ_{t,s} v`: exact exponentials, composed across pieces.
    pub fn semigroup_apply(&self, t: f64, s: f64, v: &[Coeff]) -> Result<CVec> {
        if t < s {
            return Err(Error::TimeOrder { t, s });
        }
        if v.len() != self.dim() {
            return Err(Error::Dimension("semigroup argument".into()));
        }
        let Some((horizon, n)) = self.schedule else {
            return Ok(self.ops[0].exp_scaled(t - s).apply(v));
        };
        let dt = horizon / n as f64;
        let mut out = v.to_vec();
        let mut cur = s;
        while cur < t {
            let j = self.piece_index(cur);
            let end = if j + 1 == n { t } else { ((j + 1) as f64 * dt).min(t) };
            let end = if end <= cur { t } else { end };
            out = self.ops[j].exp_scaled(end - cur).apply(&out);
            cur = end;
        }
        Ok(out)
    }

    /// Smallest `C` with `Re⟨Av, v⟩ + γ‖v‖_V² ≤ C‖v‖_H²` on the grid, or
    /// `None` when no bound survives grid refinement.
    pub fn coercivity_check(&self, gamma: f64) -> Option<f64> {
        let mut best = f64::NEG_INFINITY;
        for rep in &self.reps {
            let c = match rep {
                Representation::Multiplier { a2, a0, .. } => {
                    if gamma > *a2 {
                        return None;
                    }
                    let ys = self.space.wavenumbers()?;
                    ys.iter()
                        .map(|&y| a0 - a2 * y * y + gamma * (1.0 + y * y))
                        .fold(f64::NEG_INFINITY, f64::max)
                }
                Representation::Scalar(a) => a.re + gamma,
                Representation::Matrix(m) => {
                    if self.space.kind() == SpaceKind::FourierModes {
                        return None;
                    }
                    let h = (m + m.adjoint()) * Coeff::new(0.5, 0.0);
                    let ev = h.symmetric_eigenvalues();
                    ev.iter().copied().fold(f64::NEG_INFINITY, f64::max) + gamma
                }
            };
            best = best.max(c);
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(x: f64) -> Coeff {
        Coeff::new(x, 0.0)
    }

    #[test]
    fn scalar_semigroup() {
        let a = OperatorFamily::scalar(1.0);
        let v = a.semigroup_apply(1.5, 0.5, &[c(1.0)]).unwrap();
        assert!((v[0].re - E).abs() < 1e-14);
        assert_eq!(a.semigroup_apply(0.3, 0.3, &[c(2.0)]).unwrap(), vec![c(2.0)]);
        assert!(matches!(a.semigroup_apply(0.1, 0.2, &[c(1.0)]), Err(Error::TimeOrder { .. })));
    }

    #[test]
    fn heat_semigroup_single_mode() {
        let space = CoefficientSpace::fourier(2.0 * PI, 8);
        let a = OperatorFamily::heat(space.clone(), 1.0).unwrap();
        let mut v = space.zeros();
        v[3] = c(1.0);
        let out = a.semigroup_apply(0.7, 0.2, &v).unwrap();
        assert!((out[3].re - (-9.0 * 0.5f64).exp()).abs() < 1e-15);
        assert!(out.iter().enumerate().all(|(i, x)| i == 3 || x.norm() == 0.0));
    }

    #[test]
    fn coercivity_examples() {
        let space = CoefficientSpace::fourier(2.0 * PI, 16);
        let heat = OperatorFamily::heat(space.clone(), 1.0).unwrap();
        assert!((heat.coercivity_check(0.5).unwrap() - 0.5).abs() < 1e-15);
        let heat2 = OperatorFamily::heat(space.clone(), 2.0).unwrap();
        assert!((heat2.coercivity_check(1.0).unwrap() - 1.0).abs() < 1e-15);
        let zero = OperatorFamily::heat(space, 0.0).unwrap();
        assert_eq!(zero.coercivity_check(1.0), None);
        assert_eq!(OperatorFamily::scalar(-2.0).coercivity_check(0.5), Some(-1.5));
    }

    #[test]
    fn matrix_coercivity() {
        let m = DMatrix::from_row_slice(2, 2, &[c(-1.0), c(2.0), c(0.0), c(-1.0)]);
        let a = OperatorFamily::matrix(CoefficientSpace::real_grid(vec![1.0, 1.0]), m).unwrap();
        assert!((a.coercivity_check(0.1).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn piecewise_semigroup_composes() {
        let reps = vec![Representation::Scalar(c(1.0)), Representation::Scalar(c(-1.0))];
        let a = OperatorFamily::piecewise(CoefficientSpace::scalar(), 2.0, reps).unwrap();
        let v = a.semigroup_apply(2.0, 0.5, &[c(1.0)]).unwrap();
        assert!((v[0].re - (0.5f64 - 1.0).exp()).abs() < 1e-14);
        let w = a.semigroup_apply(0.8, 0.2, &[c(1.0)]).unwrap();
        assert!((w[0].re - 0.6f64.exp()).abs() < 1e-14);
    }
}
