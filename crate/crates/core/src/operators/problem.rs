use std::collections::BTreeMap;

use super::{NoiseModel, NoiseOperatorFamily, OperatorFamily, SpatialAction};
use crate::chaos::{CVec, ChaosSeries, Coeff, CoefficientSpace};
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, TruncationBox};

/// Forcing `f(t)` sampled at the `nt + 1` grid nodes.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Forcing {
    #[default]
    Zero,
    Deterministic(Vec<CVec>),
    /// Chaos coefficients `f_α(t_j)`.
    Chaos(BTreeMap<MultiIndex, Vec<CVec>>),
}

impl Forcing {
    /// Node values of `f_α`, `None` when that coefficient vanishes.
    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&[CVec]> {
        match self {
            Self::Zero => None,
            Self::Deterministic(v) => alpha.is_zero().then_some(v.as_slice()),
            Self::Chaos(m) => m.get(alpha).map(Vec::as_slice),
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Self::Zero | Self::Deterministic(_) => true,
            Self::Chaos(m) => m.keys().all(MultiIndex::is_zero),
        }
    }

    pub fn scale(&self, s: Coeff) -> Self {
        let sc = |v: &Vec<CVec>| v.iter().map(|x| x.iter().map(|c| c * s).collect()).collect();
        match self {
            Self::Zero => Self::Zero,
            Self::Deterministic(v) => Self::Deterministic(sc(v)),
            Self::Chaos(m) => Self::Chaos(m.iter().map(|(a, v)| (a.clone(), sc(v))).collect()),
        }
    }
}

/// A discretized linear evolution equation
/// `du = (A u + f) dt + M_k u ◇ ξ_k`, in the propagator sense.
#[derive(Clone, Debug)]
pub struct EvolutionProblem {
    pub space: CoefficientSpace,
    pub a: OperatorFamily,
    pub m: NoiseOperatorFamily,
    pub forcing: Forcing,
    pub u0: ChaosSeries,
    pub horizon: f64,
    pub nt: usize,
    pub tbox: TruncationBox,
}

impl EvolutionProblem {
    pub fn new(
        a: OperatorFamily,
        m: NoiseOperatorFamily,
        u0: ChaosSeries,
        horizon: f64,
        nt: usize,
        tbox: TruncationBox,
    ) -> Result<Self> {
        let p = Self {
            space: a.space().clone(),
            a,
            m,
            forcing: Forcing::Zero,
            u0,
            horizon,
            nt,
            tbox,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Result<Self> {
        self.forcing = forcing;
        self.validate()?;
        Ok(self)
    }

    pub fn with_u0(mut self, u0: ChaosSeries) -> Result<Self> {
        self.u0 = u0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_box(mut self, tbox: TruncationBox) -> Result<Self> {
        self.tbox = tbox;
        self.validate()?;
        Ok(self)
    }

    pub fn with_nt(mut self, nt: usize) -> Result<Self> {
        self.nt = nt;
        self.validate()?;
        Ok(self)
    }

    pub fn noise(&self) -> &NoiseModel {
        self.m.noise()
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.nt as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.nt).map(|j| j as f64 * self.dt()).collect()
    }

    pub fn has_deterministic_data(&self) -> bool {
        self.u0.is_deterministic() && self.forcing.is_deterministic()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidProblem(format!("horizon T = {} must be positive", self.horizon)));
        }
        if self.nt == 0 {
            return Err(Error::InvalidProblem("nt must be at least 1".into()));
        }
        if self.a.space() != &self.space || self.u0.space() != &self.space {
            return Err(Error::IncompatibleSpaces("generator, initial datum and problem space differ".into()));
        }
        if let Some((_, n)) = self.a.schedule() {
            if n != self.nt {
                return Err(Error::InvalidProblem(format!(
                    "generator has {n} pieces but nt = {}",
                    self.nt
                )));
            }
        }
        if self.tbox.max_modes > self.m.mode_count() {
            return Err(Error::InvalidProblem(format!(
                "truncation uses {} modes but the noise has {}",
                self.tbox.max_modes,
                self.m.mode_count()
            )));
        }
        if let Some(h) = self.noise().horizon() {
            if (h - self.horizon).abs() > 1e-12 * h.max(1.0) {
                return Err(Error::InvalidProblem(format!(
                    "noise horizon {h} differs from T = {}",
                    self.horizon
                )));
            }
        }
        let dim = self.space.dim();
        for k in 1..=self.m.mode_count() {
            let ok = match self.m.action(k)? {
                SpatialAction::Zero | SpatialAction::Scalar(_) => true,
                SpatialAction::Multiplier(d) => d.len() == dim,
                SpatialAction::Multiply { grid, .. } => grid.n() == dim,
                SpatialAction::Matrix(m) => m.nrows() == dim && m.ncols() == dim,
            };
            if !ok {
                return Err(Error::Dimension(format!("noise operator {k} does not act on dimension {dim}")));
            }
        }
        if let Some(a) = self.u0.iter().map(|(a, _)| a).find(|a| !self.tbox.contains(a)) {
            return Err(Error::InvalidProblem(format!("initial datum has index {a} outside the box")));
        }
        let check = |v: &Vec<CVec>| v.len() == self.nt + 1 && v.iter().all(|x| x.len() == dim);
        let forcing_ok = match &self.forcing {
            Forcing::Zero => true,
            Forcing::Deterministic(v) => check(v),
            Forcing::Chaos(m) => m.iter().all(|(a, v)| self.tbox.contains(a) && check(v)),
        };
        if !forcing_ok {
            return Err(Error::Dimension("forcing must hold nt + 1 vectors of the space dimension inside the box".into()));
        }
        Ok(())
    }

    /// `du = u dt + u ◇ ξ dt`, `u(0) = 1`: a scalar equation driven by one
    /// Gaussian.
    pub fn wick_ode(horizon: f64, nt: usize, order: u32) -> Result<Self> {
        let tbox = TruncationBox::new(order, 1);
        Self::new(
            OperatorFamily::scalar(1.0),
            NoiseOperatorFamily::uniform(NoiseModel::SingleGaussian, SpatialAction::Scalar(1.0)),
            ChaosSeries::deterministic(CoefficientSpace::scalar(), tbox, vec![Coeff::new(1.0, 0.0)])?,
            horizon,
            nt,
            tbox,
        )
    }
}
