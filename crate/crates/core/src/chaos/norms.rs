use super::{ChaosSeries, CVec, Coeff};
use crate::error::{Error, Result};
use crate::multiindex::{enumerate, factorial, MultiIndex, TruncationBox};

/// Exponents tried by [`smallness_radius`], in increasing order.
pub const SMALLNESS_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

/// A weight sequence `Q = {q_k ≥ 1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSequence {
    Constant(f64),
    /// `q_k = values[k-1]` for `k ≤ values.len()`, then `tail`.
    Explicit { values: Vec<f64>, tail: f64 },
    /// `q_k = 2k(1 + C_k)`, with `C_k = 0` past the end of the list.
    Derived { c: Vec<f64> },
}

impl WeightSequence {
    pub fn constant(c: f64) -> Result<Self> {
        let q = Self::Constant(c);
        q.validate()?;
        Ok(q)
    }

    pub fn explicit(values: Vec<f64>, tail: f64) -> Result<Self> {
        let q = Self::Explicit { values, tail };
        q.validate()?;
        Ok(q)
    }

    pub fn derived(c: Vec<f64>) -> Result<Self> {
        let q = Self::Derived { c };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |v: f64| !(v >= 1.0) || !v.is_finite();
        match self {
            Self::Constant(c) if bad(*c) => Err(Error::InvalidWeights(format!("constant {c} < 1"))),
            Self::Explicit { values, tail } => {
                if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| bad(**v)) {
                    return Err(Error::InvalidWeights(format!("q_{} = {v} < 1", i + 1)));
                }
                if bad(*tail) {
                    return Err(Error::InvalidWeights(format!("tail {tail} < 1")));
                }
                Ok(())
            }
            Self::Derived { c } => match c.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
                Some(i) => Err(Error::InvalidWeights(format!("C_{} = {} is negative", i + 1, c[i]))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// `q_k` for `k ≥ 1`.
    pub fn q(&self, k: usize) -> f64 {
        assert!(k >= 1, "weights are indexed from 1");
        match self {
            Self::Constant(c) => *c,
            Self::Explicit { values, tail } => values.get(k - 1).copied().unwrap_or(*tail),
            Self::Derived { c } => 2.0 * k as f64 * (1.0 + c.get(k - 1).copied().unwrap_or(0.0)),
        }
    }

    /// `q_1, …, q_K`.
    pub fn values(&self, modes: usize) -> Vec<f64> {
        (1..=modes).map(|k| self.q(k)).collect()
    }

    /// `q^{rα} = ∏ q_k^{r α_k}`.
    pub fn pow(&self, alpha: &MultiIndex, r: f64) -> f64 {
        alpha.iter().map(|(k, m)| self.q(k).powf(r * m as f64)).product()
    }
}

/// A finitely supported direction `h = Σ h_k 𝔲_k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DirectionH {
    pub coords: Vec<f64>,
}

impl DirectionH {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `‖h‖_𝒰`
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|h| h * h).sum::<f64>().sqrt()
    }

    /// `‖Λ_Q^r h‖_𝒰 = (Σ q_k^{2r} h_k²)^{1/2}`.
    pub fn norm_qr(&self, q: &WeightSequence, r: f64) -> f64 {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, h)| q.q(i + 1).powf(2.0 * r) * h * h)
            .sum::<f64>()
            .sqrt()
    }

    /// `h^α`
    pub fn monomial(&self, alpha: &MultiIndex) -> f64 {
        alpha.monomial(&self.coords)
    }
}

/// `Σ_α q^{2rα} ‖η_α‖_X² / |α|!`
pub fn weighted_norm_sq(eta: &ChaosSeries, q: &WeightSequence, r: f64) -> f64 {
    weighted_norm_sq_by_order(eta, q, r).iter().sum()
}

/// The terms of [`weighted_norm_sq`] grouped by order `n = |α|`.
pub fn weighted_norm_sq_by_order(eta: &ChaosSeries, q: &WeightSequence, r: f64) -> Vec<f64> {
    let mut out = vec![0.0; eta.max_order() as usize + 1];
    for (a, v) in eta.iter() {
        let n = a.order();
        out[n as usize] += q.pow(a, 2.0 * r) * eta.space().norm_sq(v) / factorial(n);
    }
    out
}

/// `e_n = Σ_{|α|=n} ‖η_α‖_X²`.
pub fn order_energy(eta: &ChaosSeries) -> Vec<f64> {
    let mut out = vec![0.0; eta.max_order() as usize + 1];
    for (a, v) in eta.iter() {
        out[a.order() as usize] += eta.space().norm_sq(v);
    }
    out
}

/// `‖E_α‖² = |α|! α!` for the symmetrized tensor attached to `α`.
pub fn e_alpha_norm_sq(alpha: &MultiIndex) -> Result<f64> {
    Ok(alpha.order_factorial()? * alpha.factorial()?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualPairing {
    /// `Σ_α η_α ζ_α`
    pub value: CVec,
    /// `Σ_α q^{−2rα} |ζ_α|²`
    pub coefficient_sum_sq: f64,
    /// `Σ_α |α|! q^{−2rα} |ζ_α|²`, the dual norm of `ζ`.
    pub dual_norm_sq: f64,
}

/// Pairs a series with a scalar series over the common support.
pub fn dual_pairing(eta: &ChaosSeries, zeta: &ChaosSeries, q: &WeightSequence, r: f64) -> Result<DualPairing> {
    if zeta.space().dim() != 1 {
        return Err(Error::IncompatibleSpaces("the dual element must be scalar".into()));
    }
    let mut value = eta.space().zeros();
    for (a, v) in eta.iter() {
        let z = zeta.scalar_coeff(a);
        if z == Coeff::new(0.0, 0.0) {
            continue;
        }
        for (o, c) in value.iter_mut().zip(v) {
            *o += c * z;
        }
    }
    let mut coefficient_sum_sq = 0.0;
    let mut dual = 0.0;
    for (a, z) in zeta.iter() {
        let w = q.pow(a, -2.0 * r) * z[0].norm_sqr();
        coefficient_sum_sq += w;
        dual += a.order_factorial()? * w;
    }
    Ok(DualPairing {
        value,
        coefficient_sum_sq,
        dual_norm_sq: dual,
    })
}

/// `Σ_α |α|! q^{−2rα} |ζ_α|²`
pub fn dual_norm_sq(zeta: &ChaosSeries, q: &WeightSequence, r: f64) -> Result<f64> {
    let mut acc = 0.0;
    for (a, z) in zeta.iter() {
        acc += a.order_factorial()? * q.pow(a, -2.0 * r) * zeta.space().norm_sq(z);
    }
    Ok(acc)
}

/// Truncation of `ℰ_h = Σ_α (h^α/√α!) ξ_α` to a box.
pub fn stoch_exp(h: &DirectionH, tbox: TruncationBox) -> Result<ChaosSeries> {
    let mut out = ChaosSeries::new(super::CoefficientSpace::scalar(), tbox);
    for a in enumerate(tbox) {
        let m = h.monomial(&a);
        if m != 0.0 {
            out.insert(a.clone(), vec![Coeff::new(m / a.factorial()?.sqrt(), 0.0)])?;
        }
    }
    Ok(out)
}

/// Largest `s` in [`SMALLNESS_GRID`] with `‖Λ_Q^s h‖ < 1`.
pub fn smallness_radius(h: &DirectionH, q: &WeightSequence) -> Option<f64> {
    SMALLNESS_GRID
        .iter()
        .copied()
        .filter(|&s| h.norm_qr(q, s) < 1.0)
        .last()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{CoefficientSpace, Coeff};

    fn c(x: f64) -> Coeff {
        Coeff::new(x, 0.0)
    }

    #[test]
    fn weights() {
        assert!(WeightSequence::constant(0.5).is_err());
        assert!(WeightSequence::explicit(vec![1.0, 0.9], 2.0).is_err());
        assert!(WeightSequence::derived(vec![-1.0]).is_err());
        let q = WeightSequence::derived(vec![1.0, 0.5]).unwrap();
        assert_eq!(q.values(3), vec![4.0, 6.0, 6.0]);
        let e = WeightSequence::explicit(vec![2.0], 3.0).unwrap();
        assert_eq!(e.values(3), vec![2.0, 3.0, 3.0]);
    }

    #[test]
    fn weighted_norm_examples() {
        let tb = TruncationBox::new(3, 2);
        let q = WeightSequence::explicit(vec![2.0, 3.0], 1.0).unwrap();
        let s = ChaosSeries::from_real(tb, [(MultiIndex::unit(1), 1.0), (MultiIndex::unit(2), 1.0)]).unwrap();
        assert!((weighted_norm_sq(&s, &q, 1.0) - 13.0).abs() < 1e-12);
        assert_eq!(order_energy(&s), vec![0.0, 2.0]);

        let a = MultiIndex::from_dense(&[2, 1]);
        let f = ChaosSeries::from_real(tb, [(a, 3.0)]).unwrap();
        let one = WeightSequence::Constant(1.0);
        assert!((weighted_norm_sq(&f, &one, 0.0) - 9.0 / 6.0).abs() < 1e-14);

        let d = ChaosSeries::deterministic(CoefficientSpace::real_grid(vec![0.5, 0.5]), tb, vec![c(1.0), c(3.0)]).unwrap();
        assert!((weighted_norm_sq(&d, &q, -2.0) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn pairing_with_exponential() {
        let tb = TruncationBox::new(3, 2);
        let h = DirectionH::new(vec![0.3, -0.2]);
        let e = stoch_exp(&h, tb).unwrap();
        let s = ChaosSeries::from_real(tb, [(MultiIndex::zero(), 2.0), (MultiIndex::from_dense(&[1, 2]), 1.0)]).unwrap();
        let p = dual_pairing(&s, &e, &WeightSequence::Constant(1.0), 0.0).unwrap();
        let expected = 2.0 + 0.3 * 0.04 / 2f64.sqrt();
        assert!((p.value[0].re - expected).abs() < 1e-14);
        let unit = ChaosSeries::unit(tb);
        let p = dual_pairing(&s, &unit, &WeightSequence::Constant(1.0), 0.0).unwrap();
        assert_eq!(p.value[0], c(2.0));
    }

    #[test]
    fn single_mode_exponential() {
        let tb = TruncationBox::new(6, 1);
        let e = stoch_exp(&DirectionH::new(vec![0.7]), tb).unwrap();
        for n in 0..=6u32 {
            let v = e.scalar_coeff(&MultiIndex::scaled_unit(n, 1)).re;
            assert!((v - 0.7f64.powi(n as i32) / factorial(n).sqrt()).abs() < 1e-15);
        }
        let z = stoch_exp(&DirectionH::zero(), tb).unwrap();
        assert_eq!(z, ChaosSeries::unit(tb));
    }

    #[test]
    fn smallness() {
        let q2 = WeightSequence::Constant(2.0);
        assert_eq!(smallness_radius(&DirectionH::zero(), &q2), Some(8.0));
        assert_eq!(smallness_radius(&DirectionH::new(vec![0.5]), &q2), Some(0.5));
        let one = WeightSequence::Constant(1.0);
        assert_eq!(smallness_radius(&DirectionH::new(vec![0.6, 0.8]), &one), None);
    }

    #[test]
    fn enorm() {
        let a = MultiIndex::from_dense(&[2, 0, 1]);
        assert_eq!(e_alpha_norm_sq(&a).unwrap(), 12.0);
        assert_eq!(e_alpha_norm_sq(&MultiIndex::zero()).unwrap(), 1.0);
    }
}
