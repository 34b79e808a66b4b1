use std::collections::BTreeMap;

use super::{hermite::xi_eval, CVec, Coeff, CoefficientSpace, SpaceKind};
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, TruncationBox};

/// Truncated formal series `Σ_α η_α ξ_α` with coefficients in a
/// [`CoefficientSpace`]. Absent keys are zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosSeries {
    space: CoefficientSpace,
    tbox: TruncationBox,
    coeffs: BTreeMap<MultiIndex, CVec>,
}

impl ChaosSeries {
    pub fn new(space: CoefficientSpace, tbox: TruncationBox) -> Self {
        Self {
            space,
            tbox,
            coeffs: BTreeMap::new(),
        }
    }

    /// A deterministic element: support `{(0)}`.
    pub fn deterministic(space: CoefficientSpace, tbox: TruncationBox, v: CVec) -> Result<Self> {
        let mut s = Self::new(space, tbox);
        s.insert(MultiIndex::zero(), v)?;
        Ok(s)
    }

    /// `v · ξ_α`.
    pub fn basis(space: CoefficientSpace, tbox: TruncationBox, alpha: MultiIndex, v: CVec) -> Result<Self> {
        let mut s = Self::new(space, tbox);
        s.insert(alpha, v)?;
        Ok(s)
    }

    /// Scalar `ξ_α`.
    pub fn scalar_basis(tbox: TruncationBox, alpha: MultiIndex) -> Result<Self> {
        Self::basis(CoefficientSpace::scalar(), tbox, alpha, vec![Coeff::new(1.0, 0.0)])
    }

    /// The scalar constant `1`.
    pub fn unit(tbox: TruncationBox) -> Self {
        Self::scalar_basis(tbox, MultiIndex::zero()).expect("(0) lies in every box")
    }

    /// Builds a scalar series from real coefficients.
    pub fn from_real(tbox: TruncationBox, coeffs: impl IntoIterator<Item = (MultiIndex, f64)>) -> Result<Self> {
        let mut s = Self::new(CoefficientSpace::scalar(), tbox);
        for (a, c) in coeffs {
            s.add_to(a, &[Coeff::new(c, 0.0)])?;
        }
        Ok(s)
    }

    pub fn space(&self) -> &CoefficientSpace {
        &self.space
    }

    pub fn tbox(&self) -> TruncationBox {
        self.tbox
    }

    /// Replaces the coefficient at `alpha`.
    pub fn insert(&mut self, alpha: MultiIndex, v: CVec) -> Result<()> {
        self.check(&alpha, &v)?;
        self.coeffs.insert(alpha, v);
        Ok(())
    }

    /// Adds `v` to the coefficient at `alpha`.
    pub fn add_to(&mut self, alpha: MultiIndex, v: &[Coeff]) -> Result<()> {
        self.check(&alpha, v)?;
        let dim = self.space.dim();
        let slot = self
            .coeffs
            .entry(alpha)
            .or_insert_with(|| vec![Coeff::new(0.0, 0.0); dim]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s += x;
        }
        Ok(())
    }

    fn check(&self, alpha: &MultiIndex, v: &[Coeff]) -> Result<()> {
        if v.len() != self.space.dim() {
            return Err(Error::Dimension(format!(
                "coefficient of length {} in a space of dimension {}",
                v.len(),
                self.space.dim()
            )));
        }
        if !self.tbox.contains(alpha) {
            return Err(Error::BoxOverflow {
                order: alpha.order(),
                max_order: self.tbox.max_order,
                max_modes: self.tbox.max_modes,
            });
        }
        Ok(())
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&[Coeff]> {
        self.coeffs.get(alpha).map(Vec::as_slice)
    }

    /// Coefficient at `alpha`, zero when absent.
    pub fn coeff(&self, alpha: &MultiIndex) -> CVec {
        self.get(alpha).map_or_else(|| self.space.zeros(), <[Coeff]>::to_vec)
    }

    /// Scalar coefficient (first component).
    pub fn scalar_coeff(&self, alpha: &MultiIndex) -> Coeff {
        self.get(alpha).map_or(Coeff::new(0.0, 0.0), |v| v[0])
    }

    /// Stored coefficients in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &CVec)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(a, v)| a.is_zero() || v.iter().all(|c| c.norm_sqr() == 0.0))
    }

    pub fn max_order(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn scale(&self, s: Coeff) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            for c in v.iter_mut() {
                *c *= s;
            }
        }
        out
    }

    /// `self + s · other` over the union of both boxes.
    pub fn axpy(&self, s: Coeff, other: &ChaosSeries) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::IncompatibleSpaces("axpy".into()));
        }
        let mut out = self.clone();
        out.tbox = self.tbox.union(&other.tbox);
        for (a, v) in other.iter() {
            let scaled: CVec = v.iter().map(|c| c * s).collect();
            out.add_to(a.clone(), &scaled)?;
        }
        Ok(out)
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &ChaosSeries) -> f64 {
        let mut keys: Vec<&MultiIndex> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|a| {
                let (x, y) = (self.coeff(a), other.coeff(a));
                x.iter().zip(&y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Realization `Σ_α η_α ξ_α(z)` for a sample `z` of the Gaussians.
    pub fn eval(&self, z: &[f64]) -> Result<CVec> {
        let mut out = self.space.zeros();
        for (a, v) in self.iter() {
            let x = xi_eval(a, z)?;
            for (o, c) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// Moves the series into another box that still holds every key.
    pub fn with_box(mut self, tbox: TruncationBox) -> Result<Self> {
        if let Some(a) = self.coeffs.keys().find(|a| !tbox.contains(a)) {
            return Err(Error::BoxOverflow {
                order: a.order(),
                max_order: tbox.max_order,
                max_modes: tbox.max_modes,
            });
        }
        self.tbox = tbox;
        Ok(self)
    }
}

/// `𝒰`-valued series `Σ_k f_k ⊗ 𝔲_k` with `f_k = Σ_α f_{k,α} ξ_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct UChaosSeries {
    space: CoefficientSpace,
    tbox: TruncationBox,
    modes: usize,
    coeffs: BTreeMap<(usize, MultiIndex), CVec>,
}

impl UChaosSeries {
    pub fn new(space: CoefficientSpace, tbox: TruncationBox, modes: usize) -> Self {
        Self {
            space,
            tbox,
            modes,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &CoefficientSpace {
        &self.space
    }

    pub fn tbox(&self) -> TruncationBox {
        self.tbox
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn add_to(&mut self, k: usize, alpha: MultiIndex, v: &[Coeff]) -> Result<()> {
        if k == 0 || k > self.modes {
            return Err(Error::ModeOutOfRange { k, bound: self.modes });
        }
        if v.len() != self.space.dim() {
            return Err(Error::Dimension("U-series coefficient".into()));
        }
        if !self.tbox.contains(&alpha) {
            return Err(Error::BoxOverflow {
                order: alpha.order(),
                max_order: self.tbox.max_order,
                max_modes: self.tbox.max_modes,
            });
        }
        let dim = self.space.dim();
        let slot = self
            .coeffs
            .entry((k, alpha))
            .or_insert_with(|| vec![Coeff::new(0.0, 0.0); dim]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s += x;
        }
        Ok(())
    }

    pub fn get(&self, k: usize, alpha: &MultiIndex) -> Option<&[Coeff]> {
        self.coeffs.get(&(k, alpha.clone())).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &CVec)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The chaos series `f_k`.
    pub fn component(&self, k: usize) -> ChaosSeries {
        let mut out = ChaosSeries::new(self.space.clone(), self.tbox);
        for ((j, a), v) in self.iter() {
            if *j == k {
                out.coeffs.insert(a.clone(), v.clone());
            }
        }
        out
    }

    /// `Σ_{k,α} (f_{k,α}, g_{k,α})_X`.
    pub fn inner(&self, other: &UChaosSeries) -> Coeff {
        self.iter()
            .filter_map(|(key, v)| other.coeffs.get(key).map(|w| self.space.inner(v, w)))
            .sum()
    }
}

/// What to do when a Wick product has terms beyond the target box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxPolicy {
    /// Error out on any non-zero term outside the union of the input boxes.
    Strict,
    /// Grow the box so that orders add.
    Extend,
    /// Keep the union of the input boxes and report what was dropped.
    Truncate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WickOutcome {
    pub series: ChaosSeries,
    pub dropped_terms: usize,
    pub dropped_norm_sq: f64,
}

/// `F ◇ G` with the box grown so that nothing is lost.
pub fn wick_product(f: &ChaosSeries, g: &ChaosSeries) -> Result<ChaosSeries> {
    wick_product_with(f, g, BoxPolicy::Extend).map(|o| o.series)
}

/// `(F ◇ G)_α = Σ_{β+γ=α} √(α!/(β!γ!)) F_β G_γ`.
///
/// Coefficients multiply componentwise when both series live in the same
/// space; a scalar factor scales the other's vectors.
pub fn wick_product_with(f: &ChaosSeries, g: &ChaosSeries, policy: BoxPolicy) -> Result<WickOutcome> {
    let (f, g) = if g.space.kind() == SpaceKind::Scalar || f.space == g.space {
        (f, g)
    } else if f.space.kind() == SpaceKind::Scalar {
        (g, f)
    } else {
        return Err(Error::IncompatibleSpaces(format!(
            "{:?}(dim {}) and {:?}(dim {})",
            f.space.kind(),
            f.space.dim(),
            g.space.kind(),
            g.space.dim()
        )));
    };
    let scalar_right = g.space.kind() == SpaceKind::Scalar && g.space.dim() == 1 && f.space != g.space;
    let union = f.tbox.union(&g.tbox);
    let target = match policy {
        BoxPolicy::Extend => TruncationBox::new(f.tbox.max_order + g.tbox.max_order, union.max_modes),
        BoxPolicy::Strict | BoxPolicy::Truncate => union,
    };
    let mut out = ChaosSeries::new(f.space.clone(), target);
    let mut dropped = ChaosSeries::new(
        f.space.clone(),
        TruncationBox::new(f.tbox.max_order + g.tbox.max_order, union.max_modes),
    );
    for (b, fv) in f.iter() {
        let bf = b.factorial()?;
        for (c, gv) in g.iter() {
            let a = b.add(c);
            let w = (a.factorial()? / (bf * c.factorial()?)).sqrt();
            let term: CVec = if scalar_right {
                fv.iter().map(|x| x * gv[0] * w).collect()
            } else {
                fv.iter().zip(gv).map(|(x, y)| x * y * w).collect()
            };
            if target.contains(&a) {
                out.add_to(a, &term)?;
            } else {
                let mass = out.space.norm_sq(&term);
                if mass == 0.0 {
                    continue;
                }
                if policy == BoxPolicy::Strict {
                    return Err(Error::BoxOverflow {
                        order: a.order(),
                        max_order: target.max_order,
                        max_modes: target.max_modes,
                    });
                }
                dropped.add_to(a, &term)?;
            }
        }
    }
    let mut dropped_terms = 0;
    let mut dropped_norm_sq = 0.0;
    for (_, v) in dropped.iter() {
        let mass = dropped.space.norm_sq(v);
        if mass > 0.0 {
            dropped_terms += 1;
            dropped_norm_sq += mass;
        }
    }
    Ok(WickOutcome {
        series: out,
        dropped_terms,
        dropped_norm_sq,
    })
}

/// Malliavin derivative in coordinates: `(DF)_{k,α} = √(α_k+1) F_{α+ε_k}`,
/// for `k ≤ modes`.
pub fn malliavin(f: &ChaosSeries, modes: usize) -> UChaosSeries {
    let mut out = UChaosSeries::new(f.space.clone(), f.tbox, modes);
    for (b, v) in f.iter() {
        for (k, m) in b.iter() {
            if k > modes {
                continue;
            }
            let a = b.sub_one(k).expect("k is in the support");
            let w = (m as f64).sqrt();
            let term: CVec = v.iter().map(|c| c * w).collect();
            out.add_to(k, a, &term).expect("lowered index stays in the box");
        }
    }
    out
}

/// Skorokhod integral `(δf)_α = Σ_k √α_k f_{k,α−ε_k}` into a box one
/// order above the input.
pub fn skorokhod(f: &UChaosSeries) -> ChaosSeries {
    let target = TruncationBox::new(f.tbox.max_order + 1, f.tbox.max_modes.max(f.modes));
    skorokhod_into(f, target).expect("extended box holds every raised index")
}

/// Skorokhod integral into a given box. A non-zero term outside the box
/// is an error, never silently dropped.
pub fn skorokhod_into(f: &UChaosSeries, target: TruncationBox) -> Result<ChaosSeries> {
    let mut out = ChaosSeries::new(f.space.clone(), target);
    for ((k, b), v) in f.iter() {
        let a = b.add_one(*k);
        if !target.contains(&a) {
            if v.iter().all(|c| c.norm_sqr() == 0.0) {
                continue;
            }
            return Err(Error::BoxOverflow {
                order: a.order(),
                max_order: target.max_order,
                max_modes: target.max_modes,
            });
        }
        let w = (a.get(*k) as f64).sqrt();
        let term: CVec = v.iter().map(|c| c * w).collect();
        out.add_to(a, &term)?;
    }
    Ok(out)
}

/// `δf = Σ_k f_k ◇ ξ_k`, the Wick-product route to the Skorokhod integral.
pub fn skorokhod_via_wick(f: &UChaosSeries) -> Result<ChaosSeries> {
    let target = TruncationBox::new(f.tbox.max_order + 1, f.tbox.max_modes.max(f.modes));
    let mut acc = ChaosSeries::new(f.space.clone(), target);
    for k in 1..=f.modes {
        let fk = f.component(k);
        if fk.is_empty() {
            continue;
        }
        let xi = ChaosSeries::scalar_basis(TruncationBox::new(1, k), MultiIndex::unit(k))?;
        let prod = wick_product(&fk, &xi)?;
        for (a, v) in prod.iter() {
            acc.add_to(a.clone(), v)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::{enumerate, factorial};

    fn c(x: f64) -> Coeff {
        Coeff::new(x, 0.0)
    }

    #[test]
    fn wick_of_first_chaos() {
        let tb = TruncationBox::new(1, 1);
        let x = ChaosSeries::scalar_basis(tb, MultiIndex::unit(1)).unwrap();
        let p = wick_product(&x, &x).unwrap();
        assert_eq!(p.len(), 1);
        let v = p.scalar_coeff(&MultiIndex::scaled_unit(2, 1));
        assert!((v.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn wick_of_hermite_polynomials() {
        // H_2(ξ) = √2 ξ_{2ε}, H_3(ξ) = √6 ξ_{3ε}; their Wick product is H_5 = √120 ξ_{5ε}.
        let h2 = ChaosSeries::from_real(TruncationBox::new(2, 1), [(MultiIndex::scaled_unit(2, 1), 2f64.sqrt())]).unwrap();
        let h3 = ChaosSeries::from_real(TruncationBox::new(3, 1), [(MultiIndex::scaled_unit(3, 1), 6f64.sqrt())]).unwrap();
        let p = wick_product(&h2, &h3).unwrap();
        let v = p.scalar_coeff(&MultiIndex::scaled_unit(5, 1));
        assert!((v.re - factorial(5).sqrt()).abs() < 1e-12);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn wick_identity_and_vector_scaling() {
        let space = CoefficientSpace::real_grid(vec![0.5, 0.5]);
        let tb = TruncationBox::new(2, 2);
        let mut f = ChaosSeries::new(space, tb);
        f.insert(MultiIndex::unit(2), vec![c(1.0), c(-2.0)]).unwrap();
        f.insert(MultiIndex::zero(), vec![c(0.3), c(0.0)]).unwrap();
        let p = wick_product(&f, &ChaosSeries::unit(tb)).unwrap();
        assert!(p.max_abs_diff(&f) < 1e-15);
        let p2 = wick_product(&ChaosSeries::unit(tb), &f).unwrap();
        assert!(p2.max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn wick_incompatible_spaces() {
        let tb = TruncationBox::new(1, 1);
        let a = ChaosSeries::new(CoefficientSpace::real_grid(vec![1.0, 1.0]), tb);
        let b = ChaosSeries::new(CoefficientSpace::fourier(1.0, 4), tb);
        assert!(matches!(wick_product(&a, &b), Err(Error::IncompatibleSpaces(_))));
    }

    #[test]
    fn wick_box_policies() {
        let tb = TruncationBox::new(1, 1);
        let x = ChaosSeries::scalar_basis(tb, MultiIndex::unit(1)).unwrap();
        assert!(matches!(
            wick_product_with(&x, &x, BoxPolicy::Strict),
            Err(Error::BoxOverflow { order: 2, .. })
        ));
        let t = wick_product_with(&x, &x, BoxPolicy::Truncate).unwrap();
        assert_eq!(t.dropped_terms, 1);
        assert!((t.dropped_norm_sq - 2.0).abs() < 1e-14);
        assert!(t.series.is_empty());
        let e = wick_product_with(&x, &x, BoxPolicy::Extend).unwrap();
        assert_eq!(e.series.tbox().max_order, 2);
        assert_eq!(e.dropped_terms, 0);
    }

    #[test]
    fn malliavin_examples() {
        let tb = TruncationBox::new(2, 2);
        let d = malliavin(&ChaosSeries::scalar_basis(tb, MultiIndex::unit(1)).unwrap(), 2);
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(1, &MultiIndex::zero()).unwrap()[0], c(1.0));
        assert!(malliavin(&ChaosSeries::unit(tb), 2).is_empty());
        let d2 = malliavin(&ChaosSeries::scalar_basis(tb, MultiIndex::scaled_unit(2, 1)).unwrap(), 2);
        assert!((d2.get(1, &MultiIndex::unit(1)).unwrap()[0].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn skorokhod_examples() {
        let tb = TruncationBox::new(1, 1);
        let mut f = UChaosSeries::new(CoefficientSpace::scalar(), tb, 1);
        f.add_to(1, MultiIndex::zero(), &[c(1.0)]).unwrap();
        let d = skorokhod(&f);
        assert_eq!(d.scalar_coeff(&MultiIndex::unit(1)), c(1.0));
        assert_eq!(d.len(), 1);

        let mut g = UChaosSeries::new(CoefficientSpace::scalar(), tb, 1);
        g.add_to(1, MultiIndex::unit(1), &[c(1.0)]).unwrap();
        let d = skorokhod(&g);
        assert!((d.scalar_coeff(&MultiIndex::scaled_unit(2, 1)).re - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(skorokhod_into(&g, tb), Err(Error::BoxOverflow { .. })));
    }

    #[test]
    fn skorokhod_routes_agree() {
        let tb = TruncationBox::new(3, 3);
        let mut f = UChaosSeries::new(CoefficientSpace::scalar(), tb, 3);
        for (i, a) in enumerate(tb).into_iter().enumerate() {
            for k in 1..=3 {
                let x = ((i * 7 + k * 3) % 11) as f64 / 11.0 - 0.4;
                f.add_to(k, a.clone(), &[c(x)]).unwrap();
            }
        }
        let a = skorokhod(&f);
        let b = skorokhod_via_wick(&f).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-13);
    }

    #[test]
    fn eigen_relation_for_basis() {
        let tb = TruncationBox::new(4, 3);
        for a in enumerate(tb) {
            let x = ChaosSeries::scalar_basis(tb, a.clone()).unwrap();
            let d = skorokhod(&malliavin(&x, 3));
            let expected = x.scale(c(a.order() as f64));
            assert!(d.max_abs_diff(&expected) < 1e-13, "{a}");
        }
    }

    #[test]
    fn eval_matches_basis() {
        let tb = TruncationBox::new(2, 2);
        let s = ChaosSeries::from_real(tb, [(MultiIndex::zero(), 1.0), (MultiIndex::unit(2), 2.0)]).unwrap();
        let v = s.eval(&[0.3, -0.5]).unwrap();
        assert!((v[0].re - 0.0).abs() < 1e-15);
    }
}
