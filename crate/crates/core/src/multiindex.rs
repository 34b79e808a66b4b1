//! Sparse multi-indices and the combinatorics built on them.
//!
//! A [`MultiIndex`] is a finitely supported sequence of non-negative
//! integers `(α_1, α_2, ...)`. Only the non-zero entries are stored, as
//! `(position, multiplicity)` pairs with strictly increasing positions.
//!
//! The canonical order is graded-lexicographic: first by the order `|α|`,
//! then lexicographically on the dense vector `(α_1, ..., α_K)` with larger
//! leading entries first. Equivalently, indices of equal order compare by
//! their characteristic sets in ascending lexicographic order, so that
//! `ε_1 < ε_2` and `2ε_1 < ε_1 + ε_2 < 2ε_2`. This is the order of
//! [`enumerate`] and of every CSV dump.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest order for which [`MultiIndex::factorial`] is evaluated.
pub const FACTORIAL_GUARD: u32 = 150;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<(usize, u32)>,
}

impl MultiIndex {
    /// The zero multi-index `(0)`.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit index `ε_k`. Positions start at 1.
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "positions start at 1");
        Self {
            entries: vec![(k, 1)],
        }
    }

    /// `n ε_k`.
    pub fn scaled_unit(n: u32, k: usize) -> Self {
        assert!(k >= 1, "positions start at 1");
        if n == 0 {
            return Self::zero();
        }
        Self {
            entries: vec![(k, n)],
        }
    }

    /// Builds an index from a dense prefix `(α_1, α_2, ...)`.
    pub fn from_dense(dense: &[u32]) -> Self {
        let entries = dense
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
            .collect();
        Self { entries }
    }

    /// Builds an index from arbitrary `(position, multiplicity)` pairs,
    /// merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut entries: Vec<(usize, u32)> = Vec::new();
        let mut raw: Vec<(usize, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        raw.sort_unstable_by_key(|p| p.0);
        for (k, m) in raw {
            assert!(k >= 1, "positions start at 1");
            match entries.last_mut() {
                Some(last) if last.0 == k => last.1 += m,
                _ => entries.push((k, m)),
            }
        }
        Self { entries }
    }

    /// Rebuilds an index from its characteristic set.
    pub fn from_characteristic_set(set: &[usize]) -> Self {
        Self::from_pairs(set.iter().map(|&k| (k, 1)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|α|`
    pub fn order(&self) -> u32 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// `α_k` (zero outside the support).
    pub fn get(&self, k: usize) -> u32 {
        match self.entries.binary_search_by_key(&k, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    /// Non-zero `(position, multiplicity)` pairs in increasing position.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// Largest position with a non-zero entry, 0 for `(0)`.
    pub fn max_position(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0)
    }

    /// Dense vector `(α_1, ..., α_len)`; entries beyond `len` are dropped.
    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut dense = vec![0; len];
        for (k, m) in self.iter() {
            if k <= len {
                dense[k - 1] = m;
            }
        }
        dense
    }

    /// `α + β`, componentwise.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (self.entries[i], other.entries[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    entries.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    entries.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    entries.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        entries.extend_from_slice(&self.entries[i..]);
        entries.extend_from_slice(&other.entries[j..]);
        MultiIndex { entries }
    }

    /// `α + ε_k`.
    pub fn add_one(&self, k: usize) -> MultiIndex {
        assert!(k >= 1, "positions start at 1");
        let mut entries = self.entries.clone();
        match entries.binary_search_by_key(&k, |e| e.0) {
            Ok(i) => entries[i].1 += 1,
            Err(i) => entries.insert(i, (k, 1)),
        }
        MultiIndex { entries }
    }

    /// `α − ε_k`, or `None` when `α_k = 0`. Callers multiply by `√α_k`,
    /// so the absent case contributes nothing.
    pub fn sub_one(&self, k: usize) -> Option<MultiIndex> {
        let i = self.entries.binary_search_by_key(&k, |e| e.0).ok()?;
        let mut entries = self.entries.clone();
        if entries[i].1 == 1 {
            entries.remove(i);
        } else {
            entries[i].1 -= 1;
        }
        Some(MultiIndex { entries })
    }

    /// `α − β` when `β ≤ α` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut pairs = Vec::with_capacity(self.entries.len());
        for (k, m) in self.iter() {
            let b = other.get(k);
            if b > m {
                return None;
            }
            pairs.push((k, m - b));
        }
        if other.iter().any(|(k, _)| self.get(k) == 0) {
            return None;
        }
        Some(Self::from_pairs(pairs))
    }

    /// `α! = ∏ α_k!`, guarded against overflow for `|α| > 150`.
    pub fn factorial(&self) -> Result<f64> {
        let order = self.order();
        if order > FACTORIAL_GUARD {
            return Err(Error::FactorialOverflow {
                order,
                limit: FACTORIAL_GUARD,
            });
        }
        Ok(self.iter().map(|(_, m)| factorial(m)).product())
    }

    /// `|α|!`
    pub fn order_factorial(&self) -> Result<f64> {
        let order = self.order();
        if order > FACTORIAL_GUARD {
            return Err(Error::FactorialOverflow {
                order,
                limit: FACTORIAL_GUARD,
            });
        }
        Ok(factorial(order))
    }

    /// Non-decreasing tuple listing position `k` exactly `α_k` times.
    pub fn characteristic_set(&self) -> Result<Vec<usize>> {
        if self.is_zero() {
            return Err(Error::EmptyIndex);
        }
        Ok(self
            .iter()
            .flat_map(|(k, m)| std::iter::repeat_n(k, m as usize))
            .collect())
    }

    /// `∏_k b_k^{α_k}` with `b[k-1] = b_k`.
    pub fn power(&self, b: &[f64]) -> Result<f64> {
        let mut acc = 1.0;
        for (k, m) in self.iter() {
            let base = *b.get(k - 1).ok_or(Error::MissingCoordinate(k))?;
            if !(base > 0.0) {
                return Err(Error::NonPositiveBase {
                    position: k,
                    value: base,
                });
            }
            acc *= base.powi(m as i32);
        }
        Ok(acc)
    }

    /// `∏_k h_k^{α_k}` for arbitrary real `h` (the monomial `h^α`).
    pub fn monomial(&self, h: &[f64]) -> f64 {
        self.iter()
            .map(|(k, m)| h.get(k - 1).copied().unwrap_or(0.0).powi(m as i32))
            .product()
    }

    /// `(2ℕ)^{rα} = ∏_k (2k)^{r α_k}`.
    pub fn two_n_factor(&self, r: f64) -> f64 {
        self.iter()
            .map(|(k, m)| (2.0 * k as f64).powf(r * m as f64))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.order().cmp(&other.order()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            if a.0 != b.0 {
                return a.0.cmp(&b.0);
            }
            if a.1 != b.1 {
                return b.1.cmp(&a.1);
            }
        }
        self.entries.len().cmp(&other.entries.len())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `"0"` for `(0)`, otherwise the characteristic set joined by commas.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, m) in self.iter() {
            for _ in 0..m {
                if !first {
                    f.write_str(",")?;
                }
                write!(f, "{k}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut set = Vec::new();
        let mut prev = 0;
        for part in s.split(',') {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::ParseIndex(s.to_string()))?;
            if k == 0 || k < prev {
                return Err(Error::ParseIndex(s.to_string()));
            }
            prev = k;
            set.push(k);
        }
        Ok(Self::from_characteristic_set(&set))
    }
}

/// The finite slice `𝒥_{N,K}`: orders up to `max_order`, support in `1..=max_modes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationBox {
    pub max_order: u32,
    pub max_modes: usize,
}

impl TruncationBox {
    pub fn new(max_order: u32, max_modes: usize) -> Self {
        assert!(max_modes >= 1, "a truncation box needs at least one mode");
        Self {
            max_order,
            max_modes,
        }
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        alpha.order() <= self.max_order && alpha.max_position() <= self.max_modes
    }

    /// `binomial(N + K, K)`
    pub fn cardinality(&self) -> u128 {
        binomial(self.max_order as u64 + self.max_modes as u64, self.max_modes as u64)
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &TruncationBox) -> TruncationBox {
        TruncationBox::new(
            self.max_order.max(other.max_order),
            self.max_modes.max(other.max_modes),
        )
    }
}

/// All indices of the box in canonical order; the first element is `(0)`.
pub fn enumerate(tbox: TruncationBox) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(tbox.cardinality().min(1 << 24) as usize);
    for n in 0..=tbox.max_order {
        out.extend(enumerate_level(n, tbox.max_modes));
    }
    out
}

/// Indices with `|α| = n` and support in `1..=modes`, in canonical order.
pub fn enumerate_level(n: u32, modes: usize) -> Vec<MultiIndex> {
    let n = n as usize;
    if n == 0 {
        return vec![MultiIndex::zero()];
    }
    // Non-decreasing sequences over 1..=modes in lexicographic order are
    // exactly the characteristic sets in canonical order.
    let mut out = Vec::new();
    let mut seq = vec![1usize; n];
    loop {
        out.push(MultiIndex::from_characteristic_set(&seq));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if seq[i] < modes {
                let v = seq[i] + 1;
                for s in seq[i..].iter_mut() {
                    *s = v;
                }
                break;
            }
        }
    }
}

/// `n!` in double precision.
pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(d: &[u32]) -> MultiIndex {
        MultiIndex::from_dense(d)
    }

    /// Nested-loop enumeration over dense vectors, sorted independently.
    fn brute_force_box(n: u32, k: usize) -> Vec<Vec<u32>> {
        let mut all = Vec::new();
        let mut v = vec![0u32; k];
        loop {
            if v.iter().sum::<u32>() <= n {
                all.push(v.clone());
            }
            let mut i = 0;
            loop {
                if i == k {
                    // (grade ascending, then dense vector descending)
                    all.sort_by(|a, b| {
                        let (sa, sb) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
                        sa.cmp(&sb).then_with(|| b.cmp(a))
                    });
                    return all;
                }
                v[i] += 1;
                if v[i] > n {
                    v[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn enumerate_small_boxes() {
        assert_eq!(enumerate(TruncationBox::new(0, 3)), vec![MultiIndex::zero()]);
        assert_eq!(
            enumerate(TruncationBox::new(1, 2)),
            vec![MultiIndex::zero(), MultiIndex::unit(1), MultiIndex::unit(2)]
        );
        let list = enumerate(TruncationBox::new(2, 2));
        assert_eq!(list.len(), 6);
        let expected: Vec<MultiIndex> = brute_force_box(2, 2).iter().map(|d| dense(d)).collect();
        assert_eq!(list, expected);
    }

    #[test]
    fn enumerate_matches_nested_loops() {
        for n in 0..=4 {
            for k in 1..=4 {
                let list = enumerate(TruncationBox::new(n, k));
                let expected: Vec<MultiIndex> =
                    brute_force_box(n, k).iter().map(|d| dense(d)).collect();
                assert_eq!(list, expected, "N={n} K={k}");
                assert_eq!(list.len() as u128, TruncationBox::new(n, k).cardinality());
                assert!(list.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn add_and_sub_one() {
        let a = dense(&[1, 0, 2]);
        assert_eq!(MultiIndex::zero().add(&a), a);
        assert_eq!(
            MultiIndex::unit(1).add(&MultiIndex::unit(1)),
            MultiIndex::scaled_unit(2, 1)
        );
        assert_eq!(a.add(&dense(&[0, 1, 1])), dense(&[1, 1, 3]));

        assert_eq!(MultiIndex::scaled_unit(2, 1).sub_one(1), Some(MultiIndex::unit(1)));
        assert_eq!(MultiIndex::unit(2).sub_one(1), None);
        assert_eq!(a.sub_one(3), Some(dense(&[1, 0, 1])));
        assert_eq!(a.add_one(2), dense(&[1, 1, 2]));
        assert_eq!(dense(&[1, 1, 3]).checked_sub(&a), Some(dense(&[0, 1, 1])));
        assert_eq!(a.checked_sub(&MultiIndex::unit(2)), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(MultiIndex::zero().factorial().unwrap(), 1.0);
        assert_eq!(MultiIndex::scaled_unit(3, 1).factorial().unwrap(), 6.0);
        assert_eq!(dense(&[1, 0, 2]).factorial().unwrap(), 2.0);
        assert!(matches!(
            MultiIndex::scaled_unit(151, 1).factorial(),
            Err(Error::FactorialOverflow { .. })
        ));
    }

    #[test]
    fn characteristic_sets() {
        let a = dense(&[1, 0, 2, 0, 0, 1, 0, 3]);
        assert_eq!(a.characteristic_set().unwrap(), vec![1, 3, 3, 6, 8, 8, 8]);
        assert_eq!(MultiIndex::unit(5).characteristic_set().unwrap(), vec![5]);
        assert_eq!(MultiIndex::scaled_unit(3, 2).characteristic_set().unwrap(), vec![2, 2, 2]);
        assert_eq!(MultiIndex::zero().characteristic_set(), Err(Error::EmptyIndex));
        assert_eq!(a.to_string(), "1,3,3,6,8,8,8");
        assert_eq!("1,3,3,6,8,8,8".parse::<MultiIndex>().unwrap(), a);
        assert_eq!("0".parse::<MultiIndex>().unwrap(), MultiIndex::zero());
        assert!("3,1".parse::<MultiIndex>().is_err());
        assert!("x".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(MultiIndex::zero().power(&[5.0]).unwrap(), 1.0);
        assert_eq!(dense(&[2, 1]).power(&[2.0, 3.0]).unwrap(), 12.0);
        let a = dense(&[1, 0, 2, 0, 0, 1, 0, 3]);
        let b: Vec<f64> = (1..=8).map(|k| k as f64).collect();
        let direct = a.power(&b).unwrap();
        let via_set: f64 = a
            .characteristic_set()
            .unwrap()
            .iter()
            .map(|&k| b[k - 1])
            .product();
        assert_eq!(direct, 27648.0);
        assert_eq!(via_set, 27648.0);
        assert!(matches!(
            MultiIndex::unit(1).power(&[0.0]),
            Err(Error::NonPositiveBase { .. })
        ));
        assert!(matches!(MultiIndex::unit(3).power(&[1.0]), Err(Error::MissingCoordinate(3))));
    }

    #[test]
    fn two_n() {
        assert_eq!(MultiIndex::zero().two_n_factor(1.7), 1.0);
        assert_eq!(MultiIndex::unit(2).two_n_factor(2.0), 16.0);
        assert_eq!(MultiIndex::scaled_unit(2, 1).two_n_factor(-1.0), 0.25);
    }

    #[test]
    fn houz_inequality_small() {
        for a in enumerate(TruncationBox::new(8, 8)) {
            let lhs = a.order_factorial().unwrap();
            let rhs = a.factorial().unwrap() * a.two_n_factor(2.0);
            assert!(lhs <= rhs, "{a}");
        }
    }

    #[test]
    fn two_n_series_monotone_and_stable() {
        let sum = |r: f64, n: u32, k: usize| -> f64 {
            enumerate(TruncationBox::new(n, k))
                .iter()
                .map(|a| a.two_n_factor(-r))
                .sum()
        };
        let rs = [1.5, 2.0, 3.0, 4.0];
        for w in rs.windows(2) {
            assert!(sum(w[0], 6, 6) >= sum(w[1], 6, 6));
        }
        // r = 3: growing N = K from 8 to 10 leaves three significant digits.
        let s8 = sum(3.0, 8, 8);
        let s10 = sum(3.0, 10, 10);
        assert!((s10 - s8).abs() / s10 < 5e-3, "{s8} {s10}");
    }
}
