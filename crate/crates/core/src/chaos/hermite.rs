use crate::error::{Error, Result};
use crate::multiindex::{factorial, MultiIndex};

pub const MAX_HERMITE_ORDER: u32 = 60;

/// Probabilists' Hermite polynomial `H_n(x)` by the forward recurrence
/// `H_{n+1} = x H_n − n H_{n−1}`.
pub fn hermite(n: u32, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(Error::HermiteOrder(n));
    }
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `ξ_α(z) = ∏_k H_{α_k}(z_k) / √(α_k!)`, with `z[k-1] = z_k`.
pub fn xi_eval(alpha: &MultiIndex, z: &[f64]) -> Result<f64> {
    let mut acc = 1.0;
    for (k, m) in alpha.iter() {
        let zk = *z.get(k - 1).ok_or(Error::MissingCoordinate(k))?;
        acc *= hermite(m, zk)? / factorial(m).sqrt();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, 3.3).unwrap(), 1.0);
        assert_eq!(hermite(1, -0.4).unwrap(), -0.4);
        assert!((hermite(2, 1.5).unwrap() - 1.25).abs() < 1e-15);
        assert!((hermite(3, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(hermite(61, 0.0).is_err());
    }

    #[test]
    fn matches_explicit_polynomials() {
        // H_4 = x⁴ − 6x² + 3, H_5 = x⁵ − 10x³ + 15x
        for &x in &[-2.1f64, -0.3, 0.0, 0.7, 1.9] {
            let h4 = x * x * x * x - 6.0 * x * x + 3.0;
            let h5 = x.powi(5) - 10.0 * x.powi(3) + 15.0 * x;
            assert!((hermite(4, x).unwrap() - h4).abs() < 1e-12);
            assert!((hermite(5, x).unwrap() - h5).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_identity() {
        // H_n'(x) = n H_{n−1}(x), checked by central differences.
        let h = 1e-5;
        for n in 1..10u32 {
            for &x in &[-1.3, 0.2, 1.1] {
                let fd = (hermite(n, x + h).unwrap() - hermite(n, x - h).unwrap()) / (2.0 * h);
                let exact = n as f64 * hermite(n - 1, x).unwrap();
                assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn basis_values() {
        assert_eq!(xi_eval(&MultiIndex::zero(), &[]).unwrap(), 1.0);
        assert!((xi_eval(&MultiIndex::unit(1), &[0.7]).unwrap() - 0.7).abs() < 1e-15);
        assert!(xi_eval(&MultiIndex::scaled_unit(2, 1), &[1.0]).unwrap().abs() < 1e-15);
        assert!(matches!(
            xi_eval(&MultiIndex::unit(3), &[0.1, 0.2]),
            Err(Error::MissingCoordinate(3))
        ));
    }
}
