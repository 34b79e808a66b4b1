use proptest::prelude::*;

use wiener_chaos::chaos::{
    malliavin, skorokhod, wick_product, wick_product_with, BoxPolicy, ChaosSeries, Coeff, CoefficientSpace,
    UChaosSeries,
};
use wiener_chaos::multiindex::{binomial, enumerate, MultiIndex, TruncationBox};

fn series(tbox: TruncationBox, coeffs: &[f64]) -> ChaosSeries {
    let pairs = enumerate(tbox).into_iter().zip(coeffs.iter().copied()).filter(|(_, c)| *c != 0.0);
    ChaosSeries::from_real(tbox, pairs).unwrap()
}

fn coeff_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), -1.0..1.0f64], len)
}

proptest! {
    #[test]
    fn index_encoding_round_trips(dense in prop::collection::vec(0u32..4, 0..6)) {
        let a = MultiIndex::from_dense(&dense);
        let back: MultiIndex = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn wick_is_commutative_and_bilinear(
        f in coeff_vec(10), g in coeff_vec(10), h in coeff_vec(10), s in -2.0..2.0f64,
    ) {
        let tbox = TruncationBox::new(2, 3);
        let (f, g, h) = (series(tbox, &f), series(tbox, &g), series(tbox, &h));
        let fg = wick_product(&f, &g).unwrap();
        prop_assert!(fg.max_abs_diff(&wick_product(&g, &f).unwrap()) < 1e-14);

        let lhs = wick_product(&f.axpy(Coeff::new(s, 0.0), &h).unwrap(), &g).unwrap();
        let rhs = fg.axpy(Coeff::new(s, 0.0), &wick_product(&h, &g).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn wick_is_associative(f in coeff_vec(6), g in coeff_vec(6), h in coeff_vec(6)) {
        let tbox = TruncationBox::new(2, 2);
        let (f, g, h) = (series(tbox, &f), series(tbox, &g), series(tbox, &h));
        let left = wick_product(&wick_product(&f, &g).unwrap(), &h).unwrap();
        let right = wick_product(&f, &wick_product(&g, &h).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-13);
    }

    #[test]
    fn truncated_wick_reports_what_it_drops(f in coeff_vec(10), g in coeff_vec(10)) {
        let tbox = TruncationBox::new(2, 3);
        let (f, g) = (series(tbox, &f), series(tbox, &g));
        let full = wick_product(&f, &g).unwrap();
        let cut = wick_product_with(&f, &g, BoxPolicy::Truncate).unwrap();
        let dropped: f64 = full.iter().filter(|(a, _)| a.order() > 2).map(|(_, v)| v[0].norm_sqr()).sum();
        prop_assert!((cut.dropped_norm_sq - dropped).abs() < 1e-12);
        prop_assert!(cut.series.iter().all(|(a, _)| a.order() <= 2));
    }

    /// `D_k δ(u) − δ(D_k u) = u_k`
    #[test]
    fn commutation_relation(u1 in coeff_vec(10), u2 in coeff_vec(10)) {
        let tbox = TruncationBox::new(2, 3);
        let mut u = UChaosSeries::new(CoefficientSpace::scalar(), tbox, 2);
        for (k, cs) in [(1, &u1), (2, &u2)] {
            for (a, c) in enumerate(tbox).into_iter().zip(cs.iter()) {
                if *c != 0.0 {
                    u.add_to(k, a, &[Coeff::new(*c, 0.0)]).unwrap();
                }
            }
        }
        let d_delta = malliavin(&skorokhod(&u), 3);
        for k in 1..=2 {
            let mut dk_u = UChaosSeries::new(CoefficientSpace::scalar(), TruncationBox::new(1, 3), 2);
            for j in 1..=2 {
                for (a, v) in malliavin(&u.component(j), 3).component(k).iter() {
                    dk_u.add_to(j, a.clone(), v).unwrap();
                }
            }
            let lhs = d_delta.component(k).axpy(Coeff::new(-1.0, 0.0), &skorokhod(&dk_u)).unwrap();
            let expected = u.component(k);
            for a in enumerate(TruncationBox::new(3, 3)) {
                prop_assert!((lhs.scalar_coeff(&a) - expected.scalar_coeff(&a)).norm() < 1e-12, "k={} α={}", k, a);
            }
        }
    }
}

#[test]
fn enumeration_is_sorted_and_complete() {
    for (n, k) in [(0, 3), (3, 1), (4, 4), (6, 3)] {
        let all = enumerate(TruncationBox::new(n, k));
        assert_eq!(all.len() as u128, binomial((n as usize + k) as u64, k as u64));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.windows(2).all(|w| w[0].order() <= w[1].order()));
    }
}
