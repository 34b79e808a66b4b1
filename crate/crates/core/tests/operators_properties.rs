use std::f64::consts::PI;

use nalgebra::DMatrix;

use wiener_chaos::chaos::{ChaosSeries, Coeff, CVec};
use wiener_chaos::multiindex::TruncationBox;
use wiener_chaos::operators::{
    cosine_mode, estimate_ck, trapezoid_weights, CkOptions, EvolutionProblem, NoiseModel, NoiseOperatorFamily,
    OperatorFamily, PeriodicGrid, SpatialAction, Stepper, StepperKind,
};

fn c(x: f64) -> Coeff {
    Coeff::new(x, 0.0)
}

fn max_gap(a: &[Coeff], b: &[Coeff]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn multiplier_semigroup_composes() {
    let space = PeriodicGrid::new(2.0 * PI, 8).fourier_space();
    let a = OperatorFamily::multiplier(space, 0.7, 0.3, -0.1).unwrap();
    let v: CVec = (0..8).map(|j| Coeff::new((j as f64).cos(), 0.1 * j as f64)).collect();
    let direct = a.semigroup_apply(0.9, 0.1, &v).unwrap();
    let mid = a.semigroup_apply(0.4, 0.1, &v).unwrap();
    let composed = a.semigroup_apply(0.9, 0.4, &mid).unwrap();
    assert!(max_gap(&direct, &composed) < 1e-14);
    assert_eq!(a.semigroup_apply(0.3, 0.3, &v).unwrap(), v);
    assert!(a.semigroup_apply(0.1, 0.3, &v).is_err());
}

#[test]
fn matrix_semigroup_composes() {
    let space = PeriodicGrid::new(2.0 * PI, 4).fourier_space();
    let m = DMatrix::from_fn(4, 4, |i, j| {
        let d = if i == j { -1.0 - i as f64 } else { 0.0 };
        Coeff::new(d + 0.2 * ((i + 2 * j) as f64).sin(), 0.1 * (i as f64 - j as f64))
    });
    let a = OperatorFamily::matrix(space, m).unwrap();
    let v: CVec = vec![c(1.0), c(-0.5), Coeff::new(0.0, 1.0), c(2.0)];
    let direct = a.semigroup_apply(1.5, 0.0, &v).unwrap();
    let composed = a
        .semigroup_apply(1.5, 0.6, &a.semigroup_apply(0.6, 0.0, &v).unwrap())
        .unwrap();
    assert!(max_gap(&direct, &composed) < 1e-10);
}

#[test]
fn cosine_modes_are_orthonormal() {
    let (horizon, nt) = (1.7, 4096);
    let w = trapezoid_weights(nt, horizon / nt as f64);
    let ts: Vec<f64> = (0..=nt).map(|j| j as f64 * horizon / nt as f64).collect();
    for k in 1..=8 {
        for j in 1..=8 {
            let g: f64 = ts
                .iter()
                .zip(&w)
                .map(|(&t, wt)| wt * cosine_mode(k, t, horizon) * cosine_mode(j, t, horizon))
                .sum();
            let expected = if k == j { 1.0 } else { 0.0 };
            assert!((g - expected).abs() < 1e-8, "k={k} j={j} gram={g}");
        }
    }
}

fn gradient_heat(sigma: f64, nt: usize) -> EvolutionProblem {
    let grid = PeriodicGrid::new(2.0 * PI, 16);
    let space = grid.fourier_space();
    let tbox = TruncationBox::new(1, 2);
    EvolutionProblem::new(
        OperatorFamily::heat(space.clone(), 1.0).unwrap(),
        NoiseOperatorFamily::uniform(
            NoiseModel::time_white(1.0, 2),
            SpatialAction::derivative(&space, sigma, 1).unwrap(),
        ),
        ChaosSeries::deterministic(space, tbox, grid.forward_real(&grid.gaussian_bump(1.0))).unwrap(),
        1.0,
        nt,
        tbox,
    )
    .unwrap()
}

#[test]
fn ck_grows_with_noise_strength() {
    let opts = CkOptions::default();
    let zero = estimate_ck(&gradient_heat(0.0, 128), 1, opts).unwrap();
    assert!(zero.value.abs() < 1e-14, "C_1 = {} without noise", zero.value);
    let values: Vec<f64> = [0.25, 0.5, 1.0]
        .iter()
        .map(|&s| estimate_ck(&gradient_heat(s, 128), 1, opts).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
    // M_k is linear in sigma, so C_k is too.
    assert!((values[2] / values[0] - 4.0).abs() < 1e-6, "{values:?}");
}

#[test]
fn ck_is_stable_under_refinement() {
    let opts = CkOptions::default();
    let coarse = estimate_ck(&gradient_heat(1.0, 128), 2, opts).unwrap().value;
    let fine = estimate_ck(&gradient_heat(1.0, 512), 2, opts).unwrap().value;
    assert!(((coarse - fine) / fine).abs() < 0.05, "coarse {coarse}, fine {fine}");
}

fn stepper_error(kind: StepperKind, nt: usize) -> f64 {
    // u' = -u + sin 3t, u(0) = 1
    let a = OperatorFamily::scalar(-1.0);
    let st = Stepper::new(&a, 1.0, nt, kind).unwrap();
    let g: Vec<CVec> = st.times().iter().map(|t| vec![c((3.0 * t).sin())]).collect();
    let u = st.integrate(&[c(1.0)], Some(&g)).unwrap();
    let exact = |t: f64| ((3.0 * t).sin() - 3.0 * (3.0 * t).cos()) / 10.0 + 1.3 * (-t).exp();
    st.times()
        .iter()
        .zip(&u)
        .map(|(t, v)| (v[0].re - exact(*t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn stepper_orders() {
    for (kind, order) in [(StepperKind::ExpTrapezoid, 2.0), (StepperKind::ExpLagrange4, 4.0)] {
        let e1 = stepper_error(kind, 32);
        let e2 = stepper_error(kind, 64);
        let observed = (e1 / e2).log2();
        assert!((observed - order).abs() < 0.3, "{kind:?}: observed order {observed}");
    }
}
