//! Weighted chaos norms `Σ q^{2rα}‖η_α‖²/|α|!`, the same norm computed by
//! order through `‖E_α‖² = |α|!α!`, and the stochastic exponential.

use wiener_chaos::chaos::{
    dual_norm_sq, e_alpha_norm_sq, order_energy, smallness_radius, stoch_exp, weighted_norm_sq, ChaosSeries, DirectionH,
    WeightSequence,
};
use wiener_chaos::multiindex::{enumerate, factorial, TruncationBox};

fn main() -> wiener_chaos::Result<()> {
    let tbox = TruncationBox::new(5, 3);
    let eta = ChaosSeries::from_real(
        tbox,
        enumerate(tbox).into_iter().enumerate().map(|(i, a)| (a, 1.0 / (1.0 + i as f64))),
    )?;

    let q = WeightSequence::constant(1.0)?;
    let by_order = order_energy(&eta);
    println!("norm with q ≡ 1, r = 0:   {:.15}", weighted_norm_sq(&eta, &q, 0.0));
    let grouped: f64 = by_order.iter().enumerate().map(|(n, e)| e / factorial(n as u32)).sum();
    println!("Σ_n order_energy / n!:    {grouped:.15}");

    for r in [-2.0, -1.0, 0.0, 1.0] {
        let q = WeightSequence::derived(vec![0.5, 1.0, 2.0])?;
        println!("r = {r:+.1}  ‖η‖²_(Q,r) = {:.6e}", weighted_norm_sq(&eta, &q, r));
    }

    for a in enumerate(TruncationBox::new(3, 2)).iter().skip(1).take(5) {
        println!("‖E_[{a}]‖² = {}", e_alpha_norm_sq(a)?);
    }

    // ‖ℰ_h‖² in the dual norm is Σ (|α|!/α!) h^{2α} = 1/(1 − ‖h‖²) on one mode.
    for hn in [0.5, 0.7, 1.2] {
        let h = DirectionH::new(vec![hn]);
        let e = stoch_exp(&h, TruncationBox::new(60, 1))?;
        let sum = dual_norm_sq(&e, &WeightSequence::constant(1.0)?, 0.0)?;
        let target = if hn < 1.0 { format!("{:.6}", 1.0 / (1.0 - hn * hn)) } else { "∞".into() };
        println!("‖h‖ = {hn}: Σ_α h^(2α)|α|!/α! to N = 60 gives {sum:.6e} (limit {target})");
    }
    let h = DirectionH::new(vec![0.1, 0.05]);
    let q = WeightSequence::derived(vec![])?;
    println!("smallness exponent of h under Q°: {:?}", smallness_radius(&h, &q));
    Ok(())
}
