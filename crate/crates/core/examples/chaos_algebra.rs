//! Wick product, Malliavin derivative and Skorokhod integral on small
//! scalar series.

use wiener_chaos::chaos::{malliavin, skorokhod, skorokhod_via_wick, wick_product, ChaosSeries};
use wiener_chaos::multiindex::{MultiIndex, TruncationBox};

fn show(label: &str, s: &ChaosSeries) {
    let terms: Vec<String> = s
        .iter()
        .map(|(a, v)| format!("{:+.6}·ξ[{a}]", v[0].re))
        .collect();
    println!("{label:<12} {}", terms.join(" "));
}

fn main() -> wiener_chaos::Result<()> {
    let tbox = TruncationBox::new(6, 3);
    let e1 = MultiIndex::unit(1);
    let e2 = MultiIndex::unit(2);

    // ξ_{(1)} ◇ ξ_{(1)} = √2 ξ_{(2)}
    let x = ChaosSeries::scalar_basis(tbox, e1.clone())?;
    show("x◇x", &wick_product(&x, &x)?);

    let f = ChaosSeries::from_real(
        tbox,
        [
            (MultiIndex::zero(), 1.0),
            (e1.clone(), 0.5),
            (e1.add(&e2), -0.25),
            (MultiIndex::scaled_unit(3, 3), 0.1),
        ],
    )?;
    show("f", &f);
    show("f◇f", &wick_product(&f, &f)?);

    let df = malliavin(&f, 3);
    for k in 1..=3 {
        show(&format!("(Df)_{k}"), &df.component(k));
    }

    // δ(Dξ_α) = |α| ξ_α
    let xi = ChaosSeries::scalar_basis(tbox, MultiIndex::from_characteristic_set(&[1, 2, 2]))?;
    show("ξ", &xi);
    show("δDξ", &skorokhod(&malliavin(&xi, 3)));
    show("δDξ (wick)", &skorokhod_via_wick(&malliavin(&xi, 3))?);
    Ok(())
}
