//! `u_t = u_xx + u_x ◇ ξ` with one Gaussian `ξ`: the chaos second moment of
//! mode `y` is `|û₀|² e^{y²t(t−2)}`, finite in `y` only while `t < 2`.

use wiener_chaos::oracle::{wick_space_noise_integrability, wick_space_noise_norm, wick_space_noise_series};

fn main() {
    let u0 = wiener_chaos::chaos::Coeff::new(1.0, 0.0);
    for t in [0.5, 1.0, 2.0, 2.5] {
        println!("t = {t}: {}", wick_space_noise_integrability(t).label());
        for y in [0.0, 1.0, 2.0, 4.0] {
            println!(
                "  y = {y}: closed form {:.6e}, 40-term sum {:.6e}",
                wick_space_noise_norm(t, y, u0),
                wick_space_noise_series(t, y, u0, 40)
            );
        }
    }

    let scenario = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/wick_heat_gradient.json");
    let out = std::env::temp_dir().join("wiener-chaos-wick-heat");
    let args = wiener_chaos::cli::RunArgs::new(scenario, &out);
    match wiener_chaos::cli::run_verify(&args) {
        Ok(o) => println!("{} (reports in {})", o.summary, out.display()),
        Err(e) => eprintln!("{e}"),
    }
}
