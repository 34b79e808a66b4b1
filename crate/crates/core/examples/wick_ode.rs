//! The scalar Wick equation `u' = u + u ◇ ξ`, `u(0) = 1`, driven by a single
//! standard Gaussian `ξ`. Its chaos coefficients are `eᵗ tⁿ/√n!`.
//!
//! Run with `cargo run --release --example wick_ode`.

use wiener_chaos::multiindex::{factorial, MultiIndex};
use wiener_chaos::operators::EvolutionProblem;
use wiener_chaos::propagator::{solve, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let problem = EvolutionProblem::wick_ode(2.0, 2048, 8)?;
    let sol = solve(&problem, &SolveOptions::default())?;

    println!("{:>4} {:>6} {:>22} {:>22} {:>10}", "n", "t", "u_n(t)", "e^t t^n/sqrt(n!)", "rel err");
    for &t in &[0.5, 1.0, 2.0] {
        let j = sol.node(t);
        for n in 0..=8u32 {
            let exact = t.exp() * t.powi(n as i32) / factorial(n).sqrt();
            let got = sol.coefficient(&MultiIndex::scaled_unit(n, 1), j)[0].re;
            println!("{n:>4} {t:>6.2} {got:>22.15e} {exact:>22.15e} {:>10.2e}", (got - exact).abs() / exact);
        }
    }
    println!("mean at T: {:.15} (e^2 = {:.15})", sol.mean()[problem.nt][0].re, 2f64.exp());
    Ok(())
}
