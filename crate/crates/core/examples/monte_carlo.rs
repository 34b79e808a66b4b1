//! Euler–Maruyama against the chaos solution for `du = u_xx dt + σ u_x dW`.

use wiener_chaos::config::Scenario;
use wiener_chaos::multiindex::MultiIndex;
use wiener_chaos::oracle::mc_ito;
use wiener_chaos::propagator::{solve, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let paths: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let scenario = Scenario::from_path(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/heat_gradient_noise.json"))?;
    let problem = scenario.problem()?;
    let sol = solve(&problem, &SolveOptions::default())?;

    let mc = mc_ito(&problem, paths, problem.horizon / 4096.0, scenario.seed)?;
    let last = mc.times.len() - 1;
    let u0 = problem.u0.coeff(&MultiIndex::zero());
    let mean = sol.space().inner(&sol.mean()[problem.nt], &u0).re / sol.space().norm_sq(&u0).sqrt();
    let m2 = sol.second_moment_norm(problem.nt);

    println!("{paths} paths, {} steps", mc.steps);
    println!("mean: chaos {mean:.6}  mc {:.6} ± {:.1e}", mc.mean[last], mc.mean_se[last]);
    println!("m2:   chaos {m2:.6}  mc {:.6} ± {:.1e}", mc.m2[last], mc.m2_se[last]);
    println!("deviation in standard errors: {:.2}, {:.2}",
        (mean - mc.mean[last]).abs() / mc.mean_se[last],
        (m2 - mc.m2[last]).abs() / mc.m2_se[last]);
    Ok(())
}
