//! Pairing the chaos solution with `ℰ_h` gives the solution of the
//! deterministic equation perturbed in direction `h`.

use wiener_chaos::chaos::DirectionH;
use wiener_chaos::config::Scenario;
use wiener_chaos::oracle::solve_deterministic_h;
use wiener_chaos::propagator::{solve, u_h_pairing, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    for name in ["wick_ode", "heat_time_white", "wick_heat_gradient"] {
        let scenario = Scenario::from_path(format!("{dir}/{name}.json"))?;
        let problem = scenario.problem()?;
        let sol = solve(&problem, &SolveOptions::default())?;
        for scale in [0.1, 0.3] {
            let h = DirectionH::new(vec![scale / (problem.tbox.max_modes as f64).sqrt(); problem.tbox.max_modes]);
            let chaos = u_h_pairing(&sol, &h)?;
            let exact = solve_deterministic_h(&problem, &h)?;
            let worst = (0..=problem.nt)
                .map(|j| {
                    let d: Vec<_> = chaos.trajectory[j].iter().zip(&exact[j]).map(|(a, b)| a - b).collect();
                    sol.space().norm_sq(&d).sqrt() / sol.space().norm_sq(&exact[j]).sqrt()
                })
                .fold(0.0, f64::max);
            println!("{name:<20} ‖h‖ = {scale}: max relative gap {worst:.2e}, top-level tail {:.2e}", chaos.tail[problem.nt]);
        }
    }
    Ok(())
}
