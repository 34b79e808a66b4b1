//! `du = u_xx dt + σ u_xx dW`. The per-mode second moment grows like
//! `e^{σ²y⁴t}` and the solution has no square-integrable version, yet the
//! weighted norm with `Q°`, `r° = −2.5` stays finite and stable in `N`.

use wiener_chaos::chaos::ChaosSeries;
use wiener_chaos::multiindex::TruncationBox;
use wiener_chaos::operators::{
    EvolutionProblem, NoiseModel, NoiseOperatorFamily, OperatorFamily, PeriodicGrid, SpatialAction,
};
use wiener_chaos::propagator::{mean_and_moments, solve, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let (sigma, t) = (0.5, 1.0);
    let grid = PeriodicGrid::new(8.0 * std::f64::consts::PI, 64);
    let space = grid.fourier_space();
    let u0 = grid.forward_real(&grid.gaussian_bump(2.0));
    let ys = space.wavenumbers().unwrap().to_vec();

    let mut previous = None;
    for n in [6u32, 8] {
        let tbox = TruncationBox::new(n, 1);
        let problem = EvolutionProblem::new(
            OperatorFamily::heat(space.clone(), 1.0)?,
            NoiseOperatorFamily::uniform(NoiseModel::time_white(t, 1), SpatialAction::derivative(&space, sigma, 2)?),
            ChaosSeries::deterministic(space.clone(), tbox, u0.clone())?,
            t,
            1024,
            tbox,
        )?;
        let sol = solve(&problem, &SolveOptions::default())?;
        let m = mean_and_moments(&sol);
        let mean = &sol.mean()[problem.nt];
        println!("N = {n}");
        println!("  {:>6} {:>14} {:>14}", "y", "E|û|²/|Eû|²", "e^(σ²y⁴t)");
        for i in (0..12).step_by(2) {
            let ratio = m.second_moment[problem.nt][i] / mean[i].norm_sqr();
            println!("  {:>6.2} {:>14.6e} {:>14.6e}", ys[i], ratio, (sigma * sigma * ys[i].powi(4) * t).exp());
        }
        let w = sol.weighted_norm_at(problem.nt);
        println!("  weighted norm at T: {w:.10e}, C_1 = {:.4}", sol.ck()[0].value);
        if let Some(p) = previous {
            println!("  relative change from N = 6: {:.2e}", (w - p) / p);
        }
        previous = Some(w);
    }
    Ok(())
}
