//! `du = u_xx dt + σ u_x dW`: the second moment of mode `y` is
//! `|û₀|² exp((σ² − 2)y²t)`, integrable in `y` iff `σ² ≤ 2`.
//! The propagator reproduces it mode by mode.

use wiener_chaos::chaos::ChaosSeries;
use wiener_chaos::multiindex::TruncationBox;
use wiener_chaos::operators::{
    EvolutionProblem, NoiseModel, NoiseOperatorFamily, OperatorFamily, PeriodicGrid, SpatialAction,
};
use wiener_chaos::oracle::{closed_form_moment, moment_integrability};
use wiener_chaos::propagator::{mean_and_moments, solve, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let grid = PeriodicGrid::new(2.0 * std::f64::consts::PI, 16);
    let space = grid.fourier_space();
    let t = 0.5;
    let tbox = TruncationBox::new(8, 1);
    let u0 = grid.forward_real(&grid.gaussian_bump(1.0));

    for sigma in [1.0, 1.2, 1.4, 2f64.sqrt(), 1.6] {
        let problem = EvolutionProblem::new(
            OperatorFamily::heat(space.clone(), 1.0)?,
            NoiseOperatorFamily::uniform(NoiseModel::time_white(t, 1), SpatialAction::derivative(&space, sigma, 1)?),
            ChaosSeries::deterministic(space.clone(), tbox, u0.clone())?,
            t,
            400,
            tbox,
        )?;
        let sol = solve(&problem, &SolveOptions::default().without_ck())?;
        let m = mean_and_moments(&sol);
        print!("σ = {sigma:.4} ({:>14}):", moment_integrability(1, sigma).label());
        for (i, y) in space.wavenumbers().unwrap().iter().enumerate().take(4) {
            let exact = closed_form_moment(1, sigma, *y, t, u0[i]);
            let chaos = m.second_moment[problem.nt][i];
            print!("  y={y}: {:+.2e}", chaos / exact - 1.0);
        }
        println!();
    }
    Ok(())
}
