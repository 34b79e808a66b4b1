//! Multiplicative space-time noise `σ u Ẇ(t, x)` expanded in products of
//! cosine time modes and trigonometric space modes.

use wiener_chaos::chaos::ChaosSeries;
use wiener_chaos::multiindex::TruncationBox;
use wiener_chaos::operators::{
    estimate_all_ck, CkOptions, EvolutionProblem, NoiseModel, NoiseOperatorFamily, OperatorFamily, PeriodicGrid,
};
use wiener_chaos::propagator::{solution_norm_sq_by_order, solve, SolveOptions};

fn main() -> wiener_chaos::Result<()> {
    let grid = PeriodicGrid::new(2.0 * std::f64::consts::PI, 16);
    let space = grid.fourier_space();
    let noise = NoiseModel::space_time(1.0, grid.clone(), 2, 3);
    for k in 1..=noise.mode_count() {
        let (i, j) = noise.split(k)?;
        println!("mode {k}: time mode {i:?}, space mode {j:?}");
    }
    let tbox = TruncationBox::new(3, noise.mode_count());
    let problem = EvolutionProblem::new(
        OperatorFamily::heat(space.clone(), 1.0)?,
        NoiseOperatorFamily::space_multiplication(noise, &grid, 0.5, 0)?,
        ChaosSeries::deterministic(space, tbox, grid.forward_real(&grid.gaussian_bump(1.0)))?,
        1.0,
        200,
        tbox,
    )?;
    for c in estimate_all_ck(&problem, CkOptions::default())? {
        println!("C_k ≈ {:.5} ({} iterations)", c.value, c.iterations);
    }
    let sol = solve(&problem, &SolveOptions::default())?;
    for (n, e) in solution_norm_sq_by_order(&sol, sol.weights(), sol.r_exponent()).iter().enumerate() {
        println!("level {n}: weighted energy {e:.6e}");
    }
    println!("E‖u(T)‖² = {:.6}", sol.second_moment_norm(problem.nt));
    Ok(())
}
