//! Scenario runners behind the `wiener-chaos` binary.
//!
//! Each runner reads a JSON scenario, writes CSV files into an output
//! directory and returns a one-line summary. [`exit_code`] maps the result
//! to the process status: 0 pass, 1 validation error, 2 verification
//! failure, 3 resource cap.

use std::path::{Path, PathBuf};

use crate::chaos::{CVec, Coeff};
use crate::config::{Equation, NoiseKind, Scenario, WeightChoice};
use crate::error::{Error, Result};
use crate::io::{write_csv, Field};
use crate::multiindex::{factorial, MultiIndex};
use crate::operators::Forcing;
use crate::oracle::{
    closed_form_moment, mc_ito, output_steps, solve_deterministic_h, wick_space_noise_norm, McResult,
};
use crate::propagator::{
    kv_recursion, mean_and_moments, solution_norm_sq, solution_norm_sq_by_order, solve, u_h_pairing,
    PropagatorSolution, SolveOptions,
};

/// Largest relative KV deviation accepted by `kv`.
pub const KV_TOLERANCE: f64 = 1e-8;
/// Relative tolerance of the `h`-pairing comparison, before the tail.
pub const PAIRING_TOLERANCE: f64 = 1e-6;
/// Relative tolerance of closed-form moment comparisons.
pub const MOMENT_TOLERANCE: f64 = 0.02;
/// Relative tolerance of mean and coefficient comparisons.
pub const MEAN_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RunArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub order: Option<u32>,
    pub modes: Option<usize>,
}

impl RunArgs {
    pub fn new(config: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            config: config.into(),
            out: out.into(),
            seed: None,
            order: None,
            modes: None,
        }
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::from_path(&self.config)?.with_overrides(self.seed, self.order, self.modes)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub summary: String,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    Kv { levels: usize },
    Norms,
}

pub fn run(cmd: Command, args: &RunArgs) -> Result<Outcome> {
    match cmd {
        Command::Solve => run_solve(args),
        Command::Verify => run_verify(args),
        Command::Kv { levels } => run_kv(args, levels),
        Command::Norms => run_norms(args),
    }
}

pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => 2,
        Err(Error::CapExceeded { .. }) => 3,
        Err(Error::Mismatch { .. }) => 2,
        Err(_) => 1,
    }
}

fn solve_options(s: &Scenario) -> SolveOptions {
    SolveOptions {
        r_exponent: s.r_exponent,
        constant_weight: match s.weights {
            WeightChoice::Constant(q) => Some(q),
            WeightChoice::Derived => None,
        },
        ..SolveOptions::default()
    }
}

fn prepare(args: &RunArgs) -> Result<(Scenario, PropagatorSolution)> {
    let scenario = args.scenario()?;
    let problem = scenario.problem()?;
    let sol = solve(&problem, &solve_options(&scenario))?;
    std::fs::create_dir_all(&args.out)?;
    Ok((scenario, sol))
}

fn out(args: &RunArgs, name: &str) -> PathBuf {
    args.out.join(name)
}

/// Solves the scenario and writes `coeffs.csv` (at up to 33 output
/// nodes), `stats.csv` and `weights.csv`.
pub fn run_solve(args: &RunArgs) -> Result<Outcome> {
    let (scenario, sol) = prepare(args)?;
    let nodes = output_steps(sol.problem().nt);
    let times = sol.times();

    let mut coeffs = Vec::new();
    for (alpha, tr) in sol.iter() {
        for &j in &nodes {
            for (i, c) in tr[j].iter().enumerate() {
                coeffs.push(vec![alpha.to_string().into(), times[j].into(), i.into(), c.re.into(), c.im.into()]);
            }
        }
    }
    write_csv(&out(args, "coeffs.csv"), &["alpha", "t", "component", "re", "im"], &coeffs)?;

    let stats: Vec<Vec<Field>> = (0..times.len())
        .map(|j| {
            vec![
                times[j].into(),
                sol.mean_norm(j).into(),
                sol.second_moment_norm(j).sqrt().into(),
                sol.weighted_norm_at(j).sqrt().into(),
            ]
        })
        .collect();
    write_csv(
        &out(args, "stats.csv"),
        &["t", "mean_norm", "second_moment_norm", "weighted_norm"],
        &stats,
    )?;

    let q = sol.weights();
    let weights: Vec<Vec<Field>> = sol
        .ck()
        .iter()
        .enumerate()
        .map(|(i, c)| vec![(i + 1).into(), c.value.into(), q.q(i + 1).into()])
        .collect();
    write_csv(&out(args, "weights.csv"), &["k", "C_k", "q_k"], &weights)?;

    let by_order = solution_norm_sq_by_order(&sol, q, sol.r_exponent());
    let total: f64 = by_order.iter().sum();
    let top = by_order.last().copied().unwrap_or(0.0);
    let regime = scenario.regime().map_or("n/a", |r| r.label());
    Ok(Outcome {
        summary: format!(
            "solve: weighted_norm={:.6e} r={} N={} K={} indices={} top_level_share={:.3e} regime={}",
            total.sqrt(),
            sol.r_exponent(),
            sol.tbox().max_order,
            sol.tbox().max_modes,
            sol.iter().count(),
            if total > 0.0 { top / total } else { 0.0 },
            regime
        ),
        passed: true,
    })
}

/// One row of `report.csv`. For vector quantities the values are norms and
/// `pass` is decided on the norm of the difference.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub quantity: String,
    pub chaos_value: f64,
    pub oracle_value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    fn scalar(quantity: String, chaos: f64, oracle: f64, tolerance: f64) -> Self {
        Self {
            quantity,
            chaos_value: chaos,
            oracle_value: oracle,
            tolerance,
            pass: (chaos - oracle).abs() <= tolerance,
        }
    }

    fn row(&self) -> Vec<Field> {
        vec![
            self.quantity.clone().into(),
            self.chaos_value.into(),
            self.oracle_value.into(),
            self.tolerance.into(),
            self.pass.into(),
        ]
    }
}

fn diff_norm(sol: &PropagatorSolution, a: &[Coeff], b: &[Coeff]) -> f64 {
    let d: CVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
    sol.space().norm_sq(&d).sqrt()
}

/// Mean against the exact semigroup, at `T`.
fn mean_rows(sol: &PropagatorSolution) -> Result<Vec<Comparison>> {
    let p = sol.problem();
    if !matches!(p.forcing, Forcing::Zero) {
        return Ok(Vec::new());
    }
    let exact = p.a.semigroup_apply(p.horizon, 0.0, &p.u0.coeff(&MultiIndex::zero()))?;
    let chaos = &sol.mean()[p.nt];
    let scale = sol.space().norm_sq(&exact).sqrt();
    Ok(vec![Comparison {
        quantity: "mean(T)".into(),
        chaos_value: sol.mean_norm(p.nt),
        oracle_value: scale,
        tolerance: MEAN_TOLERANCE * scale,
        pass: diff_norm(sol, chaos, &exact) <= MEAN_TOLERANCE * scale,
    }])
}

/// `u_h` from the chaos coefficients against the deterministic
/// `h`-perturbed equation, at the output nodes.
pub fn pairing_rows(scenario: &Scenario, sol: &PropagatorSolution) -> Result<Vec<Comparison>> {
    let h = scenario.direction();
    let chaos = u_h_pairing(sol, &h)?;
    let det = solve_deterministic_h(sol.problem(), &h)?;
    Ok(output_steps(sol.problem().nt)
        .into_iter()
        .map(|j| {
            let scale = sol.space().norm_sq(&det[j]).sqrt();
            let tol = PAIRING_TOLERANCE * scale + chaos.tail[j];
            Comparison {
                quantity: format!("u_h(t={:.6})", sol.times()[j]),
                chaos_value: sol.space().norm_sq(&chaos.trajectory[j]).sqrt(),
                oracle_value: scale,
                tolerance: tol,
                pass: diff_norm(sol, &chaos.trajectory[j], &det[j]) <= tol,
            }
        })
        .collect())
}

/// `u_{nε}(T) = c e^{aT} (σT)ⁿ/√n!` for the scalar equation with one
/// Gaussian.
fn wick_ode_rows(scenario: &Scenario, sol: &PropagatorSolution) -> Vec<Comparison> {
    let p = sol.problem();
    let t = p.horizon;
    let c = p.u0.coeff(&MultiIndex::zero())[0].re;
    (0..=sol.tbox().max_order)
        .map(|n| {
            let exact = c * (scenario.drift * t).exp() * (scenario.sigma * t).powi(n as i32) / factorial(n).sqrt();
            let chaos = sol.coefficient(&MultiIndex::scaled_unit(n, 1), p.nt)[0].re;
            Comparison::scalar(format!("u_{n}(T)"), chaos, exact, MEAN_TOLERANCE * exact.abs())
        })
        .collect()
}

/// Second moment at `T` summed over the wavenumbers with
/// `σ²y^{2m}T ≤ N/4`, where the truncated chaos sum is resolved.
fn band_rows(scenario: &Scenario, sol: &PropagatorSolution, wick: bool) -> Vec<Comparison> {
    let p = sol.problem();
    let t = p.horizon;
    let n = sol.tbox().max_order as f64;
    let ys = sol.space().wavenumbers().expect("heat scenarios live on Fourier modes");
    let w = sol.space().inner_weights();
    let u0 = p.u0.coeff(&MultiIndex::zero());
    let moments = mean_and_moments(sol);
    let (mut chaos, mut oracle) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let (growth, exact) = if wick {
            (y * y * t * t, wick_space_noise_norm(t, y, u0[i]))
        } else {
            let s = scenario.sigma;
            (s * s * y.powi(2 * scenario.m_order as i32) * t, closed_form_moment(scenario.m_order, s, y, t, u0[i]))
        };
        if growth <= n / 4.0 {
            chaos += w[i] * moments.second_moment[p.nt][i];
            oracle += w[i] * exact;
        }
    }
    vec![Comparison::scalar(
        "second_moment_band(T)".into(),
        chaos,
        oracle,
        MOMENT_TOLERANCE * oracle,
    )]
}

/// Monte Carlo at `T`, within three standard errors.
fn mc_rows(scenario: &Scenario, sol: &PropagatorSolution) -> Result<(McResult, Vec<Comparison>)> {
    let p = sol.problem();
    let dt = scenario.mc_dt.unwrap_or(p.horizon / 4096.0);
    let mc = mc_ito(p, scenario.paths, dt, scenario.seed)?;
    let last = mc.times.len() - 1;
    let u0 = p.u0.coeff(&MultiIndex::zero());
    let norm = sol.space().norm_sq(&u0).sqrt();
    let mean = if norm > 0.0 {
        sol.space().inner(&sol.mean()[p.nt], &u0).re / norm
    } else {
        0.0
    };
    let m2 = sol.second_moment_norm(p.nt);
    let rows = vec![
        Comparison::scalar("mc_mean(T)".into(), mean, mc.mean[last], 3.0 * mc.mean_se[last]),
        Comparison::scalar("mc_m2(T)".into(), m2, mc.m2[last], 3.0 * mc.m2_se[last]),
    ];
    Ok((mc, rows))
}

/// Runs every oracle that applies to the scenario and writes `report.csv`
/// (and `mc.csv` for time-white noise).
pub fn run_verify(args: &RunArgs) -> Result<Outcome> {
    let (scenario, sol) = prepare(args)?;
    let mut rows = mean_rows(&sol)?;
    rows.extend(pairing_rows(&scenario, &sol)?);
    let unit = scenario.drift == 0.0 && scenario.diffusion == 1.0;
    match (scenario.equation, scenario.noise) {
        (Equation::Ode, NoiseKind::SingleGaussian) => rows.extend(wick_ode_rows(&scenario, &sol)),
        (Equation::Heat, NoiseKind::SingleGaussian) if unit && scenario.m_order == 1 && scenario.sigma == 1.0 => {
            rows.extend(band_rows(&scenario, &sol, true))
        }
        _ => {}
    }
    if scenario.noise == NoiseKind::TimeWhite {
        if scenario.equation == Equation::Heat && unit {
            rows.extend(band_rows(&scenario, &sol, false));
        }
        let (mc, mc_cmp) = mc_rows(&scenario, &sol)?;
        rows.extend(mc_cmp);
        let mc_table: Vec<Vec<Field>> = (0..mc.times.len())
            .map(|i| {
                vec![
                    mc.times[i].into(),
                    mc.mean[i].into(),
                    mc.mean_se[i].into(),
                    mc.m2[i].into(),
                    mc.m2_se[i].into(),
                ]
            })
            .collect();
        write_csv(&out(args, "mc.csv"), &["t", "mean", "mean_se", "m2", "m2_se"], &mc_table)?;
    }
    let table: Vec<Vec<Field>> = rows.iter().map(Comparison::row).collect();
    write_csv(
        &out(args, "report.csv"),
        &["quantity", "chaos_value", "oracle_value", "tolerance", "pass"],
        &table,
    )?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.quantity.as_str()).collect();
    Ok(Outcome {
        summary: if failed.is_empty() {
            format!("verify: {} comparisons passed", rows.len())
        } else {
            format!("verify: {} of {} comparisons failed: {}", failed.len(), rows.len(), failed.join(" "))
        },
        passed: failed.is_empty(),
    })
}

/// Runs the Krylov–Veretennikov recursion up to `levels` and writes
/// `kv.csv`.
pub fn run_kv(args: &RunArgs, levels: usize) -> Result<Outcome> {
    let (_, sol) = prepare(args)?;
    let report = kv_recursion(&sol, sol.weights(), levels)?;
    let rows: Vec<Vec<Field>> = report
        .levels
        .iter()
        .map(|l| vec![l.n.into(), l.max_abs_deviation.into(), l.max_deviation.into(), l.scale.into()])
        .collect();
    write_csv(&out(args, "kv.csv"), &["n", "max_abs_deviation", "max_deviation", "scale"], &rows)?;
    let dev = report.max_deviation();
    Ok(Outcome {
        summary: format!("kv: levels=0..={} max_deviation={dev:.3e} tolerance={KV_TOLERANCE:e}", report.levels.len() - 1),
        passed: dev <= KV_TOLERANCE,
    })
}

/// Time-integrated weighted norm for each `r` of the sweep, written to
/// `norms.csv`.
pub fn run_norms(args: &RunArgs) -> Result<Outcome> {
    let (scenario, sol) = prepare(args)?;
    let q = sol.weights();
    let rows: Vec<Vec<Field>> = scenario
        .r_sweep
        .iter()
        .map(|&r| {
            let by_order = solution_norm_sq_by_order(&sol, q, r);
            let total: f64 = by_order.iter().sum();
            let top = by_order.last().copied().unwrap_or(0.0);
            vec![
                r.into(),
                total.into(),
                (if total > 0.0 { top / total } else { 0.0 }).into(),
            ]
        })
        .collect();
    write_csv(&out(args, "norms.csv"), &["r", "weighted_norm_sq", "top_level_share"], &rows)?;
    Ok(Outcome {
        summary: format!(
            "norms: {} exponents, weighted_norm_sq(r°)={:.6e}",
            rows.len(),
            solution_norm_sq(&sol, q, sol.r_exponent())
        ),
        passed: true,
    })
}

/// The scenario files shipped with the crate.
pub fn bundled_scenarios() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map(|it| {
            it.filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}
