//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lxf_core::compactness::{
    boundedness_statistic, check_gamma, default_spatial_offsets, default_temporal_offsets,
    discrete_spatial_sum, fit_exponent, gamma_lower_bound, interaction_identity,
    sample_gamma_bound, spatial_modulus, Axis, FrozenSplit, InteractionContext, ModulusCurve,
    Shift,
};
use lxf_core::entropy::{
    check_dissipation_bounds, psi_weighted_mass, temporal_square_sum, weighted_dissipation_sum,
};
use lxf_core::problem::{CoefficientSpec, EntropyPairSpec, InitialDataSpec, Polynomial};
use lxf_core::scheme::{cell_containing, far_field_fluxes, level_mass, lxf_step, Stepper};
use lxf_core::{
    build_lattice, build_lattice_with, builtin_problem, run, LatticeOptions, LatticeSpec,
    ProblemSpec, StaggeredField, StaggeredTrajectory, WeightFunction,
};

type Outcome = Result<String, String>;

const LADDER: [usize; 4] = [50, 100, 200, 400];

fn problem(name: &str) -> ProblemSpec {
    builtin_problem(name).expect("built-in problem")
}

/// Lattice with `cells` cells whose horizon holds exactly `steps` steps.
fn lattice_with_steps(p: &ProblemSpec, cells: usize, steps: usize) -> LatticeSpec {
    let dt = build_lattice(p, cells, 0.1).unwrap().dt;
    let opts = LatticeOptions {
        horizon: Some(steps as f64 * dt),
        ..LatticeOptions::default()
    };
    let l = build_lattice_with(p, cells, &opts).unwrap();
    assert_eq!(l.n_max, steps);
    l
}

fn run_cells(p: &ProblemSpec, cells: usize) -> StaggeredTrajectory {
    run(p, &build_lattice(p, cells, 0.1).unwrap()).unwrap()
}

fn band(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

fn identity_criterion(traj: &StaggeredTrajectory, shifts: &[Shift]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for chi in [WeightFunction::Unit, WeightFunction::RationalDecay { exponent: 1.0 }] {
        let ctx = InteractionContext::new(traj, &traj.problem.entropy, chi);
        for &shift in shifts {
            let rep = interaction_identity(&ctx, shift).map_err(|e| e.to_string())?;
            let r = rep.normalized_residual.max(rep.gamma_normalized_residual);
            worst = worst.max(r);
            if !(r <= 1e-9) || rep.lhs == 0.0 {
                fails.push(format!("{shift} {chi}: {r:e} (lhs {:e})", rep.lhs));
            }
        }
    }
    if fails.is_empty() {
        Ok(format!("worst normalized residual {worst:.2e}"))
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = problem("twoflux-traffic");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10 {
        let pieces = rng.gen_range(2..8);
        let mut breaks: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(-0.8..0.8)).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let values = (0..=breaks.len())
            .map(|_| match rng.gen_range(0..4) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.0..=1.0),
            })
            .collect();
        let mut p = base.clone();
        p.init = InitialDataSpec::piecewise(breaks, values).map_err(|e| e.to_string())?;
        let (a, b) = run_cells(&p, 200).state_range();
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let detail = format!("states in [{lo:e}, {hi}]");
    if lo >= -1e-15 && hi <= 1.0 + 1e-15 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4() -> Outcome {
    let p = problem("twoflux-convex");
    let l = build_lattice(&p, 40, 0.1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (first, len) = (l.first_index(0), l.level_len(0));
    let mut violations = 0;
    for _ in 0..200 {
        let mut field = |lo: &[f64]| -> Vec<f64> { lo.iter().map(|&a| rng.gen_range(a..=1.0)).collect() };
        let zeros = vec![0.0; len + 2];
        let u = field(&zeros);
        let v = field(&u);
        let k: Vec<f64> = (0..len + 2).map(|_| rng.gen_range(1.0..=2.0)).collect();
        let mk = |w: &[f64]| StaggeredField::new(0, first, w[..len].to_vec(), w[len], w[len + 1]);
        let kf = mk(&k);
        let un = lxf_step(&mk(&u), &kf, &l, &p.flux).unwrap();
        let vn = lxf_step(&mk(&v), &kf, &l, &p.flux).unwrap();
        violations += un.values.iter().zip(&vn.values).filter(|(a, b)| a > b).count();
    }
    if violations == 0 {
        Ok(format!("200 pairs, lambda = {:.4}, no order violations", l.lambda))
    } else {
        Err(format!("{violations} order violations"))
    }
}

fn criterion_5() -> Outcome {
    let p = problem("burgers-riemann");
    let l = lattice_with_steps(&p, 10_000, 1_000);
    let (fl, fr) = far_field_fluxes(&p);
    let mut stepper = Stepper::new(&p, &l).map_err(|e| e.to_string())?;
    let m0 = level_mass(stepper.state(), &l);
    let mut worst: f64 = 0.0;
    for n in 1..=1_000 {
        stepper.step().map_err(|e| e.to_string())?;
        let expected = m0 - n as f64 * l.dt * (fr - fl);
        let m = level_mass(stepper.state(), &l);
        worst = worst.max((m - expected).abs() / expected.abs());
    }
    let detail = format!("max relative mass-balance error {worst:.2e} over 1000 steps");
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Outcome {
    let mut out = Vec::new();
    for name in ["twoflux-convex", "twoflux-traffic"] {
        let mut p = problem(name);
        let square = Polynomial::new(vec![0.0, 0.0, 0.5]);
        let flux_poly = match name {
            "twoflux-convex" => Polynomial::new(vec![0.0, -1.0, 1.0]),
            _ => Polynomial::new(vec![0.0, 1.0, -1.0]),
        };
        p.coefficient = CoefficientSpec::constant(1.5).with_bounds(1.0, 2.0);
        p.entropy = EntropyPairSpec::separable("square", &flux_poly, 0, &square, 1.0, &p.bounds);
        let traj = run_cells(&p, 200);
        let check = check_dissipation_bounds(&traj, &p.entropy);
        if check.dissipation_violations != 0 {
            return Err(format!("{name}: {} violations", check.dissipation_violations));
        }
        out.push(format!("{name} worst margin {:.2e}", check.worst_dissipation_margin));
    }
    Ok(out.join(", "))
}

fn criterion_7() -> Outcome {
    let mut out = Vec::new();
    for name in ["twoflux-convex", "moving-jump"] {
        let p = problem(name);
        let traj = run_cells(&p, 400);
        let check = check_dissipation_bounds(&traj, &p.entropy);
        if check.abs_violations != 0 {
            return Err(format!("{name}: {} violations", check.abs_violations));
        }
        out.push(format!("{name} worst margin {:.2e}", check.worst_abs_margin));
    }
    Ok(out.join(", "))
}

fn criterion_8(traj: &StaggeredTrajectory) -> Outcome {
    let ctx = InteractionContext::new(traj, &traj.problem.entropy, WeightFunction::Unit);
    let mut cells = 0;
    for shift in [Shift::Spatial(1), Shift::Spatial(3), Shift::Spatial(5), Shift::Temporal(2), Shift::Temporal(4)] {
        let check = check_gamma(&ctx, shift).map_err(|e| e.to_string())?.ok_or("no constants")?;
        if !check.passed() {
            return Err(format!("{shift}: {} violations, worst {:e}", check.violations, check.worst_margin));
        }
        cells += check.cells;
    }
    let p = &traj.problem;
    let nl = p.entropy.nonlinearity.unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (worst, violations) = sample_gamma_bound(&p.flux, &p.entropy, &nl, 10_000, |_| {
        (rng.gen_range(1.0..=2.0), rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0))
    });
    if violations != 0 {
        return Err(format!("Monte Carlo: {violations} violations, worst {worst:e}"));
    }
    let b = problem("burgers-riemann");
    let g = FrozenSplit::new(&b.flux, &b.entropy, 1.0, 0.0, 1.0, 1.0).gamma();
    let bound = gamma_lower_bound(&b.entropy.nonlinearity.unwrap(), 1.0);
    if (g - 1.0 / 12.0).abs() > 1e-15 || (bound - 1.0 / 12.0).abs() > 1e-15 {
        return Err(format!("Burgers (0,1,1): gamma {g}, bound {bound}"));
    }
    Ok(format!("{cells} cells, 1e4 samples (worst margin {worst:.2e}), Burgers gamma = bound = 1/12"))
}

fn criterion_9() -> Outcome {
    let p = problem("twoflux-convex");
    let chi = WeightFunction::RationalDecay { exponent: 1.0 };
    let (mut d, mut t, mut s) = (Vec::new(), Vec::new(), Vec::new());
    for cells in LADDER {
        let traj = run_cells(&p, cells);
        d.push(weighted_dissipation_sum(&traj, &chi));
        t.push(temporal_square_sum(&traj, &chi));
        s.push(psi_weighted_mass(&traj, &p.entropy, &chi));
    }
    let bands = [band(&d), band(&t), band(&s)];
    let detail = format!(
        "bands: dissipation {:.2}, temporal {:.2}, entropy production {:.2}",
        bands[0], bands[1], bands[2]
    );
    if bands.iter().all(|b| *b <= 10.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    for name in ["burgers-riemann", "twoflux-convex"] {
        let p = problem(name);
        let mu = p.mu_theory().unwrap();
        let (mut stat_x, mut stat_t) = (Vec::new(), Vec::new());
        let mut slopes = (0.0, 0.0);
        for cells in LADDER {
            let traj = run_cells(&p, cells);
            let spatial = ModulusCurve::compute(
                &traj, Axis::Spatial, WeightFunction::Unit, &default_spatial_offsets(&traj, 12), p.horizon,
            ).map_err(|e| e.to_string())?;
            let temporal = ModulusCurve::compute(
                &traj, Axis::Temporal, WeightFunction::Unit, &default_temporal_offsets(&traj, p.horizon, 12), p.horizon,
            ).map_err(|e| e.to_string())?;
            stat_x.push(boundedness_statistic(&spatial.pairs(), mu));
            stat_t.push(boundedness_statistic(&temporal.pairs(), mu));
            if cells == *LADDER.last().unwrap() {
                let sx = fit_exponent(&spatial.pairs()).map_err(|e| e.to_string())?.slope;
                let st = fit_exponent(&temporal.pairs()).map_err(|e| e.to_string())?.slope;
                slopes = (sx, st);
            }
        }
        let (bx, bt) = (band(&stat_x), band(&stat_t));
        let detail = format!(
            "{name}: slopes {:.3}/{:.3}, statistic bands {bx:.2}/{bt:.2}",
            slopes.0, slopes.1
        );
        if slopes.0 < 0.20 || slopes.1 < 0.20 || bx > 10.0 || bt > 10.0 {
            return Err(detail);
        }
        out.push(detail);
    }
    Ok(out.join("; "))
}

/// `∫ |u^Δ(x, T) − u(x, T)| dx` against the shock `u = 1` for `x < T/2`, `0` after.
fn burgers_shock_error(traj: &StaggeredTrajectory, horizon: f64) -> f64 {
    let l = &traj.lattice;
    let n = traj.reconstruct().level_at(horizon).unwrap();
    let shock = 0.5 * horizon;
    let u = &traj.u_levels[n];
    let mut err = 0.0;
    // Every edge of level n, plus the shock, splits the line into pieces on
    // which both functions are constant.
    let parity = (n % 2) as i64;
    let mut edges: Vec<f64> = (l.j_min - 1..=l.j_max + 1).map(|e| l.x(e)).collect();
    edges.push(shock);
    edges.sort_by(f64::total_cmp);
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let exact = if mid < shock { 1.0 } else { 0.0 };
        let approx = u.get(cell_containing(mid / l.dx, parity));
        err += (approx - exact).abs() * (w[1] - w[0]);
    }
    err
}

fn criterion_11() -> Outcome {
    let p = problem("burgers-riemann");
    let ladder = [100, 200, 400, 800];
    let mut samples = Vec::new();
    for cells in ladder {
        let traj = run_cells(&p, cells);
        samples.push((traj.lattice.dx, burgers_shock_error(&traj, 0.5)));
    }
    // Least-squares slope of ln(error) against ln(dx).
    let pts: Vec<(f64, f64)> = samples.iter().map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let order = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let pairwise: Vec<String> = samples
        .windows(2)
        .map(|w| format!("{:.2}", (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()))
        .collect();
    let errs: Vec<String> = samples.iter().map(|s| format!("{:.2e}", s.1)).collect();
    let detail = format!(
        "L1 errors [{}], pairwise orders [{}], fitted order {order:.3}",
        errs.join(", "),
        pairwise.join(", ")
    );
    if order >= 0.4 && pairwise.iter().all(|o| o.parse::<f64>().unwrap() >= 0.4) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_12(traj: &StaggeredTrajectory) -> Outcome {
    let l = &traj.lattice;
    let mut worst: f64 = 0.0;
    for nu in 1..=5 {
        let m = spatial_modulus(traj, &WeightFunction::Unit, 2.0 * nu as f64 * l.dx, l.t(l.n_max + 1))
            .map_err(|e| e.to_string())?;
        let s = discrete_spatial_sum(traj, nu, l.n_max + 1);
        worst = worst.max((m - s).abs() / s);
    }
    let detail = format!("max relative gap {worst:.2e} for nu = 1..5");
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let convex = problem("twoflux-convex");
    let traj = run(&convex, &lattice_with_steps(&convex, 400, 400)).unwrap();

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("spatial interaction identity", Box::new(|| {
            identity_criterion(&traj, &[Shift::Spatial(1), Shift::Spatial(3), Shift::Spatial(5)])
        })),
        ("temporal interaction identity", Box::new(|| {
            identity_criterion(&traj, &[Shift::Temporal(2), Shift::Temporal(4)])
        })),
        ("invariant region", Box::new(criterion_3)),
        ("monotonicity", Box::new(criterion_4)),
        ("conservation", Box::new(criterion_5)),
        ("entropy dissipation, constant coefficient", Box::new(criterion_6)),
        ("entropy production bound", Box::new(criterion_7)),
        ("interaction integrand lower bound", Box::new(|| criterion_8(&traj))),
        ("dissipation ladder", Box::new(criterion_9)),
        ("translation modulus exponent", Box::new(criterion_10)),
        ("Burgers shock convergence", Box::new(criterion_11)),
        ("modulus reduces to lattice sum", Box::new(|| criterion_12(&traj))),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
