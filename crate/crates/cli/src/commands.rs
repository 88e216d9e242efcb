//! The four subcommands.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;

use lxf_core::compactness::{
    boundedness_statistic, check_gamma, default_spatial_offsets, default_temporal_offsets,
    fit_exponent, interaction_identity, reconstruction_distance, Axis, InteractionContext,
    ModulusCurve, Shift,
};
use lxf_core::entropy::{
    cell_bounds, check_dissipation_bounds, psi_weighted_mass, temporal_square_sum,
    weighted_dissipation_sum,
};
use lxf_core::io::{write_trajectory_binary, write_trajectory_csv};
use lxf_core::problem::config::load_problem;
use lxf_core::{
    build_lattice_with, builtin_problem, run, validate_problem, Error, LatticeOptions,
    LatticeSpec, ProblemSpec, StaggeredTrajectory, WeightFunction,
};

use crate::args::{DiagnoseArgs, ModulusArgs, ProblemArgs, RefineArgs, RunArgs, TranslateArgs};
use crate::error::{CliError, CliResult};
use crate::output;
use crate::report::{
    DiagnosticsReport, GammaEntry, IdentityEntry, LadderBands, ModulusSummary, Outcome,
    RefineReport, RefineRow, RunMetadata, Status,
};

/// Normalized identity residual accepted as exact.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Largest accepted `max / min` across a ladder.
pub const BAND_LIMIT: f64 = 10.0;
/// Slack below the theoretical exponent accepted for fitted slopes.
pub const SLOPE_SLACK: f64 = 0.05;
/// Exponent used by the boundedness statistic when none is asserted.
pub const DEFAULT_MU: f64 = 0.25;
const DEFAULT_OFFSET_COUNT: usize = 12;

/// Loads, overrides and validates the problem.
pub fn load(args: &ProblemArgs) -> CliResult<ProblemSpec> {
    let mut problem = match (&args.config, &args.problem) {
        (Some(path), None) => load_problem(path)?,
        (None, Some(name)) => builtin_problem(name)?,
        _ => return Err(CliError::Usage("give exactly one of --config or --problem".into())),
    };
    if let Some(t) = args.time {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--time must be positive, got {t}")));
        }
        problem.horizon = t;
    }
    let report = validate_problem(&problem);
    if !report.all_pass() {
        return Err(CliError::Validation(report.to_string()));
    }
    Ok(problem)
}

fn lattice_options(args: &ProblemArgs) -> LatticeOptions {
    LatticeOptions {
        kappa: args.kappa,
        memory_budget_bytes: args.memory_budget_mb.saturating_mul(1 << 20),
        ..LatticeOptions::default()
    }
}

pub fn lattice(problem: &ProblemSpec, args: &ProblemArgs, cells: usize) -> CliResult<LatticeSpec> {
    Ok(build_lattice_with(problem, cells, &lattice_options(args))?)
}

fn metadata(problem: &ProblemSpec, l: &LatticeSpec, cells: usize, weight: WeightFunction) -> RunMetadata {
    RunMetadata {
        problem: problem.name.clone(),
        cells,
        dx: l.dx,
        dt: l.dt,
        lambda: l.lambda,
        kappa: l.kappa,
        n_max: l.n_max,
        horizon: l.horizon,
        j_min: l.j_min,
        j_max: l.j_max,
        weight,
    }
}

/// Summary lines printed by `run`.
pub struct RunSummary {
    pub metadata: RunMetadata,
    pub min_state: f64,
    pub max_state: f64,
    pub files: Vec<String>,
}

pub fn cmd_run(args: &RunArgs) -> CliResult<RunSummary> {
    let c = &args.common;
    let problem = load(c)?;
    let l = lattice(&problem, c, c.cells)?;
    let traj = run(&problem, &l)?;
    output::ensure_dir(&c.out)?;
    let mut files = vec!["trajectory.csv".to_string()];
    write_trajectory_csv(&traj, BufWriter::new(File::create(c.out.join("trajectory.csv"))?))?;
    if args.binary {
        write_trajectory_binary(&traj, BufWriter::new(File::create(c.out.join("trajectory.lxft"))?))?;
        files.push("trajectory.lxft".into());
    }
    let (min_state, max_state) = traj.state_range();
    Ok(RunSummary {
        metadata: metadata(&problem, &l, c.cells, c.weight),
        min_state,
        max_state,
        files,
    })
}

fn modulus_summary(
    traj: &StaggeredTrajectory,
    axis: Axis,
    weight: WeightFunction,
    offsets: &[f64],
    mu: f64,
) -> CliResult<ModulusSummary> {
    let horizon = traj.problem.horizon;
    let offsets = match (offsets.is_empty(), axis) {
        (false, _) => offsets.to_vec(),
        (true, Axis::Spatial) => default_spatial_offsets(traj, DEFAULT_OFFSET_COUNT),
        (true, Axis::Temporal) => default_temporal_offsets(traj, horizon, DEFAULT_OFFSET_COUNT),
    };
    let curve = ModulusCurve::compute(traj, axis, weight, &offsets, horizon)?;
    let pairs = curve.pairs();
    Ok(ModulusSummary {
        fit: fit_exponent(&pairs).ok(),
        statistic: boundedness_statistic(&pairs, mu),
        curve,
        mu,
    })
}

/// Pass/fail of one modulus curve against the asserted exponent.
fn modulus_outcome(name: &str, m: &ModulusSummary, mu_theory: Option<f64>) -> Outcome {
    if m.curve.samples.iter().all(|s| s.modulus == 0.0) {
        return Outcome::new(name, Status::Pass, "modulus identically zero");
    }
    let Some(fit) = &m.fit else {
        let pairs = m.curve.pairs();
        let why = fit_exponent(&pairs).err().map(|e| e.to_string()).unwrap_or_default();
        return Outcome::new(name, Status::Skipped, format!("no fit: {why}"));
    };
    match mu_theory {
        Some(mu) => Outcome::check(
            name,
            fit.slope >= mu - SLOPE_SLACK,
            format!("slope {:.4} (need >= {:.2}), statistic {:.4e}", fit.slope, mu - SLOPE_SLACK, m.statistic),
        ),
        None => Outcome::new(
            name,
            Status::Pass,
            format!("slope {:.4}, no exponent asserted", fit.slope),
        ),
    }
}

fn moduli(
    traj: &StaggeredTrajectory,
    weight: WeightFunction,
    args: &ModulusArgs,
    out: &Path,
    outcomes: &mut Vec<Outcome>,
) -> (Option<ModulusSummary>, Option<ModulusSummary>) {
    let mu_theory = traj.problem.mu_theory();
    let mu = mu_theory.unwrap_or(DEFAULT_MU);
    let mut run_axis = |axis, offsets: &[f64], name: &str, file: &str| {
        match modulus_summary(traj, axis, weight, offsets, mu)
            .and_then(|m| output::write_modulus(&out.join(file), &m.curve).map(|_| m))
        {
            Ok(m) => {
                outcomes.push(modulus_outcome(name, &m, mu_theory));
                Some(m)
            }
            Err(e) => {
                outcomes.push(Outcome::new(name, Status::Fail, e.to_string()));
                None
            }
        }
    };
    let spatial = run_axis(Axis::Spatial, &args.offsets, "spatial modulus", "modulus_spatial.csv");
    let temporal = run_axis(Axis::Temporal, &args.time_offsets, "temporal modulus", "modulus_temporal.csv");
    (spatial, temporal)
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> CliResult<DiagnosticsReport> {
    let c = &args.common;
    let problem = load(c)?;
    let l = lattice(&problem, c, c.cells)?;
    let traj = run(&problem, &l)?;
    output::ensure_dir(&c.out)?;
    let pair = &problem.entropy;
    let chi = c.weight;
    let mut outcomes = Vec::new();

    let entropy_bounds = check_dissipation_bounds(&traj, pair);
    output::write_entropy(&c.out.join("entropy.csv"), &cell_bounds(&traj, pair), entropy_bounds.dissipation_applies)?;
    outcomes.push(Outcome::check(
        "entropy production bound",
        entropy_bounds.abs_violations == 0,
        format!("{} violations, worst margin {:.3e}", entropy_bounds.abs_violations, entropy_bounds.worst_abs_margin),
    ));
    outcomes.push(if entropy_bounds.dissipation_applies {
        Outcome::check(
            "entropy dissipation bound",
            entropy_bounds.dissipation_violations == 0,
            format!(
                "{} violations, worst margin {:.3e}",
                entropy_bounds.dissipation_violations, entropy_bounds.worst_dissipation_margin
            ),
        )
    } else {
        Outcome::new("entropy dissipation bound", Status::Skipped, "entropy not uniformly convex")
    });

    let ctx = InteractionContext::new(&traj, pair, chi);
    let shifts: Vec<Shift> = args
        .shifts
        .iter()
        .map(|&nu| Shift::Spatial(nu))
        .chain(args.thetas.iter().map(|&t| Shift::Temporal(t)))
        .collect();
    let mut identities = Vec::new();
    for &shift in &shifts {
        let name = format!("interaction identity {shift}");
        match interaction_identity(&ctx, shift) {
            Ok(rep) => {
                let file = match shift {
                    Shift::Spatial(nu) => format!("identity_spatial_nu{nu}.csv"),
                    Shift::Temporal(theta) => format!("identity_temporal_theta{theta}.csv"),
                };
                output::write_identity(&c.out.join(file), &rep)?;
                let worst = rep.normalized_residual.max(rep.gamma_normalized_residual);
                outcomes.push(Outcome::check(
                    name,
                    worst <= IDENTITY_TOLERANCE,
                    format!("normalized residual {worst:.3e}"),
                ));
                identities.push(IdentityEntry { shift, report: Some(rep), error: None });
            }
            Err(e) => {
                outcomes.push(Outcome::new(name, Status::Fail, e.to_string()));
                identities.push(IdentityEntry { shift, report: None, error: Some(e.to_string()) });
            }
        }
    }

    let mut gamma = Vec::new();
    if pair.nonlinearity.is_none() {
        outcomes.push(Outcome::new("gamma lower bound", Status::Skipped, "nonlinearity not asserted"));
    } else {
        let mut wrote_margins = false;
        for &shift in &shifts {
            let name = format!("gamma lower bound {shift}");
            match check_gamma(&ctx, shift) {
                Ok(Some(check)) => {
                    // Margins of the first spatial shift go to CSV; the rest are summarized.
                    if !wrote_margins && matches!(shift, Shift::Spatial(_)) {
                        output::write_gamma_margins(&c.out.join("gamma_margins.csv"), &check)?;
                        wrote_margins = true;
                    }
                    outcomes.push(Outcome::check(
                        name,
                        check.passed(),
                        format!("{} violations in {} cells, worst margin {:.3e}", check.violations, check.cells, check.worst_margin),
                    ));
                    gamma.push(GammaEntry {
                        shift,
                        cells: check.cells,
                        violations: check.violations,
                        worst_margin: check.worst_margin,
                    });
                }
                Ok(None) => {}
                Err(e) => outcomes.push(Outcome::new(name, Status::Fail, e.to_string())),
            }
        }
    }

    let (spatial_modulus, temporal_modulus) = moduli(&traj, chi, &args.moduli, &c.out, &mut outcomes);

    let report = DiagnosticsReport {
        metadata: metadata(&problem, &l, c.cells, chi),
        validation: validate_problem(&problem),
        mu_theory: problem.mu_theory(),
        dissipation_sum: weighted_dissipation_sum(&traj, &chi),
        temporal_square_sum: temporal_square_sum(&traj, &chi),
        psi_mass: psi_weighted_mass(&traj, pair, &chi),
        entropy_bounds,
        identities,
        gamma,
        spatial_modulus,
        temporal_modulus,
        outcomes,
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(c.out.join("report.json"))?), &report)?;
    Ok(report)
}

/// Moduli only; returns the outcomes.
pub fn cmd_translate(args: &TranslateArgs) -> CliResult<(Option<ModulusSummary>, Option<ModulusSummary>, Vec<Outcome>)> {
    let c = &args.common;
    let problem = load(c)?;
    let traj = run(&problem, &lattice(&problem, c, c.cells)?)?;
    output::ensure_dir(&c.out)?;
    let mut outcomes = Vec::new();
    let (s, t) = moduli(&traj, c.weight, &args.moduli, &c.out, &mut outcomes);
    Ok((s, t, outcomes))
}

fn band(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi == 0.0 {
        1.0
    } else {
        hi / lo
    }
}

pub fn cmd_refine(args: &RefineArgs) -> CliResult<RefineReport> {
    let c = &args.common;
    if args.ladder.is_empty() || args.ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--ladder must be a nonempty increasing list".into()));
    }
    let problem = load(c)?;
    let chi = c.weight;
    let mu_theory = problem.mu_theory();
    let mu = mu_theory.unwrap_or(DEFAULT_MU);
    let mut notes = Vec::new();
    if mu_theory.is_none() {
        notes.push(format!("no exponent asserted; statistic uses mu = {mu}"));
    }

    let levels: Vec<(usize, CliResult<(RefineRow, StaggeredTrajectory)>)> = args
        .ladder
        .par_iter()
        .map(|&cells| {
            let level = || -> CliResult<(RefineRow, StaggeredTrajectory)> {
                let traj = run(&problem, &lattice(&problem, c, cells)?)?;
                let spatial = modulus_summary(&traj, Axis::Spatial, chi, &[], mu)?;
                let temporal = modulus_summary(&traj, Axis::Temporal, chi, &[], mu)?;
                let row = RefineRow {
                    cells,
                    dx: traj.lattice.dx,
                    dissipation_sum: weighted_dissipation_sum(&traj, &chi),
                    temporal_square_sum: temporal_square_sum(&traj, &chi),
                    psi_mass: psi_weighted_mass(&traj, &problem.entropy, &chi),
                    spatial_statistic: spatial.statistic,
                    temporal_statistic: temporal.statistic,
                    spatial_slope: spatial.fit.map(|f| f.slope),
                    temporal_slope: temporal.fit.map(|f| f.slope),
                    l1_to_finest: 0.0,
                };
                Ok((row, traj))
            };
            (cells, level())
        })
        .collect();

    let mut done = Vec::new();
    let mut skipped = false;
    for (cells, level) in levels {
        match level {
            Ok(pair) => done.push(pair),
            Err(CliError::Core(Error::MemoryBudget(msg))) => {
                notes.push(format!("level {cells} skipped: memory budget exceeded ({msg})"));
                skipped = true;
            }
            Err(e) => return Err(e),
        }
    }
    if done.is_empty() {
        return Err(CliError::Usage(format!("no ladder level completed: {}", notes.join("; "))));
    }
    let (_, finest) = done.last().unwrap();
    let horizon = problem.horizon;
    let mut rows = Vec::with_capacity(done.len());
    for (row, traj) in &done {
        let mut row = row.clone();
        row.l1_to_finest = reconstruction_distance(traj, finest, &chi, horizon)?;
        rows.push(row);
    }

    let bands = LadderBands {
        dissipation_sum: band(rows.iter().map(|r| r.dissipation_sum)),
        temporal_square_sum: band(rows.iter().map(|r| r.temporal_square_sum)),
        psi_mass: band(rows.iter().map(|r| r.psi_mass)),
        spatial_statistic: band(rows.iter().map(|r| r.spatial_statistic)),
        temporal_statistic: band(rows.iter().map(|r| r.temporal_statistic)),
    };
    let mut outcomes: Vec<Outcome> = [
        ("dissipation sum band", bands.dissipation_sum),
        ("temporal square sum band", bands.temporal_square_sum),
        ("entropy production mass band", bands.psi_mass),
        ("spatial statistic band", bands.spatial_statistic),
        ("temporal statistic band", bands.temporal_statistic),
    ]
    .into_iter()
    .map(|(name, b)| Outcome::check(name, b <= BAND_LIMIT, format!("max/min {b:.4}")))
    .collect();
    if skipped {
        outcomes.push(Outcome::new("ladder completeness", Status::Skipped, "some levels exceeded the memory budget"));
    }

    output::ensure_dir(&c.out)?;
    output::write_ladder(&c.out.join("ladder.csv"), &rows)?;
    let report = RefineReport {
        problem: problem.name.clone(),
        weight: chi,
        mu,
        rows,
        bands,
        notes,
        outcomes,
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(c.out.join("refine.json"))?), &report)?;
    Ok(report)
}
