//! Initialization, coefficient sampling, the staggered Lax-Friedrichs update
//!
//! `U_j^{n+1} = ½(U_{j−1}^n + U_{j+1}^n) − (λ/2)(f(k_{j+1}^n, U_{j+1}^n) − f(k_{j−1}^n, U_{j−1}^n))`
//!
//! and the piecewise-constant reconstruction `u^Δ`.

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, StaggeredField};
use crate::problem::{
    at_or_right_of, Bounds, CoefficientSpec, FluxSpec, InitialDataSpec, InitialKind, ProblemSpec,
};
use crate::quadrature::{gauss16, integrate};
use crate::sum::NeumaierSum;

/// Relative distance below which a coordinate counts as lying on a grid line.
const GRID_SNAP: f64 = 1e-9;

/// Nearest cell edge of the initial level (an odd multiple of `dx`); ties go
/// to the lower edge.
pub fn snap_to_edge(x: f64, dx: f64) -> f64 {
    let m = (x / dx - 1.0) / 2.0;
    let e = 2.0 * (m - 0.5).ceil() + 1.0;
    e * dx
}

/// `y` rounded to the nearest integer when within the snapping tolerance.
fn snap_index(y: f64) -> f64 {
    let r = y.round();
    if (y - r).abs() <= GRID_SNAP * r.abs().max(1.0) {
        r
    } else {
        y
    }
}

fn average_over(lo: f64, hi: f64, cuts: &[f64], g: &dyn Fn(f64) -> f64) -> f64 {
    let mut pts = vec![lo];
    pts.extend(cuts.iter().copied().filter(|&c| c > lo && c < hi));
    pts.push(hi);
    let mut acc = NeumaierSum::new();
    for w in pts.windows(2) {
        acc.add(integrate(gauss16(), w[0], w[1], g));
    }
    acc.value() / (hi - lo)
}

fn check_state(v: f64, bounds: &Bounds, what: impl FnOnce() -> String) -> Result<f64> {
    let slack = 1e-15 * (bounds.b - bounds.a);
    if v >= bounds.a - slack && v <= bounds.b + slack {
        Ok(v)
    } else {
        Err(Error::MalformedProblem(format!(
            "initial data {} = {v} lies outside [{}, {}]",
            what(),
            bounds.a,
            bounds.b
        )))
    }
}

/// Level-0 cell averages `U_j^0 = (1/2Δx)∫_{x_{j−1}}^{x_{j+1}} u0`.
///
/// Breakpoints of piecewise data are snapped to the nearest cell edge first,
/// so those averages are exact. Other data use 16-point Gauss rules on each
/// smooth piece of the cell.
pub fn init_cell_averages(
    init: &InitialDataSpec,
    bounds: &Bounds,
    lattice: &LatticeSpec,
) -> Result<StaggeredField> {
    let dx = lattice.dx;
    let first = lattice.first_index(0);
    let len = lattice.level_len(0);
    let (pad_left, pad_right) = (init.pad_left(), init.pad_right());
    check_state(pad_left, bounds, || "left state".into())?;
    check_state(pad_right, bounds, || "right state".into())?;

    let mut values = Vec::with_capacity(len);
    match &init.kind {
        InitialKind::Piecewise {
            breakpoints,
            values: pieces,
        } => {
            let snapped: Vec<f64> = breakpoints.iter().map(|&b| snap_to_edge(b, dx)).collect();
            for i in 0..len {
                let x = lattice.x(first + 2 * i as i64);
                let piece = snapped.iter().take_while(|&&b| at_or_right_of(x, b)).count();
                values.push(pieces[piece]);
            }
        }
        kind => {
            let cuts: Vec<f64> = match kind {
                InitialKind::Bump {
                    center, half_width, ..
                } => vec![center - half_width, *center, center + half_width],
                InitialKind::Custom { support, .. } => vec![support.0, support.1],
                _ => Vec::new(),
            };
            let support = init.support();
            for i in 0..len {
                let j = first + 2 * i as i64;
                let (lo, hi) = (lattice.x(j - 1), lattice.x(j + 1));
                let v = match support {
                    None => init.eval(lattice.x(j)),
                    Some((s0, _)) if hi <= s0 => pad_left,
                    Some((_, s1)) if lo >= s1 => pad_right,
                    Some(_) => average_over(lo, hi, &cuts, &|x| init.eval(x)),
                };
                values.push(v);
            }
        }
    }
    for (i, &v) in values.iter().enumerate() {
        let j = first + 2 * i as i64;
        check_state(v, bounds, || format!("cell average at j={j}"))?;
    }
    Ok(StaggeredField::new(0, first, values, pad_left, pad_right))
}

/// `k_j^n = k(x_j, t^n)` on `Ω_n`, right-continuous in `x`.
pub fn sample_coefficient(
    coefficient: &CoefficientSpec,
    lattice: &LatticeSpec,
    n: usize,
) -> Result<StaggeredField> {
    let t = lattice.t(n);
    let first = lattice.first_index(n);
    let len = lattice.level_len(n);
    let mut values = Vec::with_capacity(len);
    for i in 0..len {
        let j = first + 2 * i as i64;
        let k = coefficient.eval(lattice.x(j), t);
        if !(k >= coefficient.alpha && k <= coefficient.beta) {
            return Err(Error::OutOfRange(format!(
                "coefficient k({}, {t}) = {k} lies outside [{}, {}]",
                lattice.x(j),
                coefficient.alpha,
                coefficient.beta
            )));
        }
        values.push(k);
    }
    Ok(StaggeredField::new(
        n,
        first,
        values,
        coefficient.far_left(),
        coefficient.far_right(),
    ))
}

/// One step from level `n` to `n + 1` over the whole window.
pub fn lxf_step(
    u: &StaggeredField,
    k: &StaggeredField,
    lattice: &LatticeSpec,
    flux: &FluxSpec,
) -> Result<StaggeredField> {
    debug_assert_eq!(u.level, k.level);
    debug_assert_eq!(u.first, k.first);
    let n = u.level;
    let half_lambda = 0.5 * lattice.lambda;
    let f = &flux.f;
    let flux_at = |j: i64| f(k.get(j), u.get(j));
    let first = lattice.first_index(n + 1);
    let len = lattice.level_len(n + 1);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let j = first + 2 * i as i64;
        let v = 0.5 * (u.get(j - 1) + u.get(j + 1)) - half_lambda * (flux_at(j + 1) - flux_at(j - 1));
        if !v.is_finite() {
            return Err(Error::NumericalBlowUp {
                level: n + 1,
                index: j,
            });
        }
        out.push(v);
    }
    Ok(StaggeredField::new(n + 1, first, out, u.pad_left, u.pad_right))
}

/// Advances a problem level by level without keeping the history.
pub struct Stepper<'a> {
    problem: &'a ProblemSpec,
    lattice: &'a LatticeSpec,
    u: StaggeredField,
    k: StaggeredField,
}

impl<'a> Stepper<'a> {
    pub fn new(problem: &'a ProblemSpec, lattice: &'a LatticeSpec) -> Result<Self> {
        Ok(Self {
            u: init_cell_averages(&problem.init, &problem.bounds, lattice)?,
            k: sample_coefficient(&problem.coefficient, lattice, 0)?,
            problem,
            lattice,
        })
    }

    pub fn level(&self) -> usize {
        self.u.level
    }

    pub fn state(&self) -> &StaggeredField {
        &self.u
    }

    pub fn coefficient(&self) -> &StaggeredField {
        &self.k
    }

    pub fn step(&mut self) -> Result<()> {
        let next = lxf_step(&self.u, &self.k, self.lattice, &self.problem.flux)?;
        self.k = sample_coefficient(&self.problem.coefficient, self.lattice, next.level)?;
        self.u = next;
        Ok(())
    }
}

/// `∫ u^Δ(x, t^n) dx` over `[x_{j_min−1}, x_{j_max+1}]`, counting the pad state
/// on the half cells a level of odd parity leaves uncovered.
pub fn level_mass(u: &StaggeredField, lattice: &LatticeSpec) -> f64 {
    let dx = lattice.dx;
    let mut acc: NeumaierSum = u.values.iter().map(|v| 2.0 * dx * v).collect();
    acc.add((u.first - lattice.j_min) as f64 * dx * u.pad_left);
    acc.add((lattice.j_max - u.last()) as f64 * dx * u.pad_right);
    acc.value()
}

/// Flux of the pad states through the left and right ends of the window.
pub fn far_field_fluxes(problem: &ProblemSpec) -> (f64, f64) {
    let f = &problem.flux;
    (
        f.eval(problem.coefficient.far_left(), problem.init.pad_left()),
        f.eval(problem.coefficient.far_right(), problem.init.pad_right()),
    )
}

/// Complete history `U_j^n`, `k_j^n` for `n = 0..=N+1`.
#[derive(Clone, Debug)]
pub struct StaggeredTrajectory {
    pub lattice: LatticeSpec,
    pub u_levels: Vec<StaggeredField>,
    pub k_levels: Vec<StaggeredField>,
    pub problem: ProblemSpec,
}

pub fn run(problem: &ProblemSpec, lattice: &LatticeSpec) -> Result<StaggeredTrajectory> {
    let levels = lattice.levels();
    let mut stepper = Stepper::new(problem, lattice)?;
    let mut u_levels = Vec::with_capacity(levels);
    let mut k_levels = Vec::with_capacity(levels);
    u_levels.push(stepper.state().clone());
    k_levels.push(stepper.coefficient().clone());
    for _ in 1..levels {
        stepper.step()?;
        u_levels.push(stepper.state().clone());
        k_levels.push(stepper.coefficient().clone());
    }
    Ok(StaggeredTrajectory {
        lattice: *lattice,
        u_levels,
        k_levels,
        problem: problem.clone(),
    })
}

impl StaggeredTrajectory {
    /// Assembles a trajectory from precomputed levels.
    pub fn from_levels(
        problem: ProblemSpec,
        lattice: LatticeSpec,
        u_levels: Vec<StaggeredField>,
        k_levels: Vec<StaggeredField>,
    ) -> Self {
        assert_eq!(u_levels.len(), k_levels.len());
        Self {
            lattice,
            u_levels,
            k_levels,
            problem,
        }
    }

    /// Index of the last stored level, `N + 1`.
    pub fn last_level(&self) -> usize {
        self.u_levels.len() - 1
    }

    #[inline]
    pub fn u(&self, n: usize, j: i64) -> f64 {
        self.u_levels[n].get(j)
    }

    #[inline]
    pub fn k(&self, n: usize, j: i64) -> f64 {
        self.k_levels[n].get(j)
    }

    /// Smallest and largest stored state over all levels.
    pub fn state_range(&self) -> (f64, f64) {
        self.u_levels
            .iter()
            .flat_map(|l| l.values.iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mass(&self, n: usize) -> f64 {
        level_mass(&self.u_levels[n], &self.lattice)
    }

    pub fn reconstruct(&self) -> Reconstruction<'_> {
        Reconstruction { traj: self }
    }
}

/// `u^Δ(x, t) = U_j^n` on `[x_{j−1}, x_{j+1}) × [t^n, t^{n+1})`.
#[derive(Clone, Copy)]
pub struct Reconstruction<'a> {
    traj: &'a StaggeredTrajectory,
}

/// The cell of parity `parity` holding index-unit coordinate `y`.
#[inline]
pub fn cell_containing(y: f64, parity: i64) -> i64 {
    parity + 2 * ((y + 1.0 - parity as f64) / 2.0).floor() as i64
}

impl Reconstruction<'_> {
    /// Time level whose strip holds `t`.
    pub fn level_at(&self, t: f64) -> Result<usize> {
        let l = &self.traj.lattice;
        let last = self.traj.last_level();
        if !(t >= 0.0) || t > l.horizon + l.dt * (1.0 + GRID_SNAP) {
            return Err(Error::OutOfRange(format!(
                "time {t} lies outside [0, T + dt] = [0, {}]",
                l.horizon + l.dt
            )));
        }
        let n = snap_index(t / l.dt).floor() as usize;
        Ok(n.min(last))
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let n = self.level_at(t)?;
        Ok(self.eval_level(x, n))
    }

    /// `u^Δ(x, t^n)`.
    pub fn eval_level(&self, x: f64, n: usize) -> f64 {
        let y = snap_index(x / self.traj.lattice.dx);
        let j = cell_containing(y, (n % 2) as i64);
        self.traj.u(n, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::problem::builtin_problem;

    #[test]
    fn edge_snapping() {
        assert_eq!(snap_to_edge(0.0, 0.1), -0.1);
        assert!((snap_to_edge(0.26, 0.1) - 0.3).abs() < 1e-15);
        assert!((snap_to_edge(-0.31, 0.1) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn hand_evaluated_step() {
        let problem = builtin_problem("burgers-riemann").unwrap();
        let lattice = LatticeSpec::with_indices(1.0, 0.5, -2, 2, 1);
        let u = StaggeredField::new(0, -2, vec![0.0, 0.0, 1.0], 0.0, 1.0);
        let k = StaggeredField::new(0, -2, vec![1.0; 3], 1.0, 1.0);
        let next = lxf_step(&u, &k, &lattice, &problem.flux).unwrap();
        assert_eq!(next.first, -1);
        assert_eq!(next.get(1), 0.375);
    }

    #[test]
    fn constant_state_is_preserved() {
        let problem = builtin_problem("twoflux-traffic").unwrap();
        let lattice = LatticeSpec::with_indices(0.1, 0.02, -10, 10, 1);
        let u = StaggeredField::new(0, -10, vec![0.4; 11], 0.4, 0.4);
        let k = StaggeredField::new(0, -10, vec![1.5; 11], 1.5, 1.5);
        let next = lxf_step(&u, &k, &lattice, &problem.flux).unwrap();
        assert!(next.values.iter().all(|&v| v == 0.4));
    }

    #[test]
    fn riemann_average_is_exact() {
        let problem = builtin_problem("burgers-riemann").unwrap();
        let lattice = build_lattice(&problem, 50, 0.1).unwrap();
        let u0 = init_cell_averages(&problem.init, &problem.bounds, &lattice).unwrap();
        for (j, v) in u0.iter() {
            let expected = if j < 0 { 1.0 } else { 0.0 };
            assert_eq!(v, expected, "j={j}");
        }
    }

    #[test]
    fn odd_profile_averages_to_zero() {
        let init = InitialDataSpec::custom(|x| x, (-0.5, 0.5), -0.5, 0.5);
        let bounds = Bounds::new(-1.0, 1.0, 1.0, 1.0).unwrap();
        let lattice = LatticeSpec::with_indices(0.05, 0.01, -20, 20, 0);
        let u0 = init_cell_averages(&init, &bounds, &lattice).unwrap();
        assert!(u0.get(0).abs() < 1e-17);
        assert!((u0.get(4) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn out_of_bounds_data_is_rejected() {
        let init = InitialDataSpec::constant(1.5);
        let bounds = Bounds::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let lattice = LatticeSpec::with_indices(0.1, 0.05, -4, 4, 0);
        assert!(init_cell_averages(&init, &bounds, &lattice).is_err());
    }

    #[test]
    fn coefficient_samples_right_value_on_jump() {
        let lattice = LatticeSpec::with_indices(0.1, 0.1, -4, 10, 6);
        let k = CoefficientSpec::piecewise(vec![0.0], vec![1.0, 2.0]).unwrap();
        let k0 = sample_coefficient(&k, &lattice, 0).unwrap();
        assert_eq!(k0.get(0), 2.0);
        assert_eq!(k0.get(-2), 1.0);
        let line = CoefficientSpec::jump_along_line(0.0, 1.0, 1.0, 2.0);
        let k5 = sample_coefficient(&line, &lattice, 5).unwrap();
        assert_eq!(k5.get(5), 2.0);
        assert_eq!(k5.get(3), 1.0);
    }

    #[test]
    fn reconstruction_is_half_open() {
        let problem = builtin_problem("burgers-riemann").unwrap();
        let lattice = LatticeSpec::with_indices(0.5, 0.25, -4, 4, 1);
        let u0 = StaggeredField::new(0, -4, vec![1.0, 2.0, 3.0, 4.0, 5.0], 1.0, 5.0);
        let u1 = StaggeredField::new(1, -3, vec![1.5, 2.5, 3.5, 4.5], 1.0, 5.0);
        let k0 = StaggeredField::new(0, -4, vec![1.0; 5], 1.0, 1.0);
        let k1 = StaggeredField::new(1, -3, vec![1.0; 4], 1.0, 1.0);
        let traj = StaggeredTrajectory::from_levels(problem, lattice, vec![u0, u1], vec![k0, k1]);
        let r = traj.reconstruct();
        assert_eq!(r.eval(0.0, 0.0).unwrap(), 3.0);
        assert_eq!(r.eval(0.5, 0.0).unwrap(), 4.0);
        assert_eq!(r.eval(0.49, 0.1).unwrap(), 3.0);
        assert_eq!(r.eval(0.0, 0.25).unwrap(), 3.5);
        assert_eq!(r.eval(-0.5, 0.3).unwrap(), 2.5);
        assert_eq!(r.eval(100.0, 0.0).unwrap(), 5.0);
        assert!(r.eval(0.0, 0.6).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let mut problem = builtin_problem("twoflux-traffic").unwrap();
        problem.init = InitialDataSpec::constant(0.0);
        let lattice = build_lattice(&problem, 40, 0.1).unwrap();
        let traj = run(&problem, &lattice).unwrap();
        assert_eq!(traj.state_range(), (0.0, 0.0));
    }
}
