//! Translation moduli of the reconstruction `u^Δ`, integrated exactly over
//! its piecewise-constant structure.
//!
//! * spatial: `∫_0^T ∫ χ(x) |u^Δ(x+h, t) − u^Δ(x, t)| dx dt`
//! * temporal: `∫_0^{T−τ} ∫ χ(x) |u^Δ(x, t+τ) − u^Δ(x, t)| dx dt`

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{cell_containing, StaggeredTrajectory};
use crate::sum::NeumaierSum;
use crate::weight::WeightFunction;

/// Offsets within this relative distance of a grid multiple are snapped to it.
const OFFSET_SNAP: f64 = 1e-9;

fn snap(y: f64) -> f64 {
    let r = y.round();
    if (y - r).abs() <= OFFSET_SNAP * r.abs().max(1.0) {
        r
    } else {
        y
    }
}

/// `∫ χ` over `[p Δx, q Δx]` for index-unit endpoints.
fn chi_mass(chi: &WeightFunction, p: f64, q: f64, dx: f64) -> f64 {
    match chi {
        WeightFunction::Unit => (q - p) * dx,
        _ => chi.integrate(p * dx, q * dx),
    }
}

/// Time lengths of the strips `[nΔt, (n+1)Δt) ∩ [0, upper]`, `upper` in
/// units of `Δt`.
fn strips(upper: f64) -> impl Iterator<Item = (usize, f64)> {
    let count = upper.ceil().max(0.0) as usize;
    (0..count).map(move |n| (n, (upper.min(n as f64 + 1.0) - n as f64).max(0.0)))
}

/// `∫ χ |u^Δ(x+h, t^n) − u^Δ(x, t^n)| dx` with `h = s Δx`, `s > 0`.
fn spatial_level_integral(traj: &StaggeredTrajectory, chi: &WeightFunction, n: usize, s: f64) -> f64 {
    let l = &traj.lattice;
    let parity = (n % 2) as i64;
    let (e0, e1) = (l.first_index(n) - 1, l.last_index(n) + 1);
    let edges = (e0..=e1).step_by(2).map(|e| e as f64);
    let mut points: Vec<f64> = edges.clone().chain(edges.map(|e| e - s)).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let u = &traj.u_levels[n];
    let mut acc = NeumaierSum::new();
    for w in points.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = 0.5 * (p + q);
        let diff = u.get(cell_containing(mid + s, parity)) - u.get(cell_containing(mid, parity));
        if diff != 0.0 {
            acc.add(diff.abs() * chi_mass(chi, p, q, l.dx));
        }
    }
    acc.value()
}

/// `∫ χ |u^Δ(x, t^m) − u^Δ(x, t^n)| dx`.
fn level_distance(traj: &StaggeredTrajectory, chi: &WeightFunction, n: usize, m: usize) -> f64 {
    let l = &traj.lattice;
    let (un, um) = (&traj.u_levels[n], &traj.u_levels[m]);
    let (pn, pm) = ((n % 2) as i64, (m % 2) as i64);
    let mut acc = NeumaierSum::new();
    for y in (l.j_min - 1)..=l.j_max {
        let mid = y as f64 + 0.5;
        let diff = um.get(cell_containing(mid, pm)) - un.get(cell_containing(mid, pn));
        if diff != 0.0 {
            acc.add(diff.abs() * chi_mass(chi, y as f64, y as f64 + 1.0, l.dx));
        }
    }
    acc.value()
}

/// `∫ χ |u_a^Δ(x, t) − u_b^Δ(x, t)| dx` for two trajectories on possibly
/// different grids, integrated exactly over the union of both cell edge sets.
pub fn reconstruction_distance(
    a: &StaggeredTrajectory,
    b: &StaggeredTrajectory,
    chi: &WeightFunction,
    t: f64,
) -> Result<f64> {
    let (na, nb) = (a.reconstruct().level_at(t)?, b.reconstruct().level_at(t)?);
    let edges = |traj: &StaggeredTrajectory, n: usize| {
        let l = &traj.lattice;
        ((l.first_index(n) - 1)..=(l.last_index(n) + 1))
            .step_by(2)
            .map(|e| l.x(e))
            .collect::<Vec<_>>()
    };
    let mut points = edges(a, na);
    points.extend(edges(b, nb));
    points.sort_by(f64::total_cmp);
    points.dedup();
    let (ra, rb) = (a.reconstruct(), b.reconstruct());
    let mut acc = NeumaierSum::new();
    for w in points.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let diff = ra.eval_level(mid, na) - rb.eval_level(mid, nb);
        if diff != 0.0 {
            acc.add(diff.abs() * chi.integrate(w[0], w[1]));
        }
    }
    Ok(acc.value())
}

/// Spatial translation modulus at offset `h > 0` up to time `horizon`, which
/// may reach `t^{N+2}`.
pub fn spatial_modulus(traj: &StaggeredTrajectory, chi: &WeightFunction, h: f64, horizon: f64) -> Result<f64> {
    let l = &traj.lattice;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidShift(format!("spatial offset must be positive, got {h}")));
    }
    let upper = snap(horizon / l.dt);
    if !(upper >= 0.0) || upper > (traj.last_level() + 1) as f64 {
        return Err(Error::OutOfRange(format!(
            "time {horizon} exceeds the stored levels (up to {})",
            l.t(traj.last_level() + 1)
        )));
    }
    let s = snap(h / l.dx);
    let mut acc = NeumaierSum::new();
    for (n, len) in strips(upper) {
        if len > 0.0 {
            acc.add(len * l.dt * spatial_level_integral(traj, chi, n, s));
        }
    }
    Ok(acc.value())
}

/// Temporal translation modulus at offset `0 < τ < horizon`, with the
/// horizon at most `t^{N+1}`.
pub fn temporal_modulus(traj: &StaggeredTrajectory, chi: &WeightFunction, tau: f64, horizon: f64) -> Result<f64> {
    let l = &traj.lattice;
    let upper_total = snap(horizon / l.dt);
    if !(upper_total >= 0.0) || upper_total > traj.last_level() as f64 {
        return Err(Error::OutOfRange(format!(
            "time {horizon} exceeds t^(N+1) = {}",
            l.t(traj.last_level())
        )));
    }
    if !(tau > 0.0 && tau < horizon) {
        return Err(Error::InvalidShift(format!(
            "temporal offset must lie in (0, {horizon}), got {tau}"
        )));
    }
    let shift = snap(tau / l.dt);
    let whole = shift.floor();
    let frac = shift - whole;
    let m = whole as usize;
    let upper = snap(upper_total - shift);
    let mut acc = NeumaierSum::new();
    for (n, len) in strips(upper) {
        // `[n, n + 1 − frac)` lands on level n + m, the rest on n + m + 1.
        let first = len.min(1.0 - frac);
        let second = len - first;
        if first > 0.0 {
            acc.add(first * l.dt * level_distance(traj, chi, n, n + m));
        }
        if second > 0.0 {
            acc.add(second * l.dt * level_distance(traj, chi, n, n + m + 1));
        }
    }
    Ok(acc.value())
}

/// `2ΔtΔx Σ_{n<levels} Σ_j |U_{j+2ν}^n − U_j^n|`, the spatial modulus at
/// `h = 2νΔx` for the unit weight written as a lattice sum.
pub fn discrete_spatial_sum(traj: &StaggeredTrajectory, nu: usize, levels: usize) -> f64 {
    let l = &traj.lattice;
    let shift = 2 * nu as i64;
    let mut acc = NeumaierSum::new();
    for n in 0..levels {
        let u = &traj.u_levels[n];
        let level: NeumaierSum = (l.first_index(n) - shift..=l.last_index(n))
            .step_by(2)
            .map(|j| (u.get(j + shift) - u.get(j)).abs())
            .collect();
        acc.add(2.0 * l.dt * l.dx * level.value());
    }
    acc.value()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Spatial,
    Temporal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusSample {
    pub offset: f64,
    pub modulus: f64,
}

/// Modulus values over a set of offsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusCurve {
    pub axis: Axis,
    pub weight: WeightFunction,
    pub horizon: f64,
    pub samples: Vec<ModulusSample>,
}

impl ModulusCurve {
    pub fn compute(
        traj: &StaggeredTrajectory,
        axis: Axis,
        chi: WeightFunction,
        offsets: &[f64],
        horizon: f64,
    ) -> Result<Self> {
        let samples = offsets
            .iter()
            .map(|&offset| {
                let modulus = match axis {
                    Axis::Spatial => spatial_modulus(traj, &chi, offset, horizon)?,
                    Axis::Temporal => temporal_modulus(traj, &chi, offset, horizon)?,
                };
                Ok(ModulusSample { offset, modulus })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            axis,
            weight: chi,
            horizon,
            samples,
        })
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.offset, s.modulus)).collect()
    }
}

/// `count` geometrically spaced points in `[lo, hi]`.
pub fn geometric_offsets(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let r = (hi / lo).ln() / (count - 1) as f64;
            (0..count).map(|i| lo * (r * i as f64).exp()).collect()
        }
    }
}

/// Spatial offsets from `4Δx` to an eighth of the domain width.
pub fn default_spatial_offsets(traj: &StaggeredTrajectory, count: usize) -> Vec<f64> {
    let (a, b) = traj.problem.domain;
    geometric_offsets(4.0 * traj.lattice.dx, (b - a) / 8.0, count)
}

/// Temporal offsets from `4Δt` to a quarter of the horizon.
pub fn default_temporal_offsets(traj: &StaggeredTrajectory, horizon: f64, count: usize) -> Vec<f64> {
    geometric_offsets(4.0 * traj.lattice.dt, horizon / 4.0, count)
}
