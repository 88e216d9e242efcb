//! The staggered space-time grid `x_j = jΔx`, `t^n = nΔt`, with values living
//! on the sublattice `j + n` even.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{FluxSpec, ProblemSpec};

/// Admissible range for the mesh ratio `λ = Δt/Δx`.
pub const LAMBDA_RANGE: (f64, f64) = (0.1, 10.0);

/// Default cap on trajectory storage.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

/// Extra padding, in cells, beyond the domain of dependence. A spatial shift
/// `ν` of the difference fields needs at least `ν` cells.
pub const DEFAULT_SHIFT_MARGIN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dx: f64,
    pub dt: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub j_min: i64,
    pub j_max: i64,
    /// `N = ⌊T/Δt⌋`; the trajectory holds levels `0..=N+1`.
    pub n_max: usize,
    pub horizon: f64,
    /// Padding cells reserved for spatial shifts.
    pub shift_margin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeOptions {
    pub kappa: f64,
    /// Overrides the problem's horizon.
    pub horizon: Option<f64>,
    pub memory_budget_bytes: usize,
    pub shift_margin: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        Self {
            kappa: 0.1,
            horizon: None,
            memory_budget_bytes: DEFAULT_MEMORY_BUDGET,
            shift_margin: DEFAULT_SHIFT_MARGIN,
        }
    }
}

/// Lattice with `cells` cells of width `2Δx` across the problem's domain.
pub fn build_lattice(problem: &ProblemSpec, cells: usize, kappa: f64) -> Result<LatticeSpec> {
    build_lattice_with(
        problem,
        cells,
        &LatticeOptions {
            kappa,
            ..LatticeOptions::default()
        },
    )
}

pub fn build_lattice_with(
    problem: &ProblemSpec,
    cells: usize,
    opts: &LatticeOptions,
) -> Result<LatticeSpec> {
    if cells == 0 {
        return Err(Error::InvalidLattice("cell count must be positive".into()));
    }
    let horizon = opts.horizon.unwrap_or(problem.horizon);
    let dx = (problem.domain.1 - problem.domain.0) / (2.0 * cells as f64);
    build_lattice_window_with(
        problem.active_window(horizon),
        dx,
        opts.kappa,
        &problem.flux,
        horizon,
        opts.memory_budget_bytes,
        opts.shift_margin,
    )
}

/// Lattice covering `window` with CFL-limited time step and padding wide
/// enough that the data never reaches the window edges before `horizon`.
pub fn build_lattice_window(
    window: (f64, f64),
    dx: f64,
    kappa: f64,
    flux: &FluxSpec,
    horizon: f64,
) -> Result<LatticeSpec> {
    build_lattice_window_with(
        window,
        dx,
        kappa,
        flux,
        horizon,
        DEFAULT_MEMORY_BUDGET,
        DEFAULT_SHIFT_MARGIN,
    )
}

pub fn build_lattice_window_with(
    window: (f64, f64),
    dx: f64,
    kappa: f64,
    flux: &FluxSpec,
    horizon: f64,
    memory_budget_bytes: usize,
    shift_margin: usize,
) -> Result<LatticeSpec> {
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::InvalidLattice(format!("dx must be positive, got {dx}")));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::InvalidLattice(format!(
            "kappa must lie in (0, 1) for the CFL condition lambda*|df/du| <= 1 - kappa, got {kappa}"
        )));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidLattice(format!("horizon must be nonnegative, got {horizon}")));
    }
    if !(window.0 <= window.1) {
        return Err(Error::InvalidLattice(format!("empty window {window:?}")));
    }
    let speed = flux.du_lipschitz;
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(Error::InvalidLattice(format!(
            "CFL condition needs 0 < |df/du| < inf, got {speed}"
        )));
    }
    let mut lambda = (1.0 - kappa) / speed;
    if lambda < LAMBDA_RANGE.0 {
        return Err(Error::InvalidLattice(format!(
            "CFL condition forces lambda = {lambda} below {}",
            LAMBDA_RANGE.0
        )));
    }
    lambda = lambda.min(LAMBDA_RANGE.1);
    let dt = lambda * dx;
    let n_max = (horizon / dt * (1.0 + 1e-12)).floor() as usize;

    let reach = (n_max + 2 + 2 * shift_margin) as f64;
    let j_min = 2 * ((window.0 / dx - reach) / 2.0).floor() as i64;
    let j_max = 2 * ((window.1 / dx + reach) / 2.0).ceil() as i64;

    let per_level = ((j_max - j_min) / 2 + 1) as usize;
    let bytes = (n_max + 2)
        .saturating_mul(per_level)
        .saturating_mul(2 * std::mem::size_of::<f64>());
    if bytes > memory_budget_bytes {
        return Err(Error::MemoryBudget(format!(
            "trajectory needs {bytes} bytes, budget is {memory_budget_bytes}"
        )));
    }

    Ok(LatticeSpec {
        dx,
        dt,
        lambda,
        kappa,
        j_min,
        j_max,
        n_max,
        horizon,
        shift_margin,
    })
}

impl LatticeSpec {
    /// Direct construction from index bounds, without CFL or padding logic.
    pub fn with_indices(dx: f64, dt: f64, j_min: i64, j_max: i64, n_max: usize) -> Self {
        Self {
            dx,
            dt,
            lambda: dt / dx,
            kappa: 0.0,
            j_min,
            j_max,
            n_max,
            horizon: n_max as f64 * dt,
            shift_margin: 0,
        }
    }

    #[inline]
    pub fn x(&self, j: i64) -> f64 {
        j as f64 * self.dx
    }

    #[inline]
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Number of stored levels, `N + 2`.
    pub fn levels(&self) -> usize {
        self.n_max + 2
    }

    /// Smallest window index with `j + n` even.
    pub fn first_index(&self, n: usize) -> i64 {
        let j = self.j_min;
        if (j + n as i64).rem_euclid(2) == 0 {
            j
        } else {
            j + 1
        }
    }

    /// Largest window index with `j + n` even.
    pub fn last_index(&self, n: usize) -> i64 {
        let j = self.j_max;
        if (j + n as i64).rem_euclid(2) == 0 {
            j
        } else {
            j - 1
        }
    }

    pub fn level_len(&self, n: usize) -> usize {
        let (lo, hi) = (self.first_index(n), self.last_index(n));
        if hi < lo {
            0
        } else {
            ((hi - lo) / 2 + 1) as usize
        }
    }

    /// `Ω_n` clipped to the window.
    pub fn sublattice(&self, n: usize) -> Vec<i64> {
        (self.first_index(n)..=self.last_index(n)).step_by(2).collect()
    }

    /// `Ω'_n = Ω_{n+1}` clipped to the window.
    pub fn sublattice_complement(&self, n: usize) -> Vec<i64> {
        self.sublattice(n + 1)
    }
}

/// Values on one sublattice level; reads outside the window return the pad
/// state on that side.
#[derive(Clone, Debug, PartialEq)]
pub struct StaggeredField {
    pub level: usize,
    /// Index of `values[0]`.
    pub first: i64,
    pub values: Vec<f64>,
    pub pad_left: f64,
    pub pad_right: f64,
}

impl StaggeredField {
    pub fn new(level: usize, first: i64, values: Vec<f64>, pad_left: f64, pad_right: f64) -> Self {
        debug_assert!((first + level as i64).rem_euclid(2) == 0);
        Self {
            level,
            first,
            values,
            pad_left,
            pad_right,
        }
    }

    /// Index of the last stored value.
    pub fn last(&self) -> i64 {
        self.first + 2 * (self.values.len() as i64 - 1)
    }

    #[inline]
    pub fn get(&self, j: i64) -> f64 {
        debug_assert!((j + self.level as i64).rem_euclid(2) == 0, "parity");
        if j < self.first {
            self.pad_left
        } else {
            let slot = ((j - self.first) / 2) as usize;
            match self.values.get(slot) {
                Some(v) => *v,
                None => self.pad_right,
            }
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |i| self.first + 2 * i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.indices().zip(self.values.iter().copied())
    }
}
