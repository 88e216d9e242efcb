//! The frozen-coefficient interaction integrand
//!
//! `Γ = ΔU (Q(k, U⁺) − Q(k, U)) − (S(k, U⁺) − S(k, U))(f(k, U⁺) − f(k, U))`
//!
//! with `k = k_j^n` held fixed, `U = U_j^n` and `U⁺` the shifted state, and
//! its lower bound `Γ ≥ C_fS |ΔU|^{p_f + p_S + 2}`.

use serde::{Deserialize, Serialize};

use super::fields::{InteractionContext, Shift};
use crate::error::Result;
use crate::problem::{EntropyPairSpec, FluxSpec, Nonlinearity};

/// Relative slack on `Γ ≥ bound`.
pub const GAMMA_TOLERANCE: f64 = 1e-12;

/// Differences at one cell, split into a state part at frozen `k` (`du_*`)
/// and a coefficient part at the shifted state (`dk_*`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrozenSplit {
    pub du: f64,
    pub du_f: f64,
    pub du_s: f64,
    pub du_q: f64,
    pub dk_f: f64,
    pub dk_s: f64,
    pub dk_q: f64,
    /// Magnitude of the products in `Γ`, for tolerances.
    pub scale: f64,
}

impl FrozenSplit {
    pub fn new(flux: &FluxSpec, pair: &EntropyPairSpec, k0: f64, u0: f64, k1: f64, u1: f64) -> Self {
        let f = |k, u| flux.eval(k, u);
        let s = |k, u| pair.entropy(k, u);
        let q = |k, u| pair.entropy_flux(k, u);
        let (f00, f01, f11) = (f(k0, u0), f(k0, u1), f(k1, u1));
        let (s00, s01, s11) = (s(k0, u0), s(k0, u1), s(k1, u1));
        let (q00, q01, q11) = (q(k0, u0), q(k0, u1), q(k1, u1));
        let du = u1 - u0;
        Self {
            du,
            du_f: f01 - f00,
            du_s: s01 - s00,
            du_q: q01 - q00,
            dk_f: f11 - f01,
            dk_s: s11 - s01,
            dk_q: q11 - q01,
            scale: du.abs() * (q01.abs() + q00.abs()) + (s01.abs() + s00.abs()) * (f01.abs() + f00.abs()),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.du * self.du_q - self.du_s * self.du_f
    }
}

impl InteractionContext<'_> {
    /// Split at `(n, j)` for the given shift.
    pub fn frozen_split(&self, shift: Shift, n: usize, j: i64) -> FrozenSplit {
        let t = self.traj;
        let (n1, j1) = match shift {
            Shift::Spatial(nu) => (n, j + 2 * nu as i64),
            Shift::Temporal(theta) => (n + theta, j),
        };
        FrozenSplit::new(
            &t.problem.flux,
            self.pair,
            t.k(n, j),
            t.u(n, j),
            t.k(n1, j1),
            t.u(n1, j1),
        )
    }
}

/// `Γ` and its lower bound at one cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaMargin {
    pub n: usize,
    pub j: i64,
    pub gamma: f64,
    pub bound: f64,
    pub scale: f64,
}

impl GammaMargin {
    pub fn margin(&self) -> f64 {
        self.gamma - self.bound
    }

    pub fn holds(&self) -> bool {
        self.margin() >= -GAMMA_TOLERANCE * (1.0 + self.scale)
    }
}

/// `C_fS |ΔU|^{p_f + p_S + 2}`.
pub fn gamma_lower_bound(nl: &Nonlinearity, du: f64) -> f64 {
    nl.c_fs() * du.abs().powf(nl.gamma_power())
}

/// Outcome of checking `Γ ≥ C_fS|ΔU|^p` on every cell of a shift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaCheck {
    pub shift: Shift,
    pub cells: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub margins: Vec<GammaMargin>,
}

impl GammaCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks the `Γ` bound over `n = 0..=last_field_level`. Needs asserted
/// nonlinearity constants; returns `None` otherwise.
pub fn check_gamma(ctx: &InteractionContext<'_>, shift: Shift) -> Result<Option<GammaCheck>> {
    ctx.check_shift(shift)?;
    let Some(nl) = ctx.pair.nonlinearity else {
        return Ok(None);
    };
    let l = &ctx.traj.lattice;
    let mut margins = Vec::new();
    for n in 0..=ctx.last_field_level(shift) {
        for j in l.sublattice(n) {
            let split = ctx.frozen_split(shift, n, j);
            margins.push(GammaMargin {
                n,
                j,
                gamma: split.gamma(),
                bound: gamma_lower_bound(&nl, split.du),
                scale: split.scale,
            });
        }
    }
    let violations = margins.iter().filter(|m| !m.holds()).count();
    let worst_margin = margins.iter().map(GammaMargin::margin).fold(f64::INFINITY, f64::min);
    Ok(Some(GammaCheck {
        shift,
        cells: margins.len(),
        violations,
        worst_margin,
        margins,
    }))
}

/// Worst `Γ − bound` over random `(k, u, v)` drawn by `sample`, which maps a
/// draw index to a triple inside the bounds. Returns the worst margin and
/// the number of violations.
pub fn sample_gamma_bound(
    flux: &FluxSpec,
    pair: &EntropyPairSpec,
    nl: &Nonlinearity,
    samples: usize,
    mut sample: impl FnMut(usize) -> (f64, f64, f64),
) -> (f64, usize) {
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for i in 0..samples {
        let (k, u, v) = sample(i);
        let split = FrozenSplit::new(flux, pair, k, u, k, v);
        let m = split.gamma() - gamma_lower_bound(nl, split.du);
        if m < -GAMMA_TOLERANCE * (1.0 + split.scale) {
            violations += 1;
        }
        worst = worst.min(m);
    }
    (worst, violations)
}
