//! Entropy production
//!
//! `Ψ_j^n = S(k_j^{n+1}, U_j^{n+1}) − ½(S_{j−1}^n + S_{j+1}^n) + (λ/2)(Q_{j+1}^n − Q_{j−1}^n)`,
//!
//! its cell-wise bounds with explicit constants, and the weighted
//! dissipation sums.

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeSpec;
use crate::problem::{Bounds, EntropyPairSpec, FluxSpec};
use crate::scheme::StaggeredTrajectory;
use crate::sum::NeumaierSum;
use crate::weight::WeightFunction;

/// Relative slack allowed on the cell-wise inequalities.
pub const BOUND_TOLERANCE: f64 = 1e-12;

/// Constants of the two cell-wise bounds on `Ψ_j^n`.
///
/// With `ΔU = U_{j+1}^n − U_{j−1}^n` and `Δk = k_{j+1}^n − k_{j−1}^n`:
///
/// * `Ψ ≤ −(γκ²/8) ΔU² + λK₁|Δk| + K̃₁|k_j^{n+1} − k_{j−1}^n|` for convex `S`;
/// * `|Ψ| ≤ K₂ ΔU² + K₃|Δk| + K₄|k_j^{n+1} − ½(k_{j−1}^n + k_{j+1}^n)|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyConstants {
    pub gamma: f64,
    pub kappa: f64,
    pub lambda: f64,
    /// Bound on `|Φ(0)|/|Δk|`: `(λ/2)‖∂_uS‖‖∂_kf‖ + ½‖∂_kS‖ + (λ/2)‖∂_kQ‖`.
    pub c_phi0: f64,
    /// `λK₁ = (λ/2)(b−a)‖∂²_uS‖‖∂_kf‖ + c_phi0`.
    pub lambda_k1: f64,
    /// `K̃₁ = ‖∂_kS‖`.
    pub k1_tilde: f64,
    /// `K₂ = ‖∂²_uS‖`.
    pub k2: f64,
    /// `K₃ = (λ/2)(b−a)‖∂²_uS‖‖∂_kf‖ + c_phi0 + ½‖∂_kS‖`.
    pub k3: f64,
    /// `K₄ = ‖∂_kS‖`.
    pub k4: f64,
}

impl EntropyConstants {
    pub fn new(pair: &EntropyPairSpec, flux: &FluxSpec, bounds: &Bounds, lattice: &LatticeSpec) -> Self {
        let n = &pair.norms;
        let half_lambda = 0.5 * lattice.lambda;
        let c_phi0 = half_lambda * n.du_s * flux.dk_lipschitz + 0.5 * n.dk_s + half_lambda * n.dk_q;
        let slope = half_lambda * (bounds.b - bounds.a) * n.duu_s * flux.dk_lipschitz;
        Self {
            gamma: pair.gamma,
            kappa: lattice.kappa,
            lambda: lattice.lambda,
            c_phi0,
            lambda_k1: slope + c_phi0,
            k1_tilde: n.dk_s,
            k2: n.duu_s,
            k3: slope + c_phi0 + 0.5 * n.dk_s,
            k4: n.dk_s,
        }
    }
}

/// `Ψ_j^n` for `j ∈ Ω'_n` across the window; zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProductionField {
    pub level: usize,
    pub first: i64,
    pub values: Vec<f64>,
}

impl EntropyProductionField {
    #[inline]
    pub fn get(&self, j: i64) -> f64 {
        if j < self.first {
            return 0.0;
        }
        self.values
            .get(((j - self.first) / 2) as usize)
            .copied()
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.first + 2 * i as i64, v))
    }
}

/// The four entropy terms entering `Ψ_j^n`, with their magnitude scale.
struct PsiParts {
    psi: f64,
    scale: f64,
}

fn psi_parts(traj: &StaggeredTrajectory, pair: &EntropyPairSpec, n: usize, j: i64) -> PsiParts {
    let half_lambda = 0.5 * traj.lattice.lambda;
    let s_new = pair.entropy(traj.k(n + 1, j), traj.u(n + 1, j));
    let (kl, ul) = (traj.k(n, j - 1), traj.u(n, j - 1));
    let (kr, ur) = (traj.k(n, j + 1), traj.u(n, j + 1));
    let (sl, sr) = (pair.entropy(kl, ul), pair.entropy(kr, ur));
    let (ql, qr) = (pair.entropy_flux(kl, ul), pair.entropy_flux(kr, ur));
    PsiParts {
        psi: s_new - 0.5 * (sl + sr) + half_lambda * (qr - ql),
        scale: s_new.abs() + 0.5 * (sl.abs() + sr.abs()) + half_lambda * (qr.abs() + ql.abs()),
    }
}

/// `Ψ^n` on `Ω'_n`; needs levels `n` and `n + 1`.
pub fn entropy_production(
    traj: &StaggeredTrajectory,
    pair: &EntropyPairSpec,
    n: usize,
) -> EntropyProductionField {
    let l = &traj.lattice;
    let first = l.first_index(n + 1);
    let values = (0..l.level_len(n + 1))
        .map(|i| psi_parts(traj, pair, n, first + 2 * i as i64).psi)
        .collect();
    EntropyProductionField {
        level: n,
        first,
        values,
    }
}

/// `Ψ^n` for `n = 0..=N`.
pub fn entropy_productions(
    traj: &StaggeredTrajectory,
    pair: &EntropyPairSpec,
) -> Vec<EntropyProductionField> {
    (0..traj.last_level())
        .map(|n| entropy_production(traj, pair, n))
        .collect()
}

/// One cell's entropy production against both bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellBound {
    pub n: usize,
    pub j: i64,
    pub psi: f64,
    /// Right side of the dissipation bound (meaningful only for convex `S`).
    pub dissipation_rhs: f64,
    /// Right side of the bound on `|Ψ|`.
    pub abs_rhs: f64,
    /// Magnitude of the terms composing `Ψ`, for relative tolerances.
    pub scale: f64,
}

impl CellBound {
    pub fn dissipation_margin(&self) -> f64 {
        self.dissipation_rhs - self.psi
    }

    pub fn abs_margin(&self) -> f64 {
        self.abs_rhs - self.psi.abs()
    }
}

/// Both right-hand sides for every cell of `Ω'_n`, `n = 0..=N`.
pub fn cell_bounds(traj: &StaggeredTrajectory, pair: &EntropyPairSpec) -> Vec<CellBound> {
    let l = &traj.lattice;
    let c = EntropyConstants::new(pair, &traj.problem.flux, &traj.problem.bounds, l);
    let mut out = Vec::new();
    for n in 0..traj.last_level() {
        let first = l.first_index(n + 1);
        for i in 0..l.level_len(n + 1) {
            let j = first + 2 * i as i64;
            let parts = psi_parts(traj, pair, n, j);
            let du = traj.u(n, j + 1) - traj.u(n, j - 1);
            let (kl, kr, knew) = (traj.k(n, j - 1), traj.k(n, j + 1), traj.k(n + 1, j));
            let dk = (kr - kl).abs();
            let dissipation_rhs = -(c.gamma * c.kappa * c.kappa / 8.0) * du * du
                + c.lambda_k1 * dk
                + c.k1_tilde * (knew - kl).abs();
            let abs_rhs = c.k2 * du * du + c.k3 * dk + c.k4 * (knew - 0.5 * (kl + kr)).abs();
            out.push(CellBound {
                n,
                j,
                psi: parts.psi,
                dissipation_rhs,
                abs_rhs,
                scale: parts.scale,
            });
        }
    }
    out
}

/// Summary of the cell-wise checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationCheck {
    pub constants: EntropyConstants,
    /// Whether the dissipation bound applies (uniformly convex entropy).
    pub dissipation_applies: bool,
    pub dissipation_violations: usize,
    pub abs_violations: usize,
    /// Smallest `rhs − Ψ` over all cells.
    pub worst_dissipation_margin: f64,
    /// Smallest `rhs − |Ψ|` over all cells.
    pub worst_abs_margin: f64,
    pub cells: usize,
}

impl DissipationCheck {
    pub fn passed(&self) -> bool {
        self.abs_violations == 0 && (!self.dissipation_applies || self.dissipation_violations == 0)
    }
}

/// Verifies both bounds cell by cell, allowing `1e-12` times the cell's
/// term magnitude for rounding.
pub fn check_dissipation_bounds(traj: &StaggeredTrajectory, pair: &EntropyPairSpec) -> DissipationCheck {
    let constants = EntropyConstants::new(pair, &traj.problem.flux, &traj.problem.bounds, &traj.lattice);
    let cells = cell_bounds(traj, pair);
    let mut check = DissipationCheck {
        constants,
        dissipation_applies: pair.gamma > 0.0,
        dissipation_violations: 0,
        abs_violations: 0,
        worst_dissipation_margin: f64::INFINITY,
        worst_abs_margin: f64::INFINITY,
        cells: cells.len(),
    };
    for c in &cells {
        let tol = BOUND_TOLERANCE * (1.0 + c.scale);
        let dm = c.dissipation_margin();
        let am = c.abs_margin();
        check.worst_dissipation_margin = check.worst_dissipation_margin.min(dm);
        check.worst_abs_margin = check.worst_abs_margin.min(am);
        if dm < -tol {
            check.dissipation_violations += 1;
        }
        if am < -tol {
            check.abs_violations += 1;
        }
    }
    check
}

/// `Δx Σ_{n=0}^{n_end} Σ_{j∈Ω'_n} χ_{j−1}(U_{j+1}^n − U_{j−1}^n)²`.
pub fn weighted_dissipation_sum_through(
    traj: &StaggeredTrajectory,
    chi: &WeightFunction,
    n_end: usize,
) -> f64 {
    let l = &traj.lattice;
    let mut total = NeumaierSum::new();
    for n in 0..=n_end.min(traj.last_level() - 1) {
        let mut level = NeumaierSum::new();
        for j in l.sublattice_complement(n) {
            let d = traj.u(n, j + 1) - traj.u(n, j - 1);
            level.add(chi.eval(l.x(j - 1)) * d * d);
        }
        total.add(l.dx * level.value());
    }
    total.value()
}

/// Dissipation sum over `n = 0..=N`.
pub fn weighted_dissipation_sum(traj: &StaggeredTrajectory, chi: &WeightFunction) -> f64 {
    weighted_dissipation_sum_through(traj, chi, traj.last_level() - 1)
}

/// `Σ_{n=0}^{n_end} ∫ χ (u^Δ(·,t^{n+1}) − u^Δ(·,t^n))²` split into half cells,
/// with `χ` sampled at `x_{j−1}` on both halves of cell `j`.
pub fn temporal_square_sum_through(
    traj: &StaggeredTrajectory,
    chi: &WeightFunction,
    n_end: usize,
) -> f64 {
    temporal_squares(traj, n_end, |j, _, _| traj.lattice.dx * chi.eval(traj.lattice.x(j - 1)))
}

pub fn temporal_square_sum(traj: &StaggeredTrajectory, chi: &WeightFunction) -> f64 {
    temporal_square_sum_through(traj, chi, traj.last_level() - 1)
}

/// The same sum with `χ` integrated over each half cell instead of sampled.
pub fn temporal_square_integral(traj: &StaggeredTrajectory, chi: &WeightFunction) -> f64 {
    temporal_squares(traj, traj.last_level() - 1, |_, lo, hi| chi.integrate(lo, hi))
}

fn temporal_squares(
    traj: &StaggeredTrajectory,
    n_end: usize,
    weight: impl Fn(i64, f64, f64) -> f64,
) -> f64 {
    let l = &traj.lattice;
    let mut total = NeumaierSum::new();
    for n in 0..=n_end.min(traj.last_level() - 1) {
        let mut level = NeumaierSum::new();
        // Half cells outside the stored range of level n + 1 compare pad
        // with pad and contribute nothing.
        for j in l.sublattice_complement(n) {
            let new = traj.u(n + 1, j);
            let left = new - traj.u(n, j - 1);
            let right = new - traj.u(n, j + 1);
            level.add(weight(j, l.x(j - 1), l.x(j)) * left * left);
            level.add(weight(j, l.x(j), l.x(j + 1)) * right * right);
        }
        total.add(level.value());
    }
    total.value()
}

/// `Δx Σ_n Σ_{j∈Ω'_n} χ_j |Ψ_j^n|` over `n = 0..=N`.
pub fn psi_weighted_mass(
    traj: &StaggeredTrajectory,
    pair: &EntropyPairSpec,
    chi: &WeightFunction,
) -> f64 {
    let l = &traj.lattice;
    let mut total = NeumaierSum::new();
    for n in 0..traj.last_level() {
        let psi = entropy_production(traj, pair, n);
        let level: NeumaierSum = psi.iter().map(|(j, v)| chi.eval(l.x(j)) * v.abs()).collect();
        total.add(l.dx * level.value());
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::problem::{builtin_problem, InitialDataSpec};
    use crate::scheme::run;

    #[test]
    fn constant_state_has_no_production() {
        let mut p = builtin_problem("burgers-riemann").unwrap();
        p.init = InitialDataSpec::constant(0.3);
        let l = build_lattice(&p, 20, 0.1).unwrap();
        let traj = run(&p, &l).unwrap();
        for field in entropy_productions(&traj, &p.entropy) {
            assert!(field.values.iter().all(|&v| v == 0.0));
        }
        assert_eq!(weighted_dissipation_sum(&traj, &WeightFunction::Unit), 0.0);
        assert_eq!(psi_weighted_mass(&traj, &p.entropy, &WeightFunction::Unit), 0.0);
    }

    #[test]
    fn burgers_production_is_nonpositive_and_bounded() {
        let p = builtin_problem("burgers-riemann").unwrap();
        let l = build_lattice(&p, 50, 0.1).unwrap();
        let traj = run(&p, &l).unwrap();
        let check = check_dissipation_bounds(&traj, &p.entropy);
        assert!(check.passed(), "{check:?}");
        for field in entropy_productions(&traj, &p.entropy) {
            assert!(field.values.iter().all(|&v| v <= 1e-15));
        }
    }

    #[test]
    fn unit_weight_dominates_decay() {
        let p = builtin_problem("twoflux-convex").unwrap();
        let l = build_lattice(&p, 50, 0.1).unwrap();
        let traj = run(&p, &l).unwrap();
        let decay = WeightFunction::rational_decay(1.0).unwrap();
        assert!(
            weighted_dissipation_sum(&traj, &WeightFunction::Unit)
                >= weighted_dissipation_sum(&traj, &decay)
        );
        let unit = WeightFunction::Unit;
        let sampled = temporal_square_sum(&traj, &unit);
        let integrated = temporal_square_integral(&traj, &unit);
        assert!((sampled - integrated).abs() <= 1e-13 * sampled);
    }
}
