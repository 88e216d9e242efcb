//! Shifted difference fields and their anti-differences.
//!
//! For a shift `Δ` (spatial `Z_{j+2ν} − Z_j` or temporal `Z_j^{n+θ} − Z_j^n`):
//! `A = χΔU`, `B = χΔf`, `D = χΔS`, `E = χΔQ` on `Ω_n`, and on `Ω'_n`
//!
//! `C_A = −½ΔU_{j+1}(χ_{j+1}−χ_j) + ½ΔU_{j−1}(χ_j−χ_{j−1}) + (λ/2)Δf_{j+1}(χ_{j+1}−χ_j) + (λ/2)Δf_{j−1}(χ_j−χ_{j−1})`,
//!
//! with `C_D` the same expression in `S, Q` plus `χ_jΔΨ_j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::{entropy_production, EntropyProductionField};
use crate::error::{Error, Result};
use crate::problem::EntropyPairSpec;
use crate::scheme::StaggeredTrajectory;
use crate::sum::NeumaierSum;
use crate::weight::WeightFunction;

/// Spatial shift by `2ν` indices or temporal shift by `θ` levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shift {
    Spatial(usize),
    Temporal(usize),
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::Spatial(nu) => write!(f, "nu={nu}"),
            Shift::Temporal(theta) => write!(f, "theta={theta}"),
        }
    }
}

/// Quantities carried per level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    U = 0,
    F = 1,
    S = 2,
    Q = 3,
}

struct LevelValues {
    first: i64,
    values: [Vec<f64>; 4],
    pad_left: [f64; 4],
    pad_right: [f64; 4],
}

impl LevelValues {
    #[inline]
    fn get(&self, q: Quantity, j: i64) -> f64 {
        let q = q as usize;
        if j < self.first {
            return self.pad_left[q];
        }
        let slot = ((j - self.first) / 2) as usize;
        match self.values[q].get(slot) {
            Some(v) => *v,
            None => self.pad_right[q],
        }
    }
}

/// Reads `v[(j − first)/2]`, zero outside the stored range.
#[inline]
pub(crate) fn at(v: &[f64], first: i64, j: i64) -> f64 {
    if j < first {
        return 0.0;
    }
    v.get(((j - first) / 2) as usize).copied().unwrap_or(0.0)
}

/// Per-level values of `U, f, S, Q`, the entropy productions and the weight,
/// evaluated once for a trajectory.
pub struct InteractionContext<'a> {
    pub traj: &'a StaggeredTrajectory,
    pub pair: &'a EntropyPairSpec,
    pub chi: WeightFunction,
    levels: Vec<LevelValues>,
    psi: Vec<EntropyProductionField>,
    chi_first: i64,
    chi_values: Vec<f64>,
}

impl<'a> InteractionContext<'a> {
    pub fn new(traj: &'a StaggeredTrajectory, pair: &'a EntropyPairSpec, chi: WeightFunction) -> Self {
        let flux = &traj.problem.flux;
        let levels = traj
            .u_levels
            .iter()
            .zip(&traj.k_levels)
            .map(|(u, k)| {
                let eval = |k: f64, u: f64| [u, flux.eval(k, u), pair.entropy(k, u), pair.entropy_flux(k, u)];
                let mut values: [Vec<f64>; 4] = Default::default();
                for (&uj, &kj) in u.values.iter().zip(&k.values) {
                    for (dst, v) in values.iter_mut().zip(eval(kj, uj)) {
                        dst.push(v);
                    }
                }
                LevelValues {
                    first: u.first,
                    values,
                    pad_left: eval(k.pad_left, u.pad_left),
                    pad_right: eval(k.pad_right, u.pad_right),
                }
            })
            .collect();
        let psi = (0..traj.last_level())
            .map(|n| entropy_production(traj, pair, n))
            .collect();
        let l = &traj.lattice;
        let chi_first = l.j_min - 1;
        let chi_values = (chi_first..=l.j_max + 1).map(|j| chi.eval(l.x(j))).collect();
        Self {
            traj,
            pair,
            chi,
            levels,
            psi,
            chi_first,
            chi_values,
        }
    }

    /// `χ_j = χ(x_j)`.
    #[inline]
    pub fn chi_at(&self, j: i64) -> f64 {
        let i = j - self.chi_first;
        if i >= 0 && (i as usize) < self.chi_values.len() {
            self.chi_values[i as usize]
        } else {
            self.chi.eval(self.traj.lattice.x(j))
        }
    }

    #[inline]
    pub fn value(&self, q: Quantity, n: usize, j: i64) -> f64 {
        self.levels[n].get(q, j)
    }

    /// `Ψ_j^n`, zero outside the window.
    #[inline]
    pub fn psi(&self, n: usize, j: i64) -> f64 {
        self.psi[n].get(j)
    }

    pub fn psi_levels(&self) -> &[EntropyProductionField] {
        &self.psi
    }

    #[inline]
    pub fn delta(&self, shift: Shift, q: Quantity, n: usize, j: i64) -> f64 {
        match shift {
            Shift::Spatial(nu) => self.value(q, n, j + 2 * nu as i64) - self.value(q, n, j),
            Shift::Temporal(theta) => self.value(q, n + theta, j) - self.value(q, n, j),
        }
    }

    #[inline]
    fn delta_psi(&self, shift: Shift, n: usize, j: i64) -> f64 {
        match shift {
            Shift::Spatial(nu) => self.psi(n, j + 2 * nu as i64) - self.psi(n, j),
            Shift::Temporal(theta) => self.psi(n + theta, j) - self.psi(n, j),
        }
    }

    /// Last level at which `A, B, D, E` exist for this shift.
    pub fn last_field_level(&self, shift: Shift) -> usize {
        let last = self.traj.last_level();
        match shift {
            Shift::Spatial(_) => last,
            Shift::Temporal(theta) => last.saturating_sub(theta),
        }
    }

    /// Last level at which `C_A, C_D` exist (they need `Ψ`).
    pub fn last_source_level(&self, shift: Shift) -> Option<usize> {
        let last_psi = self.traj.last_level().checked_sub(1)?;
        match shift {
            Shift::Spatial(_) => Some(last_psi),
            Shift::Temporal(theta) => last_psi.checked_sub(theta),
        }
    }

    /// Rejects shifts the padding cannot absorb or the horizon cannot hold.
    pub fn check_shift(&self, shift: Shift) -> Result<()> {
        let l = &self.traj.lattice;
        match shift {
            Shift::Spatial(nu) if nu > l.shift_margin && nu > 0 => Err(Error::InvalidShift(format!(
                "spatial shift nu={nu} exceeds the padding margin of {} cells",
                l.shift_margin
            ))),
            Shift::Temporal(theta) if theta % 2 != 0 => Err(Error::InvalidShift(format!(
                "temporal shift theta={theta} must be even"
            ))),
            Shift::Temporal(theta) if theta > l.n_max => Err(Error::InvalidShift(format!(
                "temporal shift theta={theta} exceeds N={}",
                l.n_max
            ))),
            _ => Ok(()),
        }
    }

    /// The six fields at level `n`; `c_a`, `c_d` are empty past
    /// [`last_source_level`](Self::last_source_level).
    pub fn fields(&self, shift: Shift, n: usize) -> Result<DifferenceFields> {
        self.check_shift(shift)?;
        if n > self.last_field_level(shift) {
            return Err(Error::OutOfRange(format!(
                "level {n} has no difference fields for shift {shift}"
            )));
        }
        let l = &self.traj.lattice;
        let first = l.first_index(n);
        let len = l.level_len(n);
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        let mut d = Vec::with_capacity(len);
        let mut e = Vec::with_capacity(len);
        for i in 0..len {
            let j = first + 2 * i as i64;
            let chi = self.chi_at(j);
            a.push(chi * self.delta(shift, Quantity::U, n, j));
            b.push(chi * self.delta(shift, Quantity::F, n, j));
            d.push(chi * self.delta(shift, Quantity::S, n, j));
            e.push(chi * self.delta(shift, Quantity::Q, n, j));
        }

        let first_prime = l.first_index(n + 1);
        let mut c_a = Vec::new();
        let mut c_d = Vec::new();
        if self.last_source_level(shift).is_some_and(|m| n <= m) {
            let half_lambda = 0.5 * l.lambda;
            for i in 0..l.level_len(n + 1) {
                let j = first_prime + 2 * i as i64;
                let (cl, c0, cr) = (self.chi_at(j - 1), self.chi_at(j), self.chi_at(j + 1));
                let (wr, wl) = (cr - c0, c0 - cl);
                let term = |qu: Quantity, qf: Quantity| {
                    -0.5 * self.delta(shift, qu, n, j + 1) * wr
                        + 0.5 * self.delta(shift, qu, n, j - 1) * wl
                        + half_lambda * self.delta(shift, qf, n, j + 1) * wr
                        + half_lambda * self.delta(shift, qf, n, j - 1) * wl
                };
                c_a.push(term(Quantity::U, Quantity::F));
                c_d.push(term(Quantity::S, Quantity::Q) + c0 * self.delta_psi(shift, n, j));
            }
        }
        Ok(DifferenceFields {
            shift,
            level: n,
            first,
            a,
            b,
            d,
            e,
            first_prime,
            c_a,
            c_d,
        })
    }
}

/// Difference fields at one level: `a, b, d, e` on `Ω_n` starting at `first`,
/// `c_a, c_d` on `Ω'_n` starting at `first_prime`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceFields {
    pub shift: Shift,
    pub level: usize,
    pub first: i64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub first_prime: i64,
    pub c_a: Vec<f64>,
    pub c_d: Vec<f64>,
}

impl DifferenceFields {
    #[inline]
    pub fn a(&self, j: i64) -> f64 {
        at(&self.a, self.first, j)
    }
    #[inline]
    pub fn b(&self, j: i64) -> f64 {
        at(&self.b, self.first, j)
    }
    #[inline]
    pub fn d(&self, j: i64) -> f64 {
        at(&self.d, self.first, j)
    }
    #[inline]
    pub fn e(&self, j: i64) -> f64 {
        at(&self.e, self.first, j)
    }
    #[inline]
    pub fn c_a(&self, j: i64) -> f64 {
        at(&self.c_a, self.first_prime, j)
    }
    #[inline]
    pub fn c_d(&self, j: i64) -> f64 {
        at(&self.c_d, self.first_prime, j)
    }

    pub fn is_zero(&self) -> bool {
        [&self.a, &self.b, &self.d, &self.e, &self.c_a, &self.c_d]
            .iter()
            .all(|v| v.iter().all(|&x| x == 0.0))
    }
}

/// Anti-differences `𝒜_ℓ = Δx Σ_{j≤ℓ} A_j`, `𝒟_j = Δx Σ_{ℓ≥j} D_ℓ` and the
/// interaction functional `I = Δx Σ_j A_j 𝒟_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionState {
    pub level: usize,
    pub first: i64,
    pub anti_a: Vec<f64>,
    pub anti_d: Vec<f64>,
    pub interaction: f64,
}

impl InteractionState {
    pub fn from_fields(fields: &DifferenceFields, dx: f64) -> Self {
        let mut run = NeumaierSum::new();
        let anti_a = fields
            .a
            .iter()
            .map(|&v| {
                run.add(dx * v);
                run.value()
            })
            .collect();
        let mut run = NeumaierSum::new();
        let mut anti_d: Vec<f64> = fields
            .d
            .iter()
            .rev()
            .map(|&v| {
                run.add(dx * v);
                run.value()
            })
            .collect();
        anti_d.reverse();
        let interaction = dx
            * fields
                .a
                .iter()
                .zip(&anti_d)
                .map(|(a, d)| a * d)
                .collect::<NeumaierSum>()
                .value();
        Self {
            level: fields.level,
            first: fields.first,
            anti_a,
            anti_d,
            interaction,
        }
    }

    /// `𝒜_ℓ` for any `ℓ` of matching parity.
    #[inline]
    pub fn anti_a_at(&self, l: i64) -> f64 {
        if l < self.first || self.anti_a.is_empty() {
            0.0
        } else {
            let slot = ((l - self.first) / 2) as usize;
            *self.anti_a.get(slot).unwrap_or(self.anti_a.last().unwrap())
        }
    }

    /// `𝒟_j` for any `j` of matching parity.
    #[inline]
    pub fn anti_d_at(&self, j: i64) -> f64 {
        if self.anti_d.is_empty() {
            0.0
        } else if j < self.first {
            self.anti_d[0]
        } else {
            self.anti_d
                .get(((j - self.first) / 2) as usize)
                .copied()
                .unwrap_or(0.0)
        }
    }

    pub fn sup_anti_a(&self) -> f64 {
        self.anti_a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn sup_anti_d(&self) -> f64 {
        self.anti_d.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
