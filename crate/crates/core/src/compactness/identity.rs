//! Discrete interaction identity.
//!
//! Summed over `n = 0..=M` (`M = N` spatially, `M = N − θ` temporally):
//!
//! ```text
//! ½ΔtΔx ΣΣ_{Ω_n} (A_j E_j − D_j B_j)
//!     = −Δx ΣΣ_{Ω'_n} C_{D,j} 𝒜_j^{n+1} − Δx ΣΣ_{Ω'_n} C_{A,j} ½(𝒟_{j−1}^n + 𝒟_{j+1}^n)
//!       + I^{M+1} − I^0 + R₁ + R₂ + R₃ + R₄
//! ```
//!
//! with remainders
//! `R₁ = (λ/4)ΔtΔx ΣΣ E_{j−1}(B_{j+1} − B_{j−1})`,
//! `R₂ = −¼ΔtΔx ΣΣ B_{j+1}(D_{j+1} − D_{j−1})`,
//! `R₃ = −(1/4λ)ΔtΔx ΣΣ (D_{j−1} + λE_{j−1})(A_{j+1} − A_{j−1})`,
//! `R₄ = −½ΔtΔx ΣΣ E_{j−1} C_{A,j}`, all over `j ∈ Ω'_n`.
//!
//! Splitting `AE − DB` at frozen `k` also gives
//! `½ΔtΔx ΣΣ χ²Γ = S₁ + S₂ + (right-hand side above)`.

use serde::{Deserialize, Serialize};

use super::fields::{DifferenceFields, InteractionContext, InteractionState, Shift};
use crate::error::Result;
use crate::sum::NeumaierSum;

/// Every term of both identities for one shift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub shift: Shift,
    /// Last summed level `M`.
    pub last_level: usize,
    /// `½ΔtΔx ΣΣ (AE − DB)`.
    pub lhs: f64,
    /// `Δx ΣΣ C_A ½(𝒟_{j−1} + 𝒟_{j+1})`, entering with a minus sign.
    pub s3: f64,
    /// `Δx ΣΣ C_D 𝒜^{n+1}`, entering with a minus sign.
    pub s4: f64,
    pub i_end: f64,
    pub i_start: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    /// `R₁ + R₂ + R₃ + R₄`.
    pub remainder: f64,
    pub rhs: f64,
    pub residual: f64,
    pub normalized_residual: f64,
    /// `½ΔtΔx ΣΣ χ²Γ`.
    pub gamma_sum: f64,
    /// `ΔtΔx ΣΣ ½χ²(Δ^uS Δ^kf − ΔU Δ^kQ)`.
    pub s1: f64,
    /// `ΔtΔx ΣΣ ½χ² Δ^kS (Δ^uf + Δ^kf)`.
    pub s2: f64,
    pub gamma_residual: f64,
    pub gamma_normalized_residual: f64,
    /// `max_n sup_j |𝒜_j^n|`.
    pub sup_anti_a: f64,
    /// `max_n sup_j |𝒟_j^n|`.
    pub sup_anti_d: f64,
    /// Shift length: `2νΔx` or `θΔt`.
    pub offset: f64,
    /// For temporal shifts, `max_n Δx Σ_{m=n}^{n+θ−1} Σ_j χ_j|Ψ_j^m|`; zero otherwise.
    pub psi_window_mass: f64,
    /// `sup|𝒜| / offset`.
    pub anti_a_ratio: f64,
    /// `sup|𝒟| / (offset + psi_window_mass)`.
    pub anti_d_ratio: f64,
}

impl IdentityReport {
    /// `(name, value)` rows in a fixed order.
    pub fn terms(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("lhs", self.lhs),
            ("s3", self.s3),
            ("s4", self.s4),
            ("i_end", self.i_end),
            ("i_start", self.i_start),
            ("r1", self.r1),
            ("r2", self.r2),
            ("r3", self.r3),
            ("r4", self.r4),
            ("remainder", self.remainder),
            ("rhs", self.rhs),
            ("residual", self.residual),
            ("normalized_residual", self.normalized_residual),
            ("gamma_sum", self.gamma_sum),
            ("s1", self.s1),
            ("s2", self.s2),
            ("gamma_residual", self.gamma_residual),
            ("gamma_normalized_residual", self.gamma_normalized_residual),
            ("sup_anti_a", self.sup_anti_a),
            ("sup_anti_d", self.sup_anti_d),
            ("offset", self.offset),
            ("psi_window_mass", self.psi_window_mass),
            ("anti_a_ratio", self.anti_a_ratio),
            ("anti_d_ratio", self.anti_d_ratio),
        ]
    }
}

fn normalized(residual: f64, scales: &[f64]) -> f64 {
    let s = scales.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
    residual.abs() / s
}

#[derive(Default)]
struct LevelSums {
    lhs: NeumaierSum,
    s3: NeumaierSum,
    s4: NeumaierSum,
    r: [NeumaierSum; 4],
    gamma: NeumaierSum,
    s1: NeumaierSum,
    s2: NeumaierSum,
}

fn level_sums(
    ctx: &InteractionContext<'_>,
    now: &DifferenceFields,
    state: &InteractionState,
    next: &InteractionState,
) -> LevelSums {
    let lambda = ctx.traj.lattice.lambda;
    let mut s = LevelSums::default();
    for (i, ((&a, &b), (&d, &e))) in now.a.iter().zip(&now.b).zip(now.d.iter().zip(&now.e)).enumerate() {
        let j = now.first + 2 * i as i64;
        s.lhs.add(a * e - d * b);
        let split = ctx.frozen_split(now.shift, now.level, j);
        let chi = ctx.chi_at(j);
        let w = chi * chi;
        s.gamma.add(w * split.gamma());
        s.s1.add(w * (split.du_s * split.dk_f - split.du * split.dk_q));
        s.s2.add(w * split.dk_s * (split.du_f + split.dk_f));
    }
    for (i, (&c_a, &c_d)) in now.c_a.iter().zip(&now.c_d).enumerate() {
        let j = now.first_prime + 2 * i as i64;
        s.s4.add(c_d * next.anti_a_at(j));
        s.s3.add(c_a * 0.5 * (state.anti_d_at(j - 1) + state.anti_d_at(j + 1)));
        let (el, bl, br) = (now.e(j - 1), now.b(j - 1), now.b(j + 1));
        let (dl, dr, al, ar) = (now.d(j - 1), now.d(j + 1), now.a(j - 1), now.a(j + 1));
        s.r[0].add(el * (br - bl));
        s.r[1].add(br * (dr - dl));
        s.r[2].add((dl + lambda * el) * (ar - al));
        s.r[3].add(el * c_a);
    }
    s
}

/// Evaluates both identities for `shift` over the whole trajectory.
pub fn interaction_identity(ctx: &InteractionContext<'_>, shift: Shift) -> Result<IdentityReport> {
    ctx.check_shift(shift)?;
    let l = &ctx.traj.lattice;
    let (dx, dt, lambda) = (l.dx, l.dt, l.lambda);
    let last = ctx
        .last_source_level(shift)
        .ok_or_else(|| crate::Error::InvalidShift(format!("no levels to sum for {shift}")))?;

    let mut now = ctx.fields(shift, 0)?;
    let mut state = InteractionState::from_fields(&now, dx);
    let i_start = state.interaction;
    let mut sup_a = state.sup_anti_a();
    let mut sup_d = state.sup_anti_d();

    let mut lhs = NeumaierSum::new();
    let mut s3 = NeumaierSum::new();
    let mut s4 = NeumaierSum::new();
    let mut r: [NeumaierSum; 4] = Default::default();
    let mut gamma = NeumaierSum::new();
    let mut s1 = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();

    for n in 0..=last {
        let next_fields = ctx.fields(shift, n + 1)?;
        let next = InteractionState::from_fields(&next_fields, dx);
        let sums = level_sums(ctx, &now, &state, &next);
        lhs.add(sums.lhs.value());
        s3.add(sums.s3.value());
        s4.add(sums.s4.value());
        for (acc, v) in r.iter_mut().zip(&sums.r) {
            acc.add(v.value());
        }
        gamma.add(sums.gamma.value());
        s1.add(sums.s1.value());
        s2.add(sums.s2.value());
        sup_a = sup_a.max(next.sup_anti_a());
        sup_d = sup_d.max(next.sup_anti_d());
        now = next_fields;
        state = next;
    }
    let i_end = state.interaction;

    let lhs = 0.5 * dt * dx * lhs.value();
    let s3 = dx * s3.value();
    let s4 = dx * s4.value();
    let r1 = 0.25 * lambda * dt * dx * r[0].value();
    let r2 = -0.25 * dt * dx * r[1].value();
    let r3 = -0.25 / lambda * dt * dx * r[2].value();
    let r4 = -0.5 * dt * dx * r[3].value();
    let remainder = NeumaierSum::from_iter([r1, r2, r3, r4]).value();
    let rhs = NeumaierSum::from_iter([-s4, -s3, i_end, -i_start, remainder]).value();
    let residual = lhs - rhs;
    let normalized_residual = normalized(residual, &[lhs, i_end, i_start, s3, s4, remainder]);

    let gamma_sum = 0.5 * dt * dx * gamma.value();
    let s1 = 0.5 * dt * dx * s1.value();
    let s2 = 0.5 * dt * dx * s2.value();
    let gamma_rhs = NeumaierSum::from_iter([s1, s2, -s4, -s3, i_end, -i_start, remainder]).value();
    let gamma_residual = gamma_sum - gamma_rhs;
    let gamma_normalized_residual = normalized(
        gamma_residual,
        &[gamma_sum, s1, s2, i_end, i_start, s3, s4, remainder],
    );

    let (offset, psi_window_mass) = match shift {
        Shift::Spatial(nu) => (2.0 * nu as f64 * dx, 0.0),
        Shift::Temporal(theta) => (theta as f64 * dt, psi_window_mass(ctx, theta)),
    };

    Ok(IdentityReport {
        shift,
        last_level: last,
        lhs,
        s3,
        s4,
        i_end,
        i_start,
        r1,
        r2,
        r3,
        r4,
        remainder,
        rhs,
        residual,
        normalized_residual,
        gamma_sum,
        s1,
        s2,
        gamma_residual,
        gamma_normalized_residual,
        sup_anti_a: sup_a,
        sup_anti_d: sup_d,
        offset,
        psi_window_mass,
        anti_a_ratio: sup_a / offset,
        anti_d_ratio: sup_d / (offset + psi_window_mass),
    })
}

fn psi_window_mass(ctx: &InteractionContext<'_>, theta: usize) -> f64 {
    let dx = ctx.traj.lattice.dx;
    let masses: Vec<f64> = ctx
        .psi_levels()
        .iter()
        .map(|psi| {
            dx * psi
                .iter()
                .map(|(j, v)| ctx.chi_at(j) * v.abs())
                .collect::<NeumaierSum>()
                .value()
        })
        .collect();
    if theta == 0 {
        return 0.0;
    }
    masses
        .windows(theta.min(masses.len()))
        .map(|w| w.iter().copied().collect::<NeumaierSum>().value())
        .fold(0.0, f64::max)
}
