//! The interaction identity checked against a brute-force evaluation that
//! rebuilds every field straight from the trajectory.

use lxf_core::compactness::{interaction_identity, InteractionContext, Shift};
use lxf_core::entropy::entropy_production;
use lxf_core::{build_lattice_with, builtin_problem, run, LatticeOptions, StaggeredTrajectory, WeightFunction};

struct Oracle<'a> {
    traj: &'a StaggeredTrajectory,
    chi: WeightFunction,
    shift: Shift,
}

impl Oracle<'_> {
    fn chi(&self, j: i64) -> f64 {
        self.chi.eval(self.traj.lattice.x(j))
    }

    /// `(n', j')` paired with `(n, j)` by the shift.
    fn partner(&self, n: usize, j: i64) -> (usize, i64) {
        match self.shift {
            Shift::Spatial(nu) => (n, j + 2 * nu as i64),
            Shift::Temporal(theta) => (n + theta, j),
        }
    }

    fn raw(&self, which: char, n: usize, j: i64) -> f64 {
        let t = self.traj;
        let (k, u) = (t.k(n, j), t.u(n, j));
        let p = &t.problem;
        match which {
            'u' => u,
            'f' => (p.flux.f)(k, u),
            's' => (p.entropy.s)(k, u),
            'q' => (p.entropy.q)(k, u),
            _ => unreachable!(),
        }
    }

    fn delta(&self, which: char, n: usize, j: i64) -> f64 {
        let (n1, j1) = self.partner(n, j);
        self.raw(which, n1, j1) - self.raw(which, n, j)
    }

    fn field(&self, which: char, n: usize, j: i64) -> f64 {
        let l = &self.traj.lattice;
        if j < l.first_index(n) || j > l.last_index(n) {
            return 0.0;
        }
        self.chi(j) * self.delta(which, n, j)
    }

    fn psi(&self, n: usize, j: i64) -> f64 {
        entropy_production(self.traj, &self.traj.problem.entropy, n).get(j)
    }

    fn c(&self, which: char, n: usize, j: i64) -> f64 {
        let lam = self.traj.lattice.lambda;
        let (cl, c0, cr) = (self.chi(j - 1), self.chi(j), self.chi(j + 1));
        let (zu, zf) = if which == 'a' { ('u', 'f') } else { ('s', 'q') };
        let mut v = -0.5 * self.delta(zu, n, j + 1) * (cr - c0)
            + 0.5 * self.delta(zu, n, j - 1) * (c0 - cl)
            + 0.5 * lam * self.delta(zf, n, j + 1) * (cr - c0)
            + 0.5 * lam * self.delta(zf, n, j - 1) * (c0 - cl);
        if which == 'd' {
            let (n1, j1) = self.partner(n, j);
            v += c0 * (self.psi(n1, j1) - self.psi(n, j));
        }
        v
    }

    fn range(&self, n: usize) -> Vec<i64> {
        self.traj.lattice.sublattice(n)
    }

    /// `Δx Σ_{ℓ≤j} A_ℓ` by direct summation.
    fn anti_a(&self, n: usize, j: i64) -> f64 {
        let dx = self.traj.lattice.dx;
        self.range(n).into_iter().filter(|&l| l <= j).map(|l| dx * self.field('u', n, l)).sum()
    }

    fn anti_d(&self, n: usize, j: i64) -> f64 {
        let dx = self.traj.lattice.dx;
        self.range(n).into_iter().filter(|&l| l >= j).map(|l| dx * self.field('s', n, l)).sum()
    }

    fn interaction(&self, n: usize) -> f64 {
        let dx = self.traj.lattice.dx;
        self.range(n).into_iter().map(|j| dx * self.field('u', n, j) * self.anti_d(n, j)).sum()
    }
}

fn trajectory(name: &str, cells: usize, horizon: f64) -> StaggeredTrajectory {
    let p = builtin_problem(name).unwrap();
    let opts = LatticeOptions {
        horizon: Some(horizon),
        shift_margin: 4,
        ..LatticeOptions::default()
    };
    let l = build_lattice_with(&p, cells, &opts).unwrap();
    run(&p, &l).unwrap()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-10 * scale.max(1e-12)
}

fn check(traj: &StaggeredTrajectory, chi: WeightFunction, shift: Shift) {
    let ctx = InteractionContext::new(traj, &traj.problem.entropy, chi);
    let rep = interaction_identity(&ctx, shift).unwrap();
    let o = Oracle { traj, chi, shift };
    let l = &traj.lattice;
    let (dx, dt, lam) = (l.dx, l.dt, l.lambda);

    let (mut lhs, mut s3, mut s4, mut r) = (0.0, 0.0, 0.0, [0.0; 4]);
    for n in 0..=rep.last_level {
        for j in o.range(n) {
            lhs += o.field('u', n, j) * o.field('q', n, j) - o.field('s', n, j) * o.field('f', n, j);
        }
        for j in o.range(n + 1) {
            let (ca, cd) = (o.c('a', n, j), o.c('d', n, j));
            s4 += cd * o.anti_a(n + 1, j);
            s3 += ca * 0.5 * (o.anti_d(n, j - 1) + o.anti_d(n, j + 1));
            let f = |w, i| o.field(w, n, i);
            r[0] += f('q', j - 1) * (f('f', j + 1) - f('f', j - 1));
            r[1] += f('f', j + 1) * (f('s', j + 1) - f('s', j - 1));
            r[2] += (f('s', j - 1) + lam * f('q', j - 1)) * (f('u', j + 1) - f('u', j - 1));
            r[3] += f('q', j - 1) * ca;
        }
    }
    let lhs = 0.5 * dt * dx * lhs;
    let (s3, s4) = (dx * s3, dx * s4);
    let r1 = 0.25 * lam * dt * dx * r[0];
    let r2 = -0.25 * dt * dx * r[1];
    let r3 = -0.25 / lam * dt * dx * r[2];
    let r4 = -0.5 * dt * dx * r[3];
    let i0 = o.interaction(0);
    let i1 = o.interaction(rep.last_level + 1);

    let scale = [lhs, s3, s4, i0, i1, r1, r2, r3, r4]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    for (name, got, want) in [
        ("lhs", rep.lhs, lhs),
        ("s3", rep.s3, s3),
        ("s4", rep.s4, s4),
        ("i_start", rep.i_start, i0),
        ("i_end", rep.i_end, i1),
        ("r1", rep.r1, r1),
        ("r2", rep.r2, r2),
        ("r3", rep.r3, r3),
        ("r4", rep.r4, r4),
    ] {
        assert!(close(got, want, scale), "{shift} {chi}: {name} {got} vs {want}");
    }
    // The identity holds for the independently computed terms.
    let rhs = -s4 - s3 + i1 - i0 + r1 + r2 + r3 + r4;
    assert!(close(lhs, rhs, scale), "{shift} {chi}: oracle residual {}", lhs - rhs);
    assert!(rep.normalized_residual < 1e-9, "{shift}: {}", rep.normalized_residual);
    assert!(rep.gamma_normalized_residual < 1e-9, "{shift}: {}", rep.gamma_normalized_residual);
    assert!(scale > 0.0, "degenerate test case");
}

#[test]
fn spatial_identity_matches_brute_force() {
    let traj = trajectory("twoflux-convex", 20, 0.25);
    for chi in [WeightFunction::Unit, WeightFunction::RationalDecay { exponent: 1.0 }] {
        for nu in [1, 3] {
            check(&traj, chi, Shift::Spatial(nu));
        }
    }
}

#[test]
fn temporal_identity_matches_brute_force() {
    let traj = trajectory("moving-jump", 20, 0.25);
    for chi in [WeightFunction::Unit, WeightFunction::RationalDecay { exponent: 1.5 }] {
        for theta in [2, 4] {
            check(&traj, chi, Shift::Temporal(theta));
        }
    }
}

#[test]
fn fields_vanish_near_window_edges() {
    let traj = trajectory("twoflux-convex", 20, 0.1);
    let ctx = InteractionContext::new(&traj, &traj.problem.entropy, WeightFunction::Unit);
    let f = ctx.fields(Shift::Spatial(4), 3).unwrap();
    assert_eq!(f.a[0], 0.0);
    assert_eq!(*f.a.last().unwrap(), 0.0);
    assert!(ctx.fields(Shift::Spatial(5), 3).is_err());
    assert!(ctx.fields(Shift::Temporal(3), 0).is_err());
}
