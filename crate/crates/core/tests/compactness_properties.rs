use proptest::prelude::*;

use lxf_core::compactness::{
    discrete_spatial_sum, gamma_lower_bound, spatial_modulus, temporal_modulus, FrozenSplit,
    InteractionContext, InteractionState, Shift,
};
use lxf_core::problem::InitialDataSpec;
use lxf_core::{build_lattice, builtin_problem, run, StaggeredTrajectory, WeightFunction};

fn staircase_run(name: &str, breaks: Vec<f64>, values: Vec<f64>, cells: usize) -> StaggeredTrajectory {
    let mut p = builtin_problem(name).unwrap();
    p.init = InitialDataSpec::piecewise(breaks, values).unwrap();
    run(&p, &build_lattice(&p, cells, 0.1).unwrap()).unwrap()
}

fn data() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-0.7f64..0.7, 3), prop::collection::vec(0.0f64..=1.0, 4)).prop_map(
        |(mut b, v)| {
            b.sort_by(f64::total_cmp);
            b.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
            let n = b.len() + 1;
            (b, v[..n].to_vec())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_dominates_its_bound(name in prop::sample::select(vec!["burgers-riemann", "twoflux-convex"]),
                                 k in 0.0f64..=1.0, u in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let p = builtin_problem(name).unwrap();
        let k = p.bounds.alpha + k * (p.bounds.beta - p.bounds.alpha);
        let nl = p.entropy.nonlinearity.unwrap();
        let s = FrozenSplit::new(&p.flux, &p.entropy, k, u, k, v);
        prop_assert!(s.gamma() - gamma_lower_bound(&nl, s.du) >= -1e-12 * (1.0 + s.scale));
        prop_assert_eq!(s.dk_f, 0.0);
    }

    #[test]
    fn anti_differences_match_double_sums((b, v) in data(), nu in 1usize..5, n in 0usize..6, decay in any::<bool>()) {
        let traj = staircase_run("moving-jump", b, v, 12);
        let chi = if decay { WeightFunction::RationalDecay { exponent: 1.0 } } else { WeightFunction::Unit };
        let ctx = InteractionContext::new(&traj, &traj.problem.entropy, chi);
        let f = ctx.fields(Shift::Spatial(nu), n).unwrap();
        let dx = traj.lattice.dx;
        let st = InteractionState::from_fields(&f, dx);
        let mut double = 0.0;
        for (i, a) in f.a.iter().enumerate() {
            for d in &f.d[i..] {
                double += dx * dx * a * d;
            }
        }
        let scale = f.a.iter().chain(&f.d).fold(0.0f64, |m, x| m.max(x.abs())).powi(2) * dx * dx * f.a.len() as f64;
        prop_assert!((st.interaction - double).abs() <= 1e-12 * scale.max(1e-300));
        let total_a: f64 = f.a.iter().map(|x| dx * x).sum();
        prop_assert!((st.anti_a.last().unwrap() - total_a).abs() <= 1e-13);
        prop_assert!((st.anti_d_at(f.first - 2) - st.anti_d[0]).abs() == 0.0);
        prop_assert_eq!(st.anti_a_at(f.first - 2), 0.0);
    }

    #[test]
    fn lattice_shift_modulus_is_the_lattice_sum((b, v) in data(), nu in 1usize..8) {
        let traj = staircase_run("twoflux-convex", b, v, 20);
        let l = traj.lattice;
        let m = spatial_modulus(&traj, &WeightFunction::Unit, 2.0 * nu as f64 * l.dx, l.t(l.n_max + 1)).unwrap();
        let s = discrete_spatial_sum(&traj, nu, l.n_max + 1);
        prop_assert!((m - s).abs() <= 1e-12 * s.max(1e-300));
    }

    #[test]
    fn moduli_are_bounded_by_total_mass((b, v) in data(), h in 0.01f64..0.5, tau in 0.01f64..0.2) {
        let traj = staircase_run("twoflux-traffic", b, v, 20);
        let chi = WeightFunction::Unit;
        let horizon = traj.lattice.t(traj.lattice.n_max);
        let m = spatial_modulus(&traj, &chi, h, horizon).unwrap();
        let mt = temporal_modulus(&traj, &chi, tau.min(0.9 * horizon), horizon).unwrap();
        // |u(x+h) − u(x)| ≤ 1 on a set of measure at most 2·(window + h).
        let l = traj.lattice;
        let width = l.x(l.j_max + 1) - l.x(l.j_min - 1);
        prop_assert!(m >= 0.0 && m <= horizon * (width + h) + 1e-12);
        prop_assert!(mt >= 0.0 && mt <= horizon * width + 1e-12);
    }
}

#[test]
fn constant_data_has_zero_moduli_and_fields() {
    let mut p = builtin_problem("twoflux-traffic").unwrap();
    p.init = InitialDataSpec::constant(0.4);
    p.coefficient = lxf_core::problem::CoefficientSpec::constant(1.5).with_bounds(1.0, 2.0);
    let traj = run(&p, &build_lattice(&p, 20, 0.1).unwrap()).unwrap();
    let chi = WeightFunction::Unit;
    assert_eq!(spatial_modulus(&traj, &chi, 0.1, 0.3).unwrap(), 0.0);
    assert_eq!(temporal_modulus(&traj, &chi, 0.05, 0.3).unwrap(), 0.0);
    let ctx = InteractionContext::new(&traj, &p.entropy, chi);
    assert!(ctx.fields(Shift::Spatial(2), 3).unwrap().is_zero());
    assert!(ctx.fields(Shift::Temporal(2), 3).unwrap().is_zero());
}
