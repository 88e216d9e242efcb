//! Sample-based checks of the standing assumptions on a problem.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{linspace, ProblemSpec, ScalarFn};

/// Sample point at which a check failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub coordinates: Vec<(String, f64)>,
    pub detail: String,
}

impl Witness {
    fn new(coords: &[(&str, f64)], detail: String) -> Self {
        Self {
            coordinates: coords.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            detail,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, value)) in self.coordinates.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail { witness: Witness },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub name: String,
    pub outcome: CheckOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    /// True when no check failed (skipped checks are fine).
    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, CheckOutcome::Fail { .. }))
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.outcome)
    }

    fn push(&mut self, name: &str, outcome: CheckOutcome) {
        self.entries.push(ValidationEntry {
            name: name.to_string(),
            outcome,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.outcome {
                CheckOutcome::Pass => writeln!(f, "PASS    {}", e.name)?,
                CheckOutcome::Fail { witness } => writeln!(f, "FAIL    {} ({witness})", e.name)?,
                CheckOutcome::Skipped { reason } => writeln!(f, "SKIPPED {} ({reason})", e.name)?,
            }
        }
        Ok(())
    }
}

fn outcome(first_failure: Option<Witness>) -> CheckOutcome {
    match first_failure {
        None => CheckOutcome::Pass,
        Some(witness) => CheckOutcome::Fail { witness },
    }
}

/// Compares `derivative` against a centered difference of `g`.
fn derivative_check(
    g: &ScalarFn,
    derivative: &ScalarFn,
    in_u: bool,
    ks: &[f64],
    us: &[f64],
    step: f64,
    tol: f64,
    name: &str,
) -> Option<Witness> {
    for &k in ks {
        for &u in us {
            let fd = if in_u {
                (g(k, u + step) - g(k, u - step)) / (2.0 * step)
            } else {
                (g(k + step, u) - g(k - step, u)) / (2.0 * step)
            };
            let exact = derivative(k, u);
            if !((exact - fd).abs() <= tol * exact.abs().max(1.0)) {
                return Some(Witness::new(
                    &[("k", k), ("u", u)],
                    format!("{name} = {exact} but the centered difference gives {fd}"),
                ));
            }
        }
    }
    None
}

/// `d(k, v) − d(k, w) ≥ c (v − w)^p` over ordered sample pairs.
fn nonlinearity_check(
    d: &ScalarFn,
    c: f64,
    p: f64,
    ks: &[f64],
    us: &[f64],
) -> Option<Witness> {
    for &k in ks {
        for (i, &w) in us.iter().enumerate() {
            for &v in &us[i + 1..] {
                let (dv, dw) = (d(k, v), d(k, w));
                let lower = c * (v - w).powf(p);
                let slack = 1e-12 * (1.0 + dv.abs() + dw.abs());
                if !(dv - dw >= lower - slack) {
                    return Some(Witness::new(
                        &[("k", k), ("w", w), ("v", v)],
                        format!("derivative increment {} is below {lower}", dv - dw),
                    ));
                }
            }
        }
    }
    None
}

/// Checks every standing assumption on a deterministic sample grid.
pub fn validate_problem(p: &ProblemSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let b = &p.bounds;
    let ks = b.k_samples(9);
    let us = b.u_samples(17);
    let u_step = 1e-6 * (b.b - b.a).max(1.0);
    let k_step = 1e-6 * (b.beta - b.alpha).max(1.0);
    let (lo, hi) = p.active_window(p.horizon);
    let xs = linspace(lo - 0.25 * (hi - lo), hi + 0.25 * (hi - lo), 4097);

    let slack = 1e-15 * (b.b - b.a);
    let init_fail = xs
        .iter()
        .map(|&x| (x, p.init.eval(x)))
        .chain([(f64::NEG_INFINITY, p.init.pad_left()), (f64::INFINITY, p.init.pad_right())])
        .find(|&(_, u)| !(u >= b.a - slack && u <= b.b + slack))
        .map(|(x, u)| Witness::new(&[("x", x)], format!("u0 = {u} lies outside [{}, {}]", b.a, b.b)));
    report.push("initial-data-bounds", outcome(init_fail));

    let ts = linspace(0.0, p.horizon, 65);
    let mut coef_fail = None;
    'outer: for &t in &ts {
        for &x in &xs {
            let k = p.coefficient.eval(x, t);
            if !(k >= b.alpha && k <= b.beta) {
                coef_fail = Some(Witness::new(
                    &[("x", x), ("t", t)],
                    format!("k = {k} lies outside [{}, {}]", b.alpha, b.beta),
                ));
                break 'outer;
            }
        }
    }
    report.push("coefficient-bounds", outcome(coef_fail));

    let f = &p.flux;
    let flux_fail = derivative_check(&f.f, &f.df_du, true, &ks, &us, u_step, 1e-6, "df/du")
        .or_else(|| derivative_check(&f.f, &f.df_dk, false, &ks, &us, k_step, 1e-6, "df/dk"));
    report.push("flux-derivatives", outcome(flux_fail));

    if f.zero_at_ends {
        let scale = 1.0 + f.du_lipschitz * (b.b - b.a);
        let end_fail = b.k_samples(65).into_iter().find_map(|k| {
            [b.a, b.b].into_iter().find_map(|u| {
                let v = (f.f)(k, u);
                (!(v.abs() <= 1e-14 * scale))
                    .then(|| Witness::new(&[("k", k), ("u", u)], format!("f = {v} is not zero")))
            })
        });
        report.push("invariant-region", outcome(end_fail));
    } else {
        report.push(
            "invariant-region",
            CheckOutcome::Skipped {
                reason: "flux does not vanish at both ends of the state interval".into(),
            },
        );
    }

    let e = &p.entropy;
    let scale = 1.0 + e.norms.du_s * f.du_lipschitz;
    let mut compat_fail = None;
    'compat: for &k in &ks {
        for &u in &us {
            let fd = (e.q.as_ref()(k, u + u_step) - e.q.as_ref()(k, u - u_step)) / (2.0 * u_step);
            let exact = (e.ds_du)(k, u) * (f.df_du)(k, u);
            if !((fd - exact).abs() <= 1e-6 * scale) {
                compat_fail = Some(Witness::new(
                    &[("k", k), ("u", u)],
                    format!("dQ/du = {fd} but dS/du * df/du = {exact}"),
                ));
                break 'compat;
            }
        }
    }
    report.push("entropy-compatibility", outcome(compat_fail));

    let entropy_fail = derivative_check(&e.s, &e.ds_du, true, &ks, &us, u_step, 1e-6, "dS/du")
        .or_else(|| derivative_check(&e.s, &e.ds_dk, false, &ks, &us, k_step, 1e-6, "dS/dk"))
        .or_else(|| {
            derivative_check(&e.ds_du, &e.d2s_duu, true, &ks, &us, 1e3 * u_step, 1e-6, "d2S/du2")
        })
        .or_else(|| derivative_check(&e.q, &e.dq_dk, false, &ks, &us, k_step, 1e-6, "dQ/dk"));
    report.push("entropy-derivatives", outcome(entropy_fail));

    let grid = b.u_samples(33);
    match e.nonlinearity {
        Some(nl) => {
            report.push(
                "flux-nonlinearity",
                outcome(nonlinearity_check(&f.df_du, nl.c_f, nl.p_f, &ks, &grid)),
            );
            report.push(
                "entropy-nonlinearity",
                outcome(nonlinearity_check(&e.ds_du, nl.c_s, nl.p_s, &ks, &grid)),
            );
        }
        None => {
            for name in ["flux-nonlinearity", "entropy-nonlinearity"] {
                report.push(
                    name,
                    CheckOutcome::Skipped {
                        reason: "genuine nonlinearity not asserted".into(),
                    },
                );
            }
        }
    }

    if e.gamma > 0.0 {
        let convex_fail = ks.iter().find_map(|&k| {
            grid.iter().find_map(|&u| {
                let d2 = (e.d2s_duu)(k, u);
                (!(d2 >= e.gamma * (1.0 - 1e-12))).then(|| {
                    Witness::new(&[("k", k), ("u", u)], format!("d2S/du2 = {d2} is below {}", e.gamma))
                })
            })
        });
        report.push("entropy-convexity", outcome(convex_fail));
    } else {
        report.push(
            "entropy-convexity",
            CheckOutcome::Skipped {
                reason: "no uniform convexity constant declared".into(),
            },
        );
    }

    report
}
