//! Problem definitions: flux, entropy pair, discontinuous coefficient and
//! initial data, together with the constants the analysis needs.

mod builtin;
pub mod config;
mod poly;
mod validate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss4, integrate_composite};

pub use builtin::{builtin_problem, BUILTIN_NAMES};
pub use poly::Polynomial;
pub use validate::{validate_problem, CheckOutcome, ValidationEntry, ValidationReport, Witness};

/// A real function of `(k, u)`.
pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// A real function of `x`.
pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Number of samples per axis used for sup norms.
pub const NORM_GRID: usize = 512;
/// Sup norms are inflated by this factor to cover values between samples.
pub const NORM_INFLATION: f64 = 1.05;

/// Relative step used for finite-difference derivatives.
const FD_REL_STEP: f64 = 1e-6;

/// Relative tolerance for right-continuous evaluation at a breakpoint.
const BREAK_TOL: f64 = 1e-12;

/// Whether `x` lies on the right side of breakpoint `b` (right-continuous).
pub fn at_or_right_of(x: f64, b: f64) -> bool {
    x >= b - BREAK_TOL * (1.0 + b.abs())
}

/// State interval `[a, b]` and coefficient interval `[alpha, beta]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Bounds {
    pub fn new(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        let all_finite = [a, b, alpha, beta].iter().all(|v| v.is_finite());
        if !all_finite || a >= b || alpha > beta {
            return Err(Error::MalformedProblem(format!(
                "bounds need a < b and alpha <= beta, got [{a}, {b}] x [{alpha}, {beta}]"
            )));
        }
        Ok(Self { a, b, alpha, beta })
    }

    /// `n` equispaced values of `u` covering `[a, b]`.
    pub fn u_samples(&self, n: usize) -> Vec<f64> {
        linspace(self.a, self.b, n)
    }

    /// `n` equispaced values of `k` covering `[alpha, beta]`; a single value
    /// when the coefficient interval is degenerate.
    pub fn k_samples(&self, n: usize) -> Vec<f64> {
        linspace(self.alpha, self.beta, n)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if hi == lo || n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Inflated sup of `|g|` over the state box.
pub fn sup_norm(g: &dyn Fn(f64, f64) -> f64, bounds: &Bounds) -> f64 {
    let us = bounds.u_samples(NORM_GRID);
    let mut max = 0.0f64;
    for k in bounds.k_samples(NORM_GRID) {
        for &u in &us {
            max = max.max(g(k, u).abs());
        }
    }
    max * NORM_INFLATION
}

/// Inflated sup over the state box of `|∫_a^u g(k, s) ds|`, accumulated cell by
/// cell along the `u` sample grid.
fn sup_norm_of_integral(g: &dyn Fn(f64, f64) -> f64, bounds: &Bounds) -> f64 {
    let us = bounds.u_samples(NORM_GRID);
    let rule = gauss4();
    let mut max = 0.0f64;
    for k in bounds.k_samples(NORM_GRID) {
        let mut acc = crate::sum::NeumaierSum::new();
        for w in us.windows(2) {
            acc.add(crate::quadrature::integrate(rule, w[0], w[1], |s| g(k, s)));
            max = max.max(acc.value().abs());
        }
    }
    max * NORM_INFLATION
}

fn fd_step(lo: f64, hi: f64) -> f64 {
    FD_REL_STEP * (hi - lo).abs().max(1.0)
}

/// Centered difference in `u`.
pub fn fd_du(g: ScalarFn, step: f64) -> ScalarFn {
    Arc::new(move |k, u| (g(k, u + step) - g(k, u - step)) / (2.0 * step))
}

/// Centered difference in `k`.
pub fn fd_dk(g: ScalarFn, step: f64) -> ScalarFn {
    Arc::new(move |k, u| (g(k + step, u) - g(k - step, u)) / (2.0 * step))
}

/// The flux `f(k, u)` with its first derivatives and sup norms.
#[derive(Clone)]
pub struct FluxSpec {
    pub label: String,
    pub f: ScalarFn,
    pub df_du: ScalarFn,
    pub df_dk: ScalarFn,
    /// Inflated sup of `|∂_u f|`.
    pub du_lipschitz: f64,
    /// Inflated sup of `|∂_k f|`.
    pub dk_lipschitz: f64,
    /// Declares `f(k, a) = f(k, b) = 0` for every admissible `k`.
    pub zero_at_ends: bool,
}

impl FluxSpec {
    pub fn new(
        label: impl Into<String>,
        f: ScalarFn,
        df_du: ScalarFn,
        df_dk: ScalarFn,
        zero_at_ends: bool,
        bounds: &Bounds,
    ) -> Self {
        let du_lipschitz = sup_norm(&*df_du, bounds);
        let dk_lipschitz = sup_norm(&*df_dk, bounds);
        Self {
            label: label.into(),
            f,
            df_du,
            df_dk,
            du_lipschitz,
            dk_lipschitz,
            zero_at_ends,
        }
    }

    /// Derivatives by centered differences with step `1e-6` times the range.
    pub fn with_finite_differences(
        label: impl Into<String>,
        f: ScalarFn,
        zero_at_ends: bool,
        bounds: &Bounds,
    ) -> Self {
        let du = fd_du(f.clone(), fd_step(bounds.a, bounds.b));
        let dk = fd_dk(f.clone(), fd_step(bounds.alpha, bounds.beta));
        Self::new(label, f, du, dk, zero_at_ends, bounds)
    }

    /// `f(k, u) = k·p(u)`. The end-point flag is set when `p` vanishes at
    /// both ends of the state interval.
    pub fn separable(label: impl Into<String>, p: &Polynomial, bounds: &Bounds) -> Self {
        let scale = p.scale().max(1.0);
        let zero_at_ends = p.eval(bounds.a).abs() <= 1e-14 * scale
            && p.eval(bounds.b).abs() <= 1e-14 * scale;
        let (p0, p1, p2) = (p.clone(), p.derivative(), p.clone());
        Self::new(
            label,
            Arc::new(move |k, u| k * p0.eval(u)),
            Arc::new(move |k, u| k * p1.eval(u)),
            Arc::new(move |_k, u| p2.eval(u)),
            zero_at_ends,
            bounds,
        )
    }

    #[inline]
    pub fn eval(&self, k: f64, u: f64) -> f64 {
        (self.f)(k, u)
    }
}

impl fmt::Debug for FluxSpec {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("FluxSpec")
            .field("label", &self.label)
            .field("du_lipschitz", &self.du_lipschitz)
            .field("dk_lipschitz", &self.dk_lipschitz)
            .field("zero_at_ends", &self.zero_at_ends)
            .finish()
    }
}

/// Genuine-nonlinearity constants: `∂_u f(k,v) − ∂_u f(k,w) ≥ C_f (v−w)^{p_f}`
/// for `w < v`, and likewise for the entropy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    pub c_f: f64,
    pub p_f: f64,
    pub c_s: f64,
    pub p_s: f64,
}

impl Nonlinearity {
    pub fn new(c_f: f64, p_f: f64, c_s: f64, p_s: f64) -> Result<Self> {
        if !(c_f > 0.0 && c_s > 0.0 && p_f >= 1.0 && p_s >= 1.0) {
            return Err(Error::MalformedProblem(format!(
                "nonlinearity constants need C > 0 and p >= 1, got Cf={c_f}, pf={p_f}, CS={c_s}, pS={p_s}"
            )));
        }
        Ok(Self { c_f, p_f, c_s, p_s })
    }

    /// `C_f C_S / ((1 + p_f + p_S)(2 + p_f + p_S))`.
    pub fn c_fs(&self) -> f64 {
        let p = self.p_f + self.p_s;
        self.c_f * self.c_s / ((1.0 + p) * (2.0 + p))
    }

    /// Power `p_f + p_S + 2` in the lower bound for the interaction integrand.
    pub fn gamma_power(&self) -> f64 {
        self.p_f + self.p_s + 2.0
    }

    /// Compactness exponent `1 / (p_f + p_S + 2)`.
    pub fn mu(&self) -> f64 {
        1.0 / self.gamma_power()
    }
}

/// An entropy `S(k, u)` without its flux.
#[derive(Clone)]
pub struct EntropySpec {
    pub label: String,
    pub s: ScalarFn,
    pub ds_du: ScalarFn,
    pub ds_dk: ScalarFn,
    pub d2s_duu: ScalarFn,
    /// Uniform convexity constant, `0` when not asserted.
    pub gamma: f64,
}

impl EntropySpec {
    /// `S(k, u) = k^m·s(u)` with `m ∈ {0, 1}`.
    pub fn separable(label: impl Into<String>, k_power: u32, s: &Polynomial, gamma: f64) -> Self {
        assert!(k_power <= 1, "k_power must be 0 or 1");
        let m = k_power as i32;
        let (s0, s1, s2, sk) = (s.clone(), s.derivative(), s.derivative().derivative(), s.clone());
        Self {
            label: label.into(),
            s: Arc::new(move |k, u| k.powi(m) * s0.eval(u)),
            ds_du: Arc::new(move |k, u| k.powi(m) * s1.eval(u)),
            ds_dk: Arc::new(move |_k, u| if m == 1 { sk.eval(u) } else { 0.0 }),
            d2s_duu: Arc::new(move |k, u| k.powi(m) * s2.eval(u)),
            gamma,
        }
    }

    /// Derivatives by centered differences.
    pub fn with_finite_differences(
        label: impl Into<String>,
        s: ScalarFn,
        gamma: f64,
        bounds: &Bounds,
    ) -> Self {
        let hu = fd_step(bounds.a, bounds.b);
        let ds_du = fd_du(s.clone(), hu);
        let d2 = fd_du(ds_du.clone(), 1e-4 * (bounds.b - bounds.a).abs().max(1.0));
        Self {
            label: label.into(),
            ds_dk: fd_dk(s.clone(), fd_step(bounds.alpha, bounds.beta)),
            s,
            ds_du,
            d2s_duu: d2,
            gamma,
        }
    }
}

/// Sup norms of the entropy pair derivatives over the state box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyNorms {
    pub du_s: f64,
    pub dk_s: f64,
    pub duu_s: f64,
    pub dk_q: f64,
}

/// Entropy `S` with compatible flux `Q`, `∂_u Q = ∂_u S·∂_u f`, normalized so
/// that `Q(k, a) = 0`.
#[derive(Clone)]
pub struct EntropyPairSpec {
    pub label: String,
    pub s: ScalarFn,
    pub ds_du: ScalarFn,
    pub ds_dk: ScalarFn,
    pub d2s_duu: ScalarFn,
    pub q: ScalarFn,
    pub dq_dk: ScalarFn,
    pub gamma: f64,
    pub nonlinearity: Option<Nonlinearity>,
    pub norms: EntropyNorms,
}

impl EntropyPairSpec {
    /// Assembles a pair from explicit functions; norms are computed here.
    pub fn new(entropy: EntropySpec, q: ScalarFn, dq_dk: ScalarFn, bounds: &Bounds) -> Self {
        let norms = EntropyNorms {
            du_s: sup_norm(&*entropy.ds_du, bounds),
            dk_s: sup_norm(&*entropy.ds_dk, bounds),
            duu_s: sup_norm(&*entropy.d2s_duu, bounds),
            dk_q: sup_norm(&*dq_dk, bounds),
        };
        Self {
            label: entropy.label,
            s: entropy.s,
            ds_du: entropy.ds_du,
            ds_dk: entropy.ds_dk,
            d2s_duu: entropy.d2s_duu,
            q,
            dq_dk,
            gamma: entropy.gamma,
            nonlinearity: None,
            norms,
        }
    }

    /// Closed-form pair for `f = k·p(u)` and `S = k^m·s(u)`:
    /// `Q = k^{m+1} ∫_a^u s'(ξ) p'(ξ) dξ`.
    pub fn separable(
        label: impl Into<String>,
        flux_poly: &Polynomial,
        k_power: u32,
        s: &Polynomial,
        gamma: f64,
        bounds: &Bounds,
    ) -> Self {
        let entropy = EntropySpec::separable(label, k_power, s, gamma);
        let integrand = s.derivative().mul(&flux_poly.derivative());
        let qpoly = integrand.antiderivative_from(bounds.a);
        let qk = qpoly.clone();
        let m = k_power as i32;
        let q: ScalarFn = Arc::new(move |k, u| k.powi(m + 1) * qpoly.eval(u));
        let dq_dk: ScalarFn = Arc::new(move |k, u| (m + 1) as f64 * k.powi(m) * qk.eval(u));
        Self::new(entropy, q, dq_dk, bounds)
    }

    pub fn with_nonlinearity(mut self, nl: Nonlinearity) -> Self {
        self.nonlinearity = Some(nl);
        self
    }

    /// `C_fS` when genuine nonlinearity is asserted.
    pub fn c_fs(&self) -> Option<f64> {
        self.nonlinearity.map(|nl| nl.c_fs())
    }

    #[inline]
    pub fn entropy(&self, k: f64, u: f64) -> f64 {
        (self.s)(k, u)
    }

    #[inline]
    pub fn entropy_flux(&self, k: f64, u: f64) -> f64 {
        (self.q)(k, u)
    }
}

impl fmt::Debug for EntropyPairSpec {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("EntropyPairSpec")
            .field("label", &self.label)
            .field("gamma", &self.gamma)
            .field("nonlinearity", &self.nonlinearity)
            .field("norms", &self.norms)
            .finish()
    }
}

/// Builds `Q(k, u) = ∫_a^u ∂_u S(k, ξ) ∂_u f(k, ξ) dξ` with a composite Gauss
/// rule of `quadrature_points` four-point panels, and `∂_k Q` by integrating a
/// centered difference in `k` of the same integrand.
pub fn entropy_flux_from_entropy(
    entropy: &EntropySpec,
    flux: &FluxSpec,
    bounds: &Bounds,
    quadrature_points: usize,
) -> Result<EntropyPairSpec> {
    if quadrature_points == 0 {
        return Err(Error::MalformedProblem(
            "quadrature_points must be positive".into(),
        ));
    }
    let (ds, df) = (entropy.ds_du.clone(), flux.df_du.clone());
    let integrand: ScalarFn = Arc::new(move |k, u| ds(k, u) * df(k, u));

    for k in bounds.k_samples(33) {
        for u in bounds.u_samples(257) {
            let v = integrand(k, u);
            if !v.is_finite() {
                return Err(Error::MalformedProblem(format!(
                    "entropy flux integrand is {v} at k={k}, u={u}"
                )));
            }
        }
    }

    let a = bounds.a;
    let panels = quadrature_points;
    let g = integrand.clone();
    let q: ScalarFn = Arc::new(move |k, u| {
        integrate_composite(gauss4(), a, u, panels, |s| g(k, s))
    });
    let hk = fd_step(bounds.alpha, bounds.beta);
    let gk = fd_dk(integrand, hk);
    let gk_norm = gk.clone();
    let dq_dk: ScalarFn = Arc::new(move |k, u| {
        integrate_composite(gauss4(), a, u, panels, |s| gk(k, s))
    });

    let norms = EntropyNorms {
        du_s: sup_norm(&*entropy.ds_du, bounds),
        dk_s: sup_norm(&*entropy.ds_dk, bounds),
        duu_s: sup_norm(&*entropy.d2s_duu, bounds),
        dk_q: sup_norm_of_integral(&*gk_norm, bounds),
    };
    Ok(EntropyPairSpec {
        label: entropy.label.clone(),
        s: entropy.s.clone(),
        ds_du: entropy.ds_du.clone(),
        ds_dk: entropy.ds_dk.clone(),
        d2s_duu: entropy.d2s_duu.clone(),
        q,
        dq_dk,
        gamma: entropy.gamma,
        nonlinearity: None,
        norms,
    })
}

/// How the coefficient `k(x, t)` is represented.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    Constant(f64),
    /// `values[i]` holds on `[breakpoints[i-1], breakpoints[i])`.
    PiecewiseX {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// `left` for `x < x0 + speed·t`, `right` otherwise.
    JumpAlongLine {
        x0: f64,
        speed: f64,
        left: f64,
        right: f64,
    },
    /// Piecewise constant in `x` per time slice; slice `i` covers
    /// `[times[i], times[i+1])` and the last slice extends forever.
    Tabulated {
        breakpoints: Vec<f64>,
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

/// The coefficient `k(x, t)`, right-continuous in `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub kind: CoefficientKind,
    pub alpha: f64,
    pub beta: f64,
}

fn check_sorted(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedProblem(format!(
            "{what} must be finite and strictly increasing"
        )));
    }
    Ok(())
}

fn piece_index(breakpoints: &[f64], x: f64) -> usize {
    breakpoints.iter().take_while(|&&b| at_or_right_of(x, b)).count()
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

impl CoefficientSpec {
    pub fn constant(value: f64) -> Self {
        Self {
            kind: CoefficientKind::Constant(value),
            alpha: value,
            beta: value,
        }
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_sorted(&breakpoints, "coefficient breakpoints")?;
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::MalformedProblem(format!(
                "piecewise coefficient needs {} values, got {}",
                breakpoints.len() + 1,
                values.len()
            )));
        }
        let (alpha, beta) = min_max(values.iter().copied());
        Ok(Self {
            kind: CoefficientKind::PiecewiseX {
                breakpoints,
                values,
            },
            alpha,
            beta,
        })
    }

    pub fn jump_along_line(x0: f64, speed: f64, left: f64, right: f64) -> Self {
        Self {
            kind: CoefficientKind::JumpAlongLine {
                x0,
                speed,
                left,
                right,
            },
            alpha: left.min(right),
            beta: left.max(right),
        }
    }

    pub fn tabulated(breakpoints: Vec<f64>, times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        check_sorted(&breakpoints, "coefficient breakpoints")?;
        check_sorted(&times, "coefficient times")?;
        if times.first() != Some(&0.0) || values.len() != times.len() {
            return Err(Error::MalformedProblem(
                "tabulated coefficient needs times starting at 0 and one row per time".into(),
            ));
        }
        if values.iter().any(|row| row.len() != breakpoints.len() + 1) {
            return Err(Error::MalformedProblem(format!(
                "each tabulated row needs {} values",
                breakpoints.len() + 1
            )));
        }
        let (l0, r0) = (values[0][0], *values[0].last().unwrap());
        if values.iter().any(|row| row[0] != l0 || *row.last().unwrap() != r0) {
            return Err(Error::MalformedProblem(
                "tabulated coefficient must keep its far-field values fixed in time".into(),
            ));
        }
        let (alpha, beta) = min_max(values.iter().flatten().copied());
        Ok(Self {
            kind: CoefficientKind::Tabulated {
                breakpoints,
                times,
                values,
            },
            alpha,
            beta,
        })
    }

    /// Overrides the declared coefficient interval.
    pub fn with_bounds(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match &self.kind {
            CoefficientKind::Constant(v) => *v,
            CoefficientKind::PiecewiseX {
                breakpoints,
                values,
            } => values[piece_index(breakpoints, x)],
            CoefficientKind::JumpAlongLine {
                x0,
                speed,
                left,
                right,
            } => {
                if at_or_right_of(x, x0 + speed * t) {
                    *right
                } else {
                    *left
                }
            }
            CoefficientKind::Tabulated {
                breakpoints,
                times,
                values,
            } => {
                let slice = piece_index(times, t).max(1) - 1;
                values[slice][piece_index(breakpoints, x)]
            }
        }
    }

    /// Value to the left of every breakpoint.
    pub fn far_left(&self) -> f64 {
        match &self.kind {
            CoefficientKind::Constant(v) => *v,
            CoefficientKind::PiecewiseX { values, .. } => values[0],
            CoefficientKind::JumpAlongLine { left, .. } => *left,
            CoefficientKind::Tabulated { values, .. } => values[0][0],
        }
    }

    /// Value to the right of every breakpoint.
    pub fn far_right(&self) -> f64 {
        match &self.kind {
            CoefficientKind::Constant(v) => *v,
            CoefficientKind::PiecewiseX { values, .. } => *values.last().unwrap(),
            CoefficientKind::JumpAlongLine { right, .. } => *right,
            CoefficientKind::Tabulated { values, .. } => *values[0].last().unwrap(),
        }
    }

    /// Smallest interval containing every discontinuity for `t ∈ [0, horizon]`,
    /// `None` when the coefficient is constant.
    pub fn variation_window(&self, horizon: f64) -> Option<(f64, f64)> {
        match &self.kind {
            CoefficientKind::Constant(_) => None,
            CoefficientKind::PiecewiseX { breakpoints, .. }
            | CoefficientKind::Tabulated { breakpoints, .. } => {
                if breakpoints.is_empty() {
                    None
                } else {
                    Some((breakpoints[0], *breakpoints.last().unwrap()))
                }
            }
            CoefficientKind::JumpAlongLine { x0, speed, .. } => {
                let end = x0 + speed * horizon;
                Some((x0.min(end), x0.max(end)))
            }
        }
    }

    /// Total variation of `x ↦ k(x, t)`.
    pub fn total_variation_x(&self, t: f64) -> f64 {
        match &self.kind {
            CoefficientKind::Constant(_) => 0.0,
            CoefficientKind::PiecewiseX { values, .. } => {
                values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
            }
            CoefficientKind::JumpAlongLine { left, right, .. } => (right - left).abs(),
            CoefficientKind::Tabulated { times, values, .. } => {
                let slice = piece_index(times, t).max(1) - 1;
                values[slice].windows(2).map(|w| (w[1] - w[0]).abs()).sum()
            }
        }
    }
}

/// How the initial data is represented.
#[derive(Clone)]
pub enum InitialKind {
    Constant(f64),
    /// `values[i]` holds on `[breakpoints[i-1], breakpoints[i])`.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// `background + amplitude·cos²(π(x − center)/(2·half_width))` inside the
    /// support, `background` outside.
    Bump {
        center: f64,
        half_width: f64,
        amplitude: f64,
        background: f64,
    },
    /// An arbitrary profile on `support`, constant `left` / `right` outside.
    Custom {
        profile: ProfileFn,
        support: (f64, f64),
        left: f64,
        right: f64,
    },
}

impl fmt::Debug for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Self::Piecewise {
                breakpoints,
                values,
            } => f
                .debug_struct("Piecewise")
                .field("breakpoints", breakpoints)
                .field("values", values)
                .finish(),
            Self::Bump {
                center,
                half_width,
                amplitude,
                background,
            } => f
                .debug_struct("Bump")
                .field("center", center)
                .field("half_width", half_width)
                .field("amplitude", amplitude)
                .field("background", background)
                .finish(),
            Self::Custom {
                support,
                left,
                right,
                ..
            } => f
                .debug_struct("Custom")
                .field("support", support)
                .field("left", left)
                .field("right", right)
                .finish_non_exhaustive(),
        }
    }
}

/// Initial data `u0(x)`, constant outside a bounded support.
#[derive(Clone, Debug)]
pub struct InitialDataSpec {
    pub kind: InitialKind,
}

impl InitialDataSpec {
    pub fn constant(c: f64) -> Self {
        Self {
            kind: InitialKind::Constant(c),
        }
    }

    pub fn riemann(x0: f64, left: f64, right: f64) -> Self {
        Self {
            kind: InitialKind::Piecewise {
                breakpoints: vec![x0],
                values: vec![left, right],
            },
        }
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_sorted(&breakpoints, "initial data breakpoints")?;
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::MalformedProblem(format!(
                "piecewise initial data needs {} values, got {}",
                breakpoints.len() + 1,
                values.len()
            )));
        }
        Ok(Self {
            kind: InitialKind::Piecewise {
                breakpoints,
                values,
            },
        })
    }

    pub fn bump(center: f64, half_width: f64, amplitude: f64, background: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::MalformedProblem("bump half-width must be positive".into()));
        }
        Ok(Self {
            kind: InitialKind::Bump {
                center,
                half_width,
                amplitude,
                background,
            },
        })
    }

    pub fn custom(
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
        left: f64,
        right: f64,
    ) -> Self {
        Self {
            kind: InitialKind::Custom {
                profile: Arc::new(profile),
                support,
                left,
                right,
            },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            InitialKind::Constant(c) => *c,
            InitialKind::Piecewise {
                breakpoints,
                values,
            } => values[piece_index(breakpoints, x)],
            InitialKind::Bump {
                center,
                half_width,
                amplitude,
                background,
            } => {
                let r = (x - center) / half_width;
                if r.abs() < 1.0 {
                    let c = (std::f64::consts::FRAC_PI_2 * r).cos();
                    background + amplitude * c * c
                } else {
                    *background
                }
            }
            InitialKind::Custom {
                profile,
                support,
                left,
                right,
            } => {
                if x < support.0 {
                    *left
                } else if x >= support.1 {
                    *right
                } else {
                    profile(x)
                }
            }
        }
    }

    pub fn pad_left(&self) -> f64 {
        match &self.kind {
            InitialKind::Constant(c) => *c,
            InitialKind::Piecewise { values, .. } => values[0],
            InitialKind::Bump { background, .. } => *background,
            InitialKind::Custom { left, .. } => *left,
        }
    }

    pub fn pad_right(&self) -> f64 {
        match &self.kind {
            InitialKind::Constant(c) => *c,
            InitialKind::Piecewise { values, .. } => *values.last().unwrap(),
            InitialKind::Bump { background, .. } => *background,
            InitialKind::Custom { right, .. } => *right,
        }
    }

    /// Interval outside of which the data equals its pad values.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.kind {
            InitialKind::Constant(_) => None,
            InitialKind::Piecewise { breakpoints, .. } => breakpoints
                .first()
                .map(|&lo| (lo, *breakpoints.last().unwrap())),
            InitialKind::Bump {
                center, half_width, ..
            } => Some((center - half_width, center + half_width)),
            InitialKind::Custom { support, .. } => Some(*support),
        }
    }
}

/// A complete problem on a bounded computational domain.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub bounds: Bounds,
    pub flux: FluxSpec,
    pub entropy: EntropyPairSpec,
    pub coefficient: CoefficientSpec,
    pub init: InitialDataSpec,
    /// Region of interest `[left, right]`; the lattice extends beyond it.
    pub domain: (f64, f64),
    /// Final time `T`.
    pub horizon: f64,
}

impl ProblemSpec {
    /// Smallest interval holding the domain, the data support and every
    /// coefficient discontinuity up to `horizon`.
    pub fn active_window(&self, horizon: f64) -> (f64, f64) {
        let mut lo = self.domain.0;
        let mut hi = self.domain.1;
        for w in [self.init.support(), self.coefficient.variation_window(horizon)]
            .into_iter()
            .flatten()
        {
            lo = lo.min(w.0);
            hi = hi.max(w.1);
        }
        (lo, hi)
    }

    /// Compactness exponent when genuine nonlinearity is asserted.
    pub fn mu_theory(&self) -> Option<f64> {
        self.entropy.nonlinearity.map(|nl| nl.mu())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> Bounds {
        Bounds::new(0.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn burgers_entropy_flux_by_quadrature() {
        let b = unit_box();
        let p = Polynomial::new(vec![0.0, 0.0, 0.5]);
        let flux = FluxSpec::separable("burgers", &p, &b);
        let s = EntropySpec::separable("square", 0, &p, 1.0);
        let pair = entropy_flux_from_entropy(&s, &flux, &b, 8).unwrap();
        assert!((pair.entropy_flux(1.0, 1.0) - 1.0 / 3.0).abs() < 1e-10);
        assert_eq!(pair.entropy_flux(1.0, 0.0), 0.0);
    }

    #[test]
    fn constant_entropy_gives_constant_flux() {
        let b = unit_box();
        let flux = FluxSpec::separable("burgers", &Polynomial::new(vec![0.0, 0.0, 0.5]), &b);
        let s = EntropySpec::separable("flat", 0, &Polynomial::new(vec![3.0]), 0.0);
        let pair = entropy_flux_from_entropy(&s, &flux, &b, 4).unwrap();
        for u in [0.0, 0.3, 1.0] {
            assert_eq!(pair.entropy_flux(1.0, u), 0.0);
        }
    }

    #[test]
    fn two_flux_entropy_flux_increment() {
        let b = Bounds::new(0.0, 1.0, 1.0, 2.0).unwrap();
        let p = Polynomial::new(vec![0.0, -1.0, 1.0]);
        let flux = FluxSpec::separable("convex", &p, &b);
        let s = EntropySpec::separable("flux", 1, &p, 2.0);
        let quad = entropy_flux_from_entropy(&s, &flux, &b, 16).unwrap();
        let exact = EntropyPairSpec::separable("flux", &p, 1, &p, 2.0, &b);
        for k in [1.0, 1.5, 2.0] {
            let inc = quad.entropy_flux(k, 1.0) - quad.entropy_flux(k, 0.0);
            assert!((inc - k * k / 3.0).abs() < 1e-12);
            let inc = exact.entropy_flux(k, 1.0) - exact.entropy_flux(k, 0.0);
            assert!((inc - k * k / 3.0).abs() < 1e-12);
            assert!((quad.norms.dk_q - exact.norms.dk_q).abs() < 1e-6);
        }
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let b = unit_box();
        let flux = FluxSpec::separable("burgers", &Polynomial::new(vec![0.0, 0.0, 0.5]), &b);
        let mut s = EntropySpec::separable("bad", 0, &Polynomial::new(vec![0.0, 1.0]), 0.0);
        s.ds_du = Arc::new(|_k, u| 1.0 / (u - 0.5));
        assert!(matches!(
            entropy_flux_from_entropy(&s, &flux, &b, 4),
            Err(Error::MalformedProblem(_))
        ));
    }

    #[test]
    fn coefficient_is_right_continuous() {
        let k = CoefficientSpec::piecewise(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(k.eval(0.0, 0.0), 2.0);
        assert_eq!(k.eval(-1e-3, 0.0), 1.0);
        let line = CoefficientSpec::jump_along_line(0.0, 1.0, 1.0, 2.0);
        assert_eq!(line.eval(0.05, 0.05), 2.0);
        assert_eq!(line.eval(0.049, 0.05), 1.0);
        assert_eq!(line.total_variation_x(0.3), 1.0);
    }

    #[test]
    fn tabulated_far_field_must_be_static() {
        let ok = CoefficientSpec::tabulated(
            vec![-0.5, 0.5],
            vec![0.0, 0.2],
            vec![vec![1.0, 2.0, 1.5], vec![1.0, 1.2, 1.5]],
        )
        .unwrap();
        assert_eq!(ok.eval(0.0, 0.1), 2.0);
        assert_eq!(ok.eval(0.0, 0.2), 1.2);
        assert_eq!((ok.alpha, ok.beta), (1.0, 2.0));
        let bad = CoefficientSpec::tabulated(
            vec![0.0],
            vec![0.0, 0.2],
            vec![vec![1.0, 2.0], vec![1.5, 2.0]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn c_fs_formula() {
        let nl = Nonlinearity::new(2.0, 1.0, 2.0, 1.0).unwrap();
        assert!((nl.c_fs() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(nl.mu(), 0.25);
    }
}
