//! Problem definitions read from a TOML file.
//!
//! ```toml
//! [flux]
//! name = "quadratic"          # f = k·u(u−1)
//!
//! [entropy]
//! name = "flux"               # S = f
//! gamma = 2.0
//!
//! [coefficient]
//! kind = "piecewise"
//! breakpoints = [0.0]
//! values = [1.0, 2.0]
//!
//! [init]
//! kind = "riemann"
//! params = [0.0, 0.8, 0.2]    # x0, left, right
//!
//! [bounds]
//! a = 0.0
//! b = 1.0
//! alpha = 1.0
//! beta = 2.0
//!
//! [nonlinearity]
//! Cf = 2.0
//! pf = 1.0
//! CS = 2.0
//! pS = 1.0
//!
//! [domain]
//! left = -1.0
//! right = 1.0
//! T = 0.5
//! ```
//!
//! The schema is documented in full in the guide's command-line chapter.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::{
    builtin_problem, entropy_flux_from_entropy, Bounds, CoefficientSpec, EntropySpec, FluxSpec,
    InitialDataSpec, Nonlinearity, Polynomial, ProblemSpec,
};

const DEFAULT_QUADRATURE_PANELS: usize = 32;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub problem: ProblemSection,
    pub flux: Option<FluxSection>,
    pub entropy: Option<EntropySection>,
    pub coefficient: Option<CoefficientSection>,
    pub init: Option<InitSection>,
    pub bounds: Option<BoundsSection>,
    pub nonlinearity: Option<NonlinearitySection>,
    pub domain: Option<DomainSection>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub name: Option<String>,
    /// Start from a built-in problem; only `[domain]` may then be given.
    pub builtin: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSection {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropySection {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
    /// `S = k·s(u)` when 1, `S = s(u)` when 0 (polynomial entropies only).
    #[serde(default)]
    pub k_power: u32,
    #[serde(default)]
    pub gamma: f64,
    pub quadrature_points: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSection {
    pub kind: String,
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    #[serde(default)]
    pub values: Vec<f64>,
    pub x0: Option<f64>,
    pub speed: Option<f64>,
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySection {
    #[serde(rename = "Cf")]
    pub c_f: f64,
    pub pf: f64,
    #[serde(rename = "CS")]
    pub c_s: f64,
    #[serde(rename = "pS")]
    pub p_s: f64,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub left: f64,
    pub right: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
}

fn missing(section: &str) -> Error {
    Error::Config(format!("missing [{section}] section"))
}

fn params<const N: usize>(what: &str, params: &[f64]) -> Result<[f64; N]> {
    params.try_into().map_err(|_| {
        Error::Config(format!("{what} expects {N} params, got {}", params.len()))
    })
}

fn flux_polynomial(section: &FluxSection) -> Result<Polynomial> {
    let p = match section.name.as_str() {
        "burgers" => vec![0.0, 0.0, 0.5],
        "quadratic" => vec![0.0, -1.0, 1.0],
        "traffic" => vec![0.0, 1.0, -1.0],
        "linear" => vec![0.0, section.params.first().copied().unwrap_or(1.0)],
        "polynomial" if !section.params.is_empty() => section.params.clone(),
        "polynomial" => return Err(Error::Config("polynomial flux needs coefficients in params".into())),
        other => {
            return Err(Error::Config(format!(
                "unknown flux `{other}` (expected burgers, quadratic, traffic, linear, polynomial)"
            )))
        }
    };
    Ok(Polynomial::new(p))
}

fn entropy_spec(section: &EntropySection, flux: &Polynomial) -> Result<EntropySpec> {
    let label = section.name.clone();
    match section.name.as_str() {
        "flux" => Ok(EntropySpec::separable(label, 1, flux, section.gamma)),
        "square" => Ok(EntropySpec::separable(
            label,
            0,
            &Polynomial::new(vec![0.0, 0.0, 0.5]),
            section.gamma,
        )),
        "polynomial" if !section.params.is_empty() => {
            if section.k_power > 1 {
                return Err(Error::Config("entropy k_power must be 0 or 1".into()));
            }
            Ok(EntropySpec::separable(
                label,
                section.k_power,
                &Polynomial::new(section.params.clone()),
                section.gamma,
            ))
        }
        "polynomial" => Err(Error::Config("polynomial entropy needs coefficients in params".into())),
        other => Err(Error::Config(format!(
            "unknown entropy `{other}` (expected flux, square, polynomial)"
        ))),
    }
}

fn coefficient_spec(section: &CoefficientSection) -> Result<CoefficientSpec> {
    match section.kind.as_str() {
        "constant" => {
            let [v] = params("constant coefficient values", &section.values)?;
            Ok(CoefficientSpec::constant(v))
        }
        "piecewise" => CoefficientSpec::piecewise(section.breakpoints.clone(), section.values.clone()),
        "jump-along-line" => {
            let [left, right] = params("jump-along-line values", &section.values)?;
            Ok(CoefficientSpec::jump_along_line(
                section.x0.unwrap_or(0.0),
                section.speed.unwrap_or(0.0),
                left,
                right,
            ))
        }
        "tabulated" => CoefficientSpec::tabulated(
            section.breakpoints.clone(),
            section.times.clone(),
            section.rows.clone(),
        ),
        other => Err(Error::Config(format!(
            "unknown coefficient kind `{other}` (expected constant, piecewise, jump-along-line, tabulated)"
        ))),
    }
}

fn init_spec(section: &InitSection) -> Result<InitialDataSpec> {
    let p = &section.params;
    match section.kind.as_str() {
        "constant" => {
            let [c] = params("constant init", p)?;
            Ok(InitialDataSpec::constant(c))
        }
        "riemann" => {
            let [x0, left, right] = params("riemann init", p)?;
            Ok(InitialDataSpec::riemann(x0, left, right))
        }
        "piecewise" => {
            if p.len() % 2 == 0 {
                return Err(Error::Config(
                    "piecewise init params are v0, x1, v1, ..., xm, vm".into(),
                ));
            }
            let values = p.iter().step_by(2).copied().collect();
            let breakpoints = p.iter().skip(1).step_by(2).copied().collect();
            InitialDataSpec::piecewise(breakpoints, values)
        }
        "bump" => {
            let [center, half_width, amplitude, background] = params("bump init", p)?;
            InitialDataSpec::bump(center, half_width, amplitude, background)
        }
        other => Err(Error::Config(format!(
            "unknown init kind `{other}` (expected constant, riemann, piecewise, bump)"
        ))),
    }
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn build(&self) -> Result<ProblemSpec> {
        if let Some(name) = &self.problem.builtin {
            let others = [
                self.flux.is_some(),
                self.entropy.is_some(),
                self.coefficient.is_some(),
                self.init.is_some(),
                self.bounds.is_some(),
                self.nonlinearity.is_some(),
            ];
            if others.iter().any(|&x| x) {
                return Err(Error::Config(
                    "a built-in problem accepts only a [domain] override".into(),
                ));
            }
            let mut p = builtin_problem(name)?;
            if let Some(d) = self.domain {
                apply_domain(&mut p, d)?;
            }
            if let Some(n) = &self.problem.name {
                p.name = n.clone();
            }
            return Ok(p);
        }

        let b = self.bounds.ok_or_else(|| missing("bounds"))?;
        let bounds = Bounds::new(b.a, b.b, b.alpha, b.beta)?;
        let flux_section = self.flux.as_ref().ok_or_else(|| missing("flux"))?;
        let poly = flux_polynomial(flux_section)?;
        let flux = FluxSpec::separable(flux_section.name.clone(), &poly, &bounds);
        let entropy_section = self.entropy.as_ref().ok_or_else(|| missing("entropy"))?;
        let entropy = entropy_spec(entropy_section, &poly)?;
        let panels = entropy_section
            .quadrature_points
            .unwrap_or(DEFAULT_QUADRATURE_PANELS);
        let mut pair = entropy_flux_from_entropy(&entropy, &flux, &bounds, panels)?;
        if let Some(nl) = self.nonlinearity {
            pair = pair.with_nonlinearity(Nonlinearity::new(nl.c_f, nl.pf, nl.c_s, nl.p_s)?);
        }
        let coefficient = coefficient_spec(self.coefficient.as_ref().ok_or_else(|| missing("coefficient"))?)?
            .with_bounds(bounds.alpha, bounds.beta);
        let init = init_spec(self.init.as_ref().ok_or_else(|| missing("init"))?)?;
        let mut p = ProblemSpec {
            name: self.problem.name.clone().unwrap_or_else(|| "custom".into()),
            bounds,
            flux,
            entropy: pair,
            coefficient,
            init,
            domain: (-1.0, 1.0),
            horizon: 0.5,
        };
        if let Some(d) = self.domain {
            apply_domain(&mut p, d)?;
        }
        Ok(p)
    }
}

fn apply_domain(p: &mut ProblemSpec, d: DomainSection) -> Result<()> {
    if !(d.left < d.right && d.horizon > 0.0 && d.horizon.is_finite()) {
        return Err(Error::Config(format!(
            "domain needs left < right and T > 0, got [{}, {}] and T = {}",
            d.left, d.right, d.horizon
        )));
    }
    p.domain = (d.left, d.right);
    p.horizon = d.horizon;
    Ok(())
}

/// Reads and builds a problem from a TOML file.
pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    ProblemConfig::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::validate_problem;

    const FLAGSHIP: &str = r#"
[flux]
name = "quadratic"

[entropy]
name = "flux"
gamma = 2.0

[coefficient]
kind = "piecewise"
breakpoints = [0.0]
values = [1.0, 2.0]

[init]
kind = "piecewise"
params = [0.0, -0.5, 0.8, 0.5, 0.0]

[bounds]
a = 0.0
b = 1.0
alpha = 1.0
beta = 2.0

[nonlinearity]
Cf = 2.0
pf = 1.0
CS = 2.0
pS = 1.0
"#;

    #[test]
    fn flagship_config_validates() {
        let p = ProblemConfig::parse(FLAGSHIP).unwrap().build().unwrap();
        let report = validate_problem(&p);
        assert!(report.all_pass(), "{report}");
        assert_eq!(p.init.eval(0.0), 0.8);
        assert!((p.entropy.c_fs().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn linear_flux_fails_nonlinearity() {
        let text = FLAGSHIP.replace("name = \"quadratic\"", "name = \"linear\"");
        let p = ProblemConfig::parse(&text).unwrap().build().unwrap();
        let report = validate_problem(&p);
        assert!(!report.all_pass());
        assert!(report.failures().any(|e| e.name == "flux-nonlinearity"));
    }

    #[test]
    fn builtin_with_domain_override() {
        let text = "[problem]\nbuiltin = \"burgers-riemann\"\n[domain]\nleft = -2.0\nright = 2.0\nT = 1.0\n";
        let p = ProblemConfig::parse(text).unwrap().build().unwrap();
        assert_eq!(p.domain, (-2.0, 2.0));
        assert_eq!(p.horizon, 1.0);
    }

    #[test]
    fn unknown_keys_and_missing_sections_are_errors() {
        assert!(ProblemConfig::parse("[flux]\nname = \"burgers\"\nextra = 1\n").is_err());
        let only_flux = ProblemConfig::parse("[flux]\nname = \"burgers\"\n").unwrap();
        assert!(matches!(only_flux.build(), Err(Error::Config(_))));
    }
}
