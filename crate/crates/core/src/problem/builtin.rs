//! Ready-made problems.

use crate::error::{Error, Result};

use super::{
    Bounds, CoefficientSpec, EntropyPairSpec, FluxSpec, InitialDataSpec, Nonlinearity,
    Polynomial, ProblemSpec,
};

pub const BUILTIN_NAMES: [&str; 4] = [
    "burgers-riemann",
    "twoflux-convex",
    "twoflux-traffic",
    "moving-jump",
];

const DOMAIN: (f64, f64) = (-1.0, 1.0);
const HORIZON: f64 = 0.5;

/// `u(u − 1)`, convex and vanishing at both ends of `[0, 1]`.
fn convex_well() -> Polynomial {
    Polynomial::new(vec![0.0, -1.0, 1.0])
}

/// Piecewise data inside `[0, 1]` with several jumps of both signs.
fn staircase() -> InitialDataSpec {
    InitialDataSpec::piecewise(
        vec![-0.6, -0.2, 0.3, 0.6],
        vec![0.0, 0.9, 0.3, 0.7, 0.0],
    )
    .expect("static data")
}

pub fn builtin_problem(name: &str) -> Result<ProblemSpec> {
    match name {
        "burgers-riemann" => {
            let bounds = Bounds::new(0.0, 1.0, 1.0, 1.0)?;
            let p = Polynomial::new(vec![0.0, 0.0, 0.5]);
            Ok(ProblemSpec {
                name: name.into(),
                flux: FluxSpec::separable("burgers", &p, &bounds),
                entropy: EntropyPairSpec::separable("flux", &p, 0, &p, 1.0, &bounds)
                    .with_nonlinearity(Nonlinearity::new(1.0, 1.0, 1.0, 1.0)?),
                coefficient: CoefficientSpec::constant(1.0),
                init: InitialDataSpec::riemann(0.0, 1.0, 0.0),
                bounds,
                domain: DOMAIN,
                horizon: HORIZON,
            })
        }
        "twoflux-convex" | "moving-jump" => {
            let bounds = Bounds::new(0.0, 1.0, 1.0, 2.0)?;
            let p = convex_well();
            let coefficient = if name == "twoflux-convex" {
                CoefficientSpec::piecewise(vec![0.0], vec![1.0, 2.0])?
            } else {
                CoefficientSpec::jump_along_line(-0.25, 0.5, 1.0, 2.0)
            };
            Ok(ProblemSpec {
                name: name.into(),
                flux: FluxSpec::separable("convex", &p, &bounds),
                entropy: EntropyPairSpec::separable("flux", &p, 1, &p, 2.0, &bounds)
                    .with_nonlinearity(Nonlinearity::new(2.0, 1.0, 2.0, 1.0)?),
                coefficient,
                init: staircase(),
                bounds,
                domain: DOMAIN,
                horizon: HORIZON,
            })
        }
        "twoflux-traffic" => {
            let bounds = Bounds::new(0.0, 1.0, 1.0, 2.0)?;
            let p = Polynomial::new(vec![0.0, 1.0, -1.0]);
            let square = Polynomial::new(vec![0.0, 0.0, 0.5]);
            Ok(ProblemSpec {
                name: name.into(),
                flux: FluxSpec::separable("traffic", &p, &bounds),
                entropy: EntropyPairSpec::separable("square", &p, 0, &square, 1.0, &bounds),
                coefficient: CoefficientSpec::piecewise(vec![0.0], vec![1.0, 2.0])?,
                init: staircase(),
                bounds,
                domain: DOMAIN,
                horizon: HORIZON,
            })
        }
        other => Err(Error::UnknownProblem(
            other.to_string(),
            BUILTIN_NAMES.join(", "),
        )),
    }
}
