//! Positive weights `χ` with `|χ'| ≤ C_χ χ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightFunction {
    /// `χ ≡ 1`.
    Unit,
    /// `χ(x) = (1 + x²)^{−N}` with `N > 1/2`.
    RationalDecay { exponent: f64 },
}

impl WeightFunction {
    pub fn rational_decay(exponent: f64) -> Result<Self> {
        if !(exponent > 0.5 && exponent.is_finite()) {
            return Err(Error::Config(format!(
                "decay exponent must exceed 1/2, got {exponent}"
            )));
        }
        Ok(Self::RationalDecay { exponent })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Unit => 1.0,
            Self::RationalDecay { exponent } => {
                let base = 1.0 + x * x;
                if exponent == 1.0 {
                    1.0 / base
                } else {
                    base.powf(-exponent)
                }
            }
        }
    }

    /// `χ'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Self::Unit => 0.0,
            Self::RationalDecay { exponent } => {
                -2.0 * exponent * x * (1.0 + x * x).powf(-exponent - 1.0)
            }
        }
    }

    /// `C_χ` with `|χ'| ≤ C_χ χ`; for the rational weight `2N|x|/(1+x²) ≤ N`.
    pub fn c_chi(&self) -> f64 {
        match *self {
            Self::Unit => 0.0,
            Self::RationalDecay { exponent } => exponent,
        }
    }

    /// Constant `C` with `|χ(x+z) − χ(x)| ≤ C χ(x) |z|` for `|z| ≤ 1`.
    ///
    /// Integrating `|χ'| ≤ C_χ χ` over `[x, x+z]` gives
    /// `C_χ · max_{|s|≤1} χ(x+s)/χ(x)`, and `(1+x²)/(1+y²) ≤ (3+√5)/2` when
    /// `|x − y| ≤ 1`.
    pub fn ratio_constant(&self) -> f64 {
        match *self {
            Self::Unit => 0.0,
            Self::RationalDecay { exponent } => {
                exponent * ((3.0 + 5f64.sqrt()) / 2.0).powf(exponent)
            }
        }
    }

    /// `∫_lo^hi χ`, exact for the unit weight and 4-point Gauss otherwise.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Self::Unit => hi - lo,
            _ => crate::quadrature::integrate(crate::quadrature::gauss4(), lo, hi, |x| self.eval(x)),
        }
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unit => f.write_str("unit"),
            Self::RationalDecay { exponent } => write!(f, "decay:{exponent}"),
        }
    }
}

impl FromStr for WeightFunction {
    type Err = Error;

    /// Parses `unit` or `decay:N`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "unit" => Ok(Self::Unit),
            other => match other.strip_prefix("decay:") {
                Some(n) => {
                    let n: f64 = n
                        .parse()
                        .map_err(|_| Error::Config(format!("bad decay exponent in `{s}`")))?;
                    Self::rational_decay(n)
                }
                None => Err(Error::Config(format!(
                    "unknown weight `{s}` (expected unit or decay:N)"
                ))),
            },
        }
    }
}
