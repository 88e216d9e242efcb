//! Power-law fits `m(h) ≈ C h^s` on log-log axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of positive samples for a fit.
pub const MIN_FIT_SAMPLES: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    /// `ln C`.
    pub intercept: f64,
    /// Root-mean-square residual in `ln m`.
    pub rms_residual: f64,
    pub used: usize,
    /// Offsets dropped because their modulus was not positive.
    pub excluded: Vec<f64>,
    /// `log10(h_max / h_min)` over the used samples.
    pub decades: f64,
}

/// Least-squares slope of `ln m` against `ln h`. Needs at least four positive
/// samples spanning a decade.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    let (used, dropped): (Vec<_>, Vec<_>) = samples.iter().partition(|(h, m)| *h > 0.0 && *m > 0.0);
    let excluded = dropped.iter().map(|(h, _)| *h).collect();
    if used.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples(format!(
            "{} positive samples, need {MIN_FIT_SAMPLES}",
            used.len()
        )));
    }
    let lo = used.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = used.iter().map(|s| s.0).fold(0.0, f64::max);
    let decades = (hi / lo).log10();
    if decades < 1.0 - 1e-12 {
        return Err(Error::InsufficientSamples(format!(
            "offsets span {decades:.3} decades, need 1"
        )));
    }
    let pts: Vec<(f64, f64)> = used.iter().map(|(h, m)| (h.ln(), m.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms_residual =
        (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        rms_residual,
        used: pts.len(),
        excluded,
        decades,
    })
}

/// `max_h m(h) / h^μ`.
pub fn boundedness_statistic(samples: &[(f64, f64)], mu: f64) -> f64 {
    samples
        .iter()
        .filter(|(h, _)| *h > 0.0)
        .map(|(h, m)| m / h.powf(mu))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_a_pure_power() {
        let s: Vec<_> = (0..8).map(|i| {
            let h = 0.001 * 2f64.powi(i);
            (h, 3.0 * h.powf(0.4))
        }).collect();
        let fit = fit_exponent(&s).unwrap();
        assert!((fit.slope - 0.4).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_narrow_or_sparse_samples() {
        let narrow: Vec<_> = (1..6).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(fit_exponent(&narrow), Err(Error::InsufficientSamples(_))));
        let sparse = [(0.01, 1.0), (1.0, 2.0), (0.1, 0.0), (0.5, -1.0)];
        assert!(matches!(fit_exponent(&sparse), Err(Error::InsufficientSamples(_))));
    }

    #[test]
    fn statistic_is_the_largest_ratio() {
        let s = [(0.01, 0.1), (1.0, 0.5)];
        assert!((boundedness_statistic(&s, 0.5) - 1.0).abs() < 1e-15);
    }
}
