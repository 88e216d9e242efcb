//! CSV files with fixed headers and shortest round-trip number formatting.

use std::fs;
use std::path::Path;

use lxf_core::compactness::{GammaCheck, IdentityReport, ModulusCurve};
use lxf_core::entropy::CellBound;

use crate::error::CliResult;
use crate::report::RefineRow;

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_identity(path: &Path, report: &IdentityReport) -> CliResult<()> {
    write_csv(
        path,
        &["term", "value"],
        report
            .terms()
            .into_iter()
            .map(|(name, value)| vec![name.to_string(), value.to_string()]),
    )
}

pub fn write_gamma_margins(path: &Path, check: &GammaCheck) -> CliResult<()> {
    write_csv(
        path,
        &["n", "j", "gamma", "bound", "margin"],
        check.margins.iter().map(|m| {
            vec![
                m.n.to_string(),
                m.j.to_string(),
                m.gamma.to_string(),
                m.bound.to_string(),
                m.margin().to_string(),
            ]
        }),
    )
}

/// `margin` is the smaller of the two bound margins, or the `|Ψ|` margin
/// alone when the dissipation bound does not apply.
pub fn write_entropy(path: &Path, cells: &[CellBound], dissipation_applies: bool) -> CliResult<()> {
    write_csv(
        path,
        &["n", "j", "Psi", "bound_rhs_dissipation", "bound_rhs_abs", "margin"],
        cells.iter().map(|c| {
            let margin = if dissipation_applies {
                c.abs_margin().min(c.dissipation_margin())
            } else {
                c.abs_margin()
            };
            vec![
                c.n.to_string(),
                c.j.to_string(),
                c.psi.to_string(),
                c.dissipation_rhs.to_string(),
                c.abs_rhs.to_string(),
                margin.to_string(),
            ]
        }),
    )
}

pub fn write_modulus(path: &Path, curve: &ModulusCurve) -> CliResult<()> {
    write_csv(
        path,
        &["offset", "modulus"],
        curve
            .samples
            .iter()
            .map(|s| vec![s.offset.to_string(), s.modulus.to_string()]),
    )
}

pub const LADDER_HEADER: [&str; 10] = [
    "cells",
    "dx",
    "dissipation_sum",
    "temporal_square_sum",
    "psi_mass",
    "spatial_statistic",
    "temporal_statistic",
    "spatial_slope",
    "temporal_slope",
    "l1_to_finest",
];

pub fn write_ladder(path: &Path, rows: &[RefineRow]) -> CliResult<()> {
    write_csv(
        path,
        &LADDER_HEADER,
        rows.iter().map(|r| {
            vec![
                r.cells.to_string(),
                r.dx.to_string(),
                r.dissipation_sum.to_string(),
                r.temporal_square_sum.to_string(),
                r.psi_mass.to_string(),
                r.spatial_statistic.to_string(),
                r.temporal_statistic.to_string(),
                opt(r.spatial_slope),
                opt(r.temporal_slope),
                r.l1_to_finest.to_string(),
            ]
        }),
    )
}
