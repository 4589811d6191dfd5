use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::verify::ErrorReport;

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_else(|| "nan".to_string())
}

pub fn write_solution_csv(
    path: &Path,
    coords: &[[f64; 2]],
    components: usize,
    values: &[f64],
    enriched_dof: impl Fn(usize, usize) -> Option<usize>,
    dimension: usize,
) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    let mut header = vec!["node".to_string()];
    header.extend((0..dimension).map(|d| ["x", "y"][d].to_string()));
    for c in 0..components {
        header.push(format!("u{c}"));
    }
    for c in 0..components {
        header.push(format!("a{c}"));
    }
    writeln!(out, "{}", header.join(","))?;
    for (n, p) in coords.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend((0..dimension).map(|d| fmt(p[d])));
        for c in 0..components {
            row.push(fmt(values[n * components + c]));
        }
        for c in 0..components {
            row.push(match enriched_dof(n, c) {
                Some(d) => fmt(values[d]),
                None => fmt(0.0),
            });
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn report_header() -> String {
    "method,alpha,h,dofs,energy_error,energy_error_rel,l2_error,l2_error_rel,condition_number"
        .to_string()
}

pub fn report_row(r: &ErrorReport) -> String {
    [
        r.method.clone(),
        r.alpha.map(fmt).unwrap_or_else(|| "auto".to_string()),
        fmt(r.h),
        r.dofs.to_string(),
        fmt(r.energy_error),
        fmt(r.energy_error_rel),
        fmt(r.l2_error),
        fmt(r.l2_error_rel),
        fmt_opt(r.condition_number),
    ]
    .join(",")
}

pub fn write_report_csv(path: &Path, rows: &[ErrorReport]) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "{}", report_header())?;
    for r in rows {
        writeln!(out, "{}", report_row(r))?;
    }
    Ok(())
}

pub fn write_sweep_csv(path: &Path, rows: &[(String, Option<f64>, ErrorReport)]) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        "method,alpha,energy_error_rel,l2_error_rel,condition_number"
    )?;
    for (method, alpha, r) in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            method,
            alpha.map(fmt).unwrap_or_else(|| "auto".to_string()),
            fmt(r.energy_error_rel),
            fmt(r.l2_error_rel),
            fmt_opt(r.condition_number)
        )?;
    }
    Ok(())
}

pub fn write_convergence_csv(
    path: &Path,
    rows: &[ErrorReport],
    rates: &[(String, f64, f64)],
    exact_notice: bool,
) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "{}", report_header())?;
    for r in rows {
        writeln!(out, "{}", report_row(r))?;
    }
    if exact_notice {
        writeln!(
            out,
            "# slope fit skipped: exact solution reproduced at every h"
        )?;
    } else if !rates.is_empty() {
        writeln!(out, "# fitted_rates")?;
        writeln!(out, "method,energy_slope,l2_slope")?;
        for (m, es, ls) in rates {
            writeln!(out, "{},{},{}", m, fmt(*es), fmt(*ls))?;
        }
    }
    Ok(())
}
