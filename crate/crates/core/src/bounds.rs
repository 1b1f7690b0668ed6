//! Error bounds for the prime number theorem, all held as natural logs.
//!
//! Every bound is reported with the implied constant of `≪` set to 1.
//! Exponentiation happens only for display, via [`display_magnitude`].

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::density::DensityEstimate;
use crate::error::{LabError, Result};
use crate::omega::{minimize_f, minimize_grid};
use crate::par::Parallelism;
use crate::regions::ZeroFreeRegion;
use crate::sieve::{deltas, PrimeTables};

/// Coefficient of the VK bound: 2·58.05 rounded up to an integer.
pub const COR_VK_COEFF: f64 = 117.0;
pub const DEFAULT_EPS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundKind {
    Theorem1,
    CorLogFree,
    CorVK,
    CorVKSimplified,
    Pintz { eps: f64 },
    Ingham { eps: f64 },
    SchoenfeldRH,
}

impl BoundKind {
    /// Short column name used in CSV output.
    pub fn column(&self) -> &'static str {
        match self {
            BoundKind::Theorem1 => "th1",
            BoundKind::CorLogFree => "cor_logfree",
            BoundKind::CorVK => "cor_vk",
            BoundKind::CorVKSimplified => "cor_vk_simple",
            BoundKind::Pintz { .. } => "pintz",
            BoundKind::Ingham { .. } => "ingham",
            BoundKind::SchoenfeldRH => "schoenfeld",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBound {
    pub log_value: f64,
    pub kind: BoundKind,
    pub log_x: f64,
    pub omega: f64,
    /// Label of the density estimate, for bounds that use one.
    pub estimate: Option<String>,
}

fn check_omega(omega: f64, log_x: f64) -> Result<()> {
    if !(omega > 1.0) || !omega.is_finite() {
        return Err(LabError::domain(format!("bound needs ω > 1, got {omega}")));
    }
    if !(log_x > 0.0) {
        return Err(LabError::domain(format!(
            "bound needs log x > 0, got {log_x}"
        )));
    }
    Ok(())
}

/// `−ω + 2Aω(ω/log x)^B + C log ω`.
pub fn log_bound_theorem1(omega: f64, log_x: f64, est: &DensityEstimate) -> Result<LogBound> {
    check_omega(omega, log_x)?;
    let log_value = -omega + 2.0 * est.a * omega * (omega / log_x).powf(est.b) + est.c * omega.ln();
    Ok(LogBound {
        log_value,
        kind: BoundKind::Theorem1,
        log_x,
        omega,
        estimate: Some(est.to_string()),
    })
}

pub fn log_bound_corollaries(omega: f64, log_x: f64, which: BoundKind) -> Result<LogBound> {
    check_omega(omega, log_x)?;
    let log_value = match which {
        BoundKind::CorLogFree => -omega + 5.0 * omega * omega / log_x,
        BoundKind::CorVK => {
            -omega + COR_VK_COEFF * omega.powf(2.5) / log_x.powf(1.5) + 15.0 * omega.ln()
        }
        BoundKind::CorVKSimplified => {
            let lll = log_x.ln();
            if !(lll > 1.0) {
                return Err(LabError::domain(format!(
                    "simplified VK form needs log log x > 1, got {lll}"
                )));
            }
            -omega + 9.0 * lll - 3.0 * lll.ln()
        }
        other => {
            return Err(LabError::parameter(format!(
                "{other} is not a corollary bound"
            )));
        }
    };
    Ok(LogBound {
        log_value,
        kind: which,
        log_x,
        omega,
        estimate: None,
    })
}

pub fn log_bound_baselines(omega: f64, log_x: f64, which: BoundKind) -> Result<LogBound> {
    let log_value = match which {
        BoundKind::Ingham { eps } => {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(LabError::domain(format!(
                    "Ingham ε must lie in (0, 1/2), got {eps}"
                )));
            }
            -(0.5 - eps) * omega
        }
        BoundKind::Pintz { eps } => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(LabError::domain(format!(
                    "Pintz ε must lie in (0, 1), got {eps}"
                )));
            }
            -(1.0 - eps) * omega
        }
        BoundKind::SchoenfeldRH => {
            if !(log_x > 0.0) {
                return Err(LabError::domain(format!(
                    "log x must be positive, got {log_x}"
                )));
            }
            2.0 * log_x.ln() - (8.0 * std::f64::consts::PI).ln() - log_x / 2.0
        }
        other => {
            return Err(LabError::parameter(format!(
                "{other} is not a baseline bound"
            )));
        }
    };
    Ok(LogBound {
        log_value,
        kind: which,
        log_x,
        omega,
        estimate: None,
    })
}

/// Formats `exp(log_value)`, clamping underflow to `<1e-300`.
pub fn display_magnitude(log_value: f64) -> String {
    if log_value < -300.0 * std::f64::consts::LN_10 {
        "<1e-300".to_string()
    } else if log_value > 300.0 * std::f64::consts::LN_10 {
        ">1e300".to_string()
    } else {
        format!("{:e}", log_value.exp())
    }
}

/// The seven curves of a comparison table, in column order.
pub fn curve_kinds(eps: f64) -> [BoundKind; 7] {
    [
        BoundKind::Theorem1,
        BoundKind::CorLogFree,
        BoundKind::CorVK,
        BoundKind::CorVKSimplified,
        BoundKind::Pintz { eps },
        BoundKind::Ingham { eps },
        BoundKind::SchoenfeldRH,
    ]
}

fn evaluate(kind: BoundKind, omega: f64, log_x: f64, est: &DensityEstimate) -> Option<f64> {
    let r = match kind {
        BoundKind::Theorem1 => log_bound_theorem1(omega, log_x, est),
        BoundKind::CorLogFree | BoundKind::CorVK | BoundKind::CorVKSimplified => {
            log_bound_corollaries(omega, log_x, kind)
        }
        _ => log_bound_baselines(omega, log_x, kind),
    };
    r.ok().map(|b| b.log_value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub log_x: f64,
    pub omega: f64,
    /// Log-values in [`curve_kinds`] order; `None` outside a bound's domain.
    pub values: [Option<f64>; 7],
    /// log Δ₃(x) from the sieve, when x = ⌊e^{log x}⌋ is a sieved checkpoint.
    pub delta3_measured: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossover {
    pub first: BoundKind,
    pub second: BoundKind,
    /// log x at which the two curves first meet, to within 1e-6.
    pub log_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub region: String,
    pub estimate: String,
    pub eps: f64,
    pub kinds: [BoundKind; 7],
    pub rows: Vec<ComparisonRow>,
    pub crossovers: Vec<Crossover>,
}

impl ComparisonTable {
    pub const CSV_HEADER: &'static str =
        "log_x,omega,th1,cor_logfree,cor_vk,cor_vk_simple,pintz,ingham,schoenfeld,delta3_measured";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        let cell = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.12e}"));
        for row in &self.rows {
            let _ = write!(out, "{},{:.12e}", row.log_x, row.omega);
            for v in row.values {
                let _ = write!(out, ",{}", cell(v));
            }
            let _ = writeln!(out, ",{}", cell(row.delta3_measured));
        }
        out
    }

    pub fn crossovers_csv(&self) -> String {
        let mut out = String::from("first,second,log_x\n");
        for c in &self.crossovers {
            let _ = writeln!(out, "{},{},{:.9e}", c.first, c.second, c.log_x);
        }
        out
    }
}

/// Measured log Δ₃ at `⌊e^{log x}⌋` if the sieve tables hold that checkpoint.
pub fn measured_log_delta3(tables: Option<&PrimeTables>, log_x: f64) -> Option<f64> {
    let tables = tables?;
    let x = log_x.exp().floor();
    if !(x >= 2.0) || x > tables.limit() as f64 {
        return None;
    }
    deltas(tables, x as u64).ok().map(|d| d.d3.ln())
}

pub fn comparison_table(
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    log_x_grid: &[f64],
    eps: f64,
    tables: Option<&PrimeTables>,
    mode: Parallelism,
) -> Result<ComparisonTable> {
    let kinds = curve_kinds(eps);
    for k in &kinds[4..6] {
        log_bound_baselines(2.0, 2.0, *k)?;
    }
    let omegas = minimize_grid(region, log_x_grid, mode);
    let mut rows = Vec::with_capacity(log_x_grid.len());
    for (&log_x, om) in log_x_grid.iter().zip(omegas) {
        let omega = om?.omega;
        let values = kinds.map(|k| evaluate(k, omega, log_x, est));
        rows.push(ComparisonRow {
            log_x,
            omega,
            values,
            delta3_measured: measured_log_delta3(tables, log_x),
        });
    }

    let mut crossovers = Vec::new();
    for i in 0..kinds.len() {
        for j in i + 1..kinds.len() {
            if let Some(lx) = first_crossover(&rows, i, j, |lx| {
                let omega = minimize_f(region, lx).ok()?.omega;
                Some(evaluate(kinds[i], omega, lx, est)? - evaluate(kinds[j], omega, lx, est)?)
            }) {
                crossovers.push(Crossover {
                    first: kinds[i],
                    second: kinds[j],
                    log_x: lx,
                });
            }
        }
    }
    Ok(ComparisonTable {
        region: region.to_string(),
        estimate: est.to_string(),
        eps,
        kinds,
        rows,
        crossovers,
    })
}

/// First sign change of curve i minus curve j along the grid, refined by
/// bisection in log x to 1e-6.
fn first_crossover<F>(rows: &[ComparisonRow], i: usize, j: usize, diff: F) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let d = |r: &ComparisonRow| Some(r.values[i]? - r.values[j]?);
    const SAME: f64 = 1e-12;
    for pair in rows.windows(2) {
        let (Some(da), Some(db)) = (d(&pair[0]), d(&pair[1])) else {
            continue;
        };
        if da.abs() < SAME && db.abs() < SAME {
            continue;
        }
        if da == 0.0 {
            return Some(pair[0].log_x);
        }
        if da.signum() == db.signum() && db != 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (pair[0].log_x, pair[1].log_x);
        let sign_lo = da.signum();
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            match diff(mid) {
                Some(v) if v.signum() == sign_lo && v != 0.0 => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
        }
        return Some(0.5 * (lo + hi));
    }
    None
}

/// Static SVG line plot of the log-bounds against log log x.
pub fn render_svg(table: &ComparisonTable) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const PAD: f64 = 60.0;
    const COLORS: [&str; 8] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#000000",
    ];
    let xs: Vec<f64> = table.rows.iter().map(|r| r.log_x.ln()).collect();
    let mut series: Vec<(String, Vec<Option<f64>>)> = table
        .kinds
        .iter()
        .enumerate()
        .map(|(k, kind)| {
            (
                kind.to_string(),
                table.rows.iter().map(|r| r.values[k]).collect(),
            )
        })
        .collect();
    series.push((
        "delta3_measured".to_string(),
        table.rows.iter().map(|r| r.delta3_measured).collect(),
    ));
    let ys = series.iter().flat_map(|(_, v)| v.iter().flatten().copied());
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| {
        (a.min(y), b.max(y))
    });
    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let px = |x: f64| PAD + (x - xmin) / span(xmin, xmax) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - ymin) / span(ymin, ymax) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" font-size="14" text-anchor="middle">log bound vs log log x ({}, {}, unit constants)</text>"#,
        W / 2.0,
        table.region,
        table.estimate
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{0}" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        svg,
        r#"<text x="{PAD}" y="{}" font-size="11">{xmin:.3}</text><text x="{}" y="{}" font-size="11" text-anchor="end">{xmax:.3}</text>"#,
        H - PAD + 15.0,
        W - PAD,
        H - PAD + 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{ymin:.4e}</text><text x="{}" y="{PAD}" font-size="11" text-anchor="end">{ymax:.4e}</text>"#,
        PAD - 4.0,
        H - PAD,
        PAD - 4.0
    );
    for (k, (name, values)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(values)
            .filter_map(|(&x, v)| v.map(|y| format!("{:.2},{:.2}", px(x), py(y))))
            .collect();
        if !points.is_empty() {
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                points.join(" ")
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{name}</text>"#,
            W - PAD + 5.0,
            PAD + 14.0 * k as f64
        );
    }
    svg.push_str("</svg>\n");
    svg
}
