//! Truncated Riemann–von Mangoldt formula and the three-way split of the
//! zero sum `Σ x^{β−1}/|γ|` used to bound the error term.
//!
//! Zero sums are taken over ascending ordinates in fixed chunks with
//! compensated accumulation, then merged in order (see
//! [`ordered_sum`](crate::zeros::ordered_sum)).

use serde::Serialize;

use crate::density::{empirical_count, DensityEstimate};
use crate::error::{LabError, Result};
use crate::omega::{minimize_f, OmegaResult};
use crate::par::Parallelism;
use crate::regions::ZeroFreeRegion;
use crate::zeros::{ordered_sum, reciprocal_gamma_sum_with, Zero, ZeroSet};

/// Relative rounding allowance for the termwise chain inequalities.
pub const CHAIN_TOLERANCE: f64 = 1e-12;

fn check_x(x: f64) -> Result<()> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(LabError::domain(format!(
            "explicit formula needs x ≥ 2, got {x}"
        )));
    }
    if x.fract() == 0.0 {
        return Err(LabError::domain(format!(
            "x = {x} is an integer; evaluate at half-integers to avoid prime-power jumps"
        )));
    }
    Ok(())
}

/// `x − Σ_{0<γ≤T} 2·Re(x^ρ/ρ) − log 2π − ½ log(1 − x⁻²)`.
pub fn truncated_psi(x: f64, zs: &ZeroSet, t: f64) -> Result<f64> {
    truncated_psi_with(x, zs, t, Parallelism::default())
}

pub fn truncated_psi_with(x: f64, zs: &ZeroSet, t: f64, mode: Parallelism) -> Result<f64> {
    check_x(x)?;
    zs.require_coverage(t)?;
    let log_x = x.ln();
    let zero_sum = ordered_sum(zs.window(0.0, t), mode, |z| {
        let (sin, cos) = (z.gamma * log_x).sin_cos();
        let modulus = (z.beta * log_x).exp();
        2.0 * modulus * (z.beta * cos + z.gamma * sin) / (z.beta * z.beta + z.gamma * z.gamma)
    });
    let constant = (2.0 * std::f64::consts::PI).ln() + 0.5 * (-(x * x).recip()).ln_1p();
    Ok(x - zero_sum - constant)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub x: f64,
    pub t: f64,
    pub truncated_psi: f64,
    pub psi_true: f64,
    /// `|ψ(x) − truncated_psi|`.
    pub residual: f64,
    /// `x (log x)² / T`, the error term with unit constant.
    pub envelope: f64,
}

pub fn residual(x: f64, zs: &ZeroSet, t: f64, psi_true: f64) -> Result<Residual> {
    residual_with(x, zs, t, psi_true, Parallelism::default())
}

pub fn residual_with(
    x: f64,
    zs: &ZeroSet,
    t: f64,
    psi_true: f64,
    mode: Parallelism,
) -> Result<Residual> {
    let approx = truncated_psi_with(x, zs, t, mode)?;
    Ok(Residual {
        x,
        t,
        truncated_psi: approx,
        psi_true,
        residual: (psi_true - approx).abs(),
        envelope: x * x.ln().powi(2) / t,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainViolation {
    pub zero: Zero,
    /// Which inequality failed: "region" (x^{β−1}/γ ≤ exp(−f_x(γ))),
    /// "minimum" (exp(−f_x(γ)) ≤ exp(−ω)) or "domain" (γ below t_min).
    pub kind: &'static str,
    /// log(lhs) − log(rhs) of the failed inequality.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub ok: bool,
    pub termwise_ok: bool,
    pub aggregate_ok: bool,
    /// min over strip zeros of log(exp(−ω)) − log(x^{β−1}/γ); +∞ when empty.
    pub termwise_slack: f64,
    /// log(2 N(σ₂,T) e^{−ω}) − log(s₃); +∞ when s₃ = 0.
    pub aggregate_slack: f64,
    pub strip_count: usize,
    pub violators: Vec<ChainViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSums {
    pub log_x: f64,
    pub omega: f64,
    pub t: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// The unsplit sum over 1 < γ ≤ T, computed in one pass.
    pub total: f64,
    pub counts: [usize; 3],
    pub chain_ok: bool,
    pub chain: ChainReport,
}

/// Lower edge of the s₃ strip. Equal to σ₂ whenever σ₁ ≤ σ₂; otherwise the
/// strips are kept disjoint by starting s₃ at σ₁.
fn strip3_floor(sigma1: f64, sigma2: f64) -> f64 {
    sigma1.max(sigma2)
}

pub fn split_sums(
    log_x: f64,
    zs: &ZeroSet,
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
) -> Result<SplitSums> {
    split_sums_with(log_x, zs, region, est, Parallelism::default())
}

/// Splits `Σ_{1<γ≤T} 2 x^{β−1}/γ` with `T = exp(2ω)` into the parts with
/// β ≤ σ₁, σ₁ < β ≤ σ₂ and β above both, then audits the s₃ chain.
pub fn split_sums_with(
    log_x: f64,
    zs: &ZeroSet,
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    mode: Parallelism,
) -> Result<SplitSums> {
    let om = minimize_f(region, log_x)?;
    if !om.conditions.all() {
        return Err(LabError::Condition(format!(
            "log x = {log_x}: ω = {} fails ω ≥ 2 log log x ({}) or ω ≤ 0.5 log x ({})",
            om.omega, om.conditions.omega_ge_2loglogx, om.conditions.omega_small_vs_logx
        )));
    }
    let t = (2.0 * om.omega).exp();
    zs.require_coverage(t)?;
    let sigma1 = est.sigma1();
    let sigma2 = 1.0 - om.omega / log_x;
    let floor3 = strip3_floor(sigma1, sigma2);

    let zeros = zs.window(1.0, t);
    let term = |z: &Zero| 2.0 * ((z.beta - 1.0) * log_x).exp() / z.gamma;
    let strip = |z: &Zero| -> usize {
        if z.beta <= sigma1 {
            0
        } else if z.beta <= sigma2 {
            1
        } else {
            2
        }
    };
    let part = |k: usize| ordered_sum(zeros, mode, |z| if strip(z) == k { term(z) } else { 0.0 });
    let mut counts = [0usize; 3];
    for z in zeros {
        counts[strip(z)] += 1;
    }
    debug_assert!(zeros.iter().all(|z| strip(z) != 2 || z.beta > floor3));

    let mut split = SplitSums {
        log_x,
        omega: om.omega,
        t,
        sigma1,
        sigma2,
        s1: part(0),
        s2: part(1),
        s3: part(2),
        total: ordered_sum(zeros, mode, term),
        counts,
        chain_ok: false,
        chain: ChainReport {
            ok: false,
            termwise_ok: false,
            aggregate_ok: false,
            termwise_slack: f64::INFINITY,
            aggregate_slack: f64::INFINITY,
            strip_count: 0,
            violators: Vec::new(),
        },
    };
    split.chain = check_s3_chain_with(&split, zs, region, &om);
    split.chain_ok = split.chain.ok;
    Ok(split)
}

/// Verifies, for every zero of the s₃ strip,
/// `x^{β−1}/γ ≤ exp(−f_x(γ)) ≤ exp(−ω)`, and in aggregate
/// `s₃ ≤ 2 N(σ₂, T) exp(−ω)`.
pub fn check_s3_chain(
    split: &SplitSums,
    zs: &ZeroSet,
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    log_x: f64,
) -> Result<ChainReport> {
    let om = minimize_f(region, log_x)?;
    if (est.sigma1() - split.sigma1).abs() > 0.0 {
        return Err(LabError::parameter(
            "split was computed with a different estimate",
        ));
    }
    Ok(check_s3_chain_with(split, zs, region, &om))
}

fn check_s3_chain_with(
    split: &SplitSums,
    zs: &ZeroSet,
    region: &ZeroFreeRegion,
    om: &OmegaResult,
) -> ChainReport {
    let log_x = split.log_x;
    let floor3 = strip3_floor(split.sigma1, split.sigma2);
    let tol = |v: f64| CHAIN_TOLERANCE * v.abs().max(1.0);
    let mut violators = Vec::new();
    let mut termwise_slack = f64::INFINITY;
    let mut strip_count = 0;

    for z in zs
        .window(1.0, split.t)
        .iter()
        .filter(|z| z.beta > floor3 && z.beta < 1.0)
    {
        strip_count += 1;
        let log_gamma = z.gamma.ln();
        let lhs = (z.beta - 1.0) * log_x - log_gamma;
        let rhs = -om.omega;
        termwise_slack = termwise_slack.min(rhs - lhs);
        let Ok(eta) = region.eta_log(log_gamma) else {
            violators.push(ChainViolation {
                zero: *z,
                kind: "domain",
                excess: f64::NAN,
            });
            continue;
        };
        let mid = -(eta * log_x + log_gamma);
        if lhs > mid + tol(mid) {
            violators.push(ChainViolation {
                zero: *z,
                kind: "region",
                excess: lhs - mid,
            });
        } else if mid > rhs + tol(rhs) {
            violators.push(ChainViolation {
                zero: *z,
                kind: "minimum",
                excess: mid - rhs,
            });
        }
    }

    let n = empirical_count(zs, split.sigma2, split.t);
    let aggregate_slack = if split.s3 == 0.0 {
        f64::INFINITY
    } else if n == 0 {
        f64::NEG_INFINITY
    } else {
        (2.0 * n as f64).ln() - om.omega - split.s3.ln()
    };
    let aggregate_ok = aggregate_slack >= -CHAIN_TOLERANCE;
    let termwise_ok = violators.is_empty();
    ChainReport {
        ok: termwise_ok && aggregate_ok,
        termwise_ok,
        aggregate_ok,
        termwise_slack,
        aggregate_slack,
        strip_count,
        violators,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitAudit {
    /// s₁ ≤ x^{σ₁−1} Σ_{1<γ≤T} 2/γ.
    pub s1_ok: bool,
    /// log of the s₁ bound minus log s₁.
    pub s1_slack: f64,
    /// s₁ / (log T)².
    pub s1_over_log_t_sq: f64,
    /// s₂ ≤ (strip-2 count)·2·x^{σ₂−1}.
    pub s2_ok: bool,
    pub s2_slack: f64,
    /// s₁ + s₂ + s₃ equals the unsplit sum to relative 1e-12.
    pub partition_ok: bool,
    pub partition_error: f64,
}

fn log_slack(bound: f64, value: f64) -> f64 {
    if value == 0.0 {
        f64::INFINITY
    } else {
        bound.ln() - value.ln()
    }
}

/// The s₁ and s₂ bounds and the partition identity for a computed split.
pub fn audit_split(split: &SplitSums, zs: &ZeroSet) -> Result<SplitAudit> {
    let recip = reciprocal_gamma_sum_with(zs, split.t, Parallelism::default())?;
    let s1_bound = ((split.sigma1 - 1.0) * split.log_x).exp() * recip;
    let s2_bound = split.counts[1] as f64 * 2.0 * ((split.sigma2 - 1.0) * split.log_x).exp();
    let recombined = split.s1 + split.s2 + split.s3;
    let partition_error = if split.total == 0.0 {
        recombined.abs()
    } else {
        ((recombined - split.total) / split.total).abs()
    };
    Ok(SplitAudit {
        s1_ok: split.s1 <= s1_bound * (1.0 + 1e-12),
        s1_slack: log_slack(s1_bound, split.s1),
        s1_over_log_t_sq: split.s1 / split.t.ln().powi(2),
        s2_ok: split.s2 <= s2_bound * (1.0 + 1e-12),
        s2_slack: log_slack(s2_bound, split.s2),
        partition_ok: partition_error <= 1e-12,
        partition_error,
    })
}
