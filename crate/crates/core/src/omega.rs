//! The minimized exponent `ω(x) = min_{t ≥ t_min} {η(t) log x + log t}`.
//!
//! The search runs in `u = log t`. A geometric expansion brackets the
//! minimum, then golden-section search narrows the bracket. When two
//! objective values are equal to rounding (which happens long before the
//! bracket reaches 1e-12·u, since `f` is flat at its minimum) the sign of the
//! analytic derivative decides which side to keep.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::numeric::golden_section;
use crate::par::{map_slice, Parallelism};
use crate::regions::ZeroFreeRegion;

/// Expansion cap for `log t`.
pub const LOG_T_CAP: f64 = 1e9;
/// Threshold for the pointwise surrogate of `ω(x) = o(log x)`.
pub const SMALL_VS_LOGX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct GrowthConditions {
    /// `ω ≥ 2 log log x`.
    pub omega_ge_2loglogx: bool,
    /// `ω / log x ≤ 0.5`.
    pub omega_small_vs_logx: bool,
}

impl GrowthConditions {
    pub fn all(&self) -> bool {
        self.omega_ge_2loglogx && self.omega_small_vs_logx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaResult {
    pub log_x: f64,
    /// log of the minimizer t₀.
    pub t0_log: f64,
    pub omega: f64,
    pub conditions: GrowthConditions,
    /// The minimum sits at the lower end of the region's domain.
    pub boundary: bool,
}

/// Objective `f_x` in log coordinates.
pub fn objective_log(region: &ZeroFreeRegion, log_x: f64, u: f64) -> Result<f64> {
    Ok(region.eta_log(u)? * log_x + u)
}

pub fn minimize_f(region: &ZeroFreeRegion, log_x: f64) -> Result<OmegaResult> {
    if !(log_x > 0.0) || !log_x.is_finite() {
        return Err(LabError::domain(format!(
            "log x must be positive, got {log_x}"
        )));
    }
    let f = |u: f64| region.eta_log_raw(u) * log_x + u;
    let slope = |u: f64| region.eta_prime_log_raw(u) * log_x + 1.0;
    let u_min = region.log_t_min();

    if slope(u_min) >= 0.0 {
        return Ok(finish(log_x, u_min, f(u_min), true));
    }

    // Bracket: walk right with doubling steps until f turns upward.
    let mut lo = u_min;
    let mut mid = u_min;
    let mut step = u_min.max(1.0);
    let hi = loop {
        let next = mid + step;
        if next > LOG_T_CAP {
            return Err(LabError::NoMinimum(format!(
                "{region}: f still decreasing at log t = {LOG_T_CAP:e} for log x = {log_x}"
            )));
        }
        if f(next) > f(mid) || slope(next) > 0.0 {
            break next;
        }
        lo = mid;
        mid = next;
        step *= 2.0;
    };

    let left_is_lower = |a: f64, b: f64| {
        let (fa, fb) = (f(a), f(b));
        if (fa - fb).abs() <= 4.0 * f64::EPSILON * fa.abs().max(fb.abs()) {
            slope(0.5 * (a + b)) > 0.0
        } else {
            fa < fb
        }
    };
    let (a, b) = golden_section(
        lo,
        hi,
        left_is_lower,
        |a, b| 1e-12 * a.abs().max(b.abs()).max(1.0),
        1000,
    );
    let u = 0.5 * (a + b);
    Ok(finish(log_x, u, f(u), false))
}

fn finish(log_x: f64, t0_log: f64, omega: f64, boundary: bool) -> OmegaResult {
    let mut result = OmegaResult {
        log_x,
        t0_log,
        omega,
        conditions: GrowthConditions::default(),
        boundary,
    };
    result.conditions = check_growth_conditions(&result);
    result
}

/// Minimizes over a grid of `log x` values; output follows grid order.
pub fn minimize_grid(
    region: &ZeroFreeRegion,
    log_xs: &[f64],
    mode: Parallelism,
) -> Vec<Result<OmegaResult>> {
    map_slice(log_xs, mode, |&lx| minimize_f(region, lx))
}

/// Exact minimizer for the classical region `η = 1/(R log t)`, ignoring the
/// lower limit of the search domain.
pub fn closed_form_classical(r: f64, log_x: f64) -> Result<OmegaResult> {
    if !(r > 0.0) || !(log_x > 0.0) {
        return Err(LabError::domain(format!(
            "closed form needs R > 0 and log x > 0, got R = {r}, log x = {log_x}"
        )));
    }
    let u = (log_x / r).sqrt();
    Ok(finish(log_x, u, 2.0 * u, false))
}

/// Leading constant `(5⁶ / (2²·3⁴·c³))^{1/5}` of the VK asymptotic.
pub fn vk_leading_constant(c: f64) -> f64 {
    (15625.0 / (324.0 * c * c * c)).powf(0.2)
}

/// Asymptotic value of ω(x) for the region `1/(c (log t)^{2/3} (log log t)^{1/3})`.
pub fn asymptotic_vk(c: f64, log_x: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(LabError::domain(format!("c must be positive, got {c}")));
    }
    if !(log_x > 1.0) {
        return Err(LabError::domain(format!(
            "log log x must be positive, got log x = {log_x}"
        )));
    }
    Ok(vk_leading_constant(c) * log_x.powf(0.6) / log_x.ln().powf(0.2))
}

pub fn check_growth_conditions(result: &OmegaResult) -> GrowthConditions {
    GrowthConditions {
        omega_ge_2loglogx: result.omega >= 2.0 * result.log_x.ln(),
        omega_small_vs_logx: result.omega / result.log_x <= SMALL_VS_LOGX,
    }
}
