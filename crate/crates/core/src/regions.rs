//! Zero-free region families `η(t)`.
//!
//! A region asserts that ζ(β + it) ≠ 0 whenever β > 1 − η(|t|). Three
//! families are supported, all of the shape
//!
//! ```text
//! η(t) = c₁ / ((log t)^c₂ · (log log t)^c₃)
//! ```
//!
//! * classical: `1/(R log t)`, i.e. `c₁ = 1/R, c₂ = 1, c₃ = 0`;
//! * Vinogradov–Korobov: `1/(c (log t)^{2/3} (log log t)^{1/3})`;
//! * the general power form.
//!
//! Everything is evaluated from `u = log t`, so heights like `t = e^{10⁸}`
//! never overflow. Methods taking `t` are thin wrappers over the `_log`
//! variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Smallest admissible height; keeps `log log t > 0`.
pub const T_FLOOR: f64 = 3.0;
/// log(10³⁰⁰), the cap for the validity-domain search.
const LOG_T_CAP: f64 = 690.775_527_898_213_7;
/// Relative slack in `log t` accepted at the lower end of the domain.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum RegionFamily {
    #[serde(rename = "classical")]
    Classical {
        #[serde(rename = "R")]
        r: f64,
    },
    #[serde(rename = "vk")]
    VinogradovKorobov { c: f64 },
    #[serde(rename = "power")]
    PowerForm { c1: f64, c2: f64, c3: f64 },
}

impl RegionFamily {
    /// The `(c₁, c₂, c₃)` of the equivalent power form.
    pub fn power_params(&self) -> (f64, f64, f64) {
        match *self {
            RegionFamily::Classical { r } => (1.0 / r, 1.0, 0.0),
            RegionFamily::VinogradovKorobov { c } => (1.0 / c, 2.0 / 3.0, 1.0 / 3.0),
            RegionFamily::PowerForm { c1, c2, c3 } => (c1, c2, c3),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        match *self {
            RegionFamily::Classical { r } if !ok(r) => Err(LabError::parameter(format!(
                "classical region needs R > 0, got {r}"
            ))),
            RegionFamily::VinogradovKorobov { c } if !ok(c) => Err(LabError::parameter(format!(
                "VK region needs c > 0, got {c}"
            ))),
            RegionFamily::PowerForm { c1, c2, c3 } if !ok(c1) || !ok(c2) || !c3.is_finite() => {
                Err(LabError::parameter(format!(
                    "power region needs c1 > 0, c2 > 0 and finite c3, got ({c1}, {c2}, {c3})"
                )))
            }
            _ => Ok(()),
        }
    }

    fn eta_log_unchecked(&self, u: f64) -> f64 {
        match *self {
            RegionFamily::Classical { r } => 1.0 / (r * u),
            RegionFamily::VinogradovKorobov { c } => 1.0 / (c * u.powf(2.0 / 3.0) * u.ln().cbrt()),
            RegionFamily::PowerForm { c1, c2, c3 } => {
                if c3 == 0.0 {
                    c1 / u.powf(c2)
                } else {
                    c1 / (u.powf(c2) * u.ln().powf(c3))
                }
            }
        }
    }

    /// dη/du where u = log t.
    fn eta_prime_log_unchecked(&self, u: f64) -> f64 {
        let eta = self.eta_log_unchecked(u);
        match *self {
            RegionFamily::Classical { .. } => -eta / u,
            RegionFamily::VinogradovKorobov { .. } => {
                -eta * (2.0 / (3.0 * u) + 1.0 / (3.0 * u * u.ln()))
            }
            RegionFamily::PowerForm { c2, c3, .. } => {
                if c3 == 0.0 {
                    -eta * c2 / u
                } else {
                    -eta * (c2 / u + c3 / (u * u.ln()))
                }
            }
        }
    }
}

impl fmt::Display for RegionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionFamily::Classical { r } => write!(f, "classical:{r}"),
            RegionFamily::VinogradovKorobov { c } => write!(f, "vk:{c}"),
            RegionFamily::PowerForm { c1, c2, c3 } => write!(f, "power:{c1},{c2},{c3}"),
        }
    }
}

/// Splits a dash-separated parameter list where `--x` encodes a negative
/// value, e.g. `0.1-1--0.5` → `["0.1", "1", "-0.5"]`.
fn split_dashed(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut negate = false;
    for piece in s.split('-') {
        if piece.is_empty() {
            negate = true;
            continue;
        }
        out.push(if negate {
            format!("-{piece}")
        } else {
            piece.to_string()
        });
        negate = false;
    }
    out
}

fn parse_params(s: &str) -> Result<Vec<f64>> {
    let pieces: Vec<String> = if s.contains(',') {
        s.split(',').map(|p| p.trim().to_string()).collect()
    } else {
        split_dashed(s)
    };
    pieces
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| LabError::parameter(format!("bad region parameter {p:?}")))
        })
        .collect()
}

impl FromStr for RegionFamily {
    type Err = LabError;

    /// Accepts `classical:R`, `vk:c`, `power:c1,c2,c3`, the dash-separated
    /// preset names (`classical-R`, `vk-c`, `power-c1-c2-c3`) and inline JSON
    /// such as `{"family":"classical","R":5.573412}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let family: RegionFamily = serde_json::from_str(s)
                .map_err(|e| LabError::parameter(format!("bad region JSON: {e}")))?;
            family.validate()?;
            return Ok(family);
        }
        let (name, rest) = s
            .split_once(':')
            .or_else(|| s.split_once('-'))
            .ok_or_else(|| LabError::parameter(format!("unknown region preset {s:?}")))?;
        let params = parse_params(rest)?;
        let family = match (name, params.as_slice()) {
            ("classical", [r]) => RegionFamily::Classical { r: *r },
            ("vk", [c]) => RegionFamily::VinogradovKorobov { c: *c },
            ("power", [c1, c2, c3]) => RegionFamily::PowerForm {
                c1: *c1,
                c2: *c2,
                c3: *c3,
            },
            _ => return Err(LabError::parameter(format!("unknown region preset {s:?}"))),
        };
        family.validate()?;
        Ok(family)
    }
}

/// A validated zero-free region together with its validity domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroFreeRegion {
    family: RegionFamily,
    log_t_min: f64,
}

impl ZeroFreeRegion {
    pub fn new(family: RegionFamily) -> Result<Self> {
        family.validate()?;
        let log_t_min = domain_start_log(&family)?;
        Ok(Self { family, log_t_min })
    }

    pub fn classical(r: f64) -> Result<Self> {
        Self::new(RegionFamily::Classical { r })
    }

    pub fn vinogradov_korobov(c: f64) -> Result<Self> {
        Self::new(RegionFamily::VinogradovKorobov { c })
    }

    pub fn power(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::new(RegionFamily::PowerForm { c1, c2, c3 })
    }

    pub fn family(&self) -> &RegionFamily {
        &self.family
    }

    pub fn log_t_min(&self) -> f64 {
        self.log_t_min
    }

    pub fn t_min(&self) -> f64 {
        self.log_t_min.exp()
    }

    fn check_log(&self, u: f64) -> Result<()> {
        if u.is_nan() || u < self.log_t_min - DOMAIN_SLACK * self.log_t_min.max(1.0) {
            return Err(LabError::domain(format!(
                "log t = {u} lies below the region's domain start {}",
                self.log_t_min
            )));
        }
        Ok(())
    }

    /// η at `t = e^u`.
    pub fn eta_log(&self, u: f64) -> Result<f64> {
        self.check_log(u)?;
        Ok(self.family.eta_log_unchecked(u))
    }

    pub fn eta(&self, t: f64) -> Result<f64> {
        self.eta_log(t.ln())
    }

    /// dη/d(log t) at `t = e^u`; equals `t·η′(t)` and stays finite for huge `t`.
    pub fn eta_prime_log(&self, u: f64) -> Result<f64> {
        self.check_log(u)?;
        Ok(self.family.eta_prime_log_unchecked(u))
    }

    /// η′(t), the derivative with respect to `t`.
    pub fn eta_prime(&self, t: f64) -> Result<f64> {
        let u = t.ln();
        Ok(self.eta_prime_log(u)? / t)
    }

    /// η without the domain check; for callers that already clamp to the domain.
    pub(crate) fn eta_log_raw(&self, u: f64) -> f64 {
        self.family.eta_log_unchecked(u.max(self.log_t_min))
    }

    pub(crate) fn eta_prime_log_raw(&self, u: f64) -> f64 {
        self.family.eta_prime_log_unchecked(u.max(self.log_t_min))
    }
}

impl fmt::Display for ZeroFreeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.family.fmt(f)
    }
}

/// `log t_min` for a family: the smallest `log t ≥ log 3` from which η is at
/// most 1/2, strictly decreasing and (when needed) `log log t` is defined.
pub fn domain_start_log(family: &RegionFamily) -> Result<f64> {
    family.validate()?;
    let (_, c2, c3) = family.power_params();
    let mut lo = T_FLOOR.ln();
    if c3 < 0.0 {
        // dη/du < 0 iff c₂ log u + c₃ > 0.
        lo = lo.max((-c3 / c2).exp());
    }
    let eta = |u: f64| family.eta_log_unchecked(u);
    if eta(lo) <= 0.5 {
        return Ok(lo);
    }
    let mut hi = LOG_T_CAP;
    if !(eta(hi) <= 0.5) {
        return Err(LabError::parameter(format!(
            "{family}: η stays above 1/2 for all t below 1e300"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eta(mid) <= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The validity-domain start `t_min` itself.
pub fn domain_start(family: &RegionFamily) -> Result<f64> {
    Ok(domain_start_log(family)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_boundary_value() {
        let r = ZeroFreeRegion::classical(1.0).unwrap();
        assert!((r.eta(E * E).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classical_direct_value() {
        let r = ZeroFreeRegion::classical(5.573412).unwrap();
        let expected = 1.0 / (5.573412 * 1e4f64.ln());
        assert!(rel(r.eta(1e4).unwrap(), expected) < 1e-15);
        assert!((r.eta(1e4).unwrap() - 0.0194806).abs() < 5e-8);
    }

    #[test]
    fn vk_value_at_e_to_e() {
        let r = ZeroFreeRegion::vinogradov_korobov(53.989).unwrap();
        let v = r.eta_log(E).unwrap();
        let expected = 1.0 / (53.989 * E.powf(2.0 / 3.0));
        assert!(rel(v, expected) < 1e-14);
        assert!((v - 0.0095097).abs() < 5e-8);
    }

    #[test]
    fn classical_derivative_values() {
        let r1 = ZeroFreeRegion::classical(1.0).unwrap();
        // t = e lies below t_min = e², so evaluate the family directly.
        let d1 = r1.family().eta_prime_log_unchecked(1.0) / E;
        assert!(rel(d1, -1.0 / E) < 1e-15);
        let r2 = ZeroFreeRegion::classical(2.0).unwrap();
        let d2 = r2.family().eta_prime_log_unchecked(1.0) / E;
        assert!(rel(d2, -1.0 / (2.0 * E)) < 1e-15);
    }

    #[test]
    fn domain_below_t_min_is_rejected() {
        let r = ZeroFreeRegion::classical(1.0).unwrap();
        assert!(matches!(r.eta(5.0), Err(LabError::Domain(_))));
        assert!(matches!(r.eta_prime(E), Err(LabError::Domain(_))));
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(ZeroFreeRegion::classical(0.0).is_err());
        assert!(ZeroFreeRegion::classical(-1.0).is_err());
        assert!(ZeroFreeRegion::vinogradov_korobov(f64::NAN).is_err());
        assert!(ZeroFreeRegion::power(1.0, 0.0, 0.0).is_err());
        assert!(ZeroFreeRegion::power(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn domain_start_examples() {
        let t = domain_start(&RegionFamily::Classical { r: 1.0 }).unwrap();
        assert!(rel(t, E * E) < 1e-12);
        let u = domain_start_log(&RegionFamily::Classical { r: 0.25 }).unwrap();
        assert!((u - 8.0).abs() < 1e-12);
        let t = domain_start(&RegionFamily::VinogradovKorobov { c: 53.989 }).unwrap();
        assert!(rel(t, 3.0) < 1e-15);
        // c₃ < 0 pushes the start out to where η begins to decrease.
        let u = domain_start_log(&RegionFamily::PowerForm {
            c1: 0.01,
            c2: 1.0,
            c3: -2.0,
        })
        .unwrap();
        assert!((u - 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn domain_start_fails_when_eta_never_drops() {
        let fam = RegionFamily::PowerForm {
            c1: 1e6,
            c2: 0.01,
            c3: 0.0,
        };
        assert!(matches!(domain_start(&fam), Err(LabError::Parameter(_))));
    }

    #[test]
    fn classical_is_a_power_form() {
        for &r in &[0.3, 1.0, 5.573412, 40.0] {
            let a = ZeroFreeRegion::classical(r).unwrap();
            let b = ZeroFreeRegion::power(1.0 / r, 1.0, 0.0).unwrap();
            for k in 0..200 {
                let u = a.log_t_min() + k as f64 * 0.37;
                let (x, y) = (a.eta_log(u).unwrap(), b.eta_log(u).unwrap());
                assert!((x - y).abs() <= 1e-15 * x.max(1e-300) + 1e-300 || rel(x, y) < 1e-15);
            }
        }
    }

    #[test]
    fn preset_parsing() {
        let cases = [
            ("classical:1", RegionFamily::Classical { r: 1.0 }),
            (
                "classical-5.573412",
                RegionFamily::Classical { r: 5.573412 },
            ),
            ("vk:53.989", RegionFamily::VinogradovKorobov { c: 53.989 }),
            ("vk-53.989", RegionFamily::VinogradovKorobov { c: 53.989 }),
            (
                "power:0.1,1,0.5",
                RegionFamily::PowerForm {
                    c1: 0.1,
                    c2: 1.0,
                    c3: 0.5,
                },
            ),
            (
                "power-0.1-1--0.5",
                RegionFamily::PowerForm {
                    c1: 0.1,
                    c2: 1.0,
                    c3: -0.5,
                },
            ),
            (
                r#"{"family":"classical","R":5.573412}"#,
                RegionFamily::Classical { r: 5.573412 },
            ),
            (
                r#"{"family":"vk","c":53.989}"#,
                RegionFamily::VinogradovKorobov { c: 53.989 },
            ),
        ];
        for (text, expected) in cases {
            assert_eq!(text.parse::<RegionFamily>().unwrap(), expected, "{text}");
        }
        assert!("hyperbolic:2".parse::<RegionFamily>().is_err());
        assert!("classical:-1".parse::<RegionFamily>().is_err());
        assert!("classical".parse::<RegionFamily>().is_err());
    }
}
