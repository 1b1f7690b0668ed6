//! Zero-density estimates `N(σ, T) ≪ T^{A(1−σ)^B} (log T)^C`.
//!
//! Bounds are evaluated in unit-constant form: the implied constant of `≪`
//! is taken to be 1 and every output is labelled that way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::zeros::ZeroSet;

pub const UNIT_CONSTANT_NOTE: &str = "unit-constant form";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub sigma0: f64,
    #[serde(default)]
    pub label: String,
}

impl DensityEstimate {
    pub fn new(a: f64, b: f64, c: f64, sigma0: f64, label: impl Into<String>) -> Result<Self> {
        let est = Self {
            a,
            b,
            c,
            sigma0,
            label: label.into(),
        };
        est.validate()?;
        Ok(est)
    }

    /// Log-free estimate with A = 5/2 on σ ∈ [0.8, 1].
    pub fn jutila() -> Self {
        Self::new(2.5, 1.0, 0.0, 0.8, "jutila").expect("valid preset")
    }

    /// Vinogradov–Korobov type estimate with A = 58.05, B = 3/2, C = 15 on σ ∈ [0.9, 1].
    pub fn ford() -> Self {
        Self::new(58.05, 1.5, 15.0, 0.9, "ford").expect("valid preset")
    }

    fn validate(&self) -> Result<()> {
        let finite = self.a.is_finite() && self.b.is_finite() && self.c.is_finite();
        if !finite || self.a <= 0.0 || self.b < 1.0 || self.c < 0.0 {
            return Err(LabError::parameter(format!(
                "density estimate needs A > 0, B ≥ 1, C ≥ 0; got A = {}, B = {}, C = {}",
                self.a, self.b, self.c
            )));
        }
        if !(self.sigma0 > 0.5 && self.sigma0 < 1.0) {
            return Err(LabError::parameter(format!(
                "σ₀ must lie in (1/2, 1), got {}",
                self.sigma0
            )));
        }
        Ok(())
    }

    pub fn sigma1(&self) -> f64 {
        sigma1(self.a, self.sigma0).expect("validated estimate")
    }
}

impl fmt::Display for DensityEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_empty() {
            write!(f, "{},{},{},{}", self.a, self.b, self.c, self.sigma0)
        } else {
            f.write_str(&self.label)
        }
    }
}

impl FromStr for DensityEstimate {
    type Err = LabError;

    /// `jutila`, `ford`, `A,B,C,sigma0`, or inline JSON.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "jutila" => return Ok(Self::jutila()),
            "ford" => return Ok(Self::ford()),
            _ => {}
        }
        if s.starts_with('{') {
            let est: DensityEstimate = serde_json::from_str(s)
                .map_err(|e| LabError::parameter(format!("bad density JSON: {e}")))?;
            est.validate()?;
            return Ok(est);
        }
        let vals: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| LabError::parameter(format!("unknown density preset {s:?}")))?;
        match vals.as_slice() {
            [a, b, c, s0] => Self::new(*a, *b, *c, *s0, ""),
            _ => Err(LabError::parameter(format!(
                "density needs four values A,B,C,sigma0, got {s:?}"
            ))),
        }
    }
}

/// `σ₁ = max{A/(A + 0.5), σ₀}`.
pub fn sigma1(a: f64, sigma0: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !(sigma0 > 0.5 && sigma0 < 1.0) {
        return Err(LabError::domain(format!(
            "σ₁ needs A > 0 and σ₀ ∈ (1/2, 1), got A = {a}, σ₀ = {sigma0}"
        )));
    }
    Ok((a / (a + 0.5)).max(sigma0))
}

/// Natural log of `T^{A(1−σ)^B} (log T)^C`.
pub fn log_density_bound(est: &DensityEstimate, sigma: f64, log_t: f64) -> Result<f64> {
    if !(sigma >= est.sigma0 && sigma <= 1.0) {
        return Err(LabError::domain(format!(
            "estimate {est} is only claimed for σ ∈ [{}, 1], got {sigma}",
            est.sigma0
        )));
    }
    if !(log_t > 1.0) {
        return Err(LabError::domain(format!(
            "log T must exceed 1, got {log_t}"
        )));
    }
    Ok(est.a * (1.0 - sigma).powf(est.b) * log_t + est.c * log_t.ln())
}

/// `N(σ, T)`: zeros with σ < β < 1 and 0 < γ < T.
pub fn empirical_count(zs: &ZeroSet, sigma: f64, t: f64) -> usize {
    let end = zs.entries().partition_point(|z| z.gamma < t);
    zs.entries()[..end]
        .iter()
        .filter(|z| z.gamma > 0.0 && z.beta > sigma && z.beta < 1.0)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::{Zero, ZeroSource};

    #[test]
    fn sigma1_examples() {
        assert!((sigma1(2.5, 0.8).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((sigma1(58.05, 0.9).unwrap() - 58.05 / 58.55).abs() < 1e-15);
        assert!((sigma1(58.05, 0.9).unwrap() - 0.9914603).abs() < 5e-8);
        assert_eq!(sigma1(0.5, 0.9).unwrap(), 0.9);
        assert!(sigma1(0.0, 0.9).is_err());
        assert!(sigma1(1.0, 0.5).is_err());
        assert!(sigma1(1.0, 1.0).is_err());
    }

    #[test]
    fn bound_examples() {
        let j = DensityEstimate::jutila();
        let f = DensityEstimate::ford();
        assert_eq!(log_density_bound(&j, 1.0, 10.0).unwrap(), 0.0);
        assert!((log_density_bound(&f, 1.0, 10.0).unwrap() - 15.0 * 10f64.ln()).abs() < 1e-13);
        assert!((log_density_bound(&j, 0.8, 10.0).unwrap() - 5.0).abs() < 1e-14);
        let v = log_density_bound(&f, 0.9, 10.0).unwrap();
        let expected = 58.05 * 0.1f64.powf(1.5) * 10.0 + 15.0 * 10f64.ln();
        assert!((v - expected).abs() < 1e-12);
        // 58.05·0.1^1.5·10 is 18.357, so the total is 52.896.
        assert!((v - 52.896).abs() < 1e-3);
    }

    #[test]
    fn bound_is_not_claimed_below_sigma0() {
        let j = DensityEstimate::jutila();
        assert!(matches!(
            log_density_bound(&j, 0.79, 10.0),
            Err(LabError::Domain(_))
        ));
        assert!(log_density_bound(&j, 0.9, 1.0).is_err());
    }

    #[test]
    fn synthetic_single_zero_count() {
        let zs = ZeroSet::new(
            vec![Zero {
                beta: 0.95,
                gamma: 50.0,
            }],
            ZeroSource::Synthetic,
            100.0,
        )
        .unwrap();
        assert_eq!(empirical_count(&zs, 0.9, 100.0), 1);
        assert_eq!(empirical_count(&zs, 0.96, 100.0), 0);
        // Strict in T and in σ.
        assert_eq!(empirical_count(&zs, 0.9, 50.0), 0);
        assert_eq!(empirical_count(&zs, 0.95, 100.0), 0);
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            "jutila".parse::<DensityEstimate>().unwrap(),
            DensityEstimate::jutila()
        );
        assert_eq!(
            "ford".parse::<DensityEstimate>().unwrap(),
            DensityEstimate::ford()
        );
        let e: DensityEstimate = "2,1,0,0.75".parse().unwrap();
        assert_eq!((e.a, e.b, e.c, e.sigma0), (2.0, 1.0, 0.0, 0.75));
        let e: DensityEstimate = r#"{"A":3,"B":1,"C":2,"sigma0":0.85,"label":"custom"}"#
            .parse()
            .unwrap();
        assert_eq!(e.label, "custom");
        assert!("2,0.5,0,0.75".parse::<DensityEstimate>().is_err());
        assert!("2,1,0,0.4".parse::<DensityEstimate>().is_err());
        assert!("bogus".parse::<DensityEstimate>().is_err());
    }
}
