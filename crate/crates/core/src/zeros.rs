//! Zero sets: tables of real zeta-zero ordinates and synthetic hypothetical
//! zeros constrained by a zero-free region and a density estimate.
//!
//! Only zeros with `γ > 0` are stored. Sums over `|Im ρ|` account for the
//! conjugates with an explicit factor 2.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::{log_density_bound, DensityEstimate};
use crate::error::{LabError, Result};
use crate::numeric::CompensatedSum;
use crate::par::{map_indexed, Parallelism};
use crate::regions::{ZeroFreeRegion, T_FLOOR};

/// File name of the bundled ordinate table.
pub const BUNDLED_TABLE: &str = "zeros_74920.txt";
/// Environment variable naming the directory that holds zero tables.
pub const ZEROS_DIR_ENV: &str = "PNT_LAB_ZEROS_DIR";

/// Chunk length for ordered parallel sums; fixed so results do not depend on
/// the number of worker threads.
pub const SUM_CHUNK: usize = 4096;

pub const AUDIT_SIGMAS: usize = 50;
pub const AUDIT_HEIGHTS: usize = 20;
pub const DEFAULT_SYNTHETIC_TARGET: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroSource {
    RealTable,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    entries: Vec<Zero>,
    source: ZeroSource,
    gamma_max: f64,
}

impl ZeroSet {
    /// Builds a set from entries already sorted by ordinate.
    pub fn new(entries: Vec<Zero>, source: ZeroSource, gamma_max: f64) -> Result<Self> {
        for (i, z) in entries.iter().enumerate() {
            if !(z.gamma > 0.0) || !z.gamma.is_finite() {
                return Err(LabError::parameter(format!(
                    "entry {i}: γ must be positive"
                )));
            }
            if !(z.beta > 0.0 && z.beta < 1.0) {
                return Err(LabError::parameter(format!(
                    "entry {i}: β must lie in (0, 1)"
                )));
            }
            if source == ZeroSource::RealTable && z.beta != 0.5 {
                return Err(LabError::parameter(format!(
                    "entry {i}: real-table zeros lie on the critical line"
                )));
            }
            if i > 0 && entries[i - 1].gamma > z.gamma {
                return Err(LabError::parameter(format!(
                    "entry {i}: ordinates not sorted"
                )));
            }
        }
        if let Some(last) = entries.last() {
            if last.gamma > gamma_max {
                return Err(LabError::parameter(format!(
                    "γ = {} exceeds the declared coverage {gamma_max}",
                    last.gamma
                )));
            }
        }
        Ok(Self {
            entries,
            source,
            gamma_max,
        })
    }

    /// Critical-line zeros from a list of ascending ordinates.
    pub fn from_ordinates(ordinates: &[f64]) -> Result<Self> {
        let entries = ordinates
            .iter()
            .map(|&gamma| Zero { beta: 0.5, gamma })
            .collect();
        Self::new(
            entries,
            ZeroSource::RealTable,
            ordinates.last().copied().unwrap_or(0.0),
        )
    }

    pub fn entries(&self) -> &[Zero] {
        &self.entries
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    /// Height up to which the set is complete.
    pub fn gamma_max(&self) -> f64 {
        self.gamma_max
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn require_coverage(&self, t: f64) -> Result<()> {
        if t > self.gamma_max {
            return Err(LabError::Coverage {
                requested: t,
                available: self.gamma_max,
            });
        }
        Ok(())
    }

    /// Entries with `lo < γ ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> &[Zero] {
        let start = self.entries.partition_point(|z| z.gamma <= lo);
        let end = self.entries.partition_point(|z| z.gamma <= hi);
        &self.entries[start..end.max(start)]
    }

    /// Returns a copy with one extra zero inserted in ordinate order.
    pub fn with_zero(&self, zero: Zero) -> Result<Self> {
        let mut entries = self.entries.clone();
        let at = entries.partition_point(|z| z.gamma <= zero.gamma);
        entries.insert(at, zero);
        let source = if zero.beta == 0.5 {
            self.source
        } else {
            ZeroSource::Synthetic
        };
        Self::new(entries, source, self.gamma_max.max(zero.gamma))
    }

    /// Ordinate-table text: one shortest round-trip decimal per line.
    pub fn to_ordinate_text(&self) -> String {
        let mut out = String::with_capacity(self.entries.len() * 14);
        for z in &self.entries {
            let _ = writeln!(out, "{}", z.gamma);
        }
        out
    }

    /// Two-column `beta gamma` text with a coverage header; readable by
    /// [`load_zero_set`].
    pub fn to_two_column_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# source: {:?}", self.source);
        let _ = writeln!(out, "# gamma_max: {}", self.gamma_max);
        for z in &self.entries {
            let _ = writeln!(out, "{} {}", z.beta, z.gamma);
        }
        out
    }
}

/// Compensated sum of `term(z)` over `zeros`, chunked in fixed blocks and
/// merged in ascending order.
pub fn ordered_sum<F>(zeros: &[Zero], mode: Parallelism, term: F) -> f64
where
    F: Fn(&Zero) -> f64 + Sync + Send,
{
    let chunks = zeros.len().div_ceil(SUM_CHUNK);
    let partials = map_indexed(chunks, mode, |i| {
        let lo = i * SUM_CHUNK;
        let hi = (lo + SUM_CHUNK).min(zeros.len());
        zeros[lo..hi].iter().map(&term).collect::<CompensatedSum>()
    });
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| LabError::io(path, e))
}

/// Parses an ordinate table: one decimal per line, ascending, `#` comments.
pub fn parse_ordinates(text: &str, path: &Path) -> Result<ZeroSet> {
    let mut ordinates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let gamma: f64 = line.parse().map_err(|_| LabError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            text: line.to_string(),
        })?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(LabError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                text: line.to_string(),
            });
        }
        if ordinates.last().is_some_and(|&prev| gamma <= prev) {
            return Err(LabError::NotAscending {
                path: path.to_path_buf(),
                line: idx + 1,
            });
        }
        ordinates.push(gamma);
    }
    ZeroSet::from_ordinates(&ordinates)
}

pub fn load_ordinates(path: impl AsRef<Path>) -> Result<ZeroSet> {
    let path = path.as_ref();
    parse_ordinates(&read_text(path)?, path)
}

/// Loads either an ordinate table or a two-column `beta gamma` file.
pub fn load_zero_set(path: impl AsRef<Path>) -> Result<ZeroSet> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let two_column = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().count() == 2);
    if !two_column {
        return parse_ordinates(&text, path);
    }

    let parse_err = |line: usize, text: &str| LabError::Parse {
        path: path.to_path_buf(),
        line,
        text: text.to_string(),
    };
    let mut gamma_max = None;
    let mut synthetic = false;
    let mut entries: Vec<Zero> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("gamma_max:") {
                gamma_max = Some(
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| parse_err(idx + 1, line))?,
                );
            } else if comment == "source: Synthetic" {
                synthetic = true;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace().map(str::parse::<f64>);
        let (Some(Ok(beta)), Some(Ok(gamma)), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(parse_err(idx + 1, line));
        };
        if entries.last().is_some_and(|z| gamma < z.gamma) {
            return Err(LabError::NotAscending {
                path: path.to_path_buf(),
                line: idx + 1,
            });
        }
        if beta != 0.5 {
            synthetic = true;
        }
        entries.push(Zero { beta, gamma });
    }
    let last = entries.last().map_or(0.0, |z| z.gamma);
    let source = if synthetic {
        ZeroSource::Synthetic
    } else {
        ZeroSource::RealTable
    };
    ZeroSet::new(entries, source, gamma_max.unwrap_or(last).max(last))
}

/// Location of the bundled table: `$PNT_LAB_ZEROS_DIR` if set, otherwise the
/// crate's `data/` directory.
pub fn bundled_table_path() -> PathBuf {
    match std::env::var_os(ZEROS_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(BUNDLED_TABLE),
        None => Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("data")
            .join(BUNDLED_TABLE),
    }
}

/// `Σ 2/γ` over `1 < γ ≤ T`.
pub fn reciprocal_gamma_sum(zs: &ZeroSet, t: f64) -> Result<f64> {
    reciprocal_gamma_sum_with(zs, t, Parallelism::default())
}

pub fn reciprocal_gamma_sum_with(zs: &ZeroSet, t: f64, mode: Parallelism) -> Result<f64> {
    zs.require_coverage(t)?;
    Ok(ordered_sum(zs.window(1.0, t), mode, |z| 2.0 / z.gamma))
}

/// The (σ, T) grid on which synthetic sets are audited against the density
/// bound: 50 values of σ spanning [σ₀, 1] and 20 log-spaced heights in [3, T].
#[derive(Debug, Clone)]
pub struct AuditGrid {
    pub sigmas: Vec<f64>,
    pub heights: Vec<f64>,
    /// floor of the unit-constant bound at each (σ, T) cell.
    pub caps: Vec<Vec<f64>>,
}

impl AuditGrid {
    pub fn new(est: &DensityEstimate, t_max: f64) -> Result<Self> {
        let lo = T_FLOOR.ln();
        let hi = t_max.ln();
        if !(hi > lo) {
            return Err(LabError::domain(format!(
                "audit height must exceed 3, got {t_max}"
            )));
        }
        let sigmas: Vec<f64> = (0..AUDIT_SIGMAS)
            .map(|i| est.sigma0 + (1.0 - est.sigma0) * i as f64 / (AUDIT_SIGMAS - 1) as f64)
            .collect();
        let heights: Vec<f64> = (0..AUDIT_HEIGHTS)
            .map(|j| {
                if j + 1 == AUDIT_HEIGHTS {
                    t_max
                } else {
                    (lo + (hi - lo) * j as f64 / (AUDIT_HEIGHTS - 1) as f64).exp()
                }
            })
            .collect();
        let caps = sigmas
            .iter()
            .map(|&s| {
                heights
                    .iter()
                    .map(|&h| log_density_bound(est, s, h.ln()).map(|v| v.exp().floor()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sigmas,
            heights,
            caps,
        })
    }

    /// Cells where `N(σ, T)` exceeds the unit-constant bound.
    pub fn violations(&self, zs: &ZeroSet) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        for (i, &s) in self.sigmas.iter().enumerate() {
            for (j, &h) in self.heights.iter().enumerate() {
                let n = crate::density::empirical_count(zs, s, h);
                if n as f64 > self.caps[i][j] {
                    out.push((s, h, n));
                }
            }
        }
        out
    }
}

/// Whether the region leaves room for zeros above σ₀ somewhere below `t_max`.
pub fn synthesis_feasible(region: &ZeroFreeRegion, est: &DensityEstimate, t_max: f64) -> bool {
    let lo = region.t_min().max(T_FLOOR);
    t_max > lo && 1.0 - region.eta_log_raw(t_max.ln()) > est.sigma0
}

pub fn synthesize_zero_set(
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    t_max: f64,
    seed: u64,
) -> Result<ZeroSet> {
    synthesize_zero_set_with(region, est, t_max, seed, DEFAULT_SYNTHETIC_TARGET)
}

/// Draws up to `target` hypothetical zeros with γ log-uniform in
/// `(max(3, t_min), T)` and β uniform in `(σ₀, 1 − η(γ)]`, rejecting any
/// candidate that would push a cell of the audit grid over the unit-constant
/// density bound. Deterministic in `seed`. Returns an empty set when the
/// region leaves no room above σ₀.
pub fn synthesize_zero_set_with(
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    t_max: f64,
    seed: u64,
    target: usize,
) -> Result<ZeroSet> {
    if !(t_max > region.t_min()) {
        return Err(LabError::domain(format!(
            "synthesis height {t_max} must exceed t_min = {}",
            region.t_min()
        )));
    }
    if !synthesis_feasible(region, est, t_max) {
        return ZeroSet::new(Vec::new(), ZeroSource::Synthetic, t_max);
    }
    let grid = AuditGrid::new(est, t_max)?;
    let mut counts = vec![vec![0usize; AUDIT_HEIGHTS]; AUDIT_SIGMAS];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_lo = region.log_t_min().max(T_FLOOR.ln());
    let log_hi = t_max.ln();
    let mut accepted = Vec::with_capacity(target);

    for _ in 0..target.saturating_mul(50) {
        if accepted.len() >= target {
            break;
        }
        let u = log_lo + (log_hi - log_lo) * rng.gen::<f64>();
        let gamma = u.exp();
        if !(gamma > log_lo.exp() && gamma < t_max) {
            continue;
        }
        let ceiling = 1.0 - region.eta_log_raw(gamma.ln());
        let draw: f64 = 1.0 - rng.gen::<f64>();
        let beta = (est.sigma0 + (ceiling - est.sigma0) * draw).min(ceiling);
        if !(beta > est.sigma0) {
            continue;
        }
        let fits = grid.sigmas.iter().enumerate().all(|(i, &s)| {
            beta <= s
                || grid
                    .heights
                    .iter()
                    .enumerate()
                    .all(|(j, &h)| gamma >= h || (counts[i][j] + 1) as f64 <= grid.caps[i][j])
        });
        if !fits {
            continue;
        }
        for (i, &s) in grid.sigmas.iter().enumerate() {
            if beta > s {
                for (j, &h) in grid.heights.iter().enumerate() {
                    if gamma < h {
                        counts[i][j] += 1;
                    }
                }
            }
        }
        accepted.push(Zero { beta, gamma });
    }
    accepted.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    ZeroSet::new(accepted, ZeroSource::Synthetic, t_max)
}
