//! Chebyshev functions ψ, θ and the prime-counting function π at selected
//! checkpoints, by a segmented sieve of Eratosthenes; `li(x)` by quadrature;
//! and the scaled errors Δ₁, Δ₂, Δ₃.
//!
//! Each segment reports, per checkpoint interval it touches, the number of
//! primes and the sum of their logarithms. Log sums use a fixed-point
//! accumulator ([`ExactSum`]), so the merged totals are bit-identical for
//! any segment size and any thread count.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::numeric::{integrate_adaptive, ExactSum};
use crate::par::{map_indexed, Parallelism};

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = 10_000_000_000;
pub const DEFAULT_SEGMENT: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimeCounts {
    pub psi: f64,
    pub theta: f64,
    pub pi: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTables {
    limit: u64,
    checkpoints: BTreeMap<u64, PrimeCounts>,
}

impl PrimeTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn checkpoints(&self) -> &BTreeMap<u64, PrimeCounts> {
        &self.checkpoints
    }

    pub fn get(&self, x: u64) -> Result<PrimeCounts> {
        self.checkpoints
            .get(&x)
            .copied()
            .ok_or(LabError::MissingCheckpoint(x))
    }
}

/// Primes up to `n` by a plain sieve.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[derive(Default, Clone)]
struct BucketPartial {
    bucket: usize,
    count: u64,
    log_sum: ExactSum,
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64], cps: &[u64]) -> Vec<BucketPartial> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    let mut out: Vec<BucketPartial> = Vec::new();
    let mut bucket = cps.partition_point(|&c| c < lo);
    for (offset, &is_composite) in composite.iter().enumerate() {
        let n = lo + offset as u64;
        if is_composite || n < 2 {
            continue;
        }
        while bucket < cps.len() && cps[bucket] < n {
            bucket += 1;
        }
        if bucket == cps.len() {
            break;
        }
        if out.last().is_none_or(|b| b.bucket != bucket) {
            out.push(BucketPartial {
                bucket,
                ..Default::default()
            });
        }
        let slot = out.last_mut().expect("pushed above");
        slot.count += 1;
        slot.log_sum.add((n as f64).ln());
    }
    out
}

pub fn build_tables(limit: u64, checkpoints: &[u64]) -> Result<PrimeTables> {
    build_tables_with(limit, checkpoints, DEFAULT_SEGMENT, Parallelism::default())
}

/// Sieves `[2, max checkpoint]` in segments of `segment` integers.
pub fn build_tables_with(
    limit: u64,
    checkpoints: &[u64],
    segment: usize,
    mode: Parallelism,
) -> Result<PrimeTables> {
    if limit > MAX_LIMIT {
        return Err(LabError::Limit(format!(
            "sieve limit {limit} exceeds the cap {MAX_LIMIT}"
        )));
    }
    if segment == 0 {
        return Err(LabError::parameter("segment size must be positive"));
    }
    let mut cps: Vec<u64> = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if let Some(&bad) = cps.iter().find(|&&c| c > limit || c == 0) {
        return Err(LabError::domain(format!(
            "checkpoint {bad} must lie in [1, {limit}]"
        )));
    }
    let top = cps.last().copied().unwrap_or(0);
    let base = small_primes(isqrt(top));

    let segment = segment as u64;
    let n_segments = if top < 2 {
        0
    } else {
        ((top + 1) - 2).div_ceil(segment) as usize
    };
    let partials = map_indexed(n_segments, mode, |i| {
        let lo = 2 + i as u64 * segment;
        let hi = (lo + segment).min(top + 1);
        sieve_segment(lo, hi, &base, &cps)
    });

    let mut counts = vec![0u64; cps.len()];
    let mut theta = vec![ExactSum::new(); cps.len()];
    for part in partials.iter().flatten() {
        counts[part.bucket] += part.count;
        theta[part.bucket] += part.log_sum;
    }
    // Prime powers p^k, k ≥ 2, only need p ≤ √top.
    let mut powers = vec![ExactSum::new(); cps.len()];
    for &p in &base {
        let lp = (p as f64).ln();
        let mut pk = p * p;
        while pk <= top {
            let b = cps.partition_point(|&c| c < pk);
            powers[b].add(lp);
            match pk.checked_mul(p) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }

    let mut table = BTreeMap::new();
    let (mut pi, mut th, mut pw) = (0u64, ExactSum::new(), ExactSum::new());
    for (i, &c) in cps.iter().enumerate() {
        pi += counts[i];
        th += theta[i];
        pw += powers[i];
        let mut psi = th;
        psi += pw;
        table.insert(
            c,
            PrimeCounts {
                psi: psi.value(),
                theta: th.value(),
                pi,
            },
        );
    }
    Ok(PrimeTables {
        limit,
        checkpoints: table,
    })
}

/// `li(x) = ∫₂ˣ dt / log t`, with lower limit 2.
///
/// Integrated as `∫ e^v / v dv` over `[log 2, log x]`. The tolerance is
/// 1e-12 absolute, scaled by `x / log x` once that exceeds 1.
pub fn li(x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(LabError::domain(format!("li(x) needs x ≥ 2, got {x}")));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let tol = 1e-12 * (x / x.ln()).max(1.0);
    Ok(integrate_adaptive(
        |v: f64| v.exp() / v,
        std::f64::consts::LN_2,
        x.ln(),
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deltas {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Δ₁ = |π − li|·log x / x, Δ₂ = |θ − x| / x, Δ₃ = |ψ − x| / x.
pub fn deltas(tables: &PrimeTables, x: u64) -> Result<Deltas> {
    let c = tables.get(x)?;
    let xf = x as f64;
    Ok(Deltas {
        d1: (c.pi as f64 - li(xf)?).abs() * xf.ln() / xf,
        d2: (c.theta - xf).abs() / xf,
        d3: (c.psi - xf).abs() / xf,
    })
}

/// `k` integer checkpoints log-spaced over `[2, limit]`, deduplicated.
pub fn log_spaced_checkpoints(limit: u64, k: usize) -> Vec<u64> {
    if k == 0 || limit < 2 {
        return Vec::new();
    }
    if k == 1 {
        return vec![limit];
    }
    let (lo, hi) = (2f64.ln(), (limit as f64).ln());
    let mut out: Vec<u64> = (0..k)
        .map(|i| {
            if i + 1 == k {
                limit
            } else {
                ((lo + (hi - lo) * i as f64 / (k - 1) as f64).exp().round() as u64).clamp(2, limit)
            }
        })
        .collect();
    out.dedup();
    out
}
