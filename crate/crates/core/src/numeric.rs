//! Summation, one-dimensional minimization and quadrature primitives.

/// Neumaier-compensated running sum.
///
/// Partial sums from disjoint chunks are combined with [`merge`](Self::merge);
/// combining them in a fixed order keeps the total reproducible.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Fixed-point accumulator with 64 fractional bits.
///
/// Every term is converted to a 128-bit integer multiple of 2⁻⁶⁴ before it is
/// added, so the total is independent of summation order and grouping. Terms
/// of magnitude at least 2⁻¹¹ are represented exactly; the result is the
/// correctly rounded sum of those terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ExactSum(i128);

const FIXED_SCALE: f64 = 18_446_744_073_709_551_616.0; // 2^64

impl ExactSum {
    pub fn new() -> Self {
        Self(0)
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        debug_assert!(value.is_finite() && value.abs() < 9.0e18);
        self.0 += (value * FIXED_SCALE) as i128;
    }

    #[inline]
    pub fn merge(&mut self, other: &ExactSum) {
        self.0 += other.0;
    }

    pub fn value(&self) -> f64 {
        self.0 as f64 / FIXED_SCALE
    }
}

impl std::ops::AddAssign for ExactSum {
    fn add_assign(&mut self, rhs: ExactSum) {
        self.0 += rhs.0;
    }
}

/// 1/φ, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum inside `[lo, hi]`.
///
/// `left_is_lower(a, b)` decides whether the objective at `a < b` is lower
/// than at `b`, which lets the caller break ties that plain function values
/// cannot resolve. Iteration stops once the bracket is narrower than
/// `width(lo, hi)` or after `max_iter` steps. Returns the final bracket.
pub fn golden_section<C, W>(
    mut lo: f64,
    mut hi: f64,
    mut left_is_lower: C,
    width: W,
    max_iter: usize,
) -> (f64, f64)
where
    C: FnMut(f64, f64) -> bool,
    W: Fn(f64, f64) -> f64,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    for _ in 0..max_iter {
        if hi - lo < width(lo, hi) {
            break;
        }
        if left_is_lower(c, d) {
            hi = d;
            d = c;
            c = hi - INV_PHI * (hi - lo);
        } else {
            lo = c;
            c = d;
            d = lo + INV_PHI * (hi - lo);
        }
        // Once the bracket is a few ulps wide the interior points collapse.
        if !(lo < c && c <= d && d < hi) {
            c = hi - INV_PHI * (hi - lo);
            d = lo + INV_PHI * (hi - lo);
            if !(lo < c && d < hi) {
                break;
            }
        }
    }
    (lo, hi)
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod 7/15 panel: returns (Kronrod estimate, |K − G|).
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// Panels are bisected until each local error estimate falls below its
/// share of `abs_tol` (or the panel stops shrinking). Panel results are
/// accumulated with compensation in left-to-right order.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let total_width = (b - a).abs();
    let mut acc = CompensatedSum::new();
    // Depth-first stack, right half pushed first so panels finish in order.
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err) = gauss_kronrod_15(&f, lo, hi);
        let share = abs_tol * ((hi - lo).abs() / total_width).max(1e-3);
        let mid = 0.5 * (lo + hi);
        if err <= share || depth >= 60 || mid <= lo.min(hi) || mid >= lo.max(hi) {
            acc.add(value);
        } else {
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    acc.value()
}
