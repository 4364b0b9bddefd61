//! Row kernels for the O(n²) pair sums over sorted nonnegative values.
//!
//! For `0 ≤ y_i ≤ y_j` the angular difference reduces to a single arctangent,
//! `1 − (4/π)·atan(y_i/y_j)`. The arctangent is evaluated with a polynomial:
//!
//! * ratio `r ≤ tan(π/8)`: `atan(r) = r·P(r²)` directly;
//! * otherwise `atan(r) = π/4 + atan((y_i − y_j)/(y_i + y_j))`, whose argument
//!   again lies in `[−tan(π/8), 0]`, giving `∠ = −(4/π)·x·P(x²)`.
//!
//! Because each row is sorted, the first branch covers a prefix of the row
//! and needs no division. `P` is a degree-10 polynomial in `x²` fitted on
//! `[0, tan²(π/8)]`; the resulting angle is within 4e-16 of the two-`atan2`
//! definition.
//!
//! Every row is accumulated in 8 fixed lanes with fused multiply-adds. The
//! scalar and AVX2 paths perform the same IEEE operations in the same order,
//! so they agree to the bit.

/// tan(π/8).
pub(crate) const TAN_PI_8: f64 = 0.41421356237309503;

const FOUR_OVER_PI: f64 = 4.0 / std::f64::consts::PI;

/// atan(x)/x as a polynomial in x², lowest order first.
const ATAN_COEFFS: [f64; 11] = [
    1.0,
    -0.3333333333332844,
    0.1999999999885511,
    -0.14285714180976467,
    0.11111106180455946,
    -0.09090773074808414,
    0.07689953496306857,
    -0.06640233930429408,
    0.056883492268090106,
    -0.04348052215716462,
    0.021135373157693246,
];

const LANES: usize = 8;

/// What a pair contributes besides its angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PairFactor {
    /// `w_i·(y_j − y_i)`, the V index numerator.
    WeightedGap,
    /// `w_i`, the angular mean numerator.
    Weight,
}

#[inline(always)]
fn atan_reduced(x: f64) -> f64 {
    let z = x * x;
    let mut p = ATAN_COEFFS[10];
    for &c in ATAN_COEFFS[..10].iter().rev() {
        p = p.mul_add(z, c);
    }
    x * p
}

/// Angular difference of two nonnegative values via the single-arctangent
/// identity, evaluated exactly as the kernels do.
pub fn fast_angle(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    if lo <= TAN_PI_8 * hi {
        (-FOUR_OVER_PI).mul_add(atan_reduced(lo * (1.0 / hi)), 1.0)
    } else {
        -FOUR_OVER_PI * atan_reduced((lo - hi) / (lo + hi))
    }
}

#[inline(always)]
fn factor(kind: PairFactor, w: f64, y: f64, yj: f64) -> f64 {
    match kind {
        PairFactor::WeightedGap => w * (yj - y),
        PairFactor::Weight => w,
    }
}

#[inline(always)]
fn near_term(kind: PairFactor, w: f64, y: f64, yj: f64, inv: f64) -> (f64, f64) {
    let angle = (-FOUR_OVER_PI).mul_add(atan_reduced(y * inv), 1.0);
    (factor(kind, w, y, yj), angle)
}

#[inline(always)]
fn far_term(kind: PairFactor, w: f64, y: f64, yj: f64) -> (f64, f64) {
    let angle = -FOUR_OVER_PI * atan_reduced((y - yj) / (y + yj));
    (factor(kind, w, y, yj), angle)
}

/// Split point and lane-aligned ends for a row.
#[inline(always)]
fn row_layout(ys: &[f64], yj: f64) -> (usize, usize, usize) {
    let split = ys.partition_point(|&y| y <= TAN_PI_8 * yj);
    let near_end = split / LANES * LANES;
    let far_end = split + (ys.len() - split) / LANES * LANES;
    (split, near_end, far_end)
}

#[inline(always)]
fn fold_lanes(acc: &[f64; LANES]) -> f64 {
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))
}

#[inline(always)]
fn tails(kind: PairFactor, ys: &[f64], ws: &[f64], yj: f64, inv: f64, layout: (usize, usize, usize), mut s: f64) -> f64 {
    let (split, near_end, far_end) = layout;
    for i in near_end..split {
        let (g, a) = near_term(kind, ws[i], ys[i], yj, inv);
        s = g.mul_add(a, s);
    }
    for i in far_end..ys.len() {
        let (g, a) = far_term(kind, ws[i], ys[i], yj);
        s = g.mul_add(a, s);
    }
    s
}

/// Σ_i factor_i·∠(y_i, y_j) over a sorted prefix `ys` with every `y_i ≤ yj`
/// and `yj > 0`. Portable path.
pub(crate) fn row_scalar(kind: PairFactor, ys: &[f64], ws: &[f64], yj: f64) -> f64 {
    debug_assert_eq!(ys.len(), ws.len());
    let inv = 1.0 / yj;
    let layout = row_layout(ys, yj);
    let (split, near_end, far_end) = layout;
    let mut acc = [0.0f64; LANES];
    for i in (0..near_end).step_by(LANES) {
        for l in 0..LANES {
            let (g, a) = near_term(kind, ws[i + l], ys[i + l], yj, inv);
            acc[l] = g.mul_add(a, acc[l]);
        }
    }
    for i in (split..far_end).step_by(LANES) {
        for l in 0..LANES {
            let (g, a) = far_term(kind, ws[i + l], ys[i + l], yj);
            acc[l] = g.mul_add(a, acc[l]);
        }
    }
    tails(kind, ys, ws, yj, inv, layout, fold_lanes(&acc))
}

#[cfg(target_arch = "x86_64")]
mod avx2 {
    use std::arch::x86_64::*;

    use super::*;

    #[inline(always)]
    unsafe fn atan_reduced4(x: __m256d) -> __m256d {
        let z = _mm256_mul_pd(x, x);
        let mut p = _mm256_set1_pd(ATAN_COEFFS[10]);
        for &c in ATAN_COEFFS[..10].iter().rev() {
            p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c));
        }
        _mm256_mul_pd(x, p)
    }

    #[inline(always)]
    unsafe fn factor4(kind: PairFactor, w: __m256d, y: __m256d, yj: __m256d) -> __m256d {
        match kind {
            PairFactor::WeightedGap => _mm256_mul_pd(w, _mm256_sub_pd(yj, y)),
            PairFactor::Weight => w,
        }
    }

    /// AVX2 twin of [`row_scalar`]. Lanes 0–3 and 4–7 map onto the two
    /// accumulators.
    ///
    /// # Safety
    /// The CPU must support AVX2 and FMA.
    #[target_feature(enable = "avx2,fma")]
    pub(crate) unsafe fn row(kind: PairFactor, ys: &[f64], ws: &[f64], yj: f64) -> f64 {
        debug_assert_eq!(ys.len(), ws.len());
        let inv = 1.0 / yj;
        let layout = row_layout(ys, yj);
        let (split, near_end, far_end) = layout;
        let y_ptr = ys.as_ptr();
        let w_ptr = ws.as_ptr();
        let vyj = _mm256_set1_pd(yj);
        let vinv = _mm256_set1_pd(inv);
        let one = _mm256_set1_pd(1.0);
        let neg_four_over_pi = _mm256_set1_pd(-FOUR_OVER_PI);
        let mut lo = _mm256_setzero_pd();
        let mut hi = _mm256_setzero_pd();

        let mut i = 0;
        while i < near_end {
            let y0 = _mm256_loadu_pd(y_ptr.add(i));
            let y1 = _mm256_loadu_pd(y_ptr.add(i + 4));
            let g0 = factor4(kind, _mm256_loadu_pd(w_ptr.add(i)), y0, vyj);
            let g1 = factor4(kind, _mm256_loadu_pd(w_ptr.add(i + 4)), y1, vyj);
            let a0 = _mm256_fmadd_pd(neg_four_over_pi, atan_reduced4(_mm256_mul_pd(y0, vinv)), one);
            let a1 = _mm256_fmadd_pd(neg_four_over_pi, atan_reduced4(_mm256_mul_pd(y1, vinv)), one);
            lo = _mm256_fmadd_pd(g0, a0, lo);
            hi = _mm256_fmadd_pd(g1, a1, hi);
            i += LANES;
        }
        let mut i = split;
        while i < far_end {
            let y0 = _mm256_loadu_pd(y_ptr.add(i));
            let y1 = _mm256_loadu_pd(y_ptr.add(i + 4));
            let g0 = factor4(kind, _mm256_loadu_pd(w_ptr.add(i)), y0, vyj);
            let g1 = factor4(kind, _mm256_loadu_pd(w_ptr.add(i + 4)), y1, vyj);
            let x0 = _mm256_div_pd(_mm256_sub_pd(y0, vyj), _mm256_add_pd(y0, vyj));
            let x1 = _mm256_div_pd(_mm256_sub_pd(y1, vyj), _mm256_add_pd(y1, vyj));
            let a0 = _mm256_mul_pd(neg_four_over_pi, atan_reduced4(x0));
            let a1 = _mm256_mul_pd(neg_four_over_pi, atan_reduced4(x1));
            lo = _mm256_fmadd_pd(g0, a0, lo);
            hi = _mm256_fmadd_pd(g1, a1, hi);
            i += LANES;
        }

        let mut acc = [0.0f64; LANES];
        _mm256_storeu_pd(acc.as_mut_ptr(), lo);
        _mm256_storeu_pd(acc.as_mut_ptr().add(4), hi);
        tails(kind, ys, ws, yj, inv, layout, fold_lanes(&acc))
    }
}

/// Which row implementation to use on this machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Backend {
    Scalar,
    #[cfg(target_arch = "x86_64")]
    Avx2,
}

impl Backend {
    pub(crate) fn detect() -> Backend {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma") {
                return Backend::Avx2;
            }
        }
        Backend::Scalar
    }

    #[inline]
    pub(crate) fn row(self, kind: PairFactor, ys: &[f64], ws: &[f64], yj: f64) -> f64 {
        match self {
            Backend::Scalar => row_scalar(kind, ys, ws, yj),
            // SAFETY: only constructed by `detect` after the feature check.
            #[cfg(target_arch = "x86_64")]
            Backend::Avx2 => unsafe { avx2::row(kind, ys, ws, yj) },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::angular_difference;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fast_angle_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..200_000 {
            let a: f64 = rng.random::<f64>() * 10f64.powi(rng.random_range(-6..7));
            let b: f64 = rng.random::<f64>() * 10f64.powi(rng.random_range(-6..7));
            let exact = angular_difference(a, b).unwrap();
            worst = worst.max((fast_angle(a, b) - exact).abs());
        }
        assert!(worst <= 1e-15, "worst deviation {worst:e}");
    }

    #[test]
    fn fast_angle_edges() {
        assert_eq!(fast_angle(0.0, 0.0), 0.0);
        assert_eq!(fast_angle(0.0, 3.0), 1.0);
        assert_eq!(fast_angle(3.0, 3.0), 0.0);
        let b = 1.0;
        let at_split = TAN_PI_8 * b;
        let below = fast_angle(at_split, b);
        let above = fast_angle(f64::from_bits(at_split.to_bits() + 1), b);
        assert!((below - above).abs() < 1e-15);
        assert!((below - 0.5).abs() < 1e-15);
    }

    fn random_row(seed: u64, len: usize) -> (Vec<f64>, Vec<f64>, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ys: Vec<f64> = (0..=len).map(|_| rng.random::<f64>() * 5.0).collect();
        if len > 3 {
            ys[1] = 0.0;
        }
        ys.sort_by(f64::total_cmp);
        let yj = ys.pop().unwrap();
        let ws = (0..len).map(|_| rng.random_range(0.0..3.0)).collect();
        (ys, ws, yj)
    }

    #[test]
    fn row_matches_pairwise_definition() {
        for (seed, len) in [(1, 0), (2, 1), (3, 7), (4, 8), (5, 9), (6, 63), (7, 500)] {
            let (ys, ws, yj) = random_row(seed, len);
            for kind in [PairFactor::WeightedGap, PairFactor::Weight] {
                let expect: f64 = ys
                    .iter()
                    .zip(&ws)
                    .map(|(&y, &w)| factor(kind, w, y, yj) * angular_difference(y, yj).unwrap())
                    .sum();
                let got = row_scalar(kind, &ys, &ws, yj);
                assert!((got - expect).abs() <= 1e-13 * (1.0 + expect.abs()), "{kind:?} len={len}");
            }
        }
    }

    #[test]
    fn simd_and_scalar_rows_are_bit_identical() {
        let backend = Backend::detect();
        for (seed, len) in [(10, 0), (11, 5), (12, 8), (13, 17), (14, 1000), (15, 4097)] {
            let (ys, ws, yj) = random_row(seed, len);
            for kind in [PairFactor::WeightedGap, PairFactor::Weight] {
                let a = row_scalar(kind, &ys, &ws, yj);
                let b = backend.row(kind, &ys, &ws, yj);
                assert_eq!(a.to_bits(), b.to_bits(), "{kind:?} len={len}");
            }
        }
    }
}
