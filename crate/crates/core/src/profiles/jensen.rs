//! Weighted-mean (Jensen) floors used to sharpen the `melas` constant.
//!
//! Everything lives on `[a, a+1]` with weight `(s - τ)²`, inside the region
//! `max(1/2, a) < τ < a + 1`.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫_a^{a+1} s^p (s-τ)² ds` by a Gauss–Legendre rule exact for degree
/// `p + 2`. The integrand is non-negative, so there is no cancellation.
pub fn shifted_moment(p: u32, a: f64, tau: f64) -> f64 {
    let m = (p as usize + 3).div_ceil(2) + 1;
    gauss_legendre(m)
        .into_iter()
        .map(|(x, w)| {
            let s = a + 0.5 * (x + 1.0);
            0.5 * w * s.powi(p as i32) * (s - tau) * (s - tau)
        })
        .sum()
}

/// `r(u) = (2u + 1) / (12 (u² + u + 1/3))`.
pub fn r_correction(u: f64) -> f64 {
    (2.0 * u + 1.0) / (12.0 * (u * u + u + 1.0 / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedMean {
    pub i0: f64,
    pub i1: f64,
    pub s_bar: f64,
}

/// `I₀ = ∫(s-τ)²`, `I₁ = ∫ s(s-τ)²` over `[a, a+1]` and their ratio, the
/// mean of `s` under the weight `(s-τ)²`. `I₁` uses the antiderivative
/// `(s-τ)⁴/4 + τ(s-τ)³/3`.
pub fn weighted_mean(a: f64, tau: f64) -> WeightedMean {
    let lo = a - tau;
    let hi = lo + 1.0;
    let i0 = (hi.powi(3) - lo.powi(3)) / 3.0;
    let anti = |w: f64| w.powi(4) / 4.0 + tau * w.powi(3) / 3.0;
    let i1 = anti(hi) - anti(lo);
    WeightedMean { i0, i1, s_bar: i1 / i0 }
}

fn check_region(a: f64, tau: f64) -> Result<()> {
    if a >= 0.0 && tau > a.max(0.5) && tau < a + 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRegion { a, tau })
    }
}

/// `(1/12)(14/5 + n 5^{-n})`.
pub fn laplacian_floor_constant(n: u32) -> f64 {
    (14.0 / 5.0 + n as f64 * 0.2f64.powi(n as i32)) / 12.0
}

/// `Q(s) = 2l + 4ls + n(2l-1)sⁿ + n(2l-2)s^{n+1} + n(2l-3)s^{n+2}`.
pub fn q_poly(n: u32, l: u32, s: f64) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    2.0 * lf
        + 4.0 * lf * s
        + nf * (2.0 * lf - 1.0) * s.powi(n as i32)
        + nf * (2.0 * lf - 2.0) * s.powi(n as i32 + 1)
        + nf * (2.0 * lf - 3.0) * s.powi(n as i32 + 2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JensenLaplacian {
    /// `J = 2τⁿ I₀ + 4τ^{n-1} I₁ + n Iₙ`.
    pub value: f64,
    pub floor: f64,
    pub s_bar: f64,
    /// `s̄ ≥ τ/5`.
    pub s_bar_ok: bool,
    pub holds: bool,
}

pub fn jensen_floor_laplacian(n: u32, a: f64, tau: f64) -> Result<JensenLaplacian> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    check_region(a, tau)?;
    let wm = weighted_mean(a, tau);
    let value = 2.0 * tau.powi(n as i32) * wm.i0
        + 4.0 * tau.powi(n as i32 - 1) * wm.i1
        + n as f64 * shifted_moment(n, a, tau);
    let floor = laplacian_floor_constant(n) * tau.powi(n as i32);
    Ok(JensenLaplacian {
        value,
        floor,
        s_bar: wm.s_bar,
        s_bar_ok: wm.s_bar >= tau / 5.0,
        holds: value >= floor,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JensenPoly {
    /// `E(τ)`: the five lowest-order terms of the poly bracket.
    pub value: f64,
    /// `(1/12) Q(1/5) τ^{n+2l-2}`.
    pub floor: f64,
    pub holds: bool,
    /// `Q(1/5) τ^{n+2l-2}`, the constant without the `1/12` from `I₀`;
    /// reported, never asserted.
    pub strong_floor: f64,
    pub strong_holds: bool,
}

pub fn jensen_floor_poly(n: u32, l: u32, a: f64, tau: f64) -> Result<JensenPoly> {
    if n < 2 || l < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and l >= 2, got n = {n}, l = {l}")));
    }
    check_region(a, tau)?;
    let (nf, lf) = (n as f64, l as f64);
    let ni = n as i32;
    let li = l as i32;
    let m = |p: u32| shifted_moment(p, a, tau);
    let value = 2.0 * lf * (tau.powi(ni + 2 * li - 2) * m(0) + 2.0 * tau.powi(ni + 2 * li - 3) * m(1))
        + nf * ((2.0 * lf - 1.0) * tau.powi(2 * li - 2) * m(n)
            + (2.0 * lf - 2.0) * tau.powi(2 * li - 3) * m(n + 1)
            + (2.0 * lf - 3.0) * tau.powi(2 * li - 4) * m(n + 2));
    let scale = tau.powi(ni + 2 * li - 2);
    let strong_floor = q_poly(n, l, 0.2) * scale;
    let floor = strong_floor / 12.0;
    Ok(JensenPoly {
        value,
        floor,
        holds: value >= floor,
        strong_floor,
        strong_holds: value >= strong_floor,
    })
}

/// Aggregate of a grid sweep over the region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSummary {
    pub n: u32,
    pub l: u32,
    pub points: usize,
    pub violations: usize,
    /// Laplacian sweeps: points with `s̄ < τ/5`. Poly sweeps: points where
    /// the strong (no `1/12`) floor fails.
    pub secondary_violations: usize,
    /// Smallest `value / floor` seen.
    pub min_ratio: f64,
}

/// Grid nodes: `a` evenly spaced on `[0, a_max]`, `τ` at interior points of
/// `(max(1/2, a), a + 1)`.
fn region_grid(grid: usize, a_max: f64) -> impl Iterator<Item = (f64, f64)> {
    (0..grid).flat_map(move |i| {
        let a = if grid == 1 { 0.0 } else { a_max * i as f64 / (grid - 1) as f64 };
        let lo = a.max(0.5);
        let hi = a + 1.0;
        (0..grid).map(move |j| (a, lo + (hi - lo) * (j as f64 + 1.0) / (grid as f64 + 1.0)))
    })
}

pub fn jensen_grid_laplacian(n: u32, grid: usize, a_max: f64) -> Result<GridSummary> {
    let mut s = GridSummary { n, l: 1, points: 0, violations: 0, secondary_violations: 0, min_ratio: f64::INFINITY };
    for (a, tau) in region_grid(grid, a_max) {
        let r = jensen_floor_laplacian(n, a, tau)?;
        s.points += 1;
        s.violations += usize::from(!r.holds);
        s.secondary_violations += usize::from(!r.s_bar_ok);
        s.min_ratio = s.min_ratio.min(r.value / r.floor);
    }
    Ok(s)
}

pub fn jensen_grid_poly(n: u32, l: u32, grid: usize, a_max: f64) -> Result<GridSummary> {
    let mut s = GridSummary { n, l, points: 0, violations: 0, secondary_violations: 0, min_ratio: f64::INFINITY };
    for (a, tau) in region_grid(grid, a_max) {
        let r = jensen_floor_poly(n, l, a, tau)?;
        s.points += 1;
        s.violations += usize::from(!r.holds);
        s.secondary_violations += usize::from(!r.strong_holds);
        s.min_ratio = s.min_ratio.min(r.value / r.floor);
    }
    Ok(s)
}

/// Minimum of `r(u)` over `(-1, 0]`: a uniform scan with `samples` points
/// followed by golden-section refinement around the best node.
/// Returns `(u_min, r_min)`.
pub fn r_floor_scan(samples: usize) -> (f64, f64) {
    let h = 1.0 / samples as f64;
    let (mut best_u, mut best_r) = (0.0, r_correction(0.0));
    for i in 1..=samples {
        let u = -1.0 + i as f64 * h;
        let r = r_correction(u);
        if r < best_r {
            best_u = u;
            best_r = r;
        }
    }
    let (mut lo, mut hi) = ((best_u - h).max(-1.0), (best_u + h).min(0.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if r_correction(x1) < r_correction(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let u = 0.5 * (lo + hi);
    let r = r_correction(u);
    if r < best_r {
        (u, r)
    } else {
        (best_u, best_r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for m in 1..12usize {
            let rule = gauss_legendre(m);
            let total: f64 = rule.iter().map(|(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-14);
            for deg in 0..(2 * m) {
                let q: f64 = rule.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "m = {m}, deg = {deg}");
            }
        }
    }

    #[test]
    fn weighted_mean_examples() {
        let w = weighted_mean(0.0, 0.5);
        assert!((w.i0 - 1.0 / 12.0).abs() < 1e-15);
        assert!((w.i1 - 1.0 / 24.0).abs() < 1e-15);
        assert!((w.s_bar - 0.5).abs() < 1e-15);
        let w = weighted_mean(1.0, 1.0);
        assert!((w.i0 - 1.0 / 3.0).abs() < 1e-15);
        assert!((w.i1 - 7.0 / 12.0).abs() < 1e-15);
        assert!((w.s_bar - 1.75).abs() < 1e-15);
    }

    #[test]
    fn s_bar_decomposes_through_r() {
        for i in 0..50 {
            let a = 0.21 * i as f64;
            for j in 0..20 {
                let tau = a - 0.7 + 0.13 * j as f64;
                let w = weighted_mean(a, tau);
                assert!((w.s_bar - (a + 0.5 + r_correction(a - tau))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jensen_laplacian_example() {
        let r = jensen_floor_laplacian(2, 0.0, 0.6).unwrap();
        assert!((r.value - 0.1792).abs() < 1e-14);
        assert!((r.floor - 0.0864).abs() < 1e-15);
        assert!((r.s_bar - 0.3214285714285714).abs() < 1e-14);
        assert!(r.holds && r.s_bar_ok);
        assert!(matches!(jensen_floor_laplacian(2, 0.0, 0.2), Err(Error::OutOfRegion { .. })));
        assert!(jensen_floor_laplacian(2, 1.0, 2.0).is_err());
        assert!(jensen_floor_laplacian(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn jensen_poly_example() {
        // E = 1229/112 from direct integration of the moments.
        let r = jensen_floor_poly(2, 2, 1.0, 1.5).unwrap();
        assert!((r.value - 1229.0 / 112.0).abs() < 1e-12);
        assert!((r.floor - 5.8752 * 1.5f64.powi(4) / 12.0).abs() < 1e-12);
        assert!(r.holds);
        assert!(jensen_floor_poly(2, 1, 1.0, 1.5).is_err());
    }

    #[test]
    fn q_at_one_fifth() {
        assert!((q_poly(2, 2, 0.2) - 5.8752).abs() < 1e-13);
        for n in 2..=16 {
            for l in 2..=16 {
                assert!(q_poly(n, l, 0.2) >= 2.5 * l as f64);
            }
        }
    }

    #[test]
    fn r_floor() {
        let (u, r) = r_floor_scan(100_000);
        assert!((r + 3f64.sqrt() / 6.0).abs() < 1e-10);
        assert!((u - (-1.0 - 1.0 / 3f64.sqrt()) / 2.0).abs() < 1e-5);
    }

    #[test]
    fn small_grids_hold() {
        let s = jensen_grid_laplacian(3, 20, 10.0).unwrap();
        assert_eq!(s.points, 400);
        assert_eq!(s.violations, 0);
        assert_eq!(s.secondary_violations, 0);
        let s = jensen_grid_poly(2, 3, 20, 10.0).unwrap();
        assert_eq!(s.violations, 0);
    }
}
