//! The rearrangement lemmas: given a profile's low moment
//! `A = ∫ s^{n-1} ψ`, bound its high moment `B = ∫ s^{2l+n-1} ψ` from below.
//! `l = 1` is the Laplacian case, `l ≥ 2` the poly-Laplacian case.

use super::Profile;
use crate::error::{Error, Result};

/// Relative tolerance on the `holds` verdicts.
pub const LEMMA_TOLERANCE: f64 = 1e-9;

/// `S_j = (a+1)^j - a^j`, summed as `Σ_{i<j} (a+1)^i a^{j-1-i}` so no
/// cancellation occurs for large `a`.
pub fn power_gap(a: f64, j: u32) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let b = a + 1.0;
    let mut acc = 0.0;
    let mut bp = 1.0;
    // Horner in a: acc_{k+1} = acc_k · a + b^k.
    for _ in 0..j {
        acc = acc * a + bp;
        bp *= b;
    }
    acc
}

/// Unique `a ≥ 0` with `((a+1)^{n+1} - a^{n+1}) / (n+1) = M`.
///
/// Bisection on `[max(0, M^{1/n} - 1), M^{1/n}]` (forced by
/// `aⁿ ≤ ((a+1)^{n+1} - a^{n+1})/(n+1) ≤ (a+1)ⁿ`) down to 1e-13, then one
/// Newton step kept only if it stays inside the final bracket.
pub fn solve_a(n: u32, moment: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let floor = 1.0 / (n as f64 + 1.0);
    if !moment.is_finite() || moment < floor * (1.0 - 1e-12) {
        return Err(Error::InfeasibleMoment { n, moment, floor });
    }
    let f = |a: f64| power_gap(a, n + 1) / (n as f64 + 1.0);
    let root = moment.powf(1.0 / n as f64);
    let mut lo = (root - 1.0).max(0.0);
    let mut hi = root;
    if f(lo) >= moment {
        return Ok(lo);
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < moment {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    let polished = a - (f(a) - moment) / power_gap(a, n);
    let width = (hi - lo).max(f64::EPSILON * hi);
    if polished.is_finite() && (polished - a).abs() <= width {
        Ok(polished.max(0.0))
    } else {
        Ok(a)
    }
}

/// Closed form of `∫_a^{a+1} (2l τ^{n+2l} + n s^{n+2l} - (n+2l) τ^{2l} sⁿ) ds`:
/// `2l τ^{n+2l} + n/(n+2l+1) S_{n+2l+1} - (n+2l)/(n+1) τ^{2l} S_{n+1}`.
pub fn bracket_integral(n: u32, l: u32, a: f64, tau: f64) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    let high = n + 2 * l;
    2.0 * lf * tau.powi(high as i32) + nf / (high as f64 + 1.0) * power_gap(a, high + 1)
        - (high as f64) / (nf + 1.0) * tau.powi(2 * l as i32) * power_gap(a, n + 1)
}

/// Shift `a` together with the right-hand side of the lemma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaBound {
    pub a: f64,
    pub s_low: f64,
    pub s_high: f64,
    pub rhs: f64,
}

/// Evaluates
///
/// ```text
/// ψ(0)^{-2l/n} (nA)^{(2l+n)/n} / n
///   + ψ(0)^{2l+n+1} S_{n+2l+1} / ((2l+n)(n+2l+1) ρ^{2l+n})
///   - ψ(0)^{(n²+n-2l)/n} (nA)^{2l/n} S_{n+1} / (n(n+1) ρⁿ)
/// ```
///
/// with `a` solved from the normalised moment `n A ρⁿ ψ(0)^{-(n+1)}`.
pub fn lemma_lower_bound(n: u32, l: u32, moment_a: f64, psi0: f64, rho: f64) -> Result<LemmaBound> {
    if n < 2 || l < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and l >= 1, got n = {n}, l = {l}")));
    }
    if !(moment_a > 0.0 && psi0 > 0.0 && rho > 0.0) {
        return Err(Error::InvalidParameter("A, ψ(0) and ρ must be positive".into()));
    }
    let (nf, lf) = (n as f64, l as f64);
    let na = nf * moment_a;
    let normalized = na * rho.powi(n as i32) * psi0.powf(-(nf + 1.0));
    let a = solve_a(n, normalized)?;
    let high = n + 2 * l;
    let s_low = power_gap(a, n + 1);
    let s_high = power_gap(a, high + 1);
    let hf = high as f64;

    let first = psi0.powf(-2.0 * lf / nf) * na.powf(hf / nf) / nf;
    let second = psi0.powi(high as i32 + 1) * s_high / (hf * (hf + 1.0) * rho.powi(high as i32));
    let third = psi0.powf((nf * nf + nf - 2.0 * lf) / nf) * na.powf(2.0 * lf / nf) * s_low
        / (nf * (nf + 1.0) * rho.powi(n as i32));
    Ok(LemmaBound { a, s_low, s_high, rhs: first + second - third })
}

/// Outcome of checking one profile against the lemma.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub n: u32,
    pub l: u32,
    /// `A = ∫ s^{n-1} ψ`.
    pub moment_a: f64,
    /// `B = ∫ s^{2l+n-1} ψ`.
    pub moment_b: f64,
    pub a: f64,
    pub s_low: f64,
    pub s_high: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `B - rhs`.
    pub slack: f64,
}

pub fn check_lemma(p: &Profile, n: u32, l: u32) -> Result<LemmaReport> {
    let moment_a = p.moment(n - 1);
    let moment_b = p.moment(2 * l + n - 1);
    let bound = lemma_lower_bound(n, l, moment_a, p.peak(), p.rho())?;
    let slack = moment_b - bound.rhs;
    Ok(LemmaReport {
        n,
        l,
        moment_a,
        moment_b,
        a: bound.a,
        s_low: bound.s_low,
        s_high: bound.s_high,
        rhs: bound.rhs,
        holds: slack >= -LEMMA_TOLERANCE * moment_b.abs().max(1.0),
        slack,
    })
}

/// `(2l+n) B ≥ ∫_a^{a+1} s^{2l+n} ds`, evaluated on the normalised profile
/// (ψ(0) = 1, ρ = 1) with `a` from that profile's own moment equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn check_melas_chain(p: &Profile, n: u32, l: u32) -> Result<ChainReport> {
    let (q, _, _) = p.normalize();
    let high = 2 * l + n;
    let a = solve_a(n, n as f64 * q.moment(n - 1))?;
    let lhs = high as f64 * q.moment(high - 1);
    let rhs = power_gap(a, high + 1) / (high as f64 + 1.0);
    Ok(ChainReport { lhs, rhs, holds: lhs - rhs >= -LEMMA_TOLERANCE * lhs.abs().max(1.0) })
}

#[cfg(test)]
mod tests {
    use super::super::{random_profile, wedge};
    use super::*;

    #[test]
    fn power_gap_matches_direct_difference() {
        for &a in &[0.0, 0.3, 1.0, 2.5] {
            for j in 0..8 {
                let direct = (a + 1.0_f64).powi(j) - a.powi(j);
                assert!((power_gap(a, j as u32) - direct).abs() < 1e-12 * direct.max(1.0));
            }
        }
        assert_eq!(power_gap(0.0, 5), 1.0);
        assert_eq!(power_gap(1.0, 3), 7.0);
    }

    #[test]
    fn solve_a_examples() {
        assert!(solve_a(2, 1.0 / 3.0).unwrap().abs() < 1e-13);
        assert!((solve_a(2, 7.0 / 3.0).unwrap() - 1.0).abs() < 1e-13);
        assert!(solve_a(3, 0.25).unwrap().abs() < 1e-13);
        assert!(matches!(solve_a(2, 0.3), Err(Error::InfeasibleMoment { .. })));
    }

    #[test]
    fn solve_a_inverts_the_moment_map() {
        for n in 1..8 {
            for &a in &[0.0, 1e-3, 0.5, 2.0, 9.75, 40.0] {
                let m = power_gap(a, n + 1) / (n as f64 + 1.0);
                let got = solve_a(n, m).unwrap();
                assert!((got - a).abs() < 1e-12 * a.max(1.0), "n = {n}, a = {a}, got {got}");
            }
        }
    }

    #[test]
    fn bracket_integral_examples() {
        assert!((bracket_integral(2, 1, 0.0, 1.0) - 16.0 / 15.0).abs() < 1e-14);
        assert!((bracket_integral(2, 1, 0.0, 0.0) - 0.4).abs() < 1e-15);
        assert!((bracket_integral(2, 2, 1.0, 1.0) - 184.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn lemma_bound_examples() {
        let b = lemma_lower_bound(2, 1, 1.0 / 6.0, 1.0, 1.0).unwrap();
        assert!(b.a.abs() < 1e-13);
        assert!((b.rhs - 1.0 / 20.0).abs() < 1e-14);
        let b = lemma_lower_bound(2, 2, 1.0 / 6.0, 1.0, 1.0).unwrap();
        assert!(b.a.abs() < 1e-13);
        assert!((b.rhs - 1.0 / 42.0).abs() < 1e-14);
        assert!(lemma_lower_bound(1, 1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn wedge_is_the_equality_case() {
        for n in 2..7 {
            for l in 1..4 {
                let r = check_lemma(&wedge(), n, l).unwrap();
                assert!(r.holds);
                assert!(r.slack.abs() < 1e-12, "n = {n}, l = {l}, slack = {}", r.slack);
            }
        }
    }

    #[test]
    fn scaled_wedge_holds() {
        let p = Profile::new(vec![(0.0, 2.0), (2.0, 0.0)], 1.0).unwrap();
        let r = check_lemma(&p, 2, 1).unwrap();
        assert!(r.holds);
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn random_profile_n3_l2() {
        let r = check_lemma(&random_profile(7), 3, 2).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.s_low >= 1.0 && r.s_high >= 1.0);
    }

    #[test]
    fn lemma_matches_the_normalised_form() {
        // The unnormalised bound equals ψ(0)^{2l+n+1} ρ^{-(2l+n)} times the
        // normalised bound (1/n)(nA')^{(2l+n)/n} + S_high/((2l+n)(2l+n+1))
        // - (nA')^{2l/n} S_low/(n(n+1)).
        for seed in 0..40 {
            let p = random_profile(seed);
            for (n, l) in [(2u32, 1u32), (3, 2), (5, 3)] {
                let r = check_lemma(&p, n, l).unwrap();
                let (q, _, _) = p.normalize();
                let (nf, hf) = (n as f64, (2 * l + n) as f64);
                let na = nf * q.moment(n - 1);
                let norm = na.powf(hf / nf) / nf + r.s_high / (hf * (hf + 1.0))
                    - na.powf(2.0 * l as f64 / nf) * r.s_low / (nf * (nf + 1.0));
                let scaled = norm * p.peak().powi(2 * l as i32 + n as i32 + 1) / p.rho().powi(2 * l as i32 + n as i32);
                assert!((scaled - r.rhs).abs() < 1e-10 * r.rhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn melas_chain_on_wedge_and_random() {
        let c = check_melas_chain(&wedge(), 2, 1).unwrap();
        assert!(c.holds);
        // wedge: a = 0 and (n+2) ∫ s^{n+1}(1-s) = 1/(n+3) exactly
        assert!((c.lhs - c.rhs).abs() < 1e-14);
        for seed in 0..200 {
            assert!(check_melas_chain(&random_profile(seed), 3, 2).unwrap().holds);
        }
    }
}
