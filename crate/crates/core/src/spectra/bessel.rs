//! Bessel functions of the first kind and their positive zeros.

use std::f64::consts::PI;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Key, Spectrum};
use crate::error::{Error, Result};
use crate::special::{binomial, gamma};

const NEWTON_CAP: usize = 64;
/// Scan step used to bracket zeros. Consecutive zeros of `J_ν` are more
/// than 2 apart for every `ν ≥ 0`, so no zero pair can hide in one step.
const SCAN_STEP: f64 = 0.5;

/// `(J_ν(x), J_{ν+1}(x))` for `ν ≥ 0`, `x > 0`.
///
/// Miller's backward recurrence from an order well above `max(ν, x)`,
/// normalised with the Neumann sum
/// `(x/2)^{ν₀} = Σ_k (ν₀+2k) Γ(ν₀+k)/k! · J_{ν₀+2k}(x)`, `ν₀ = frac(ν)`,
/// which for `ν₀ = 0` is `1 = J₀ + 2 Σ J_{2k}`. The normalisation scales
/// every order by the same factor, so zero locations only depend on the
/// recurrence itself.
pub fn bessel_j_pair(nu: f64, x: f64) -> (f64, f64) {
    assert!(nu >= 0.0 && nu.is_finite(), "order must be finite and >= 0");
    if x == 0.0 {
        return (if nu == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    assert!(x > 0.0 && x.is_finite(), "argument must be finite and > 0");
    let nu0 = nu.fract();
    let idx = nu.trunc() as usize;
    let big = nu.max(x);
    let mut top = (big + 30.0 + 6.0 * big.cbrt()).ceil() as usize;
    top += top % 2;

    let (mut above, mut cur) = (0.0f64, 1e-280f64);
    let (mut want, mut want_next) = (0.0, 0.0);
    let mut norm = 0.0;
    // Neumann weights for the even indices 2k.
    let mut weights = Vec::with_capacity(top / 2 + 1);
    if nu0 == 0.0 {
        weights.push(1.0);
        weights.resize(top / 2 + 1, 2.0);
    } else {
        let mut g = gamma(nu0);
        for k in 0..=top / 2 {
            if k > 0 {
                g *= (nu0 + k as f64 - 1.0) / k as f64;
            }
            weights.push((nu0 + 2.0 * k as f64) * g);
        }
    }
    let mut mu = top;
    loop {
        if mu == idx {
            want = cur;
        }
        if mu == idx + 1 {
            want_next = cur;
        }
        if mu.is_multiple_of(2) {
            norm += weights[mu / 2] * cur;
        }
        if mu == 0 {
            break;
        }
        let below = 2.0 * (nu0 + mu as f64) / x * cur - above;
        above = cur;
        cur = below;
        mu -= 1;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            above *= s;
            want *= s;
            want_next *= s;
            norm *= s;
        }
    }
    let scale = (0.5 * x).powf(nu0) / norm;
    (want * scale, want_next * scale)
}

pub fn bessel_j(nu: f64, x: f64) -> f64 {
    bessel_j_pair(nu, x).0
}

/// McMahon's large-zero approximation `β - (μ-1)/(8β)`,
/// `β = (p + ν/2 - 1/4)π`, `μ = 4ν²`.
pub fn mcmahon_guess(nu: f64, p: u32) -> f64 {
    let beta = (p as f64 + 0.5 * nu - 0.25) * PI;
    beta - (4.0 * nu * nu - 1.0) / (8.0 * beta)
}

/// Newton on `J_ν` kept inside the sign-change bracket `[lo, hi]`, falling
/// back to bisection whenever a step leaves it.
fn refine(nu: f64, mut lo: f64, mut hi: f64, start: f64) -> Result<f64> {
    let f_lo = bessel_j(nu, lo);
    let mut x = if start > lo && start < hi { start } else { 0.5 * (lo + hi) };
    for _ in 0..NEWTON_CAP {
        let (j, j1) = bessel_j_pair(nu, x);
        if j == 0.0 {
            return Ok(x);
        }
        if (j > 0.0) == (f_lo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let dj = nu / x * j - j1;
        let mut next = x - j / dj;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * x {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NumericalFailure(format!("zero of J_{nu} did not converge in [{lo}, {hi}]")))
}

/// Positive zeros of `J_ν` in increasing order.
#[derive(Clone, Debug)]
pub struct ZeroIter {
    nu: f64,
    x: f64,
    f: f64,
    index: u32,
}

impl ZeroIter {
    pub fn new(nu: f64) -> Self {
        // No zero lies below √(ν(ν+2)).
        let x = (nu * (nu + 2.0)).sqrt().max(1e-3);
        ZeroIter { nu, x, f: bessel_j(nu, x), index: 0 }
    }

    pub fn order(&self) -> f64 {
        self.nu
    }

    pub fn next_zero(&mut self) -> Result<f64> {
        let target = self.index + 1;
        let mut guard = 0usize;
        loop {
            let step = SCAN_STEP.min(0.25 * self.x.max(1.0));
            let x1 = self.x + step;
            let f1 = bessel_j(self.nu, x1);
            if f1 == 0.0 || (f1 > 0.0) != (self.f > 0.0) {
                let root = if f1 == 0.0 {
                    x1
                } else {
                    refine(self.nu, self.x, x1, mcmahon_guess(self.nu, target))?
                };
                self.x = x1;
                // Step past an exact hit so the next scan starts cleanly.
                self.f = if f1 == 0.0 { bessel_j(self.nu, x1 + 1e-9) } else { f1 };
                self.index = target;
                return Ok(root);
            }
            self.x = x1;
            self.f = f1;
            guard += 1;
            if guard > 10_000_000 {
                return Err(Error::NumericalFailure(format!("no zero of J_{} found", self.nu)));
            }
        }
    }
}

impl Iterator for ZeroIter {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Result<f64>> {
        Some(self.next_zero())
    }
}

/// `j_{ν,p}`, the `p`-th positive zero of `J_ν`.
pub fn bessel_zero(nu: f64, p: u32) -> Result<f64> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::InvalidParameter(format!("order must be >= 0, got {nu}")));
    }
    if p == 0 {
        return Err(Error::InvalidParameter("zero index starts at 1".into()));
    }
    let mut it = ZeroIter::new(nu);
    let mut z = 0.0;
    for _ in 0..p {
        z = it.next_zero()?;
    }
    Ok(z)
}

/// Number of independent spherical harmonics of degree `m` in `n` dimensions.
pub fn harmonic_multiplicity(n: u32, m: u32) -> usize {
    match m {
        0 => 1,
        1 => n as usize,
        _ => {
            let (n, m) = (n as u64, m as u64);
            let hi = binomial(n + m - 1, n - 1).expect("multiplicity fits");
            let lo = binomial(n + m - 3, n - 1).expect("multiplicity fits");
            (hi - lo) as usize
        }
    }
}

/// First `count` Dirichlet eigenvalues of the `n`-ball of radius `r`:
/// `(j_{ν,p}/r)²` with `ν = m + n/2 - 1`, each repeated
/// [`harmonic_multiplicity`] times. The frontier holds at most one pending
/// zero per order plus the first zero of the next unopened order, which is
/// enough because zeros increase in both `m` and `p`.
pub fn ball_spectrum(n: u32, r: f64, count: usize, cap: usize) -> Result<Spectrum> {
    if n < 2 {
        return Err(Error::InvalidDomain(format!("ball needs n >= 2, got {n}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidDomain(format!("radius must be positive, got {r}")));
    }
    if count > cap {
        return Err(Error::BudgetExceeded { requested: count, cap });
    }
    let order = |m: u32| m as f64 + n as f64 / 2.0 - 1.0;
    let mut iters: Vec<ZeroIter> = Vec::new();
    let mut heap = BinaryHeap::new();
    let open = |iters: &mut Vec<ZeroIter>, heap: &mut BinaryHeap<Reverse<(Key, u32)>>| -> Result<()> {
        let m = iters.len() as u32;
        let mut it = ZeroIter::new(order(m));
        heap.push(Reverse((Key(it.next_zero()?), m)));
        iters.push(it);
        Ok(())
    };
    open(&mut iters, &mut heap)?;
    let mut values = Vec::with_capacity(count);
    while values.len() < count {
        let Reverse((Key(z), m)) = heap.pop().expect("ball frontier never empties");
        let mi = m as usize;
        if iters[mi].index == 1 && mi + 1 == iters.len() {
            open(&mut iters, &mut heap)?;
        }
        heap.push(Reverse((Key(iters[mi].next_zero()?), m)));
        let lambda = (z / r) * (z / r);
        let copies = harmonic_multiplicity(n, m).min(count - values.len());
        values.extend(std::iter::repeat_n(lambda, copies));
    }
    Spectrum::from_sorted(values)
}
