//! Exact expansion of the two binary polynomial identities that drive the
//! inertia-corrected estimates:
//!
//! ```text
//! n s^{n+2} - (n+2) τ² s^n + 2 τ^{n+2}
//!     = Σ_{k=1..n} 2k s^{k-1} τ^{n-k+1} (τ-s)² + n (τ-s)² s^n
//!
//! d s^{d+q} - (d+q) s^d τ^q + q τ^{d+q}
//!     = q Σ_{k=1..d} k s^{k-1} τ^{d+q-1-k} (s-τ)²
//!       + d (s-τ)² Σ_{j=0..q-2} (q-1-j) s^{d+j} τ^{q-2-j}
//! ```
//!
//! Both sides are expanded term by term over arbitrary-precision rationals
//! and compared by subtraction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent pair `(s-power, τ-power)`.
pub type Exponents = (u32, u32);

/// Homogeneous polynomial in `(s, τ)` with exact rational coefficients.
///
/// Only non-zero coefficients are stored and every stored term has total
/// degree equal to [`BivariatePolynomial::degree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePolynomial {
    degree: u32,
    terms: BTreeMap<Exponents, BigRational>,
}

impl BivariatePolynomial {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// Single term `c · s^i τ^j`.
    pub fn monomial(coefficient: BigRational, s_pow: u32, tau_pow: u32) -> Self {
        let mut p = Self::zero(s_pow + tau_pow);
        p.add_term(s_pow, tau_pow, coefficient)
            .expect("monomial degree matches by construction");
        p
    }

    pub fn from_int_terms(degree: u32, terms: &[(i64, u32, u32)]) -> Result<Self> {
        let mut p = Self::zero(degree);
        for &(c, i, j) in terms {
            p.add_term(i, j, BigRational::from_integer(BigInt::from(c)))?;
        }
        Ok(p)
    }

    /// Accumulates `c · s^i τ^j`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, s_pow: u32, tau_pow: u32, coefficient: BigRational) -> Result<()> {
        if s_pow + tau_pow != self.degree {
            return Err(Error::InvalidParameter(format!(
                "term s^{s_pow} τ^{tau_pow} breaks homogeneity of degree {}",
                self.degree
            )));
        }
        if coefficient.is_zero() {
            return Ok(());
        }
        let key = (s_pow, tau_pow);
        let sum = match self.terms.remove(&key) {
            Some(existing) => existing + coefficient,
            None => coefficient,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `s^i τ^j` (zero when absent).
    pub fn coefficient(&self, s_pow: u32, tau_pow: u32) -> BigRational {
        self.terms
            .get(&(s_pow, tau_pow))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &BigRational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// Coefficients indexed by the τ-power `j`, for `j = 0..=degree`.
    pub fn tau_profile(&self) -> Vec<BigRational> {
        (0..=self.degree)
            .map(|j| self.coefficient(self.degree - j, j))
            .collect()
    }

    /// Evaluates at a floating-point point (for spot checks only).
    pub fn eval_f64(&self, s: f64, tau: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| rational_to_f64(c) * s.powi(i as i32) * tau.powi(j as i32))
            .sum()
    }

    fn checked_same_degree(&self, other: &Self) {
        // Zero polynomials carry a nominal degree and may be combined freely.
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding polynomials of degree {} and {}",
            self.degree,
            other.degree
        );
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        self.checked_same_degree(rhs);
        let degree = if self.is_zero() { rhs.degree } else { self.degree };
        let mut out = BivariatePolynomial { degree, terms: self.terms.clone() };
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone()).expect("degrees checked");
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        self + &(-rhs)
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero(self.degree + rhs.degree);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2)
                    .expect("product degree is the sum of degrees");
            }
        }
        out
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let has_var = i > 0 || j > 0;
            if !mag.is_one() || !has_var {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                write!(f, "s^{i}")?;
            }
            if j > 0 {
                write!(f, "t^{j}")?;
            }
        }
        Ok(())
    }
}

/// Both sides of an identity and whether they agree exactly.
#[derive(Clone, Debug)]
pub struct IdentityExpansion {
    pub lhs: BivariatePolynomial,
    pub rhs: BivariatePolynomial,
    pub equal: bool,
}

impl IdentityExpansion {
    fn new(lhs: BivariatePolynomial, rhs: BivariatePolynomial) -> Self {
        let equal = (&lhs - &rhs).is_zero();
        Self { lhs, rhs, equal }
    }
}

/// `(τ - s)²` (which equals `(s - τ)²`).
fn square_of_difference() -> BivariatePolynomial {
    BivariatePolynomial::from_int_terms(2, &[(1, 0, 2), (-2, 1, 1), (1, 2, 0)])
        .expect("degree-2 terms")
}

/// Expands both sides of the Laplacian identity for a given `n ≥ 1`.
pub fn expand_laplacian_sides(n: u32) -> Result<IdentityExpansion> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let deg = n + 2;
    let lhs = BivariatePolynomial::from_int_terms(
        deg,
        &[(n as i64, n + 2, 0), (-(n as i64 + 2), n, 2), (2, 0, n + 2)],
    )?;

    let sq = square_of_difference();
    let mut inner = BivariatePolynomial::zero(n);
    for k in 1..=n {
        inner.add_term(k - 1, n - k + 1, int(2 * k as i64))?;
    }
    inner.add_term(n, 0, int(n as i64))?;
    // Distribute term by term rather than multiplying the factored form, so the
    // right-hand side is literally the printed sum of products.
    let mut rhs = BivariatePolynomial::zero(deg);
    for ((i, j), c) in inner.terms() {
        let part = &BivariatePolynomial::monomial(c.clone(), i, j) * &sq;
        rhs = &rhs + &part;
    }
    Ok(IdentityExpansion::new(lhs, rhs))
}

/// Expands both sides of the poly-Laplacian identity for `d, q ≥ 2`.
pub fn expand_poly_sides(d: u32, q: u32) -> Result<IdentityExpansion> {
    if d < 2 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "d and q must both be >= 2, got (d, q) = ({d}, {q})"
        )));
    }
    let deg = d + q;
    let lhs = BivariatePolynomial::from_int_terms(
        deg,
        &[(d as i64, d + q, 0), (-((d + q) as i64), d, q), (q as i64, 0, d + q)],
    )?;

    let sq = square_of_difference();
    let mut rhs = BivariatePolynomial::zero(deg);
    for k in 1..=d {
        let m = BivariatePolynomial::monomial(int((q * k) as i64), k - 1, d + q - 1 - k);
        rhs = &rhs + &(&m * &sq);
    }
    for (j, a_j) in quotient_coefficients(q)?.into_iter().enumerate() {
        let j = j as u32;
        let m = BivariatePolynomial::monomial(a_j * int(d as i64), d + j, q - 2 - j);
        rhs = &rhs + &(&m * &sq);
    }
    Ok(IdentityExpansion::new(lhs, rhs))
}

/// Per-`j` coefficients of `τ^j s^{n+2-j}` in the expanded right-hand side of
/// the Laplacian identity, split into the four sums `A, B, C, D` obtained by
/// multiplying out `(τ² - 2τs + s²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientProfile {
    pub n: u32,
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
    pub d: Vec<BigRational>,
    /// `C_R(j) = A_j + B_j + C_j + D_j`.
    pub total: Vec<BigRational>,
}

impl CoefficientProfile {
    /// Non-zero entries of the total as a `j → coefficient` map.
    pub fn nonzero(&self) -> BTreeMap<u32, BigRational> {
        self.total
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c.clone()))
            .collect()
    }
}

pub fn component_a(n: u32, j: u32) -> i64 {
    if (3..=n + 2).contains(&j) {
        2 * (n as i64 + 3 - j as i64)
    } else {
        0
    }
}

pub fn component_b(n: u32, j: u32) -> i64 {
    if (2..=n + 1).contains(&j) {
        -4 * (n as i64 + 2 - j as i64)
    } else {
        0
    }
}

pub fn component_c(n: u32, j: u32) -> i64 {
    if (1..=n).contains(&j) {
        2 * (n as i64 + 1 - j as i64)
    } else {
        0
    }
}

pub fn component_d(n: u32, j: u32) -> i64 {
    match j {
        0 | 2 => n as i64,
        1 => -2 * n as i64,
        _ => 0,
    }
}

/// Closed-form coefficient table of the Laplacian identity.
pub fn laplacian_coefficient_profile(n: u32) -> Result<CoefficientProfile> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let js = 0..=n + 2;
    let a: Vec<_> = js.clone().map(|j| int(component_a(n, j))).collect();
    let b: Vec<_> = js.clone().map(|j| int(component_b(n, j))).collect();
    let c: Vec<_> = js.clone().map(|j| int(component_c(n, j))).collect();
    let d: Vec<_> = js.map(|j| int(component_d(n, j))).collect();
    let total = (0..a.len())
        .map(|j| &a[j] + &b[j] + &c[j] + &d[j])
        .collect();
    Ok(CoefficientProfile { n, a, b, c, d, total })
}

/// Quotient of `x^q - q x + (q-1)` by `(x-1)²`: `a_j = q - 1 - j`.
pub fn quotient_coefficients(q: u32) -> Result<Vec<BigRational>> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
    }
    Ok((0..=q - 2).map(|j| int(q as i64 - 1 - j as i64)).collect())
}

/// Multiplies two dense univariate polynomials (lowest degree first).
pub fn univariate_mul(lhs: &[BigRational], rhs: &[BigRational]) -> Vec<BigRational> {
    if lhs.is_empty() || rhs.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); lhs.len() + rhs.len() - 1];
    for (i, a) in lhs.iter().enumerate() {
        for (j, b) in rhs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `(x-1)² Σ a_j x^j` multiplied out, returned densely.
pub fn reconstruct_from_quotient(quotient: &[BigRational]) -> Vec<BigRational> {
    univariate_mul(&[int(1), int(-2), int(1)], quotient)
}

/// Dense coefficients of `x^q - q x + (q-1)`.
pub fn shifted_power_polynomial(q: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); q as usize + 1];
    out[0] = int(q as i64 - 1);
    out[1] += int(-(q as i64));
    out[q as usize] += int(1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        int(v)
    }

    #[test]
    fn laplacian_n1_matches_hand_expansion() {
        let e = expand_laplacian_sides(1).unwrap();
        let expected = BivariatePolynomial::from_int_terms(3, &[(1, 3, 0), (-3, 1, 2), (2, 0, 3)]).unwrap();
        assert_eq!(e.lhs, expected);
        assert_eq!(e.rhs, expected);
        assert!(e.equal);
    }

    #[test]
    fn laplacian_n2_is_twice_square_of_difference_times_sum() {
        let e = expand_laplacian_sides(2).unwrap();
        let expected = BivariatePolynomial::from_int_terms(4, &[(2, 4, 0), (-4, 2, 2), (2, 0, 4)]).unwrap();
        assert_eq!(e.rhs, expected);
        assert!(e.equal);
    }

    #[test]
    fn laplacian_n5_tau_squared_coefficient() {
        let e = expand_laplacian_sides(5).unwrap();
        assert_eq!(e.lhs.coefficient(5, 2), r(-7));
        assert_eq!(e.rhs.coefficient(5, 2), r(-7));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(expand_laplacian_sides(0), Err(Error::InvalidParameter(_))));
        assert!(matches!(expand_poly_sides(1, 2), Err(Error::InvalidParameter(_))));
        assert!(matches!(expand_poly_sides(2, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(quotient_coefficients(1), Err(Error::InvalidParameter(_))));
        assert!(laplacian_coefficient_profile(0).is_err());
    }

    #[test]
    fn poly_small_cases() {
        let e = expand_poly_sides(2, 2).unwrap();
        let expected = BivariatePolynomial::from_int_terms(4, &[(2, 4, 0), (-4, 2, 2), (2, 0, 4)]).unwrap();
        assert_eq!(e.rhs, expected);
        assert!(e.equal);

        let e = expand_poly_sides(3, 2).unwrap();
        let expected = BivariatePolynomial::from_int_terms(5, &[(3, 5, 0), (-5, 3, 2), (2, 0, 5)]).unwrap();
        assert_eq!(e.lhs, expected);
        assert!(e.equal);
    }

    #[test]
    fn coefficient_profile_examples() {
        let p = laplacian_coefficient_profile(2).unwrap();
        let nz = p.nonzero();
        assert_eq!(nz.len(), 3);
        assert_eq!(nz[&0], r(2));
        assert_eq!(nz[&2], r(-4));
        assert_eq!(nz[&4], r(2));

        let p4 = laplacian_coefficient_profile(4).unwrap();
        assert_eq!(p4.a[3], r(8));
        for n in 1..10 {
            assert!(laplacian_coefficient_profile(n).unwrap().total[1].is_zero());
        }
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_coefficients(2).unwrap(), vec![r(1)]);
        assert_eq!(quotient_coefficients(3).unwrap(), vec![r(2), r(1)]);
        assert_eq!(quotient_coefficients(5).unwrap(), vec![r(4), r(3), r(2), r(1)]);
        let q3 = quotient_coefficients(3).unwrap();
        assert_eq!(reconstruct_from_quotient(&q3), vec![r(2), r(-3), r(0), r(1)]);
    }

    #[test]
    fn add_term_cancels_to_nothing() {
        let mut p = BivariatePolynomial::zero(3);
        p.add_term(1, 2, r(5)).unwrap();
        p.add_term(1, 2, r(-5)).unwrap();
        assert!(p.is_zero());
        assert!(p.add_term(1, 1, r(1)).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let e = expand_laplacian_sides(1).unwrap();
        assert_eq!(e.lhs.to_string(), "s^3 - 3s^1t^2 + 2t^3");
    }

    #[test]
    fn float_eval_agrees_on_both_sides() {
        let e = expand_poly_sides(4, 3).unwrap();
        let (s, t) = (0.7, 1.3);
        assert!((e.lhs.eval_f64(s, t) - e.rhs.eval_f64(s, t)).abs() < 1e-12);
    }
}
