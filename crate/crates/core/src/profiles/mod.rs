//! Admissible profiles: decreasing, absolutely continuous, non-negative
//! functions on `[0, ∞)` whose derivative lies in `[-ρ, 0]`. They stand in
//! for the radial rearrangement profiles of the lemmas, realised here as
//! piecewise-linear functions so every moment is exactly integrable.

mod jensen;
mod lemma;
mod sampler;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::binomial;

pub use jensen::{
    gauss_legendre, jensen_floor_laplacian, jensen_floor_poly, jensen_grid_laplacian,
    jensen_grid_poly, laplacian_floor_constant, q_poly, r_correction, r_floor_scan,
    shifted_moment, weighted_mean, GridSummary, JensenLaplacian, JensenPoly, WeightedMean,
};
pub use lemma::{
    bracket_integral, check_lemma, check_melas_chain, lemma_lower_bound, power_gap, solve_a,
    ChainReport, LemmaBound, LemmaReport, LEMMA_TOLERANCE,
};
pub use sampler::{random_profile, sample_seed, wedge};

/// Relative slack allowed on the slope constraint, for knots read back from
/// rounded decimal documents.
const SLOPE_TOLERANCE: f64 = 1e-12;

/// Piecewise-linear admissible profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    knots: Vec<(f64, f64)>,
    rho: f64,
}

/// Profile interchange document: `{"rho": ..., "knots": [[s, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProfileDoc {
    pub rho: f64,
    pub knots: Vec<[f64; 2]>,
}

impl Profile {
    /// Validates the knot list against the profile invariants.
    pub fn new(knots: Vec<(f64, f64)>, rho: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::BadKnots("knot list is empty".into()));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive and finite, got {rho}")));
        }
        if knots.iter().any(|(s, v)| !s.is_finite() || !v.is_finite()) {
            return Err(Error::BadKnots("knots must be finite".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::BadKnots(format!("first abscissa must be 0, got {}", knots[0].0)));
        }
        if knots[0].1 <= 0.0 {
            return Err(Error::BadKnots(format!("value at 0 must be positive, got {}", knots[0].1)));
        }
        for (i, w) in knots.windows(2).enumerate() {
            let ((s0, v0), (s1, v1)) = (w[0], w[1]);
            if s1 <= s0 {
                return Err(Error::BadKnots(format!(
                    "abscissae must be strictly increasing: s[{i}] = {s0}, s[{}] = {s1}",
                    i + 1
                )));
            }
            if v1 > v0 {
                return Err(Error::MonotonicityViolation { segment: i, from: v0, to: v1 });
            }
            let slope = (v1 - v0) / (s1 - s0);
            if slope < -rho * (1.0 + SLOPE_TOLERANCE) {
                return Err(Error::LipschitzViolation { segment: i, slope, neg_rho: -rho });
            }
        }
        let last = knots[knots.len() - 1].1;
        if last != 0.0 {
            return Err(Error::BadKnots(format!("final value must be 0, got {last}")));
        }
        Ok(Self { knots, rho })
    }

    pub fn from_doc(doc: &ProfileDoc) -> Result<Self> {
        Self::new(doc.knots.iter().map(|k| (k[0], k[1])).collect(), doc.rho)
    }

    pub fn to_doc(&self) -> ProfileDoc {
        ProfileDoc { rho: self.rho, knots: self.knots.iter().map(|&(s, v)| [s, v]).collect() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("profile document: {e}")))?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("profile documents always serialise")
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// ψ(0).
    pub fn peak(&self) -> f64 {
        self.knots[0].1
    }

    pub fn support_end(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    pub fn value_at(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.peak();
        }
        for w in self.knots.windows(2) {
            let ((s0, v0), (s1, v1)) = (w[0], w[1]);
            if s <= s1 {
                return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
            }
        }
        0.0
    }

    /// `∫₀^∞ s^power ψ(s) ds`, summed segment by segment.
    ///
    /// On a segment `[s₀, s₀+h]` with end values `v₀, v₁`, expanding
    /// `(s₀+t)^p` binomially gives
    /// `Σ_i C(p,i) s₀^{p-i} h^{i+1} (v₀/((i+1)(i+2)) + v₁/(i+2))`,
    /// a sum of non-negative terms.
    pub fn moment(&self, power: u32) -> f64 {
        let p = power as u64;
        let mut total = 0.0;
        for w in self.knots.windows(2) {
            let ((s0, v0), (s1, v1)) = (w[0], w[1]);
            let h = s1 - s0;
            let mut seg = 0.0;
            for i in 0..=p {
                let c = binomial(p, i).expect("moment powers are small") as f64;
                let fi = i as f64;
                seg += c
                    * s0.powi((p - i) as i32)
                    * h.powi(i as i32 + 1)
                    * (v0 / ((fi + 1.0) * (fi + 2.0)) + v1 / (fi + 2.0));
            }
            total += seg;
        }
        total
    }

    /// Exact rational value of the moment. Every finite `f64` knot is a dyadic
    /// rational, so this is the true integral of the stored profile.
    pub fn moment_exact(&self, power: u32) -> BigRational {
        let p = power as u64;
        let mut total = BigRational::zero();
        for w in self.knots.windows(2) {
            let s0 = exact(w[0].0);
            let v0 = exact(w[0].1);
            let v1 = exact(w[1].1);
            let h = exact(w[1].0) - &s0;
            for i in 0..=p {
                let c = BigRational::from_integer(BigInt::from(binomial(p, i).expect("small power")));
                let i1 = BigRational::from_integer(BigInt::from(i + 1));
                let i2 = BigRational::from_integer(BigInt::from(i + 2));
                let weight = &v0 / (&i1 * &i2) + &v1 / &i2;
                total += c * pow(&s0, p - i) * pow(&h, i + 1) * weight;
            }
        }
        total
    }

    /// Rescales to ψ̃(t) = value_scale · ψ(time_scale · t) with ψ̃(0) = 1 and
    /// Lipschitz bound 1. Returns `(ψ̃, value_scale, time_scale)` where
    /// `value_scale = 1/ψ(0)` and `time_scale = ψ(0)/ρ`.
    ///
    /// Moments transform as `∫ t^p ψ̃ = ∫ s^p ψ · ρ^{p+1} ψ(0)^{-(p+2)}`.
    pub fn normalize(&self) -> (Profile, f64, f64) {
        let psi0 = self.peak();
        let value_scale = 1.0 / psi0;
        let time_scale = psi0 / self.rho;
        let knots = self
            .knots
            .iter()
            .map(|&(s, v)| (s / time_scale, v / psi0))
            .collect();
        // Admissibility is preserved exactly; re-validating would only
        // trip over rounding in the rescaled crossing knot.
        (Profile { knots, rho: 1.0 }, value_scale, time_scale)
    }

    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("knots are finite")
}

fn pow(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn construction_examples() {
        assert!(Profile::new(vec![(0.0, 1.0), (1.0, 0.0)], 1.0).is_ok());
        assert!(matches!(
            Profile::new(vec![(0.0, 1.0), (0.5, 0.0)], 1.0),
            Err(Error::LipschitzViolation { segment: 0, .. })
        ));
        assert!(Profile::new(vec![(0.0, 2.0), (1.0, 2.0), (3.0, 0.0)], 1.0).is_ok());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Profile::new(vec![], 1.0), Err(Error::BadKnots(_))));
        assert!(matches!(
            Profile::new(vec![(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)], 1.0),
            Err(Error::BadKnots(_))
        ));
        assert!(matches!(
            Profile::new(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 0.8), (3.0, 0.0)], 1.0),
            Err(Error::MonotonicityViolation { segment: 1, .. })
        ));
        assert!(matches!(Profile::new(vec![(0.0, 1.0), (2.0, 0.5)], 1.0), Err(Error::BadKnots(_))));
        assert!(matches!(Profile::new(vec![(0.5, 1.0), (2.0, 0.0)], 1.0), Err(Error::BadKnots(_))));
        assert!(matches!(Profile::new(vec![(0.0, 0.0)], 1.0), Err(Error::BadKnots(_))));
        assert!(Profile::new(vec![(0.0, 1.0), (1.0, 0.0)], 0.0).is_err());
        assert!(Profile::new(vec![(0.0, f64::NAN), (1.0, 0.0)], 1.0).is_err());
    }

    #[test]
    fn wedge_moments() {
        let w = wedge();
        assert!((w.moment(0) - 0.5).abs() < 1e-15);
        assert!((w.moment(1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((w.moment(3) - 1.0 / 20.0).abs() < 1e-15);
        assert_eq!(w.moment_exact(0), ratio(1, 2));
        assert_eq!(w.moment_exact(1), ratio(1, 6));
        assert_eq!(w.moment_exact(3), ratio(1, 20));
    }

    #[test]
    fn plateau_moment_exact() {
        // ∫₀¹ 2 ds + ∫₁³ (3 - s) ds = 2 + 2
        let p = Profile::new(vec![(0.0, 2.0), (1.0, 2.0), (3.0, 0.0)], 1.0).unwrap();
        assert_eq!(p.moment_exact(0), ratio(4, 1));
        // ∫₀¹ 2s ds + ∫₁³ s(3-s) ds = 1 + (12 - 26/3) = 13/3
        assert_eq!(p.moment_exact(1), ratio(13, 3));
        assert!((p.moment(1) - 13.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn normalize_examples() {
        let (w, vs, ts) = wedge().normalize();
        assert_eq!(w, wedge());
        assert_eq!((vs, ts), (1.0, 1.0));

        let p = Profile::new(vec![(0.0, 2.0), (2.0, 0.0)], 1.0).unwrap();
        let n = 2;
        let a = p.moment(n - 1);
        assert!((a - 4.0 / 3.0).abs() < 1e-15);
        let (np, _, _) = p.normalize();
        let a_norm = np.moment(n - 1);
        assert!((a_norm - 1.0 / 6.0).abs() < 1e-15);
        let predicted = a * p.rho().powi(n as i32) * p.peak().powi(-(n as i32 + 1));
        assert!((a_norm - predicted).abs() < 1e-15);
    }

    #[test]
    fn value_at_interpolates() {
        let p = Profile::new(vec![(0.0, 2.0), (1.0, 2.0), (3.0, 0.0)], 1.0).unwrap();
        assert_eq!(p.value_at(0.5), 2.0);
        assert_eq!(p.value_at(2.0), 1.0);
        assert_eq!(p.value_at(5.0), 0.0);
        assert_eq!(p.support_end(), 3.0);
    }

    #[test]
    fn json_round_trip() {
        let p = Profile::new(vec![(0.0, 2.0), (1.0, 2.0), (3.0, 0.0)], 1.0).unwrap();
        let text = p.to_json();
        assert_eq!(text, r#"{"rho":1.0,"knots":[[0.0,2.0],[1.0,2.0],[3.0,0.0]]}"#);
        assert_eq!(Profile::from_json(&text).unwrap(), p);
        assert!(matches!(Profile::from_json("{\"rho\": 1}"), Err(Error::Parse(_))));
    }

    #[test]
    fn float_moment_tracks_exact_moment() {
        for seed in 0..50 {
            let p = random_profile(seed);
            for power in [0, 1, 3, 6, 9] {
                let exact = p.moment_exact(power).to_f64().unwrap();
                let float = p.moment(power);
                assert!(((float - exact) / exact).abs() < 1e-13, "seed {seed} power {power}");
            }
        }
    }
}
