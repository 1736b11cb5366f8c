//! Closed-form lower bounds on averaged Dirichlet eigenvalues, evaluated from
//! `(n, V, I, |∂Ω|)` and the averaging index `k`.
//!
//! Every value is in average form `(1/k) Σ_{i≤k} λ_i`; sum-form statements
//! are divided by `k`. Per-eigenvalue references (`polya-k`, `gen-polya-k`)
//! bound `λ_k` itself.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::profiles::{laplacian_floor_constant, power_gap, q_poly, solve_a};
use crate::special::{gamma, omega_n};

/// Relative slack allowed when checking the inertia floor, so that balls
/// (which sit exactly on it) are accepted despite rounding.
const INERTIA_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DomainData {
    pub n: u32,
    pub volume: f64,
    pub inertia: f64,
    pub boundary_area: Option<f64>,
    pub label: String,
}

/// `(n/(n+2)) V (V/ω_n)^{2/n}`, the moment of inertia of the ball of volume `V`.
pub fn inertia_floor(n: u32, volume: f64) -> f64 {
    let nf = n as f64;
    nf / (nf + 2.0) * volume * (volume / omega_n(n)).powf(2.0 / nf)
}

impl DomainData {
    pub fn new(n: u32, volume: f64, inertia: f64, boundary_area: Option<f64>, label: impl Into<String>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDomain(format!("dimension must be >= 2, got {n}")));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidDomain(format!("volume must be positive, got {volume}")));
        }
        if !(inertia.is_finite() && inertia > 0.0) {
            return Err(Error::InvalidDomain(format!("inertia must be positive, got {inertia}")));
        }
        if let Some(b) = boundary_area {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidDomain(format!("boundary area must be positive, got {b}")));
            }
        }
        let floor = inertia_floor(n, volume);
        if inertia < floor * (1.0 - INERTIA_TOLERANCE) {
            return Err(Error::InvalidDomain(format!(
                "inertia {inertia} is below the ball floor {floor} for V = {volume}"
            )));
        }
        Ok(DomainData { n, volume, inertia, boundary_area, label: label.into() })
    }

    /// The same domain dilated by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let n = self.n as i32;
        DomainData::new(
            self.n,
            self.volume * t.powi(n),
            self.inertia * t.powi(n + 2),
            self.boundary_area.map(|b| b * t.powi(n - 1)),
            format!("{}*{t}", self.label),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    pub omega_n: f64,
    /// `V / (2π)ⁿ`.
    pub alpha: f64,
    /// `2 (2π)^{-n} √(V I)`.
    pub rho: f64,
    /// `√2 (2π)^{-n} ω_n^{-1/n} V^{(n+1)/n}`.
    pub rho_floor: f64,
}

pub fn domain_constants(d: &DomainData) -> Result<DerivedConstants> {
    // Re-validate: the fields are public.
    let d = DomainData::new(d.n, d.volume, d.inertia, d.boundary_area, d.label.as_str())?;
    let nf = d.n as f64;
    let omega = omega_n(d.n);
    let two_pi_n = (2.0 * PI).powi(d.n as i32);
    Ok(DerivedConstants {
        omega_n: omega,
        alpha: d.volume / two_pi_n,
        rho: 2.0 * (d.volume * d.inertia).sqrt() / two_pi_n,
        rho_floor: 2f64.sqrt() / two_pi_n * omega.powf(-1.0 / nf) * d.volume.powf((nf + 1.0) / nf),
    })
}

/// How the shift `a` of the a-dependent bounds is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AMode {
    /// `a = 0`, so every `S_j = 1`. Optimistic; never certified.
    Zero,
    Fixed(f64),
    /// `a` from the moment equation with `φ(0) = α` saturated.
    Consistent,
}

impl fmt::Display for AMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AMode::Zero => f.write_str("zero"),
            AMode::Fixed(x) => write!(f, "fixed:{x}"),
            AMode::Consistent => f.write_str("consistent"),
        }
    }
}

impl FromStr for AMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(AMode::Zero),
            "consistent" => Ok(AMode::Consistent),
            _ => {
                let x = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| Error::Parse(format!("unknown a-mode `{s}`")))?;
                let x: f64 = x.parse().map_err(|_| Error::Parse(format!("bad fixed a `{x}`")))?;
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::InvalidParameter(format!("fixed a must be >= 0, got {x}")));
                }
                Ok(AMode::Fixed(x))
            }
        }
    }
}

/// `A* = (k/(n ω_n)) ρⁿ α^{-(n+1)}`.
pub fn consistent_moment(d: &DomainData, k: u64) -> Result<f64> {
    let c = domain_constants(d)?;
    let nf = d.n as f64;
    Ok(k as f64 / (nf * c.omega_n) * c.rho.powi(d.n as i32) * c.alpha.powf(-(nf + 1.0)))
}

/// The shift `a`. `l` is accepted for symmetry with the bound evaluators;
/// the moment equation only involves `n`.
pub fn resolve_a(d: &DomainData, k: u64, _l: u32, mode: AMode) -> Result<f64> {
    match mode {
        AMode::Zero => Ok(0.0),
        AMode::Fixed(x) if x.is_finite() && x >= 0.0 => Ok(x),
        AMode::Fixed(x) => Err(Error::InvalidParameter(format!("fixed a must be >= 0, got {x}"))),
        AMode::Consistent => {
            if k == 0 {
                return Err(Error::InvalidParameter("k must be >= 1".into()));
            }
            solve_a(d.n, d.n as f64 * consistent_moment(d, k)?)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundName {
    WeylAvg,
    WeylTwoTerm,
    PolyaK,
    LiYau,
    Melas,
    Ilyin,
    YildirimYolcu,
    JiXu2020,
    ThmMain,
    CorMelasImproved,
    GenPolyaK,
    /// `gen-polya-k` with the `ω_n` exponent sign flipped so that `l = 1`
    /// reduces to `polya-k`.
    GenPolyaKCorrected,
    ThmPoly,
    CorPoly,
    Jx2SixTerm,
}

impl BoundName {
    pub const ALL: [BoundName; 15] = [
        BoundName::WeylAvg,
        BoundName::WeylTwoTerm,
        BoundName::PolyaK,
        BoundName::LiYau,
        BoundName::Melas,
        BoundName::Ilyin,
        BoundName::YildirimYolcu,
        BoundName::JiXu2020,
        BoundName::ThmMain,
        BoundName::CorMelasImproved,
        BoundName::GenPolyaK,
        BoundName::GenPolyaKCorrected,
        BoundName::ThmPoly,
        BoundName::CorPoly,
        BoundName::Jx2SixTerm,
    ];

    /// Bounds that hold for every domain and every `k` and are cheap to
    /// assert against an exact spectrum (`polya-k` only on tiling domains
    /// and balls).
    pub const ASSERTABLE: [BoundName; 6] = [
        BoundName::LiYau,
        BoundName::Melas,
        BoundName::Ilyin,
        BoundName::YildirimYolcu,
        BoundName::CorMelasImproved,
        BoundName::PolyaK,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::WeylAvg => "weyl-avg",
            BoundName::WeylTwoTerm => "weyl-two-term",
            BoundName::PolyaK => "polya-k",
            BoundName::LiYau => "li-yau",
            BoundName::Melas => "melas",
            BoundName::Ilyin => "ilyin",
            BoundName::YildirimYolcu => "yildirim-yolcu",
            BoundName::JiXu2020 => "ji-xu-2020",
            BoundName::ThmMain => "thm-main",
            BoundName::CorMelasImproved => "cor-melas-improved",
            BoundName::GenPolyaK => "gen-polya-k",
            BoundName::GenPolyaKCorrected => "gen-polya-k-corrected",
            BoundName::ThmPoly => "thm-poly",
            BoundName::CorPoly => "cor-poly",
            BoundName::Jx2SixTerm => "jx2-six-term",
        }
    }

    pub fn is_poly(self) -> bool {
        matches!(
            self,
            BoundName::GenPolyaK
                | BoundName::GenPolyaKCorrected
                | BoundName::ThmPoly
                | BoundName::CorPoly
                | BoundName::Jx2SixTerm
        )
    }

    pub fn depends_on_a(self) -> bool {
        matches!(self, BoundName::JiXu2020 | BoundName::ThmMain | BoundName::ThmPoly)
    }

    /// Compared with `λ_k` rather than with the average.
    pub fn is_per_eigenvalue(self) -> bool {
        matches!(self, BoundName::PolyaK | BoundName::GenPolyaK | BoundName::GenPolyaKCorrected)
    }

    /// Proven for every bounded domain, independent of any `a` policy.
    pub fn is_unconditional(self) -> bool {
        matches!(
            self,
            BoundName::LiYau
                | BoundName::Melas
                | BoundName::Ilyin
                | BoundName::YildirimYolcu
                | BoundName::CorMelasImproved
                | BoundName::CorPoly
                | BoundName::Jx2SixTerm
        )
    }

    /// Parses a comma-separated list of identifiers.
    pub fn parse_list(s: &str) -> Result<Vec<BoundName>> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for BoundName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .iter()
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound name `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSpec {
    pub name: BoundName,
    pub l: u32,
    pub a_mode: AMode,
    /// `m` parameter of `ji-xu-2020`, `n ≥ m + 1 ≥ 3`.
    pub m: Option<u32>,
}

impl BoundSpec {
    pub fn new(name: BoundName, l: u32) -> Self {
        BoundSpec { name, l, a_mode: AMode::Consistent, m: None }
    }

    pub fn with_a_mode(mut self, mode: AMode) -> Self {
        self.a_mode = mode;
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub name: BoundName,
    pub value: f64,
    pub a_used: Option<f64>,
    /// A proven bound for this domain under the chosen policy.
    pub certified: bool,
    pub warning: Option<String>,
    /// Additive terms in printed order; they sum to `value`.
    pub terms: Vec<f64>,
}

impl BoundValue {
    fn plain(name: BoundName, terms: Vec<f64>, certified: bool) -> Self {
        BoundValue { name, value: terms.iter().sum(), a_used: None, certified, warning: None, terms }
    }
}

/// Dispatches to [`bound_laplacian`] or [`bound_poly`] by name.
pub fn evaluate(d: &DomainData, k: u64, spec: &BoundSpec) -> Result<BoundValue> {
    if spec.name.is_poly() {
        bound_poly(d, spec.l, k, spec)
    } else {
        bound_laplacian(d, k, spec)
    }
}

fn polya(n: u32, omega: f64, volume: f64, k: f64) -> f64 {
    4.0 * PI * PI * (omega * volume).powf(-2.0 / n as f64) * k.powf(2.0 / n as f64)
}

fn ilyin_beta(n: u32) -> Option<f64> {
    match n {
        2 => Some(119.0 / 120.0),
        3 => Some(0.986),
        4 => Some(0.978),
        _ => None,
    }
}

/// `c̄ₙ = (1/(n+2)) min{2 k^{2/n}, (1/12)(14/5 + n 5^{-n})}`.
pub fn melas_improved_constant(n: u32, k: u64) -> f64 {
    let nf = n as f64;
    (2.0 * (k as f64).powf(2.0 / nf)).min(laplacian_floor_constant(n)) / (nf + 2.0)
}

/// Constant `1/(24(n+2))` of the `melas` bound.
pub fn melas_constant(n: u32) -> f64 {
    1.0 / (24.0 * (n as f64 + 2.0))
}

fn resolved(d: &DomainData, k: u64, l: u32, mode: AMode) -> Result<(f64, Option<String>)> {
    let a = resolve_a(d, k, l, mode)?;
    let warning = match mode {
        AMode::Zero => Some("a = 0 uses the S_j >= 1 floor; optimistic, not certified".to_string()),
        _ => None,
    };
    Ok((a, warning))
}

/// Laplacian bounds (`l = 1`).
pub fn bound_laplacian(d: &DomainData, k: u64, spec: &BoundSpec) -> Result<BoundValue> {
    use BoundName::*;
    if spec.name.is_poly() {
        return Err(Error::InvalidParameter(format!("{} is a poly-Laplacian bound", spec.name)));
    }
    if spec.l != 1 {
        return Err(Error::InvalidParameter(format!("{} needs l = 1, got l = {}", spec.name, spec.l)));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let c = domain_constants(d)?;
    let n = d.n;
    let nf = n as f64;
    let kf = k as f64;
    let (v, inertia) = (d.volume, d.inertia);
    let w = polya(n, c.omega_n, v, kf);
    let li_yau = nf / (nf + 2.0) * w;
    let melas_term = melas_constant(n) * v / inertia;

    let out = match spec.name {
        WeylAvg => BoundValue::plain(WeylAvg, vec![li_yau], false),
        PolyaK => BoundValue::plain(PolyaK, vec![w], false),
        LiYau => BoundValue::plain(LiYau, vec![li_yau], true),
        WeylTwoTerm => {
            let area = d
                .boundary_area
                .ok_or_else(|| Error::InvalidParameter("weyl-two-term needs the boundary area".into()))?;
            let second = PI.sqrt() * gamma((4.0 + nf) / 2.0).powf(1.0 + 1.0 / nf) * area * kf.powf(1.0 / nf)
                / ((nf + 1.0) * gamma((3.0 + nf) / 2.0) * gamma(2.0).powf(1.0 / nf) * v.powf(1.0 + 1.0 / nf));
            BoundValue::plain(WeylTwoTerm, vec![li_yau, second], false)
        }
        Melas => BoundValue::plain(Melas, vec![li_yau, melas_term], true),
        Ilyin => {
            let beta = ilyin_beta(n).ok_or(Error::UnsupportedDimension(n))?;
            BoundValue::plain(Ilyin, vec![li_yau, beta * nf / 48.0 * v / inertia], true)
        }
        YildirimYolcu => {
            let extra = v.powf((3.0 * nf + 2.0) / (2.0 * nf))
                / (144.0 * (nf + 2.0) * inertia.powf(1.5) * gamma(1.0 + nf / 2.0).powf(1.0 / nf))
                * kf.powf(-1.0 / nf);
            BoundValue::plain(YildirimYolcu, vec![li_yau, melas_term, extra], true)
        }
        CorMelasImproved => {
            BoundValue::plain(CorMelasImproved, vec![li_yau, melas_improved_constant(n, k) * v / inertia], true)
        }
        JiXu2020 => {
            let m = spec.m.ok_or_else(|| Error::InvalidParameter("ji-xu-2020 needs m".into()))?;
            if !(m >= 2 && n > m) {
                return Err(Error::InvalidParameter(format!("ji-xu-2020 needs n >= m + 1 >= 3, got n = {n}, m = {m}")));
            }
            let (a, warning) = resolved(d, k, 1, spec.a_mode)?;
            let mf = m as f64;
            let (omega, alpha, rho) = (c.omega_n, c.alpha, c.rho);
            let s2 = power_gap(a, m + 2);
            let s3 = power_gap(a, m + 3);
            let e_lo = (mf + 1.0) * nf + mf - 1.0;
            let e_hi = (mf + 2.0) * nf + mf;
            let c2 = (e_lo / e_hi * 2f64.sqrt() * s2 / s3 * (mf + 3.0) / (mf + 1.0) * kf.powf(1.0 / nf)).min(1.0);
            let t1 = omega.powf(-2.0 / nf) * alpha.powf(-2.0 / nf) * kf.powf(2.0 / nf);
            let t2 = -2.0 * omega.powf((mf - 1.0) / nf) * s2 * alpha.powf(e_lo / nf)
                / ((nf + 2.0) * rho.powi(m as i32 + 1))
                * kf.powf((1.0 - mf) / nf);
            let t3 = c2 * 2.0 * omega.powf(mf / nf) * (mf + 1.0) * s3 * alpha.powf(e_hi / nf)
                / ((nf + 2.0) * (mf + 3.0) * rho.powi(m as i32 + 2))
                * kf.powf(-mf / nf);
            BoundValue { a_used: Some(a), warning, ..BoundValue::plain(JiXu2020, vec![t1, t2, t3], false) }
        }
        ThmMain => {
            let (a, warning) = resolved(d, k, 1, spec.a_mode)?;
            let (omega, alpha, rho) = (c.omega_n, c.alpha, c.rho);
            let s_low = power_gap(a, n + 1);
            let s_high = power_gap(a, n + 3);
            let c1 = thm_main_clamp(n, k, s_high);
            let t2 = -s_low / ((nf + 1.0) * rho.powi(n as i32))
                * omega.powf((nf - 2.0) / nf)
                * alpha.powf((nf + 2.0) * (nf - 1.0) / nf)
                * kf.powf((2.0 - nf) / nf);
            let t3 = c1 * nf * s_high / ((nf + 2.0) * (nf + 3.0) * rho.powi(n as i32 + 2)) * omega * alpha.powi(n as i32 + 3)
                / kf;
            BoundValue { a_used: Some(a), warning, ..BoundValue::plain(ThmMain, vec![w, t2, t3], false) }
        }
        GenPolyaK | GenPolyaKCorrected | ThmPoly | CorPoly | Jx2SixTerm => unreachable!(),
    };
    Ok(out)
}

/// `c₁ = min{1, 2^{n+3}(n+2)/(n² S_{n+3}) k^{(n+2)/n}}`.
pub fn thm_main_clamp(n: u32, k: u64, s_high: f64) -> f64 {
    let nf = n as f64;
    (2f64.powi(n as i32 + 3) * (nf + 2.0) / (nf * nf * s_high) * (k as f64).powf((nf + 2.0) / nf)).min(1.0)
}

/// `C̄ₙ`: `Q(1/5)` when `n + 1 ≤ l`, else `min{2nl/(n+1-l) k^{2/n}, Q(1/5)}`.
pub fn cor_poly_constant(n: u32, l: u32, k: u64) -> f64 {
    let q = q_poly(n, l, 0.2);
    if n < l {
        q
    } else {
        let (nf, lf) = (n as f64, l as f64);
        (2.0 * nf * lf / (nf + 1.0 - lf) * (k as f64).powf(2.0 / nf)).min(q)
    }
}

/// Poly-Laplacian bounds (`l ≥ 2`).
pub fn bound_poly(d: &DomainData, l: u32, k: u64, spec: &BoundSpec) -> Result<BoundValue> {
    use BoundName::*;
    if !spec.name.is_poly() {
        return Err(Error::InvalidParameter(format!("{} is a Laplacian bound", spec.name)));
    }
    if l < 2 {
        return Err(Error::InvalidParameter(format!("{} needs l >= 2, got l = {l}", spec.name)));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let c = domain_constants(d)?;
    let n = d.n;
    let (nf, lf, kf) = (n as f64, l as f64, k as f64);
    let (omega, alpha, rho) = (c.omega_n, c.alpha, c.rho);
    let ko = kf / omega;
    let h = 2.0 * lf + nf;

    let out = match spec.name {
        GenPolyaK => BoundValue {
            warning: Some("printed omega_n exponent; see gen-polya-k-corrected".into()),
            ..BoundValue::plain(
                GenPolyaK,
                vec![omega.powf(2.0 * lf / nf) * alpha.powf(-2.0 * lf / nf) * kf.powf(2.0 * lf / nf)],
                false,
            )
        },
        GenPolyaKCorrected => BoundValue::plain(
            GenPolyaKCorrected,
            vec![omega.powf(-2.0 * lf / nf) * alpha.powf(-2.0 * lf / nf) * kf.powf(2.0 * lf / nf)],
            false,
        ),
        ThmPoly => {
            let (a, warning) = resolved(d, k, l, spec.a_mode)?;
            let s_low = power_gap(a, n + 1);
            let s_high = power_gap(a, n + 2 * l + 1);
            let clamp = if n * n + n > 2 * l {
                2.0 * lf * rho.powf(h) / (nf * nf * s_high) * ko.powf(h / nf) * alpha.powf(-(nf + 1.0) * h / nf)
            } else {
                h * rho.powf(h) / (nf * s_high)
                    * (2.0 * lf * kf / (nf * omega) * alpha.powf(-h * (nf + 1.0) / nf)
                        + (nf * nf + nf - 2.0 * lf) / (nf * (nf + 1.0) * rho.powi(n as i32))
                            * s_low
                            * alpha.powf(-2.0 * lf * (nf + 1.0) / nf))
                    * ko.powf(2.0 * lf / nf)
            };
            let c1 = clamp.min(1.0);
            let t1 = omega * alpha.powf(-2.0 * lf / nf) * ko.powf(2.0 * lf / nf);
            let t2 = c1 * nf * omega * alpha.powf(h + 1.0) * s_high / (h * (h + 1.0) * rho.powf(h)) / kf;
            let t3 = -omega * alpha.powf((nf * nf + nf - 2.0 * lf) / nf) / ((nf + 1.0) * rho.powi(n as i32))
                * ko.powf((2.0 * lf - nf) / nf)
                * s_low;
            let warning = if c1 <= 0.0 {
                Some(warning.map_or_else(|| "non-positive clamp".to_string(), |w| format!("{w}; non-positive clamp")))
            } else {
                warning
            };
            BoundValue { a_used: Some(a), warning, ..BoundValue::plain(ThmPoly, vec![t1, t2, t3], false) }
        }
        CorPoly => {
            let cbar = cor_poly_constant(n, l, k);
            let t1 = nf / h * omega * alpha.powf(-2.0 * lf / nf) * ko.powf(h / nf) / kf;
            let t2 = cbar * omega * alpha.powf((2.0 * nf + 2.0 - 2.0 * lf) / nf) / (h * rho * rho)
                * ko.powf((h - 2.0) / nf)
                / kf;
            BoundValue::plain(CorPoly, vec![t1, t2], true)
        }
        Jx2SixTerm => {
            if 2 * l + n < 6 {
                return Err(Error::UnsupportedCombination(format!(
                    "jx2-six-term needs 2l + n >= 6, got l = {l}, n = {n}"
                )));
            }
            let t1 = nf / h * (2.0 * PI).powf(2.0 * lf) / (omega * d.volume).powf(2.0 * lf / nf) * kf.powf(h / nf);
            let t2 = 5.0 * lf / (2.0 * h * rho * rho)
                * omega.powf(-(2.0 * lf - 2.0) / nf)
                * alpha.powf((2.0 * nf - 2.0 * lf + 2.0) / nf)
                * kf.powf((h - 2.0) / nf);
            // (coefficient, power j of 1/ρ, k-exponent offset) as printed.
            let tail = [(-31.0 / 9.0, 3, 3.0), (5.0 / 8.0, 4, 4.0), (38.0 / 25.0, 5, 6.0), (-317.0 / 420.0, 6, 6.0)];
            let mut terms = vec![t1 / kf, t2 / kf];
            for (coef, j, shift) in tail {
                let jf = j as f64;
                let t = coef * lf * omega * alpha.powf((jf * nf - 2.0 * lf + jf) / nf) / (h * rho.powi(j))
                    * ko.powf((h - shift) / nf);
                terms.push(t / kf);
            }
            BoundValue::plain(Jx2SixTerm, terms, true)
        }
        _ => unreachable!(),
    };
    Ok(out)
}
