//! Exact Dirichlet spectra of model domains (boxes and balls) and the
//! domain descriptor grammar `box:L1,..,Ln`, `ball:n,R`, `custom:n,V,I[,area]`.

mod bessel;
mod lattice;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

pub use bessel::{
    ball_spectrum, bessel_j, bessel_j_pair, bessel_zero, harmonic_multiplicity, mcmahon_guess, ZeroIter,
};
pub use lattice::{box_spectrum, brute_force_box, TIE_WINDOW};

use crate::bounds::DomainData;
use crate::error::{Error, Result};
use crate::special::omega_n;

/// Default ceiling on the number of eigenvalues one request may enumerate.
pub const DEFAULT_CAP: usize = 1_000_000;

/// f64 with a total order, for heap keys.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Key(pub(crate) f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Sorted eigenvalues, repeated by multiplicity, with running sums.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    partial_sums: Vec<f64>,
    levels: Vec<(f64, usize)>,
}

impl Spectrum {
    pub fn from_sorted(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.iter().any(|v| !v.is_finite()) || eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::NumericalFailure("eigenvalues are not finite and sorted".into()));
        }
        let partial_sums = running_sums(&eigenvalues);
        let mut levels: Vec<(f64, usize)> = Vec::new();
        for &v in &eigenvalues {
            match levels.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => levels.push((v, 1)),
            }
        }
        Ok(Spectrum { eigenvalues, partial_sums, levels })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `partial_sums()[i] = Σ_{j≤i} λ_j` (zero-based).
    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// Distinct values with their multiplicities.
    pub fn levels(&self) -> &[(f64, usize)] {
        &self.levels
    }

    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `λ_k`, one-based.
    pub fn eigenvalue(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i).copied())
    }

    /// `(1/k) Σ_{i≤k} λ_i`, one-based.
    pub fn average(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.partial_sums.get(i)).map(|s| s / k as f64)
    }

    /// `#{i : λ_i ≤ lambda}`.
    pub fn counting(&self, lambda: f64) -> usize {
        self.eigenvalues.partition_point(|&v| v <= lambda)
    }
}

/// Left-to-right running sums; the single definition both construction
/// and consistency checks use.
pub fn running_sums(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Parses a plain decimal (`12`, `0.75`, `1.5e-3`) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("`{s}` is not a decimal number"));
    let t = s.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int.starts_with('-');
    let int = int.strip_prefix(['-', '+']).unwrap_or(int);
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        BigRational::from_integer(digits * Pow::pow(&ten, shift as u32))
    } else {
        BigRational::new(digits, Pow::pow(&ten, (-shift) as u32))
    };
    if negative {
        r = -r;
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelDomain {
    /// Side lengths, kept both as floats and as exact rationals.
    Box { lengths: Vec<f64>, exact: Vec<BigRational> },
    Ball { n: u32, radius: f64 },
}

impl ModelDomain {
    pub fn unit_cube(n: u32) -> Self {
        ModelDomain::Box { lengths: vec![1.0; n as usize], exact: vec![BigRational::one(); n as usize] }
    }

    /// A box from float side lengths; each float is taken as the exact
    /// binary rational it represents.
    pub fn box_from_lengths(lengths: &[f64]) -> Result<Self> {
        let exact = lengths
            .iter()
            .map(|&l| BigRational::from_float(l).ok_or_else(|| Error::InvalidDomain(format!("bad length {l}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::checked_box(lengths.to_vec(), exact)
    }

    /// A box from decimal side lengths such as `"1.5"`, kept exact.
    pub fn box_from_decimals<S: AsRef<str>>(lengths: &[S]) -> Result<Self> {
        let exact = lengths.iter().map(|s| parse_decimal(s.as_ref())).collect::<Result<Vec<_>>>()?;
        let floats = exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        Self::checked_box(floats, exact)
    }

    fn checked_box(lengths: Vec<f64>, exact: Vec<BigRational>) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(Error::InvalidDomain(format!("box needs at least 2 sides, got {}", lengths.len())));
        }
        if exact.iter().any(|r| r <= &BigRational::zero()) || lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidDomain("box side lengths must be positive".into()));
        }
        Ok(ModelDomain::Box { lengths, exact })
    }

    pub fn ball(n: u32, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDomain(format!("ball needs n >= 2, got {n}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!("radius must be positive, got {radius}")));
        }
        Ok(ModelDomain::Ball { n, radius })
    }

    pub fn dimension(&self) -> u32 {
        match self {
            ModelDomain::Box { lengths, .. } => lengths.len() as u32,
            ModelDomain::Ball { n, .. } => *n,
        }
    }

    pub fn spectrum(&self, count: usize) -> Result<Spectrum> {
        self.spectrum_with_cap(count, DEFAULT_CAP)
    }

    pub fn spectrum_with_cap(&self, count: usize, cap: usize) -> Result<Spectrum> {
        match self {
            ModelDomain::Box { lengths, exact } => box_spectrum(lengths, Some(exact), count, cap),
            ModelDomain::Ball { n, radius } => ball_spectrum(*n, *radius, count, cap),
        }
    }
}

/// Volume, centroidal moment of inertia and boundary area of a model domain.
pub fn model_domain_data(m: &ModelDomain, label: &str) -> Result<DomainData> {
    match m {
        ModelDomain::Box { lengths, .. } => {
            let v: f64 = lengths.iter().product();
            let i = v * lengths.iter().map(|l| l * l).sum::<f64>() / 12.0;
            let area = 2.0 * lengths.iter().map(|l| v / l).sum::<f64>();
            DomainData::new(lengths.len() as u32, v, i, Some(area), label)
        }
        ModelDomain::Ball { n, radius } => {
            let nf = *n as f64;
            let v = omega_n(*n) * radius.powi(*n as i32);
            let i = nf * v * radius * radius / (nf + 2.0);
            DomainData::new(*n, v, i, Some(nf * v / radius), label)
        }
    }
}

/// A parsed `--domain` argument.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainDescriptor {
    Model { label: String, domain: ModelDomain },
    Custom(DomainData),
}

impl DomainDescriptor {
    pub fn label(&self) -> &str {
        match self {
            DomainDescriptor::Model { label, .. } => label,
            DomainDescriptor::Custom(d) => &d.label,
        }
    }

    pub fn data(&self) -> Result<DomainData> {
        match self {
            DomainDescriptor::Model { label, domain } => model_domain_data(domain, label),
            DomainDescriptor::Custom(d) => Ok(d.clone()),
        }
    }

    pub fn model(&self) -> Option<&ModelDomain> {
        match self {
            DomainDescriptor::Model { domain, .. } => Some(domain),
            DomainDescriptor::Custom(_) => None,
        }
    }

    pub fn spectrum(&self, count: usize) -> Result<Spectrum> {
        self.model()
            .ok_or_else(|| Error::NoSpectrumOracle(format!("{} has no closed-form spectrum", self.label())))?
            .spectrum(count)
    }
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))
}

impl FromStr for DomainDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let label = s.trim().to_string();
        let (kind, rest) = label
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("domain `{s}` should look like box:..., ball:... or custom:...")))?;
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        match kind {
            "box" => {
                let domain = ModelDomain::box_from_decimals(&parts)?;
                Ok(DomainDescriptor::Model { label, domain })
            }
            "ball" => {
                let [n, r] = parts[..] else {
                    return Err(Error::Parse(format!("ball needs `n,R`, got `{rest}`")));
                };
                let n: u32 = n.parse().map_err(|_| Error::Parse(format!("bad dimension `{n}`")))?;
                let domain = ModelDomain::ball(n, parse_f64(r)?)?;
                Ok(DomainDescriptor::Model { label, domain })
            }
            "custom" => {
                if !(parts.len() == 3 || parts.len() == 4) {
                    return Err(Error::Parse(format!("custom needs `n,V,I[,area]`, got `{rest}`")));
                }
                let n: u32 = parts[0].parse().map_err(|_| Error::Parse(format!("bad dimension `{}`", parts[0])))?;
                let area = parts.get(3).map(|a| parse_f64(a)).transpose()?;
                let d = DomainData::new(n, parse_f64(parts[1])?, parse_f64(parts[2])?, area, label)?;
                Ok(DomainDescriptor::Custom(d))
            }
            other => Err(Error::Parse(format!("unknown domain kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::inertia_floor;
    use std::f64::consts::PI;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("1.5").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_decimal("2").unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(parse_decimal("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_decimal("25e-2").unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(parse_decimal("x1").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn model_data() {
        let sq = model_domain_data(&ModelDomain::unit_cube(2), "sq").unwrap();
        assert_eq!((sq.volume, sq.inertia, sq.boundary_area), (1.0, 1.0 / 6.0, Some(4.0)));
        let disk = model_domain_data(&ModelDomain::ball(2, 1.0).unwrap(), "disk").unwrap();
        assert!((disk.volume - PI).abs() < 1e-15 && (disk.inertia - PI / 2.0).abs() < 1e-15);
        for n in 2..8 {
            let b = model_domain_data(&ModelDomain::ball(n, 1.7).unwrap(), "b").unwrap();
            assert!((b.inertia - inertia_floor(n, b.volume)).abs() < 1e-13 * b.inertia);
        }
    }

    #[test]
    fn descriptors() {
        let d: DomainDescriptor = "box:1,1".parse().unwrap();
        assert_eq!(d.label(), "box:1,1");
        assert_eq!(d.data().unwrap().n, 2);
        let b: DomainDescriptor = "ball:3,1".parse().unwrap();
        assert_eq!(b.data().unwrap().n, 3);
        let c: DomainDescriptor = "custom:2,1,0.2,4".parse().unwrap();
        assert!(matches!(c.spectrum(3), Err(Error::NoSpectrumOracle(_))));
        assert!("custom:2,1,0.1".parse::<DomainDescriptor>().is_err());
        assert!("box:1".parse::<DomainDescriptor>().is_err());
        assert!("ball:2".parse::<DomainDescriptor>().is_err());
        assert!("torus:1".parse::<DomainDescriptor>().is_err());
    }

    #[test]
    fn rational_box_ties_are_exact() {
        // 0.1 and 0.3 are not dyadic; m = (1, 6) and (2, 3) both give
        // 100 m₁² + (100/9) m₂² = 500 and must land on identical bits.
        let d: DomainDescriptor = "box:0.1,0.3".parse().unwrap();
        let s = d.spectrum(40).unwrap();
        let target = 500.0 * PI * PI;
        let hits: Vec<f64> = s.eigenvalues().iter().copied().filter(|v| (v - target).abs() < 1e-6 * target).collect();
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].to_bits(), hits[1].to_bits());
    }

    #[test]
    fn spectrum_accessors() {
        let s = Spectrum::from_sorted(vec![1.0, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(s.average(2), Some(1.5));
        assert_eq!(s.eigenvalue(4), Some(5.0));
        assert_eq!(s.eigenvalue(0), None);
        assert_eq!(s.counting(2.0), 3);
        assert_eq!(s.levels(), &[(1.0, 1), (2.0, 2), (5.0, 1)]);
        assert!(Spectrum::from_sorted(vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn square_weyl_ratio() {
        let s = ModelDomain::unit_cube(2).spectrum(100_000).unwrap();
        let k = 100_000.0;
        let weyl = 0.5 * 4.0 * PI * PI / PI * k;
        let ratio = s.average(100_000).unwrap() / weyl;
        assert!((1.0..=1.1).contains(&ratio), "{ratio}");
    }
}
