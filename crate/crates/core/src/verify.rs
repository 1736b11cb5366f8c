//! Joins spectra and bounds into reports, compares bounds against each
//! other, and runs the lemma fuzz campaign.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    evaluate, melas_constant, melas_improved_constant, AMode, BoundName, BoundSpec, DomainData,
};
use crate::error::{Error, Result};
use crate::profiles::{check_lemma, check_melas_chain, random_profile, sample_seed, wedge, Profile, ProfileDoc};
use crate::spectra::DomainDescriptor;

/// Relative tolerance on `holds`.
pub const HOLDS_TOLERANCE: f64 = 1e-9;

pub const CSV_HEADER: &str = "domain,n,l,k,average,bound_name,bound_value,a_used,holds,slack,certified";

/// Seventeen significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `a..b` (inclusive) or a single `k`.
pub fn parse_k_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Parse(format!("k range `{s}` should be `a..b` with 1 <= a <= b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse::<u64>().map_err(|_| bad())?;
            (k, k)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub domain: String,
    pub n: u32,
    pub l: u32,
    pub k: u64,
    /// `(1/k) Σ λ_i`, when a spectrum is known.
    pub average: Option<f64>,
    pub bound_name: BoundName,
    pub bound_value: f64,
    pub a_used: Option<f64>,
    /// Per-eigenvalue bounds compare against `λ_k`, the rest against the
    /// average.
    pub holds: Option<bool>,
    pub slack: Option<f64>,
    pub certified: bool,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn json_opt(x: Option<String>) -> String {
    x.unwrap_or_else(|| "null".into())
}

impl ReportRow {
    fn csv_fields(&self) -> [String; 11] {
        [
            self.domain.clone(),
            self.n.to_string(),
            self.l.to_string(),
            self.k.to_string(),
            opt(self.average),
            self.bound_name.to_string(),
            fmt_num(self.bound_value),
            opt(self.a_used),
            self.holds.map(|h| h.to_string()).unwrap_or_default(),
            opt(self.slack),
            self.certified.to_string(),
        ]
    }

    /// One JSON object; numbers carry 17 significant digits.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"domain\":{},\"n\":{},\"l\":{},\"k\":{},\"average\":{},\"bound_name\":\"{}\",\"bound_value\":{},\"a_used\":{},\"holds\":{},\"slack\":{},\"certified\":{}}}",
            serde_json::to_string(&self.domain).expect("string serializes"),
            self.n,
            self.l,
            self.k,
            json_opt(self.average.map(fmt_num)),
            self.bound_name,
            fmt_num(self.bound_value),
            json_opt(self.a_used.map(fmt_num)),
            json_opt(self.holds.map(|h| h.to_string())),
            json_opt(self.slack.map(fmt_num)),
            self.certified,
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<ReportRow>,
}

impl BoundReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.csv_fields()).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::NumericalFailure(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_lines(&self) -> String {
        self.rows.iter().map(|r| r.to_json() + "\n").collect()
    }

    /// Certified rows whose comparison failed.
    pub fn violations(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.certified && r.holds == Some(false))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::NumericalFailure(format!("csv: {e}"))
}

/// Names evaluated when the caller does not choose: every bound that makes
/// sense for this `(n, l)` and parameter set.
pub fn default_names(d: &DomainData, l: u32, m: Option<u32>) -> Vec<BoundName> {
    BoundName::ALL
        .into_iter()
        .filter(|b| b.is_poly() == (l >= 2))
        .filter(|b| match b {
            BoundName::Ilyin => (2..=4).contains(&d.n),
            BoundName::WeylTwoTerm => d.boundary_area.is_some(),
            BoundName::JiXu2020 => m.is_some_and(|m| m >= 2 && d.n > m),
            BoundName::Jx2SixTerm => 2 * l + d.n >= 6,
            _ => true,
        })
        .collect()
}

/// Inputs for [`run_verification`].
#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub domain: DomainDescriptor,
    pub l: u32,
    pub k_range: RangeInclusive<u64>,
    /// `None` selects [`default_names`].
    pub names: Option<Vec<BoundName>>,
    pub a_mode: AMode,
    pub m: Option<u32>,
    /// Compare against the exact spectrum; needs `l = 1` and a model domain.
    pub with_holds: bool,
}

impl VerifyRequest {
    pub fn new(domain: DomainDescriptor, l: u32, k_range: RangeInclusive<u64>) -> Self {
        VerifyRequest { domain, l, k_range, names: None, a_mode: AMode::Consistent, m: None, with_holds: l == 1 }
    }
}

pub fn run_verification(req: &VerifyRequest) -> Result<BoundReport> {
    let data = req.domain.data()?;
    if req.l == 0 {
        return Err(Error::InvalidParameter("l must be >= 1".into()));
    }
    let (k_lo, k_hi) = (*req.k_range.start(), *req.k_range.end());
    if k_lo == 0 || k_lo > k_hi {
        return Err(Error::InvalidParameter("k range must satisfy 1 <= a <= b".into()));
    }
    if req.with_holds && req.l >= 2 {
        return Err(Error::NoSpectrumOracle(format!(
            "no exact poly-Laplacian spectrum exists (l = {})",
            req.l
        )));
    }
    let spectrum = if req.with_holds {
        let count = usize::try_from(k_hi).map_err(|_| Error::BudgetExceeded { requested: usize::MAX, cap: 0 })?;
        Some(req.domain.spectrum(count)?)
    } else {
        None
    };
    let names = req.names.clone().unwrap_or_else(|| default_names(&data, req.l, req.m));
    // Boxes tile; balls are covered separately. Both satisfy λ_k ≥ polya-k.
    let tiling_or_ball = req.domain.model().is_some();

    let per_k: Vec<Result<Vec<ReportRow>>> = req
        .k_range
        .clone()
        .into_par_iter()
        .map(|k| {
            let average = spectrum.as_ref().and_then(|s| s.average(k as usize));
            let lambda_k = spectrum.as_ref().and_then(|s| s.eigenvalue(k as usize));
            names
                .iter()
                .map(|&name| {
                    let mut spec = BoundSpec::new(name, req.l).with_a_mode(req.a_mode);
                    spec.m = req.m;
                    let v = evaluate(&data, k, &spec)?;
                    let compared = if name.is_per_eigenvalue() { lambda_k } else { average };
                    let slack = compared.map(|c| c - v.value);
                    let holds =
                        compared.map(|c| c >= v.value - HOLDS_TOLERANCE * c.abs().max(1.0));
                    let certified = v.certified || (name == BoundName::PolyaK && tiling_or_ball);
                    Ok(ReportRow {
                        domain: req.domain.label().to_string(),
                        n: data.n,
                        l: req.l,
                        k,
                        average,
                        bound_name: name,
                        bound_value: v.value,
                        a_used: v.a_used,
                        holds,
                        slack,
                        certified,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_k {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        (a.domain.as_str(), a.l, a.k, a.bound_name.as_str()).cmp(&(b.domain.as_str(), b.l, b.k, b.bound_name.as_str()))
    });
    Ok(BoundReport { rows })
}

pub const DOMINANCE_HEADER: &str = "domain,n,l,k,comparison,difference,expected,asserted,holds";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceRow {
    pub domain: String,
    pub n: u32,
    pub l: u32,
    pub k: u64,
    /// `"<left>-minus-<right>"`.
    pub comparison: String,
    pub difference: f64,
    /// Closed form of the difference, where one exists.
    pub expected: Option<f64>,
    pub asserted: bool,
    /// For asserted comparisons: `difference > 0`.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DominanceReport {
    pub rows: Vec<DominanceRow>,
}

impl DominanceReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(DOMINANCE_HEADER.split(',')).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.domain.clone(),
                r.n.to_string(),
                r.l.to_string(),
                r.k.to_string(),
                r.comparison.clone(),
                fmt_num(r.difference),
                opt(r.expected),
                r.asserted.to_string(),
                r.holds.map(|h| h.to_string()).unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::NumericalFailure(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{{\"domain\":{},\"n\":{},\"l\":{},\"k\":{},\"comparison\":\"{}\",\"difference\":{},\"expected\":{},\"asserted\":{},\"holds\":{}}}\n",
                    serde_json::to_string(&r.domain).expect("string serializes"),
                    r.n,
                    r.l,
                    r.k,
                    r.comparison,
                    fmt_num(r.difference),
                    json_opt(r.expected.map(fmt_num)),
                    r.asserted,
                    json_opt(r.holds.map(|h| h.to_string())),
                )
            })
            .collect()
    }

    pub fn violations(&self) -> impl Iterator<Item = &DominanceRow> {
        self.rows.iter().filter(|r| r.asserted && r.holds == Some(false))
    }
}

/// `l = 1`: cor-melas-improved over melas (asserted, with its closed form)
/// and thm-main (consistent `a`) over melas (reported). `l ≥ 2`: cor-poly
/// over jx2-six-term (reported; needs `2l + n ≥ 6`).
pub fn dominance_report(domain: &DomainDescriptor, l: u32, k_range: RangeInclusive<u64>) -> Result<DominanceReport> {
    let d = domain.data()?;
    let label = domain.label().to_string();
    let value = |name, k| evaluate(&d, k, &BoundSpec::new(name, l)).map(|v| v.value);
    let mut rows = Vec::new();
    for k in k_range {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        let row = |comparison: &str, difference: f64, expected, asserted: bool| DominanceRow {
            domain: label.clone(),
            n: d.n,
            l,
            k,
            comparison: comparison.to_string(),
            difference,
            expected,
            asserted,
            holds: asserted.then_some(difference > 0.0),
        };
        if l == 1 {
            let melas = value(BoundName::Melas, k)?;
            let improved = value(BoundName::CorMelasImproved, k)?;
            let expected = (melas_improved_constant(d.n, k) - melas_constant(d.n)) * d.volume / d.inertia;
            rows.push(row("cor-melas-improved-minus-melas", improved - melas, Some(expected), true));
            rows.push(row("thm-main-minus-melas", value(BoundName::ThmMain, k)? - melas, None, false));
        } else if 2 * l + d.n >= 6 {
            let diff = value(BoundName::CorPoly, k)? - value(BoundName::Jx2SixTerm, k)?;
            rows.push(row("cor-poly-minus-jx2-six-term", diff, None, false));
        } else {
            return Err(Error::UnsupportedCombination(format!(
                "no poly comparison for 2l + n < 6 (l = {l}, n = {})",
                d.n
            )));
        }
    }
    Ok(DominanceReport { rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub n: u32,
    pub l: u32,
    pub index: u64,
    /// `"lemma"` or `"chain"`.
    pub kind: String,
    pub slack: f64,
    pub profile: ProfileDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub total: u64,
    pub failures: Vec<FuzzFailure>,
    pub min_slack: f64,
    pub equality_hits: u64,
    pub seed: u64,
}

impl FuzzSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub n_list: Vec<u32>,
    pub l_list: Vec<u32>,
    pub samples: u64,
    pub seed: u64,
    /// Replace sample 0 of every `(n, l)` with the wedge.
    pub inject_wedge: bool,
}

/// Slack below which a sample counts as an equality case.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

struct SampleOutcome {
    slack: f64,
    lemma_ok: bool,
    chain_ok: bool,
    chain_slack: f64,
    equality: bool,
    profile: Profile,
}

/// Checks the rearrangement lemma and the chain inequality on seeded
/// random profiles. Samples run in parallel with independent generators and
/// are merged in index order, so the summary depends only on the config.
pub fn fuzz_lemmas(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let mut summary =
        FuzzSummary { total: 0, failures: Vec::new(), min_slack: f64::INFINITY, equality_hits: 0, seed: cfg.seed };
    for &n in &cfg.n_list {
        for &l in &cfg.l_list {
            let outcomes: Vec<Result<SampleOutcome>> = (0..cfg.samples)
                .into_par_iter()
                .map(|i| {
                    let p = if cfg.inject_wedge && i == 0 {
                        wedge()
                    } else {
                        random_profile(sample_seed(cfg.seed, n, l, i))
                    };
                    let r = check_lemma(&p, n, l)?;
                    let c = check_melas_chain(&p, n, l)?;
                    Ok(SampleOutcome {
                        slack: r.slack,
                        lemma_ok: r.holds,
                        chain_ok: c.holds,
                        chain_slack: c.lhs - c.rhs,
                        equality: r.slack.abs() <= EQUALITY_TOLERANCE * r.moment_b.abs().max(1.0),
                        profile: p,
                    })
                })
                .collect();
            for (i, o) in outcomes.into_iter().enumerate() {
                let o = o?;
                summary.total += 1;
                summary.min_slack = summary.min_slack.min(o.slack);
                summary.equality_hits += u64::from(o.equality);
                let mut fail = |kind: &str, slack| {
                    summary.failures.push(FuzzFailure {
                        n,
                        l,
                        index: i as u64,
                        kind: kind.into(),
                        slack,
                        profile: o.profile.to_doc(),
                    })
                };
                if !o.lemma_ok {
                    fail("lemma", o.slack);
                }
                if !o.chain_ok {
                    fail("chain", o.chain_slack);
                }
            }
        }
    }
    Ok(summary)
}
