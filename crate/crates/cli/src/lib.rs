//! Command-line front end. [`run_cli`] takes the full argv and returns the
//! process exit code: 0 success, 1 property violation, 2 usage error,
//! 3 numerical failure.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigenfloor_core::bounds::{AMode, BoundName};
use eigenfloor_core::polyid::{
    expand_laplacian_sides, expand_poly_sides, laplacian_coefficient_profile, quotient_coefficients,
    reconstruct_from_quotient, shifted_power_polynomial,
};
use eigenfloor_core::profiles::{
    check_lemma, jensen_grid_laplacian, jensen_grid_poly, r_floor_scan, Profile,
};
use eigenfloor_core::spectra::DomainDescriptor;
use eigenfloor_core::verify::{
    dominance_report, fmt_num, fuzz_lemmas, parse_k_range, run_verification, FuzzConfig, VerifyRequest,
};
use eigenfloor_core::Error;
use rayon::prelude::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "eigenfloor", version, about = "Check lower bounds on averaged Dirichlet eigenvalues")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    JsonLines,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand both polynomial identities exactly and compare coefficients.
    Identity {
        /// Largest n for the Laplacian identity.
        #[arg(long, default_value_t = 64)]
        max_n: u32,
        /// Largest d and q for the poly-Laplacian identity.
        #[arg(long, default_value_t = 32)]
        max_dq: u32,
    },
    /// Fuzz the rearrangement lemma, or check one profile with --profile.
    Lemma {
        /// Dimensions: a list `2,3` or a range `2..5`.
        #[arg(long, default_value = "2")]
        n: String,
        /// Poly orders: a list or a range.
        #[arg(long, default_value = "1")]
        l: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check a single profile document `{"rho": .., "knots": [[s, v], ..]}`.
        #[arg(long, value_name = "FILE")]
        profile: Option<PathBuf>,
        /// Replace sample 0 of every (n, l) with the wedge profile.
        #[arg(long)]
        inject_wedge: bool,
    },
    /// Sweep the Jensen floors over a grid of the admissible (a, τ) region.
    Jensen {
        /// Dimensions: a list or a range.
        #[arg(long, default_value = "2..10")]
        n: String,
        /// Poly orders (1 = Laplacian): a list or a range.
        #[arg(long, default_value = "1")]
        l: String,
        /// Grid points per axis.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Largest a on the grid.
        #[arg(long, default_value_t = 10.0)]
        a_max: f64,
    },
    /// Evaluate bounds without comparing to a spectrum.
    Bounds {
        #[command(flatten)]
        common: BoundArgs,
    },
    /// Print the first K eigenvalues of a model domain.
    Spectrum {
        #[arg(long, value_name = "D")]
        domain: String,
        #[arg(long, value_name = "K")]
        count: usize,
    },
    /// Compare bounds with the exact spectrum of a model domain.
    Verify {
        #[command(flatten)]
        common: BoundArgs,
    },
    /// Pairwise bound differences.
    Dominance {
        #[arg(long, value_name = "D")]
        domain: String,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, value_name = "RANGE")]
        k: String,
    },
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// `box:L1,..,Ln`, `ball:n,R` or `custom:n,V,I[,area]`.
    #[arg(long, value_name = "D")]
    domain: String,
    /// Averaging indices, `a..b` inclusive.
    #[arg(long, value_name = "RANGE")]
    k: String,
    /// Comma-separated bound names (default: all that apply).
    #[arg(long, value_name = "LIST")]
    names: Option<String>,
    /// Poly-Laplacian order.
    #[arg(long, default_value_t = 1)]
    l: u32,
    /// zero | consistent | fixed:X
    #[arg(long, default_value = "consistent")]
    a_mode: String,
    /// `m` parameter of `ji-xu-2020`.
    #[arg(long)]
    m: Option<u32>,
}

/// Failure modes of a command, mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure(_) | Error::InfeasibleMoment { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// What a command produced: text to emit and whether a property failed.
struct Outcome {
    text: String,
    violation: bool,
}

/// Runs the CLI with standard output and standard error.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing to the given streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t as usize);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| execute(&cli)),
        Err(e) => Err(Failure::Io(format!("thread pool: {e}"))),
    };
    match result {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if outcome.violation {
                let _ = writeln!(err, "property violation found");
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Usage(m)) | Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_NUMERICAL
        }
    }
}

/// `a..b` (inclusive) or a comma list.
fn parse_u32_list(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::Usage(format!("`{s}` is not a list like `2,3` or a range like `2..5`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

enum Cell {
    Str(String),
    Int(u64),
    Num(f64),
    Bool(bool),
}

fn render(format: Format, header: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(&header.join(","));
            s.push('\n');
            for row in rows {
                let fields: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Str(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
                        Cell::Str(t) => t.clone(),
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(x) => fmt_num(*x),
                        Cell::Bool(b) => b.to_string(),
                    })
                    .collect();
                s.push_str(&fields.join(","));
                s.push('\n');
            }
        }
        Format::JsonLines => {
            for row in rows {
                let fields: Vec<String> = header
                    .iter()
                    .zip(row)
                    .map(|(h, c)| {
                        let v = match c {
                            Cell::Str(t) => serde_json::to_string(t).expect("string serializes"),
                            Cell::Int(i) => i.to_string(),
                            Cell::Num(x) if x.is_finite() => fmt_num(*x),
                            Cell::Num(_) => "null".into(),
                            Cell::Bool(b) => b.to_string(),
                        };
                        format!("\"{h}\":{v}")
                    })
                    .collect();
                s.push('{');
                s.push_str(&fields.join(","));
                s.push_str("}\n");
            }
        }
    }
    s
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Identity { max_n, max_dq } => identity(cli.format, *max_n, *max_dq),
        Command::Lemma { n, l, samples, seed, profile, inject_wedge } => {
            let n_list = parse_u32_list(n)?;
            let l_list = parse_u32_list(l)?;
            match profile {
                Some(path) => lemma_single(cli.format, path, &n_list, &l_list),
                None => {
                    let summary = fuzz_lemmas(&FuzzConfig {
                        n_list,
                        l_list,
                        samples: *samples,
                        seed: *seed,
                        inject_wedge: *inject_wedge,
                    })?;
                    Ok(Outcome { text: summary.to_json() + "\n", violation: !summary.failures.is_empty() })
                }
            }
        }
        Command::Jensen { n, l, grid, a_max } => jensen(cli.format, &parse_u32_list(n)?, &parse_u32_list(l)?, *grid, *a_max),
        Command::Bounds { common } => bound_rows(cli.format, common, false),
        Command::Verify { common } => bound_rows(cli.format, common, true),
        Command::Spectrum { domain, count } => {
            let d: DomainDescriptor = domain.parse()?;
            let s = d.spectrum(*count)?;
            let rows: Vec<Vec<Cell>> = (0..s.count())
                .map(|i| vec![Cell::Int(i as u64 + 1), Cell::Num(s.eigenvalues()[i]), Cell::Num(s.partial_sums()[i])])
                .collect();
            Ok(Outcome { text: render(cli.format, &["k", "eigenvalue", "partial_sum"], &rows), violation: false })
        }
        Command::Dominance { domain, l, k } => {
            let d: DomainDescriptor = domain.parse()?;
            let rep = dominance_report(&d, *l, parse_k_range(k)?)?;
            let text = match cli.format {
                Format::Csv => rep.to_csv()?,
                Format::JsonLines => rep.to_json_lines(),
            };
            let violation = rep.violations().next().is_some();
            Ok(Outcome { text, violation })
        }
    }
}

fn identity(format: Format, max_n: u32, max_dq: u32) -> Result<Outcome, Failure> {
    if max_n < 1 || max_dq < 2 {
        return Err(Failure::Usage("need --max-n >= 1 and --max-dq >= 2".into()));
    }
    let lap: Vec<bool> = (1..=max_n).into_par_iter().map(|n| expand_laplacian_sides(n).map(|e| e.equal)).collect::<Result<_, _>>()?;
    let pairs: Vec<(u32, u32)> = (2..=max_dq).flat_map(|d| (2..=max_dq).map(move |q| (d, q))).collect();
    let poly: Vec<bool> = pairs.par_iter().map(|&(d, q)| expand_poly_sides(d, q).map(|e| e.equal)).collect::<Result<_, _>>()?;
    let cross: Vec<bool> = (2..=max_n.min(max_dq))
        .into_par_iter()
        .map(|n| Ok::<_, Error>(expand_poly_sides(n, 2)?.rhs == expand_laplacian_sides(n)?.rhs))
        .collect::<Result<_, _>>()?;
    let profile: Vec<bool> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let rhs = expand_laplacian_sides(n)?.rhs;
            Ok::<_, Error>(laplacian_coefficient_profile(n)?.total == rhs.tau_profile())
        })
        .collect::<Result<_, _>>()?;
    let quotient: Vec<bool> = (2..=max_n.max(max_dq))
        .map(|q| Ok::<_, Error>(reconstruct_from_quotient(&quotient_coefficients(q)?) == shifted_power_polynomial(q)))
        .collect::<Result<_, _>>()?;
    let checks = [
        ("laplacian", lap),
        ("poly", poly),
        ("q2-cross", cross),
        ("coefficient-profile", profile),
        ("quotient", quotient),
    ];
    let mut violation = false;
    let rows: Vec<Vec<Cell>> = checks
        .iter()
        .map(|(name, results)| {
            let failures = results.iter().filter(|ok| !**ok).count() as u64;
            violation |= failures > 0;
            vec![Cell::Str(name.to_string()), Cell::Int(results.len() as u64), Cell::Int(failures)]
        })
        .collect();
    Ok(Outcome { text: render(format, &["check", "cases", "failures"], &rows), violation })
}

fn lemma_single(format: Format, path: &PathBuf, n_list: &[u32], l_list: &[u32]) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let p = Profile::from_json(&text)?;
    let mut rows = Vec::new();
    let mut violation = false;
    for &n in n_list {
        for &l in l_list {
            let r = check_lemma(&p, n, l)?;
            violation |= !r.holds;
            rows.push(vec![
                Cell::Int(n as u64),
                Cell::Int(l as u64),
                Cell::Num(r.moment_a),
                Cell::Num(r.moment_b),
                Cell::Num(r.a),
                Cell::Num(r.rhs),
                Cell::Num(r.slack),
                Cell::Bool(r.holds),
            ]);
        }
    }
    let header = ["n", "l", "moment_a", "moment_b", "a", "rhs", "slack", "holds"];
    Ok(Outcome { text: render(format, &header, &rows), violation })
}

fn jensen(format: Format, n_list: &[u32], l_list: &[u32], grid: usize, a_max: f64) -> Result<Outcome, Failure> {
    if grid == 0 || !(a_max.is_finite() && a_max >= 0.0) {
        return Err(Failure::Usage("need --grid >= 1 and a finite --a-max >= 0".into()));
    }
    let jobs: Vec<(u32, u32)> = l_list.iter().flat_map(|&l| n_list.iter().map(move |&n| (n, l))).collect();
    let sums = jobs
        .par_iter()
        .map(|&(n, l)| if l == 1 { jensen_grid_laplacian(n, grid, a_max) } else { jensen_grid_poly(n, l, grid, a_max) })
        .collect::<Result<Vec<_>, _>>()?;
    let mut violation = false;
    let mut rows: Vec<Vec<Cell>> = sums
        .iter()
        .map(|s| {
            // The poly secondary count is the report-only strong floor.
            violation |= s.violations > 0 || (s.l == 1 && s.secondary_violations > 0);
            vec![
                Cell::Str(if s.l == 1 { "laplacian-grid" } else { "poly-grid" }.into()),
                Cell::Int(s.n as u64),
                Cell::Int(s.l as u64),
                Cell::Int(s.points as u64),
                Cell::Int(s.violations as u64),
                Cell::Int(s.secondary_violations as u64),
                Cell::Num(s.min_ratio),
            ]
        })
        .collect();
    let samples = 100_000;
    let (_, r_min) = r_floor_scan(samples);
    let r_bad = (r_min + 3f64.sqrt() / 6.0).abs() > 1e-10;
    violation |= r_bad;
    rows.push(vec![
        Cell::Str("r-floor".into()),
        Cell::Int(0),
        Cell::Int(0),
        Cell::Int(samples as u64),
        Cell::Int(r_bad as u64),
        Cell::Int(0),
        Cell::Num(r_min),
    ]);
    let header = ["check", "n", "l", "points", "violations", "secondary_violations", "min_value"];
    Ok(Outcome { text: render(format, &header, &rows), violation })
}

fn bound_rows(format: Format, a: &BoundArgs, with_holds: bool) -> Result<Outcome, Failure> {
    let domain: DomainDescriptor = a.domain.parse()?;
    let mut req = VerifyRequest::new(domain, a.l, parse_k_range(&a.k)?);
    req.names = a.names.as_deref().map(BoundName::parse_list).transpose()?;
    req.a_mode = a.a_mode.parse::<AMode>()?;
    req.m = a.m;
    req.with_holds = with_holds;
    let rep = run_verification(&req)?;
    let text = match format {
        Format::Csv => rep.to_csv()?,
        Format::JsonLines => rep.to_json_lines(),
    };
    let violation = rep.violations().next().is_some();
            Ok(Outcome { text, violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("eigenfloor").chain(args.iter().copied());
        let code = run_cli_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lists() {
        assert_eq!(parse_u32_list("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_u32_list("2,5").unwrap(), vec![2, 5]);
        assert!(parse_u32_list("4..2").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["lemma", "--samples", "-3"]).0, EXIT_USAGE);
        assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run(&["spectrum", "--domain", "box:1,1", "--count", "3", "--nope"]).0, EXIT_USAGE);
        assert_eq!(run(&["bounds", "--domain", "box:1", "--k", "1..2"]).0, EXIT_USAGE);
        assert_eq!(run(&["bounds", "--domain", "box:1,1", "--k", "1..2", "--names", "foo"]).0, EXIT_USAGE);
    }

    #[test]
    fn bounds_csv() {
        let (code, out, _) = run(&["bounds", "--domain", "box:1,1", "--k", "1..5", "--names", "li-yau,melas"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 11);
    }

    #[test]
    fn json_lines_spectrum() {
        let (code, out, _) = run(&["spectrum", "--domain", "box:1,1", "--count", "2", "--format", "json-lines"]);
        assert_eq!(code, EXIT_OK);
        let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert_eq!(first["k"], 1);
    }
}
