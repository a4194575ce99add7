//! Command-line surface: table lookups, traces, identity verifiers, grid
//! studies, and the full report bundle.
//!
//! Exit codes: 0 success (all requested verifications pass), 1 verification
//! failure, 2 usage/domain errors, 3 resource or I/O errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};

use cyclolab_core::arith::{self, SieveTables};
use cyclolab_core::cache::{self, CacheStatus};
use cyclolab_core::cyclotomic;
use cyclolab_core::error::Error as CoreError;
use cyclolab_core::ramanujan::{self, partial_sum_trace, TraceMode};
use cyclolab_core::verify::{
    self, default_calibration, grid_to_csv, reports_to_csv, reports_to_json, reports_to_table,
    VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Parser, Debug)]
#[command(
    name = "cyclolab",
    version,
    about = "Exact cyclotomic products, Ramanujan sums, and identity verifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits (minimum 64)
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,

    /// Cache directory for sieve tables (env CYCLOLAB_CACHE_DIR overrides)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Output format for reports and traces
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,

    /// Seed for the sampled sieve spot-check run by `report`
    #[arg(long, global = true, default_value_t = 0x00c1_c10a)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Ramanujan sum c_n(m)
    Csum {
        n: u64,
        m: u64,
        /// Cross-check the closed form against the root-of-unity definition
        #[arg(long)]
        check_roots: bool,
    },
    /// Print the coefficients of the n-th cyclotomic polynomial
    Cyclotomic { n: u64 },
    /// Checkpointed partial sums S_N(m) = sum_{n<=N} c_n(m)/n
    Trace {
        m: u64,
        #[arg(long)]
        nmax: u64,
        /// Comma-separated checkpoint list (default: powers of 10 up to nmax)
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
    },
    /// Run one identity verifier
    Verify {
        /// pnt-decay | sigma-zeta | product-identity-s | zeta-ratio |
        /// r2-series | theta-square | pi-over-4 | r2-logderiv |
        /// interior-product | boundary-study
        identity: String,
        /// Comma-separated n list (sigma-zeta, r2-series)
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u64>>,
        /// Comma-separated m list (pnt-decay)
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<u64>>,
        /// Checkpoint schedule (pnt-decay, interior-product)
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u64>>,
        /// Truncation index I
        #[arg(short = 'i', long)]
        truncation: Option<u64>,
        /// Series order M
        #[arg(long)]
        order: Option<u64>,
        /// Real parameter s
        #[arg(short = 's', long)]
        s: Option<f64>,
        /// Evaluation point z in (0,1)
        #[arg(short = 'z', long)]
        z: Option<f64>,
        /// Truncations N for boundary-study
        #[arg(long, value_delimiter = ',')]
        grid_n: Option<Vec<u64>>,
        /// Radii for boundary-study
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Angle count for boundary-study
        #[arg(long)]
        angles: Option<u64>,
    },
    /// Emit the |P_N(r e^{i theta})| magnitude grid as CSV
    Grid {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 10, 100])]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1f64, 0.5, 0.9])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        angles: u64,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verifier suite and emit a JSON report bundle
    Report {
        /// Run every verifier at its default parameters
        #[arg(long)]
        all: bool,
        /// Write the bundle here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.precision < 64 {
        eprintln!("error: --precision must be at least 64 bits");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::OutOfDomain { .. }
        | CoreError::OutsideUnitDisk { .. }
        | CoreError::OrderMismatch { .. }
        | CoreError::NearZeroDenominator { .. }
        | CoreError::InexactDivision => 2,
        CoreError::ResourceExhausted { .. }
        | CoreError::PrecisionInsufficient { .. }
        | CoreError::CacheInvalid { .. }
        | CoreError::Io { .. } => 3,
    }
}

fn cache_dir_from(cli_dir: &Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("CYCLOLAB_CACHE_DIR")
        .map(PathBuf::from)
        .or_else(|| cli_dir.clone())
}

fn sieve_for(limit: u64, cache_dir: &Option<PathBuf>) -> Result<SieveTables, CoreError> {
    let dir = cache_dir_from(cache_dir);
    let (sieve, status) = cache::sieve_cached(limit, dir.as_deref())?;
    if let CacheStatus::Invalid(reason) = status {
        eprintln!("warning: sieve cache was invalid and has been rebuilt ({reason})");
    }
    Ok(sieve)
}

fn default_schedule(n_max: u64) -> Vec<u64> {
    let mut schedule = Vec::new();
    let mut p = 1u64;
    while p < n_max {
        schedule.push(p);
        p = p.saturating_mul(10);
    }
    schedule.push(n_max);
    schedule.dedup();
    schedule
}

/// Decay checkpoints for the PNT verifier: powers of 100 up to the final N.
/// Single-decade steps in the converged tail are oscillation coin flips;
/// two-decade strides each span genuine decay, which is what the
/// majority-non-increasing contract is meant to observe.
fn decay_schedule(n_max: u64) -> Vec<u64> {
    let mut schedule = Vec::new();
    let mut p = 1u64;
    while p < n_max {
        schedule.push(p);
        p = p.saturating_mul(100);
    }
    schedule.push(n_max);
    schedule.dedup();
    schedule
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    let precision = cli.precision;
    match &cli.command {
        Command::Csum { n, m, check_roots } => {
            let (n, m) = (*n, *m);
            if n == 0 || m == 0 {
                return Err(CoreError::OutOfDomain {
                    name: "n, m",
                    value: format!("({n}, {m})"),
                    domain: "both >= 1",
                });
            }
            let value = ramanujan::cn(n, m);
            if *check_roots {
                let by_roots = ramanujan::cn_by_roots(n, m, precision)?;
                if by_roots != value {
                    eprintln!("error: closed form {value} != definition {by_roots}");
                    return Ok(ExitCode::from(1));
                }
            }
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Cyclotomic { n } => {
            let poly = cyclotomic::cyclotomic(*n)?;
            let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
            match cli.format {
                OutputFormat::Json => {
                    let v = serde_json::json!({
                        "n": n,
                        "degree": poly.degree(),
                        "coefficient_order": "low-to-high",
                        "coefficients": coeffs,
                    });
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
                _ => {
                    println!(
                        "# Phi_{n}, degree {}, coefficients low-to-high: c0 + c1*z + ...",
                        poly.degree().unwrap_or(0)
                    );
                    println!("[{}]", coeffs.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace {
            m,
            nmax,
            checkpoints,
            mode,
        } => {
            let schedule = checkpoints
                .clone()
                .unwrap_or_else(|| default_schedule(*nmax));
            let sieve = sieve_for(*nmax, &cli.cache_dir)?;
            let mode = match mode {
                Mode::Exact => TraceMode::Exact,
                Mode::Float => TraceMode::Float,
            };
            let trace = partial_sum_trace(*m, *nmax, &schedule, mode, precision, &sieve)?;
            match cli.format {
                OutputFormat::Json => {
                    let v = serde_json::json!({
                        "m": m,
                        "mode": match mode { TraceMode::Exact => "exact", TraceMode::Float => "float" },
                        "precision": precision,
                        "checkpoints": trace
                            .checkpoints
                            .iter()
                            .map(|c| serde_json::json!([c.n, c.value.to_report_string()]))
                            .collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
                _ => {
                    println!("# S_N({m}), {} mode", match mode { TraceMode::Exact => "exact", TraceMode::Float => "float" });
                    for c in &trace.checkpoints {
                        println!("{}\t{}", c.n, c.value.to_report_string());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { .. } => {
            let (report, grid) = run_verifier(&cli)?;
            emit_reports(std::slice::from_ref(&report), cli.format)?;
            if let Some(rows) = grid {
                eprintln!(
                    "# grid rows: {} (use the `grid` subcommand for CSV)",
                    rows.len()
                );
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Grid {
            n_list,
            radii,
            angles,
            out,
        } => {
            let rows = cyclotomic::boundary_grid(n_list, radii, *angles, precision)?;
            write_output(&grid_to_csv(&rows), out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { all, out } => {
            if !*all {
                return Err(CoreError::OutOfDomain {
                    name: "--all",
                    value: "absent".into(),
                    domain: "report requires --all",
                });
            }
            spot_check_sieve(cli.seed, &cli.cache_dir)?;
            let reports = run_default_suite(precision, &cli.cache_dir)?;
            write_output(&reports_to_json(&reports), out)?;
            eprint!("{}", reports_to_table(&reports));
            Ok(if reports.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn write_output(content: &str, out: &Option<PathBuf>) -> Result<(), CoreError> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| CoreError::io(path.clone(), e))?;
            f.write_all(content.as_bytes())
                .map_err(|e| CoreError::io(path.clone(), e))?;
            Ok(())
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn emit_reports(reports: &[VerificationReport], format: OutputFormat) -> Result<(), CoreError> {
    let rendered = match format {
        OutputFormat::Json => reports_to_json(reports),
        OutputFormat::Csv => reports_to_csv(reports),
        OutputFormat::Table => reports_to_table(reports),
    };
    write_output(&rendered, &None)
}

fn run_verifier(
    cli: &Cli,
) -> Result<(VerificationReport, Option<Vec<cyclotomic::GridRow>>), CoreError> {
    let Command::Verify {
        identity,
        n_list,
        m_list,
        schedule,
        truncation,
        order,
        s,
        z,
        grid_n,
        radii,
        angles,
    } = &cli.command
    else {
        unreachable!()
    };
    let cal = default_calibration();
    let precision = cli.precision;
    match identity.as_str() {
        "pnt-decay" => {
            let m_list = m_list.clone().unwrap_or_else(|| (1..=10).collect());
            let schedule = schedule
                .clone()
                .unwrap_or_else(|| decay_schedule(1_000_000));
            let n_max = *schedule.last().ok_or(CoreError::OutOfDomain {
                name: "schedule",
                value: "[]".into(),
                domain: "nonempty",
            })?;
            let sieve = sieve_for(n_max, &cli.cache_dir)?;
            let r = verify::verify_pnt_decay(&m_list, &schedule, precision, &sieve, cal)?;
            Ok((r, None))
        }
        "sigma-zeta" => {
            let n_list = n_list.clone().unwrap_or_else(|| (1..=100).collect());
            let i_max = truncation.unwrap_or(1_000_000);
            let sieve = sieve_for(i_max, &cli.cache_dir)?;
            let r = verify::verify_sigma_zeta(&n_list, s.unwrap_or(1.0), i_max, precision, &sieve)?;
            Ok((r, None))
        }
        "product-identity-s" => {
            let r = verify::verify_product_identity_s(
                order.unwrap_or(40) as usize,
                s.unwrap_or(2.0),
                precision,
            )?;
            Ok((r, None))
        }
        "zeta-ratio" => {
            let i_max = truncation.unwrap_or(10_000);
            let sieve = sieve_for(i_max, &cli.cache_dir)?;
            let r = verify::verify_zeta_ratio(
                z.unwrap_or(0.5),
                s.unwrap_or(1.0),
                i_max,
                precision,
                &sieve,
                cal,
            )?;
            Ok((r, None))
        }
        "r2-series" => {
            let n_list = n_list.clone().unwrap_or_else(|| vec![1, 2, 3, 5, 7, 25]);
            let i_max = truncation.unwrap_or(100_000);
            let sieve = sieve_for(2 * i_max + 1, &cli.cache_dir)?;
            let r = verify::verify_r2_series(&n_list, i_max, precision, &sieve, cal)?;
            Ok((r, None))
        }
        "theta-square" => {
            let r = verify::verify_theta_square(order.unwrap_or(200))?;
            Ok((r, None))
        }
        "pi-over-4" => {
            let i_max = truncation.unwrap_or(10_000);
            let sieve = sieve_for(2 * i_max + 1, &cli.cache_dir)?;
            let r = verify::verify_pi_over_4(z.unwrap_or(0.5), i_max, precision, &sieve, cal)?;
            Ok((r, None))
        }
        "r2-logderiv" => {
            let i_max = truncation.unwrap_or(10_000);
            let sieve = sieve_for(2 * i_max + 1, &cli.cache_dir)?;
            let r = verify::verify_r2_product_logderiv(
                order.unwrap_or(60),
                i_max,
                precision,
                &sieve,
                cal,
            )?;
            Ok((r, None))
        }
        "interior-product" => {
            let checkpoints = schedule.clone().unwrap_or_else(|| vec![100, 1_000, 10_000]);
            let r =
                verify::verify_interior_product(z.unwrap_or(0.3), &checkpoints, precision, cal)?;
            Ok((r, None))
        }
        "boundary-study" => {
            let n_list = grid_n.clone().unwrap_or_else(|| vec![1, 10, 100]);
            let radii = radii.clone().unwrap_or_else(|| vec![0.1, 0.5, 0.9]);
            let (r, rows) =
                verify::boundary_study(&n_list, &radii, angles.unwrap_or(16), precision, cal)?;
            Ok((r, Some(rows)))
        }
        other => Err(CoreError::OutOfDomain {
            name: "identity",
            value: other.to_string(),
            domain: "pnt-decay | sigma-zeta | product-identity-s | zeta-ratio | r2-series | theta-square | pi-over-4 | r2-logderiv | interior-product | boundary-study",
        }),
    }
}

/// Seeded sample check of the sieve against the per-value functions; a
/// mismatch means a corrupted table and aborts the run.
fn spot_check_sieve(seed: u64, cache_dir: &Option<PathBuf>) -> Result<(), CoreError> {
    let sieve = sieve_for(100_000, cache_dir)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let n = rng.random_range(1..=sieve.limit);
        if sieve.mu(n) != arith::mobius(n)?
            || sieve.phi(n) != arith::totient(n)?
            || sieve.sigma(n) != arith::sigma(n)?
        {
            return Err(CoreError::CacheInvalid {
                reason: format!("sieve spot-check failed at n = {n}"),
            });
        }
    }
    Ok(())
}

/// The default parameter set for `report --all`; one sieve serves every
/// verifier that needs bulk tables.
fn run_default_suite(
    precision: u32,
    cache_dir: &Option<PathBuf>,
) -> Result<Vec<VerificationReport>, CoreError> {
    let cal = default_calibration();
    let sieve = sieve_for(1_000_000, cache_dir)?;
    let mut reports = Vec::new();
    let m_list: Vec<u64> = (1..=10).collect();
    reports.push(verify::verify_pnt_decay(
        &m_list,
        &decay_schedule(1_000_000),
        precision,
        &sieve,
        cal,
    )?);
    let n_list: Vec<u64> = (1..=100).collect();
    reports.push(verify::verify_sigma_zeta(
        &n_list, 1.0, 1_000_000, precision, &sieve,
    )?);
    reports.push(verify::verify_product_identity_s(40, 2.0, precision)?);
    reports.push(verify::verify_zeta_ratio(
        0.5, 1.0, 10_000, precision, &sieve, cal,
    )?);
    reports.push(verify::verify_r2_series(
        &[1, 2, 3, 5, 7, 25],
        100_000,
        precision,
        &sieve,
        cal,
    )?);
    reports.push(verify::verify_theta_square(200)?);
    reports.push(verify::verify_pi_over_4(
        0.5, 10_000, precision, &sieve, cal,
    )?);
    reports.push(verify::verify_r2_product_logderiv(
        60, 10_000, precision, &sieve, cal,
    )?);
    reports.push(verify::verify_interior_product(
        0.3,
        &[100, 1_000, 10_000],
        precision,
        cal,
    )?);
    let (boundary, _rows) =
        verify::boundary_study(&[1, 10, 100], &[0.1, 0.5, 0.9], 16, precision, cal)?;
    reports.push(boundary);
    Ok(reports)
}
