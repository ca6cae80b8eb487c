//! `lincount`: counting and maximising solutions to homogeneous linear
//! equations in finite integer sets.
//!
//! Every subcommand prints JSON to stdout (CSV where documented) with sorted
//! keys and exact num/den integer pairs for rationals; exit code 0 on
//! success, 1 on a domain error, 2 on a usage error.

use clap::{Parser, Subcommand};
use lincount::construct::{k_piece, three_piece, ConstructionResult};
use lincount::continuum::{
    phi_k, sigma_asymptotic, sigma_exact, sigma_quadrature, theta, PhiArgs,
};
use lincount::counting::{
    additive_energy, count_solutions, count_solutions_family, count_system_solutions,
    difference_set, doubling_delta, sumset, CountReport,
};
use lincount::oracles::{
    bukh_gap_violations, bukh_interval_sweep, run_check_suite, CheckKind, SuiteConfig,
    SuiteReport,
};
use lincount::search::{
    exhaustive_max, local_search_max, system_density_sweep, Acceptance, GammaEstimate,
    SearchConfig, DEFAULT_SEED,
};
use lincount::{setfile, IntSet, LinearForm, LinearSystem, Rational};
use serde_json::{json, Number, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "lincount", version, about)]
struct Cli {
    /// Cap internal parallelism; output never depends on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count solutions of a_1 x_1 + ... + a_k x_k = 0 with all x_i in one set.
    Count {
        /// Comma-separated coefficients, e.g. 1,-2,1
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        set_file: PathBuf,
    },
    /// Count solutions with x_i drawn from the i-th set file.
    CountFamily {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// One file per variable, repeated k times.
        #[arg(long, required = true)]
        set_file: Vec<PathBuf>,
    },
    /// Additive energy E(A, B).
    Energy {
        #[arg(long, num_args = 2, required = true)]
        set_file: Vec<PathBuf>,
    },
    /// Doubling constant |A - A| / |A|.
    Delta {
        #[arg(long)]
        set_file: PathBuf,
    },
    /// Sumset A + B (or difference set A - B).
    Sumset {
        #[arg(long, num_args = 2, required = true)]
        set_file: Vec<PathBuf>,
        #[arg(long)]
        difference: bool,
    },
    /// Count solutions of a linear system over one set.
    SystemCount {
        /// Semicolon-separated rows of comma-separated coefficients,
        /// e.g. "1,1,-1,0;1,2,0,-1".
        #[arg(long, allow_hyphen_values = true)]
        system: String,
        #[arg(long)]
        set_file: PathBuf,
    },
    /// Build the pieced construction, write its union as a set file, and
    /// print a JSON sidecar.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long = "M")]
        m: i64,
        /// Destination for the union set file.
        #[arg(long)]
        out: PathBuf,
    },
    /// The constant sigma_k, exactly or numerically.
    Sigma {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "exact")]
        method: String,
        /// Absolute tolerance for the quadrature method.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Exact Phi_k of the given interval widths.
    Phi {
        /// Comma-separated positive rationals, e.g. 1,3/2,2
        #[arg(long)]
        widths: String,
    },
    /// Exact Theta of the given widths.
    Theta {
        #[arg(long)]
        widths: String,
    },
    /// Randomized inequality suites; failures are counterexample dumps.
    Verify {
        /// all, energy, ruzsa, tnrg, uniform, gs, or bukh
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        instances: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Largest random set size (default 30); for the bukh suite, the
        /// largest interval length (default 10000).
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Stochastic local search for a solution-dense set.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Target set size.
        #[arg(long)]
        n: usize,
        /// Ground range lo:hi, e.g. -200:200
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
        #[arg(long, default_value_t = 20_000)]
        steps: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Simulated annealing as T0:cooling, e.g. 5.0:0.999
        #[arg(long)]
        anneal: Option<String>,
        /// Exhaustive enumeration instead of local search (tiny instances).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Densities of {x + y = z, x + My = w} over [0, n-1] for each M.
    SweepSystem {
        /// Comma-separated system parameters, e.g. 2,4,8,16
        #[arg(long = "M")]
        m_values: String,
        #[arg(long)]
        n: usize,
        /// csv (default) or json
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

enum CliError {
    Usage(String),
    Domain(lincount::Error),
}

impl From<lincount::Error> for CliError {
    fn from(e: lincount::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore the error if a pool already exists; output is
        // thread-count-independent anyway
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Count { coeffs, set_file } => {
            let form = LinearForm::new(&parse_i64_list(&coeffs, "--coeffs")?)?;
            let set = setfile::read_set(set_file)?;
            print_value(&report_json(&count_solutions(&form, &set)?));
        }
        Command::CountFamily { coeffs, set_file } => {
            let form = LinearForm::new(&parse_i64_list(&coeffs, "--coeffs")?)?;
            let sets = set_file
                .iter()
                .map(setfile::read_set)
                .collect::<lincount::Result<Vec<_>>>()?;
            let refs: Vec<&IntSet> = sets.iter().collect();
            print_value(&report_json(&count_solutions_family(&form, &refs)?));
        }
        Command::Energy { set_file } => {
            let a = setfile::read_set(&set_file[0])?;
            let b = setfile::read_set(&set_file[1])?;
            let e = additive_energy(&a, &b)?;
            print_value(&json!({ "energy": e, "sizes": [a.len(), b.len()] }));
        }
        Command::Delta { set_file } => {
            let a = setfile::read_set(set_file)?;
            print_value(&rational_json(&doubling_delta(&a)?));
        }
        Command::Sumset {
            set_file,
            difference,
        } => {
            let a = setfile::read_set(&set_file[0])?;
            let b = setfile::read_set(&set_file[1])?;
            let out = if difference {
                difference_set(&a, &b)?
            } else {
                sumset(&a, &b)?
            };
            print_value(&json!({ "elements": out.elements(), "size": out.len() }));
        }
        Command::SystemCount { system, set_file } => {
            let rows = parse_system(&system)?;
            let system = LinearSystem::new(rows)?;
            let set = setfile::read_set(set_file)?;
            print_value(&report_json(&count_system_solutions(&system, &set)?));
        }
        Command::Construct { coeffs, m, out } => {
            let form = LinearForm::new(&parse_i64_list(&coeffs, "--coeffs")?)?;
            let built: ConstructionResult = if form.arity() == 3 {
                three_piece(&form, m)?
            } else {
                k_piece(&form, m)?
            };
            setfile::write_set(&out, &built.union_set)?;
            print_value(&json!({
                "M": built.parameter_m,
                "component_sizes": built.components.iter().map(IntSet::len).collect::<Vec<_>>(),
                "predicted_cross_count": built.predicted_cross_count,
                "union_size": built.union_set.len(),
            }));
        }
        Command::Sigma { k, method, tol } => match method.as_str() {
            "exact" => print_value(&rational_json(&sigma_exact(k)?)),
            "quadrature" => {
                print_value(&json!({ "value": sigma_quadrature(k, tol)? }))
            }
            "asymptotic" => {
                if k < 3 {
                    return Err(usage("--k must be at least 3"));
                }
                print_value(&json!({ "value": sigma_asymptotic(k) }))
            }
            other => return Err(usage(format!("unknown --method {other:?}"))),
        },
        Command::Phi { widths } => {
            let args = PhiArgs::new(parse_rational_list(&widths, "--widths")?)?;
            print_value(&rational_json(&phi_k(&args)));
        }
        Command::Theta { widths } => {
            let args = PhiArgs::new(parse_rational_list(&widths, "--widths")?)?;
            print_value(&rational_json(&theta(&args)));
        }
        Command::Verify {
            suite,
            instances,
            seed,
            max_size,
        } => {
            let summaries = run_verify(&suite, instances, seed, max_size)?;
            print_value(&Value::Array(summaries));
        }
        Command::Search {
            coeffs,
            n,
            range,
            restarts,
            steps,
            seed,
            anneal,
            exhaustive,
        } => {
            let form = LinearForm::new(&parse_i64_list(&coeffs, "--coeffs")?)?;
            let (lo, hi) = parse_range(&range)?;
            let est = if exhaustive {
                exhaustive_max(&form, n, lo, hi)?
            } else {
                let acceptance = match anneal {
                    None => Acceptance::HillClimb,
                    Some(spec) => {
                        let (t0, cool) = parse_anneal(&spec)?;
                        Acceptance::Anneal {
                            initial_temp: t0,
                            cooling: cool,
                        }
                    }
                };
                let config = SearchConfig {
                    set_size: n,
                    range_lo: lo,
                    range_hi: hi,
                    restarts,
                    steps_per_restart: steps,
                    seed,
                    acceptance,
                };
                local_search_max(&form, &config)?
            };
            print_value(&estimate_json(&est));
        }
        Command::SweepSystem { m_values, n, format } => {
            let ms = parse_i64_list(&m_values, "--M")?;
            let points = system_density_sweep(&ms, n)?;
            match format.as_str() {
                "csv" => {
                    println!("M,count,density");
                    for p in &points {
                        let d = lincount::continuum::rational_to_f64(&p.density);
                        println!("{},{},{}", p.m, p.count, d);
                    }
                }
                "json" => {
                    let rows: Vec<Value> = points
                        .iter()
                        .map(|p| {
                            json!({
                                "M": p.m,
                                "count": p.count,
                                "density": rational_json(&p.density),
                            })
                        })
                        .collect();
                    print_value(&Value::Array(rows));
                }
                other => return Err(usage(format!("unknown --format {other:?}"))),
            }
        }
    }
    Ok(())
}

fn run_verify(
    suite: &str,
    instances: u64,
    seed: u64,
    max_size: Option<usize>,
) -> CliResult<Vec<Value>> {
    let set_max = max_size.unwrap_or(30);
    let interval_max = max_size.unwrap_or(10_000);
    let kinds: Vec<CheckKind> = match suite {
        "all" => vec![
            CheckKind::Tnrg3,
            CheckKind::TnrgK,
            CheckKind::Uniform3,
            CheckKind::EnergyCs,
            CheckKind::EnergyTrivial,
            CheckKind::Ruzsa,
            CheckKind::GsDoubling,
        ],
        "energy" => vec![CheckKind::EnergyCs, CheckKind::EnergyTrivial],
        "tnrg" => vec![CheckKind::Tnrg3, CheckKind::TnrgK],
        "uniform" => vec![CheckKind::Uniform3],
        "ruzsa" => vec![CheckKind::Ruzsa],
        "gs" => vec![CheckKind::GsDoubling],
        "bukh" => vec![],
        other => return Err(usage(format!("unknown --suite {other:?}"))),
    };
    let mut out = Vec::new();
    for kind in kinds {
        // the k-variable bound is costlier; it runs a tenth of the
        // instances on smaller sets, matching its documented suite shape
        let cfg = if kind == CheckKind::TnrgK {
            SuiteConfig::new((instances / 10).max(1), seed, set_max.min(10))
        } else {
            SuiteConfig::new(instances, seed, set_max)
        };
        out.push(suite_json(&run_check_suite(kind, &cfg)?));
    }
    if suite == "bukh" || suite == "all" {
        let mut sizes: Vec<u64> = vec![16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192];
        let cap = (interval_max as u64).clamp(16, 10_000);
        sizes.retain(|&n| n <= cap);
        if !sizes.contains(&cap) {
            sizes.push(cap);
        }
        let pairs = [(1, 2), (2, 3), (3, 5)];
        let measurements = bukh_interval_sweep(&pairs, &sizes)?;
        let failures = bukh_gap_violations(&measurements, 16);
        let gaps: Vec<Value> = measurements
            .iter()
            .map(|m| {
                json!({
                    "gap": m.gap,
                    "lambda1": m.lambda.0,
                    "lambda2": m.lambda.1,
                    "linear_bound": m.linear_bound,
                    "measured": m.measured,
                    "n": m.n,
                })
            })
            .collect();
        out.push(json!({
            "failures": failures,
            "gaps": gaps,
            "instances": measurements.len(),
            "suite": "bukh",
        }));
    }
    Ok(out)
}

fn suite_json(report: &SuiteReport) -> Value {
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({ "description": f.description, "instance": f.instance }))
        .collect();
    json!({
        "failures": failures,
        "instances": report.instances,
        "suite": report.name,
    })
}

fn report_json(report: &CountReport) -> Value {
    json!({
        "count": report.count,
        "density_den": big_number(&report.density.denom().to_string()),
        "density_num": big_number(&report.density.numer().to_string()),
        "sizes": report.set_sizes,
    })
}

fn estimate_json(est: &GammaEstimate) -> Value {
    json!({
        "best_count": est.best_count,
        "best_set": est.best_set.elements(),
        "coeffs": est.form.coefficients(),
        "density": rational_json(&est.density),
        "trace": est.trace.iter().map(rational_json).collect::<Vec<_>>(),
    })
}

fn rational_json(r: &Rational) -> Value {
    json!({
        "den": big_number(&r.denom().to_string()),
        "num": big_number(&r.numer().to_string()),
    })
}

/// Arbitrary-precision JSON integer (serde_json keeps the digits verbatim).
fn big_number(digits: &str) -> Value {
    Value::Number(Number::from_str(digits).expect("integer digits"))
}

fn print_value(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable value"));
}

fn parse_i64_list(text: &str, flag: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|e| usage(format!("{flag}: bad integer {p:?}: {e}")))
        })
        .collect()
}

fn parse_rational_list(text: &str, flag: &str) -> CliResult<Vec<Rational>> {
    text.split(',')
        .map(|p| {
            let p = p.trim();
            let (num, den) = match p.split_once('/') {
                Some((n, d)) => (n, d),
                None => (p, "1"),
            };
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|e| usage(format!("{flag}: bad rational {p:?}: {e}")))?;
            let d: i64 = den
                .trim()
                .parse()
                .map_err(|e| usage(format!("{flag}: bad rational {p:?}: {e}")))?;
            if d == 0 {
                return Err(usage(format!("{flag}: zero denominator in {p:?}")));
            }
            Ok(lincount::model::rational(n, d))
        })
        .collect()
}

fn parse_system(text: &str) -> CliResult<Vec<Vec<i64>>> {
    text.split(';')
        .map(|row| parse_i64_list(row, "--system"))
        .collect()
}

fn parse_range(text: &str) -> CliResult<(i64, i64)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("--range must be lo:hi, got {text:?}")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|e| usage(format!("--range: bad lower bound: {e}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|e| usage(format!("--range: bad upper bound: {e}")))?;
    Ok((lo, hi))
}

fn parse_anneal(text: &str) -> CliResult<(f64, f64)> {
    let (t0, cool) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("--anneal must be T0:cooling, got {text:?}")))?;
    let t0: f64 = t0
        .trim()
        .parse()
        .map_err(|e| usage(format!("--anneal: bad temperature: {e}")))?;
    let cool: f64 = cool
        .trim()
        .parse()
        .map_err(|e| usage(format!("--anneal: bad cooling factor: {e}")))?;
    Ok((t0, cool))
}
