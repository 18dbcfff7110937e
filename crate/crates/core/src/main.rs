use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use symcensus::census::{census_with_threads, emit, weight_mu, Format};
use symcensus::cm::cm_count;
use symcensus::local::parse_character;
use symcensus::modforms::{dim_cusp, dim_new, DimensionRecord};
use symcensus::weil_deligne::{sym_conductor, WeilDeligneParam};
use symcensus::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "symcensus", version, about = "Conductors of symmetric power lifts, cusp form dimensions and CM counts")]
struct Cli {
    /// `key = value` file with defaults for sweeps (weight, sym, prime, max_i, format, threads).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "SYMCENSUS_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of S_k(Gamma_1(N)).
    Dim {
        #[arg(long)]
        weight: u64,
        #[arg(long)]
        level: u64,
        /// Print the dimension of the new subspace instead.
        #[arg(long)]
        new: bool,
        /// CSV of k,N,dim_full,dim_new for every level up to N.
        #[arg(long)]
        table: bool,
    },
    /// Number of Hecke characters inducing weight-k CM forms of level N.
    CmCount {
        #[arg(long)]
        weight: u64,
        #[arg(long)]
        level: u64,
        /// CSV rows d,norm_m,count.
        #[arg(long)]
        breakdown: bool,
    },
    /// Conductor certificate for sym^n of a local parameter, as JSON.
    SymCond {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        n: u32,
        /// Inducing character over a quadratic extension, e.g. `field=unram;level=2;images=1/8;unif=0`.
        #[arg(long)]
        eta_spec: Option<String>,
        /// Character of Q_p (first principal series character, or the special twist).
        #[arg(long)]
        mu_spec: Option<String>,
        /// Second principal series character.
        #[arg(long)]
        mu2_spec: Option<String>,
    },
    /// Lower-bound census rows for sym^n lifts at level p^{(n+2)i}.
    Census {
        #[arg(long)]
        weight: Option<u64>,
        #[arg(long)]
        sym: Option<u32>,
        /// A prime or a comma-separated list of primes.
        #[arg(long)]
        prime: Option<String>,
        #[arg(long)]
        max_i: Option<u32>,
        #[arg(long)]
        format: Option<String>,
    },
    /// Highest weight of the symmetric n-th power.
    Weights {
        #[arg(long)]
        weight: u64,
        #[arg(long)]
        sym: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Ps,
    Sp,
    Sc,
}

fn read_config(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), no + 1))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn pick<T: std::str::FromStr>(flag: Option<T>, config: &BTreeMap<String, String>, key: &str) -> anyhow::Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(raw) => raw.parse().map_err(|e| anyhow!(Error::InvalidInput(format!("config key {key}: {e}")))),
        None => Err(anyhow!(Error::InvalidInput(format!("missing --{} (no default in config)", key.replace('_', "-"))))),
    }
}

fn parse_primes(s: &str) -> anyhow::Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| anyhow!(Error::InvalidInput(format!("bad prime `{t}`")))))
        .collect()
}

fn need(spec: Option<String>, flag: &str) -> anyhow::Result<String> {
    spec.ok_or_else(|| anyhow!(Error::InvalidInput(format!("--{flag} is required for this variant"))))
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let config = match &cli.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    match cli.command {
        Command::Dim { weight, level, new, table } => {
            if table {
                let mut out = String::from("k,N,dim_full,dim_new\n");
                for n in 1..=level {
                    let r = DimensionRecord::compute(weight, n)?;
                    out += &format!("{},{},{},{}\n", r.k, r.level, r.dim_full, r.dim_new);
                }
                Ok(out)
            } else if new {
                Ok(format!("{}\n", dim_new(weight, level)?))
            } else {
                Ok(format!("{}\n", dim_cusp(weight, level)?))
            }
        }
        Command::CmCount { weight, level, breakdown } => {
            let c = cm_count(weight, level)?;
            if breakdown {
                let mut out = String::from("d,norm_m,count\n");
                for r in &c.breakdown {
                    out += &format!("{},{},{}\n", r.d, r.norm_m, r.count);
                }
                Ok(out)
            } else {
                Ok(format!("{}\n", c.total))
            }
        }
        Command::SymCond { p, variant, n, eta_spec, mu_spec, mu2_spec } => {
            let pi = match variant {
                VariantArg::Ps => WeilDeligneParam::principal_series(
                    parse_character(p, &need(mu_spec, "mu-spec")?)?,
                    parse_character(p, &need(mu2_spec, "mu2-spec")?)?,
                )?,
                VariantArg::Sp => WeilDeligneParam::special(parse_character(p, &need(mu_spec, "mu-spec")?)?)?,
                VariantArg::Sc => WeilDeligneParam::supercuspidal(parse_character(p, &need(eta_spec, "eta-spec")?)?)?,
            };
            let cert = sym_conductor(&pi, n)?;
            let out = serde_json::json!({ "parameter": pi.record(), "certificate": cert });
            Ok(serde_json::to_string_pretty(&out)? + "\n")
        }
        Command::Census { weight, sym, prime, max_i, format } => {
            let k: u64 = pick(weight, &config, "weight")?;
            let n: u32 = pick(sym, &config, "sym")?;
            let primes = parse_primes(&pick(prime, &config, "prime")?)?;
            let i_max: u32 = pick(max_i, &config, "max_i")?;
            let format: Format =
                format.or_else(|| config.get("format").cloned()).unwrap_or_else(|| "csv".into()).parse()?;
            let threads = match cli.threads {
                Some(t) => t,
                None => match config.get("threads") {
                    Some(t) => t.parse().map_err(|_| anyhow!(Error::InvalidInput("config key threads".into())))?,
                    None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
                },
            };
            let rows = census_with_threads(k, n, &primes, i_max, threads)?;
            Ok(emit(&rows, format))
        }
        Command::Weights { weight, sym } => {
            let v = weight_mu(weight, sym)?;
            Ok(serde_json::to_string(&v)? + "\n")
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BoundViolation { .. } | Error::InvariantViolation(_)) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
