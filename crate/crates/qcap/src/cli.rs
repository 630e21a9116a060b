//! Argument parsing and the subcommands.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qcap_core::bounds::{
    coherent_info_channel, hierarchy_report, rains_info, recheck_certificate, regularized_rains,
    HierarchyReport, RegularizedRains, SolverConfig,
};
use qcap_core::channel::QuantumChannel;
use qcap_core::codes::{sc_decay_sweep, CodeFamily};
use qcap_core::divergence::Order;
use qcap_core::report::BoundReport;
use qcap_core::verify::{self, Fault, Suite, SuiteReport, VerifyConfig};
use qcap_core::zoo::ChannelFamily;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::io::{self, ChannelFile, Envelope, SCHEMA_VERSION};

pub const DEFAULT_SEED: u64 = 1729;

/// Overrides `--seed` when set.
pub const SEED_ENV: &str = "QCAP_SEED";

#[derive(Debug, Parser)]
#[command(name = "qcap", version, about = "Capacity bounds and strong-converse certificates for quantum channels")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random start and property sample. QCAP_SEED wins over this.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Random input states per outer ascent.
    #[arg(long, global = true)]
    pub random_starts: Option<usize>,
    /// Random PPT′ restarts per inner solve.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Outer ascent iteration cap.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Outer relative tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Inner relative tolerance.
    #[arg(long, global = true)]
    pub inner_tol: Option<f64>,
    /// Ignore channel symmetries and optimize over all inputs.
    #[arg(long, global = true)]
    pub no_covariance: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One quantity for one channel, as a JSON report with certificates.
    Compute {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, value_enum, default_value_t = QuantityArg::Rains)]
        quantity: QuantityArg,
        /// `limit-1` or a number > 1. Ignored for coherent information.
        #[arg(long, default_value = "limit-1")]
        alpha: Order,
    },
    /// A table over a parameter grid.
    Sweep {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, value_enum)]
        over: SweepOver,
        /// Grid points. For `alpha`, `limit-1` is accepted.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Columns for `--over p`.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [QuantityArg::CoherentInfo, QuantityArg::Rains])]
        quantity: Vec<QuantityArg>,
        /// Order of the Rains column for `--over p`, and of the bound for `--over n`.
        #[arg(long, default_value = "limit-1")]
        alpha: Order,
        /// Code family for `--over n`.
        #[arg(long, value_enum, default_value_t = CodeArg::RateTwo)]
        code: CodeArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Randomized property suites; exit status 3 when any property fails.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Instances per sampled property.
        #[arg(long)]
        samples: Option<usize>,
        /// Projected PPT′ points for the overlap property.
        #[arg(long)]
        overlap_samples: Option<usize>,
        /// Instances for properties that call the Rains solver.
        #[arg(long)]
        solver_samples: Option<usize>,
        /// Plant a known bug to check that the suites catch it.
        #[arg(long, value_enum)]
        inject_fault: Vec<FaultArg>,
    },
    /// I_c, R and R̃_α with the ordering checks.
    Hierarchy {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0])]
        alphas: Vec<f64>,
    },
    /// Writes a zoo channel as a channel file.
    Export {
        #[command(flatten)]
        channel: ChannelArgs,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["zoo", "channel"])))]
pub struct ChannelArgs {
    /// Built-in channel family.
    #[arg(long, value_enum)]
    pub zoo: Option<ZooArg>,
    /// Channel file with Kraus operators.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Dephasing, erasure or depolarizing probability.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Pairwise environment overlap for generalized dephasing.
    #[arg(long)]
    pub overlap: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZooArg {
    Identity,
    Dephasing,
    GeneralizedDephasing,
    Erasure,
    Depolarizing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    CoherentInfo,
    Rains,
    /// `min_l R(N^{⊗l}) / l` over one and two copies.
    RainsRegularized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepOver {
    /// The family's noise parameter (the overlap for generalized dephasing).
    P,
    Alpha,
    /// Number of channel uses of a code family.
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeArg {
    Trivial,
    RateTwo,
    Petz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    PtSign,
}

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const BAD_INPUT: u8 = 1;
    pub const NOT_CONVERGED: u8 = 2;
    pub const VERIFY_FAILED: u8 = 3;
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::BAD_INPUT)
        }
    }
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    let seed = resolve_seed(cli.common.seed, std::env::var(SEED_ENV).ok().as_deref())?;
    let cfg = solver_config(&cli.common)?;
    let out = cli.common.output.as_deref();
    match &cli.command {
        Command::Compute {
            channel,
            quantity,
            alpha,
        } => {
            let n = channel.build(None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if *quantity == QuantityArg::RainsRegularized {
                let report = regularized_rains(&n, &cfg, &mut rng)?;
                let converged = report.converged;
                let body = RegularizedBody {
                    channel: n.name(),
                    config: &cfg,
                    report,
                };
                io::emit(out, &io::to_json(&envelope("compute", seed, body))?)?;
                return Ok(if converged { exit::OK } else { exit::NOT_CONVERGED });
            }
            let report = compute(&n, *quantity, *alpha, &cfg, &mut rng)?;
            let recheck_value = recheck_certificate(&n, &report)?;
            let converged = report.converged;
            let body = ComputeBody {
                channel: n.name(),
                config: &cfg,
                report,
                recheck_value,
            };
            io::emit(out, &io::to_json(&envelope("compute", seed, body))?)?;
            Ok(if converged { exit::OK } else { exit::NOT_CONVERGED })
        }
        Command::Sweep {
            channel,
            over,
            values,
            quantity,
            alpha,
            code,
            format,
        } => {
            let table = sweep(channel, *over, values, quantity, *alpha, *code, &cfg, seed)?;
            let text = match format {
                Format::Csv => table.to_csv()?,
                Format::Json => io::to_json(&envelope("sweep", seed, &table))?,
            };
            io::emit(out, &text)?;
            Ok(if table.converged { exit::OK } else { exit::NOT_CONVERGED })
        }
        Command::Verify {
            suite,
            samples,
            overlap_samples,
            solver_samples,
            inject_fault,
        } => {
            let mut vcfg = VerifyConfig {
                solver: cfg,
                faults: inject_fault.iter().map(|f| match f {
                    FaultArg::PtSign => Fault::PtSign,
                }).collect(),
                ..VerifyConfig::default()
            };
            if let Some(s) = samples {
                vcfg.samples = *s;
            }
            if let Some(s) = overlap_samples {
                vcfg.overlap_samples = *s;
            }
            if let Some(s) = solver_samples {
                vcfg.solver_samples = *s;
            }
            let suites = if suite == "all" {
                verify::run_all(&vcfg, seed)?
            } else {
                let s: Suite = suite
                    .parse()
                    .map_err(|_| anyhow!("unknown suite '{suite}' (expected all or one of {})", suite_names()))?;
                vec![verify::run_suite(s, &vcfg, seed)?]
            };
            for s in &suites {
                let checks: usize = s.properties.iter().map(|p| p.checked).sum();
                eprintln!(
                    "{} {:<12} {checks} checks",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.suite.as_str()
                );
                for p in s.properties.iter().filter(|p| !p.passed) {
                    eprintln!("     {}: {}/{} failed", p.property, p.failed, p.checked);
                }
            }
            let passed = suites.iter().all(|s| s.passed);
            let body = VerifyBody {
                passed,
                config: &vcfg,
                suites,
            };
            io::emit(out, &io::to_json(&envelope("verify", seed, body))?)?;
            Ok(if passed { exit::OK } else { exit::VERIFY_FAILED })
        }
        Command::Hierarchy { channel, alphas } => {
            let n = channel.build(None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = hierarchy_report(&n, alphas, &cfg, &mut rng)?;
            let converged = report.flags.all_converged;
            let body = HierarchyBody {
                config: &cfg,
                report,
            };
            io::emit(out, &io::to_json(&envelope("hierarchy", seed, body))?)?;
            Ok(if converged { exit::OK } else { exit::NOT_CONVERGED })
        }
        Command::Export { channel } => {
            if channel.channel.is_some() {
                bail!("export takes a --zoo channel");
            }
            let n = channel.build(None)?;
            io::emit(out, &io::to_json(&ChannelFile::from_channel(&n))?)?;
            Ok(exit::OK)
        }
    }
}

fn suite_names() -> String {
    Suite::ALL.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
}

fn envelope<'a, T: Serialize>(command: &'a str, seed: u64, body: T) -> Envelope<'a, T> {
    Envelope {
        schema: SCHEMA_VERSION,
        command,
        seed,
        body,
    }
}

/// `QCAP_SEED` beats `--seed`, which beats [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> anyhow::Result<u64> {
    match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => s
            .parse()
            .with_context(|| format!("{SEED_ENV}={s} is not an unsigned 64-bit integer")),
        None => Ok(flag.unwrap_or(DEFAULT_SEED)),
    }
}

pub fn solver_config(c: &Common) -> anyhow::Result<SolverConfig> {
    let mut cfg = SolverConfig::default();
    if let Some(v) = c.random_starts {
        cfg.random_starts = v;
    }
    if let Some(v) = c.restarts {
        cfg.inner.restarts = v;
    }
    if let Some(v) = c.max_iter {
        if v == 0 {
            bail!("--max-iter must be positive");
        }
        cfg.max_iter = v;
    }
    for (flag, v) in [("--tol", c.tol), ("--inner-tol", c.inner_tol)] {
        if let Some(t) = v {
            if !(t > 0.0 && t.is_finite()) {
                bail!("{flag} must be a positive number, got {t}");
            }
        }
    }
    if let Some(t) = c.tol {
        cfg.tol = t;
    }
    if let Some(t) = c.inner_tol {
        cfg.inner.tol = t;
    }
    cfg.use_covariance = !c.no_covariance;
    Ok(cfg)
}

impl ChannelArgs {
    /// The channel, with the noise parameter replaced by `param` if given.
    pub fn build(&self, param: Option<f64>) -> anyhow::Result<QuantumChannel> {
        if let Some(path) = &self.channel {
            if param.is_some() {
                bail!("a parameter sweep needs a --zoo channel");
            }
            if self.p.is_some() || self.d.is_some() || self.overlap.is_some() {
                bail!("--p, --d and --overlap only apply to --zoo channels");
            }
            return io::load_channel(path);
        }
        let zoo = self.zoo.ok_or_else(|| anyhow!("give --zoo or --channel"))?;
        Ok(self.family(zoo, param)?.build()?)
    }

    fn family(&self, zoo: ZooArg, param: Option<f64>) -> anyhow::Result<ChannelFamily> {
        let need_p = || {
            param
                .or(self.p)
                .ok_or_else(|| anyhow!("--zoo {} needs --p", zoo_name(zoo)))
        };
        let fam = match zoo {
            ZooArg::Identity => {
                if param.is_some() {
                    bail!("the identity channel has no noise parameter to sweep");
                }
                ChannelFamily::Identity {
                    d: self.d.unwrap_or(2),
                }
            }
            ZooArg::Dephasing => {
                if self.d.is_some_and(|d| d != 2) {
                    bail!("dephasing is a qubit channel; use generalized-dephasing for d > 2");
                }
                ChannelFamily::QubitDephasing { p: need_p()? }
            }
            ZooArg::GeneralizedDephasing => ChannelFamily::GeneralizedDephasing {
                env_states: None,
                d: Some(self.d.unwrap_or(3)),
                overlap: Some(
                    param
                        .or(self.overlap)
                        .ok_or_else(|| anyhow!("--zoo generalized-dephasing needs --overlap"))?,
                ),
            },
            ZooArg::Erasure => ChannelFamily::Erasure {
                d: self.d.unwrap_or(2),
                p: need_p()?,
            },
            ZooArg::Depolarizing => ChannelFamily::Depolarizing {
                d: self.d.unwrap_or(2),
                q: need_p()?,
            },
        };
        Ok(fam)
    }
}

fn zoo_name(z: ZooArg) -> &'static str {
    match z {
        ZooArg::Identity => "identity",
        ZooArg::Dephasing => "dephasing",
        ZooArg::GeneralizedDephasing => "generalized-dephasing",
        ZooArg::Erasure => "erasure",
        ZooArg::Depolarizing => "depolarizing",
    }
}

fn compute(
    n: &QuantumChannel,
    quantity: QuantityArg,
    alpha: Order,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<BoundReport> {
    Ok(match quantity {
        QuantityArg::CoherentInfo => coherent_info_channel(n, cfg, rng)?,
        QuantityArg::Rains => rains_info(n, alpha, cfg, rng)?,
        QuantityArg::RainsRegularized => bail!("rains-regularized has no single-report form"),
    })
}

/// Value and convergence of one table cell.
fn cell(
    n: &QuantumChannel,
    quantity: QuantityArg,
    alpha: Order,
    cfg: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<(f64, bool)> {
    if quantity == QuantityArg::RainsRegularized {
        let r = regularized_rains(n, cfg, rng)?;
        return Ok((r.value, r.converged));
    }
    let r = compute(n, quantity, alpha, cfg, rng)?;
    Ok((r.value, r.converged))
}

/// Generator for grid point `i`, so each row is reproducible on its own.
fn point_rng(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[derive(Serialize)]
struct ComputeBody<'a> {
    channel: &'a str,
    config: &'a SolverConfig,
    report: BoundReport,
    /// Divergence recomputed at the PPT′ certificate.
    recheck_value: Option<f64>,
}

#[derive(Serialize)]
struct RegularizedBody<'a> {
    channel: &'a str,
    config: &'a SolverConfig,
    report: RegularizedRains,
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    passed: bool,
    config: &'a VerifyConfig,
    suites: Vec<SuiteReport>,
}

#[derive(Serialize)]
struct HierarchyBody<'a> {
    config: &'a SolverConfig,
    report: HierarchyReport,
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub converged: bool,
}

impl Table {
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(x.to_string()), Value::Number)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    channel: &ChannelArgs,
    over: SweepOver,
    values: &[String],
    quantities: &[QuantityArg],
    alpha: Order,
    code: CodeArg,
    cfg: &SolverConfig,
    seed: u64,
) -> anyhow::Result<Table> {
    let mut converged = true;
    let mut rows = Vec::new();
    let columns: Vec<String> = match over {
        SweepOver::P => {
            if quantities.is_empty() {
                bail!("--quantity must name at least one column");
            }
            let label = match channel.zoo {
                Some(ZooArg::GeneralizedDephasing) => "overlap",
                _ => "p",
            };
            let mut cols = vec![label.to_string()];
            for q in quantities {
                cols.push(match q {
                    QuantityArg::CoherentInfo => "coherent_info".to_string(),
                    QuantityArg::Rains => rains_column(alpha),
                    QuantityArg::RainsRegularized => "rains_regularized".to_string(),
                });
            }
            for (i, v) in values.iter().enumerate() {
                let p = parse_value(v)?;
                let n = channel.build(Some(p))?;
                let mut rng = point_rng(seed, i);
                let mut row = vec![num(p)];
                for q in quantities {
                    let (value, ok) = cell(&n, *q, alpha, cfg, &mut rng)?;
                    converged &= ok;
                    row.push(num(value));
                }
                rows.push(row);
            }
            cols
        }
        SweepOver::Alpha => {
            let n = channel.build(None)?;
            for (i, v) in values.iter().enumerate() {
                let order: Order = v.parse()?;
                let r = rains_info(&n, order, cfg, &mut point_rng(seed, i))?;
                converged &= r.converged;
                let label = match order {
                    Order::LimitOne => Value::String("limit-1".into()),
                    Order::Renyi(a) => num(a),
                };
                rows.push(vec![label, num(r.value)]);
            }
            vec!["alpha".into(), "rains".into()]
        }
        SweepOver::N => {
            let Order::Renyi(a) = alpha else {
                bail!("--over n needs --alpha > 1 for the one-shot bound");
            };
            let n = channel.build(None)?;
            let family = match code {
                CodeArg::Trivial => CodeFamily::Trivial,
                CodeArg::RateTwo => CodeFamily::RateTwo,
                CodeArg::Petz => CodeFamily::Petz,
            };
            let uses = values
                .iter()
                .map(|v| v.trim().parse::<usize>().with_context(|| format!("'{v}' is not a number of uses")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let n_max = uses.iter().copied().max().unwrap_or(0);
            if uses.contains(&0) {
                bail!("uses must be at least 1");
            }
            let single = rains_info(&n, Order::Renyi(a), cfg, &mut point_rng(seed, 0))?;
            converged &= single.converged;
            let all = sc_decay_sweep(|k| family.build(&n, k), &n, n_max, a, single.value)?;
            for k in uses {
                let r = &all[k - 1];
                rows.push(vec![
                    Value::from(r.n),
                    num(r.log_m),
                    num(r.fidelity),
                    num(r.bound),
                    num(r.empirical_exponent),
                ]);
            }
            ["n", "log_m", "fidelity", "bound", "empirical_exponent"]
                .map(String::from)
                .to_vec()
        }
    };
    Ok(Table {
        columns,
        rows,
        converged,
    })
}

fn rains_column(alpha: Order) -> String {
    match alpha {
        Order::LimitOne => "rains".into(),
        Order::Renyi(a) => format!("renyi_rains_{a}"),
    }
}

fn parse_value(v: &str) -> anyhow::Result<f64> {
    let x: f64 = v.trim().parse().with_context(|| format!("'{v}' is not a number"))?;
    if !x.is_finite() {
        bail!("'{v}' is not finite");
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert_eq!(resolve_seed(Some(5), None).unwrap(), 5);
        assert_eq!(resolve_seed(Some(5), Some("9")).unwrap(), 9);
        assert_eq!(resolve_seed(Some(5), Some("")).unwrap(), 5);
        assert!(resolve_seed(None, Some("x")).is_err());
    }

    #[test]
    fn parses_examples() {
        let cli = Cli::try_parse_from([
            "qcap", "compute", "--zoo", "dephasing", "--p", "0.2", "--quantity", "rains", "--alpha", "limit-1",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Compute { alpha: Order::LimitOne, .. }));
        let cli = Cli::try_parse_from(["qcap", "verify", "--suite", "dpi", "--samples", "200"]).unwrap();
        assert!(matches!(cli.command, Command::Verify { samples: Some(200), .. }));
        let cli = Cli::try_parse_from([
            "qcap", "sweep", "--zoo", "erasure", "--over", "p", "--values", "0,0.5", "--seed", "3",
        ])
        .unwrap();
        assert_eq!(cli.common.seed, Some(3));
        assert!(Cli::try_parse_from(["qcap", "compute", "--zoo", "erasure", "--channel", "x.json"]).is_err());
        assert!(Cli::try_parse_from(["qcap", "compute"]).is_err());
        assert!(Cli::try_parse_from(["qcap", "compute", "--zoo", "erasure", "--alpha", "0.5"]).is_err());
    }

    #[test]
    fn solver_flags() {
        let cli = Cli::try_parse_from([
            "qcap", "hierarchy", "--zoo", "identity", "--random-starts", "1", "--restarts", "0", "--no-covariance",
        ])
        .unwrap();
        let cfg = solver_config(&cli.common).unwrap();
        assert_eq!(cfg.random_starts, 1);
        assert_eq!(cfg.inner.restarts, 0);
        assert!(!cfg.use_covariance);
        let cli = Cli::try_parse_from(["qcap", "hierarchy", "--zoo", "identity", "--tol=-1"]).unwrap();
        assert!(solver_config(&cli.common).is_err());
    }

    #[test]
    fn zoo_parameters() {
        let args = |zoo, p, d, overlap| ChannelArgs {
            zoo: Some(zoo),
            channel: None,
            p,
            d,
            overlap,
        };
        assert_eq!(args(ZooArg::Erasure, Some(0.25), None, None).build(None).unwrap().d_out(), 3);
        assert!(args(ZooArg::Erasure, None, None, None).build(None).is_err());
        assert!(args(ZooArg::Dephasing, Some(0.1), Some(3), None).build(None).is_err());
        assert_eq!(args(ZooArg::GeneralizedDephasing, None, None, Some(0.5)).build(None).unwrap().d_in(), 3);
        assert!(args(ZooArg::Identity, None, None, None).build(Some(0.1)).is_err());
        assert!(args(ZooArg::Dephasing, Some(1.5), None, None).build(None).is_err());
    }
}
