use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cliffverify::integrate::StokesTheorem;
use cliffverify::moebius::MapClass;
use cliffverify::operators::OperatorTag;
use cliffverify::poly::PolynomialJson;
use cliffverify::spaces::{harmonic_basis, monogenic_basis};
use cliffverify::verify::{self, CheckReport, RunConfig, SuiteReport};
use cliffverify::{MVPolynomial, Side};

#[derive(Parser)]
#[command(name = "cliffverify", version, about = "Exact verification of Rarita-Schwinger identities in Clifford analysis")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "CLIFFVERIFY_FORMAT")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, env = "CLIFFVERIFY_OUT")]
    out: Option<PathBuf>,
    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 1, env = "CLIFFVERIFY_SEED")]
    seed: u64,
    /// Random inputs per check.
    #[arg(long, global = true, default_value_t = 3, env = "CLIFFVERIFY_TRIALS")]
    trials: usize,
    /// Worker threads for `suite`.
    #[arg(long, global = true, env = "CLIFFVERIFY_WORKERS")]
    workers: Option<usize>,
    /// Replace the projection constant m+2k-2 by m+2k-1 (mutation testing).
    #[arg(long, global = true, hide = true, env = "CLIFFVERIFY_MUTATE_PROJECTION")]
    mutate_projection: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Harmonic,
    LeftMonogenic,
    RightMonogenic,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks of H_k, M_k and M_(k-1).
    Dims {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4], env = "CLIFFVERIFY_M")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2], env = "CLIFFVERIFY_K")]
        k: Vec<u32>,
    },
    /// Basis of a polynomial space as JSON.
    Basis {
        #[arg(long, env = "CLIFFVERIFY_M")]
        m: usize,
        #[arg(long, env = "CLIFFVERIFY_K")]
        k: u32,
        #[arg(long, value_enum, default_value_t = Kind::Harmonic)]
        kind: Kind,
    },
    /// Run one check.
    #[command(subcommand)]
    Check(Check),
    /// Run every check over a grid of (m, k).
    Suite {
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4], env = "CLIFFVERIFY_M")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2], env = "CLIFFVERIFY_K")]
        k: Vec<u32>,
    },
    /// Apply rk, tk, tkstar or qk to a polynomial given as JSON.
    Apply {
        #[arg(long)]
        op: OperatorTag,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[arg(long, env = "CLIFFVERIFY_M")]
        m: usize,
        #[arg(long, env = "CLIFFVERIFY_K")]
        k: u32,
        /// JSON file with the polynomial; `-` reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Args)]
struct MK {
    #[arg(long, default_value_t = 3, env = "CLIFFVERIFY_M")]
    m: usize,
    #[arg(long, default_value_t = 1, env = "CLIFFVERIFY_K")]
    k: u32,
}

#[derive(Subcommand)]
enum Check {
    Counterexample {
        #[arg(long, default_value_t = 3, env = "CLIFFVERIFY_M")]
        m: usize,
    },
    Conformal(MK),
    Intertwine {
        #[arg(long)]
        map: MapClass,
        #[command(flatten)]
        mk: MK,
    },
    Stokes {
        #[arg(long)]
        theorem: StokesTheorem,
        #[command(flatten)]
        mk: MK,
    },
    SteinWeiss(MK),
    Almansi(MK),
    BasisRanks(MK),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn config(g: &Global, m: Vec<usize>, k: Vec<u32>) -> RunConfig {
    RunConfig { m_values: m, k_values: k, seed: g.seed, trials: g.trials, workers: g.workers, mutate_projection: g.mutate_projection }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Dims { m, k } => {
            let rows = verify::dims_table(&m, &k)?;
            let text = match g.format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Text => {
                    let mut s = String::from("m k  dim H_k(scalar)  dim H_k  dim M_k  dim M_(k-1)\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{} {}  {:>16}  {:>7}  {:>7}  {:>11}\n",
                            r.m, r.k, r.harmonic_scalar, r.harmonic, r.monogenic, r.monogenic_lower
                        ));
                    }
                    s
                }
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Basis { m, k, kind } => {
            let basis = match kind {
                Kind::Harmonic => harmonic_basis(m, k)?,
                Kind::LeftMonogenic => monogenic_basis(m, k, Side::Left)?,
                Kind::RightMonogenic => monogenic_basis(m, k, Side::Right)?,
            };
            let text = match g.format {
                Format::Json => serde_json::to_string_pretty(&basis.to_json())?,
                Format::Text => {
                    let mut s = String::new();
                    for p in &basis.elements {
                        s.push_str(&format!("{p}\n"));
                    }
                    s
                }
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Apply { op, side, m, k, input } => {
            let raw = if input == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(&input).with_context(|| format!("reading {input}"))?
            };
            let json: PolynomialJson = serde_json::from_str(&raw).context("parsing polynomial JSON")?;
            let f = MVPolynomial::from_json(&json)?;
            let cfg = config(g, vec![m], vec![k]);
            let out = verify::cmd_apply(op, side.into(), m, k, &f, &cfg)?;
            let text = match g.format {
                Format::Json => serde_json::to_string_pretty(&out.to_json())?,
                Format::Text => format!("{out}\n"),
            };
            emit(g, &text)?;
            Ok(true)
        }
        Command::Suite { m, k } => {
            let cfg = config(g, m, k);
            let suite = verify::cmd_full_suite(&cfg)?;
            emit_suite(g, &suite)
        }
        Command::Check(check) => {
            let (cfg, report) = run_check(g, check)?;
            emit_suite(g, &SuiteReport::new(cfg, vec![report]))
        }
    }
}

fn run_check(g: &Global, check: Check) -> anyhow::Result<(RunConfig, CheckReport)> {
    let one = |mk: &MK| config(g, vec![mk.m], vec![mk.k]);
    Ok(match check {
        Check::Counterexample { m } => {
            let cfg = config(g, vec![m], vec![1]);
            let r = verify::cmd_counterexample(m, &cfg)?;
            (cfg, r)
        }
        Check::Conformal(mk) => {
            if mk.m < 3 {
                bail!("conformal checks need m >= 3");
            }
            let cfg = one(&mk);
            let r = verify::cmd_conformal(mk.m, mk.k, &cfg);
            (cfg, r)
        }
        Check::Intertwine { map, mk } => {
            let cfg = one(&mk);
            let r = verify::cmd_intertwine(map, mk.m, mk.k, &cfg);
            (cfg, r)
        }
        Check::Stokes { theorem, mk } => {
            let cfg = one(&mk);
            let r = verify::cmd_stokes(theorem, mk.m, mk.k, &cfg);
            (cfg, r)
        }
        Check::SteinWeiss(mk) => {
            let cfg = one(&mk);
            let r = verify::cmd_stein_weiss(mk.m, mk.k, &cfg);
            (cfg, r)
        }
        Check::Almansi(mk) => {
            let cfg = one(&mk);
            let r = verify::cmd_almansi(mk.m, mk.k, &cfg);
            (cfg, r)
        }
        Check::BasisRanks(mk) => {
            let cfg = one(&mk);
            let r = verify::cmd_basis_ranks(mk.m, mk.k);
            (cfg, r)
        }
    })
}

fn emit_suite(g: &Global, suite: &SuiteReport) -> anyhow::Result<bool> {
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(suite)?,
        Format::Text => {
            let mut s = verify::render_text(&suite.reports);
            s.push_str(&format!("{} passed, {} failed\n", suite.passed, suite.failed));
            s
        }
    };
    emit(g, &text)?;
    Ok(suite.all_pass)
}

fn emit(g: &Global, text: &str) -> anyhow::Result<()> {
    match &g.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}
