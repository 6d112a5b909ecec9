use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use amrs_cli::{api, evaluate, ingest, score, synth_market, CliError, EvalMode, Overrides, RunConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "amrs", version, about = "Social/market manipulation-risk scoring pipeline")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Run configuration (TOML).
    #[arg(long, global = true, env = "AMRS_CONFIG", default_value = "amrs.toml")]
    config: PathBuf,
    /// Overrides `paths.data_root`.
    #[arg(long, global = true, env = "AMRS_DATA_ROOT")]
    data_root: Option<PathBuf>,
    /// Overrides the synthetic-corpus seed.
    #[arg(long, global = true, env = "AMRS_SEED")]
    seed: Option<u64>,
    /// Comma-separated ticker list replacing `tickers`.
    #[arg(long, global = true, env = "AMRS_TICKERS", value_delimiter = ',')]
    tickers: Option<Vec<String>>,
    /// Overrides the operating (alert) threshold.
    #[arg(long, global = true, env = "AMRS_THRESHOLD")]
    threshold: Option<f64>,
    /// Weight overrides, e.g. `vol=0.3,sent=0.1,...`.
    #[arg(long, global = true, env = "AMRS_WEIGHTS")]
    weights: Option<String>,
    #[arg(long, global = true, env = "AMRS_MODEL_VERSION")]
    model_version: Option<String>,
    #[arg(long, global = true, env = "AMRS_PREDICTION_LOG")]
    prediction_log: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load bars, generate post corpora and write the raw_social, market and fused stages.
    Ingest,
    /// Score the fused stage and write the scored stage.
    Score,
    /// Write evaluation reports.
    Evaluate {
        #[arg(long, value_enum)]
        mode: EvalMode,
    },
    /// Serve the read-only JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Write OHLCV CSV fixtures from the scenario file's market tables.
    SynthMarket {
        #[arg(long)]
        force: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let overrides = Overrides {
        data_root: g.data_root,
        seed: g.seed,
        tickers: g.tickers,
        threshold: g.threshold,
        model_version: g.model_version,
        prediction_log: g.prediction_log,
        weights: g.weights,
    };
    let cfg = RunConfig::load(&g.config, &overrides)?;
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Ingest => ingest(&cfg, &mut stdout),
        Command::Score => score(&cfg, &mut stdout),
        Command::Evaluate { mode } => evaluate(&cfg, mode, &mut stdout),
        Command::SynthMarket { force } => synth_market(&cfg, force, &mut stdout),
        Command::Serve { port, host } => {
            drop(stdout);
            let rt = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
                path: PathBuf::from("<runtime>"),
                source,
            })?;
            let addr = SocketAddr::new(host, port);
            rt.block_on(api::serve(cfg, addr)).map_err(|source| CliError::Io {
                path: PathBuf::from(addr.to_string()),
                source,
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
