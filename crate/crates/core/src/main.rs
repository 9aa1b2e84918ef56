use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use qgec::decoders::{serve_connection, Decoder, Endpoint};
use qgec::harness::{
    code_info, evaluate_predictions, generate_dataset, run_sweep_with, CodeBundle, CodeId, DecoderId, PSource,
    SweepConfig, CSV_HEADER,
};
use qgec::{Error, Result};

#[derive(Parser)]
#[command(name = "qgec", version, about = "Quantum Golay code simulator and decoder harness")]
#[command(propagate_version = true, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// inspect a code
    Code {
        #[command(subcommand)]
        command: CodeCommands,
    },
    /// generate syndrome/label datasets
    Dataset {
        #[command(subcommand)]
        command: DatasetCommands,
    },
    /// Monte Carlo logical error rate sweep over a p grid
    Sweep(SweepArgs),
    /// score a predictions file against a dataset
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// answer decoding requests over the line protocol (stdin/stdout unless --listen)
    Serve {
        #[arg(long)]
        code: CodeId,
        /// table or match; defaults to the code's native decoder
        #[arg(long)]
        decoder: Option<DecoderId>,
        /// tcp://host:port or unix:/path
        #[arg(long)]
        listen: Option<String>,
        /// exit after the first connection closes
        #[arg(long)]
        once: bool,
    },
}

#[derive(Subcommand)]
enum CodeCommands {
    /// print n, k, verified distance, generator count and weights
    Info {
        id: CodeId,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum DatasetCommands {
    Gen {
        #[arg(long)]
        code: CodeId,
        /// fixed physical error rate
        #[arg(long, conflicts_with = "p_grid", required_unless_present = "p_grid")]
        p: Option<f64>,
        /// per-record p drawn uniformly from MIN:MAX:STEP
        #[arg(long)]
        p_grid: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    code: CodeId,
    /// table, match or external:<command | tcp://host:port | unix:/path>
    #[arg(long)]
    decoder: Option<DecoderId>,
    #[arg(long, default_value_t = 0.001)]
    p_min: f64,
    #[arg(long, default_value_t = 0.05)]
    p_max: f64,
    #[arg(long, default_value_t = 0.001)]
    p_step: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; a JSON sidecar with the same stem is written next to it
    #[arg(long)]
    out: PathBuf,
}

fn parse_grid(s: &str) -> Result<PSource> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|x| x.parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Config(format!("--p-grid expects MIN:MAX:STEP, got {s:?}")))?;
    match nums.as_slice() {
        [min, max, step] => Ok(PSource::Grid {
            min: *min,
            max: *max,
            step: *step,
        }),
        _ => Err(Error::Config(format!("--p-grid expects MIN:MAX:STEP, got {s:?}"))),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn sweep(args: SweepArgs) -> Result<()> {
    let config = SweepConfig {
        code: args.code,
        decoder: args.decoder,
        p_min: args.p_min,
        p_max: args.p_max,
        p_step: args.p_step,
        trials: args.trials,
        eta: args.eta,
        seed: args.seed,
    };
    config.validate()?;
    let bundle = config.code.build()?;
    let decoder_id = config.decoder.clone().unwrap_or_else(|| bundle.default_decoder());
    let decoder = bundle.decoder(&decoder_id)?;

    let mut csv = BufWriter::new(File::create(&args.out)?);
    writeln!(csv, "{CSV_HEADER}")?;
    csv.flush()?;
    let result = run_sweep_with(&bundle, decoder.as_ref(), &config, |point| {
        writeln!(csv, "{}", point.csv_row())?;
        csv.flush()?;
        Ok(())
    });
    drop(decoder);

    let (status, points) = match &result {
        Ok(r) => ("complete".to_string(), r.points.len()),
        Err(Error::SweepAborted { completed, cause }) => (format!("aborted: {cause}"), *completed),
        Err(e) => (format!("failed: {e}"), 0),
    };
    let sidecar = json!({
        "config": config,
        "decoder": decoder_id,
        "code": bundle.id,
        "n": bundle.code.num_qubits(),
        "n_syndrome": bundle.code.syndrome_len(),
        "n_label": bundle.code.label_len(),
        "points": points,
        "status": status,
        "csv": args.out.file_name().map(|n| n.to_string_lossy().into_owned()),
        "failure_rule": "a shot fails when the residual is not a stabilizer; logical Y counts once",
    });
    let mut side = BufWriter::new(File::create(sidecar_path(&args.out))?);
    serde_json::to_writer_pretty(&mut side, &sidecar)?;
    writeln!(side)?;
    side.flush()?;
    result.map(|r| {
        println!("wrote {} points to {}", r.points.len(), args.out.display());
    })
}

fn serve(code: CodeId, decoder: Option<DecoderId>, listen: Option<String>, once: bool) -> Result<()> {
    let bundle: CodeBundle = code.build()?;
    let id = decoder.unwrap_or_else(|| bundle.default_decoder());
    if matches!(id, DecoderId::External(_)) {
        return Err(Error::Config(
            "serve needs an in-process decoder (table or match)".into(),
        ));
    }
    let dec = bundle.decoder(&id)?;
    let Some(listen) = listen else {
        let stdin = io::stdin();
        let stdout = io::stdout();
        let mut reader = stdin.lock();
        let mut writer = stdout.lock();
        serve_connection(dec.as_ref(), &bundle.code, &mut reader, &mut writer)?;
        return Ok(());
    };
    match Endpoint::parse(&listen)? {
        Endpoint::Tcp(addr) => {
            let listener = std::net::TcpListener::bind(&addr)?;
            announce(&format!("tcp://{}", listener.local_addr()?))?;
            for stream in listener.incoming() {
                let stream = stream?;
                stream.set_nodelay(true)?;
                let mut reader = BufReader::new(stream.try_clone()?);
                let mut writer = stream;
                session(dec.as_ref(), &bundle, &mut reader, &mut writer);
                if once {
                    break;
                }
            }
            Ok(())
        }
        #[cfg(unix)]
        Endpoint::Unix(path) => {
            let listener = std::os::unix::net::UnixListener::bind(&path)?;
            announce(&format!("unix:{}", path.display()))?;
            for stream in listener.incoming() {
                let stream = stream?;
                let mut reader = BufReader::new(stream.try_clone()?);
                let mut writer = stream;
                session(dec.as_ref(), &bundle, &mut reader, &mut writer);
                if once {
                    break;
                }
            }
            let _ = std::fs::remove_file(&path);
            Ok(())
        }
        _ => Err(Error::Config(format!(
            "--listen expects tcp://host:port or unix:/path, got {listen:?}"
        ))),
    }
}

fn announce(addr: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "LISTENING {addr}")?;
    out.flush()?;
    Ok(())
}

fn session(dec: &dyn Decoder, bundle: &CodeBundle, reader: &mut dyn io::BufRead, writer: &mut dyn Write) {
    if let Err(e) = serve_connection(dec, &bundle.code, reader, writer) {
        eprintln!("qgec serve: {e}");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Commands::Code {
            command: CodeCommands::Info { id, json },
        } => {
            let info = code_info(id)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&info)?);
            } else {
                print!("{info}");
            }
            Ok(())
        }
        Commands::Dataset {
            command:
                DatasetCommands::Gen {
                    code,
                    p,
                    p_grid,
                    eta,
                    count,
                    seed,
                    out,
                },
        } => {
            let source = match (p, p_grid) {
                (Some(p), _) => PSource::Fixed(p),
                (None, Some(g)) => parse_grid(&g)?,
                (None, None) => return Err(Error::Config("one of --p or --p-grid is required".into())),
            };
            let header = generate_dataset(code, source, eta, count, seed, &out)?;
            println!(
                "wrote {} records for {} to {}",
                header.count,
                header.code,
                out.display()
            );
            Ok(())
        }
        Commands::Sweep(args) => sweep(args),
        Commands::Eval {
            dataset,
            predictions,
            json,
        } => {
            let report = evaluate_predictions(&dataset, &predictions)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                let t = &report.tally;
                println!("code: {}", report.dataset.code);
                println!("records: {}", t.trials);
                println!("logical failures: {}", t.failures);
                println!(
                    "logical error rate: {} [{}, {}]",
                    report.rate, report.ci_low, report.ci_high
                );
                println!(
                    "breakdown: x={} z={} y={} inconsistent={}",
                    t.fail_x, t.fail_z, t.fail_y, t.inconsistent
                );
            }
            Ok(())
        }
        Commands::Serve {
            code,
            decoder,
            listen,
            once,
        } => serve(code, decoder, listen, once),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: bad arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
