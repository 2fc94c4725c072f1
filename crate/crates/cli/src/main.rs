use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ote_cli::bench::{bench, write_csv, BenchOptions};
use ote_cli::input::{Input, InputKind};
use ote_cli::verify::{verify, Coverage};
use ote_core::cutting::DEFAULT_R;
use ote_core::encoder::EncodeOptions;
use ote_decoder::Encoding;

#[derive(Parser)]
#[command(name = "ote", version, about = "Compact order type encodings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Params {
    /// Cutting branching parameter.
    #[arg(long, default_value_t = DEFAULT_R)]
    r: u64,
    /// Leaf threshold; defaults to a function of n and the mode.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a points file or wiring diagram.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = InputKind::Auto)]
        mode: InputKind,
    },
    /// Orientation of three 1-based labels.
    Query {
        encoding: PathBuf,
        a: u64,
        b: u64,
        c: u64,
        #[arg(long)]
        trace: bool,
    },
    /// Compare an encoding against brute force on its input.
    Verify {
        input: PathBuf,
        encoding: PathBuf,
        #[arg(long, conflicts_with = "samples")]
        all: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = InputKind::Auto)]
        mode: InputKind,
    },
    /// Size breakdown of an encoding.
    Stats { encoding: PathBuf },
    /// Encode random point sets and write one CSV row per set.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [256u64, 512, 1024])]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_R)]
        r: u64,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value_t = 2000)]
        queries: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    ote_cli::init_threads()?;
    match cli.cmd {
        Cmd::Encode { input, output, params, mode } => {
            let data = Input::load(&input, mode)?;
            let opts = EncodeOptions { r: params.r, t: params.t, seed: params.seed, ..EncodeOptions::default() };
            let bytes = ote_cli::encode(&data, &opts)?;
            std::fs::write(&output, &bytes).with_context(|| format!("writing {}", output.display()))?;
            print!("{}", Encoding::parse(&bytes)?.stats()?);
        }
        Cmd::Query { encoding, a, b, c, trace } => {
            let (sign, tr) = ote_cli::query(&read(&encoding)?, [a, b, c])?;
            println!("{}", sign.symbol());
            if trace {
                for s in &tr.steps {
                    match s.relation {
                        Some(rel) => println!("level {} cell {} subcell {:?} {:?}", s.level, s.cell, s.subcell, rel),
                        None => println!("level {} leaf {}", s.level, s.cell),
                    }
                }
                println!("{:?} after {} steps", tr.terminal, tr.step_count());
            }
        }
        Cmd::Verify { input, encoding, all, samples, seed, mode } => {
            let data = Input::load(&input, mode)?;
            let coverage = match samples {
                Some(count) if !all => Coverage::Samples { count, seed },
                _ => Coverage::All,
            };
            let rep = verify(&data, &read(&encoding)?, coverage)?;
            for m in &rep.mismatches {
                let (a, b, c) = m.triple;
                println!("mismatch ({} {} {}): expected {} decoded {}", a + 1, b + 1, c + 1, m.expected, m.decoded);
            }
            println!("{} triples checked, {} zero, {} mismatches", rep.checked, rep.zeros, rep.mismatches.len());
            return Ok(rep.pass());
        }
        Cmd::Stats { encoding } => {
            print!("{}", Encoding::parse(&read(&encoding)?)?.stats()?);
        }
        Cmd::Bench { sizes, trials, seed, r, t, queries, output } => {
            ote_cli::check_params(r, t)?;
            let opts = BenchOptions { sizes, trials, seed, r, t, queries, ..BenchOptions::default() };
            let rows = bench(&opts)?;
            match output {
                Some(p) => write_csv(&rows, std::fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?)?,
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
