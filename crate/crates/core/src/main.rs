use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pdbundle::io::{load_bundle, parse_input, save_bundle};
use pdbundle::query::{oracle_diagram, Locator};
use pdbundle::rational::{parse_rational, Point};
use pdbundle::PDBundle;

#[derive(Parser)]
#[command(name = "pdbundle", version, about = "Persistence diagram bundles over triangulated surfaces")]
struct Cli {
    /// error, warn, info, debug or trace
    #[arg(long, global = true, default_value = "warn")]
    log_level: log::LevelFilter,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a bundle archive from an input file
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Keep the arrangement unmerged
        #[arg(long)]
        no_merge: bool,
    },
    /// Print the diagram of a bundle at a point
    Query {
        bundle: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// Print bundle statistics as JSON
    Info { bundle: PathBuf },
    /// Serve a bundle over HTTP
    Serve {
        bundle: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Print the diagram at a point by reducing from scratch
    Oracle {
        input: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let x = parse_rational(x).map_err(|e| e.to_string())?;
    let y = parse_rational(y).map_err(|e| e.to_string())?;
    Ok(Point::new(x, y))
}

fn run(cmd: Command) -> pdbundle::Result<()> {
    match cmd {
        Command::Build { input, output, no_merge } => {
            let f = parse_input(&input)?;
            let opts = pdbundle::BuildOptions {
                merge: !no_merge,
                ..Default::default()
            };
            let b = PDBundle::build_with(f, opts)?;
            let s = b.stats();
            log::info!("built bundle: N={} m={} faces={}", s.n, s.m, s.faces);
            save_bundle(&b, &output)
        }
        Command::Query { bundle, point, dim } => {
            let b = load_bundle(&bundle)?;
            let (_, d) = Locator::new(&b).diagram(&b, &point, dim)?;
            print!("{d}");
            Ok(())
        }
        Command::Info { bundle } => {
            let b = load_bundle(&bundle)?;
            println!("{}", serde_json::to_string_pretty(b.stats()).expect("stats serialize"));
            Ok(())
        }
        Command::Serve { bundle, port } => {
            let b = load_bundle(&bundle)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(pdbundle::service::serve(b, port))?;
            Ok(())
        }
        Command::Oracle { input, point, dim } => {
            let f = parse_input(&input)?;
            print!("{}", oracle_diagram(&f, &point, dim)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::new().filter_level(cli.log_level).init();
    if let Some(n) = std::env::var("PDBUNDLE_THREADS").ok().and_then(|v| v.parse().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size thread pool: {e}");
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

