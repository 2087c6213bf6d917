use std::io::{Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

use arrangeline_cli::api;
use arrangeline_cli::ops::{self, DrawOptions, Failure};
use arrangeline_core::{to_svg, ArrangementGraph, GridDrawing};

/// Pseudoline arrangement graphs: recognition, grid drawing, universal point
/// sets and greedy embedding.
///
/// Graphs are read as `{"n": <int>, "edges": [[u, v], ...]}` from FILE or
/// standard input. Exit status: 0 on success, 1 when the input is rejected,
/// 2 on usage errors or malformed input.
#[derive(Parser)]
#[command(name = "arrangeline", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random arrangement of lines in general position.
    Generate {
        #[arg(long, conflicts_with = "level", required_unless_present = "level")]
        lines: Option<usize>,
        /// Planarity level i, which uses i + 3 lines.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recognize an arrangement graph and print its structure.
    Recognize { file: Option<PathBuf> },
    /// Grid drawing of height ℓ-1 and width κ of the wiring diagram.
    Draw {
        file: Option<PathBuf>,
        /// Use the narrowest drawing over all valid cuts.
        #[arg(long, conflicts_with = "cut")]
        optimize_cuts: bool,
        #[arg(long)]
        cut: Option<usize>,
        /// Multiply x coordinates by this factor.
        #[arg(long)]
        stretch: Option<i64>,
        #[arg(long)]
        svg: bool,
        /// Pixels per grid cell in SVG output.
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        scale: u32,
    },
    /// Universal point set for ℓ pseudolines.
    Upset {
        #[arg(long = "l", required_unless_present = "embed")]
        l: Option<usize>,
        /// Row width cap; defaults to the least W with W³ ≥ 8ℓ⁴.
        #[arg(long)]
        cap: Option<u64>,
        /// Draw this graph and place it on the point set.
        #[arg(long)]
        embed: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        scale: u32,
    },
    /// Embed by greedy ear decomposition and print the plan.
    SolveGreedy {
        file: Option<PathBuf>,
        #[arg(long)]
        start: Option<usize>,
    },
    /// Size, level and drawing statistics.
    Stats { file: Option<PathBuf> },
    /// Check a drawing for crossings; exits 1 if it is not planar.
    Verify {
        #[arg(long)]
        drawing: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "ARRANGELINE_BIND", default_value = "127.0.0.1")]
        bind: IpAddr,
        #[arg(long, env = "ARRANGELINE_PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string(v).map_err(|e| Failure::internal("SERIALIZE", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn read_input(file: Option<&PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(file: Option<&PathBuf>) -> Result<T, Failure> {
    let text = read_input(file).map_err(|e| Failure::input("IO", format!("{e:#}")))?;
    ops::parse(&text)
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Generate { lines, level, seed } => json(&ops::generate(lines, level, seed)?),
        Command::Recognize { file } => {
            let g: ArrangementGraph = read_json(file.as_ref())?;
            json(&ops::recognize_graph(&g)?)
        }
        Command::Draw {
            file,
            optimize_cuts,
            cut,
            stretch,
            svg,
            scale,
        } => {
            let g: ArrangementGraph = read_json(file.as_ref())?;
            let opts = DrawOptions {
                optimize_cuts,
                cut,
                stretch,
            };
            let (d, _) = ops::draw_graph(&g, opts)?;
            if svg {
                Ok(to_svg(&d, scale))
            } else {
                json(&d)
            }
        }
        Command::Upset {
            l,
            cap,
            embed,
            svg,
            scale,
        } => match embed {
            Some(path) => {
                let g: ArrangementGraph = read_json(Some(&path))?;
                let e = ops::embed_graph(&g, cap, DrawOptions::default())?;
                if svg {
                    Ok(to_svg(&e.drawing, scale))
                } else {
                    json(&e)
                }
            }
            None => {
                let ups = ops::upset(l.expect("required without --embed"), cap)?;
                if svg {
                    Ok(arrangeline_core::upset::to_svg(&ups, scale))
                } else {
                    json(&ups)
                }
            }
        },
        Command::SolveGreedy { file, start } => {
            let g: ArrangementGraph = read_json(file.as_ref())?;
            json(&ops::solve_plan(&g, start)?)
        }
        Command::Stats { file } => {
            let g: ArrangementGraph = read_json(file.as_ref())?;
            json(&ops::stats(&g)?)
        }
        Command::Verify { drawing } => {
            let d: GridDrawing = read_json(Some(&drawing))?;
            let report = ops::verify_drawing(&d);
            if report.is_planar() {
                json(&report)
            } else {
                Err(Failure::Rejected(ops::ApiError {
                    code: "NOT_PLANAR_DRAWING".into(),
                    message: format!("{} violations", report.violation_count()),
                    witness: serde_json::to_value(&report).ok(),
                }))
            }
        }
        Command::Serve { .. } => unreachable!("handled in main"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Serve { bind, port } = cli.command {
        let rt = match tokio::runtime::Runtime::new() {
            Ok(rt) => rt,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
        return match rt.block_on(api::serve(SocketAddr::new(bind, port))) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            eprintln!("{}", serde_json::to_string(f.error()).expect("errors serialize"));
            match f {
                Failure::Input(_) => ExitCode::from(2),
                Failure::Rejected(_) | Failure::Internal(_) => ExitCode::from(1),
            }
        }
    }
}
