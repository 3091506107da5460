use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dezawl::graphs::io;
use dezawl::report::{self, FamilyMember, VerifyOptions};
use dezawl::wl;

#[derive(Parser)]
#[command(name = "dezawl", version, about = "Strictly Deza Cayley graphs and their WL-rank")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Cayley graph for `k` to a file.
    Construct {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every claim for `k`; prints a summary and writes a JSON report.
    Verify {
        #[arg(long)]
        k: usize,
        /// Report path; defaults to `verify-k<K>.json` in the working directory.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall-clock timings in the JSON report.
        #[arg(long)]
        timings: bool,
        /// Remove edge `U,V` before the graph checks (negative control).
        #[arg(long = "remove-edge", value_name = "U,V", value_parser = parse_edge, hide = true)]
        remove_edge: Vec<(usize, usize)>,
    },
    /// Print the WL-rank of a graph read from an edge list or JSON file.
    WlRank {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the coherent configuration as JSON.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Run-length encode the color matrix in `--coloring` output.
        #[arg(long)]
        compact: bool,
    },
    /// Verify every `k` in a range and tabulate the results.
    Sweep {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// CSV output path; standard output when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or("expected U,V")?;
    let u = u.trim().parse().map_err(|e| format!("{e}"))?;
    let v = v.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((u, v))
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<dezawl::Error> for Failure {
    fn from(e: dezawl::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct { k, format, out } => {
            let member = FamilyMember::new(k)?;
            let text = match format {
                Format::Edgelist => io::to_edge_list(&member.graph)?,
                Format::Dot => io::to_dot(&member.graph),
                Format::Json => io::to_json(&member.graph)?,
            };
            write_file(&out, &text)
        }
        Command::Verify { k, json, timings, remove_edge } => {
            let opts = VerifyOptions { remove_edges: remove_edge, include_timings: timings };
            let report = report::verify(k, &opts)?;
            print!("{}", report.summary());
            let path = json.unwrap_or_else(|| PathBuf::from(format!("verify-k{k}.json")));
            write_file(&path, &report.to_json()?)?;
            if let Some(t) = &report.timings {
                eprintln!(
                    "timings: closure {:.1} ms, 2-WL {:.1} ms, spectrum {:.1} ms, total {:.1} ms",
                    t.closure_ms, t.wl2_ms, t.spectrum_ms, t.total_ms
                );
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("failed claims: {}", report.failed_claims().join(", "))))
            }
        }
        Command::WlRank { input, coloring, compact } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
            let graph = io::parse_any(&text)?;
            let cc = wl::wl2(&graph)?;
            println!("{}", cc.rank);
            if let Some(path) = coloring {
                write_file(&path, &cc.to_json(compact)?)?;
            }
            Ok(())
        }
        Command::Sweep { from, to, csv, json, timings } => {
            let rows = report::sweep(from, to, timings)?;
            let table = report::sweep_csv(&rows)?;
            match csv {
                Some(path) => write_file(&path, &table)?,
                None => print!("{table}"),
            }
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&rows).map_err(|e| Failure::Usage(e.to_string()))?;
                write_file(&path, &(text + "\n"))?;
            }
            let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.k.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("failing k: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
