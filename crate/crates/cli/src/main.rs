use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flaggraph::autsearch::{automorphism_search, SearchBudget};
use flaggraph::graphs::{
    build_aig_with, build_gpg_with, build_kneser_with, BuildOptions, DEFAULT_VERTEX_CAP,
};
use flaggraph::verify::{run_suite, SuiteParams, SUITES};
use flaggraph::{Error, FlagType, Graph};

#[derive(Parser)]
#[command(
    name = "flaggraph",
    version,
    about = "General position graphs of flags"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build Γ(n,T) and print its size.
    Build {
        #[command(flatten)]
        graph: TypeArgs,
        /// Write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compute the automorphism group of Γ(n,T).
    Aut {
        #[command(flatten)]
        graph: TypeArgs,
    },
    /// Build the Kneser graph KG(n,k).
    Kneser {
        #[command(flatten)]
        graph: SubsetArgs,
    },
    /// Build the almost identical graph AIG(n,k).
    Aig {
        #[command(flatten)]
        graph: SubsetArgs,
    },
    /// Run a verification suite.
    Verify {
        /// One of: formulas, maxima, secondmax, blocks, autgroup, matching,
        /// smalltype, complement, aig, edgecase.
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "type", value_name = "a,b,...")]
        flag_type: Option<FlagType>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Largest graph to build or search.
        #[arg(long)]
        vertex_cap: Option<usize>,
    },
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "type", value_name = "a,b,...")]
    flag_type: FlagType,
    /// Vertex limit for construction and, for `aut`, for the search.
    #[arg(long)]
    vertex_cap: Option<usize>,
}

impl TypeArgs {
    fn build(&self) -> Result<Graph, Failure> {
        let options = BuildOptions {
            vertex_cap: self.vertex_cap.unwrap_or(DEFAULT_VERTEX_CAP),
        };
        Ok(build_gpg_with(self.n, &self.flag_type, &options)?)
    }
}

#[derive(Args)]
struct SubsetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Write the graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
}

enum Failure {
    Checks,
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn describe(g: &Graph, name: &str) {
    println!(
        "{name}: {} vertices, {} edges",
        g.vertex_count(),
        g.edge_count()
    );
}

fn write_dot(g: &Graph, path: Option<&Path>) -> Result<(), Failure> {
    if let Some(path) = path {
        fs::write(path, g.to_dot())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Build { graph, dot } => {
            let g = graph.build()?;
            describe(&g, &format!("Γ({},{})", graph.n, graph.flag_type));
            write_dot(&g, dot.as_deref())
        }
        Command::Aut { graph } => {
            let g = graph.build()?;
            let mut budget = SearchBudget::default();
            if let Some(cap) = graph.vertex_cap {
                budget.max_vertices = cap;
            }
            let outcome = automorphism_search(&g, &budget)?;
            describe(&g, &format!("Γ({},{})", graph.n, graph.flag_type));
            println!("order: {}", outcome.order());
            println!("base orbit lengths: {:?}", outcome.orbit_lengths);
            println!("generators: {}", outcome.generators.len());
            for p in &outcome.generators {
                println!("  {p}");
            }
            Ok(())
        }
        Command::Kneser { graph } => {
            let g = build_kneser_with(graph.n, graph.k, &BuildOptions::default())?;
            describe(&g, &format!("KG({},{})", graph.n, graph.k));
            write_dot(&g, graph.dot.as_deref())
        }
        Command::Aig { graph } => {
            let g = build_aig_with(graph.n, graph.k, &BuildOptions::default())?;
            describe(&g, &format!("AIG({},{})", graph.n, graph.k));
            write_dot(&g, graph.dot.as_deref())
        }
        Command::Verify {
            suite,
            n,
            flag_type,
            a,
            b,
            json,
            vertex_cap,
        } => {
            let params = SuiteParams {
                n,
                flag_type,
                a,
                b,
                vertex_cap,
            };
            let report = run_suite(&suite, &params)?;
            for check in &report.checks {
                println!(
                    "[{}] {}",
                    if check.pass { "pass" } else { "FAIL" },
                    check.claim
                );
            }
            println!(
                "{}: {}",
                report.suite,
                if report.pass { "pass" } else { "FAIL" }
            );
            if let Some(path) = json {
                fs::write(path, report.to_json() + "\n")?;
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if let Error::UnknownSuite(_) = e {
                eprintln!("suites: {}", SUITES.join(", "));
            }
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
