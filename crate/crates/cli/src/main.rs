//! `srg-walk`: generate strongly regular graphs, simulate quantum-walk search
//! on them and print the perturbative predictions.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use srg_walk::dynamics::{LaplacianMode, Rk4Settings};
use srg_walk::experiment::{
    gamma_grid, run_simulation, scan_gamma, write_scan_csv, Engine, GammaPolicy, RunConfig,
    Spacing,
};
use srg_walk::graph::{build_family, verify_srg, write_edge_list, EdgeListHeader};
use srg_walk::numfmt::float;
use srg_walk::theory::{complete_graph_reference, predict, CaseTag};
use srg_walk::{Error, Execution, GraphFamily};

const AFTER_HELP: &str = "\
Defaults reproduce the reference experiments with one invocation each:
  srg-walk simulate --family paley --q 101 --gamma c1 --engine both --out paley101.csv
  srg-walk simulate --family latin --t 50 --d 3 --engine reduced --out latin2500.csv
  srg-walk scan-gamma --family paley --q 101 --gamma c1 --log
The gamma policy defaults to c2 = 1/k + 1/((N-1) mu); c1 = 1/k. Both are 1/N
on the complete graph. t_max defaults to pi sqrt(N), samples to 1000.";

#[derive(Parser, Debug)]
#[command(name = "srg-walk", version, about, after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family graph, verify it and write its edge list.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Edge-list path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve the search Hamiltonian and report the success-probability peak.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Coupling: c1, c2 or a positive number.
        #[arg(long, default_value = "c2", value_parser = parse_gamma)]
        gamma: GammaPolicy,
        /// Trace path; only the summary line is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Peak time and height over a grid of couplings.
    ScanGamma {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Centre of the default range [gamma/4, 4 gamma].
        #[arg(long, default_value = "c2", value_parser = parse_gamma)]
        gamma: GammaPolicy,
        #[arg(long)]
        gamma_min: Option<f64>,
        #[arg(long)]
        gamma_max: Option<f64>,
        #[arg(long, default_value_t = 17)]
        steps: usize,
        /// Logarithmic instead of linear spacing.
        #[arg(long)]
        log: bool,
        /// CSV path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical couplings, runtime and peak probability from perturbation theory.
    Predict {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "2", value_parser = parse_case)]
        case: CaseTag,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyKind {
    Complete,
    Paley,
    Latin,
    Triangular,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Vertex count (complete).
    #[arg(long)]
    n: Option<u64>,
    /// Field order (paley).
    #[arg(long)]
    q: Option<u64>,
    /// Side length (latin).
    #[arg(long)]
    t: Option<u64>,
    /// Number of parallel classes, 2 or 3 (latin).
    #[arg(long, default_value_t = 3)]
    d: u64,
    /// Ground-set size (triangular).
    #[arg(long)]
    m: Option<u64>,
}

impl FamilyArgs {
    fn family(&self) -> Result<GraphFamily, Error> {
        let need = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| {
                Error::Config(format!("--{flag} is required for --family {:?}", self.family).to_lowercase())
            })
        };
        let f = match self.family {
            FamilyKind::Complete => GraphFamily::Complete { n: need(self.n, "n")? },
            FamilyKind::Paley => GraphFamily::Paley { q: need(self.q, "q")? },
            FamilyKind::Latin => GraphFamily::LatinSquare {
                t: need(self.t, "t")?,
                d: self.d,
            },
            FamilyKind::Triangular => GraphFamily::Triangular { m: need(self.m, "m")? },
        };
        f.validate()?;
        Ok(f)
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    marked: usize,
    /// Simulation horizon; defaults to pi sqrt(N).
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Full)]
    engine: EngineArg,
    #[arg(long, value_enum, default_value_t = LaplacianArg::Adjacency)]
    laplacian: LaplacianArg,
    /// RK4 step as a fraction of 1/(2 gamma k + 1), at most 0.1.
    #[arg(long, default_value_t = Rk4Settings::default().step_factor)]
    step_factor: f64,
    /// Run everything on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EngineArg {
    Full,
    Reduced,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LaplacianArg {
    Adjacency,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_gamma(s: &str) -> Result<GammaPolicy, String> {
    match s {
        "c1" => Ok(GammaPolicy::C1),
        "c2" => Ok(GammaPolicy::C2),
        _ => match s.parse::<f64>() {
            Ok(g) if g.is_finite() && g > 0.0 => Ok(GammaPolicy::Value(g)),
            _ => Err(format!("expected c1, c2 or a positive number, got '{s}'")),
        },
    }
}

fn parse_case(s: &str) -> Result<CaseTag, String> {
    match s {
        "1" => Ok(CaseTag::Case1),
        "2" => Ok(CaseTag::Case2),
        _ => Err(format!("case must be 1 or 2, got '{s}'")),
    }
}

impl RunArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    fn config(&self, family: GraphFamily, gamma: GammaPolicy) -> RunConfig {
        RunConfig {
            family,
            gamma,
            marked: self.marked,
            t_max: self.tmax,
            samples: self.samples,
            engine: match self.engine {
                EngineArg::Full => Engine::Full,
                EngineArg::Reduced => Engine::Reduced,
                EngineArg::Both => Engine::Both,
            },
            laplacian: match self.laplacian {
                LaplacianArg::Adjacency => LaplacianMode::AdjacencyOnly,
                LaplacianArg::Full => LaplacianMode::FullLaplacian,
            },
            rk4: Rk4Settings {
                step_factor: self.step_factor,
                execution: self.execution(),
            },
        }
    }
}

/// Writes to `path`, or to standard output when there is none.
fn with_output<F>(path: Option<&PathBuf>, f: F) -> Result<(), Error>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen { family, out } => {
            let family = family.family()?;
            let g = build_family(&family)?;
            let header = match family.params()? {
                Some(expected) => {
                    let found = verify_srg(&g, Execution::default())?;
                    if found != expected {
                        return Err(Error::Config(format!(
                            "generated graph has parameters {found}, expected {expected}"
                        )));
                    }
                    EdgeListHeader::from(found)
                }
                None => EdgeListHeader {
                    n: g.vertex_count() as u64,
                    k: g.max_degree() as u64,
                    lambda: Some(family.lambda()?),
                    mu: None,
                },
            };
            with_output(out.as_ref(), |w| write_edge_list(w, &g, &header))?;
            if out.is_some() {
                println!("{header}");
            }
        }
        Command::Simulate {
            family,
            run,
            gamma,
            out,
            format,
        } => {
            let config = run.config(family.family()?, gamma);
            let result = run_simulation(&config)?;
            if let Some(path) = &out {
                with_output(Some(path), |w| match format {
                    Format::Csv => result.trace.write_csv(w),
                    Format::Json => result.trace.write_json(w),
                })?;
            }
            let mut line = format!(
                "t_peak={} p_peak={} gamma={}",
                float(result.peak.t),
                float(result.peak.p),
                float(result.gamma)
            );
            if result.peak.at_boundary {
                line.push_str(" peak_at_boundary=true");
            }
            if let Some(d) = result.max_deviation {
                line.push_str(&format!(" max_deviation={}", float(d)));
            }
            println!("{line}");
        }
        Command::ScanGamma {
            family,
            run,
            gamma,
            gamma_min,
            gamma_max,
            steps,
            log,
            out,
        } => {
            let config = run.config(family.family()?, gamma);
            let centre = config.resolve_gamma()?;
            let min = gamma_min.unwrap_or(centre / 4.0);
            let max = gamma_max.unwrap_or(centre * 4.0);
            let spacing = if log { Spacing::Log } else { Spacing::Linear };
            let grid = gamma_grid(min, max, steps, spacing)?;
            let rows = scan_gamma(&config, &grid, run.execution())?;
            with_output(out.as_ref(), |w| write_scan_csv(w, &config, &rows))?;
        }
        Command::Predict {
            family,
            case,
            out,
            format,
        } => {
            let family = family.family()?;
            match family.params()? {
                Some(p) => {
                    let report = predict(&p, case)?;
                    with_output(out.as_ref(), |w| match format {
                        Format::Csv => report.write_csv(w),
                        Format::Json => report.write_json(w),
                    })?;
                }
                None => {
                    let r = complete_graph_reference(family.vertex_count())?;
                    with_output(out.as_ref(), |w| match format {
                        Format::Csv => r.write_csv(w),
                        Format::Json => r.write_json(w),
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn diagnostic(kind: &str, msg: &str) {
    let msg = msg.trim().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " | ");
    eprintln!("error: kind={kind} msg=\"{msg}\"");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            diagnostic("usage", first);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            diagnostic(e.kind(), &e.to_string());
            ExitCode::from(if e.kind() == "usage" { 2 } else { 1 })
        }
    }
}
