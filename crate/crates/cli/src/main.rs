use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use framedist_cli::emit::{self, num};
use framedist_cli::{run_suite, Format, FrameFile, Suite, SuiteConfig, SuiteReport};
use framedist_core::constructors::FrameRecipe;
use framedist_core::frame::{format_number, CONSTRUCTED_TOL};
use framedist_core::report::Coords;
use framedist_core::search::{
    distance_sum_extrema, etf_distance_bounds, extremize_product_sum, product_sum_bounds, search_distance_extrema,
    search_product_sum,
};
use framedist_core::{classify, BoundLedger, Direction, Field, Frame, SearchConfig, SearchResult};

#[derive(Parser)]
#[command(name = "framedist", version, about = "Finite frame toolkit: build frames, check their theorems, search extremal sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Simplex,
    OnbCopies,
    Harmonic,
    Etf,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    ProductSum,
    DistanceSum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Min,
    Max,
}

#[derive(Subcommand)]
enum Command {
    /// Build a frame from a recipe and write it as a frame file.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        dim: usize,
        /// Number of vectors (for onb-copies a multiple of --dim).
        #[arg(long)]
        count: Option<usize>,
        /// Copies of the basis for onb-copies; defaults to count/dim.
        #[arg(long)]
        copies: Option<usize>,
        /// Harmonic frames: skip the constant character.
        #[arg(long)]
        drop_dc: bool,
        /// Harmonic frames: real cosine/sine variant.
        #[arg(long)]
        real: bool,
        /// Random frames: complex entries.
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print frame bounds, structural flags and coherence.
    Analyze { frame: PathBuf },
    /// Run the claim suite on a frame.
    Check {
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Multistart budget for searched extrema.
        #[arg(long, default_value_t = 256)]
        starts: usize,
        /// Format of the report written to --out (default json). Without
        /// --out the report goes to stdout in this format instead of the table.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Search the extrema of the product sum or the distance sum.
    Optimize {
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = Objective::ProductSum)]
        objective: Objective,
        #[arg(long, value_enum, default_value_t = Dir::Min)]
        direction: Dir,
        #[arg(long, default_value_t = 256)]
        starts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Report the searched value even when an exact certificate exists.
        #[arg(long)]
        raw: bool,
        /// Write the witness vectors as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-render a saved JSON report.
    Report {
        report: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict(report: &SuiteReport) -> ExitCode {
    if report.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn load(path: &Path) -> Result<Frame> {
    FrameFile::read(path)
        .map(|f| f.frame)
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit_to(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Construct {
            kind,
            dim,
            count,
            copies,
            drop_dc,
            real,
            complex,
            seed,
            out,
        } => {
            let recipe = recipe(kind, dim, count, copies, drop_dc, real, complex, seed)?;
            let frame = recipe.build()?;
            let file = FrameFile::new(frame, Some(recipe));
            emit_to(out.as_deref(), &file.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { frame } => {
            let f = load(&frame)?;
            let s = classify(&f, CONSTRUCTED_TOL);
            println!("{}", f.descriptor());
            println!("M={} N={} field={}", f.dim(), f.len(), f.field());
            println!("{}", s.headline());
            let eig: Vec<String> = s.eigenvalues.iter().map(|v| format_number(*v)).collect();
            println!("eigenvalues: {}", eig.join(" "));
            println!("max coherence: {}", format_number(s.max_coherence));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            frame,
            suite,
            samples,
            seed,
            starts,
            format,
            out,
        } => {
            let f = load(&frame)?;
            let cfg = SuiteConfig { samples, seed, starts };
            let report = run_suite(&f, suite, &cfg);
            match (out, format) {
                (Some(path), fmt) => {
                    emit_to(Some(&path), &emit::render(&report, fmt.unwrap_or(Format::Json)))?;
                    print!("{}", emit::table(&report));
                }
                (None, Some(fmt)) => print!("{}", emit::render(&report, fmt)),
                (None, None) => print!("{}", emit::table(&report)),
            }
            Ok(verdict(&report))
        }
        Command::Optimize {
            frame,
            objective,
            direction,
            starts,
            seed,
            raw,
            out,
        } => {
            let f = load(&frame)?;
            let dir = match direction {
                Dir::Min => Direction::Min,
                Dir::Max => Direction::Max,
            };
            let cfg = SearchConfig::default().with_starts(starts).with_seed(seed);
            cfg.validate()?;
            let (name, result, ledger) = match objective {
                Objective::ProductSum => {
                    let r = if raw {
                        search_product_sum(&f, dir, &cfg)?
                    } else {
                        extremize_product_sum(&f, dir, &cfg)?
                    };
                    ("product-sum", r, product_sum_bounds(&f)?)
                }
                Objective::DistanceSum => {
                    let (lo, hi) = search_distance_extrema(&f, &cfg)?;
                    let r = if dir == Direction::Min { lo } else { hi };
                    ("distance-sum", r, distance_ledger(&f)?)
                }
            };
            print_search(&f, name, dir, &result, &ledger);
            if let Some(path) = out {
                let w: Vec<Coords> = result.witness.iter().map(|v| Coords::from_vector(v, f.field())).collect();
                let body = serde_json::json!({
                    "objective": name,
                    "direction": dir,
                    "value": result.value,
                    "certified": result.certified,
                    "witness": w,
                });
                emit_to(Some(&path), &format!("{}\n", serde_json::to_string_pretty(&body)?))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { report, format, out } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("cannot read {}", report.display()))?;
            let parsed: SuiteReport = serde_json::from_str(&text)
                .map_err(|e| anyhow!("{}: line {}: {e}", report.display(), e.line()))?;
            emit_to(out.as_deref(), &emit::render(&parsed, format))?;
            Ok(verdict(&parsed))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn recipe(
    kind: Kind,
    dim: usize,
    count: Option<usize>,
    copies: Option<usize>,
    drop_dc: bool,
    real: bool,
    complex: bool,
    seed: u64,
) -> Result<FrameRecipe> {
    let need_count = || count.ok_or_else(|| anyhow!("--count is required for this kind"));
    Ok(match kind {
        Kind::Simplex => FrameRecipe::Simplex { dim },
        Kind::OnbCopies => {
            let copies = match (copies, count) {
                (Some(k), _) => k,
                (None, Some(n)) if dim > 0 && n % dim == 0 => n / dim,
                (None, Some(n)) => bail!("--count {n} is not a multiple of --dim {dim}"),
                (None, None) => bail!("onb-copies needs --copies or --count"),
            };
            FrameRecipe::OnbCopies { dim, copies }
        }
        Kind::Harmonic => FrameRecipe::Harmonic {
            dim,
            count: need_count()?,
            drop_dc,
            real,
        },
        Kind::Etf => FrameRecipe::Etf {
            dim,
            count: need_count()?,
        },
        Kind::Random => FrameRecipe::Random {
            dim,
            count: need_count()?,
            seed,
            field: if complex { Field::Complex } else { Field::Real },
        },
    })
}

/// Exact extrema `2N -+ 2||sum phi_i||`, plus the ETF intervals when they apply.
fn distance_ledger(f: &Frame) -> Result<BoundLedger> {
    match etf_distance_bounds(f) {
        Ok(l) => Ok(l),
        Err(_) => {
            let e = distance_sum_extrema(f)?;
            let mut l = BoundLedger::default();
            l.bounds.push(framedist_core::search::Bound {
                name: "exact_low".into(),
                value: e.low,
                hypothesis: "unit norm".into(),
                applicable: true,
            });
            l.bounds.push(framedist_core::search::Bound {
                name: "exact_high".into(),
                value: e.high,
                hypothesis: "unit norm".into(),
                applicable: true,
            });
            l.best_upper = Some(e.high);
            Ok(l)
        }
    }
}

fn coords(v: &framedist_core::Vector, field: Field) -> String {
    serde_json::to_string(&Coords::from_vector(v, field)).unwrap_or_default()
}

fn print_search(f: &Frame, name: &str, dir: Direction, r: &SearchResult, ledger: &BoundLedger) {
    let d = match dir {
        Direction::Min => "min",
        Direction::Max => "max",
    };
    println!("{}", f.descriptor());
    println!("objective: {name} {d}");
    println!("value: {}", format_number(r.value));
    println!(
        "certified: {}  converged: {}  best start: {} of {}",
        r.certified, r.converged, r.best_start, r.starts_used
    );
    for (label, v) in ["x", "y"].iter().zip(&r.witness) {
        println!("{label}: {}", coords(v, f.field()));
    }
    println!("bounds:");
    for b in ledger.applicable() {
        // positive margin: the searched value sits on the bound's side
        let lower = b.name.ends_with("_low") || b.name.ends_with("_lower");
        let margin = if lower { r.value - b.value } else { b.value - r.value };
        println!("  {:<16} {:>14}  margin {:>11}  ({})", b.name, format_number(b.value), num(margin), b.hypothesis);
    }
    if let Some(u) = ledger.best_upper {
        println!("  best upper: {}", format_number(u));
    }
}
