mod report;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mw_core::canon::{canonicalize, AsMode};
use mw_core::engine::{Engine, EngineConfig};
use mw_core::enumerate::Space;
use mw_core::error::Error;
use mw_core::graph::theta;
use mw_core::hopf::{deframe_vec, ws_eval, WeightSystem};
use mw_core::vector::{parse_terms, parse_vector, GraphVector, VectorParseError};
use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Vector { path: PathBuf, source: VectorParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::ResourceLimit { .. }) => 2,
            CliError::Core(Error::CacheCorrupt { .. }) => 3,
            CliError::Core(Error::MalformedGraph(_) | Error::WeightSystem(_)) | CliError::Vector { .. } => 4,
            CliError::Core(Error::DegreeMismatch { .. }) => 5,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "mw", version, about = "Trivalent graphs modulo AS/IHX: dimensions, catalogs, deframing, weight systems")]
struct Cli {
    /// Catalog cache directory.
    #[arg(long, env = "MW_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Degree ceiling for both spaces (defaults: 15 trivalent, 9 extended).
    #[arg(long, global = true)]
    limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Cmc,
    Ecmc,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Cmc => Space::Cmc,
            SpaceArg::Ecmc => Space::Ecmc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DimsFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogFormat {
    Txt,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Quotient dimensions by degree.
    Dims {
        #[arg(long, conflicts_with = "up_to", required_unless_present = "up_to")]
        degree: Option<usize>,
        #[arg(long)]
        up_to: Option<usize>,
        #[arg(long, value_enum, default_value = "cmc")]
        space: SpaceArg,
        /// Restrict to connected classes.
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: DimsFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare computed dimensions with the published table.
    VerifyTable,
    /// List the canonical classes of one degree.
    Catalog {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "cmc")]
        space: SpaceArg,
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value = "txt")]
        format: CatalogFormat,
    },
    /// Apply the deframing map (or its inverse) to a vector file.
    Deframe {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a weight system on a vector.
    Pair {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Export the IHX relation matrix of one degree as `row col value` triples.
    Relations {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "cmc")]
        space: SpaceArg,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the weight system dual to one basis class.
    Dual {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "cmc")]
        space: SpaceArg,
        /// Basis class; defaults to Θ in degree 3.
        #[arg(long)]
        key: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    degree: usize,
    space: Space,
    mode: AsMode,
    connected: bool,
    version: &'a str,
    classes: &'a [String],
}

fn run(cli: Cli) -> Result<()> {
    let mut config = EngineConfig { cache_dir: cli.cache_dir, ..Default::default() };
    if let Some(limit) = cli.limit {
        config.limit_cmc = limit;
        config.limit_ecmc = limit;
    }
    let engine = Engine::new(config);

    match cli.command {
        Command::Dims { degree, up_to, space, connected, format, out } => {
            let degrees: Vec<usize> = match (degree, up_to) {
                (Some(d), _) => vec![d],
                (None, Some(n)) => (0..=n).collect(),
                (None, None) => return Err(CliError::Usage("one of --degree or --up-to is required".into())),
            };
            let start = std::time::Instant::now();
            let rep = report::dimension_report(&engine, &degrees, space.into(), connected)?;
            let text = match format {
                DimsFormat::Csv => rep.to_csv(),
                DimsFormat::Json => rep.to_json(),
            };
            emit(out.as_deref(), &text)?;
            eprintln!(
                "version {}; {:.3}s; catalog cache hits {}",
                rep.version,
                start.elapsed().as_secs_f64(),
                engine.cache_hits()
            );
        }
        Command::VerifyTable => {
            let v = report::verify_table(&engine)?;
            emit(None, &v.text)?;
            if !v.low_degrees_match {
                return Err(CliError::Usage("computed dimensions disagree with the table in degrees 0-9".into()));
            }
        }
        Command::Catalog { degree, space, connected, format } => {
            let space: Space = space.into();
            let cat = if connected { engine.enum_connected(degree, space)? } else { engine.catalog(degree, space)? };
            let text = match format {
                CatalogFormat::Txt => cat.classes.iter().map(|k| format!("{k}\n")).collect(),
                CatalogFormat::Json => {
                    let doc = CatalogJson {
                        degree,
                        space,
                        mode: cat.mode,
                        connected,
                        version: &cat.tool_version,
                        classes: &cat.classes,
                    };
                    serde_json::to_string_pretty(&doc).expect("catalogs serialize") + "\n"
                }
            };
            emit(None, &text)?;
        }
        Command::Deframe { input, inverse, out } => {
            let text = read(&input)?;
            let terms = parse_terms(&text).map_err(|source| CliError::Vector { path: input.clone(), source })?;
            let mut v = GraphVector::new();
            for (c, g) in terms {
                v.add_graph(&g, AsMode::Raw, &c);
            }
            emit(out.as_deref(), &deframe_vec(&v, inverse).to_text())?;
        }
        Command::Pair { weights, vector } => {
            let w = WeightSystem::from_json(&engine, &read(&weights)?)?;
            let text = read(&vector)?;
            let v = parse_vector(&text, AsMode::Raw).map_err(|source| CliError::Vector { path: vector.clone(), source })?;
            let value: BigRational = ws_eval(&engine, &w, &v)?;
            emit(None, &format!("{value}\n"))?;
        }
        Command::Relations { degree, space, connected, out } => {
            let q = engine.quotient(degree, space.into(), connected)?;
            emit(out.as_deref(), &q.relations.to_triples())?;
        }
        Command::Dual { degree, space, key, out } => {
            let space: Space = space.into();
            let key = match key {
                Some(k) => k,
                None if degree == 3 => canonicalize(&theta(), space.default_mode()).key,
                None => return Err(CliError::Usage("--key is required outside degree 3".into())),
            };
            let w = WeightSystem::dual(&engine, degree, space, &key)?;
            emit(out.as_deref(), &(w.to_json() + "\n"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
