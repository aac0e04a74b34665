//! Command-line front end. Exit codes: 0 ok, 2 usage, 3 data error,
//! 4 internal or output failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chordblend_core::idiom::presets;
use chordblend_core::{
    bridge_paths, ArgumentSet, Chord, Direction, ExtendedMatrix, Idiom, Question,
    TransitionMatrix, DEFAULT_BRIDGE_MASS, DEFAULT_POOL_CAPACITY,
};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::error::AppError;
use crate::export::{extended_from_json, extended_to_json, sectors_to_csv};
use crate::formats::{corpus_from_json, idiom_from_json, idiom_to_json, matrix_from_csv, matrix_to_csv, parse_chord};
use crate::pipeline::{run_blend, sample_chords, walk_to_json, BlendSettings};
use crate::registry::{IdiomKind, Registry};
use crate::service::{router, AppState};

pub const PRESET_PREFIX: &str = "preset:";

#[derive(Parser, Debug)]
#[command(name = "chordblend", version, about = "Blend chord-transition idioms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train an idiom from a corpus file and write it as idiom JSON.
    Train {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Idiom name; defaults to the corpus `name` field, then the file stem.
        #[arg(long)]
        name: Option<String>,
    },
    /// Blend two idioms and write the pool, extended matrix and bridge report.
    #[command(group(ArgGroup::new("args").required(true).args(["questions", "all_questions"])))]
    Blend {
        /// Idiom JSON file or `preset:<name>`.
        idiom1: String,
        idiom2: String,
        /// Comma-separated questions, e.g. `q1,q3,q9`.
        #[arg(long)]
        questions: Option<String>,
        #[arg(long)]
        all_questions: bool,
        #[arg(long, default_value_t = DEFAULT_POOL_CAPACITY)]
        capacity: usize,
        #[arg(long, default_value_t = DEFAULT_BRIDGE_MASS)]
        bridge_mass: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print a seeded random walk as a JSON list of chord strings.
    Sample {
        /// Idiom JSON, extended-matrix JSON, matrix CSV or `preset:<name>`.
        matrix: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-export an idiom or extended matrix as JSON or matrix CSV.
    Export {
        source: String,
        #[arg(long, value_enum)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the sector CSV of an extended matrix.
        #[arg(long)]
        sectors: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Extra idiom JSON files to register as trained idioms.
        #[arg(long = "idiom")]
        idioms: Vec<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), AppError> {
    match command {
        Command::Train { corpus, out, name } => {
            let corpus_doc = corpus_from_json(&read(&corpus)?)?;
            let name = name
                .or_else(|| corpus_doc.name.clone())
                .or_else(|| corpus.file_stem().map(|s| s.to_string_lossy().into_owned()))
                .ok_or_else(|| AppError::Usage("cannot derive an idiom name, pass --name".into()))?;
            let idiom = corpus_doc.train(&name)?;
            write(&out, &idiom_to_json(&idiom))?;
            say(stdout, &format!("trained {} with {} chords -> {}", idiom.name(), idiom.chords().len(), out.display()))
        }
        Command::Blend {
            idiom1,
            idiom2,
            questions,
            all_questions,
            capacity,
            bridge_mass,
            out_dir,
        } => {
            let arguments = if all_questions {
                ArgumentSet::all()
            } else {
                parse_questions(questions.as_deref().unwrap_or(""))?
            };
            let i1 = load_idiom(&idiom1)?;
            let i2 = load_idiom(&idiom2)?;
            let settings = BlendSettings {
                arguments,
                capacity,
                bridge_mass,
            };
            let result = run_blend(&i1, &i2, settings)?;
            result.documents().write_to(&out_dir)?;
            let forward = bridge_paths(&result.extended, Direction::OneToTwo).len();
            let backward = bridge_paths(&result.extended, Direction::TwoToOne).len();
            say(
                stdout,
                &format!(
                    "pool {} blends, extended matrix {} chords, bridges {forward} forward / {backward} backward -> {}",
                    result.pool.len(),
                    result.extended.len(),
                    out_dir.display()
                ),
            )
        }
        Command::Sample {
            matrix,
            start,
            length,
            seed,
        } => {
            let (chords, matrix) = load_matrix(&matrix)?;
            let start = parse_chord(&start, "--start")?;
            let walk = sample_chords(&chords, &matrix, start, length, seed)?;
            say(stdout, &walk_to_json(&walk))
        }
        Command::Export {
            source,
            format,
            out,
            sectors,
        } => {
            let loaded = load_source(&source)?;
            let document = match (&loaded, format) {
                (Source::Idiom(idiom), Format::Json) => idiom_to_json(idiom),
                (Source::Idiom(idiom), Format::Csv) => matrix_to_csv(idiom.chords(), idiom.matrix()),
                (Source::Extended(em), Format::Json) => extended_to_json(em),
                (Source::Extended(em), Format::Csv) => matrix_to_csv(em.chords(), em.matrix()),
                (Source::Plain(chords, matrix), Format::Csv) => matrix_to_csv(chords, matrix),
                (Source::Plain(..), Format::Json) => {
                    return Err(AppError::Usage("a matrix CSV can only be exported as CSV".into()))
                }
            };
            if let Some(path) = sectors {
                match &loaded {
                    Source::Extended(em) => write(&path, &sectors_to_csv(em))?,
                    _ => return Err(AppError::Usage("--sectors needs an extended-matrix source".into())),
                }
            }
            match out {
                Some(path) => write(&path, &document),
                None => stdout
                    .write_all(document.as_bytes())
                    .map_err(|e| AppError::Internal(e.to_string())),
            }
        }
        Command::Serve { addr, idioms } => {
            let registry = Registry::with_presets();
            for path in &idioms {
                registry.insert(idiom_from_json(&read(path)?)?, IdiomKind::Trained)?;
            }
            let state = AppState {
                registry: Arc::new(registry),
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| AppError::Internal(e.to_string()))?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .map_err(|e| AppError::Internal(format!("cannot bind {addr}: {e}")))?;
                say(stdout, &format!("listening on http://{addr}/v1"))?;
                axum::serve(listener, router(state))
                    .await
                    .map_err(|e| AppError::Internal(e.to_string()))
            })
        }
    }
}

fn say(stdout: &mut dyn Write, line: &str) -> Result<(), AppError> {
    writeln!(stdout, "{line}").map_err(|e| AppError::Internal(e.to_string()))
}

/// `q1,q3,q9` (case-insensitive) to an argument set; empty lists are
/// rejected.
pub fn parse_questions(list: &str) -> Result<ArgumentSet, AppError> {
    let mut arguments = ArgumentSet::empty();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let q: Question = item
            .parse()
            .map_err(|_| AppError::Usage(format!("unknown question {item:?}, expected q1 to q9")))?;
        arguments.insert(q);
    }
    if arguments.is_empty() {
        return Err(AppError::Usage("at least one question is required (--questions q1,... or --all-questions)".into()));
    }
    Ok(arguments)
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|source| AppError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents).map_err(|source| AppError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Idiom from `preset:<name>` or an idiom JSON file.
pub fn load_idiom(source: &str) -> Result<Idiom, AppError> {
    match load_source(source)? {
        Source::Idiom(idiom) => Ok(idiom),
        _ => Err(AppError::Usage(format!("{source} is not an idiom document"))),
    }
}

enum Source {
    Idiom(Idiom),
    Extended(ExtendedMatrix),
    Plain(Vec<Chord>, TransitionMatrix),
}

fn load_source(source: &str) -> Result<Source, AppError> {
    if let Some(name) = source.strip_prefix(PRESET_PREFIX) {
        return presets()
            .into_iter()
            .find(|i| i.name() == name)
            .map(Source::Idiom)
            .ok_or_else(|| AppError::UnknownIdiom(name.to_string()));
    }
    let path = Path::new(source);
    let text = read(path)?;
    let in_file = |e: AppError| match e {
        AppError::Schema { path: at, message } => AppError::Schema {
            path: format!("{source}: {at}"),
            message,
        },
        other => other,
    };
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let (chords, matrix) = matrix_from_csv(&text).map_err(in_file)?;
        return Ok(Source::Plain(chords, matrix));
    }
    let value = crate::schema::parse(&text).map_err(in_file)?;
    if value.get("schema").is_some() {
        extended_from_json(&text).map(Source::Extended).map_err(in_file)
    } else {
        crate::formats::idiom_from_value(&value, "").map(Source::Idiom).map_err(in_file)
    }
}

fn load_matrix(source: &str) -> Result<(Vec<Chord>, TransitionMatrix), AppError> {
    Ok(match load_source(source)? {
        Source::Idiom(i) => (i.chords().to_vec(), i.matrix().clone()),
        Source::Extended(em) => (em.chords().to_vec(), em.matrix().clone()),
        Source::Plain(chords, matrix) => (chords, matrix),
    })
}
