mod pipeline;
mod table;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use stacktight::generators::{
    family, format_permutation, parse_permutation, path_ball, simplex_ball, simplex_sphere,
    sphere_bundle, FamilyKind,
};
use stacktight::io::{parse_facet_list, write_facet_list};
use stacktight::replay::replay_certificate;
use stacktight::{Certificate, Complex};

use pipeline::{CheckName, Pipeline};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;
const EX_IOERR: u8 = 74;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    BadInput { path: PathBuf, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EX_USAGE,
            CliError::Parse { .. } | CliError::BadInput { .. } => EX_DATAERR,
            CliError::Read { .. } => EX_NOINPUT,
            CliError::Write { .. } => EX_IOERR,
        }
    }
}

#[derive(Parser)]
#[command(name = "stacktight", version, about = "Generate and certify tight neighborly triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a facet list for one of the built-in constructions.
    Generate(GenerateArgs),
    /// Run certification checks on a facet-list file.
    Verify(VerifyArgs),
    /// Recompute the regenerable rows of the summary table.
    Table(TableArgs),
    /// Rebuild M(3) or N(3) by handle additions on a stacked 4-ball.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "N", alias = "n")]
    N,
    Bundle,
    Pathball,
    Simplex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Boundary,
    Filling,
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    /// Dimension of the manifold (for `pathball`, of the ball).
    #[arg(long)]
    d: usize,
    /// Vertex count for `bundle`, facet count for `pathball`.
    #[arg(long)]
    m: Option<usize>,
    /// Bundle permutation of 1..d+1, e.g. `id`, `213` or `2,1,3`.
    #[arg(long, default_value = "id")]
    sigma: String,
    #[arg(long, value_enum, default_value = "boundary")]
    part: Part,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Run the standard pipeline for the input.
    #[arg(long)]
    all: bool,
    /// Individual checks; may be repeated.
    #[arg(long = "check", value_enum)]
    checks: Vec<CheckName>,
    /// Order of the expected cyclic symmetry `i -> i+1 mod N`.
    #[arg(long)]
    n_cyclic: Option<usize>,
    /// Vertex for `link-order`.
    #[arg(long)]
    vertex: Option<u32>,
    /// Expected link cycle for `link-order`, compared up to rotation and reflection.
    #[arg(long, num_args = 1.., value_delimiter = ' ')]
    expect_link: Option<Vec<u32>>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads for independent checks.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Record wall-clock time per check.
    #[arg(long)]
    timings: bool,
}

#[derive(clap::Args)]
struct TableArgs {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Largest dimension for the family rows.
    #[arg(long, default_value_t = 4)]
    max_d: usize,
}

#[derive(clap::Args)]
struct ReplayArgs {
    #[arg(long, default_value = "M")]
    family: FamilyKind,
    /// Stop after this many handle additions.
    #[arg(long)]
    stop_after: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EX_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Table(a) => table::run(a.max_d, a.json),
        Command::Replay(a) => replay(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("stacktight: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn build(a: &GenerateArgs) -> Result<(Complex, Vec<String>), CliError> {
    let part = match a.part {
        Part::Boundary => "boundary",
        Part::Filling => "filling",
    };
    match a.family {
        GenFamily::M | GenFamily::N => {
            let kind = if matches!(a.family, GenFamily::M) {
                FamilyKind::M
            } else {
                FamilyKind::N
            };
            let f = family(kind, a.d).map_err(usage)?;
            let x = match a.part {
                Part::Boundary => f.manifold,
                Part::Filling => f.filling,
            };
            Ok((x, vec![format!("{kind}({}) {part}, n = {}", a.d, f.n)]))
        }
        GenFamily::Bundle => {
            let m = a.m.ok_or_else(|| usage("--family bundle needs --m"))?;
            if a.d < 1 {
                return Err(usage("--family bundle needs --d >= 1"));
            }
            let sigma = parse_permutation(&a.sigma, a.d + 1).map_err(usage)?;
            let x = sphere_bundle(a.d, m, &sigma).map_err(usage)?;
            Ok((
                x,
                vec![format!("sphere bundle d = {}, m = {m}, sigma = {}", a.d, format_permutation(&sigma))],
            ))
        }
        GenFamily::Pathball => {
            let m = a.m.ok_or_else(|| usage("--family pathball needs --m"))?;
            let x = path_ball(a.d, m).map_err(usage)?;
            Ok((x, vec![format!("stacked path ball, dim = {}, facets = {m}", a.d)]))
        }
        GenFamily::Simplex => {
            if a.d < 1 {
                return Err(usage("--family simplex needs --d >= 1"));
            }
            let x = match a.part {
                Part::Boundary => simplex_sphere(a.d),
                Part::Filling => simplex_ball(a.d),
            };
            Ok((x, vec![format!("simplex d = {} {part}", a.d)]))
        }
    }
}

fn generate(a: GenerateArgs) -> Result<u8, CliError> {
    let (x, header) = build(&a)?;
    let text = write_facet_list(&x, &header);
    let summary = format!(
        "{}: dim {}, f-vector {:?}",
        header[0],
        x.dim(),
        x.f_vector().counts
    );
    match &a.output {
        Some(path) => {
            write_file(path, &text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn emit(cert: &Certificate, json: Option<&Path>) -> Result<(), CliError> {
    let text = cert.to_json() + "\n";
    match json {
        Some(path) => {
            write_file(path, &text)?;
            let mut out = std::io::stdout().lock();
            for c in &cert.checks {
                let _ = writeln!(out, "{:<12} {}", c.verdict.to_string(), c.name);
            }
            let _ = writeln!(out, "{:<12} overall", cert.verdict().to_string());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> Result<u8, CliError> {
    let bytes = fs::read(&a.input).map_err(|source| CliError::Read {
        path: a.input.clone(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::BadInput {
        path: a.input.clone(),
        message: "not valid UTF-8".into(),
    })?;
    let x = parse_facet_list(&text).map_err(|e| match e {
        stacktight::Error::Parse { line, message } => CliError::Parse {
            path: a.input.clone(),
            line,
            message,
        },
        other => CliError::BadInput {
            path: a.input.clone(),
            message: other.to_string(),
        },
    })?;
    if a.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let subject = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let pipeline = Pipeline {
        n_cyclic: a.n_cyclic,
        vertex: a.vertex,
        expect_link: a.expect_link,
        samples: a.samples,
        seed: a.seed,
        timings: a.timings,
    };
    let names = pipeline.select(&x, a.all, &a.checks).map_err(usage)?;
    let cert = pipeline.run(&x, subject, &names, a.jobs).map_err(usage)?;
    emit(&cert, a.json.as_deref())?;
    Ok(cert.exit_code() as u8)
}

fn replay(a: ReplayArgs) -> Result<u8, CliError> {
    let cert = replay_certificate(a.family, a.stop_after);
    emit(&cert, a.json.as_deref())?;
    Ok(cert.exit_code() as u8)
}
