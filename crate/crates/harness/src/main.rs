use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use okbody::document::to_text;
use okbody::scenario::Command as ScenarioCommand;
use okbody::verify::{default_corpus, verify_corpus};
use okbody::{body_polytope, plot, run_bytes, HarnessError, Overrides};

#[derive(Parser)]
#[command(name = "okbody", version, about = "Exact Newton-Okounkov bodies from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the command named in the scenario file.
    Run(RunArgs),
    /// Okounkov body (stabilized hull, or the surface polygon).
    Body(RunArgs),
    /// Zariski decomposition of the scenario divisor.
    Zariski(RunArgs),
    /// Chamber scan of `D - tC`.
    Scan(RunArgs),
    /// Value semigroup levels up to the maximal degree.
    Semigroup(RunArgs),
    /// Finite generation certificate from degree-one values.
    Certify(RunArgs),
    /// Body of `D` as a translate of the body of its nef part.
    Translate(RunArgs),
    /// Denominator check for a volume.
    Denominator(RunArgs),
    /// Run the bundled corpus against its golden documents.
    VerifyPaper {
        /// Corpus directory; defaults to $OKBODY_CORPUS or the bundled one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Write an SVG plot and an exact CSV of a planar body.
    Plot(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PointMode {
    Generic,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Doc,
    Csv,
    Svg,
}

#[derive(Args)]
struct RunArgs {
    scenario: PathBuf,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long, value_enum)]
    point_mode: Option<PointMode>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl RunArgs {
    fn overrides(&self, command: Option<ScenarioCommand>) -> Overrides {
        Overrides {
            command,
            max_degree: self.max_degree,
            point_mode: self.point_mode.map(|m| match m {
                PointMode::Generic => "generic".to_string(),
                PointMode::Explicit => "explicit".to_string(),
            }),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, HarnessError> {
    fs::read(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_command(args: &RunArgs, command: Option<ScenarioCommand>) -> Result<(), HarnessError> {
    let bytes = read(&args.scenario)?;
    let overrides = args.overrides(command);
    match args.format.unwrap_or(Format::Doc) {
        Format::Doc => emit(args.out.as_deref(), &to_text(&run_bytes(&bytes, &overrides)?)),
        Format::Csv => emit(args.out.as_deref(), &plot::csv(&body_polytope(&bytes, &overrides)?)?),
        Format::Svg => emit(args.out.as_deref(), &plot::svg(&body_polytope(&bytes, &overrides)?)?),
    }
}

fn run_plot(args: &RunArgs) -> Result<(), HarnessError> {
    let bytes = read(&args.scenario)?;
    let body = body_polytope(&bytes, &args.overrides(None))?;
    match (&args.out, args.format) {
        (Some(out), None) => {
            emit(Some(&out.with_extension("svg")), &plot::svg(&body)?)?;
            emit(Some(&out.with_extension("csv")), &plot::csv(&body)?)
        }
        (out, Some(Format::Csv)) => emit(out.as_deref(), &plot::csv(&body)?),
        (out, _) => emit(out.as_deref(), &plot::svg(&body)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Run(a) => run_command(a, None),
        Cmd::Body(a) => run_command(a, Some(ScenarioCommand::Body)),
        Cmd::Zariski(a) => run_command(a, Some(ScenarioCommand::Zariski)),
        Cmd::Scan(a) => run_command(a, Some(ScenarioCommand::Scan)),
        Cmd::Semigroup(a) => run_command(a, Some(ScenarioCommand::Semigroup)),
        Cmd::Certify(a) => run_command(a, Some(ScenarioCommand::Certify)),
        Cmd::Translate(a) => run_command(a, Some(ScenarioCommand::Translate)),
        Cmd::Denominator(a) => run_command(a, Some(ScenarioCommand::Denominator)),
        Cmd::Plot(a) => run_plot(a),
        Cmd::VerifyPaper { corpus } => {
            let dir = corpus.clone().unwrap_or_else(default_corpus);
            match verify_corpus(&dir) {
                Ok(summary) => {
                    print!("{}", summary.render());
                    return if summary.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    };
                }
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.to_json()).expect("error serializes"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
