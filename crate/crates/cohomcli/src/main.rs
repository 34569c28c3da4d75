use clap::{Args, Parser, Subcommand, ValueEnum};
use cohomcli::report::{to_tsv, Report};
use cohomcli::spec::{Problem, SpecParseError, VarietySpec};
use cohomcli::{gallery, run, run_gallery, Sections};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "logfrob", version, about = "Log de Rham and Higgs cohomology of toric pairs over F_p")]
struct Cli {
    /// Worker threads; falls back to LOGFROB_THREADS, then to the core count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an input and print the fan, divisor and weight box.
    Describe(Source),
    /// Cohomology tables and Hodge numbers.
    Cohomology(Source),
    /// Weight and Hodge spectral sequences.
    WeightSs(Source),
    /// Everything, including the verification suites.
    Verify(Source),
    /// Run the verification suites on every shipped example.
    Gallery {
        /// Restrict to these gallery ids.
        #[arg(long = "id")]
        ids: Vec<String>,
        #[arg(long)]
        weight_radius: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// JSON input file.
    #[arg(long, conflicts_with = "id", required_unless_present = "id")]
    input: Option<PathBuf>,
    /// Gallery id.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    weight_radius: Option<i64>,
    /// Comma-separated check names, or `all`.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug)]
enum CliError {
    Spec(SpecParseError),
    Io(String),
}

impl From<SpecParseError> for CliError {
    fn from(e: SpecParseError) -> Self {
        Self::Spec(e)
    }
}

fn load(src: &Source) -> Result<(Problem, Option<String>), CliError> {
    let spec = match (&src.input, &src.id) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            VarietySpec::from_json(&text)?
        }
        (None, Some(id)) => gallery::gallery_spec(id)?,
        (None, None) => return Err(CliError::Io("need --input or --id".into())),
    };
    let problem = spec.validate(src.weight_radius, src.checks.as_deref())?;
    Ok((problem, src.id.clone()))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Tsv => to_tsv(r),
    }
}

fn describe(problem: &Problem, id: Option<String>) -> String {
    let v = &problem.validity;
    let value = json!({
        "id": id,
        "input": problem.spec,
        "prime": problem.field().p(),
        "dimension": problem.rank(),
        "rays": v.rays,
        "max_cones": v.max_cones,
        "dim_below_p": v.dim_below_p,
        "weight_radius": problem.radius,
        "box": toricgeom::weight_box(problem.fan(), None, problem.radius).points(),
        "checks": problem.checks.iter().map(|c| c.name()).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&value).expect("serializes") + "\n"
}

fn execute(cmd: Command) -> Result<bool, CliError> {
    let started = Instant::now();
    let failed = match cmd {
        Command::Describe(src) => {
            let (p, id) = load(&src)?;
            emit(&describe(&p, id), &src.out)?;
            false
        }
        Command::Cohomology(src) => single(&src, Sections::Cohomology)?,
        Command::WeightSs(src) => single(&src, Sections::WeightSs)?,
        Command::Verify(src) => single(&src, Sections::Full)?,
        Command::Gallery { ids, weight_radius, checks, out } => {
            let list = (!ids.is_empty()).then_some(ids.as_slice());
            let r = run_gallery(list, weight_radius, checks.as_deref())?;
            emit(&r.to_json(), &out)?;
            r.members.iter().any(Report::any_fail)
        }
    };
    eprintln!("logfrob: finished in {:.2?}", started.elapsed());
    Ok(failed)
}

fn single(src: &Source, sections: Sections) -> Result<bool, CliError> {
    let (p, id) = load(src)?;
    let r = run(&p, id.as_deref(), sections);
    emit(&render(&r, src.format), &src.out)?;
    Ok(r.any_fail())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = cli.threads.or_else(|| std::env::var("LOGFROB_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Err(e) = cohomcli::init_threads(threads) {
        eprintln!("logfrob: {e}");
        return ExitCode::from(2);
    }
    match execute(cli.command) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(CliError::Spec(e)) => {
            eprintln!("logfrob: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("logfrob: {e}");
            ExitCode::from(2)
        }
    }
}
