//! Command-line interface.
//!
//! Exit status: 0 on success, 1 when the run itself fails (bad scenario,
//! unknown category, I/O), 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, Utc};
use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::report::{self, Format};
use crate::scenario::{self, builtin_catalog, catalog_names, find_category, CategoryScenario};
use crate::sensitivity::{
    self, DistributionSpec, ParamBound, SensitivityDocument, SweepSpec, SweepValues,
};
use crate::timeline::Stage;

#[derive(Debug, Parser)]
#[command(name = "av-horizon", version, about = "Project deployment timelines for autonomous-vehicle categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project the builtin category catalog.
    Catalog(ProjectArgs),
    /// Project scenarios from a scenario file.
    Project(ProjectArgs),
    /// One-at-a-time sweep over a single parameter.
    Sweep(SweepArgs),
    /// Rank parameters by the t_total spread between their low and high bounds.
    Tornado(TornadoArgs),
    /// Seeded Monte Carlo over parameter distributions.
    Mc(McArgs),
    /// Print the scenario file JSON Schema.
    Schema(SchemaArgs),
}

/// `2`, `3` or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageSelector {
    One(Stage),
    All,
}

impl StageSelector {
    fn stages(self) -> Vec<Stage> {
        match self {
            StageSelector::One(stage) => vec![stage],
            StageSelector::All => Stage::PROJECTED.to_vec(),
        }
    }
}

impl FromStr for StageSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            Ok(StageSelector::All)
        } else {
            s.parse().map(StageSelector::One)
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// table, csv, json or markdown.
    #[arg(long, default_value = "table", value_parser = Format::from_str)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Scenario file (required for `project`).
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Only project this category.
    #[arg(long)]
    pub category: Option<String>,
    #[arg(long, default_value = "all", value_parser = StageSelector::from_str)]
    pub stage: StageSelector,
    /// Report timestamp (RFC 3339); defaults to now.
    #[arg(long, value_parser = parse_timestamp)]
    pub generated_at: Option<DateTime<Utc>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Scenario file; without it the builtin catalog is used.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Category to analyse; optional when the file holds a single scenario.
    #[arg(long)]
    pub category: Option<String>,
    #[arg(long, default_value = "3", value_parser = Stage::from_str)]
    pub stage: Stage,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("sweep_source").required(true).args(["param", "spec"])))]
#[command(group(ArgGroup::new("sweep_values").args(["values", "grid"])))]
pub struct SweepArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Parameter path, e.g. crow.beta.
    #[arg(long, requires = "sweep_values")]
    pub param: Option<String>,
    /// Comma-separated values.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    /// LOW,HIGH,STEPS.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Sensitivity spec file with a `sweep` entry.
    #[arg(long, conflicts_with_all = ["param", "values", "grid"])]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("tornado_source").required(true).args(["bound", "spec"])))]
pub struct TornadoArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// PATH=LOW,HIGH; repeatable.
    #[arg(long, value_parser = ParamBound::from_str)]
    pub bound: Vec<ParamBound>,
    /// Sensitivity spec file with a `bounds` list.
    #[arg(long, conflicts_with = "bound")]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mc_source").required(true).args(["dist", "spec"])))]
pub struct McArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// PATH=uniform:LOW,HIGH or PATH=triangular:LOW,MODE,HIGH; repeatable.
    #[arg(long, value_parser = DistributionSpec::from_str)]
    pub dist: Vec<DistributionSpec>,
    /// Sensitivity spec file with a `distributions` list.
    #[arg(long, conflicts_with = "dist")]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_timestamp(text: &str) -> std::result::Result<DateTime<Utc>, chrono::ParseError> {
    DateTime::parse_from_rfc3339(text).map(|t| t.with_timezone(&Utc))
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command) {
        Ok((text, None)) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Ok((text, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => 0,
            Err(source) => {
                let _ = writeln!(stderr, "error: {}", Error::Io { path, source });
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

type Rendered = (String, Option<PathBuf>);

fn execute(command: Command) -> Result<Rendered> {
    match command {
        Command::Catalog(args) => {
            let scenarios = match &args.file {
                Some(path) => scenario::load_scenarios_file(path)?,
                None => builtin_catalog(),
            };
            projection(args, scenarios, "Deployment timelines by category".into())
        }
        Command::Project(args) => {
            let path = args.file.clone().ok_or_else(|| {
                Error::validation("--file", "none", "name a scenario file for `project`")
            })?;
            let scenarios = scenario::load_scenarios_file(&path)?;
            projection(args, scenarios, format!("Deployment timelines: {}", path.display()))
        }
        Command::Sweep(args) => {
            let sweep = match &args.spec {
                Some(path) => read_spec(path)?.sweep.ok_or_else(|| {
                    Error::validation("sweep", "none", "be present in the spec file")
                })?,
                None => {
                    let values = match (&args.values, &args.grid) {
                        (Some(list), _) => SweepValues::parse_list(list)?,
                        (None, Some(grid)) => SweepValues::parse_grid(grid)?,
                        (None, None) => unreachable!("clap requires --values or --grid with --param"),
                    };
                    SweepSpec {
                        parameter_path: args.param.clone().unwrap_or_default(),
                        values,
                    }
                }
            };
            let s = target(&args.target)?;
            let report = sensitivity::one_at_a_time(&s, args.target.stage, &sweep)?;
            finish(report::render_sensitivity(&report, args.output.format)?, args.output)
        }
        Command::Tornado(args) => {
            let bounds = match &args.spec {
                Some(path) => non_empty(read_spec(path)?.bounds, "bounds")?,
                None => args.bound.clone(),
            };
            let s = target(&args.target)?;
            let report = sensitivity::tornado(&s, args.target.stage, &bounds)?;
            finish(report::render_sensitivity(&report, args.output.format)?, args.output)
        }
        Command::Mc(args) => {
            let dists = match &args.spec {
                Some(path) => non_empty(read_spec(path)?.distributions, "distributions")?,
                None => args.dist.clone(),
            };
            let s = target(&args.target)?;
            let report = sensitivity::monte_carlo(&s, args.target.stage, &dists, args.samples, args.seed)?;
            finish(report::render_sensitivity(&report, args.output.format)?, args.output)
        }
        Command::Schema(args) => {
            let mut text = scenario::scenario_schema().to_string();
            if !text.ends_with('\n') {
                text.push('\n');
            }
            Ok((text, args.output))
        }
    }
}

fn projection(args: ProjectArgs, scenarios: Vec<CategoryScenario>, title: String) -> Result<Rendered> {
    let selected = match &args.category {
        Some(name) => vec![pick(scenarios, name)?],
        None => scenarios,
    };
    let results = scenario::project_all(&selected, &args.stage.stages())?;
    let stamp = args.generated_at.unwrap_or_else(Utc::now);
    finish(report::render(&results, args.output.format, &title, stamp)?, args.output)
}

fn pick(scenarios: Vec<CategoryScenario>, name: &str) -> Result<CategoryScenario> {
    let valid = scenarios.iter().map(|s| s.name.clone()).collect();
    scenarios
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownCategory {
            name: name.to_string(),
            valid,
        })
}

fn target(args: &TargetArgs) -> Result<CategoryScenario> {
    match (&args.file, &args.category) {
        (Some(path), name) => {
            let mut scenarios = scenario::load_scenarios_file(path)?;
            match name {
                Some(name) => pick(scenarios, name),
                None if scenarios.len() == 1 => Ok(scenarios.remove(0)),
                None => Err(Error::validation(
                    "--category",
                    "none",
                    "name one scenario when the file holds several",
                )),
            }
        }
        (None, Some(name)) => find_category(name),
        (None, None) => Err(Error::UnknownCategory {
            name: String::new(),
            valid: catalog_names(),
        }),
    }
}

fn read_spec(path: &Path) -> Result<SensitivityDocument> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SensitivityDocument::from_json(&text)
}

fn non_empty<T>(items: Vec<T>, key: &str) -> Result<Vec<T>> {
    if items.is_empty() {
        Err(Error::validation(key, "[]", "be a non-empty list in the spec file"))
    } else {
        Ok(items)
    }
}

fn finish(text: String, output: OutputArgs) -> Result<Rendered> {
    Ok((text, output.output))
}
