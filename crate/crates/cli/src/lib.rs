//! Command-line frontend for `combinach`: JSON jobs or flags in, exact
//! reports out.

pub mod acceptance;
mod command;
mod report;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use combinach::ordinal::set_depth_cap;
use combinach::Error;
use serde::Deserialize;

pub use command::{Command, Witness};

#[derive(Parser, Debug)]
#[command(name = "combinach", version, about = "Exact norms and witnesses for combinatorial Banach spaces")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputMode>,
    #[command(subcommand)]
    pub command: Entry,
}

#[derive(clap::Subcommand, Debug)]
pub enum Entry {
    /// Run a JSON job file.
    Job { file: PathBuf },
    #[command(flatten)]
    Direct(Command),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputMode {
    #[default]
    Text,
    /// One JSON record per line.
    Records,
    Csv,
}

/// Contents of a job file: `{"output": "text", "job": {"command": ...}}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub output: OutputMode,
    pub job: Command,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, Error> {
        serde_json::from_str(text).map_err(|e| Error::Syntax(format!("job: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: u8, stderr: String) -> Self {
        Output { code, stdout: String::new(), stderr }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax(_) | Error::DepthCap { .. } | Error::InvalidArgument(_) => 2,
        Error::Precondition(_) => 3,
        Error::Verification(_) => 4,
    }
}

pub const DEPTH_CAP_VAR: &str = "COMBINACH_DEPTH_CAP";

/// Parses `args` (program name first), runs the job and renders its report.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Ok(v) = std::env::var(DEPTH_CAP_VAR) {
        match v.trim().parse::<usize>() {
            Ok(cap) if cap >= 1 => set_depth_cap(cap),
            _ => return Output::fail(2, format!("error: {DEPTH_CAP_VAR} must be a positive integer\n")),
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Output::fail(2, text) } else { Output::ok(text) };
        }
    };
    let (mode, command) = match cli.command {
        Entry::Direct(c) => (cli.output.unwrap_or_default(), c),
        Entry::Job { file } => {
            let spec = std::fs::read_to_string(&file)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", file.display())))
                .and_then(|text| JobSpec::parse(&text));
            match spec {
                Ok(s) => (cli.output.unwrap_or(s.output), s.job),
                Err(e) => return Output::fail(exit_code(&e), format!("error: {e}\n")),
            }
        }
    };
    execute(&command, mode)
}

/// Runs an already parsed command.
pub fn execute(command: &Command, mode: OutputMode) -> Output {
    let result = command.validate().and_then(|_| command.execute());
    match result.and_then(|r| r.render(command.name(), mode).map(|text| (r.failed, text))) {
        Ok((false, text)) => Output::ok(text),
        Ok((true, text)) => Output { code: 4, stdout: text, stderr: String::new() },
        Err(e) => Output::fail(exit_code(&e), format!("error: {e}\n")),
    }
}
