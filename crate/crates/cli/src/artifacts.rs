use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use weighted_lane_emden::Error;

use crate::Output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(Error),
    #[error("{0}")]
    Numerical(Error),
    #[error("Inconclusive: {0}")]
    Inconclusive(String),
    #[error("Io: {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("Parse: {0}")]
    Parse(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Invalid(e)
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Parse(_) => 2,
            CliError::Numerical(_) | CliError::Inconclusive(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source }
}

/// A gnuplot panel: CSV file name, column expressions and axis scaling.
pub struct Plot {
    pub file: &'static str,
    pub using: &'static str,
    pub title: &'static str,
    pub logscale: &'static str,
}

/// Collects the data files of one invocation and writes its manifest.
pub struct Run<'a> {
    subcommand: &'static str,
    output: &'a Output,
    started: Instant,
    outputs: Vec<String>,
    plots: Vec<Plot>,
}

impl<'a> Run<'a> {
    pub fn start(subcommand: &'static str, output: &'a Output) -> CliResult<Self> {
        if let Some(dir) = &output.out {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        }
        Ok(Self { subcommand, output, started: Instant::now(), outputs: Vec::new(), plots: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        if let Some(dir) = &self.output.out {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
            self.outputs.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Parse(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn plot(&mut self, plot: Plot) {
        self.plots.push(plot);
    }

    pub fn finish<P: Serialize, C: Serialize>(mut self, params: &P, config: &C) -> CliResult<()> {
        if self.output.emit_plot && !self.plots.is_empty() {
            let script = plot_script(&self.plots);
            self.write("plot.gp", &script)?;
        }
        let Some(dir) = &self.output.out else { return Ok(()) };
        let manifest = json!({
            "subcommand": self.subcommand,
            "params": params,
            "config": config,
            "outputs": self.outputs,
            "wall_time": self.started.elapsed().as_secs_f64(),
            "tool_version": env!("CARGO_PKG_VERSION"),
        });
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Parse(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_error(&path, e))
    }
}

fn plot_script(plots: &[Plot]) -> String {
    let mut s =
        String::from("set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n");
    for plot in plots {
        let stem = plot.file.trim_end_matches(".csv");
        s.push_str(&format!("set output '{stem}.png'\n"));
        s.push_str("unset logscale\n");
        if !plot.logscale.is_empty() {
            s.push_str(&format!("set logscale {}\n", plot.logscale));
        }
        s.push_str(&format!("plot '{}' using {} with lines title '{}'\n", plot.file, plot.using, plot.title));
    }
    s
}

/// Prints a JSON value, pretty and newline-terminated.
pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).unwrap_or_default());
}
