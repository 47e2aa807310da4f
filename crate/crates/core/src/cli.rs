//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::clockcore::SignificanceRule;
use crate::datasets;
use crate::error::{Error, Result, EXIT_INPUT};
use crate::grouping::ClusterSpec;
use crate::ingest::{load_dataset, read_matrix, validate_config, write_matrix, ClusterSpace, RawOptions};
use crate::pipeline::{pca_embedding, run, Command};

#[derive(Debug, Parser)]
#[command(name = "feature-clock", version, about = "Explain 2D embeddings with feature clocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// One clock over all points.
    Global(RunArgs),
    /// One clock per group.
    Local(RunArgs),
    /// One clock per edge of the spanning tree over group centers.
    Intergroup(RunArgs),
    /// Run all three clocks on the bundled Iris data.
    Demo(DemoArgs),
    /// Write a two-component PCA embedding of a feature CSV.
    Pca(PcaArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Feature matrix CSV (header row of feature names).
    #[arg(long = "x", value_name = "CSV")]
    pub x: PathBuf,
    /// Embedding CSV with exactly two columns.
    #[arg(long = "y", value_name = "CSV")]
    pub y: PathBuf,
    /// Single-column label CSV; the token `noise` marks ungrouped points.
    #[arg(long, value_name = "CSV")]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub options: OptionArgs,
    /// Directory for the SVG and JSON outputs.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args, Default)]
pub struct OptionArgs {
    /// Built-in clustering, e.g. `kmeans:3` or `dbscan:0.5,5`.
    #[arg(long, value_name = "SPEC")]
    pub cluster: Option<ClusterSpec>,
    /// Space to cluster in: `x` (features) or `y` (embedding).
    #[arg(long, value_name = "SPACE")]
    pub cluster_space: Option<ClusterSpace>,
    /// Significance level.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Keep only the k largest arrows per clock.
    #[arg(long, value_name = "K")]
    pub top_k: Option<usize>,
    /// Angular step of the projection sweep in degrees.
    #[arg(long, value_name = "DEG")]
    pub theta_step: Option<f64>,
    #[arg(long)]
    pub no_standardize_x: bool,
    #[arg(long)]
    pub no_center_y: bool,
    #[arg(long)]
    pub standardize_betas: bool,
    /// Combine the two axis p-values with `or` or `and`.
    #[arg(long, value_name = "RULE")]
    pub significance_rule: Option<SignificanceRule>,
    /// Draw the coefficient circle of each significant feature.
    #[arg(long)]
    pub circles: bool,
    /// Clock radius multiplier.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Canvas size in pixels, `WIDTHxHEIGHT`.
    #[arg(long, value_name = "WxH", value_parser = parse_canvas)]
    pub canvas: Option<(u32, u32)>,
}

impl OptionArgs {
    pub fn to_raw(&self) -> RawOptions {
        RawOptions {
            alpha: self.alpha,
            top_k: self.top_k,
            theta_step_deg: self.theta_step,
            standardize_x: self.no_standardize_x.then_some(false),
            center_y: self.no_center_y.then_some(false),
            standardize_betas: self.standardize_betas.then_some(true),
            clock_scale: self.scale,
            significance_rule: self.significance_rule,
            circles: self.circles.then_some(true),
            cluster: self.cluster.clone(),
            cluster_space: self.cluster_space,
            seed: self.seed,
            canvas: self.canvas,
        }
    }
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_name = "DIR", default_value = "demo_out")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub options: OptionArgs,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    #[arg(long = "x", value_name = "CSV")]
    pub x: PathBuf,
    /// Output CSV with columns `pc1,pc2`.
    #[arg(long, value_name = "CSV")]
    pub out: PathBuf,
    /// Use raw rather than standardized features.
    #[arg(long)]
    pub no_standardize_x: bool,
}

fn parse_canvas(s: &str) -> std::result::Result<(u32, u32), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("canvas must look like 900x600, got '{s}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<u32>()
            .map_err(|_| format!("invalid canvas dimension '{v}'"))
    };
    Ok((parse(w)?, parse(h)?))
}

fn report_warnings(warnings: &[String], err: &mut dyn Write) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn run_clock(command: Command, args: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = validate_config(&args.options.to_raw())?;
    let dataset = load_dataset(&args.x, &args.y, args.labels.as_deref())?;
    let output = run(command, &dataset, &config)?;
    report_warnings(output.warnings(), err);
    let (svg, json) = output.write_to(&args.out_dir, command.file_stem())?;
    let _ = writeln!(out, "wrote {}", svg.display());
    let _ = writeln!(out, "wrote {}", json.display());
    Ok(())
}

/// Demo output stem per command.
pub fn demo_stem(command: Command) -> &'static str {
    match command {
        Command::Global => "global_clock",
        Command::Local => "local_clocks",
        Command::Intergroup => "intergroup_clocks",
    }
}

fn run_demo(args: &DemoArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = validate_config(&args.options.to_raw())?;
    let dataset = datasets::iris();
    for command in [Command::Global, Command::Local, Command::Intergroup] {
        let output = run(command, &dataset, &config)?;
        report_warnings(output.warnings(), err);
        let (svg, json) = output.write_to(&args.out_dir, demo_stem(command))?;
        let _ = writeln!(out, "wrote {}", svg.display());
        let _ = writeln!(out, "wrote {}", json.display());
    }
    Ok(())
}

fn run_pca(args: &PcaArgs, out: &mut dyn Write) -> Result<()> {
    let table = read_matrix(&args.x)?;
    let scores = pca_embedding(&table.matrix, !args.no_standardize_x).map_err(|e| {
        Error::Ingest(crate::ingest::IngestError::Num(e))
    })?;
    write_matrix(&args.out, &["pc1".to_string(), "pc2".to_string()], &scores)?;
    let _ = writeln!(out, "wrote {}", args.out.display());
    Ok(())
}

/// Executes a parsed command and returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        CliCommand::Global(a) => run_clock(Command::Global, a, out, err),
        CliCommand::Local(a) => run_clock(Command::Local, a, out, err),
        CliCommand::Intergroup(a) => run_clock(Command::Intergroup, a, out, err),
        CliCommand::Demo(a) => run_demo(a, out, err),
        CliCommand::Pca(a) => run_pca(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    execute(&cli, &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canvas_parsing() {
        assert_eq!(parse_canvas("900x600"), Ok((900, 600)));
        assert_eq!(parse_canvas("1200X800"), Ok((1200, 800)));
        assert!(parse_canvas("900").is_err());
        assert!(parse_canvas("ax600").is_err());
    }

    #[test]
    fn flags_map_to_options() {
        let cli = Cli::try_parse_from([
            "feature-clock",
            "local",
            "--x",
            "a.csv",
            "--y",
            "b.csv",
            "--cluster",
            "kmeans:3",
            "--no-center-y",
            "--significance-rule",
            "and",
            "--top-k",
            "2",
        ])
        .unwrap();
        let CliCommand::Local(args) = cli.command else {
            panic!("expected local")
        };
        let raw = args.options.to_raw();
        assert_eq!(raw.cluster, Some(ClusterSpec::Kmeans { k: 3 }));
        assert_eq!(raw.center_y, Some(false));
        assert_eq!(raw.standardize_x, None);
        assert_eq!(raw.significance_rule, Some(SignificanceRule::And));
        assert_eq!(raw.top_k, Some(2));
    }

    #[test]
    fn bad_cluster_spec_is_usage_error() {
        assert_eq!(
            main_with_args(["feature-clock", "global", "--x", "a", "--y", "b", "--cluster", "spectral:3"]),
            EXIT_INPUT
        );
    }
}
