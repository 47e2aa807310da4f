//! End-to-end runs shared by the CLI and the C API: build clocks, render the
//! SVG, and assemble the JSON report.

use std::fs;
use std::path::{Path, PathBuf};

use crate::clockcore::{build_global_clock, build_local_clocks, Clock};
use crate::error::{Error, Result};
use crate::grouping::{cluster_dataset, from_labels, mst_over_centers, GroupingResult};
use crate::ingest::{Dataset, ValidatedConfig};
use crate::intergroup::build_intergroup_clocks;
use crate::numstats::{pca_2d, standardize_columns, Matrix, NumError};
use crate::render::{render_circles, render_clock, render_intergroup, render_scatter, Bounds, RenderConfig, Scene};
use crate::report::{ClockRecord, ClockReport, GroupingRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Global,
    Local,
    Intergroup,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Global => "global",
            Command::Local => "local",
            Command::Intergroup => "intergroup",
        }
    }

    /// Base name of the `.svg` / `.json` pair written for this command.
    pub fn file_stem(self) -> &'static str {
        match self {
            Command::Global => "clock",
            Command::Local => "local_clocks",
            Command::Intergroup => "intergroup_clocks",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub command: Command,
    pub report: ClockReport,
    pub svg: String,
}

impl RunOutput {
    pub fn json(&self) -> String {
        self.report.to_json()
    }

    pub fn warnings(&self) -> &[String] {
        &self.report.warnings
    }

    /// Writes `<stem>.svg` and `<stem>.json` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| Error::Output {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?;
        let svg_path = dir.join(format!("{stem}.svg"));
        let json_path = dir.join(format!("{stem}.json"));
        for (path, body) in [(&svg_path, self.svg.as_str()), (&json_path, self.json().as_str())] {
            fs::write(path, body).map_err(|e| Error::Output {
                path: path.clone(),
                message: e.to_string(),
            })?;
        }
        Ok((svg_path, json_path))
    }
}

pub fn render_config(config: &ValidatedConfig) -> RenderConfig {
    RenderConfig {
        width: config.config.canvas.0,
        height: config.config.canvas.1,
        clock_scale: config.config.clock_scale,
        ..RenderConfig::default()
    }
}

/// Groups from `--cluster` when given, otherwise from the dataset's labels.
pub fn resolve_grouping(dataset: &Dataset, config: &ValidatedConfig) -> Result<GroupingResult> {
    let c = &config.config;
    if let Some(spec) = &c.cluster {
        return Ok(cluster_dataset(dataset, spec, c.cluster_space, c.standardize_x, c.seed)?);
    }
    match dataset.labels() {
        Some(labels) => Ok(from_labels(labels, dataset.y())?),
        None => Err(Error::NoGroupingSource),
    }
}

fn point_bounds(dataset: &Dataset) -> Bounds {
    Bounds::from_points((0..dataset.n()).map(|i| (dataset.y().get(i, 0), dataset.y().get(i, 1))))
}

fn report_for(command: Command, dataset: &Dataset, config: &ValidatedConfig) -> ClockReport {
    let mut report = ClockReport::new(command.name(), &config.config, dataset);
    report.warnings.extend(config.warnings.iter().cloned());
    report
}

fn draw_clocks(mut scene: Scene, clocks: &[Clock], circles: bool) -> Scene {
    for clock in clocks {
        scene = render_clock(scene, clock);
        if circles {
            scene = render_circles(scene, clock);
        }
    }
    scene
}

pub fn run_global(dataset: &Dataset, config: &ValidatedConfig) -> Result<RunOutput> {
    let outcome = build_global_clock(dataset, &config.config.clock_options())?;
    let clock = outcome.clock;
    let render = render_config(config);
    let mut bounds = point_bounds(dataset);
    bounds.include_circle(clock.anchor, clock.scale * render.clock_scale);
    // Labels only color the points here.
    let grouping = dataset.labels().and_then(|l| from_labels(l, dataset.y()).ok());
    let scene = Scene::new(&render, &bounds).with_title("Global feature clock");
    let scene = render_scatter(scene, dataset, grouping.as_ref());
    let scene = draw_clocks(scene, std::slice::from_ref(&clock), config.config.circles);

    let mut report = report_for(Command::Global, dataset, config);
    report.clocks.push(ClockRecord::from(&clock));
    report.warnings.extend(outcome.warnings);
    Ok(RunOutput {
        command: Command::Global,
        report,
        svg: scene.to_svg(),
    })
}

pub fn run_local(dataset: &Dataset, config: &ValidatedConfig) -> Result<RunOutput> {
    let grouping = resolve_grouping(dataset, config)?;
    let local = build_local_clocks(dataset, &grouping, &config.config.clock_options())?;
    let render = render_config(config);
    let mut bounds = point_bounds(dataset);
    for clock in &local.clocks {
        bounds.include_circle(clock.anchor, clock.scale * render.clock_scale);
    }
    let scene = Scene::new(&render, &bounds).with_title("Local feature clocks");
    let scene = render_scatter(scene, dataset, Some(&grouping));
    let scene = draw_clocks(scene, &local.clocks, config.config.circles);

    let mut report = report_for(Command::Local, dataset, config);
    report.grouping = Some(GroupingRecord::new(&grouping, None));
    report.clocks = local.clocks.iter().map(ClockRecord::from).collect();
    report.warnings.extend(local.warnings);
    Ok(RunOutput {
        command: Command::Local,
        report,
        svg: scene.to_svg(),
    })
}

pub fn run_intergroup(dataset: &Dataset, config: &ValidatedConfig) -> Result<RunOutput> {
    let grouping = resolve_grouping(dataset, config)?;
    let mst = mst_over_centers(&grouping)?;
    let result = build_intergroup_clocks(dataset, &grouping, &mst, &config.config.clock_options())?;
    let render = render_config(config);
    let mut bounds = point_bounds(dataset);
    for clock in &result.clocks {
        bounds.include_circle(clock.anchor, clock.scale * render.clock_scale);
    }
    let scene = Scene::new(&render, &bounds).with_title("Inter-group feature clocks");
    let scene = render_scatter(scene, dataset, Some(&grouping));
    let scene = render_intergroup(scene, &result.clocks);

    let mut report = report_for(Command::Intergroup, dataset, config);
    report.grouping = Some(GroupingRecord::new(&grouping, Some(&mst)));
    report.clocks = result.clocks.iter().map(ClockRecord::from).collect();
    report.warnings.extend(result.warnings);
    Ok(RunOutput {
        command: Command::Intergroup,
        report,
        svg: scene.to_svg(),
    })
}

pub fn run(command: Command, dataset: &Dataset, config: &ValidatedConfig) -> Result<RunOutput> {
    match command {
        Command::Global => run_global(dataset, config),
        Command::Local => run_local(dataset, config),
        Command::Intergroup => run_intergroup(dataset, config),
    }
}

/// Two-component PCA scores of `x`, optionally on standardized columns.
pub fn pca_embedding(x: &Matrix, standardize: bool) -> Result<Matrix, NumError> {
    let input = if standardize {
        standardize_columns(x)?.matrix
    } else {
        x.clone()
    };
    Ok(pca_2d(&input)?.scores(&input))
}
