//! Scenario files, batch execution, and artifact serialization.
//!
//! A scenario is a JSON document pairing a world with a planner
//! configuration. Running one produces a `summary.json` with the headline
//! metrics and a full config echo, a `trajectory.csv` with every sample, a
//! `coverage.csv` with the coverage curve, and optionally a `plot.svg`.
//! Runs are deterministic: the same scenario produces byte-identical CSV
//! output on the same platform.

pub mod plot;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baseline::{boustrophedon, performance_ratio};
use crate::error::{Error, Result};
use crate::planner::{run_coverage, PlannerConfig, RunCounters, RunResult, TrajectorySample};
use crate::world::WorldSpec;

/// Version stamp written into scenario files and summaries.
pub const FORMAT_VERSION: u32 = 1;

/// A named, runnable simulation setup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    pub name: String,
    pub world: WorldSpec,
    #[serde(default)]
    pub planner: PlannerConfig,
    /// Also run the back-and-forth baseline and report the performance ratio.
    #[serde(default)]
    pub baseline: bool,
    /// Output directory; overridable from the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::validation(
                "format_version",
                format!("expected {FORMAT_VERSION}, got {}", self.format_version),
            ));
        }
        if self.name.is_empty() {
            return Err(Error::validation("name", "must not be empty"));
        }
        self.world.validate()?;
        self.planner.validate()?;
        if self.baseline && !self.world.obstacles.is_empty() {
            return Err(Error::validation(
                "baseline",
                "the optimal baseline only handles obstacle-free maps",
            ));
        }
        Ok(())
    }
}

/// Load and validate a scenario file. Unknown keys are rejected.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| {
        Error::validation("scenario", format!("cannot read {}: {e}", path.display()))
    })?;
    let scenario: Scenario = serde_json::from_str(&text)?;
    scenario.validate()?;
    Ok(scenario)
}

/// Serialize a scenario as pretty JSON.
pub fn scenario_to_json(scenario: &Scenario) -> Result<String> {
    Ok(serde_json::to_string_pretty(scenario)?)
}

/// Headline metrics and config echo written to `summary.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub format_version: u32,
    pub name: String,
    /// `ok` or `error`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_tc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_opt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counters: Option<RunCounters>,
    /// Full scenario echo; sufficient to re-run the case exactly.
    pub scenario: Scenario,
}

/// Artifacts of a completed `run_scenario` call.
#[derive(Debug)]
pub struct ScenarioOutcome {
    pub summary: Summary,
    pub out_dir: PathBuf,
    /// The run result when the planner succeeded.
    pub result: Option<RunResult>,
}

/// Run a scenario and write its artifacts under `out_dir`.
///
/// Planner failures are recorded in the summary with `status: "error"` and
/// returned as errors after the summary is written, so callers can still map
/// them to an exit status.
pub fn run_scenario(
    scenario: &Scenario,
    out_dir: Option<&Path>,
    render: bool,
) -> Result<ScenarioOutcome> {
    scenario.validate()?;
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| scenario.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(&scenario.name));
    fs::create_dir_all(&dir)?;

    let run = run_coverage(&scenario.planner, &scenario.world);
    match run {
        Ok(result) => {
            let (t_opt, pr) = if scenario.baseline {
                let base = boustrophedon(&scenario.world, scenario.planner.dc, scenario.planner.v)?;
                let pr = match result.ct {
                    Some(ct) if base.t_opt > 0.0 => Some(performance_ratio(ct, base.t_opt)?),
                    _ => None,
                };
                (Some(base.t_opt), pr)
            } else {
                (None, None)
            };
            let summary = Summary {
                format_version: FORMAT_VERSION,
                name: scenario.name.clone(),
                status: "ok".into(),
                error: None,
                ct: result.ct,
                final_tc: Some(result.final_tc),
                sim_time: Some(result.sim_time),
                t_opt,
                pr,
                counters: Some(result.counters.clone()),
                scenario: scenario.clone(),
            };
            fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
            write_trajectory_csv(&dir.join("trajectory.csv"), &result.trajectory)?;
            write_coverage_csv(&dir.join("coverage.csv"), &result.coverage_curve)?;
            if render {
                let svg = plot::render_svg(&scenario.world, &result.trajectory);
                fs::write(dir.join("plot.svg"), svg)?;
            }
            Ok(ScenarioOutcome {
                summary,
                out_dir: dir,
                result: Some(result),
            })
        }
        Err(err) => {
            let summary = Summary {
                format_version: FORMAT_VERSION,
                name: scenario.name.clone(),
                status: "error".into(),
                error: Some(err.to_string()),
                ct: None,
                final_tc: None,
                sim_time: None,
                t_opt: None,
                pr: None,
                counters: None,
                scenario: scenario.clone(),
            };
            fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
            Err(err)
        }
    }
}

/// Write `trajectory.csv` with columns `t,X,Y,source`.
///
/// Floats use the shortest representation that round-trips, so files are
/// byte-identical across runs on one platform.
pub fn write_trajectory_csv(path: &Path, samples: &[TrajectorySample]) -> Result<()> {
    let mut out = String::with_capacity(samples.len() * 32 + 16);
    out.push_str("t,X,Y,source\n");
    for s in samples {
        out.push_str(&format!("{},{},{},{}\n", s.t, s.pos.x, s.pos.y, s.source.as_str()));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write `coverage.csv` with columns `t,tc`.
pub fn write_coverage_csv(path: &Path, curve: &[(f64, f64)]) -> Result<()> {
    let mut out = String::with_capacity(curve.len() * 16 + 8);
    out.push_str("t,tc\n");
    for (t, tc) in curve {
        out.push_str(&format!("{t},{tc}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a `trajectory.csv` produced by [`write_trajectory_csv`].
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectorySample>> {
    use crate::geometry::Point;
    use crate::planner::Source;

    let text = fs::read_to_string(path)?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line.trim() != "t,X,Y,source" {
                return Err(Error::validation(
                    "trajectory.csv",
                    format!("unexpected header {line:?}"),
                ));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut field = |name: &str| -> Result<&str> {
            parts
                .next()
                .ok_or_else(|| Error::validation("trajectory.csv", format!("missing {name} on line {}", lineno + 1)))
        };
        let t: f64 = parse_float(field("t")?, lineno)?;
        let x: f64 = parse_float(field("X")?, lineno)?;
        let y: f64 = parse_float(field("Y")?, lineno)?;
        let source = match field("source")? {
            "arnold" => Source::Arnold,
            "logistic" => Source::Logistic,
            other => {
                return Err(Error::validation(
                    "trajectory.csv",
                    format!("unknown source {other:?} on line {}", lineno + 1),
                ))
            }
        };
        samples.push(TrajectorySample {
            t,
            pos: Point::new(x, y),
            source,
        });
    }
    Ok(samples)
}

fn parse_float(text: &str, lineno: usize) -> Result<f64> {
    text.parse().map_err(|_| {
        Error::validation(
            "trajectory.csv",
            format!("bad number {text:?} on line {}", lineno + 1),
        )
    })
}
