//! Parameter sweeps: a cartesian product of planner settings over a base
//! scenario, executed concurrently, ranked by coverage time.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_scenario, Scenario};
use crate::error::{Error, Result};

/// Default ceiling on the cartesian product size.
pub const DEFAULT_CAP: usize = 256;

/// Axes swept over the base scenario. Empty axes keep the base value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub c: Vec<f64>,
    pub f: Vec<f64>,
    pub ds_index_init: Vec<u8>,
    pub orientation_enabled: Vec<bool>,
    pub zoning_enabled: Vec<bool>,
    pub scaling_enabled: Vec<bool>,
}

/// A sweep specification: base scenario plus axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub format_version: u32,
    pub base: Scenario,
    #[serde(default)]
    pub axes: SweepAxes,
    /// Refuse products larger than this.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

/// One row of the ranked results table.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub rank: usize,
    pub name: String,
    pub c: f64,
    pub f: f64,
    pub ds_index_init: u8,
    pub orientation: bool,
    pub zoning: bool,
    pub scaling: bool,
    pub status: String,
    pub ct: Option<f64>,
    pub final_tc: Option<f64>,
}

/// Load and validate a sweep file.
pub fn load_sweep(path: impl AsRef<Path>) -> Result<SweepSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| {
        Error::validation("sweep", format!("cannot read {}: {e}", path.display()))
    })?;
    let spec: SweepSpec = serde_json::from_str(&text)?;
    validate_sweep(&spec)?;
    Ok(spec)
}

fn validate_sweep(spec: &SweepSpec) -> Result<()> {
    if spec.format_version != super::FORMAT_VERSION {
        return Err(Error::validation(
            "format_version",
            format!("expected {}, got {}", super::FORMAT_VERSION, spec.format_version),
        ));
    }
    spec.base.validate()?;
    let product = combination_count(&spec.axes);
    if product > spec.cap {
        return Err(Error::validation(
            "axes",
            format!("cartesian product of size {product} exceeds the cap of {}", spec.cap),
        ));
    }
    Ok(())
}

fn combination_count(axes: &SweepAxes) -> usize {
    let dim = |n: usize| n.max(1);
    dim(axes.c.len())
        * dim(axes.f.len())
        * dim(axes.ds_index_init.len())
        * dim(axes.orientation_enabled.len())
        * dim(axes.zoning_enabled.len())
        * dim(axes.scaling_enabled.len())
}

/// Expand a sweep into concrete scenarios, in deterministic axis order.
pub fn expand(spec: &SweepSpec) -> Result<Vec<Scenario>> {
    validate_sweep(spec)?;
    let axes = &spec.axes;
    let or_base = |values: &[f64], base: f64| -> Vec<f64> {
        if values.is_empty() { vec![base] } else { values.to_vec() }
    };
    let cs = or_base(&axes.c, spec.base.planner.c);
    let fs_ = or_base(&axes.f, spec.base.planner.f);
    let idxs: Vec<u8> = if axes.ds_index_init.is_empty() {
        vec![spec.base.planner.ds_index_init.into()]
    } else {
        axes.ds_index_init.clone()
    };
    let bools = |values: &[bool], base: bool| -> Vec<bool> {
        if values.is_empty() { vec![base] } else { values.to_vec() }
    };
    let orients = bools(&axes.orientation_enabled, spec.base.planner.orientation_enabled);
    let zonings = bools(&axes.zoning_enabled, spec.base.planner.zoning_enabled);
    let scalings = bools(&axes.scaling_enabled, spec.base.planner.scaling_enabled);

    let mut scenarios = Vec::new();
    for &c in &cs {
        for &f in &fs_ {
            for &idx in &idxs {
                for &orient in &orients {
                    for &zoning in &zonings {
                        for &scaling in &scalings {
                            let mut s = spec.base.clone();
                            s.planner.c = c;
                            s.planner.f = f;
                            s.planner.ds_index_init = idx
                                .try_into()
                                .map_err(|e: String| Error::validation("axes.ds_index_init", e))?;
                            s.planner.orientation_enabled = orient;
                            s.planner.zoning_enabled = zoning;
                            s.planner.scaling_enabled = scaling;
                            s.name = format!("{}__{:03}", spec.base.name, scenarios.len());
                            s.out_dir = None;
                            s.validate()?;
                            scenarios.push(s);
                        }
                    }
                }
            }
        }
    }
    Ok(scenarios)
}

/// Run every combination, write per-combination artifacts and `ranked.csv`
/// under `out_dir`, and return the ranked rows.
///
/// Combinations run concurrently (`jobs` threads when given); each owns its
/// output directory, and the table is assembled after all complete.
pub fn run_sweep(spec: &SweepSpec, out_dir: &Path, jobs: Option<usize>) -> Result<Vec<SweepRow>> {
    let scenarios = expand(spec)?;
    fs::create_dir_all(out_dir)?;

    let execute = |(i, s): (usize, &Scenario)| -> (usize, Scenario, std::result::Result<Option<f64>, String>, Option<f64>) {
        let dir: PathBuf = out_dir.join(&s.name);
        match run_scenario(s, Some(&dir), false) {
            Ok(outcome) => (
                i,
                s.clone(),
                Ok(outcome.summary.ct),
                outcome.summary.final_tc,
            ),
            Err(err) => (i, s.clone(), Err(err.to_string()), None),
        }
    };

    let mut raw: Vec<_> = if let Some(n) = jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::validation("jobs", e.to_string()))?;
        pool.install(|| scenarios.par_iter().enumerate().map(execute).collect())
    } else {
        scenarios.par_iter().enumerate().map(execute).collect()
    };

    // Finite coverage times first, ascending; failures last; ties by index.
    raw.sort_by(|a, b| {
        let key = |r: &(usize, Scenario, std::result::Result<Option<f64>, String>, Option<f64>)| {
            match &r.2 {
                Ok(Some(ct)) => (0u8, *ct, r.0),
                Ok(None) => (1, f64::MAX, r.0),
                Err(_) => (2, f64::MAX, r.0),
            }
        };
        let (ka, da, ia) = key(a);
        let (kb, db, ib) = key(b);
        ka.cmp(&kb).then(da.total_cmp(&db)).then(ia.cmp(&ib))
    });

    let rows: Vec<SweepRow> = raw
        .into_iter()
        .enumerate()
        .map(|(rank, (_, s, ct, final_tc))| SweepRow {
            rank,
            name: s.name.clone(),
            c: s.planner.c,
            f: s.planner.f,
            ds_index_init: s.planner.ds_index_init.into(),
            orientation: s.planner.orientation_enabled,
            zoning: s.planner.zoning_enabled,
            scaling: s.planner.scaling_enabled,
            status: match &ct {
                Ok(_) => "ok".into(),
                Err(msg) => format!("error: {msg}"),
            },
            ct: ct.unwrap_or(None),
            final_tc,
        })
        .collect();

    let mut table = String::from("rank,name,c,f,ds_index_init,orientation,zoning,scaling,status,ct,final_tc\n");
    for row in &rows {
        table.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.rank,
            row.name,
            row.c,
            row.f,
            row.ds_index_init,
            row.orientation,
            row.zoning,
            row.scaling,
            row.status.replace(',', ";"),
            row.ct.map_or(String::new(), |v| v.to_string()),
            row.final_tc.map_or(String::new(), |v| v.to_string()),
        ));
    }
    fs::write(out_dir.join("ranked.csv"), table)?;
    Ok(rows)
}
