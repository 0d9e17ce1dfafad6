//! `cellsync report`: bundle every stage's outputs and configs from one
//! output directory into a single `report.json`.

use std::io::Write;
use std::path::Path;

use cellsync_core::Result;
use serde::Serialize;

use crate::args::ReportArgs;
use crate::artifacts::{
    create_out_dir, read_json_value, read_moran_csv, read_sync_csv, require_stage_file,
    write_artifact, write_run_config, MoranRow, SyncRow,
};

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    configs: Configs,
    /// Ground-truth parameters, present only for synthetic datasets.
    #[serde(skip_serializing_if = "Option::is_none")]
    truth: Option<serde_json::Value>,
    sync: Vec<SyncRow>,
    moran: Vec<MoranRow>,
    importance: serde_json::Value,
}

#[derive(Serialize)]
struct Configs {
    #[serde(skip_serializing_if = "Option::is_none")]
    synth: Option<serde_json::Value>,
    sync: serde_json::Value,
    screen: serde_json::Value,
    regress: serde_json::Value,
}

fn optional_json(path: &Path) -> Result<Option<serde_json::Value>> {
    if path.is_file() {
        read_json_value(path).map(Some)
    } else {
        Ok(None)
    }
}

pub fn run(a: &ReportArgs) -> Result<()> {
    let dir = &a.common.out;
    create_out_dir(dir)?;

    let sync_csv = dir.join("sync.csv");
    let moran_csv = dir.join("moran.csv");
    let importance_json = dir.join("importance.json");
    require_stage_file(&sync_csv, "sync")?;
    require_stage_file(&moran_csv, "screen")?;
    require_stage_file(&importance_json, "regress")?;
    let sync_config = dir.join("run_config_sync.json");
    let screen_config = dir.join("run_config_screen.json");
    let regress_config = dir.join("run_config_regress.json");
    require_stage_file(&sync_config, "sync")?;
    require_stage_file(&screen_config, "screen")?;
    require_stage_file(&regress_config, "regress")?;

    let report = Report {
        tool: "cellsync",
        version: env!("CARGO_PKG_VERSION"),
        configs: Configs {
            synth: optional_json(&dir.join("run_config_synth.json"))?,
            sync: read_json_value(&sync_config)?,
            screen: read_json_value(&screen_config)?,
            regress: read_json_value(&regress_config)?,
        },
        truth: optional_json(&dir.join("truth.json"))?,
        sync: read_sync_csv(&sync_csv)?,
        moran: read_moran_csv(&moran_csv)?,
        importance: read_json_value(&importance_json)?,
    };

    write_artifact(dir, "report.json", |w| {
        serde_json::to_writer_pretty(&mut *w, &report)
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        writeln!(w)
    })?;
    write_run_config(dir, "report", a)?;

    println!("wrote {}", dir.join("report.json").display());
    Ok(())
}
