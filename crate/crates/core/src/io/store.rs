use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::season::{ExperimentConfig, SimReport, REPORT_SCHEMA_VERSION};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

const CONFIG_FILE: &str = "config.json";
const REPORT_JSON: &str = "report.json";
const REPORT_CSV: &str = "report.csv";

/// Snapshot of what produced a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub run_id: String,
    pub master_seed: u64,
    pub config: ExperimentConfig,
}

/// Directory of immutable runs, one subdirectory per run id.
#[derive(Debug, Clone)]
pub struct RunStore {
    root: PathBuf,
}

impl RunStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(RunStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn run_dir(&self, run_id: &str) -> PathBuf {
        self.root.join(run_id)
    }

    /// Content-derived id: the same config and seed always map to the same id.
    pub fn default_run_id(config: &ExperimentConfig, master_seed: u64) -> Result<String> {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(config)?);
        hasher.update(master_seed.to_le_bytes());
        let digest = hasher.finalize();
        let mut id = String::from("run-");
        for b in &digest[..8] {
            write!(id, "{b:02x}").expect("writing to a String cannot fail");
        }
        Ok(id)
    }

    /// Writes config snapshot, JSON report and Table-1 CSV under a new run
    /// directory. An existing run is never touched.
    pub fn write_report(&self, report: &SimReport, run_id: Option<&str>) -> Result<String> {
        let run_id = match run_id {
            Some(id) => id.to_string(),
            None => Self::default_run_id(&report.config, report.master_seed)?,
        };
        if run_id.is_empty() || run_id.contains(['/', '\\']) || run_id.starts_with('.') {
            return Err(Error::Validation(format!("invalid run id {run_id:?}")));
        }
        let dir = self.run_dir(&run_id);
        match fs::create_dir(&dir) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                return Err(Error::RunExists(run_id));
            }
            Err(e) => return Err(e.into()),
        }
        let manifest = RunManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            run_id: run_id.clone(),
            master_seed: report.master_seed,
            config: report.config.clone(),
        };
        fs::write(dir.join(CONFIG_FILE), to_json(&manifest)?)?;
        fs::write(dir.join(REPORT_JSON), to_json(report)?)?;
        fs::write(dir.join(REPORT_CSV), report_csv(report)?)?;
        Ok(run_id)
    }

    pub fn read_report(&self, run_id: &str) -> Result<SimReport> {
        let text = fs::read_to_string(self.run_dir(run_id).join(REPORT_JSON))?;
        check_version(&text, REPORT_SCHEMA_VERSION)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn read_manifest(&self, run_id: &str) -> Result<RunManifest> {
        let text = fs::read_to_string(self.run_dir(run_id).join(CONFIG_FILE))?;
        check_version(&text, MANIFEST_SCHEMA_VERSION)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Run ids in lexical order.
    pub fn runs(&self) -> Result<Vec<String>> {
        let mut ids = Vec::new();
        for entry in fs::read_dir(&self.root)? {
            let entry = entry?;
            if entry.file_type()?.is_dir() {
                ids.push(entry.file_name().to_string_lossy().into_owned());
            }
        }
        ids.sort();
        Ok(ids)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn check_version(text: &str, expected: u32) -> Result<()> {
    #[derive(Deserialize)]
    struct Versioned {
        schema_version: Option<u32>,
    }
    let v: Versioned = serde_json::from_str(text)?;
    match v.schema_version {
        Some(found) if found == expected => Ok(()),
        Some(found) => Err(Error::SchemaVersion { found, expected }),
        None => Err(Error::SchemaVersion { found: 0, expected }),
    }
}

/// Table-1 layout: one row per batch with the focal win rate at each seat,
/// then the row mean; a final `all` row aggregates every batch.
pub fn report_csv(report: &SimReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let seats = report.seat_win_rate.len();
    let mut header = vec!["batch".to_string()];
    header.extend((0..seats).map(|s| format!("seat_{s}")));
    header.push("mean".to_string());
    w.write_record(&header)?;
    for b in &report.batches {
        let mut rec = vec![b.batch.to_string()];
        rec.extend(b.seat_win_rate.iter().map(|r| r.to_string()));
        rec.push(b.mean.to_string());
        w.write_record(&rec)?;
    }
    let mut rec = vec!["all".to_string()];
    rec.extend(report.seat_win_rate.iter().map(|r| r.to_string()));
    rec.push(report.focal.rate.to_string());
    w.write_record(&rec)?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
