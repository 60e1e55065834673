//! Run directories, versioned CSV files and the run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use super::CliError;

/// Version of every CSV schema written by the driver. Bumped whenever a
/// column is added, removed or reinterpreted.
pub const CSV_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub run_id: String,
    pub command: String,
    pub parameters: Value,
    /// Paths relative to the run directory, in write order.
    pub artifacts: Vec<String>,
    pub duration_seconds: f64,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Command-specific results.
    pub results: serde_json::Map<String, Value>,
}

/// Output directory of one run. Every file written through it is recorded
/// as an artifact; the manifest is written last.
pub struct RunDir {
    root: PathBuf,
    run_id: String,
    command: String,
    parameters: Value,
    artifacts: Vec<String>,
    checks: Vec<Check>,
    results: serde_json::Map<String, Value>,
    started: Instant,
}

impl RunDir {
    /// Create `<out>/<run_id>`. An existing non-empty directory is an error
    /// unless `force`, in which case it is removed first.
    pub fn create(out: &Path, run_id: &str, force: bool, command: &str, parameters: Value) -> Result<Self, CliError> {
        if run_id.is_empty() || run_id.contains(['/', '\\']) || run_id == "." || run_id == ".." {
            return Err(CliError::Config(format!("invalid run id {run_id:?}")));
        }
        let root = out.join(run_id);
        if root.exists() {
            let occupied = fs::read_dir(&root).map_err(CliError::io)?.next().is_some();
            if occupied && !force {
                return Err(CliError::Config(format!(
                    "run directory {} already exists; pass --force to overwrite",
                    root.display()
                )));
            }
            fs::remove_dir_all(&root).map_err(CliError::io)?;
        }
        fs::create_dir_all(&root).map_err(CliError::io)?;
        Ok(Self {
            root,
            run_id: run_id.to_string(),
            command: command.to_string(),
            parameters,
            artifacts: Vec::new(),
            checks: Vec::new(),
            results: serde_json::Map::new(),
            started: Instant::now(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn register(&mut self, rel: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(CliError::io)?;
        }
        self.artifacts.push(rel.to_string());
        Ok(path)
    }

    /// Start a CSV file whose first line is `# prflow <kind> csv v<N>`.
    pub fn csv(&mut self, rel: &str, kind: &str, header: &[&str]) -> Result<CsvFile, CliError> {
        let path = self.register(rel)?;
        CsvFile::create(&path, kind, header)
    }

    pub fn json(&mut self, rel: &str, value: &impl Serialize) -> Result<(), CliError> {
        let path = self.register(rel)?;
        write_json(&path, value)
    }

    /// Record an artifact written by other means, e.g. by a parallel
    /// worker that only knew the path.
    pub fn adopt(&mut self, rel: &str) {
        self.artifacts.push(rel.to_string());
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.results.insert(key.to_string(), v);
    }

    pub fn text(&mut self, rel: &str, body: &str) -> Result<(), CliError> {
        let path = self.register(rel)?;
        fs::write(path, body).map_err(CliError::io)
    }

    /// Write `manifest.json` and return it.
    pub fn finish(self) -> Result<Manifest, CliError> {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let manifest = Manifest {
            run_id: self.run_id,
            command: self.command,
            parameters: self.parameters,
            artifacts: self.artifacts,
            duration_seconds: self.started.elapsed().as_secs_f64(),
            summary: Summary { passed, failed: self.checks.len() - passed },
            checks: self.checks,
            results: self.results,
        };
        write_json(&self.root.join("manifest.json"), &manifest)?;
        Ok(manifest)
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let file = File::create(path).map_err(CliError::io)?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Compute(format!("json: {e}")))?;
    w.write_all(b"\n").map_err(CliError::io)?;
    w.flush().map_err(CliError::io)
}

/// CSV writer with a fixed header. Floats use the shortest representation
/// that round-trips, so identical inputs give byte-identical files.
pub struct CsvFile {
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvFile {
    pub fn create(path: &Path, kind: &str, header: &[&str]) -> Result<Self, CliError> {
        let mut file = BufWriter::new(File::create(path).map_err(CliError::io)?);
        writeln!(file, "# prflow {kind} csv v{CSV_VERSION}").map_err(CliError::io)?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header).map_err(csv_err)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_err)
    }

    pub fn floats(&mut self, values: &[f64]) -> Result<(), CliError> {
        self.row(values.iter().map(|v| fmt_f64(*v)))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(CliError::io)
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Compute(format!("csv: {e}"))
}

/// `NaN` marks quantities that are undefined at a sample, such as
/// curvature where the warping function vanishes.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_to_reuse_a_run_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let mut run = RunDir::create(tmp.path(), "r", false, "test", Value::Null).unwrap();
        let mut csv = run.csv("a.csv", "test", &["x", "y"]).unwrap();
        csv.floats(&[0.1, f64::NAN]).unwrap();
        csv.finish().unwrap();
        let manifest = run.finish().unwrap();
        assert_eq!(manifest.artifacts, vec!["a.csv"]);
        let body = fs::read_to_string(tmp.path().join("r/a.csv")).unwrap();
        assert_eq!(body, "# prflow test csv v1\nx,y\n0.1,NaN\n");

        assert!(matches!(
            RunDir::create(tmp.path(), "r", false, "test", Value::Null),
            Err(CliError::Config(_))
        ));
        RunDir::create(tmp.path(), "r", true, "test", Value::Null).unwrap();
        assert!(!tmp.path().join("r/a.csv").exists());
        assert!(RunDir::create(tmp.path(), "../x", true, "test", Value::Null).is_err());
    }
}
