//! CSV and JSON artifact writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use torusnoise::{SpectrumReport, WignerGrid};

use crate::CliError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never sees a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// `re,im,cluster_id,multiplicity`, one row per eigenvalue in sorted order.
pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut s = String::from("re,im,cluster_id,multiplicity\n");
    for (z, &c) in report.eigenvalues.iter().zip(&report.cluster_of) {
        writeln!(s, "{},{},{},{}", z.re, z.im, c, report.clusters[c].multiplicity).unwrap();
    }
    s
}

/// `cluster_id,re,im,multiplicity`, one row per cluster.
pub fn clusters_csv(report: &SpectrumReport) -> String {
    let mut s = String::from("cluster_id,re,im,multiplicity\n");
    for (i, c) in report.clusters.iter().enumerate() {
        let z = c.representative;
        writeln!(s, "{i},{},{},{}", z.re, z.im, c.multiplicity).unwrap();
    }
    s
}

pub fn series_csv(values: &[f64]) -> String {
    let mut s = String::from("iteration,value\n");
    for (k, v) in values.iter().enumerate() {
        writeln!(s, "{k},{v}").unwrap();
    }
    s
}

/// Row-major grid, `2N` values per line, no header.
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let mut s = String::new();
    for row in grid.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

/// Collects artifacts written under one root, as paths relative to it.
#[derive(Debug)]
pub struct ArtifactSink {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl ArtifactSink {
    pub fn new(root: &Path) -> Result<Self, CliError> {
        create_dir(root)?;
        Ok(ArtifactSink {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn text(&mut self, rel: impl AsRef<Path>, contents: &str) -> Result<(), CliError> {
        let rel = rel.as_ref();
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            create_dir(parent)?;
        }
        write_atomic(&path, contents.as_bytes())?;
        self.written.push(rel.to_path_buf());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, rel: impl AsRef<Path>, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.text(rel, &text)
    }

    /// Records a file written elsewhere under the same root.
    pub fn record(&mut self, rel: PathBuf) {
        self.written.push(rel);
    }

    pub fn into_artifacts(self) -> Vec<PathBuf> {
        self.written
    }
}
