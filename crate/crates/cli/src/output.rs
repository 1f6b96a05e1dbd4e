use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use crate::args::{Command, Options};
use crate::error::CliError;
use crate::plot::{emit_plot, PlotLabels};

/// Output directory that remembers what it wrote, for the manifest.
pub struct OutDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutDir {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn path_for(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.root.join(name)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.path_for(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
        text.push('\n');
        self.text(name, &text)
    }

    pub fn plot(&mut self, name: &str, rows: &[(f64, f64)], labels: &PlotLabels) -> Result<f64, CliError> {
        let path = self.path_for(name);
        emit_plot(rows, labels, &path)
    }

    pub fn manifest(
        mut self,
        command: Command,
        opts: &Options,
        spec: Option<&serde_json::Value>,
        status: &str,
        wall: Duration,
    ) -> Result<(), CliError> {
        let files = std::mem::take(&mut self.files);
        let m = serde_json::json!({
            "command": command.name(),
            "config": opts,
            "spec": spec,
            "version": env!("CARGO_PKG_VERSION"),
            "status": status,
            "outputs": files,
            "wall_time_seconds": wall.as_secs_f64(),
        });
        self.json("manifest.json", &m)
    }
}
