use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::failure::Failure;

/// Collects the files of one run and writes `manifest.json` last.
pub struct OutDir {
    root: PathBuf,
    artifacts: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    format: &'a str,
    params: Value,
    artifacts: &'a [String],
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(root).map_err(|e| Failure::io(format!("cannot create {}: {e}", root.display())))?;
        Ok(OutDir { root: root.to_path_buf(), artifacts: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Failure::io(format!("cannot create {}: {e}", parent.display())))?;
        }
        fs::write(&path, contents).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::io(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Writes the manifest. The output directory itself is not recorded, so
    /// identical runs produce identical manifests wherever they land.
    pub fn finish<P: Serialize>(mut self, command: &str, seed: u64, format: &str, params: &P) -> Result<(), Failure> {
        self.artifacts.sort();
        let params = serde_json::to_value(params).map_err(|e| Failure::io(e.to_string()))?;
        let manifest = Manifest {
            tool: "semwave",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            format,
            params,
            artifacts: &self.artifacts,
        };
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::io(e.to_string()))?;
        text.push('\n');
        let path = self.root.join("manifest.json");
        fs::write(&path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
    }
}
