use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use crate::Global;

/// One run's output directory; remembers what was written for the manifest.
pub struct RunDir {
    path: PathBuf,
    files: Vec<String>,
}

// FNV-1a; only needs to be stable across runs and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn config_json<C: Serialize>(g: &Global, name: &str, cmd: &C) -> anyhow::Result<serde_json::Value> {
    Ok(json!({
        "command": name,
        "seed": g.seed,
        "workers": g.workers,
        "args": serde_json::to_value(cmd)?,
    }))
}

impl RunDir {
    pub fn create<C: Serialize>(g: &Global, name: &str, cmd: &C) -> anyhow::Result<Self> {
        let tag = match &g.tag {
            Some(t) => t.clone(),
            None => format!("{:016x}", fnv1a(config_json(g, name, cmd)?.to_string().as_bytes())),
        };
        let path = g.out.join(name).join(tag);
        fs::create_dir_all(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok(RunDir { path, files: Vec::new() })
    }

    pub fn write(&mut self, file: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let target = self.path.join(file);
        fs::write(&target, contents).with_context(|| format!("writing {}", target.display()))?;
        if !self.files.iter().any(|f| f == file) {
            self.files.push(file.to_string());
        }
        Ok(target)
    }

    pub fn write_json<T: Serialize>(&mut self, file: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(file, &text)
    }

    /// Writes `manifest.json`; a failed run still records what it got to.
    pub fn finish<C: Serialize>(
        &mut self,
        g: &Global,
        name: &str,
        cmd: &C,
        err: Option<&anyhow::Error>,
    ) -> anyhow::Result<()> {
        let mut manifest = config_json(g, name, cmd)?;
        manifest["version"] = json!(env!("CARGO_PKG_VERSION"));
        manifest["out"] = json!(self.path.display().to_string());
        manifest["outputs"] = json!(self.files);
        manifest["status"] = match err {
            None => json!("ok"),
            Some(e) => json!(format!("{e:#}")),
        };
        self.write_json("manifest.json", &manifest)?;
        Ok(())
    }
}

pub fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
