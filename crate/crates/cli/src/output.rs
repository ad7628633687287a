use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use schelling_core::report::Document;

/// Write to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

/// Provenance document for commands whose main output is CSV: written to
/// `report_out`, else next to `data_out` as `<file>.json`, else to stderr.
pub fn emit_sidecar<C: Serialize, R: Serialize>(
    doc: &Document<C, R>,
    report_out: Option<&Path>,
    data_out: Option<&Path>,
) -> anyhow::Result<()> {
    let json = doc.to_json();
    if let Some(p) = report_out {
        return emit(Some(p), &json);
    }
    if let Some(p) = data_out {
        let mut side = PathBuf::from(p).into_os_string();
        side.push(".json");
        return emit(Some(Path::new(&side)), &json);
    }
    eprintln!("{json}");
    Ok(())
}
