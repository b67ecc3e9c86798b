//! Atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::failure::Failure;

/// Writes `text` to `path`, or to stdout for `-`. Files are written to a
/// sibling temporary and renamed into place.
pub fn emit(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Failure::config(format!("cannot write to stdout: {e}")));
    }
    write_atomic(Path::new(path), text)
}

pub fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let tmp = temp_sibling(path);
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(Failure::config(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.{}.tmp", std::process::id()))
}

/// Sidecar path for auxiliary JSON next to a table file.
pub fn sidecar(path: &str, suffix: &str) -> Option<String> {
    (path != "-").then(|| format!("{path}.{suffix}.json"))
}
