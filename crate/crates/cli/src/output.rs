//! All-or-nothing writes of a run's artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::run::Artifact;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes every artifact to a temporary sibling, then renames them all into
/// place. On failure the temporaries and any already-renamed targets are
/// removed, so `dir` never holds a partial set of outputs.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let staged: Vec<(PathBuf, PathBuf)> = artifacts
        .iter()
        .map(|a| {
            (
                dir.join(format!(".{}.tmp{}", a.name, std::process::id())),
                dir.join(a.name),
            )
        })
        .collect();
    let cleanup = |upto_renamed: usize| {
        for (i, (tmp, target)) in staged.iter().enumerate() {
            let _ = fs::remove_file(tmp);
            if i < upto_renamed {
                let _ = fs::remove_file(target);
            }
        }
    };
    for ((tmp, _), artifact) in staged.iter().zip(artifacts) {
        if let Err(e) = fs::write(tmp, &artifact.bytes) {
            cleanup(0);
            return Err(io_error(tmp)(e));
        }
    }
    for (i, (tmp, target)) in staged.iter().enumerate() {
        if let Err(e) = fs::rename(tmp, target) {
            cleanup(i);
            return Err(io_error(target)(e));
        }
    }
    Ok(staged.into_iter().map(|(_, target)| target).collect())
}
