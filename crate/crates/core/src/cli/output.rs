use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::Error;

/// Files written under temporary names and renamed into place only once
/// every one of them has been written. Dropping an uncommitted set removes
/// the temporaries.
pub struct StagedFiles {
    staged: Vec<(PathBuf, PathBuf)>,
    committed: bool,
}

fn temp_name(target: &Path) -> PathBuf {
    let name = target.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    target.with_file_name(format!(".{name}.partial"))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

impl StagedFiles {
    pub fn new() -> Self {
        StagedFiles { staged: Vec::new(), committed: false }
    }

    /// Stages `target`, handing `fill` a buffered writer on the temporary.
    pub fn write_with<F>(&mut self, target: PathBuf, fill: F) -> Result<(), Error>
    where
        F: FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
    {
        let tmp = temp_name(&target);
        let file = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        self.staged.push((tmp.clone(), target));
        let mut w = BufWriter::new(file);
        fill(&mut w).and_then(|_| w.flush()).map_err(io_err(&tmp))
    }

    /// Stages a file produced by `make`, which receives the temporary path.
    pub fn write_path<F, T>(&mut self, target: PathBuf, make: F) -> Result<T, Error>
    where
        F: FnOnce(&Path) -> Result<T, Error>,
    {
        let tmp = temp_name(&target);
        self.staged.push((tmp.clone(), target));
        make(&tmp)
    }

    pub fn commit(mut self) -> Result<(), Error> {
        for (tmp, target) in &self.staged {
            fs::rename(tmp, target).map_err(io_err(target))?;
        }
        self.committed = true;
        Ok(())
    }
}

impl Drop for StagedFiles {
    fn drop(&mut self) {
        if !self.committed {
            for (tmp, _) in &self.staged {
                let _ = fs::remove_file(tmp);
            }
        }
    }
}
