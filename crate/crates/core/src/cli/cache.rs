//! On-disk point-count cache: one file `<digest>-<n>.count` per record,
//! holding the count in decimal.

use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::variety::{count_points, SchemeSpec};

#[derive(Debug, Clone, Default)]
pub struct CountCache {
    dir: Option<PathBuf>,
    verify: bool,
}

impl CountCache {
    /// With `verify`, every hit is recomputed and compared.
    pub fn new(dir: Option<&Path>, verify: bool) -> Result<Self, CliError> {
        if let Some(d) = dir {
            fs::create_dir_all(d).map_err(|e| CliError::Io(format!("{}: {e}", d.display())))?;
        }
        Ok(CountCache { dir: dir.map(Path::to_path_buf), verify })
    }

    fn path(&self, digest: &str, n: u32) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{digest}-{n}.count")))
    }

    fn read(&self, digest: &str, n: u32) -> Option<u64> {
        let text = fs::read_to_string(self.path(digest, n)?).ok()?;
        text.trim().parse().ok()
    }

    fn write(&self, digest: &str, n: u32, count: u64) -> Result<(), CliError> {
        let Some(path) = self.path(digest, n) else {
            return Ok(());
        };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, format!("{count}\n")).and_then(|_| fs::rename(&tmp, &path)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// `#X(F_{q^n})`, from the cache when a valid record exists.
    pub fn count(&self, s: &SchemeSpec, n: u32) -> Result<u64, CliError> {
        let digest = s.digest();
        if let Some(cached) = self.read(&digest, n) {
            if !self.verify {
                return Ok(cached);
            }
            let fresh = count_points(s, n)?;
            if fresh != cached {
                return Err(CliError::CacheMismatch { digest, n, cached, fresh });
            }
            return Ok(fresh);
        }
        let fresh = count_points(s, n)?;
        self.write(&digest, n, fresh)?;
        Ok(fresh)
    }

    /// Counts for `n = 1..=big_n`.
    pub fn series(&self, s: &SchemeSpec, big_n: u32) -> Result<Vec<u64>, CliError> {
        (1..=big_n).map(|n| self.count(s, n)).collect()
    }
}
