//! On-disk cache of Miller bases, one JSON file per `(p, k, cuspidal)`.
//!
//! Files are replaced atomically. Anything unreadable is treated as a miss.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use log::{debug, warn};
use mmfp_core::field::{Field, Prime};
use mmfp_core::spaces::miller_basis;
use mmfp_core::{BasisSource, Error, FormSpace, QSeries};
use serde::{Deserialize, Serialize};

pub const FORMAT_TAG: &str = "mmfp-cache-v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub format: String,
    pub p: String,
    pub k: String,
    pub cuspidal: bool,
    pub precision: String,
    pub rows: Vec<Vec<String>>,
}

impl CacheEntry {
    pub fn from_space(space: &FormSpace) -> CacheEntry {
        CacheEntry {
            format: FORMAT_TAG.to_string(),
            p: space.p().to_string(),
            k: space.weight().to_string(),
            cuspidal: space.is_cuspidal(),
            precision: space.precision().to_string(),
            rows: space
                .basis()
                .iter()
                .map(|f| {
                    f.coefficients()
                        .iter()
                        .map(|c| c.prime_residue().unwrap_or(0).to_string())
                        .collect()
                })
                .collect(),
        }
    }

    /// `(p, k, precision)` if the numeric fields parse.
    fn key(&self) -> Option<(u32, u32, usize)> {
        Some((self.p.parse().ok()?, self.k.parse().ok()?, self.precision.parse().ok()?))
    }

    /// Rebuilds and revalidates the space.
    pub fn to_space(&self) -> Option<FormSpace> {
        let (p, k, precision) = self.key()?;
        let p = Prime::modular(p).ok()?;
        let field = Field::prime(p);
        let mut basis = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let coeffs = row
                .iter()
                .map(|c| c.parse::<u32>().ok().filter(|&r| r < p.get()).map(|r| field.from_u64(r as u64)))
                .collect::<Option<Vec<_>>>()?;
            basis.push(QSeries::new(field, k, coeffs).ok()?);
        }
        FormSpace::from_rows(p, k, self.cuspidal, precision, basis).ok()
    }
}

pub fn file_name(p: u32, k: u32, cuspidal: bool) -> String {
    format!("basis-p{p}-k{k}-{}.json", if cuspidal { "S" } else { "M" })
}

/// Writes `entry` into `dir` through a temporary file and a rename.
pub fn cache_store(entry: &CacheEntry, dir: &Path) -> io::Result<PathBuf> {
    let (p, k, _) = entry
        .key()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "malformed cache entry"))?;
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(p, k, entry.cuspidal));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, entry)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// The entry stored at `path`, or `None` if it is missing, unparsable or
/// carries another format tag.
pub fn cache_load(path: &Path) -> Option<CacheEntry> {
    let text = fs::read_to_string(path).ok()?;
    let entry: CacheEntry = match serde_json::from_str(&text) {
        Ok(e) => e,
        Err(e) => {
            debug!("ignoring {}: {e}", path.display());
            return None;
        }
    };
    if entry.format != FORMAT_TAG {
        debug!("ignoring {}: format {:?}", path.display(), entry.format);
        return None;
    }
    Some(entry)
}

/// `BasisSource` backed by a cache directory, with an in-process memo.
pub struct CachedBasis {
    dir: PathBuf,
    memo: Mutex<HashMap<(u32, u32, bool), FormSpace>>,
}

impl CachedBasis {
    pub fn new(dir: impl Into<PathBuf>) -> CachedBasis {
        CachedBasis {
            dir: dir.into(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Stored space for the key if it has at least `precision` coefficients
    /// and matches the key it is filed under.
    pub fn lookup(&self, k: u32, p: Prime, precision: usize, cuspidal: bool) -> Option<FormSpace> {
        let path = self.dir.join(file_name(p.get(), k, cuspidal));
        let space = cache_load(&path)?.to_space()?;
        let matches = space.p() == p && space.weight() == k && space.is_cuspidal() == cuspidal;
        if !matches || space.precision() < precision {
            return None;
        }
        Some(space)
    }
}

impl BasisSource for CachedBasis {
    fn basis(&self, k: u32, p: Prime, precision: usize, cuspidal: bool) -> Result<FormSpace, Error> {
        let key = (p.get(), k, cuspidal);
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(space) = memo.get(&key) {
            if space.precision() >= precision {
                return space.truncate(precision);
            }
        }
        let space = match self.lookup(k, p, precision, cuspidal) {
            Some(space) => space,
            None => {
                let space = miller_basis(k, p, precision, cuspidal)?;
                if let Err(e) = cache_store(&CacheEntry::from_space(&space), &self.dir) {
                    warn!("could not write basis cache in {}: {e}", self.dir.display());
                }
                space
            }
        };
        let out = space.truncate(precision)?;
        memo.insert(key, space);
        Ok(out)
    }
}
