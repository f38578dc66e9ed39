use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::obstruct::{resolve_profile, KnotRecord};
use crate::profiles::DProfile;

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Directory of profiles keyed by a hash of the cover spec and the files it names.
///
/// Entries are written once, via a temporary file and a rename, and never replaced.
#[derive(Clone, Debug)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<ProfileCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(ProfileCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 of the cover fingerprint.
    pub fn key(rec: &KnotRecord) -> Result<String> {
        let digest = Sha256::digest(rec.cover.fingerprint()?);
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.profile"))
    }

    /// Returns the cached profile, computing and storing it on a miss.
    pub fn resolve(&self, rec: &KnotRecord) -> Result<DProfile> {
        if !rec.cover.is_known() {
            return resolve_profile(rec);
        }
        let key = Self::key(rec)?;
        let path = self.path_for(&key);
        if let Ok(text) = fs::read_to_string(&path) {
            let p = DProfile::from_text(&text, rec.cover.to_string())?;
            crate::obstruct::validate_profile(rec, &p)?;
            return Ok(p);
        }
        let p = resolve_profile(rec)?;
        self.store(&path, &p.to_text())?;
        Ok(p)
    }

    fn store(&self, path: &Path, text: &str) -> Result<()> {
        let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{n}", std::process::id()));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
            if path.exists() {
                fs::remove_file(&tmp)
            } else {
                fs::rename(&tmp, path)
            }
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Error::io(path, e)
        })
    }
}
