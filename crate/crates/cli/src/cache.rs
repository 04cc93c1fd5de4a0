//! Append-only JSON-lines result cache, one file per directory, guarded by
//! an advisory lock on a sibling lock file.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::record::ResultRecord;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "B0_CACHE_DIR";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// `$B0_CACHE_DIR`, else `$XDG_CACHE_HOME/b0`, else `~/.cache/b0`,
    /// else `.b0-cache`.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os(CACHE_ENV) {
            return d.into();
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&d).join("b0");
        }
        if let Some(h) = std::env::var_os("HOME") {
            return Path::new(&h).join(".cache").join("b0");
        }
        PathBuf::from(".b0-cache")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn results_path(&self) -> PathBuf {
        self.dir.join("results.jsonl")
    }

    fn lock_file(&self) -> io::Result<File> {
        OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join("results.lock"))
    }

    /// Most recent record with this key. Unparseable lines are skipped.
    pub fn lookup(&self, hash: &str, command: &str, version: &str) -> io::Result<Option<ResultRecord>> {
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        let file = match File::open(self.results_path()) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut found = None;
        for line in BufReader::new(file).lines() {
            let Ok(r) = serde_json::from_str::<ResultRecord>(&line?) else { continue };
            if r.hash == hash && r.command == command && r.version == version {
                found = Some(r);
            }
        }
        Ok(found)
    }

    pub fn append(&self, record: &ResultRecord) -> io::Result<()> {
        let lock = self.lock_file()?;
        lock.lock()?;
        let mut f = OpenOptions::new().create(true).append(true).open(self.results_path())?;
        let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
        line.push('\n');
        f.write_all(line.as_bytes())?;
        f.sync_data()
    }

    pub fn len(&self) -> io::Result<usize> {
        match std::fs::read_to_string(self.results_path()) {
            Ok(s) => Ok(s.lines().filter(|l| !l.trim().is_empty()).count()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(e),
        }
    }

    pub fn is_empty(&self) -> io::Result<bool> {
        Ok(self.len()? == 0)
    }
}
