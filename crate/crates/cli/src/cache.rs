//! On-disk reference-height cache: one JSON file per `(test, m)`, named by the
//! SHA-256 of the key. Unreadable or mismatched entries count as misses and
//! are overwritten by the next store.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use homcolor_core::bounds::HeightCache;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct Entry {
    test: String,
    m: usize,
    height: i64,
}

pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(DiskCache { dir: dir.to_path_buf() })
    }

    pub fn entry_path(&self, test: &str, m: usize) -> PathBuf {
        let mut h = Sha256::new();
        h.update(test.as_bytes());
        h.update([0u8]);
        h.update(m.to_string().as_bytes());
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }

    fn read(&self, test: &str, m: usize) -> Option<i64> {
        let text = fs::read_to_string(self.entry_path(test, m)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.test == test && e.m == m).then_some(e.height)
    }

    fn write(&self, test: &str, m: usize, height: i64) -> std::io::Result<()> {
        let path = self.entry_path(test, m);
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        let body = serde_json::to_string(&Entry {
            test: test.to_string(),
            m,
            height,
        })?;
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        // rename is atomic, so readers see either the old or the new entry
        fs::rename(&tmp, &path)
    }
}

impl HeightCache for DiskCache {
    fn get(&mut self, test: &str, m: usize) -> Option<i64> {
        self.read(test, m)
    }

    fn put(&mut self, test: &str, m: usize, h: i64) {
        // a failed store only costs a recomputation later
        let _ = self.write(test, m, h);
    }
}
