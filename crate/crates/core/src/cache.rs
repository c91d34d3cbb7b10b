//! Line-delimited JSON store of per-prime Frobenius data, keyed by the minimal
//! model and the prime. Later lines override earlier ones.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::elliptic::FrobeniusData;
use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct FrobeniusCache {
    path: Option<PathBuf>,
    entries: Mutex<HashMap<(String, u64), FrobeniusData>>,
    writer: Mutex<Option<File>>,
}

impl FrobeniusCache {
    /// An in-memory cache.
    pub fn memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists and appends new records to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: FrobeniusData = serde_json::from_str(&line)
                    .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?;
                entries.insert((rec.curve.clone(), rec.q), rec);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self { path: Some(path), entries: Mutex::new(entries), writer: Mutex::new(Some(file)) })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, curve: &str, q: u64) -> Option<FrobeniusData> {
        self.entries.lock().unwrap().get(&(curve.to_string(), q)).cloned()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn put(&self, data: FrobeniusData) -> Result<()> {
        let line = serde_json::to_string(&data)?;
        if let Some(file) = self.writer.lock().unwrap().as_mut() {
            writeln!(file, "{line}")?;
            file.flush()?;
        }
        self.entries.lock().unwrap().insert((data.curve.clone(), data.q), data);
        Ok(())
    }
}
