//! On-disk cache of cell sets and homology tables.
//!
//! Reads are best effort: a missing or unreadable entry is recomputed.
//! Writes go through a temporary file and a rename.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use slitkit::{CellSet, Coefficients, ModuliIndex, Result};

pub const CACHE_ENV: &str = "SLITKIT_CACHE";
pub const DEFAULT_DIR: &str = ".slitkit-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Something to store once a command has succeeded.
#[derive(Clone, Debug)]
pub enum Entry {
    /// A cell set in its cache format.
    Cells { index: ModuliIndex, text: Vec<u8> },
    Table {
        index: ModuliIndex,
        coefficients: Coefficients,
        json: String,
    },
}

impl Entry {
    pub fn cells(cells: &CellSet) -> Result<Entry> {
        let mut text = Vec::new();
        cells.write_cache(&mut text)?;
        Ok(Entry::Cells {
            index: *cells.index(),
            text,
        })
    }
}

impl Cache {
    pub fn from_env() -> Cache {
        let dir = std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { dir }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn cells_path(&self, ix: &ModuliIndex) -> PathBuf {
        self.dir.join(format!("cells-g{}-n{}-m{}.txt", ix.g, ix.n, ix.m))
    }

    pub fn table_path(&self, ix: &ModuliIndex, co: Coefficients) -> PathBuf {
        let tag = co.tag().to_ascii_lowercase();
        self.dir.join(format!("homology-g{}-n{}-m{}-{tag}.json", ix.g, ix.n, ix.m))
    }

    pub fn cells(&self, ix: &ModuliIndex) -> Option<CellSet> {
        let file = fs::File::open(self.cells_path(ix)).ok()?;
        let cells = CellSet::read_cache(BufReader::new(file)).ok()?;
        (cells.index() == ix).then_some(cells)
    }

    pub fn table(&self, ix: &ModuliIndex, co: Coefficients) -> Option<String> {
        let text = fs::read_to_string(self.table_path(ix, co)).ok()?;
        let t = slitkit::HomologyTable::from_json(text.trim_end()).ok()?;
        (t.index == *ix && t.coefficients == co).then(|| text.trim_end().to_string())
    }

    pub fn store(&self, entry: &Entry) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let (path, bytes) = match entry {
            Entry::Cells { index, text } => (self.cells_path(index), text.clone()),
            Entry::Table {
                index,
                coefficients,
                json,
            } => (self.table_path(index, *coefficients), format!("{json}\n").into_bytes()),
        };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn store_all(&self, entries: &[Entry]) -> Result<()> {
        entries.iter().try_for_each(|e| self.store(e))
    }
}
