//! Memoized crystals and R tables, with optional on-disk persistence.

use std::collections::HashMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use crate::crystal::{Crystal, CrystalLabel};
use crate::error::{Error, Result};
use crate::rmatrix::{build_r_table, RTable, RTableSource};

/// Environment variable naming the R-table cache directory.
pub const CACHE_ENV: &str = "CRYSTALCA_CACHE";

/// Directory of persisted R tables, one file per ordered label pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheManifest {
    dir: PathBuf,
}

impl CacheManifest {
    pub const VERSION: u32 = 1;

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CacheManifest { dir: dir.into() }
    }

    /// `--cache-dir` first, then `$CRYSTALCA_CACHE`.
    pub fn resolve(flag: Option<&Path>) -> Option<Self> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(CacheManifest::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, left: CrystalLabel, right: CrystalLabel) -> PathBuf {
        self.dir.join(format!(
            "r-n{}-{}x{}-{}x{}.v{}.txt",
            left.rank(),
            left.rows(),
            left.cols(),
            right.rows(),
            right.cols(),
            Self::VERSION
        ))
    }

    /// Every table file present, keyed by `(n, a, j, b, k)`.
    pub fn entries(&self) -> Result<Vec<((usize, usize, usize, usize, usize), PathBuf)>> {
        let mut out = Vec::new();
        if !self.dir.exists() {
            return Ok(out);
        }
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let Some(name) = path.file_name().and_then(|s| s.to_str()) else { continue };
            if let Some(key) = parse_file_name(name) {
                out.push((key, path));
            }
        }
        out.sort();
        Ok(out)
    }

    fn load(&self, left: Arc<Crystal>, right: Arc<Crystal>) -> Result<Option<RTable>> {
        let path = self.path_for(left.label(), right.label());
        if !path.exists() {
            return Ok(None);
        }
        let file = fs::File::open(&path)?;
        RTable::from_reader(left, right, BufReader::new(file))
            .map(Some)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    fn store(&self, table: &RTable) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(table.left().label(), table.right().label());
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, table.to_text())?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

fn parse_file_name(name: &str) -> Option<(usize, usize, usize, usize, usize)> {
    let rest = name.strip_prefix("r-n")?.strip_suffix(&format!(".v{}.txt", CacheManifest::VERSION))?;
    let mut parts = rest.split('-');
    let n = parts.next()?.parse().ok()?;
    let shape = |s: Option<&str>| -> Option<(usize, usize)> {
        let (a, j) = s?.split_once('x')?;
        Some((a.parse().ok()?, j.parse().ok()?))
    };
    let (a, j) = shape(parts.next())?;
    let (b, k) = shape(parts.next())?;
    parts.next().is_none().then_some((n, a, j, b, k))
}

/// Shared, thread-safe registry of crystals and R tables.
#[derive(Debug, Default)]
pub struct Engine {
    crystals: RwLock<HashMap<CrystalLabel, Arc<Crystal>>>,
    tables: RwLock<HashMap<(CrystalLabel, CrystalLabel), Arc<RTable>>>,
    cache: Option<CacheManifest>,
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    pub fn with_cache(cache: Option<CacheManifest>) -> Self {
        Engine { cache, ..Engine::default() }
    }

    pub fn cache(&self) -> Option<&CacheManifest> {
        self.cache.as_ref()
    }

    pub fn crystal(&self, label: CrystalLabel) -> Arc<Crystal> {
        if let Some(c) = self.crystals.read().unwrap().get(&label) {
            return c.clone();
        }
        let built = Arc::new(Crystal::new(label));
        self.crystals.write().unwrap().entry(label).or_insert(built).clone()
    }

    pub fn r_table(&self, left: CrystalLabel, right: CrystalLabel) -> Result<Arc<RTable>> {
        if let Some(t) = self.tables.read().unwrap().get(&(left, right)) {
            return Ok(t.clone());
        }
        let (lc, rc) = (self.crystal(left), self.crystal(right));
        let table = match self.cache.as_ref().map(|c| c.load(lc.clone(), rc.clone())).transpose()?.flatten() {
            Some(t) => t,
            None => {
                let t = build_r_table(lc, rc)?;
                if let Some(cache) = &self.cache {
                    cache.store(&t)?;
                }
                t
            }
        };
        let table = Arc::new(table);
        Ok(self.tables.write().unwrap().entry((left, right)).or_insert(table).clone())
    }
}

impl RTableSource for Engine {
    fn r_table(&self, left: CrystalLabel, right: CrystalLabel) -> Result<Arc<RTable>> {
        Engine::r_table(self, left, right)
    }
}
