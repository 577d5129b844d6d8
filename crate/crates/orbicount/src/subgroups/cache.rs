//! Disk cache for low-index results, keyed by presentation content hash and
//! search depth. Writes are atomic (temp file + rename), so concurrent runs
//! can share a cache directory.

use super::coset::{CosetTable, CosetTableJson};
use crate::error::Result;
use crate::presentations::Presentation;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct CacheFile {
    presentation_hash: String,
    max_index: usize,
    tables: Vec<CosetTableJson>,
}

fn cache_path(dir: &Path, p: &Presentation, max_index: usize) -> PathBuf {
    dir.join(format!("lowindex_{:016x}_{max_index}.json", p.content_hash()))
}

/// Load cached class-representative tables; `None` on any miss or mismatch.
pub fn load_tables(dir: &Path, p: &Presentation, max_index: usize) -> Option<Vec<CosetTable>> {
    let text = std::fs::read_to_string(cache_path(dir, p, max_index)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.max_index != max_index
        || file.presentation_hash != format!("{:016x}", p.content_hash())
    {
        return None;
    }
    let mut tables = Vec::with_capacity(file.tables.len());
    for j in &file.tables {
        let t = CosetTable::from_json(j, p.generator_count()).ok()?;
        t.validate_against(p).ok()?;
        tables.push(t);
    }
    Some(tables)
}

pub fn store_tables(
    dir: &Path,
    p: &Presentation,
    max_index: usize,
    tables: &[CosetTable],
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let file = CacheFile {
        presentation_hash: format!("{:016x}", p.content_hash()),
        max_index,
        tables: tables.iter().map(|t| t.to_json()).collect(),
    };
    let final_path = cache_path(dir, p, max_index);
    let tmp_path = final_path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp_path, serde_json::to_string(&file)?)?;
    std::fs::rename(&tmp_path, &final_path)?;
    Ok(())
}
