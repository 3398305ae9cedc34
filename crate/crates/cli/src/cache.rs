//! Reduction-table cache files.
//!
//! One JSON file per (level, weight):
//!
//! ```json
//! {"format_version": 1, "level": 1, "weight": 4,
//!  "basis": ["zeta(4)"],
//!  "rows": [{"index": "zeta(1,3)", "coeffs": [[0, "1/4"]]}, …]}
//! ```
//!
//! Rationals are serialized as `p/q` decimal strings. The cache directory
//! comes from `--cache`, then the `PERIODLAB_CACHE_DIR` environment
//! variable, then the platform cache directory; `--no-cache` disables it.
//! Unreadable or mismatched files are ignored and rebuilt.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use periodlab_core::rational::{format_q, parse_q};
use periodlab_core::relations::{build_table, ReductionTable, RelationError, TableSet};

use crate::expr::parse_index;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    level: u8,
    weight: u32,
    basis: Vec<String>,
    rows: Vec<CacheRow>,
}

#[derive(Serialize, Deserialize)]
struct CacheRow {
    index: String,
    coeffs: Vec<(usize, String)>,
}

/// Resolves the cache directory from the flag, the environment, and the
/// platform default, in that order.
pub fn resolve_cache_dir(flag: Option<PathBuf>, no_cache: bool) -> Option<PathBuf> {
    if no_cache {
        return None;
    }
    if let Some(dir) = flag {
        return Some(dir);
    }
    if let Ok(dir) = std::env::var("PERIODLAB_CACHE_DIR") {
        if !dir.is_empty() {
            return Some(PathBuf::from(dir));
        }
    }
    if let Ok(dir) = std::env::var("XDG_CACHE_HOME") {
        if !dir.is_empty() {
            return Some(PathBuf::from(dir).join("periodlab"));
        }
    }
    if let Ok(home) = std::env::var("HOME") {
        if !home.is_empty() {
            return Some(PathBuf::from(home).join(".cache").join("periodlab"));
        }
    }
    None
}

fn table_path(dir: &Path, level: u8, weight: u32) -> PathBuf {
    dir.join(format!("table_l{level}_w{weight}.json"))
}

fn to_file(table: &ReductionTable) -> CacheFile {
    CacheFile {
        format_version: FORMAT_VERSION,
        level: table.level,
        weight: table.weight,
        basis: table.basis.iter().map(|p| p.to_string()).collect(),
        rows: table
            .rows
            .iter()
            .map(|(p, coeffs)| CacheRow {
                index: p.to_string(),
                coeffs: coeffs.iter().map(|(pos, c)| (*pos, format_q(c))).collect(),
            })
            .collect(),
    }
}

fn from_file(file: CacheFile) -> Option<ReductionTable> {
    if file.format_version != FORMAT_VERSION {
        return None;
    }
    let basis = file
        .basis
        .iter()
        .map(|s| parse_index(s).ok())
        .collect::<Option<Vec<_>>>()?;
    let mut rows = std::collections::BTreeMap::new();
    for row in file.rows {
        let index = parse_index(&row.index).ok()?;
        let coeffs = row
            .coeffs
            .into_iter()
            .map(|(pos, c)| Some((pos, parse_q(&c)?)))
            .collect::<Option<Vec<_>>>()?;
        rows.insert(index, coeffs);
    }
    Some(ReductionTable { weight: file.weight, level: file.level, basis, rows })
}

/// Writes one table; errors are reported, not fatal.
pub fn save_table(dir: &Path, table: &ReductionTable) {
    let write = || -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let path = table_path(dir, table.level, table.weight);
        let json = serde_json::to_string(&to_file(table)).expect("serializable");
        fs::write(path, json)
    };
    if let Err(e) = write() {
        eprintln!("warning: could not write cache: {e}");
    }
}

/// Loads one table if present and well-formed.
pub fn load_table(dir: &Path, level: u8, weight: u32) -> Option<ReductionTable> {
    let text = fs::read_to_string(table_path(dir, level, weight)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let table = from_file(file)?;
    (table.level == level && table.weight == weight).then_some(table)
}

/// Makes sure the set holds tables for all weights up to `max_weight`,
/// loading from the cache where possible and building (then saving) the rest.
pub fn ensure_tables(
    tables: &mut TableSet,
    level: u8,
    max_weight: u32,
    dir: Option<&Path>,
) -> Result<(), RelationError> {
    for weight in 1..=max_weight {
        if tables.get(level, weight).is_some() {
            continue;
        }
        if let Some(d) = dir {
            if let Some(t) = load_table(d, level, weight) {
                tables.insert(t);
                continue;
            }
        }
        let t = build_table(weight, level)?;
        if let Some(d) = dir {
            save_table(d, &t);
        }
        tables.insert(t);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_deep_equal() {
        let dir = std::env::temp_dir().join(format!("periodlab-cache-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        for (level, weight) in [(1u8, 4u32), (1, 5), (2, 3)] {
            let built = build_table(weight, level).unwrap();
            save_table(&dir, &built);
            let loaded = load_table(&dir, level, weight).expect("cache file readable");
            assert_eq!(built, loaded, "level {level} weight {weight}");
        }
        // Version mismatch is rejected.
        let path = table_path(&dir, 1, 4);
        let mut file: CacheFile =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        file.format_version = 999;
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        assert!(load_table(&dir, 1, 4).is_none());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn ensure_tables_uses_the_cache() {
        let dir = std::env::temp_dir().join(format!("periodlab-cache-test2-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let mut tables = TableSet::new();
        ensure_tables(&mut tables, 1, 5, Some(&dir)).unwrap();
        assert!(tables.get(1, 5).is_some());
        assert!(table_path(&dir, 1, 5).exists());
        // A second set fills purely from disk files.
        let mut again = TableSet::new();
        ensure_tables(&mut again, 1, 5, Some(&dir)).unwrap();
        assert_eq!(again.get(1, 5), tables.get(1, 5));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn resolver_priorities() {
        assert_eq!(resolve_cache_dir(Some("x".into()), true), None);
        assert_eq!(resolve_cache_dir(Some("x".into()), false), Some(PathBuf::from("x")));
    }
}
