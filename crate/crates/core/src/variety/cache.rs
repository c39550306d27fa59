//! On-disk cache of echelon bases, one JSON document per component.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SpanBasis, SparseVec};
use crate::term::{format_term, parse_term, Monomial};
use crate::Rational;

use super::component::{Component, Quotient};
use super::VarietyName;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub variety: String,
    pub arity: usize,
    pub weight: i64,
    /// Formatted ambient monomials, in column order.
    pub ambient: Vec<String>,
    /// Echelon rows as `(column, "p/q")` pairs.
    pub rows: Vec<Vec<(usize, String)>>,
}

pub fn cache_file_name(variety: VarietyName, arity: usize, weight: i64) -> String {
    format!("{}_{}_{}.json", variety.key(), arity, weight)
}

pub(crate) fn rational_from_str(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/')?;
    let p: BigInt = p.trim().parse().ok()?;
    let q: BigInt = q.trim().parse().ok()?;
    if q == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(p, q))
}

fn monomial_text(m: &Monomial) -> String {
    format_term(&m.clone().into())
}

impl CacheFile {
    pub fn from_component(c: &Component) -> Self {
        CacheFile {
            variety: c.variety().key().to_string(),
            arity: c.arity(),
            weight: c.weight().expect("plain component"),
            ambient: c.ambient().iter().map(monomial_text).collect(),
            rows: c
                .basis()
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(i, x)| (*i, crate::rational_string(x)))
                        .collect()
                })
                .collect(),
        }
    }

    /// Rebuild the component, checking the stored ambient against the
    /// expected one.
    pub fn into_component(
        self,
        variety: VarietyName,
        ambient: Arc<Vec<Monomial>>,
        path: &Path,
    ) -> Result<Component> {
        let bad = |message: String| Error::Cache {
            path: path.to_path_buf(),
            message,
        };
        let weight = ambient.first().map(Monomial::weight);
        let arity = ambient.first().map(Monomial::arity);
        if self.variety != variety.key() || Some(self.arity) != arity || Some(self.weight) != weight
        {
            return Err(bad("key does not match file contents".into()));
        }
        if self.ambient.len() != ambient.len() {
            return Err(bad("ambient length differs".into()));
        }
        for (s, m) in self.ambient.iter().zip(ambient.iter()) {
            let parsed = parse_term(s).map_err(|e| bad(e.to_string()))?;
            if parsed != m.clone().into() {
                return Err(bad(format!("ambient entry {s} out of order")));
            }
        }
        let ncols = ambient.len();
        let mut rows: Vec<SparseVec> = Vec::with_capacity(self.rows.len());
        let mut last_pivot = None;
        for r in &self.rows {
            let mut row = SparseVec::with_capacity(r.len());
            for (i, s) in r {
                let x = rational_from_str(s).ok_or_else(|| bad(format!("bad rational {s:?}")))?;
                if *i >= ncols || row.last().is_some_and(|(j, _)| j >= i) {
                    return Err(bad("row columns out of range or unsorted".into()));
                }
                row.push((*i, x));
            }
            let Some((p, lead)) = row.first() else {
                return Err(bad("empty row".into()));
            };
            if *lead != Rational::from_integer(1.into()) || last_pivot.is_some_and(|q| q >= *p) {
                return Err(bad("rows are not in echelon form".into()));
            }
            last_pivot = Some(*p);
            rows.push(row);
        }
        let basis = SpanBasis::from_rref(ambient, rows);
        Ok(Quotient::from_basis(
            variety,
            self.arity,
            Some(self.weight),
            basis,
        ))
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn cache_path(dir: &Path, variety: VarietyName, arity: usize, weight: i64) -> PathBuf {
    dir.join(cache_file_name(variety, arity, weight))
}

/// `Ok(None)` when the file does not exist.
pub(crate) fn load(path: &Path) -> Result<Option<CacheFile>> {
    let mut f = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(path)(e)),
    };
    f.lock_shared().map_err(io_err(path))?;
    let mut text = String::new();
    f.read_to_string(&mut text).map_err(io_err(path))?;
    let parsed = serde_json::from_str(&text).map_err(|e| Error::Cache {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(Some(parsed))
}

/// Write under an exclusive advisory lock; truncation happens only once the
/// lock is held so readers never see a half-written file.
pub(crate) fn store(path: &Path, file: &CacheFile) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let text = serde_json::to_string(file)?;
    let mut f = OpenOptions::new()
        .write(true)
        .create(true)
        .truncate(false)
        .open(path)
        .map_err(io_err(path))?;
    f.lock().map_err(io_err(path))?;
    f.set_len(0).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))?;
    f.unlock().map_err(io_err(path))?;
    Ok(())
}
