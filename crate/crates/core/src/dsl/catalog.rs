//! The built-in identities, one file per entry under `catalog/`.

use std::fmt::Write;

use super::ast::IdentityAST;
use super::parser::parse_entry;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub label: Option<String>,
    pub identity: IdentityAST,
}

/// A named identity with optional metadata. Several readings mean the
/// source admits more than one transcription; see `verify_entry`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    /// `(d, k)` of the family the entry belongs to.
    pub dk: Option<(i64, i64)>,
    pub transform: Option<String>,
    pub slater: Option<u32>,
    pub note: Option<String>,
    pub readings: Vec<Reading>,
}

impl CatalogEntry {
    pub fn is_bivariate(&self) -> bool {
        self.readings.iter().any(|r| r.identity.is_bivariate())
    }
}

pub fn render_entry(e: &CatalogEntry) -> String {
    let mut s = String::new();
    writeln!(s, "@name {}", e.name).unwrap();
    if let Some((d, k)) = e.dk {
        writeln!(s, "@dk {d} {k}").unwrap();
    }
    if let Some(t) = &e.transform {
        writeln!(s, "@transform {t}").unwrap();
    }
    if let Some(n) = e.slater {
        writeln!(s, "@slater {n}").unwrap();
    }
    if let Some(n) = &e.note {
        writeln!(s, "@note {n}").unwrap();
    }
    if e.is_bivariate() {
        writeln!(s, "@vars a").unwrap();
    }
    for r in &e.readings {
        if let Some(l) = &r.label {
            writeln!(s, "@reading {l}").unwrap();
        }
        writeln!(s, "{}", super::ast::render(&r.identity)).unwrap();
    }
    s
}

macro_rules! files {
    ($($f:literal),* $(,)?) => {
        &[$(($f, include_str!(concat!("../../catalog/", $f, ".id")))),*]
    };
}

/// Raw catalog sources keyed by file stem.
pub static SOURCES: &[(&str, &str)] = files![
    "a-mod10ss", "a-mod18i", "mod10ss", "mod12-ss", "mod14-ss", "mod18", "mod18-1", "mod18-2",
    "mod18-3", "mod18-4", "mod21-1", "mod21-2", "mod21-3", "mod24-2", "mod24-3", "mod24-ss",
    "mod28-3", "mod28-4", "mod33-1", "mod33-2", "mod33-3", "mod33-4", "mod33-5", "mod36",
    "mod48-3", "mod48-4", "mod48-5", "mod52", "mod6-ss", "mod72", "rr1", "rr2", "slater-44",
    "slater-46", "slater-46-alt", "slater-59", "slater-60", "slater-61", "slater-90",
    "slater-91", "slater-92", "slater-93",
];

/// Every entry, sorted by name.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    let mut v = SOURCES.iter().map(|(_, src)| parse_entry(src)).collect::<Result<Vec<_>>>()?;
    v.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(v)
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    catalog()?.into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
}
