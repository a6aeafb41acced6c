//! Named diagrams with optional expected values.
//!
//! Catalogs are read from CSV (`name,pd,alternating` plus optional
//! `known_width,known_genus,source` columns) or from a JSON array of the same
//! records. The bundled catalog holds the prime knots through nine crossings.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::LinkDiagram;

const BUNDLED: &str = include_str!("../data/knots.csv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub pd: String,
    #[serde(default, deserialize_with = "optional_bool")]
    pub alternating: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_width: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_genus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

fn optional_bool<'de, D: serde::Deserializer<'de>>(
    de: D,
) -> std::result::Result<Option<bool>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Bool(bool),
        Text(String),
    }
    match Option::<Raw>::deserialize(de)? {
        None => Ok(None),
        Some(Raw::Bool(b)) => Ok(Some(b)),
        Some(Raw::Text(t)) => match t.trim().to_ascii_lowercase().as_str() {
            "" => Ok(None),
            "true" | "yes" | "y" | "1" => Ok(Some(true)),
            "false" | "no" | "n" | "0" => Ok(Some(false)),
            other => Err(serde::de::Error::custom(format!(
                "not a boolean: {other:?}"
            ))),
        },
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub record: CatalogRecord,
    pub diagram: LinkDiagram,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.record.name
    }
}

/// A rejected input row: 1-based record number, name if known, and reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejected {
    pub row: usize,
    pub name: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn bundled() -> Catalog {
        let (catalog, rejected) = Catalog::from_csv(BUNDLED).expect("bundled catalog parses");
        assert!(
            rejected.is_empty(),
            "bundled catalog rows rejected: {rejected:?}"
        );
        catalog
    }

    pub fn from_csv(text: &str) -> Result<(Catalog, Vec<Rejected>)> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let records = reader
            .deserialize::<CatalogRecord>()
            .map(|r| r.map_err(|e| e.to_string()))
            .collect();
        Ok(Self::from_records(records))
    }

    pub fn from_json(text: &str) -> Result<(Catalog, Vec<Rejected>)> {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let records = raw
            .into_iter()
            .map(|v| serde_json::from_value::<CatalogRecord>(v).map_err(|e| e.to_string()))
            .collect();
        Ok(Self::from_records(records))
    }

    /// Parses a catalog, choosing JSON when the text starts with `[`.
    pub fn parse(text: &str) -> Result<(Catalog, Vec<Rejected>)> {
        if text.trim_start().starts_with('[') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }

    fn from_records(
        records: Vec<std::result::Result<CatalogRecord, String>>,
    ) -> (Catalog, Vec<Rejected>) {
        let mut entries = Vec::new();
        let mut rejected = Vec::new();
        let mut names = HashSet::new();
        for (i, r) in records.into_iter().enumerate() {
            let row = i + 1;
            let record = match r {
                Ok(r) => r,
                Err(reason) => {
                    rejected.push(Rejected {
                        row,
                        name: None,
                        reason,
                    });
                    continue;
                }
            };
            let reject = |reason: String| Rejected {
                row,
                name: Some(record.name.clone()),
                reason,
            };
            if !names.insert(record.name.clone()) {
                rejected.push(reject("duplicate name".into()));
                continue;
            }
            match LinkDiagram::parse(&record.pd) {
                Ok(diagram) => entries.push(CatalogEntry { record, diagram }),
                Err(e) => {
                    names.remove(&record.name);
                    rejected.push(reject(e.to_string()));
                }
            }
        }
        (Catalog { entries }, rejected)
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.record.name == name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stable JSON: records sorted by name, PD text reprinted.
    pub fn to_json(&self) -> String {
        let mut records: Vec<CatalogRecord> = self
            .entries
            .iter()
            .map(|e| CatalogRecord {
                pd: e.diagram.to_string(),
                ..e.record.clone()
            })
            .collect();
        records.sort_by(|a, b| a.name.cmp(&b.name));
        serde_json::to_string_pretty(&records).expect("records serialize")
    }
}
