//! Built-in example documents.

use crate::error::{Error, Result};
use crate::fusion::FusionData;
use crate::groups::{self, CharacterTable};
use crate::input::{Body, InputDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
}

pub const ENTRIES: [CatalogEntry; 5] = [
    CatalogEntry {
        name: "inner-<d>",
        description: "inner endomorphism of statistical dimension d: one sector, matrix [[d]], Cuntz algebra O_d",
    },
    CatalogEntry {
        name: "a4-iota",
        description: "principal graph A4 seen from the trivial sector: [[1,1],[1,0]], finite skeleton of dimension 2",
    },
    CatalogEntry {
        name: "lee-yang-rho",
        description: "Lee-Yang (Fibonacci) category with ρ the nontrivial object: [[0,1],[1,1]], infinite skeleton",
    },
    CatalogEntry {
        name: "s3-std",
        description: "representations of S3 tensored with the 2-dimensional irrep, from the character table",
    },
    CatalogEntry {
        name: "z2-sign",
        description: "representations of Z/2 tensored with the sign irrep, from the character table",
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

fn fusion(name: &str, labels: &[&str], matrix: Vec<Vec<i64>>) -> InputDocument {
    let data = FusionData::from_labels(labels, labels[0], matrix).expect("built-in fusion data is valid");
    InputDocument { name: name.to_string(), body: Body::Fusion(data) }
}

fn table(name: &str, mut table: CharacterTable, rep: &str) -> InputDocument {
    table.group_name = name.to_string();
    InputDocument { name: name.to_string(), body: Body::CharacterTable { table, rep: rep.to_string() } }
}

/// Looks up a built-in document. `inner-<d>` accepts any positive integer `d`.
pub fn lookup(name: &str) -> Result<InputDocument> {
    if let Some(d) = name.strip_prefix("inner-").and_then(|d| d.parse::<i64>().ok()).filter(|&d| d > 0) {
        return Ok(fusion(name, &["id"], vec![vec![d]]));
    }
    match name {
        "a4-iota" => Ok(fusion(name, &["iota", "alpha"], vec![vec![1, 1], vec![1, 0]])),
        "lee-yang-rho" => Ok(fusion(name, &["id", "rho"], vec![vec![0, 1], vec![1, 1]])),
        "s3-std" => Ok(table(name, groups::s3(), "std")),
        "z2-sign" => Ok(table(name, groups::z2(), "sgn")),
        _ => Err(Error::UnknownCatalog {
            name: name.to_string(),
            available: ENTRIES.iter().map(|e| e.name).collect::<Vec<_>>().join(", "),
        }),
    }
}

/// One representative document per entry, with `inner-<d>` at `d = 2, 3, 5`.
pub fn standard_documents() -> Vec<InputDocument> {
    ["inner-2", "inner-3", "inner-5", "a4-iota", "lee-yang-rho", "s3-std", "z2-sign"]
        .into_iter()
        .map(|n| lookup(n).expect("standard entry"))
        .collect()
}
