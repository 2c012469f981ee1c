//! Input documents.
//!
//! One TOML document per file. A fusion document:
//!
//! ```toml
//! kind = "fusion"
//! name = "lee-yang"
//! sectors = ["id", "rho"]
//! iota = "id"
//! matrix = [[0, 1], [1, 1]]
//! ```
//!
//! A character table document names its irreps, gives the class sizes and one
//! row of characters per irrep (entries are numbers or `[re, im]` pairs), and
//! picks the representation to tensor with:
//!
//! ```toml
//! kind = "character_table"
//! name = "S3"
//! class_sizes = [1, 3, 2]
//! irrep_names = ["triv", "sgn", "std"]
//! characters = [[1, 1, 1], [1, -1, 1], [2, 0, -1]]
//! rep = "std"
//! ```

use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::fusion::{FusionData, SectorLabel};
use crate::groups::{fusion_from_characters, CharacterTable};

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Fusion(FusionData),
    CharacterTable { table: CharacterTable, rep: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub name: String,
    pub body: Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Fusion,
    CharacterTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum CharValue {
    Real(f64),
    Complex([f64; 2]),
}

impl From<CharValue> for Complex64 {
    fn from(v: CharValue) -> Self {
        match v {
            CharValue::Real(r) => Complex64::new(r, 0.0),
            CharValue::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for CharValue {
    fn from(c: Complex64) -> Self {
        if c.im == 0.0 {
            CharValue::Real(c.re)
        } else {
            CharValue::Complex([c.re, c.im])
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: Kind,
    name: String,
    sectors: Option<Spanned<Vec<String>>>,
    iota: Option<Spanned<String>>,
    matrix: Option<Spanned<Vec<Spanned<Vec<i64>>>>>,
    class_sizes: Option<Spanned<Vec<u64>>>,
    characters: Option<Spanned<Vec<Spanned<Vec<CharValue>>>>>,
    irrep_names: Option<Spanned<Vec<String>>>,
    rep: Option<Spanned<String>>,
}

#[derive(Serialize)]
struct OutDocument<'a> {
    kind: Kind,
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sectors: Option<Vec<&'a str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iota: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<&'a [Vec<i64>]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_sizes: Option<&'a [u64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    irrep_names: Option<&'a [String]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    characters: Option<Vec<Vec<CharValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rep: Option<&'a str>,
}

struct Locator<'a>(&'a str);

impl Locator<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn error(&self, span: Range<usize>, field: &str, msg: impl std::fmt::Display) -> Error {
        Error::Input(format!("line {}, field `{field}`: {msg}", self.line(span)))
    }
}

fn required<T>(value: Option<Spanned<T>>, field: &str, kind: &str) -> Result<Spanned<T>> {
    value.ok_or_else(|| Error::Input(format!("missing field `{field}` for kind `{kind}`")))
}

fn forbid<T>(loc: &Locator<'_>, value: &Option<Spanned<T>>, field: &str, kind: &str) -> Result<()> {
    match value {
        Some(v) => Err(loc.error(v.span(), field, format!("not allowed for kind `{kind}`"))),
        None => Ok(()),
    }
}

/// Parses and validates a document.
pub fn parse_input(text: &str) -> Result<InputDocument> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| Error::Input(e.to_string().trim_end().to_string()))?;
    let loc = Locator(text);
    match raw.kind {
        Kind::Fusion => parse_fusion(&loc, raw),
        Kind::CharacterTable => parse_table(&loc, raw),
    }
}

fn parse_fusion(loc: &Locator<'_>, raw: RawDocument) -> Result<InputDocument> {
    const KIND: &str = "fusion";
    forbid(loc, &raw.class_sizes, "class_sizes", KIND)?;
    forbid(loc, &raw.characters, "characters", KIND)?;
    forbid(loc, &raw.irrep_names, "irrep_names", KIND)?;
    forbid(loc, &raw.rep, "rep", KIND)?;
    let sectors = required(raw.sectors, "sectors", KIND)?;
    let iota = required(raw.iota, "iota", KIND)?;
    let matrix = required(raw.matrix, "matrix", KIND)?;

    let s = sectors.get_ref().len();
    if s == 0 {
        return Err(loc.error(sectors.span(), "sectors", "at least one sector is required"));
    }
    let iota_index = sectors
        .get_ref()
        .iter()
        .position(|n| n == iota.get_ref())
        .ok_or_else(|| loc.error(iota.span(), "iota", format!("`{}` is not a declared sector", iota.get_ref())))?;
    if matrix.get_ref().len() != s {
        return Err(loc.error(
            matrix.span(),
            "matrix",
            format!("{} rows for {s} sectors", matrix.get_ref().len()),
        ));
    }
    for (i, row) in matrix.get_ref().iter().enumerate() {
        if row.get_ref().len() != s {
            return Err(loc.error(
                row.span(),
                "matrix",
                format!("row {i} has {} entries, expected {s}", row.get_ref().len()),
            ));
        }
    }
    let matrix_span = matrix.span();
    let rows = matrix.into_inner().into_iter().map(Spanned::into_inner).collect();
    let labels = sectors.into_inner().into_iter().map(SectorLabel::new).collect();
    let data = FusionData::new(labels, iota_index, rows).map_err(|e| loc.error(matrix_span, "matrix", e))?;
    Ok(InputDocument { name: raw.name, body: Body::Fusion(data) })
}

fn parse_table(loc: &Locator<'_>, raw: RawDocument) -> Result<InputDocument> {
    const KIND: &str = "character_table";
    forbid(loc, &raw.sectors, "sectors", KIND)?;
    forbid(loc, &raw.iota, "iota", KIND)?;
    forbid(loc, &raw.matrix, "matrix", KIND)?;
    let class_sizes = required(raw.class_sizes, "class_sizes", KIND)?;
    let characters = required(raw.characters, "characters", KIND)?;
    let irrep_names = required(raw.irrep_names, "irrep_names", KIND)?;
    let rep = required(raw.rep, "rep", KIND)?;

    let classes = class_sizes.get_ref().len();
    if characters.get_ref().len() != irrep_names.get_ref().len() {
        return Err(loc.error(
            characters.span(),
            "characters",
            format!("{} rows for {} irreps", characters.get_ref().len(), irrep_names.get_ref().len()),
        ));
    }
    for (i, row) in characters.get_ref().iter().enumerate() {
        if row.get_ref().len() != classes {
            return Err(loc.error(
                row.span(),
                "characters",
                format!("row {i} has {} entries, expected {classes}", row.get_ref().len()),
            ));
        }
    }
    if !irrep_names.get_ref().contains(rep.get_ref()) {
        return Err(loc.error(rep.span(), "rep", format!("`{}` is not a declared irrep", rep.get_ref())));
    }
    let chars_span = characters.span();
    let rows = characters
        .into_inner()
        .into_iter()
        .map(|r| r.into_inner().into_iter().map(Complex64::from).collect())
        .collect();
    let table = CharacterTable::new(raw.name.clone(), class_sizes.into_inner(), rows, irrep_names.into_inner())
        .map_err(|e| loc.error(chars_span, "characters", e))?;
    Ok(InputDocument { name: raw.name, body: Body::CharacterTable { table, rep: rep.into_inner() } })
}

fn out_document(doc: &InputDocument) -> OutDocument<'_> {
    match &doc.body {
        Body::Fusion(data) => OutDocument {
            kind: Kind::Fusion,
            name: &doc.name,
            sectors: Some(data.sectors.iter().map(SectorLabel::as_str).collect()),
            iota: Some(data.sectors[data.iota].as_str()),
            matrix: Some(&data.matrix),
            class_sizes: None,
            irrep_names: None,
            characters: None,
            rep: None,
        },
        Body::CharacterTable { table, rep } => OutDocument {
            kind: Kind::CharacterTable,
            name: &doc.name,
            sectors: None,
            iota: None,
            matrix: None,
            class_sizes: Some(&table.class_sizes),
            irrep_names: Some(&table.irrep_names),
            characters: Some(
                table.characters.iter().map(|r| r.iter().map(|&c| CharValue::from(c)).collect()).collect(),
            ),
            rep: Some(rep),
        },
    }
}

/// Serializes a document back to the input format.
pub fn emit(doc: &InputDocument) -> String {
    toml::to_string(&out_document(doc)).expect("document serializes")
}

/// The document as a JSON object with the input field names.
pub fn echo(doc: &InputDocument) -> serde_json::Value {
    serde_json::to_value(out_document(doc)).expect("document serializes")
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Fusion(_) => "fusion",
            Body::CharacterTable { .. } => "character_table",
        }
    }

    /// The fusion data the document describes.
    pub fn fusion(&self) -> Result<FusionData> {
        match &self.body {
            Body::Fusion(data) => Ok(data.clone()),
            Body::CharacterTable { table, rep } => {
                let index = table
                    .index_of(rep)
                    .ok_or_else(|| Error::Input(format!("`{rep}` is not a declared irrep")))?;
                fusion_from_characters(table, index)
            }
        }
    }
}
