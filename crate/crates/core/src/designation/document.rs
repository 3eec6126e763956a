//! Document designations: a system designation, `&`, and a three-letter
//! document classification code (technical area, class, subclass).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_designation, DesignationError, MultiAspectDesignation};

pub const BUILTIN_TABLE_NAME: &str = "builtin";

/// Technical areas keyed by one letter, classes keyed by two letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DccTable {
    pub name: String,
    pub areas: BTreeMap<String, String>,
    #[serde(default)]
    pub classes: BTreeMap<String, String>,
}

#[derive(Debug, Error)]
pub enum DccTableError {
    #[error("PARSE_ERROR: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("SCHEMA_ERROR: {0}")]
    Schema(String),
}

impl DccTableError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Parse(_) => "PARSE_ERROR",
            Self::Schema(_) => "SCHEMA_ERROR",
        }
    }
}

fn upper_letters(s: &str, n: usize) -> bool {
    s.len() == n && s.bytes().all(|b| b.is_ascii_uppercase())
}

impl DccTable {
    pub fn builtin() -> Self {
        let areas = [("A", "Overall management"), ("M", "Mechanical engineering")];
        let classes = [("CA", "Contractual and nontechnical documents")];
        Self {
            name: BUILTIN_TABLE_NAME.to_owned(),
            areas: areas.iter().map(|&(k, v)| (k.to_owned(), v.to_owned())).collect(),
            classes: classes.iter().map(|&(k, v)| (k.to_owned(), v.to_owned())).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, DccTableError> {
        let table: DccTable = serde_json::from_str(text)?;
        table.check()?;
        Ok(table)
    }

    fn check(&self) -> Result<(), DccTableError> {
        if self.areas.is_empty() {
            return Err(DccTableError::Schema("table defines no technical areas".into()));
        }
        if let Some(bad) = self.areas.keys().find(|k| !upper_letters(k, 1)) {
            return Err(DccTableError::Schema(format!("area key {bad:?} is not a single uppercase letter")));
        }
        if let Some(bad) = self.classes.keys().find(|k| !upper_letters(k, 2)) {
            return Err(DccTableError::Schema(format!("class key {bad:?} is not two uppercase letters")));
        }
        Ok(())
    }

    /// Layers `other` on top of this table; entries in `other` win.
    pub fn extended_with(&self, other: &DccTable) -> DccTable {
        let mut merged = self.clone();
        merged.name = other.name.clone();
        merged.areas.extend(other.areas.clone());
        merged.classes.extend(other.classes.clone());
        merged
    }

    pub fn area_name(&self, letter: char) -> Option<&str> {
        self.areas.get(letter.encode_utf8(&mut [0; 4]) as &str).map(String::as_str)
    }

    pub fn class_name(&self, code: &str) -> Option<&str> {
        self.classes.get(code).map(String::as_str)
    }
}

/// Three uppercase ASCII letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dcc([u8; 3]);

impl Dcc {
    pub fn parse(s: &str) -> Option<Dcc> {
        upper_letters(s, 3).then(|| {
            let b = s.as_bytes();
            Dcc([b[0], b[1], b[2]])
        })
    }

    pub fn area(self) -> char {
        self.0[0] as char
    }

    pub fn class(self) -> char {
        self.0[1] as char
    }

    pub fn subclass(self) -> char {
        self.0[2] as char
    }

    /// Class and subclass together, e.g. `CA`.
    pub fn class_code(&self) -> &str {
        std::str::from_utf8(&self.0[1..]).expect("ascii")
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }
}

impl fmt::Display for Dcc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentDesignation {
    pub system: MultiAspectDesignation,
    pub dcc: Dcc,
    pub table_ref: String,
}

impl fmt::Display for DocumentDesignation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}&{}", self.system, self.dcc)
    }
}

#[derive(Serialize, Deserialize)]
struct DocumentDesignationDoc {
    designation: String,
    table: String,
}

impl Serialize for DocumentDesignation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DocumentDesignationDoc { designation: self.to_string(), table: self.table_ref.clone() }.serialize(serializer)
    }
}

/// Stored designations are re-checked against the builtin table when they
/// name it; other tables are not carried in the document, so only the
/// syntax is checked for them.
impl<'de> Deserialize<'de> for DocumentDesignation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = DocumentDesignationDoc::deserialize(deserializer)?;
        if doc.table == BUILTIN_TABLE_NAME {
            return parse_document_designation(&doc.designation, &DccTable::builtin()).map_err(D::Error::custom);
        }
        let (system, code) =
            doc.designation.split_once('&').ok_or_else(|| D::Error::custom(DocumentError::NoAmpersand))?;
        let system = parse_designation(system).map_err(D::Error::custom)?;
        let dcc = Dcc::parse(code).ok_or_else(|| D::Error::custom(DocumentError::MalformedDcc(code.to_owned())))?;
        Ok(DocumentDesignation { system, dcc, table_ref: doc.table })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("NO_AMPERSAND: document designation needs \"&\" before the classification code")]
    NoAmpersand,
    #[error("MALFORMED_DCC: {0:?} is not three uppercase letters")]
    MalformedDcc(String),
    #[error("UNKNOWN_TECHNICAL_AREA: {area:?} is not in table {table:?}")]
    UnknownTechnicalArea { area: char, table: String },
    #[error(transparent)]
    Designation(#[from] DesignationError),
}

impl DocumentError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::NoAmpersand => "NO_AMPERSAND",
            Self::MalformedDcc(_) => "MALFORMED_DCC",
            Self::UnknownTechnicalArea { .. } => "UNKNOWN_TECHNICAL_AREA",
            Self::Designation(e) => e.code.as_str(),
        }
    }
}

/// Splits at the first `&`, parses the system part, then checks the code.
pub fn parse_document_designation(text: &str, table: &DccTable) -> Result<DocumentDesignation, DocumentError> {
    let (system, code) = text.split_once('&').ok_or(DocumentError::NoAmpersand)?;
    let system = parse_designation(system)?;
    let dcc = Dcc::parse(code).ok_or_else(|| DocumentError::MalformedDcc(code.to_owned()))?;
    if table.area_name(dcc.area()).is_none() {
        return Err(DocumentError::UnknownTechnicalArea { area: dcc.area(), table: table.name.clone() });
    }
    Ok(DocumentDesignation { system, dcc, table_ref: table.name.clone() })
}
