//! Multi-aspect reference designations.
//!
//! ```text
//! designation = chain *( OWS "/" OWS chain )
//! chain       = prefix segment *( prefix segment )   ; one prefix per chain
//! prefix      = "=" | "-" | "+"
//! segment     = 1*( A-Z | 0-9 )
//! OWS         = *( " " )
//! ```
//!
//! `=` marks the function aspect, `-` the product aspect and `+` the location
//! aspect. Canonical text lists chains in that order separated by `" / "`.

mod document;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use document::{
    parse_document_designation, Dcc, DccTable, DccTableError, DocumentDesignation, DocumentError, BUILTIN_TABLE_NAME,
};
pub use tree::{
    check_at_least_one_unambiguous, resolve, BreakdownTree, ChainResolution, NodePath, TreeError, UnambiguityReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aspect {
    Function,
    Product,
    Location,
}

impl Aspect {
    /// Canonical ordering.
    pub const ALL: [Aspect; 3] = [Aspect::Function, Aspect::Product, Aspect::Location];

    pub fn prefix(self) -> char {
        match self {
            Aspect::Function => '=',
            Aspect::Product => '-',
            Aspect::Location => '+',
        }
    }

    pub fn from_prefix(c: u8) -> Option<Aspect> {
        match c {
            b'=' => Some(Aspect::Function),
            b'-' => Some(Aspect::Product),
            b'+' => Some(Aspect::Location),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Aspect::Function => "function",
            Aspect::Product => "product",
            Aspect::Location => "location",
        }
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DesignationErrorCode {
    EmptyInput,
    BadPrefix,
    MixedChain,
    DuplicateAspect,
    BadSegment,
}

impl DesignationErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EmptyInput => "EMPTY_INPUT",
            Self::BadPrefix => "BAD_PREFIX",
            Self::MixedChain => "MIXED_CHAIN",
            Self::DuplicateAspect => "DUPLICATE_ASPECT",
            Self::BadSegment => "BAD_SEGMENT",
        }
    }
}

impl fmt::Display for DesignationErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{code} at byte {offset}: {detail}")]
pub struct DesignationError {
    pub code: DesignationErrorCode,
    pub offset: usize,
    pub detail: String,
}

impl DesignationError {
    fn new(code: DesignationErrorCode, offset: usize, detail: impl Into<String>) -> Self {
        Self { code, offset, detail: detail.into() }
    }
}

fn is_segment_byte(b: u8) -> bool {
    b.is_ascii_uppercase() || b.is_ascii_digit()
}

pub fn is_valid_segment(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(is_segment_byte)
}

/// One aspect's hierarchical designator, e.g. `-12-N4-DN18`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AspectChain {
    aspect: Aspect,
    segments: Vec<String>,
}

impl AspectChain {
    pub fn new<S: Into<String>>(
        aspect: Aspect,
        segments: impl IntoIterator<Item = S>,
    ) -> Result<Self, DesignationError> {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        if segments.is_empty() {
            return Err(DesignationError::new(DesignationErrorCode::BadSegment, 0, "chain has no segments"));
        }
        if let Some(bad) = segments.iter().find(|s| !is_valid_segment(s)) {
            return Err(DesignationError::new(
                DesignationErrorCode::BadSegment,
                0,
                format!("segment {bad:?} is not uppercase alphanumeric"),
            ));
        }
        Ok(Self { aspect, segments })
    }

    pub fn aspect(&self) -> Aspect {
        self.aspect
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }
}

impl fmt::Display for AspectChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = self.aspect.prefix();
        for seg in &self.segments {
            write!(f, "{prefix}{seg}")?;
        }
        Ok(())
    }
}

impl FromStr for AspectChain {
    type Err = DesignationError;

    /// Parses exactly one chain with no surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser::new(s.as_bytes());
        if s.is_empty() {
            return Err(DesignationError::new(DesignationErrorCode::EmptyInput, 0, "input is empty"));
        }
        let chain = parser.chain()?;
        if parser.pos != s.len() {
            return Err(DesignationError::new(
                DesignationErrorCode::BadSegment,
                parser.pos,
                "unexpected text after chain",
            ));
        }
        Ok(chain)
    }
}

impl Serialize for AspectChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AspectChain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-empty set of aspect chains, at most one per aspect.
///
/// Chains keep their input order; equality ignores order since each aspect
/// occurs at most once.
#[derive(Debug, Clone, Eq)]
pub struct MultiAspectDesignation {
    chains: Vec<AspectChain>,
}

impl MultiAspectDesignation {
    pub fn new(chains: Vec<AspectChain>) -> Result<Self, DesignationError> {
        if chains.is_empty() {
            return Err(DesignationError::new(DesignationErrorCode::EmptyInput, 0, "no chains"));
        }
        for (i, c) in chains.iter().enumerate() {
            if chains[..i].iter().any(|p| p.aspect == c.aspect) {
                return Err(DesignationError::new(
                    DesignationErrorCode::DuplicateAspect,
                    0,
                    format!("{} aspect given twice", c.aspect),
                ));
            }
        }
        Ok(Self { chains })
    }

    pub fn chains(&self) -> &[AspectChain] {
        &self.chains
    }

    pub fn chain(&self, aspect: Aspect) -> Option<&AspectChain> {
        self.chains.iter().find(|c| c.aspect == aspect)
    }

    /// Chains in Function, Product, Location order.
    pub fn canonical_chains(&self) -> impl Iterator<Item = &AspectChain> {
        Aspect::ALL.into_iter().filter_map(|a| self.chain(a))
    }
}

impl PartialEq for MultiAspectDesignation {
    fn eq(&self, other: &Self) -> bool {
        self.chains.len() == other.chains.len() && Aspect::ALL.iter().all(|&a| self.chain(a) == other.chain(a))
    }
}

impl fmt::Display for MultiAspectDesignation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, chain) in self.canonical_chains().enumerate() {
            if i > 0 {
                f.write_str(" / ")?;
            }
            write!(f, "{chain}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiAspectDesignation {
    type Err = DesignationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_designation(s)
    }
}

impl Serialize for MultiAspectDesignation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiAspectDesignation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_designation(&text).map_err(serde::de::Error::custom)
    }
}

pub fn parse_designation(text: &str) -> Result<MultiAspectDesignation, DesignationError> {
    parse_designation_bytes(text.as_bytes())
}

/// Byte-level entry point. The grammar is pure ASCII, so any non-ASCII byte
/// is simply an illegal character.
pub fn parse_designation_bytes(input: &[u8]) -> Result<MultiAspectDesignation, DesignationError> {
    if input.iter().all(|&b| b == b' ') {
        return Err(DesignationError::new(DesignationErrorCode::EmptyInput, 0, "input is empty"));
    }
    let mut parser = Parser::new(input);
    let mut chains: Vec<AspectChain> = Vec::new();
    loop {
        let start = parser.pos;
        let chain = parser.chain()?;
        if chains.iter().any(|c| c.aspect == chain.aspect) {
            return Err(DesignationError::new(
                DesignationErrorCode::DuplicateAspect,
                start,
                format!("{} aspect given twice", chain.aspect),
            ));
        }
        chains.push(chain);

        let ws = parser.pos;
        parser.skip_spaces();
        match parser.peek() {
            None if parser.pos == ws => break,
            Some(b'/') => {
                parser.pos += 1;
                parser.skip_spaces();
            }
            _ => {
                return Err(DesignationError::new(
                    DesignationErrorCode::BadSegment,
                    ws,
                    "expected \"/\" or end of input after chain",
                ))
            }
        }
    }
    Ok(MultiAspectDesignation { chains })
}

pub fn format_designation(d: &MultiAspectDesignation) -> String {
    d.to_string()
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a [u8]) -> Self {
        Self { input, pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn skip_spaces(&mut self) {
        while self.peek() == Some(b' ') {
            self.pos += 1;
        }
    }

    fn chain(&mut self) -> Result<AspectChain, DesignationError> {
        let Some(first) = self.peek() else {
            return Err(DesignationError::new(DesignationErrorCode::BadPrefix, self.pos, "expected a chain"));
        };
        let Some(aspect) = Aspect::from_prefix(first) else {
            return Err(DesignationError::new(
                DesignationErrorCode::BadPrefix,
                self.pos,
                "chain must start with '=', '-' or '+'",
            ));
        };
        let prefix = first;
        let mut segments = Vec::new();
        loop {
            self.pos += 1;
            let seg_start = self.pos;
            while self.peek().is_some_and(is_segment_byte) {
                self.pos += 1;
            }
            if self.pos == seg_start {
                let detail = match self.peek() {
                    Some(b) if b.is_ascii_graphic() => format!("empty segment before {:?}", b as char),
                    Some(b) => format!("empty segment before byte 0x{b:02x}"),
                    None => "empty segment at end of input".to_owned(),
                };
                return Err(DesignationError::new(DesignationErrorCode::BadSegment, seg_start, detail));
            }
            // Only ASCII bytes were consumed, so this slice is valid UTF-8.
            let seg = std::str::from_utf8(&self.input[seg_start..self.pos]).expect("ascii segment");
            segments.push(seg.to_owned());

            match self.peek() {
                Some(b) if b == prefix => continue,
                Some(b) if Aspect::from_prefix(b).is_some() => {
                    return Err(DesignationError::new(
                        DesignationErrorCode::MixedChain,
                        self.pos,
                        format!("prefix changes from {:?} to {:?} within a chain", prefix as char, b as char),
                    ))
                }
                None | Some(b' ') | Some(b'/') => break,
                Some(b) => {
                    let shown = if b.is_ascii_graphic() { format!("{:?}", b as char) } else { format!("0x{b:02x}") };
                    return Err(DesignationError::new(
                        DesignationErrorCode::BadSegment,
                        self.pos,
                        format!("illegal character {shown} in segment"),
                    ));
                }
            }
        }
        Ok(AspectChain { aspect, segments })
    }
}
