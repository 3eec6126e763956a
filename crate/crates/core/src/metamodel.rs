//! Kernel meta-model: areas of concern, alphas, ordered states, checkpoints,
//! work products, and the sub-alpha forest.
//!
//! A [`KernelDefinition`] is a plain value. It is loaded from a JSON kernel
//! document, checked with [`validate_kernel`], and then only read.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three fixed groupings of kernel alphas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AreaOfConcern {
    Customer,
    Solution,
    Endeavor,
}

impl AreaOfConcern {
    pub const ALL: [AreaOfConcern; 3] = [Self::Customer, Self::Solution, Self::Endeavor];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Customer => "Customer",
            Self::Solution => "Solution",
            Self::Endeavor => "Endeavor",
        }
    }
}

impl fmt::Display for AreaOfConcern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AreaOfConcern {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|a| a.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub id: String,
    pub text: String,
}

impl Checkpoint {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDefinition {
    pub name: String,
    #[serde(default)]
    pub summary: String,
    pub checkpoints: Vec<Checkpoint>,
}

impl StateDefinition {
    pub fn checkpoint(&self, id: &str) -> Option<&Checkpoint> {
        self.checkpoints.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDefinition {
    pub name: String,
    /// Name of the owning area of concern. Kept as text so that a kernel
    /// document naming an unknown area still loads and can be reported on.
    pub area: String,
    #[serde(default)]
    pub description: String,
    pub states: Vec<StateDefinition>,
    #[serde(default)]
    pub subalphas: Vec<String>,
}

impl AlphaDefinition {
    pub fn state(&self, name: &str) -> Option<&StateDefinition> {
        self.states.iter().find(|s| s.name == name)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn area_of_concern(&self) -> Option<AreaOfConcern> {
        self.area.parse().ok()
    }
}

/// A kind of artifact that evidences an alpha.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkProductDefinition {
    pub name: String,
    pub evidences: String,
    #[serde(default)]
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDefinition {
    pub name: String,
    pub areas: Vec<String>,
    pub alphas: Vec<AlphaDefinition>,
    #[serde(default)]
    pub workproducts: Vec<WorkProductDefinition>,
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("UNKNOWN_ALPHA: no alpha named {0:?}")]
    UnknownAlpha(String),
    #[error("PARSE_ERROR: {0}")]
    Parse(#[from] serde_json::Error),
}

impl KernelError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::UnknownAlpha(_) => "UNKNOWN_ALPHA",
            Self::Parse(_) => "PARSE_ERROR",
        }
    }
}

impl KernelDefinition {
    /// Parses a kernel document. Structural problems beyond the JSON shape are
    /// left to [`validate_kernel`].
    pub fn from_json(text: &str) -> Result<Self, KernelError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical kernel document: pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("kernel serializes");
        out.push('\n');
        out
    }

    pub fn find_alpha(&self, name: &str) -> Option<&AlphaDefinition> {
        find_alpha(self, name)
    }

    pub fn work_product(&self, name: &str) -> Option<&WorkProductDefinition> {
        self.workproducts.iter().find(|w| w.name == name)
    }

    /// Name of the alpha that lists `name` as a sub-alpha, if any.
    pub fn parent_of(&self, name: &str) -> Option<&str> {
        self.alphas.iter().find(|a| a.subalphas.iter().any(|s| s == name)).map(|a| a.name.as_str())
    }

    /// Alphas that are nobody's sub-alpha, in definition order.
    pub fn top_level_alphas(&self) -> impl Iterator<Item = &AlphaDefinition> {
        let children: BTreeSet<&str> =
            self.alphas.iter().flat_map(|a| a.subalphas.iter().map(String::as_str)).collect();
        self.alphas.iter().filter(move |a| !children.contains(a.name.as_str()))
    }

    pub fn subalpha_closure(&self, name: &str) -> Result<Vec<String>, KernelError> {
        subalpha_closure(self, name)
    }
}

pub fn find_alpha<'k>(def: &'k KernelDefinition, name: &str) -> Option<&'k AlphaDefinition> {
    def.alphas.iter().find(|a| a.name == name)
}

/// All transitive sub-alphas of `name` in depth-first pre-order, root excluded.
///
/// Each name is emitted at most once, so the walk terminates even on a
/// kernel whose sub-alpha graph is not a forest.
pub fn subalpha_closure(def: &KernelDefinition, name: &str) -> Result<Vec<String>, KernelError> {
    let root = find_alpha(def, name).ok_or_else(|| KernelError::UnknownAlpha(name.to_owned()))?;
    let mut seen: BTreeSet<&str> = BTreeSet::from([root.name.as_str()]);
    let mut out = Vec::new();
    let mut stack: Vec<&str> = root.subalphas.iter().rev().map(String::as_str).collect();
    while let Some(next) = stack.pop() {
        if !seen.insert(next) {
            continue;
        }
        out.push(next.to_owned());
        if let Some(alpha) = find_alpha(def, next) {
            stack.extend(alpha.subalphas.iter().rev().map(String::as_str));
        }
    }
    Ok(out)
}

/// Machine-readable finding codes emitted by [`validate_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    EmptyKernelName,
    UnknownAreaName,
    DuplicateArea,
    EmptyAlphaName,
    DuplicateAlpha,
    UnknownArea,
    NoStates,
    DuplicateState,
    EmptyStateName,
    NoCheckpoints,
    EmptyCheckpointId,
    DuplicateCheckpoint,
    EmptyCheckpointText,
    UnknownSubalpha,
    SelfSubalpha,
    MultipleParents,
    SubalphaCycle,
    DuplicateWorkProduct,
    UnknownEvidencedAlpha,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EmptyKernelName => "EMPTY_KERNEL_NAME",
            Self::UnknownAreaName => "UNKNOWN_AREA_NAME",
            Self::DuplicateArea => "DUPLICATE_AREA",
            Self::EmptyAlphaName => "EMPTY_ALPHA_NAME",
            Self::DuplicateAlpha => "DUPLICATE_ALPHA",
            Self::UnknownArea => "UNKNOWN_AREA",
            Self::NoStates => "NO_STATES",
            Self::DuplicateState => "DUPLICATE_STATE",
            Self::EmptyStateName => "EMPTY_STATE_NAME",
            Self::NoCheckpoints => "NO_CHECKPOINTS",
            Self::EmptyCheckpointId => "EMPTY_CHECKPOINT_ID",
            Self::DuplicateCheckpoint => "DUPLICATE_CHECKPOINT",
            Self::EmptyCheckpointText => "EMPTY_CHECKPOINT_TEXT",
            Self::UnknownSubalpha => "UNKNOWN_SUBALPHA",
            Self::SelfSubalpha => "SELF_SUBALPHA",
            Self::MultipleParents => "MULTIPLE_PARENTS",
            Self::SubalphaCycle => "SUBALPHA_CYCLE",
            Self::DuplicateWorkProduct => "DUPLICATE_WORK_PRODUCT",
            Self::UnknownEvidencedAlpha => "UNKNOWN_EVIDENCED_ALPHA",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    /// Element path, e.g. `alphas[3].states[1].checkpoints[0]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has(&self, code: FindingCode) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    fn push(&mut self, code: FindingCode, path: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding { code, path: path.into(), message: message.into() });
    }
}

/// Checks every meta-model invariant. Findings come out in document order,
/// followed by the graph-level sub-alpha checks.
pub fn validate_kernel(def: &KernelDefinition) -> ValidationReport {
    let mut report = ValidationReport::default();

    if def.name.trim().is_empty() {
        report.push(FindingCode::EmptyKernelName, "name", "kernel name is empty");
    }

    let mut areas = BTreeSet::new();
    for (i, area) in def.areas.iter().enumerate() {
        if area.parse::<AreaOfConcern>().is_err() {
            report.push(
                FindingCode::UnknownAreaName,
                format!("areas[{i}]"),
                format!("{area:?} is not one of Customer, Solution, Endeavor"),
            );
        }
        if !areas.insert(area.as_str()) {
            report.push(FindingCode::DuplicateArea, format!("areas[{i}]"), format!("area {area:?} listed twice"));
        }
    }

    let mut alpha_names = BTreeSet::new();
    for (i, alpha) in def.alphas.iter().enumerate() {
        let path = format!("alphas[{i}]");
        if alpha.name.is_empty() {
            report.push(FindingCode::EmptyAlphaName, &path, "alpha name is empty");
        } else if !alpha_names.insert(alpha.name.as_str()) {
            report.push(FindingCode::DuplicateAlpha, &path, format!("alpha {:?} defined twice", alpha.name));
        }
        if !areas.contains(alpha.area.as_str()) || alpha.area_of_concern().is_none() {
            report.push(
                FindingCode::UnknownArea,
                format!("{path}.area"),
                format!("alpha {:?} references undeclared area {:?}", alpha.name, alpha.area),
            );
        }
        check_states(alpha, &path, &mut report);
    }

    check_subalphas(def, &alpha_names, &mut report);

    let mut wp_names = BTreeSet::new();
    for (i, wp) in def.workproducts.iter().enumerate() {
        let path = format!("workproducts[{i}]");
        if !wp_names.insert(wp.name.as_str()) {
            report.push(FindingCode::DuplicateWorkProduct, &path, format!("work product {:?} defined twice", wp.name));
        }
        if !alpha_names.contains(wp.evidences.as_str()) {
            report.push(
                FindingCode::UnknownEvidencedAlpha,
                format!("{path}.evidences"),
                format!("work product {:?} evidences unknown alpha {:?}", wp.name, wp.evidences),
            );
        }
    }

    report
}

fn check_states(alpha: &AlphaDefinition, path: &str, report: &mut ValidationReport) {
    if alpha.states.is_empty() {
        report.push(FindingCode::NoStates, format!("{path}.states"), format!("alpha {:?} has no states", alpha.name));
    }
    let mut state_names = BTreeSet::new();
    for (j, state) in alpha.states.iter().enumerate() {
        let spath = format!("{path}.states[{j}]");
        if state.name.is_empty() {
            report.push(FindingCode::EmptyStateName, &spath, "state name is empty");
        } else if !state_names.insert(state.name.as_str()) {
            report.push(FindingCode::DuplicateState, &spath, format!("state {:?} defined twice", state.name));
        }
        if state.checkpoints.is_empty() {
            report.push(
                FindingCode::NoCheckpoints,
                format!("{spath}.checkpoints"),
                format!("state {:?} has no checkpoints", state.name),
            );
        }
        let mut ids = BTreeSet::new();
        for (k, cp) in state.checkpoints.iter().enumerate() {
            let cpath = format!("{spath}.checkpoints[{k}]");
            if cp.id.is_empty() {
                report.push(FindingCode::EmptyCheckpointId, &cpath, "checkpoint id is empty");
            } else if !ids.insert(cp.id.as_str()) {
                report.push(FindingCode::DuplicateCheckpoint, &cpath, format!("checkpoint id {:?} repeated", cp.id));
            }
            if cp.text.trim().is_empty() {
                report.push(FindingCode::EmptyCheckpointText, &cpath, "checkpoint text is empty");
            }
        }
    }
}

fn check_subalphas(def: &KernelDefinition, alpha_names: &BTreeSet<&str>, report: &mut ValidationReport) {
    // child -> first parent seen
    let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
    for (i, alpha) in def.alphas.iter().enumerate() {
        for (j, sub) in alpha.subalphas.iter().enumerate() {
            let path = format!("alphas[{i}].subalphas[{j}]");
            if sub == &alpha.name {
                report.push(FindingCode::SelfSubalpha, &path, format!("alpha {:?} lists itself", alpha.name));
                continue;
            }
            if !alpha_names.contains(sub.as_str()) {
                report.push(FindingCode::UnknownSubalpha, &path, format!("sub-alpha {sub:?} is not defined"));
                continue;
            }
            match parent.get(sub.as_str()) {
                Some(&first) if first != alpha.name => report.push(
                    FindingCode::MultipleParents,
                    &path,
                    format!("sub-alpha {sub:?} already belongs to {first:?}"),
                ),
                Some(_) => {}
                None => {
                    parent.insert(sub.as_str(), alpha.name.as_str());
                }
            }
        }
    }

    // With single parents the graph is a set of chains upward; a cycle is a
    // chain that returns to its start.
    let mut reported: BTreeSet<&str> = BTreeSet::new();
    for &start in parent.keys() {
        if reported.contains(start) {
            continue;
        }
        let mut walk = vec![start];
        let mut cursor = start;
        while let Some(&up) = parent.get(cursor) {
            if up == start {
                let members = walk.join(" -> ");
                report.push(
                    FindingCode::SubalphaCycle,
                    format!("alphas[{}].subalphas", alpha_index(def, start)),
                    format!("sub-alpha cycle: {members} -> {start}"),
                );
                reported.extend(walk.iter().copied());
                break;
            }
            if walk.contains(&up) {
                // cycle further up, reported from its own members
                break;
            }
            walk.push(up);
            cursor = up;
        }
    }
}

fn alpha_index(def: &KernelDefinition, name: &str) -> usize {
    def.alphas.iter().position(|a| a.name == name).unwrap_or(0)
}
