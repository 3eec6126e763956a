//! Whole-project documents: kernel reference, assessment, breakdown trees,
//! and description model in one JSON file.
//!
//! Saved bytes depend only on the project value: keys are emitted in a fixed
//! order, lists in insertion order, and the document ends with a newline.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::assessment::{Assessment, AssessmentDoc};
use crate::description::{DescriptionDoc, DescriptionModel};
use crate::designation::{Aspect, BreakdownTree};
use crate::kernel_data::builtin_se_kernel;
use crate::metamodel::{validate_kernel, KernelDefinition};

pub const FORMAT_VERSION: u64 = 1;
pub const BUILTIN_KERNEL_MARKER: &str = "builtin";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    /// Stored as the `"builtin"` marker; the kernel is not inlined.
    Builtin,
    Inline,
}

#[derive(Debug, Error)]
pub enum ProjectError {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("SCHEMA_ERROR at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("UNSUPPORTED_VERSION: format-version {0} (expected 1)")]
    UnsupportedVersion(String),
}

impl ProjectError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Parse(_) => "PARSE_ERROR",
            Self::Schema { .. } => "SCHEMA_ERROR",
            Self::UnsupportedVersion(_) => "UNSUPPORTED_VERSION",
        }
    }

    fn schema(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Schema { path: path.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Project {
    kernel_source: KernelSource,
    pub assessment: Assessment,
    trees: BTreeMap<Aspect, BreakdownTree>,
    pub description: DescriptionModel,
}

impl Project {
    pub fn new(project_id: impl Into<String>) -> Self {
        Self::assemble(project_id, KernelSource::Builtin, Arc::new(builtin_se_kernel()))
    }

    /// A project carrying its own kernel; the kernel must validate cleanly.
    pub fn with_kernel(project_id: impl Into<String>, kernel: KernelDefinition) -> Result<Self, ProjectError> {
        if let Some(f) = validate_kernel(&kernel).findings.into_iter().next() {
            return Err(ProjectError::schema(format!("kernel.{}", f.path), format!("{}: {}", f.code, f.message)));
        }
        Ok(Self::assemble(project_id, KernelSource::Inline, Arc::new(kernel)))
    }

    fn assemble(project_id: impl Into<String>, kernel_source: KernelSource, kernel: Arc<KernelDefinition>) -> Self {
        Self {
            kernel_source,
            assessment: Assessment::new(project_id, kernel),
            trees: BTreeMap::new(),
            description: DescriptionModel::new(),
        }
    }

    pub fn project_id(&self) -> &str {
        &self.assessment.project_id
    }

    pub fn kernel_source(&self) -> KernelSource {
        self.kernel_source
    }

    pub fn kernel(&self) -> &KernelDefinition {
        self.assessment.kernel()
    }

    pub fn trees(&self) -> &BTreeMap<Aspect, BreakdownTree> {
        &self.trees
    }

    pub fn tree_mut(&mut self, aspect: Aspect) -> &mut BreakdownTree {
        self.trees.entry(aspect).or_insert_with(|| BreakdownTree::new(aspect))
    }

    /// Installs a tree under its own aspect, replacing any previous one.
    pub fn set_tree(&mut self, tree: BreakdownTree) {
        self.trees.insert(tree.aspect(), tree);
    }
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct ProjectOut<'a> {
    format_version: u64,
    project_id: &'a str,
    kernel: KernelOut<'a>,
    assessment: AssessmentDoc,
    trees: &'a BTreeMap<Aspect, BreakdownTree>,
    description: DescriptionDoc,
}

#[derive(Serialize)]
#[serde(untagged)]
enum KernelOut<'a> {
    Marker(&'static str),
    Inline(&'a KernelDefinition),
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ProjectIn {
    #[allow(dead_code)]
    format_version: u64,
    project_id: String,
    kernel: Value,
    #[serde(default)]
    assessment: AssessmentDoc,
    #[serde(default)]
    trees: BTreeMap<Aspect, BreakdownTree>,
    #[serde(default)]
    description: DescriptionDoc,
}

pub fn save_project(p: &Project) -> Vec<u8> {
    let doc = ProjectOut {
        format_version: FORMAT_VERSION,
        project_id: p.project_id(),
        kernel: match p.kernel_source {
            KernelSource::Builtin => KernelOut::Marker(BUILTIN_KERNEL_MARKER),
            KernelSource::Inline => KernelOut::Inline(p.kernel()),
        },
        assessment: p.assessment.to_doc(),
        trees: &p.trees,
        description: p.description.to_doc(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("project serializes");
    bytes.push(b'\n');
    bytes
}

/// Parses and fully validates a project document. Every failure names the
/// offending element.
pub fn load_project(bytes: &[u8]) -> Result<Project, ProjectError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| ProjectError::Parse(e.to_string()))?;
    let version = value.get("format-version").ok_or_else(|| ProjectError::schema("format-version", "missing field"))?;
    if version.as_u64() != Some(FORMAT_VERSION) {
        return Err(ProjectError::UnsupportedVersion(version.to_string()));
    }
    let doc: ProjectIn =
        serde_path_to_error::deserialize(value).map_err(|e| ProjectError::schema(e.path().to_string(), e.inner()))?;

    let mut project = match doc.kernel {
        Value::String(ref s) if s == BUILTIN_KERNEL_MARKER => Project::new(doc.project_id),
        Value::Object(_) => {
            let kernel: KernelDefinition = serde_path_to_error::deserialize(doc.kernel)
                .map_err(|e| ProjectError::schema(format!("kernel.{}", e.path()), e.inner()))?;
            Project::with_kernel(doc.project_id, kernel)?
        }
        other => {
            return Err(ProjectError::schema(
                "kernel",
                format!("expected \"builtin\" or a kernel object, found {other}"),
            ))
        }
    };

    project.assessment =
        Assessment::from_doc(project.project_id(), project.assessment.kernel_arc().clone(), doc.assessment)
            .map_err(|(path, e)| ProjectError::schema(path, e))?;
    for (aspect, tree) in doc.trees {
        if tree.aspect() != aspect {
            return Err(ProjectError::schema(
                format!("trees.{aspect}"),
                format!("tree declares aspect {}", tree.aspect()),
            ));
        }
        project.trees.insert(aspect, tree);
    }
    project.description =
        DescriptionModel::from_doc(doc.description).map_err(|(path, e)| ProjectError::schema(path, e))?;
    Ok(project)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assessment::{AlphaInstance, CheckpointRecord, SystemLevel};
    use crate::kernel_data::SYSTEM_REALIZATION;

    fn sample() -> Project {
        let mut p = Project::new("plant");
        p.assessment
            .add_instance(AlphaInstance {
                id: "sr".into(),
                alpha: SYSTEM_REALIZATION.into(),
                system_level: SystemLevel::SystemOfInterest,
            })
            .unwrap();
        p.assessment.record_checkpoint(CheckpointRecord::new("sr", "Raw materials", "RM-1", true)).unwrap();
        p.tree_mut(Aspect::Product).add_path(&["12", "N4", "DN18"]).unwrap();
        p
    }

    #[test]
    fn empty_project_loads() {
        let bytes = save_project(&Project::new("empty"));
        assert!(bytes.ends_with(b"}\n"));
        let p = load_project(&bytes).unwrap();
        assert_eq!(p.project_id(), "empty");
        assert_eq!(p.kernel_source(), KernelSource::Builtin);
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let p = sample();
        let bytes = save_project(&p);
        assert_eq!(save_project(&p), bytes);
        let back = load_project(&bytes).unwrap();
        assert_eq!(back, p);
        assert_eq!(save_project(&back), bytes);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"kernel\": \"builtin\""));
    }

    #[test]
    fn inline_kernel_round_trip() {
        let p = Project::with_kernel("x", builtin_se_kernel()).unwrap();
        let bytes = save_project(&p);
        let back = load_project(&bytes).unwrap();
        assert_eq!(back.kernel_source(), KernelSource::Inline);
        assert_eq!(save_project(&back), bytes);
    }

    fn edit(f: impl FnOnce(&mut Value)) -> Result<Project, ProjectError> {
        let mut v: Value = serde_json::from_slice(&save_project(&sample())).unwrap();
        f(&mut v);
        load_project(v.to_string().as_bytes())
    }

    #[test]
    fn version_two_rejected() {
        let err = edit(|v| v["format-version"] = 2.into()).unwrap_err();
        assert_eq!(err.code(), "UNSUPPORTED_VERSION");
    }

    #[test]
    fn dangling_checkpoint_names_record() {
        let err = edit(|v| v["assessment"]["records"][0]["checkpoint"] = "RM-99".into()).unwrap_err();
        assert_eq!(err.code(), "SCHEMA_ERROR");
        assert!(err.to_string().contains("assessment.records[0]"), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(load_project(b"{").unwrap_err().code(), "PARSE_ERROR");
        assert_eq!(edit(|v| v["kernel"] = "other".into()).unwrap_err().code(), "SCHEMA_ERROR");
        let err = edit(|v| v["trees"]["product"]["nodes"][0]["segment"] = "x".into()).unwrap_err();
        assert!(err.to_string().contains("trees"), "{err}");
        let err = edit(|v| v["kernel"] = serde_json::json!({"name": "", "areas": [], "alphas": []})).unwrap_err();
        assert!(err.to_string().contains("EMPTY_KERNEL_NAME"), "{err}");
    }
}
