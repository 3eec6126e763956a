//! Checkpoint records, computed alpha states, and state cards.
//!
//! Alpha states are derived only from checkpoint records. Work products
//! appear solely as evidence ids on records; in the default mode removing a
//! work product never changes a computed state. With `strict_evidence` set,
//! a satisfied record without evidence counts as unsatisfied.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designation::DocumentDesignation;
use crate::metamodel::{AlphaDefinition, KernelDefinition};

/// Which system an alpha instance tracks: the system being built, or the
/// using system it operates within. Verification concerns the former,
/// validation the latter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemLevel {
    #[default]
    SystemOfInterest,
    UsingSystem,
}

impl fmt::Display for SystemLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemLevel::SystemOfInterest => "system of interest",
            SystemLevel::UsingSystem => "using system",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AlphaInstance {
    pub id: String,
    pub alpha: String,
    #[serde(default)]
    pub system_level: SystemLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WorkProductInstance {
    pub id: String,
    pub definition: String,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub document_designation: Option<DocumentDesignation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckpointRecord {
    pub alpha_instance: String,
    pub state: String,
    pub checkpoint: String,
    pub satisfied: bool,
    #[serde(default)]
    pub evidence: Vec<String>,
    /// Seconds; informational only.
    #[serde(default)]
    pub recorded_at: i64,
}

impl CheckpointRecord {
    pub fn new(instance: &str, state: &str, checkpoint: &str, satisfied: bool) -> Self {
        Self {
            alpha_instance: instance.to_owned(),
            state: state.to_owned(),
            checkpoint: checkpoint.to_owned(),
            satisfied,
            evidence: Vec::new(),
            recorded_at: 0,
        }
    }

    pub fn with_evidence<S: Into<String>>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.evidence = ids.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssessmentError {
    #[error("UNKNOWN_INSTANCE: no alpha instance {0:?}")]
    UnknownInstance(String),
    #[error("UNKNOWN_STATE: alpha {alpha:?} has no state {state:?}")]
    UnknownState { alpha: String, state: String },
    #[error("UNKNOWN_CHECKPOINT: state {state:?} has no checkpoint {checkpoint:?}")]
    UnknownCheckpoint { state: String, checkpoint: String },
    #[error("UNKNOWN_EVIDENCE: no work product instance {0:?}")]
    UnknownEvidence(String),
    #[error("UNKNOWN_ALPHA: kernel has no alpha {0:?}")]
    UnknownAlpha(String),
    #[error("UNKNOWN_WORK_PRODUCT: kernel has no work product {0:?}")]
    UnknownWorkProduct(String),
    #[error("DUPLICATE_ID: {0:?} is already used")]
    DuplicateId(String),
}

impl AssessmentError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::UnknownInstance(_) => "UNKNOWN_INSTANCE",
            Self::UnknownState { .. } => "UNKNOWN_STATE",
            Self::UnknownCheckpoint { .. } => "UNKNOWN_CHECKPOINT",
            Self::UnknownEvidence(_) => "UNKNOWN_EVIDENCE",
            Self::UnknownAlpha(_) => "UNKNOWN_ALPHA",
            Self::UnknownWorkProduct(_) => "UNKNOWN_WORK_PRODUCT",
            Self::DuplicateId(_) => "DUPLICATE_ID",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingCheckpoint {
    pub state: String,
    pub checkpoint: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct StateResult {
    pub achieved: Option<String>,
    /// -1 when no state is achieved.
    pub achieved_index: i64,
    pub next_state: Option<String>,
    pub blocking: Vec<BlockingCheckpoint>,
}

type RecordKey<'a> = (&'a str, &'a str, &'a str);

/// A project's alpha instances, work products, and checkpoint records.
///
/// Records are kept in recording order; the last record for an
/// (instance, state, checkpoint) key is the effective one.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub project_id: String,
    kernel: Arc<KernelDefinition>,
    instances: Vec<AlphaInstance>,
    work_products: Vec<WorkProductInstance>,
    records: Vec<CheckpointRecord>,
    pub strict_evidence: bool,
}

impl Assessment {
    pub fn new(project_id: impl Into<String>, kernel: Arc<KernelDefinition>) -> Self {
        Self {
            project_id: project_id.into(),
            kernel,
            instances: Vec::new(),
            work_products: Vec::new(),
            records: Vec::new(),
            strict_evidence: false,
        }
    }

    pub fn kernel(&self) -> &KernelDefinition {
        &self.kernel
    }

    pub fn kernel_arc(&self) -> &Arc<KernelDefinition> {
        &self.kernel
    }

    pub fn instances(&self) -> &[AlphaInstance] {
        &self.instances
    }

    pub fn work_products(&self) -> &[WorkProductInstance] {
        &self.work_products
    }

    pub fn records(&self) -> &[CheckpointRecord] {
        &self.records
    }

    pub fn instance(&self, id: &str) -> Option<&AlphaInstance> {
        self.instances.iter().find(|i| i.id == id)
    }

    pub fn add_instance(&mut self, instance: AlphaInstance) -> Result<(), AssessmentError> {
        if self.kernel.find_alpha(&instance.alpha).is_none() {
            return Err(AssessmentError::UnknownAlpha(instance.alpha));
        }
        if self.instance(&instance.id).is_some() {
            return Err(AssessmentError::DuplicateId(instance.id));
        }
        self.instances.push(instance);
        Ok(())
    }

    pub fn add_work_product(&mut self, wp: WorkProductInstance) -> Result<(), AssessmentError> {
        if self.kernel.work_product(&wp.definition).is_none() {
            return Err(AssessmentError::UnknownWorkProduct(wp.definition));
        }
        if self.work_products.iter().any(|w| w.id == wp.id) {
            return Err(AssessmentError::DuplicateId(wp.id));
        }
        self.work_products.push(wp);
        Ok(())
    }

    /// Drops a work product and every evidence link to it.
    pub fn remove_work_product(&mut self, id: &str) {
        self.work_products.retain(|w| w.id != id);
        for rec in &mut self.records {
            rec.evidence.retain(|e| e != id);
        }
    }

    fn alpha_of(&self, instance_id: &str) -> Result<&AlphaDefinition, AssessmentError> {
        let inst =
            self.instance(instance_id).ok_or_else(|| AssessmentError::UnknownInstance(instance_id.to_owned()))?;
        self.kernel.find_alpha(&inst.alpha).ok_or_else(|| AssessmentError::UnknownAlpha(inst.alpha.clone()))
    }

    fn check_record(&self, rec: &CheckpointRecord) -> Result<(), AssessmentError> {
        let alpha = self.alpha_of(&rec.alpha_instance)?;
        let state = alpha.state(&rec.state).ok_or_else(|| AssessmentError::UnknownCheckpoint {
            state: rec.state.clone(),
            checkpoint: rec.checkpoint.clone(),
        })?;
        if state.checkpoint(&rec.checkpoint).is_none() {
            return Err(AssessmentError::UnknownCheckpoint {
                state: rec.state.clone(),
                checkpoint: rec.checkpoint.clone(),
            });
        }
        if let Some(missing) = rec.evidence.iter().find(|e| !self.work_products.iter().any(|w| &w.id == *e)) {
            return Err(AssessmentError::UnknownEvidence(missing.clone()));
        }
        Ok(())
    }

    /// Makes `rec` the effective record for its key. Recording a record equal
    /// to the current effective one leaves the assessment unchanged. On error
    /// nothing is modified.
    pub fn record_checkpoint(&mut self, rec: CheckpointRecord) -> Result<(), AssessmentError> {
        self.check_record(&rec)?;
        let key = (rec.alpha_instance.as_str(), rec.state.as_str(), rec.checkpoint.as_str());
        if self.effective().get(&key) == Some(&&rec) {
            return Ok(());
        }
        self.records.push(rec);
        Ok(())
    }

    fn effective(&self) -> HashMap<RecordKey<'_>, &CheckpointRecord> {
        self.records.iter().map(|r| ((r.alpha_instance.as_str(), r.state.as_str(), r.checkpoint.as_str()), r)).collect()
    }

    fn counts_as_satisfied(&self, rec: &CheckpointRecord) -> bool {
        rec.satisfied && !(self.strict_evidence && rec.evidence.is_empty())
    }

    /// Per-state satisfaction flags for one instance, in definition order.
    pub fn satisfaction(&self, instance_id: &str) -> Result<Vec<Vec<bool>>, AssessmentError> {
        let alpha = self.alpha_of(instance_id)?;
        let effective = self.effective();
        Ok(alpha
            .states
            .iter()
            .map(|s| {
                s.checkpoints
                    .iter()
                    .map(|c| {
                        effective
                            .get(&(instance_id, s.name.as_str(), c.id.as_str()))
                            .is_some_and(|r| self.counts_as_satisfied(r))
                    })
                    .collect()
            })
            .collect())
    }

    pub fn alpha_state(&self, instance_id: &str) -> Result<StateResult, AssessmentError> {
        let alpha = self.alpha_of(instance_id)?;
        let sat = self.satisfaction(instance_id)?;
        let achieved = sat.iter().take_while(|state| state.iter().all(|&b| b)).count();
        let achieved_index = achieved as i64 - 1;
        let next = alpha.states.get(achieved);
        let blocking = next
            .map(|state| {
                state
                    .checkpoints
                    .iter()
                    .zip(&sat[achieved])
                    .filter(|(_, &ok)| !ok)
                    .map(|(c, _)| BlockingCheckpoint {
                        state: state.name.clone(),
                        checkpoint: c.id.clone(),
                        text: c.text.clone(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        Ok(StateResult {
            achieved: achieved.checked_sub(1).map(|i| alpha.states[i].name.clone()),
            achieved_index,
            next_state: next.map(|s| s.name.clone()),
            blocking,
        })
    }

    /// Every unsatisfied checkpoint from the first state through `target`.
    pub fn blocking_checkpoints(
        &self,
        instance_id: &str,
        target: &str,
    ) -> Result<Vec<BlockingCheckpoint>, AssessmentError> {
        let alpha = self.alpha_of(instance_id)?;
        let upto = alpha
            .state_index(target)
            .ok_or_else(|| AssessmentError::UnknownState { alpha: alpha.name.clone(), state: target.to_owned() })?;
        let sat = self.satisfaction(instance_id)?;
        Ok(alpha.states[..=upto]
            .iter()
            .zip(&sat)
            .flat_map(|(state, flags)| {
                state.checkpoints.iter().zip(flags).filter(|(_, &ok)| !ok).map(|(c, _)| BlockingCheckpoint {
                    state: state.name.clone(),
                    checkpoint: c.id.clone(),
                    text: c.text.clone(),
                })
            })
            .collect())
    }

    /// Plain-text state card. The achieved state's line starts with `*`.
    pub fn render_card(&self, instance_id: &str) -> Result<String, AssessmentError> {
        let alpha = self.alpha_of(instance_id)?;
        let inst = self.instance(instance_id).expect("checked by alpha_of");
        let sat = self.satisfaction(instance_id)?;
        let result = self.alpha_state(instance_id)?;
        let width = alpha.states.iter().map(|s| s.name.chars().count()).max().unwrap_or(0);

        let mut out = String::new();
        let _ = writeln!(out, "{} [{}, {}]", alpha.name, inst.id, inst.system_level);
        let _ = writeln!(out, "achieved: {}", result.achieved.as_deref().unwrap_or("none"));
        for (i, (state, flags)) in alpha.states.iter().zip(&sat).enumerate() {
            let marker = if i as i64 == result.achieved_index { '*' } else { ' ' };
            let done = flags.iter().filter(|&&b| b).count();
            let _ = writeln!(out, "{marker} {}. {:<width$}  {done}/{}", i + 1, state.name, flags.len(),);
        }
        Ok(out)
    }
}

/// Parts of an assessment as stored on disk; the kernel lives elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AssessmentDoc {
    #[serde(default)]
    pub strict_evidence: bool,
    #[serde(default)]
    pub instances: Vec<AlphaInstance>,
    #[serde(default)]
    pub work_products: Vec<WorkProductInstance>,
    #[serde(default)]
    pub records: Vec<CheckpointRecord>,
}

impl Assessment {
    pub fn to_doc(&self) -> AssessmentDoc {
        AssessmentDoc {
            strict_evidence: self.strict_evidence,
            instances: self.instances.clone(),
            work_products: self.work_products.clone(),
            records: self.records.clone(),
        }
    }

    /// Rebuilds an assessment, replaying records in order. Errors carry the
    /// offending element's path.
    pub fn from_doc(
        project_id: &str,
        kernel: Arc<KernelDefinition>,
        doc: AssessmentDoc,
    ) -> Result<Self, (String, AssessmentError)> {
        let mut a = Assessment::new(project_id, kernel);
        a.strict_evidence = doc.strict_evidence;
        for (i, inst) in doc.instances.into_iter().enumerate() {
            a.add_instance(inst).map_err(|e| (format!("assessment.instances[{i}]"), e))?;
        }
        for (i, wp) in doc.work_products.into_iter().enumerate() {
            a.add_work_product(wp).map_err(|e| (format!("assessment.work-products[{i}]"), e))?;
        }
        for (i, rec) in doc.records.into_iter().enumerate() {
            // Keep the stored history verbatim, including repeats.
            a.check_record(&rec).map_err(|e| (format!("assessment.records[{i}]"), e))?;
            a.records.push(rec);
        }
        Ok(a)
    }
}
