//! Architecture and system description model: viewpoints govern views,
//! views group elements, and elements that denote the same spatio-temporal
//! extent are merged into one coextension class.
//!
//! Elements without extent (pure definitions) never join a class and are
//! never bound to a realization node.

mod partition;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designation::{Aspect, AspectChain};
use partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureType {
    ComponentConnector,
    ModuleInterface,
    Allocation,
    Other,
}

impl StructureType {
    /// The three families a viable architecture must cover.
    pub const REQUIRED: [StructureType; 3] =
        [StructureType::ComponentConnector, StructureType::ModuleInterface, StructureType::Allocation];
}

impl fmt::Display for StructureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureType::ComponentConnector => "ComponentConnector",
            StructureType::ModuleInterface => "ModuleInterface",
            StructureType::Allocation => "Allocation",
            StructureType::Other => "Other",
        })
    }
}

/// How an endeavor description is organized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescriptionKind {
    Practice,
    Process,
    Team,
    #[default]
    Other,
}

impl DescriptionKind {
    pub const ENDEAVOR: [DescriptionKind; 3] =
        [DescriptionKind::Practice, DescriptionKind::Process, DescriptionKind::Team];
}

impl fmt::Display for DescriptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescriptionKind::Practice => "Practice",
            DescriptionKind::Process => "Process",
            DescriptionKind::Team => "Team",
            DescriptionKind::Other => "Other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Viewpoint {
    pub name: String,
    pub structure_type: StructureType,
    #[serde(default)]
    pub concerns: Vec<String>,
    #[serde(default)]
    pub description_kind: DescriptionKind,
}

impl Viewpoint {
    pub fn new(name: impl Into<String>, structure_type: StructureType) -> Self {
        Self { name: name.into(), structure_type, concerns: Vec::new(), description_kind: DescriptionKind::Other }
    }

    pub fn with_kind(mut self, kind: DescriptionKind) -> Self {
        self.description_kind = kind;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct View {
    pub name: String,
    pub viewpoint: String,
    #[serde(default)]
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ViewElement {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub has_extent: bool,
}

impl ViewElement {
    pub fn extended(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self { id: id.into(), label: label.into(), has_extent: true }
    }

    pub fn definition(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self { id: id.into(), label: label.into(), has_extent: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationNode {
    pub id: String,
    #[serde(default)]
    pub designators: BTreeMap<Aspect, AspectChain>,
}

impl RealizationNode {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), designators: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptionError {
    #[error("DUPLICATE_NAME: {0:?} already exists")]
    DuplicateName(String),
    #[error("UNKNOWN_REFERENCE: {0:?} does not exist")]
    UnknownReference(String),
    #[error("NO_EXTENT: element {0:?} is definition-only")]
    NoExtent(String),
    #[error("BINDING_CONFLICT: classes are bound to {0:?} and {1:?}")]
    BindingConflict(String, String),
    #[error("ASPECT_ALREADY_BOUND: node {node:?} already has a {aspect} designator")]
    AspectAlreadyBound { node: String, aspect: Aspect },
}

impl DescriptionError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::DuplicateName(_) => "DUPLICATE_NAME",
            Self::UnknownReference(_) => "UNKNOWN_REFERENCE",
            Self::NoExtent(_) => "NO_EXTENT",
            Self::BindingConflict(..) => "BINDING_CONFLICT",
            Self::AspectAlreadyBound { .. } => "ASPECT_ALREADY_BOUND",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArchitectureReport {
    pub viable: bool,
    pub covered: Vec<StructureType>,
    pub missing: Vec<StructureType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintWarning {
    pub missing_kind: DescriptionKind,
    pub message: String,
}

/// Every mutating operation validates first and changes nothing on error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DescriptionModel {
    viewpoints: IndexMap<String, Viewpoint>,
    views: IndexMap<String, View>,
    elements: IndexMap<String, ViewElement>,
    nodes: IndexMap<String, RealizationNode>,
    /// Indexed like `elements`; definition-only elements stay singletons.
    coextension: Partition,
    /// Element index -> realization node id; constant across a class.
    bindings: BTreeMap<usize, String>,
}

impl DescriptionModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn viewpoints(&self) -> impl Iterator<Item = &Viewpoint> {
        self.viewpoints.values()
    }

    pub fn views(&self) -> impl Iterator<Item = &View> {
        self.views.values()
    }

    pub fn elements(&self) -> impl Iterator<Item = &ViewElement> {
        self.elements.values()
    }

    pub fn realization_nodes(&self) -> impl Iterator<Item = &RealizationNode> {
        self.nodes.values()
    }

    pub fn realization_node(&self, id: &str) -> Option<&RealizationNode> {
        self.nodes.get(id)
    }

    pub fn add_viewpoint(&mut self, vp: Viewpoint) -> Result<(), DescriptionError> {
        if self.viewpoints.contains_key(&vp.name) {
            return Err(DescriptionError::DuplicateName(vp.name));
        }
        self.viewpoints.insert(vp.name.clone(), vp);
        Ok(())
    }

    pub fn add_view(&mut self, view: View) -> Result<(), DescriptionError> {
        if self.views.contains_key(&view.name) {
            return Err(DescriptionError::DuplicateName(view.name));
        }
        if !self.viewpoints.contains_key(&view.viewpoint) {
            return Err(DescriptionError::UnknownReference(view.viewpoint));
        }
        if let Some(missing) = view.elements.iter().find(|e| !self.elements.contains_key(*e)) {
            return Err(DescriptionError::UnknownReference(missing.clone()));
        }
        self.views.insert(view.name.clone(), view);
        Ok(())
    }

    pub fn add_element(&mut self, element: ViewElement) -> Result<(), DescriptionError> {
        if self.elements.contains_key(&element.id) {
            return Err(DescriptionError::DuplicateName(element.id));
        }
        self.elements.insert(element.id.clone(), element);
        self.coextension.push();
        Ok(())
    }

    pub fn add_realization_node(&mut self, node: RealizationNode) -> Result<(), DescriptionError> {
        if self.nodes.contains_key(&node.id) {
            return Err(DescriptionError::DuplicateName(node.id));
        }
        self.nodes.insert(node.id.clone(), node);
        Ok(())
    }

    pub fn bind_designator(&mut self, node: &str, chain: AspectChain) -> Result<(), DescriptionError> {
        let entry = self.nodes.get_mut(node).ok_or_else(|| DescriptionError::UnknownReference(node.to_owned()))?;
        if entry.designators.contains_key(&chain.aspect()) {
            return Err(DescriptionError::AspectAlreadyBound { node: node.to_owned(), aspect: chain.aspect() });
        }
        entry.designators.insert(chain.aspect(), chain);
        Ok(())
    }

    fn extended_index(&self, id: &str) -> Result<usize, DescriptionError> {
        let (idx, _, el) =
            self.elements.get_full(id).ok_or_else(|| DescriptionError::UnknownReference(id.to_owned()))?;
        if !el.has_extent {
            return Err(DescriptionError::NoExtent(id.to_owned()));
        }
        Ok(idx)
    }

    fn class_binding(&self, idx: usize) -> Option<&String> {
        self.bindings.get(&self.coextension.find(idx)).or_else(|| self.bindings.get(&idx))
    }

    fn set_class_binding(&mut self, idx: usize, node: String) {
        for m in self.coextension.members(idx) {
            self.bindings.insert(m, node.clone());
        }
    }

    /// Records that an element denotes the individual a realization node
    /// stands for. The binding spreads to the element's whole class.
    pub fn bind_element(&mut self, element: &str, node: &str) -> Result<(), DescriptionError> {
        let idx = self.extended_index(element)?;
        if !self.nodes.contains_key(node) {
            return Err(DescriptionError::UnknownReference(node.to_owned()));
        }
        match self.class_binding(idx) {
            Some(existing) if existing != node => {
                return Err(DescriptionError::BindingConflict(existing.clone(), node.to_owned()))
            }
            _ => {}
        }
        self.set_class_binding(idx, node.to_owned());
        Ok(())
    }

    pub fn binding(&self, element: &str) -> Option<&str> {
        let idx = self.elements.get_index_of(element)?;
        self.bindings.get(&idx).map(String::as_str)
    }

    /// Declares that two elements denote the same spatio-temporal extent,
    /// merging their classes.
    pub fn assert_coextension(&mut self, a: &str, b: &str) -> Result<(), DescriptionError> {
        let ia = self.extended_index(a)?;
        let ib = self.extended_index(b)?;
        let merged = match (self.class_binding(ia).cloned(), self.class_binding(ib).cloned()) {
            (Some(x), Some(y)) if x != y => return Err(DescriptionError::BindingConflict(x, y)),
            (x, y) => x.or(y),
        };
        self.coextension.union(ia, ib);
        if let Some(node) = merged {
            self.set_class_binding(ia, node);
        }
        Ok(())
    }

    pub fn coextension_class(&self, element: &str) -> Result<BTreeSet<String>, DescriptionError> {
        let idx = self.extended_index(element)?;
        Ok(self.class_ids(idx).into_iter().collect())
    }

    fn class_ids(&self, idx: usize) -> Vec<String> {
        self.coextension.members(idx).into_iter().map(|i| self.elements[i].id.clone()).collect()
    }

    /// All classes over extended elements, each in element order, ordered by
    /// first member.
    pub fn coextension_classes(&self) -> Vec<Vec<String>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, el) in self.elements.values().enumerate() {
            if el.has_extent && seen.insert(self.coextension.find(i)) {
                out.push(self.class_ids(i));
            }
        }
        out
    }

    /// Viable when the named views' viewpoints cover component-connector,
    /// module-interface, and allocation structures.
    pub fn viable_architecture<S: AsRef<str>>(&self, views: &[S]) -> Result<ArchitectureReport, DescriptionError> {
        let mut covered = BTreeSet::new();
        for name in views {
            let view = self
                .views
                .get(name.as_ref())
                .ok_or_else(|| DescriptionError::UnknownReference(name.as_ref().to_owned()))?;
            covered.insert(self.viewpoints[&view.viewpoint].structure_type);
        }
        let missing: Vec<_> = StructureType::REQUIRED.into_iter().filter(|t| !covered.contains(t)).collect();
        Ok(ArchitectureReport { viable: missing.is_empty(), covered: covered.into_iter().collect(), missing })
    }

    /// One warning per practice/process/team description kind with no viewpoint.
    pub fn endeavor_viewpoint_lint(&self) -> Vec<LintWarning> {
        DescriptionKind::ENDEAVOR
            .into_iter()
            .filter(|k| !self.viewpoints.values().any(|v| v.description_kind == *k))
            .map(|k| LintWarning {
                missing_kind: k,
                message: format!("no {}-based viewpoint describes the endeavor", k.to_string().to_lowercase()),
            })
            .collect()
    }
}

/// On-disk shape. Only classes with two or more members are listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct DescriptionDoc {
    #[serde(default)]
    pub viewpoints: Vec<Viewpoint>,
    #[serde(default)]
    pub views: Vec<View>,
    #[serde(default)]
    pub elements: Vec<ViewElement>,
    #[serde(default)]
    pub realization_nodes: Vec<RealizationNode>,
    #[serde(default)]
    pub coextension: Vec<Vec<String>>,
    #[serde(default)]
    pub bindings: IndexMap<String, String>,
}

impl DescriptionModel {
    pub fn to_doc(&self) -> DescriptionDoc {
        DescriptionDoc {
            viewpoints: self.viewpoints.values().cloned().collect(),
            views: self.views.values().cloned().collect(),
            elements: self.elements.values().cloned().collect(),
            realization_nodes: self.nodes.values().cloned().collect(),
            coextension: self.coextension_classes().into_iter().filter(|c| c.len() > 1).collect(),
            bindings: self.bindings.iter().map(|(&i, n)| (self.elements[i].id.clone(), n.clone())).collect(),
        }
    }

    /// Rebuilds a model through the checked operations; errors carry a path.
    pub fn from_doc(doc: DescriptionDoc) -> Result<Self, (String, DescriptionError)> {
        let mut m = DescriptionModel::new();
        for (i, vp) in doc.viewpoints.into_iter().enumerate() {
            m.add_viewpoint(vp).map_err(|e| (format!("description.viewpoints[{i}]"), e))?;
        }
        for (i, el) in doc.elements.into_iter().enumerate() {
            m.add_element(el).map_err(|e| (format!("description.elements[{i}]"), e))?;
        }
        for (i, view) in doc.views.into_iter().enumerate() {
            m.add_view(view).map_err(|e| (format!("description.views[{i}]"), e))?;
        }
        for (i, node) in doc.realization_nodes.into_iter().enumerate() {
            let path = format!("description.realization-nodes[{i}]");
            if let Some((key, chain)) = node.designators.iter().find(|(k, c)| **k != c.aspect()) {
                return Err((path, DescriptionError::UnknownReference(format!("{key} designator {chain}"))));
            }
            m.add_realization_node(node).map_err(|e| (path, e))?;
        }
        for (i, class) in doc.coextension.iter().enumerate() {
            let path = format!("description.coextension[{i}]");
            if let [first, rest @ ..] = class.as_slice() {
                if rest.is_empty() {
                    m.extended_index(first).map_err(|e| (path.clone(), e))?;
                }
                for other in rest {
                    m.assert_coextension(first, other).map_err(|e| (path.clone(), e))?;
                }
            }
        }
        for (element, node) in &doc.bindings {
            m.bind_element(element, node).map_err(|e| (format!("description.bindings.{element}"), e))?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_with_elements(ids: &[(&str, bool)]) -> DescriptionModel {
        let mut m = DescriptionModel::new();
        for &(id, extent) in ids {
            m.add_element(ViewElement { id: id.into(), label: String::new(), has_extent: extent }).unwrap();
        }
        m
    }

    #[test]
    fn view_needs_known_viewpoint() {
        let mut m = DescriptionModel::new();
        let err = m.add_view(View { name: "v".into(), viewpoint: "ghost".into(), elements: vec![] }).unwrap_err();
        assert_eq!(err.code(), "UNKNOWN_REFERENCE");
    }

    #[test]
    fn duplicate_viewpoint() {
        let mut m = DescriptionModel::new();
        m.add_viewpoint(Viewpoint::new("Process View", StructureType::Other)).unwrap();
        let err = m.add_viewpoint(Viewpoint::new("Process View", StructureType::Other)).unwrap_err();
        assert_eq!(err.code(), "DUPLICATE_NAME");
    }

    #[test]
    fn constructive_case() {
        let mut m = DescriptionModel::new();
        m.add_viewpoint(Viewpoint::new("P&ID", StructureType::ComponentConnector)).unwrap();
        m.add_element(ViewElement::extended("pump", "pump =P101")).unwrap();
        m.add_view(View { name: "plant".into(), viewpoint: "P&ID".into(), elements: vec!["pump".into()] }).unwrap();
        assert_eq!((m.viewpoints().count(), m.views().count(), m.elements().count()), (1, 1, 1));
    }

    #[test]
    fn pump_drawing_and_installed_pump_coincide() {
        let mut m = model_with_elements(&[("pid-pump", true), ("asbuilt-pump", true)]);
        m.assert_coextension("pid-pump", "asbuilt-pump").unwrap();
        let class = m.coextension_class("pid-pump").unwrap();
        assert_eq!(class, BTreeSet::from(["pid-pump".to_string(), "asbuilt-pump".to_string()]));
        assert_eq!(m.coextension_class("asbuilt-pump").unwrap(), class);
    }

    #[test]
    fn transitivity_and_reflexivity() {
        let mut m = model_with_elements(&[("a", true), ("b", true), ("c", true), ("d", true)]);
        assert_eq!(m.coextension_class("d").unwrap(), BTreeSet::from(["d".to_string()]));
        m.assert_coextension("a", "b").unwrap();
        m.assert_coextension("b", "c").unwrap();
        assert_eq!(m.coextension_class("a").unwrap().len(), 3);
    }

    #[test]
    fn definition_only_elements_refused() {
        let mut m = model_with_elements(&[("req", false), ("pump", true)]);
        assert_eq!(m.assert_coextension("req", "pump").unwrap_err().code(), "NO_EXTENT");
        assert_eq!(m.assert_coextension("pump", "req").unwrap_err().code(), "NO_EXTENT");
        assert_eq!(m.coextension_class("req").unwrap_err().code(), "NO_EXTENT");
        assert_eq!(m.coextension_class("zz").unwrap_err().code(), "UNKNOWN_REFERENCE");
        m.add_realization_node(RealizationNode::new("n")).unwrap();
        assert_eq!(m.bind_element("req", "n").unwrap_err().code(), "NO_EXTENT");
    }

    #[test]
    fn binding_propagates_and_conflicts() {
        let mut m = model_with_elements(&[("a", true), ("b", true), ("c", true)]);
        m.add_realization_node(RealizationNode::new("n1")).unwrap();
        m.add_realization_node(RealizationNode::new("n2")).unwrap();
        m.bind_element("a", "n1").unwrap();
        m.assert_coextension("a", "b").unwrap();
        assert_eq!(m.binding("b"), Some("n1"));
        m.bind_element("c", "n2").unwrap();
        let before = m.clone();
        assert_eq!(m.assert_coextension("b", "c").unwrap_err().code(), "BINDING_CONFLICT");
        assert_eq!(m, before);
        assert_eq!(m.bind_element("b", "n2").unwrap_err().code(), "BINDING_CONFLICT");
    }

    #[test]
    fn designators() {
        let mut m = DescriptionModel::new();
        m.add_realization_node(RealizationNode::new("sys")).unwrap();
        for c in ["=F1", "-12-N4-DN18", "+M13"] {
            m.bind_designator("sys", c.parse().unwrap()).unwrap();
        }
        assert_eq!(m.realization_node("sys").unwrap().designators.len(), 3);
        let err = m.bind_designator("sys", "=F2".parse().unwrap()).unwrap_err();
        assert_eq!(err.code(), "ASPECT_ALREADY_BOUND");
        assert_eq!(m.bind_designator("other", "=F2".parse().unwrap()).unwrap_err().code(), "UNKNOWN_REFERENCE");
    }

    fn architecture_model() -> DescriptionModel {
        let mut m = DescriptionModel::new();
        for (vp, t) in [
            ("functional", StructureType::ComponentConnector),
            ("product", StructureType::ModuleInterface),
            ("location", StructureType::Allocation),
        ] {
            m.add_viewpoint(Viewpoint::new(vp, t)).unwrap();
            m.add_view(View { name: format!("{vp} view"), viewpoint: vp.into(), elements: vec![] }).unwrap();
        }
        m
    }

    #[test]
    fn viability() {
        let m = architecture_model();
        assert!(m.viable_architecture(&["functional view", "product view", "location view"]).unwrap().viable);
        let partial = m.viable_architecture(&["functional view", "product view"]).unwrap();
        assert!(!partial.viable);
        assert_eq!(partial.missing, [StructureType::Allocation]);
        let none = m.viable_architecture::<&str>(&[]).unwrap();
        assert_eq!(none.missing.len(), 3);
        assert_eq!(m.viable_architecture(&["ghost"]).unwrap_err().code(), "UNKNOWN_REFERENCE");
    }

    #[test]
    fn endeavor_lint() {
        let mut m = DescriptionModel::new();
        assert_eq!(m.endeavor_viewpoint_lint().len(), 3);
        m.add_viewpoint(Viewpoint::new("practices", StructureType::Other).with_kind(DescriptionKind::Practice))
            .unwrap();
        let kinds: Vec<_> = m.endeavor_viewpoint_lint().into_iter().map(|w| w.missing_kind).collect();
        assert_eq!(kinds, [DescriptionKind::Process, DescriptionKind::Team]);
        m.add_viewpoint(Viewpoint::new("schedule", StructureType::Other).with_kind(DescriptionKind::Process)).unwrap();
        m.add_viewpoint(Viewpoint::new("org chart", StructureType::Other).with_kind(DescriptionKind::Team)).unwrap();
        assert!(m.endeavor_viewpoint_lint().is_empty());
    }

    #[test]
    fn doc_round_trip() {
        let mut m = architecture_model();
        for id in ["a", "b", "c"] {
            m.add_element(ViewElement::extended(id, id.to_uppercase())).unwrap();
        }
        m.add_element(ViewElement::definition("spec", "spec")).unwrap();
        m.add_realization_node(RealizationNode::new("n")).unwrap();
        m.bind_designator("n", "+M13".parse().unwrap()).unwrap();
        m.assert_coextension("c", "a").unwrap();
        m.bind_element("a", "n").unwrap();
        let doc = m.to_doc();
        assert_eq!(doc.coextension, vec![vec!["a".to_string(), "c".to_string()]]);
        assert_eq!(doc.bindings.len(), 2);
        let back = DescriptionModel::from_doc(doc.clone()).unwrap();
        assert_eq!(back.to_doc(), doc);
    }
}
