use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{is_valid_segment, Aspect, AspectChain, MultiAspectDesignation};

/// Root-to-node segment path, e.g. `["12", "N4", "DN18"]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<String>);

impl NodePath {
    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn ends_with(&self, suffix: &[String]) -> bool {
        self.0.ends_with(suffix)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("ASPECT_MISMATCH: chain is {chain}, tree is {tree}")]
    AspectMismatch { tree: Aspect, chain: Aspect },
    #[error("MISSING_TREE: no breakdown tree for the {0} aspect")]
    MissingTree(Aspect),
    #[error("DUPLICATE_SIBLING: {segment:?} already exists under {parent}")]
    DuplicateSibling { parent: String, segment: String },
    #[error("UNKNOWN_NODE: {0}")]
    UnknownNode(String),
    #[error("BAD_SEGMENT: {0:?}")]
    BadSegment(String),
}

impl TreeError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::AspectMismatch { .. } => "ASPECT_MISMATCH",
            Self::MissingTree(_) => "MISSING_TREE",
            Self::DuplicateSibling { .. } => "DUPLICATE_SIBLING",
            Self::UnknownNode(_) => "UNKNOWN_NODE",
            Self::BadSegment(_) => "BAD_SEGMENT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    segment: String,
    parent: usize,
    children: Vec<usize>,
}

/// Per-aspect system hierarchy. Node 0 is an unnamed root standing for the
/// whole system; designatable nodes are its descendants.
#[derive(Debug, Clone)]
pub struct BreakdownTree {
    aspect: Aspect,
    nodes: Vec<Node>,
}

const ROOT: usize = 0;

/// Structural: same aspect and same sibling-ordered shape, whatever the
/// arena layout.
impl PartialEq for BreakdownTree {
    fn eq(&self, other: &Self) -> bool {
        self.aspect == other.aspect && self.paths() == other.paths()
    }
}

impl Eq for BreakdownTree {}

impl BreakdownTree {
    pub fn new(aspect: Aspect) -> Self {
        Self { aspect, nodes: vec![Node { segment: String::new(), parent: ROOT, children: Vec::new() }] }
    }

    pub fn aspect(&self) -> Aspect {
        self.aspect
    }

    /// Number of designatable nodes (the root is not counted).
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn child(&self, parent: usize, segment: &str) -> Option<usize> {
        self.nodes[parent].children.iter().copied().find(|&c| self.nodes[c].segment == segment)
    }

    fn locate(&self, path: &[String]) -> Option<usize> {
        path.iter().try_fold(ROOT, |at, seg| self.child(at, seg))
    }

    pub fn contains(&self, path: &NodePath) -> bool {
        self.locate(&path.0).is_some()
    }

    /// Adds one child under an existing node.
    pub fn add_child(&mut self, parent: &NodePath, segment: &str) -> Result<NodePath, TreeError> {
        if !is_valid_segment(segment) {
            return Err(TreeError::BadSegment(segment.to_owned()));
        }
        let at = self.locate(&parent.0).ok_or_else(|| TreeError::UnknownNode(parent.to_string()))?;
        if self.child(at, segment).is_some() {
            return Err(TreeError::DuplicateSibling { parent: parent.to_string(), segment: segment.to_owned() });
        }
        self.push(at, segment);
        let mut path = parent.0.clone();
        path.push(segment.to_owned());
        Ok(NodePath(path))
    }

    /// Ensures the whole path exists, creating missing nodes.
    pub fn add_path<S: AsRef<str>>(&mut self, segments: &[S]) -> Result<NodePath, TreeError> {
        if let Some(bad) = segments.iter().find(|s| !is_valid_segment(s.as_ref())) {
            return Err(TreeError::BadSegment(bad.as_ref().to_owned()));
        }
        let mut at = ROOT;
        for seg in segments {
            at = match self.child(at, seg.as_ref()) {
                Some(c) => c,
                None => self.push(at, seg.as_ref()),
            };
        }
        Ok(NodePath(segments.iter().map(|s| s.as_ref().to_owned()).collect()))
    }

    fn push(&mut self, parent: usize, segment: &str) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node { segment: segment.to_owned(), parent, children: Vec::new() });
        self.nodes[parent].children.push(id);
        id
    }

    fn path_of(&self, mut id: usize) -> NodePath {
        let mut segs = Vec::new();
        while id != ROOT {
            segs.push(self.nodes[id].segment.clone());
            id = self.nodes[id].parent;
        }
        segs.reverse();
        NodePath(segs)
    }

    /// Every designatable node's path in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<usize> = self.nodes[ROOT].children.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            out.push(self.path_of(id));
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    /// True when walking up from `id` reproduces `suffix` read backwards.
    fn has_suffix(&self, mut id: usize, suffix: &[String]) -> bool {
        for seg in suffix.iter().rev() {
            if id == ROOT || self.nodes[id].segment != *seg {
                return false;
            }
            id = self.nodes[id].parent;
        }
        true
    }
}

/// All nodes whose root-to-node path ends with the chain's segments.
pub fn resolve(tree: &BreakdownTree, chain: &AspectChain) -> Result<BTreeSet<NodePath>, TreeError> {
    if tree.aspect != chain.aspect() {
        return Err(TreeError::AspectMismatch { tree: tree.aspect, chain: chain.aspect() });
    }
    let suffix = chain.segments();
    Ok((1..tree.nodes.len()).filter(|&id| tree.has_suffix(id, suffix)).map(|id| tree.path_of(id)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainResolution {
    pub aspect: Aspect,
    pub chain: String,
    pub matches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnambiguityReport {
    pub passed: bool,
    pub chains: Vec<ChainResolution>,
}

/// Passes when at least one chain of `d` designates exactly one node.
pub fn check_at_least_one_unambiguous(
    trees: &BTreeMap<Aspect, BreakdownTree>,
    d: &MultiAspectDesignation,
) -> Result<UnambiguityReport, TreeError> {
    let mut chains = Vec::new();
    for chain in d.canonical_chains() {
        let tree = trees.get(&chain.aspect()).ok_or(TreeError::MissingTree(chain.aspect()))?;
        chains.push(ChainResolution {
            aspect: chain.aspect(),
            chain: chain.to_string(),
            matches: resolve(tree, chain)?.len(),
        });
    }
    Ok(UnambiguityReport { passed: chains.iter().any(|c| c.matches == 1), chains })
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    segment: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    aspect: Aspect,
    nodes: Vec<NodeDoc>,
}

impl BreakdownTree {
    fn to_docs(&self, id: usize) -> Vec<NodeDoc> {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| NodeDoc { segment: self.nodes[c].segment.clone(), children: self.to_docs(c) })
            .collect()
    }

    fn insert_docs(&mut self, parent: usize, docs: Vec<NodeDoc>) -> Result<(), TreeError> {
        for doc in docs {
            if !is_valid_segment(&doc.segment) {
                return Err(TreeError::BadSegment(doc.segment));
            }
            if self.child(parent, &doc.segment).is_some() {
                return Err(TreeError::DuplicateSibling {
                    parent: self.path_of(parent).to_string(),
                    segment: doc.segment,
                });
            }
            let id = self.push(parent, &doc.segment);
            self.insert_docs(id, doc.children)?;
        }
        Ok(())
    }
}

impl Serialize for BreakdownTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TreeDoc { aspect: self.aspect, nodes: self.to_docs(ROOT) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BreakdownTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = TreeDoc::deserialize(deserializer)?;
        let mut tree = BreakdownTree::new(doc.aspect);
        tree.insert_docs(ROOT, doc.nodes).map_err(serde::de::Error::custom)?;
        Ok(tree)
    }
}
