//! Seeded generators and brute-force oracles shared by the acceptance suite
//! and the property tests. Oracles use only public data and never call the
//! routine they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use essence_core::assessment::{AlphaInstance, Assessment, CheckpointRecord, SystemLevel, WorkProductInstance};
use essence_core::description::{
    DescriptionKind, DescriptionModel, RealizationNode, StructureType, View, ViewElement, Viewpoint,
};
use essence_core::designation::{parse_document_designation, Aspect, AspectChain, BreakdownTree, DccTable};
use essence_core::kernel_data::{builtin_se_kernel, SYSTEM_DEFINITION, SYSTEM_REALIZATION};
use essence_core::metamodel::{AlphaDefinition, KernelDefinition};
use essence_core::project::Project;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn builtin() -> Arc<KernelDefinition> {
    Arc::new(builtin_se_kernel())
}

pub fn random_segment(rng: &mut ChaCha8Rng, alphabet: &[&str]) -> String {
    alphabet.choose(rng).unwrap().to_string()
}

pub fn random_records(
    rng: &mut ChaCha8Rng,
    instance: &str,
    alpha: &AlphaDefinition,
    wps: &[String],
    n: usize,
) -> Vec<CheckpointRecord> {
    (0..n)
        .map(|i| {
            let state = alpha.states.choose(rng).unwrap();
            let cp = state.checkpoints.choose(rng).unwrap();
            let evidence: Vec<String> = wps.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
            let mut rec =
                CheckpointRecord::new(instance, &state.name, &cp.id, rng.gen_bool(0.75)).with_evidence(evidence);
            rec.recorded_at = i as i64;
            rec
        })
        .collect()
}

/// A builtin-kernel assessment with one focus instance; its records lean
/// towards satisfied so high states are reached often.
pub fn random_assessment(rng: &mut ChaCha8Rng) -> (Assessment, String) {
    let kernel = builtin();
    let mut a = Assessment::new("random", kernel.clone());
    a.strict_evidence = rng.gen_bool(0.3);
    let alpha_name = match rng.gen_range(0..10) {
        0..=3 => SYSTEM_REALIZATION.to_owned(),
        4..=7 => SYSTEM_DEFINITION.to_owned(),
        _ => kernel.alphas.choose(rng).unwrap().name.clone(),
    };
    a.add_instance(AlphaInstance {
        id: "x".into(),
        alpha: alpha_name.clone(),
        system_level: SystemLevel::SystemOfInterest,
    })
    .unwrap();
    let mut wps = Vec::new();
    for i in 0..rng.gen_range(0..4) {
        let def = kernel.workproducts.choose(rng).unwrap();
        let id = format!("wp{i}");
        a.add_work_product(WorkProductInstance {
            id: id.clone(),
            definition: def.name.clone(),
            label: String::new(),
            document_designation: None,
        })
        .unwrap();
        wps.push(id);
    }
    let alpha = kernel.find_alpha(&alpha_name).unwrap();
    let total: usize = alpha.states.iter().map(|s| s.checkpoints.len()).sum();
    let n = rng.gen_range(0..=total * 3);
    for rec in random_records(rng, "x", alpha, &wps, n) {
        a.record_checkpoint(rec).unwrap();
    }
    (a, "x".into())
}

/// Last-wins scan followed by a search over every prefix length, longest
/// first.
pub fn oracle_achieved_index(a: &Assessment, instance: &str) -> i64 {
    let alpha_name = &a.instances().iter().find(|i| i.id == instance).unwrap().alpha;
    let alpha = a.kernel().alphas.iter().find(|x| &x.name == alpha_name).unwrap();
    let mut effective: HashMap<(String, String), (bool, usize)> = HashMap::new();
    for r in a.records().iter().filter(|r| r.alpha_instance == instance) {
        effective.insert((r.state.clone(), r.checkpoint.clone()), (r.satisfied, r.evidence.len()));
    }
    let ok = |state: &str, cp: &str| match effective.get(&(state.to_owned(), cp.to_owned())) {
        Some(&(sat, ev)) => sat && (!a.strict_evidence || ev > 0),
        None => false,
    };
    for k in (0..=alpha.states.len()).rev() {
        if alpha.states[..k].iter().all(|s| s.checkpoints.iter().all(|c| ok(&s.name, &c.id))) {
            return k as i64 - 1;
        }
    }
    unreachable!("the empty prefix always holds")
}

/// Random tree over a small alphabet so that suffix collisions are common.
/// Returns the tree and every node path, built independently of the tree.
pub fn random_tree(
    rng: &mut ChaCha8Rng,
    aspect: Aspect,
    max_nodes: usize,
    alphabet: &[&str],
) -> (BreakdownTree, Vec<Vec<String>>) {
    let mut tree = BreakdownTree::new(aspect);
    let mut paths: Vec<Vec<String>> = Vec::new();
    let target = rng.gen_range(1..=max_nodes);
    let mut attempts = 0;
    while paths.len() < target && attempts < max_nodes * 20 {
        attempts += 1;
        let parent =
            if paths.is_empty() || rng.gen_bool(0.25) { Vec::new() } else { paths.choose(rng).unwrap().clone() };
        let mut path = parent;
        path.push(random_segment(rng, alphabet));
        if paths.contains(&path) {
            continue;
        }
        tree.add_path(&path).unwrap();
        paths.push(path);
    }
    (tree, paths)
}

pub fn random_chain(rng: &mut ChaCha8Rng, aspect: Aspect, alphabet: &[&str], max_len: usize) -> AspectChain {
    let len = rng.gen_range(1..=max_len);
    AspectChain::new(aspect, (0..len).map(|_| random_segment(rng, alphabet))).unwrap()
}

/// Number of enumerated paths ending with `suffix`.
pub fn oracle_matches(paths: &[Vec<String>], suffix: &[String]) -> usize {
    paths.iter().filter(|p| p.len() >= suffix.len() && p[p.len() - suffix.len()..] == *suffix).count()
}

/// Classes induced by the undirected pair graph, via reachability on a
/// boolean matrix.
pub fn oracle_classes(n: usize, pairs: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut().filter(|row| row[k]) {
            for (cell, &v) in row.iter_mut().zip(&via) {
                *cell |= v;
            }
        }
    }
    (0..n).map(|i| (0..n).filter(|&j| reach[i][j]).collect()).collect()
}

pub const STRUCTURE_TYPES: [StructureType; 4] = [
    StructureType::ComponentConnector,
    StructureType::ModuleInterface,
    StructureType::Allocation,
    StructureType::Other,
];

const KINDS: [DescriptionKind; 4] =
    [DescriptionKind::Practice, DescriptionKind::Process, DescriptionKind::Team, DescriptionKind::Other];

const SEGMENTS: &[&str] = &["A1", "B2", "C", "12", "N4", "DN18", "M13", "F1"];

fn random_description(rng: &mut ChaCha8Rng) -> DescriptionModel {
    let mut m = DescriptionModel::new();
    let n_vp = rng.gen_range(0..5);
    for i in 0..n_vp {
        let vp = Viewpoint {
            name: format!("vp{i}"),
            structure_type: *STRUCTURE_TYPES.choose(rng).unwrap(),
            concerns: (0..rng.gen_range(0..3)).map(|c| format!("concern {c}")).collect(),
            description_kind: *KINDS.choose(rng).unwrap(),
        };
        m.add_viewpoint(vp).unwrap();
    }
    let n_el = rng.gen_range(0..12);
    for i in 0..n_el {
        m.add_element(ViewElement {
            id: format!("e{i}"),
            label: format!("element {i}"),
            has_extent: rng.gen_bool(0.8),
        })
        .unwrap();
    }
    let ids: Vec<String> = (0..n_el).map(|i| format!("e{i}")).collect();
    if n_vp > 0 {
        for i in 0..rng.gen_range(0..4) {
            let elements = ids.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
            m.add_view(View { name: format!("view{i}"), viewpoint: format!("vp{}", rng.gen_range(0..n_vp)), elements })
                .unwrap();
        }
    }
    let n_nodes = rng.gen_range(0..3);
    for i in 0..n_nodes {
        let id = format!("n{i}");
        m.add_realization_node(RealizationNode::new(&id)).unwrap();
        for aspect in Aspect::ALL {
            if rng.gen_bool(0.5) {
                m.bind_designator(&id, random_chain(rng, aspect, SEGMENTS, 3)).unwrap();
            }
        }
    }
    if n_el > 1 {
        for _ in 0..rng.gen_range(0..n_el) {
            let (a, b) = (ids.choose(rng).unwrap(), ids.choose(rng).unwrap());
            let _ = m.assert_coextension(a, b);
        }
    }
    if n_el > 0 && n_nodes > 0 {
        for _ in 0..rng.gen_range(0..3) {
            let _ = m.bind_element(ids.choose(rng).unwrap(), &format!("n{}", rng.gen_range(0..n_nodes)));
        }
    }
    m
}

/// A valid project exercising every persisted field.
pub fn random_project(rng: &mut ChaCha8Rng) -> Project {
    let mut p = if rng.gen_bool(0.8) {
        Project::new(format!("project-{}", rng.gen_range(0..1000)))
    } else {
        Project::with_kernel("inline", builtin_se_kernel()).unwrap()
    };
    let kernel = p.assessment.kernel_arc().clone();
    p.assessment.strict_evidence = rng.gen_bool(0.2);
    let mut instances = Vec::new();
    for i in 0..rng.gen_range(0..4) {
        let alpha = kernel.alphas.choose(rng).unwrap();
        let level = if rng.gen_bool(0.5) { SystemLevel::SystemOfInterest } else { SystemLevel::UsingSystem };
        p.assessment
            .add_instance(AlphaInstance { id: format!("i{i}"), alpha: alpha.name.clone(), system_level: level })
            .unwrap();
        instances.push((format!("i{i}"), alpha));
    }
    let mut wps = Vec::new();
    for i in 0..rng.gen_range(0..3) {
        let designation = rng.gen_bool(0.5).then(|| {
            let text = format!("={}&{}CA", random_segment(rng, SEGMENTS), ["A", "M"].choose(rng).unwrap());
            parse_document_designation(&text, &DccTable::builtin()).unwrap()
        });
        p.assessment
            .add_work_product(WorkProductInstance {
                id: format!("w{i}"),
                definition: kernel.workproducts.choose(rng).unwrap().name.clone(),
                label: format!("work product \"{i}\""),
                document_designation: designation,
            })
            .unwrap();
        wps.push(format!("w{i}"));
    }
    for (id, alpha) in &instances {
        let n = rng.gen_range(0..8);
        for mut rec in random_records(rng, id, alpha, &wps, n) {
            rec.recorded_at = rng.gen_range(-5..2_000_000_000);
            p.assessment.record_checkpoint(rec).unwrap();
        }
    }
    for aspect in Aspect::ALL {
        if rng.gen_bool(0.6) {
            let (tree, _) = random_tree(rng, aspect, 12, SEGMENTS);
            p.set_tree(tree);
        }
    }
    p.description = random_description(rng);
    p
}

/// Maps each class to its member set; handy for comparisons.
pub fn class_map(m: &DescriptionModel) -> BTreeMap<String, BTreeSet<String>> {
    m.elements().filter(|e| e.has_extent).map(|e| (e.id.clone(), m.coextension_class(&e.id).unwrap())).collect()
}
