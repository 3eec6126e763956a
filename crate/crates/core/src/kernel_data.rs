//! The built-in systems engineering kernel.
//!
//! Seven top-level alphas, their sub-alphas, and the full state checklists
//! for System Realization and System Definition. In each solution state the
//! headline sentence is checkpoint 1, followed by the listed items.
//!
//! Customer and endeavor alphas, and every sub-alpha, carry a single
//! placeholder state until a checklist is supplied through a kernel file.

use std::sync::OnceLock;

use crate::metamodel::{
    AlphaDefinition, AreaOfConcern, Checkpoint, KernelDefinition, StateDefinition, WorkProductDefinition,
};

pub const KERNEL_NAME: &str = "Systems Engineering Essence";

pub const OPPORTUNITY: &str = "Opportunity";
pub const STAKEHOLDERS: &str = "Stakeholders";
pub const SYSTEM_DEFINITION: &str = "System Definition";
pub const SYSTEM_REALIZATION: &str = "System Realization";
pub const TEAM: &str = "Team";
pub const WORK: &str = "Work";
pub const WAY_OF_WORKING: &str = "Way of Working";

pub const PLACEHOLDER_STATE: &str = "Unspecified";

const REALIZATION_STATES: &[(&str, &str, &[&str])] = &[
    (
        "Raw materials",
        "Raw materials for system realization are available and allow manufacturing of the parts with required properties.",
        &[
            "Facilities for manufacturing parts from the raw materials are available.",
            "Parts production and logistic schedule has been agreed.",
            "Parts manufacturing facilities are ready to start.",
        ],
    ),
    (
        "Parts",
        "Parts have been produced and are ready for integration.",
        &[
            "Parts of the system have been produced and/or purchased and checked.",
            "Integration schedule has been agreed.",
            "Integration facilities are ready to start.",
        ],
    ),
    (
        "Demonstrable",
        "The system has been assembled from the parts and is ready for testing.",
        &[
            "Some functions of the system can be exercised and key characteristics can be measured.",
            "Key system characteristics have been demonstrated.",
            "Critical interfaces have been demonstrated.",
            "The integration with other existing systems has been demonstrated.",
            "The relevant stakeholders agree that system has been tested.",
        ],
    ),
    (
        "Ready",
        "The system (as a whole) has been accepted for deployment in a live environment.",
        &[
            "The functionality of the system has been tested.",
            "Level of defects is acceptable for the stakeholders.",
            "Setup and other user documentation is available.",
            "The stakeholder representatives accept the system as fit-for-purpose.",
            "Configuration of the system to be handed over to the stakeholders is known.",
            "The stakeholder representatives plan to make the system operational.",
            "The system is fully supported to the agreed service levels.",
        ],
    ),
    (
        "Operational",
        "The system is in use in a live environment.",
        &[
            "The system has been made available to the stakeholders that intended to use it.",
            "At least one example of the system is fully operational.",
            "The system is fully supported to the agreed service levels.",
        ],
    ),
    (
        "Retired",
        "The realized system is no longer supported and disposed and/or recycled.",
        &[
            "The system realization has been replaced or discontinued.",
            "The system is no longer supported.",
            "There are no \u{201c}official\u{201d} stakeholders who still use the system.",
            "Updates/ modifications to the system will no longer be produced.",
            "All material components of the system are re-used or have been properly disposed.",
        ],
    ),
];

const DEFINITION_STATES: &[(&str, &str, &[&str])] = &[
    (
        "Conceived",
        "It is clear how the system will be defined.",
        &[
            "It is clear what success is for the new system.",
            "Viewpoints are agreed upon.",
            "The approach to concord descriptions among the stakeholders has been agreed.",
            "The description of change management mechanisms have been agreed.",
        ],
    ),
    (
        "Consistent",
        "Consistent System definition has been created.",
        &[
            "Descriptions are documented and available for the team and stakeholders.",
            "The origin of the description is clear.",
            "Descriptions are examined.",
            "Contradictory descriptions have been identified and are dealt with.",
            "The team understands descriptions and agrees to implement them.",
            "The system implementing the descriptions is accepted by the stakeholders as worth realizing.",
        ],
    ),
    (
        "Used for Production",
        "System definition is used for system production.",
        &[
            "Enough of the descriptions are ready for starting system realization.",
            "Realization technologies have been defined.",
            "Those responsible for system realization part of the team acknowledges that available descriptions are sufficient to realize the system.",
            "Issues occurring during system realization lead to the re-work and actualization of the system definition.",
        ],
    ),
    (
        "Used for Verification",
        "System definition is used for testing.",
        &[
            "There are no missed parts of the system definition that make testing impossible.",
            "Tests, success criteria and test methods have been defined.",
            "Stakeholders agree with test scope.",
        ],
    ),
    (
        "Used for Operation",
        "System definition is used by stakeholders for operation.",
        &[
            "System definition is used for gathering information about state of the operational system realization.",
            "System definition is within the information about the state of the operational system and is used for making decisions about maintenance, repair, and modernization.",
        ],
    ),
    (
        "Used for Disposal",
        "System definition is used for system disposal.",
        &[
            "System definition is used for making decisions about system disposal or operation extension.",
            "System definition shows absence of undesirable consequences (e.g. environment pollution) through system disposal.",
            "System definition is used for planning and performing disposal or recycling of the system realization.",
        ],
    ),
];

/// `"Used for Production"` -> `"UFP"`, `"Raw materials"` -> `"RM"`.
pub fn state_initials(state: &str) -> String {
    state.split_whitespace().filter_map(|w| w.chars().next()).flat_map(char::to_uppercase).collect()
}

fn checklist_states(table: &[(&str, &str, &[&str])]) -> Vec<StateDefinition> {
    table
        .iter()
        .map(|&(name, summary, items)| {
            let prefix = state_initials(name);
            let checkpoints = std::iter::once(summary)
                .chain(items.iter().copied())
                .enumerate()
                .map(|(i, text)| Checkpoint::new(format!("{prefix}-{}", i + 1), text))
                .collect();
            StateDefinition { name: name.to_owned(), summary: summary.to_owned(), checkpoints }
        })
        .collect()
}

fn placeholder_states() -> Vec<StateDefinition> {
    vec![StateDefinition {
        name: PLACEHOLDER_STATE.to_owned(),
        summary: "No state checklist is defined for this alpha.".to_owned(),
        checkpoints: vec![Checkpoint::new(
            format!("{}-1", state_initials(PLACEHOLDER_STATE)),
            "The state checklist for this alpha has not been specified.",
        )],
    }]
}

fn alpha(
    name: &str,
    area: AreaOfConcern,
    description: &str,
    states: Vec<StateDefinition>,
    subalphas: &[&str],
) -> AlphaDefinition {
    AlphaDefinition {
        name: name.to_owned(),
        area: area.as_str().to_owned(),
        description: description.to_owned(),
        states,
        subalphas: subalphas.iter().map(|s| (*s).to_owned()).collect(),
    }
}

fn build() -> KernelDefinition {
    use AreaOfConcern::*;

    let alphas = vec![
        alpha(
            OPPORTUNITY,
            Customer,
            "The set of circumstances that makes it appropriate to develop or change a system.",
            placeholder_states(),
            &["Stakeholder/User Needs"],
        ),
        alpha(
            STAKEHOLDERS,
            Customer,
            "The people, groups, or organizations who affect or are affected by the system.",
            placeholder_states(),
            &[],
        ),
        alpha(
            SYSTEM_DEFINITION,
            Solution,
            "Information that defines the system: requirements and design. It has no spatio-temporal extent.",
            checklist_states(DEFINITION_STATES),
            &["Requirements", "Architecture", "Non-architectural Design"],
        ),
        alpha(
            SYSTEM_REALIZATION,
            Solution,
            "The system as realized in the physical world, with spatio-temporal extent.",
            checklist_states(REALIZATION_STATES),
            &["Components", "Modules", "Allocations"],
        ),
        alpha(TEAM, Endeavor, "The group of people actively engaged in the endeavor.", placeholder_states(), &[]),
        alpha(WORK, Endeavor, "Activity involving effort towards achieving a result.", placeholder_states(), &[]),
        alpha(
            WAY_OF_WORKING,
            Endeavor,
            "The tailored set of practices and tools used by the team.",
            placeholder_states(),
            &["Viewpoint"],
        ),
        alpha(
            "Stakeholder/User Needs",
            Customer,
            "Needs of the using system, the basis for validation.",
            placeholder_states(),
            &[],
        ),
        alpha(
            "Requirements",
            Solution,
            "Black-box definition of the system of interest, the basis for verification.",
            placeholder_states(),
            &[],
        ),
        alpha(
            "Architecture",
            Solution,
            "The most important design decisions about the system of interest.",
            placeholder_states(),
            &[],
        ),
        alpha(
            "Non-architectural Design",
            Solution,
            "The remaining design decisions whose change does not force a redesign.",
            placeholder_states(),
            &[],
        ),
        alpha("Components", Solution, "Functional elements of the realized system.", placeholder_states(), &[]),
        alpha("Modules", Solution, "Product elements of the realized system.", placeholder_states(), &[]),
        alpha("Allocations", Solution, "Locations the realized system occupies.", placeholder_states(), &[]),
        alpha(
            "Viewpoint",
            Endeavor,
            "A way of description: conventions and methods for producing views.",
            placeholder_states(),
            &[],
        ),
    ];

    let wp = |name: &str, evidences: &str, kind: &str| WorkProductDefinition {
        name: name.to_owned(),
        evidences: evidences.to_owned(),
        kind: kind.to_owned(),
    };

    KernelDefinition {
        name: KERNEL_NAME.to_owned(),
        areas: AreaOfConcern::ALL.iter().map(|a| a.as_str().to_owned()).collect(),
        alphas,
        workproducts: vec![
            wp("System Description", SYSTEM_DEFINITION, "description"),
            wp("Requirements Specification", "Requirements", "specification"),
            wp("Architecture Description", "Architecture", "description"),
            wp("Manufacturing Program", "Non-architectural Design", "program"),
            wp("Test Report", SYSTEM_REALIZATION, "report"),
            wp("Viewpoint Specification", "Viewpoint", "specification"),
        ],
    }
}

/// The built-in kernel. Every call returns an equal value.
pub fn builtin_se_kernel() -> KernelDefinition {
    builtin_se_kernel_ref().clone()
}

pub fn builtin_se_kernel_ref() -> &'static KernelDefinition {
    static KERNEL: OnceLock<KernelDefinition> = OnceLock::new();
    KERNEL.get_or_init(build)
}

/// Informational notes about alphas that only carry the placeholder state.
pub fn placeholder_notes(def: &KernelDefinition) -> Vec<String> {
    def.alphas
        .iter()
        .filter(|a| a.states.len() == 1 && a.states[0].name == PLACEHOLDER_STATE)
        .map(|a| format!("alpha {:?} has no state checklist (placeholder state {PLACEHOLDER_STATE:?})", a.name))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::validate_kernel;

    #[test]
    fn initials() {
        assert_eq!(state_initials("Raw materials"), "RM");
        assert_eq!(state_initials("Parts"), "P");
        assert_eq!(state_initials("Used for Verification"), "UFV");
    }

    #[test]
    fn builtin_is_clean() {
        let report = validate_kernel(&builtin_se_kernel());
        assert!(report.is_clean(), "{:?}", report.findings);
    }

    #[test]
    fn first_raw_materials_checkpoint_id() {
        let k = builtin_se_kernel();
        let sr = k.find_alpha(SYSTEM_REALIZATION).unwrap();
        assert_eq!(sr.states[0].checkpoints[0].id, "RM-1");
        assert_eq!(sr.states[0].checkpoints[3].text, "Parts manufacturing facilities are ready to start.");
    }

    #[test]
    fn ready_includes_continuation_rows() {
        let k = builtin_se_kernel();
        let ready = k.find_alpha(SYSTEM_REALIZATION).unwrap().state("Ready").unwrap();
        let texts: Vec<_> = ready.checkpoints.iter().map(|c| c.text.as_str()).collect();
        assert!(texts.contains(&"Configuration of the system to be handed over to the stakeholders is known."));
        assert!(texts.contains(&"The stakeholder representatives plan to make the system operational."));
        assert_eq!(ready.checkpoints.len(), 8);
    }

    #[test]
    fn placeholder_notes_cover_non_solution_alphas() {
        let notes = placeholder_notes(&builtin_se_kernel());
        assert_eq!(notes.len(), 13);
        assert!(notes.iter().all(|n| !n.contains("\"System Definition\"")));
    }

    #[test]
    fn export_is_stable() {
        assert_eq!(builtin_se_kernel().to_json(), builtin_se_kernel().to_json());
    }
}
