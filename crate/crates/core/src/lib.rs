//! Systems engineering Essence: a kernel of alphas with checklist-driven
//! states, multi-aspect reference designations, and architecture
//! description checks, persisted as single-file projects.

pub mod assessment;
pub mod cli;
pub mod description;
pub mod designation;
pub mod kernel_data;
pub mod metamodel;
pub mod project;

pub use assessment::{Assessment, CheckpointRecord, StateResult};
pub use description::DescriptionModel;
pub use designation::{format_designation, parse_designation, Aspect, AspectChain, MultiAspectDesignation};
pub use kernel_data::builtin_se_kernel;
pub use metamodel::{validate_kernel, KernelDefinition};
pub use project::{load_project, save_project, Project};
