//! The `essence` command line. Exit status: 0 success, 1 check failed,
//! 2 usage, parse, or schema error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::assessment::{AlphaInstance, CheckpointRecord, SystemLevel};
use crate::description::DescriptionError;
use crate::designation::{
    check_at_least_one_unambiguous, parse_designation, parse_document_designation, DccTable, MultiAspectDesignation,
};
use crate::kernel_data::{builtin_se_kernel, placeholder_notes};
use crate::metamodel::{validate_kernel, AlphaDefinition, KernelDefinition};
use crate::project::{load_project, save_project, Project};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "essence",
    version,
    about = "Systems engineering Essence kernel, designations, and architecture checks"
)]
struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect and check kernel definitions.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Create project files.
    #[command(subcommand)]
    Project(ProjectCmd),
    /// Record checkpoints and compute alpha states.
    #[command(subcommand)]
    Assess(AssessCmd),
    /// Print a state card for every alpha instance.
    Cards { project: PathBuf },
    /// Parse designations and check them against breakdown trees.
    #[command(subcommand)]
    Desig(DesigCmd),
    /// Parse document designations.
    #[command(subcommand)]
    Doc(DocCmd),
    /// Architecture description checks.
    #[command(subcommand)]
    Arch(ArchCmd),
    /// Endeavor description lints.
    #[command(subcommand)]
    Lint(LintCmd),
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    /// Validate a kernel document.
    Validate { file: PathBuf },
    /// Show a kernel (the built-in one when no file is given).
    Show {
        file: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Print the built-in kernel as a kernel document.
    Export,
}

#[derive(Subcommand, Debug)]
enum ProjectCmd {
    /// Write a new empty project; refuses to overwrite.
    Init {
        file: PathBuf,
        #[arg(long)]
        id: String,
        /// Inline this kernel document instead of referencing the built-in kernel.
        #[arg(long)]
        kernel: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InstanceArg {
    project: PathBuf,
    #[arg(long = "alpha-instance")]
    alpha_instance: String,
}

#[derive(Subcommand, Debug)]
enum AssessCmd {
    /// Add an alpha instance to a project.
    AddInstance {
        project: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Level::SystemOfInterest)]
        level: Level,
    },
    /// Record a checkpoint; the file is rewritten only when the record is valid.
    Record {
        #[command(flatten)]
        target: InstanceArg,
        #[arg(long)]
        state: String,
        #[arg(long)]
        checkpoint: String,
        #[arg(long, action = clap::ArgAction::Set)]
        satisfied: bool,
        #[arg(long, num_args = 1..)]
        evidence: Vec<String>,
        /// Timestamp stored with the record.
        #[arg(long, default_value_t = 0)]
        at: i64,
    },
    /// Show the achieved state of an alpha instance.
    State {
        #[command(flatten)]
        target: InstanceArg,
    },
    /// List checkpoints standing between an instance and a target state.
    Blocking {
        #[command(flatten)]
        target: InstanceArg,
        #[arg(long = "target")]
        target_state: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Level {
    SystemOfInterest,
    UsingSystem,
}

#[derive(Subcommand, Debug)]
enum DesigCmd {
    /// Parse and canonicalize a designation.
    Parse {
        #[arg(allow_hyphen_values = true)]
        text: String,
    },
    /// Check that at least one chain designates exactly one node.
    Check {
        project: PathBuf,
        #[arg(allow_hyphen_values = true)]
        text: String,
    },
}

#[derive(Subcommand, Debug)]
enum DocCmd {
    /// Parse a document designation such as `=F1&MCA`.
    Parse {
        #[arg(allow_hyphen_values = true)]
        text: String,
        /// Classification table replacing the built-in one.
        #[arg(long = "dcc-table")]
        dcc_table: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ArchCmd {
    /// Check that the given views cover all three structure types.
    Check {
        project: PathBuf,
        #[arg(long, value_delimiter = ',')]
        views: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum LintCmd {
    /// Warn about missing practice, process, or team viewpoints.
    Endeavor { project: PathBuf },
}

/// A fatal diagnostic: an error code and a message for standard error.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    message: String,
}

impl Failure {
    fn new(code: &'static str, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

struct Report {
    status: u8,
    plain: String,
    structured: Value,
}

impl Report {
    fn ok(plain: String, structured: Value) -> Self {
        Self { status: EXIT_OK, plain, structured }
    }

    fn check(passed: bool, plain: String, structured: Value) -> Self {
        Self { status: if passed { EXIT_OK } else { EXIT_CHECK_FAILED }, plain, structured }
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let text = e.render().to_string();
            let _ = if to_stdout { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if to_stdout { EXIT_OK } else { EXIT_ERROR };
        }
    };
    let mut notes = Vec::new();
    match dispatch(cli.command, &mut notes) {
        Ok(report) => {
            for n in &notes {
                let _ = writeln!(err, "note: {n}");
            }
            let _ = match cli.format {
                Format::Plain => out.write_all(report.plain.as_bytes()),
                Format::Structured => writeln!(out, "{}", serde_json::to_string_pretty(&report.structured).unwrap()),
            };
            report.status
        }
        Err(f) => {
            let _ = match cli.format {
                Format::Plain => writeln!(err, "error: {}", f.message),
                Format::Structured => writeln!(err, "{}", json!({"error": f.code, "message": f.message})),
            };
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new("IO_ERROR", format!("IO_ERROR: {}: {e}", path.display())))
}

fn open_project(path: &Path) -> Result<Project, Failure> {
    load_project(&read(path)?).map_err(|e| Failure::new(e.code(), format!("{}: {e}", path.display())))
}

/// Replaces the file through a sibling temporary so readers never see a
/// partial document.
fn write_project(path: &Path, p: &Project) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let io = |e: std::io::Error| Failure::new("IO_ERROR", format!("IO_ERROR: {}: {e}", path.display()));
    fs::write(&tmp, save_project(p)).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn read_kernel(path: &Path) -> Result<KernelDefinition, Failure> {
    let text = String::from_utf8(read(path)?).map_err(|e| Failure::new("PARSE_ERROR", format!("PARSE_ERROR: {e}")))?;
    KernelDefinition::from_json(&text).map_err(|e| Failure::new(e.code(), e))
}

fn dispatch(cmd: Command, notes: &mut Vec<String>) -> Result<Report, Failure> {
    match cmd {
        Command::Kernel(k) => kernel(k, notes),
        Command::Project(ProjectCmd::Init { file, id, kernel }) => {
            let project = match kernel {
                None => Project::new(id),
                Some(k) => Project::with_kernel(id, read_kernel(&k)?).map_err(|e| Failure::new(e.code(), e))?,
            };
            fs::OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(&file)
                .and_then(|mut f| f.write_all(&save_project(&project)))
                .map_err(|e| Failure::new("IO_ERROR", format!("IO_ERROR: {}: {e}", file.display())))?;
            Ok(Report::ok(format!("created {}\n", file.display()), json!({"created": file.display().to_string()})))
        }
        Command::Assess(a) => assess(a),
        Command::Cards { project } => {
            let p = open_project(&project)?;
            let mut plain = Vec::new();
            let mut cards = Vec::new();
            for inst in p.assessment.instances() {
                let card = p.assessment.render_card(&inst.id).map_err(|e| Failure::new(e.code(), e))?;
                let state = p.assessment.alpha_state(&inst.id).map_err(|e| Failure::new(e.code(), e))?;
                cards.push(json!({"alpha-instance": inst.id, "alpha": inst.alpha, "state": state, "card": card}));
                plain.push(card);
            }
            Ok(Report::ok(plain.join("\n"), Value::Array(cards)))
        }
        Command::Desig(DesigCmd::Parse { text }) => {
            let d = parse_designation(&text).map_err(|e| Failure::new(e.code.as_str(), e))?;
            Ok(Report::ok(designation_plain(&d), designation_json(&d)))
        }
        Command::Desig(DesigCmd::Check { project, text }) => {
            let p = open_project(&project)?;
            let d = parse_designation(&text).map_err(|e| Failure::new(e.code.as_str(), e))?;
            let report = check_at_least_one_unambiguous(p.trees(), &d).map_err(|e| Failure::new(e.code(), e))?;
            let mut plain = format!("{d}\n");
            for c in &report.chains {
                let noun = if c.matches == 1 { "match" } else { "matches" };
                plain += &format!("{} {}: {} {noun}\n", c.aspect.name(), c.chain, c.matches);
            }
            plain += if report.passed { "result: unambiguous\n" } else { "result: ambiguous\n" };
            Ok(Report::check(report.passed, plain, json!({"designation": d.to_string(), "report": report})))
        }
        Command::Doc(DocCmd::Parse { text, dcc_table }) => {
            let table = match dcc_table {
                None => DccTable::builtin(),
                Some(path) => {
                    let text = String::from_utf8(read(&path)?)
                        .map_err(|e| Failure::new("PARSE_ERROR", format!("PARSE_ERROR: {e}")))?;
                    DccTable::from_json(&text).map_err(|e| Failure::new(e.code(), e))?
                }
            };
            let doc = parse_document_designation(&text, &table).map_err(|e| Failure::new(e.code(), e))?;
            let area = table.area_name(doc.dcc.area()).unwrap_or_default();
            let class = table.class_name(doc.dcc.class_code());
            let plain = format!(
                "{doc}\ndesignation: {}\ntechnical area: {} ({area})\nclass: {} ({})\ntable: {}\n",
                doc.system,
                doc.dcc.area(),
                doc.dcc.class_code(),
                class.unwrap_or("not in table"),
                table.name,
            );
            let structured = json!({
                "document": doc.to_string(),
                "designation": designation_json(&doc.system),
                "dcc": doc.dcc.as_str(),
                "technical-area": {"code": doc.dcc.area().to_string(), "name": area},
                "class": {"code": doc.dcc.class_code(), "name": class},
                "table": table.name,
            });
            Ok(Report::ok(plain, structured))
        }
        Command::Arch(ArchCmd::Check { project, views }) => {
            let p = open_project(&project)?;
            let report = p.description.viable_architecture(&views).map_err(description_failure)?;
            let list = |v: &[crate::description::StructureType]| {
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            };
            let mut plain =
                format!("viable: {}\ncovered: {}\n", if report.viable { "yes" } else { "no" }, list(&report.covered));
            if !report.viable {
                plain += &format!("missing: {}\n", list(&report.missing));
            }
            Ok(Report::check(report.viable, plain, json!(report)))
        }
        Command::Lint(LintCmd::Endeavor { project }) => {
            let p = open_project(&project)?;
            let warnings = p.description.endeavor_viewpoint_lint();
            let plain = if warnings.is_empty() {
                "ok: no warnings\n".to_owned()
            } else {
                warnings.iter().map(|w| format!("warning: {}\n", w.message)).collect()
            };
            Ok(Report::check(warnings.is_empty(), plain, json!({"warnings": warnings})))
        }
    }
}

fn description_failure(e: DescriptionError) -> Failure {
    Failure::new(e.code(), e)
}

fn designation_plain(d: &MultiAspectDesignation) -> String {
    let mut s = format!("{d}\n");
    for c in d.canonical_chains() {
        s += &format!("{}: {}\n", c.aspect().name(), c.segments().join(" "));
    }
    s
}

fn designation_json(d: &MultiAspectDesignation) -> Value {
    let chains: Vec<Value> = d
        .canonical_chains()
        .map(|c| json!({"aspect": c.aspect(), "chain": c.to_string(), "segments": c.segments()}))
        .collect();
    json!({"canonical": d.to_string(), "chains": chains})
}

fn kernel(cmd: KernelCmd, notes: &mut Vec<String>) -> Result<Report, Failure> {
    match cmd {
        KernelCmd::Validate { file } => {
            let def = read_kernel(&file)?;
            let report = validate_kernel(&def);
            notes.extend(placeholder_notes(&def));
            let plain = if report.is_clean() {
                format!("ok: kernel {:?} is valid ({} alphas)\n", def.name, def.alphas.len())
            } else {
                report.findings.iter().map(|f| format!("{f}\n")).collect()
            };
            Ok(Report::check(report.is_clean(), plain, json!(report)))
        }
        KernelCmd::Show { file, alpha } => {
            let def = match file {
                Some(f) => read_kernel(&f)?,
                None => builtin_se_kernel(),
            };
            match alpha {
                Some(name) => {
                    let a = def.find_alpha(&name).ok_or_else(|| {
                        Failure::new("UNKNOWN_ALPHA", format!("UNKNOWN_ALPHA: no alpha named {name:?}"))
                    })?;
                    Ok(Report::ok(alpha_plain(&def, a), json!(a)))
                }
                None => Ok(Report::ok(kernel_plain(&def), json!(def))),
            }
        }
        KernelCmd::Export => {
            let def = builtin_se_kernel();
            Ok(Report::ok(def.to_json(), json!(def)))
        }
    }
}

fn kernel_plain(def: &KernelDefinition) -> String {
    fn walk(def: &KernelDefinition, a: &AlphaDefinition, depth: usize, out: &mut String) {
        let states: Vec<&str> = a.states.iter().map(|s| s.name.as_str()).collect();
        out.push_str(&format!("{:indent$}{}: {}\n", "", a.name, states.join(" > "), indent = 2 * depth));
        for sub in &a.subalphas {
            if let Some(s) = def.find_alpha(sub) {
                walk(def, s, depth + 1, out);
            }
        }
    }
    let mut out = format!("{}\n", def.name);
    for area in &def.areas {
        out.push_str(&format!("\n[{area}]\n"));
        for a in def.top_level_alphas().filter(|a| &a.area == area) {
            walk(def, a, 1, &mut out);
        }
    }
    out
}

fn alpha_plain(def: &KernelDefinition, a: &AlphaDefinition) -> String {
    let mut out = format!("{} ({})\n", a.name, a.area);
    if !a.description.is_empty() {
        out.push_str(&format!("{}\n", a.description));
    }
    if let Some(parent) = def.parent_of(&a.name) {
        out.push_str(&format!("sub-alpha of: {parent}\n"));
    }
    if !a.subalphas.is_empty() {
        out.push_str(&format!("sub-alphas: {}\n", a.subalphas.join(", ")));
    }
    for (i, s) in a.states.iter().enumerate() {
        out.push_str(&format!("{}. {}\n", i + 1, s.name));
        for c in &s.checkpoints {
            out.push_str(&format!("   {} {}\n", c.id, c.text));
        }
    }
    out
}

fn assess(cmd: AssessCmd) -> Result<Report, Failure> {
    let fail = |e: crate::assessment::AssessmentError| Failure::new(e.code(), e);
    match cmd {
        AssessCmd::AddInstance { project, id, alpha, level } => {
            let mut p = open_project(&project)?;
            let system_level = match level {
                Level::SystemOfInterest => SystemLevel::SystemOfInterest,
                Level::UsingSystem => SystemLevel::UsingSystem,
            };
            p.assessment.add_instance(AlphaInstance { id: id.clone(), alpha, system_level }).map_err(fail)?;
            write_project(&project, &p)?;
            Ok(Report::ok(format!("added {id}\n"), json!({"added": id})))
        }
        AssessCmd::Record { target, state, checkpoint, satisfied, evidence, at } => {
            let mut p = open_project(&target.project)?;
            let mut rec =
                CheckpointRecord::new(&target.alpha_instance, &state, &checkpoint, satisfied).with_evidence(evidence);
            rec.recorded_at = at;
            p.assessment.record_checkpoint(rec).map_err(fail)?;
            write_project(&target.project, &p)?;
            let result = p.assessment.alpha_state(&target.alpha_instance).map_err(fail)?;
            Ok(Report::ok(state_plain(&result), json!(result)))
        }
        AssessCmd::State { target } => {
            let p = open_project(&target.project)?;
            let result = p.assessment.alpha_state(&target.alpha_instance).map_err(fail)?;
            Ok(Report::ok(state_plain(&result), json!(result)))
        }
        AssessCmd::Blocking { target, target_state: state } => {
            let p = open_project(&target.project)?;
            let blocking = p.assessment.blocking_checkpoints(&target.alpha_instance, &state).map_err(fail)?;
            let plain = if blocking.is_empty() {
                format!("reached: {state}\n")
            } else {
                blocking.iter().map(|b| format!("{} {}: {}\n", b.state, b.checkpoint, b.text)).collect()
            };
            Ok(Report::check(blocking.is_empty(), plain, json!({"target": state, "blocking": blocking})))
        }
    }
}

fn state_plain(r: &crate::assessment::StateResult) -> String {
    let mut s = format!(
        "achieved: {}\nnext: {}\n",
        r.achieved.as_deref().unwrap_or("none"),
        r.next_state.as_deref().unwrap_or("none")
    );
    for b in &r.blocking {
        s += &format!("  blocking {}: {}\n", b.checkpoint, b.text);
    }
    s
}
