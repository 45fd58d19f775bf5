//! Proof-task construction and the external theorem-prover driver.
//!
//! A verification run consists of two chains, one per direction of the
//! equivalence. Within a chain, helper lemmas are proved in file order and
//! every proved lemma joins the axiom set of the later tasks; the goal task
//! comes last. The driver writes each task as a TFF problem file, runs the
//! configured prover on it, and reads the SZS status line from its output.

pub mod theory;
pub mod tptp;

use std::fmt;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::guide::{HelperFile, HelperStatement, UserGuide};
use crate::reduction::GoalCondition;
use crate::syntax::fol::{Formula, SignatureSlice};
use crate::syntax::Predicate;

pub use theory::theory_axioms;
pub use tptp::emit_tptp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    SpecificationFromProgram,
    ProgramFromSpecification,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::SpecificationFromProgram => {
                write!(f, "verification of specification from translated program")
            }
            Direction::ProgramFromSpecification => {
                write!(f, "verification of translated program from specification")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Lemma,
    Goal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTask {
    pub name: String,
    pub direction: Direction,
    pub kind: StepKind,
    pub axioms: Vec<Formula>,
    pub conjecture: Formula,
}

/// A sequential chain of steps sharing an axiom base; conjectures of
/// earlier proved steps become axioms of later ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskChain {
    pub direction: Direction,
    pub axioms: Vec<Formula>,
    pub steps: Vec<(String, StepKind, Formula)>,
}

impl TaskChain {
    /// The tasks of the chain under the assumption that every earlier step
    /// succeeds (the shape used for emission).
    pub fn tasks(&self) -> Vec<ProofTask> {
        let mut axioms = self.axioms.clone();
        let mut out = Vec::new();
        for (name, kind, conjecture) in &self.steps {
            out.push(ProofTask {
                name: name.clone(),
                direction: self.direction,
                kind: *kind,
                axioms: axioms.clone(),
                conjecture: conjecture.clone(),
            });
            axioms.push(conjecture.clone());
        }
        out
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TaskError {
    #[error("helper statement mentions `{0}`, which occurs nowhere in the proof tasks")]
    UnknownPredicate(Predicate),
}

/// Builds the two verification chains for a goal condition: the theory
/// axioms, helper axioms, shared assumptions and private definitions, the
/// opposite side as an axiom, the helper lemmas in order, and the goal.
pub fn verification_chains(
    goal: &GoalCondition,
    guide: &UserGuide,
    helper: &HelperFile,
) -> Result<Vec<TaskChain>, TaskError> {
    let mut signature =
        SignatureSlice::from_formulas(goal.axioms.iter().chain(&goal.lhs).chain(&goal.rhs));
    signature.predicates.extend(guide.public_predicates());

    for statement in &helper.statements {
        let formula = match statement {
            HelperStatement::Lemma(f) | HelperStatement::Axiom(f) => f,
        };
        for predicate in formula.predicates() {
            if !signature.predicates.contains(&predicate) {
                return Err(TaskError::UnknownPredicate(predicate));
            }
        }
    }

    let mut base = theory_axioms(&guide.placeholders, &signature);
    for axiom in helper.axioms() {
        base.push(axiom.clone());
    }
    base.extend(goal.axioms.iter().cloned());

    let lemmas = helper.lemmas();
    let chains = [
        (Direction::SpecificationFromProgram, &goal.rhs, &goal.lhs),
        (Direction::ProgramFromSpecification, &goal.lhs, &goal.rhs),
    ]
    .into_iter()
    .map(|(direction, given, to_prove)| {
        let prefix = match direction {
            Direction::SpecificationFromProgram => "forward",
            Direction::ProgramFromSpecification => "backward",
        };
        let mut axioms = base.clone();
        axioms.extend(given.iter().cloned());
        let mut steps: Vec<(String, StepKind, Formula)> = lemmas
            .iter()
            .enumerate()
            .map(|(i, lemma)| {
                (
                    format!("{prefix}_lemma_{:02}", i + 1),
                    StepKind::Lemma,
                    (*lemma).clone(),
                )
            })
            .collect();
        steps.push((
            format!("{prefix}_goal"),
            StepKind::Goal,
            Formula::conjoin(to_prove.iter().cloned()),
        ));
        TaskChain {
            direction,
            axioms,
            steps,
        }
    })
    .collect();
    Ok(chains)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    Proved,
    NotProved,
    Timeout,
    ProverError(String),
}

impl fmt::Display for TaskStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskStatus::Proved => write!(f, "proved"),
            TaskStatus::NotProved => write!(f, "not proved"),
            TaskStatus::Timeout => write!(f, "timeout"),
            TaskStatus::ProverError(message) => write!(f, "prover error: {message}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskOutcome {
    pub name: String,
    pub direction: Direction,
    pub status: TaskStatus,
    pub seconds: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Unknown,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent => write!(f, "equivalent"),
            Verdict::Unknown => write!(f, "unknown"),
            Verdict::Error => write!(f, "error"),
        }
    }
}

/// Every task proved means the programs are equivalent; any failure to
/// prove is inconclusive, never a disproof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofOutcome {
    pub tasks: Vec<TaskOutcome>,
    pub overall: Verdict,
}

fn aggregate(tasks: Vec<TaskOutcome>) -> ProofOutcome {
    let overall = if tasks
        .iter()
        .any(|t| matches!(t.status, TaskStatus::ProverError(_)))
    {
        Verdict::Error
    } else if tasks.iter().all(|t| t.status == TaskStatus::Proved) {
        Verdict::Equivalent
    } else {
        Verdict::Unknown
    };
    ProofOutcome { tasks, overall }
}

#[derive(Clone, Debug)]
pub struct ProverConfig {
    pub executable: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
    pub parallel: bool,
}

impl ProverConfig {
    pub fn new(executable: impl Into<PathBuf>) -> Self {
        ProverConfig {
            executable: executable.into(),
            args: Vec::new(),
            timeout: Duration::from_secs(600),
            parallel: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("cannot run prover `{0}`: {1}")]
    Spawn(PathBuf, std::io::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs the chains against the external prover. Chains may run in parallel;
/// within a chain, only proved steps contribute their conjectures to later
/// axiom sets.
pub fn run_chains(
    chains: &[TaskChain],
    config: &ProverConfig,
) -> Result<ProofOutcome, DriverError> {
    let results: Vec<Result<Vec<TaskOutcome>, DriverError>> = if config.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chains
                .iter()
                .map(|chain| scope.spawn(move || run_chain(chain, config)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("prover thread panicked"))
                .collect()
        })
    } else {
        chains
            .iter()
            .map(|chain| run_chain(chain, config))
            .collect()
    };
    let mut tasks = Vec::new();
    for result in results {
        tasks.extend(result?);
    }
    Ok(aggregate(tasks))
}

fn run_chain(chain: &TaskChain, config: &ProverConfig) -> Result<Vec<TaskOutcome>, DriverError> {
    let scratch = tempfile::tempdir()?;
    let mut axioms = chain.axioms.clone();
    let mut outcomes = Vec::new();
    for (name, kind, conjecture) in &chain.steps {
        let task = ProofTask {
            name: name.clone(),
            direction: chain.direction,
            kind: *kind,
            axioms: axioms.clone(),
            conjecture: conjecture.clone(),
        };
        let path = scratch.path().join(format!("{name}.p"));
        std::fs::write(&path, emit_tptp(&task))?;
        let started = Instant::now();
        let status = run_prover(&path, config)?;
        if status == TaskStatus::Proved {
            axioms.push(conjecture.clone());
        }
        outcomes.push(TaskOutcome {
            name: name.clone(),
            direction: chain.direction,
            status,
            seconds: started.elapsed().as_secs(),
        });
    }
    Ok(outcomes)
}

fn run_prover(problem: &Path, config: &ProverConfig) -> Result<TaskStatus, DriverError> {
    let mut command = std::process::Command::new(&config.executable);
    command
        .args(&config.args)
        .arg(problem)
        .stdin(std::process::Stdio::null())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped());
    let mut child = command
        .spawn()
        .map_err(|e| DriverError::Spawn(config.executable.clone(), e))?;

    // Drain the pipes on separate threads so the child never blocks on a
    // full pipe buffer.
    let mut stdout_pipe = child.stdout.take().expect("stdout is piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr is piped");
    let stdout_reader = std::thread::spawn(move || {
        let mut buffer = String::new();
        let _ = stdout_pipe.read_to_string(&mut buffer);
        buffer
    });
    let stderr_reader = std::thread::spawn(move || {
        let mut buffer = String::new();
        let _ = stderr_pipe.read_to_string(&mut buffer);
        buffer
    });

    let started = Instant::now();
    let mut killed = false;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if started.elapsed() > config.timeout {
            let _ = child.kill();
            let _ = child.wait();
            killed = true;
            break;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    let stdout = stdout_reader.join().unwrap_or_default();
    let stderr = stderr_reader.join().unwrap_or_default();

    match parse_szs_status(&stdout).or_else(|| parse_szs_status(&stderr)) {
        Some(status) => Ok(classify_szs(&status)),
        None if killed => Ok(TaskStatus::Timeout),
        None => Ok(TaskStatus::ProverError(format!(
            "no SZS status line in prover output ({})",
            head_of(&stdout)
        ))),
    }
}

fn head_of(text: &str) -> String {
    let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let mut out: String = line.chars().take(120).collect();
    if out.is_empty() {
        out.push_str("empty output");
    }
    out
}

/// Extracts the status word from a line like `% SZS status Theorem for x`.
pub fn parse_szs_status(output: &str) -> Option<String> {
    for line in output.lines() {
        if let Some(index) = line.find("SZS status") {
            let rest = &line[index + "SZS status".len()..];
            if let Some(word) = rest.split_whitespace().next() {
                return Some(word.to_string());
            }
        }
    }
    None
}

/// `Theorem` and `ContradictoryAxioms` count as proved; explicit resource
/// statuses as timeouts; everything else is an unproved, inconclusive task.
pub fn classify_szs(status: &str) -> TaskStatus {
    match status {
        "Theorem" | "ContradictoryAxioms" => TaskStatus::Proved,
        "Timeout" | "ResourceOut" => TaskStatus::Timeout,
        _ => TaskStatus::NotProved,
    }
}

/// Writes one `.p` file per task (assuming earlier lemmas proved) and
/// returns the paths.
pub fn emit_task_files(chains: &[TaskChain], directory: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(directory)?;
    let mut paths = Vec::new();
    for chain in chains {
        for task in chain.tasks() {
            let path = directory.join(format!("{}.p", task.name));
            std::fs::write(&path, emit_tptp(&task))?;
            paths.push(path);
        }
    }
    Ok(paths)
}
