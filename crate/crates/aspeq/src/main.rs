use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use aspeq::analysis::{dependency_graph, gate, uses_private_recursion};
use aspeq::guide::{GuideInput, HelperFile, UserGuide};
use aspeq::oracle::{
    check_equivalence, display_behavior, external_behavior, EquivalenceOutcome, InputSpace,
    OracleConfig,
};
use aspeq::parse::asp::parse_program;
use aspeq::prover::{
    emit_task_files, run_chains, verification_chains, ProverConfig, TaskChain, Verdict,
};
use aspeq::reduction::{build_goal, build_specification};
use aspeq::report::{
    behavior_to_lists, AnalyzeReport, BehaviorReport, DiffReport, ProgramAnalysis, VerifyReport,
};
use aspeq::syntax::asp::{GroundAtom, PrecomputedTerm, Program, Term};

/// Verifies that two mini-gringo programs have the same external behavior
/// with respect to a user guide.
#[derive(Parser)]
#[command(name = "aspeq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the verification condition for a pair of programs and
    /// discharge it through an external theorem prover.
    Verify(VerifyArgs),
    /// Report dependency graphs, tightness, and private recursion.
    Analyze(AnalyzeArgs),
    /// Print the external behavior of a program on one input.
    Behavior(BehaviorArgs),
    /// Search bounded input spaces for a behavioral counterexample.
    Diff(DiffArgs),
    /// Write the generated specification and TPTP task files.
    Emit(EmitArgs),
}

#[derive(Args)]
struct VerifyArgs {
    program1: PathBuf,
    program2: PathBuf,
    guide: PathBuf,
    /// Helper files with lemma: and axiom: statements, in proof order.
    #[arg(long)]
    helper: Vec<PathBuf>,
    /// Path of the theorem prover executable.
    #[arg(long)]
    prover: Option<PathBuf>,
    /// Extra argument passed to the prover (repeatable).
    #[arg(long = "prover-arg")]
    prover_args: Vec<String>,
    /// Per-task timeout in seconds.
    #[arg(long, default_value_t = 600)]
    timeout: u64,
    /// Number of prover processes to run side by side (the two proof
    /// directions are independent).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Write problem files to this directory instead of running a prover.
    #[arg(long, value_name = "DIR")]
    emit_only: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    programs: Vec<PathBuf>,
    /// User guide; enables the private-recursion check.
    #[arg(long)]
    guide: Option<PathBuf>,
}

#[derive(Args)]
struct BehaviorArgs {
    program: PathBuf,
    guide: PathBuf,
    /// Placeholder value, e.g. `--value a=10` (repeatable).
    #[arg(long = "value")]
    values: Vec<String>,
    /// File of input facts, one ground fact per statement.
    #[arg(long)]
    facts: Option<PathBuf>,
    #[command(flatten)]
    bounds: OracleBounds,
}

#[derive(Args)]
struct DiffArgs {
    program1: PathBuf,
    program2: PathBuf,
    guide: PathBuf,
    #[command(flatten)]
    bounds: OracleBounds,
    /// Symbolic constants for input-atom arguments and placeholder values.
    #[arg(long, value_delimiter = ',')]
    constants: Vec<String>,
    /// Largest number of input facts per tested input.
    #[arg(long, default_value_t = 3)]
    max_facts: usize,
}

#[derive(Args)]
struct EmitArgs {
    program1: PathBuf,
    program2: PathBuf,
    guide: PathBuf,
    #[arg(long)]
    helper: Vec<PathBuf>,
    /// Output directory for the specification and task files.
    #[arg(long, default_value = "aspeq-out")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleBounds {
    /// Smallest numeral in the grounding window.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    min_int: i64,
    /// Largest numeral in the grounding window.
    #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
    max_int: i64,
}

impl OracleBounds {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            int_window: (self.min_int, self.max_int),
            ..OracleConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args, cli.format),
        Command::Analyze(args) => cmd_analyze(args, cli.format),
        Command::Behavior(args) => cmd_behavior(args, cli.format),
        Command::Diff(args) => cmd_diff(args, cli.format),
        Command::Emit(args) => cmd_emit(args),
    }
}

fn read_program(path: &Path) -> Result<Program> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read program file {}", path.display()))?;
    parse_program(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_guide(path: &Path) -> Result<UserGuide> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read user guide {}", path.display()))?;
    UserGuide::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn read_helpers(paths: &[PathBuf]) -> Result<HelperFile> {
    let mut combined = HelperFile::default();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read helper file {}", path.display()))?;
        let helper = HelperFile::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        combined.statements.extend(helper.statements);
    }
    Ok(combined)
}

fn build_verification(
    program1_path: &Path,
    program2_path: &Path,
    guide_path: &Path,
    helper_paths: &[PathBuf],
) -> Result<(String, Vec<TaskChain>)> {
    let program1 = read_program(program1_path)?;
    let program2 = read_program(program2_path)?;
    let guide = read_guide(guide_path)?;
    let helper = read_helpers(helper_paths)?;

    let diagnostics = gate(&program1, &program2, &guide);
    if !diagnostics.is_empty() {
        let rendered: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
        bail!("applicability check failed:\n  {}", rendered.join("\n  "));
    }

    let specification = build_specification(&program1, &guide)?;
    let goal = build_goal(&program1, &program2, &guide)?;
    let chains = verification_chains(&goal, &guide, &helper)?;
    Ok((specification.to_file_string(), chains))
}

fn cmd_verify(args: VerifyArgs, format: Format) -> Result<ExitCode> {
    let (specification, chains) =
        build_verification(&args.program1, &args.program2, &args.guide, &args.helper)?;

    if let Some(directory) = &args.emit_only {
        std::fs::create_dir_all(directory)?;
        std::fs::write(directory.join("specification.spec"), &specification)?;
        let paths = emit_task_files(&chains, directory)?;
        for path in paths {
            println!("wrote {}", path.display());
        }
        println!("wrote {}", directory.join("specification.spec").display());
        return Ok(ExitCode::SUCCESS);
    }

    let prover = args
        .prover
        .ok_or_else(|| anyhow!("no prover configured; pass --prover or use --emit-only"))?;
    let config = ProverConfig {
        executable: prover,
        args: args.prover_args,
        timeout: Duration::from_secs(args.timeout),
        parallel: args.parallel > 1,
    };
    let outcome = run_chains(&chains, &config)?;
    let report = VerifyReport::from_outcome(specification, &outcome);

    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            println!("generated specification:");
            for line in report.specification.as_deref().unwrap_or("").lines() {
                println!("  {line}");
            }
            println!("tasks:");
            for task in &report.tasks {
                println!(
                    "  {} ({}): {} in {} s",
                    task.name, task.direction, task.status, task.seconds
                );
            }
            println!("verdict: {}", report.verdict);
        }
    }
    Ok(match outcome.overall {
        Verdict::Equivalent => ExitCode::SUCCESS,
        Verdict::Unknown => ExitCode::from(1),
        Verdict::Error => ExitCode::from(2),
    })
}

fn cmd_analyze(args: AnalyzeArgs, format: Format) -> Result<ExitCode> {
    if args.programs.is_empty() {
        bail!("no program files given");
    }
    let guide = args.guide.as_deref().map(read_guide).transpose()?;
    let mut report = AnalyzeReport {
        programs: Vec::new(),
    };
    for path in &args.programs {
        let program = read_program(path)?;
        let graph = dependency_graph(&program);
        let mut analysis = ProgramAnalysis::new(&path.display().to_string(), &graph);
        if let Some(guide) = &guide {
            analysis.private_recursion = Some(uses_private_recursion(&program, guide));
        }
        report.programs.push(analysis);
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            for program in &report.programs {
                println!("{}:", program.path);
                println!("  vertices: {}", program.vertices.join(", "));
                println!(
                    "  edges ({}, {} non-positive):",
                    program.edge_count, program.non_positive_edge_count
                );
                for edge in &program.edges {
                    let kind = if edge.positive {
                        "positive"
                    } else {
                        "non-positive"
                    };
                    println!("    {} -> {} ({kind})", edge.from, edge.to);
                }
                println!("  tight: {}", program.tight);
                if let Some(private_recursion) = program.private_recursion {
                    println!("  private recursion: {private_recursion}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_value(text: &str) -> Result<PrecomputedTerm> {
    if let Ok(n) = text.parse::<i64>() {
        return Ok(PrecomputedTerm::Numeral(n));
    }
    match text {
        "inf" => Ok(PrecomputedTerm::Infimum),
        "sup" => Ok(PrecomputedTerm::Supremum),
        _ if text.chars().next().is_some_and(|c| c.is_ascii_lowercase()) => {
            Ok(PrecomputedTerm::symbol(text))
        }
        _ => bail!("`{text}` is not a precomputed term"),
    }
}

fn parse_facts(path: &Path) -> Result<BTreeSet<GroundAtom>> {
    let program = read_program(path)?;
    let mut atoms = BTreeSet::new();
    for rule in &program.rules {
        if !rule.body.is_empty() {
            bail!("{}: only facts are allowed in fact files", path.display());
        }
        let Some(atom) = rule.head.atom() else {
            bail!("{}: only facts are allowed in fact files", path.display());
        };
        let mut terms = Vec::new();
        for term in &atom.terms {
            match term {
                Term::Precomputed(c) => terms.push(c.clone()),
                _ => bail!(
                    "{}: fact arguments must be precomputed terms",
                    path.display()
                ),
            }
        }
        atoms.insert(GroundAtom::new(atom.predicate.clone(), terms));
    }
    Ok(atoms)
}

fn cmd_behavior(args: BehaviorArgs, format: Format) -> Result<ExitCode> {
    let program = read_program(&args.program)?;
    let guide = read_guide(&args.guide)?;
    let mut valuation = BTreeMap::new();
    for value in &args.values {
        let (name, term) = value
            .split_once('=')
            .ok_or_else(|| anyhow!("--value expects name=term, got `{value}`"))?;
        valuation.insert(name.trim().to_string(), parse_value(term.trim())?);
    }
    let atoms = match &args.facts {
        Some(path) => parse_facts(path)?,
        None => BTreeSet::new(),
    };
    let input = GuideInput::new(valuation, atoms);
    let behavior = external_behavior(&program, &guide, &input, &args.bounds.config())?;
    match format {
        Format::Json => {
            let report = BehaviorReport {
                behaviors: behavior_to_lists(&behavior),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Format::Text => println!("{}", display_behavior(&behavior)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(args: DiffArgs, format: Format) -> Result<ExitCode> {
    let program1 = read_program(&args.program1)?;
    let program2 = read_program(&args.program2)?;
    let guide = read_guide(&args.guide)?;
    let config = args.bounds.config();

    let mut pool: Vec<PrecomputedTerm> = args
        .constants
        .iter()
        .map(|c| parse_value(c))
        .collect::<Result<_>>()?;
    let mut placeholder_values: Vec<PrecomputedTerm> = (args.bounds.min_int..=args.bounds.max_int)
        .map(PrecomputedTerm::Numeral)
        .collect();
    placeholder_values.extend(pool.iter().cloned());
    if pool.is_empty() {
        // Input atoms need some argument pool; default to the window.
        pool = (args.bounds.min_int..=args.bounds.max_int)
            .map(PrecomputedTerm::Numeral)
            .collect();
    }
    let space = InputSpace {
        placeholder_values,
        constant_pool: pool,
        max_facts: args.max_facts,
    };
    let outcome = check_equivalence(&program1, &program2, &guide, space.inputs(&guide), &config)?;
    let report = DiffReport::from_outcome(&outcome);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Text => println!("{outcome}"),
    }
    Ok(match outcome {
        EquivalenceOutcome::NoCounterexample { .. } => ExitCode::SUCCESS,
        EquivalenceOutcome::Counterexample { .. } => ExitCode::from(1),
    })
}

fn cmd_emit(args: EmitArgs) -> Result<ExitCode> {
    let (specification, chains) =
        build_verification(&args.program1, &args.program2, &args.guide, &args.helper)?;
    std::fs::create_dir_all(&args.out)?;
    let spec_path = args.out.join("specification.spec");
    std::fs::write(&spec_path, &specification)?;
    let mut paths = emit_task_files(&chains, &args.out)?;
    paths.insert(0, spec_path);
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
