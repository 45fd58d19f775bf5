//! Ground-and-solve oracle: external behavior and brute-force equivalence
//! checking with counterexample search.

pub mod ground;
pub mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::analysis::input_symbols_in_heads;
use crate::guide::{input_in_domain, EvalBounds, GuideInput, InputError, UserGuide};
use crate::interpretation::EvalError;
use crate::syntax::asp::{Atom, GroundAtom, PrecomputedTerm, Program, Rule, Term};
use crate::syntax::Predicate;

pub use ground::{eval_ground_term, ground, GroundError, GroundProgram};
pub use solve::{stable_models, SolveError, SolveGuard};

/// The set of output-atom projections of the stable models.
pub type ExternalBehavior = BTreeSet<BTreeSet<GroundAtom>>;

pub fn display_behavior(behavior: &ExternalBehavior) -> String {
    let mut out = String::from("{");
    for (i, model) in behavior.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('{');
        for (j, atom) in model.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&atom.to_string());
        }
        out.push('}');
    }
    out.push('}');
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Numerals included in the grounding universe and quantifier windows.
    pub int_window: (i64, i64),
    pub max_ground_rules: usize,
    pub guard: SolveGuard,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            int_window: (0, 20),
            max_ground_rules: 200_000,
            guard: SolveGuard::default(),
        }
    }
}

impl OracleConfig {
    pub fn eval_bounds(&self) -> EvalBounds {
        EvalBounds {
            int_range: self.int_window,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("input is outside the domain of the user guide")]
    OutsideDomain,
    #[error("input symbol {0} occurs in a rule head")]
    InputSymbolInHead(Predicate),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The grounding universe: constants of the instantiated program and input,
/// plus the configured numeral window.
pub fn grounding_universe(
    program: &Program,
    input: &GuideInput,
    config: &OracleConfig,
) -> BTreeSet<PrecomputedTerm> {
    let mut universe = program.constants();
    universe.extend(input.constants());
    let (lo, hi) = config.int_window;
    universe.extend((lo..=hi).map(PrecomputedTerm::Numeral));
    universe
}

/// `v(Π) ∪ ℐ`: the program with placeholders replaced plus the input facts.
pub fn instantiate_program(program: &Program, input: &GuideInput) -> Program {
    let mut instantiated = program.apply_valuation(&input.valuation);
    for atom in &input.atoms {
        instantiated.rules.push(Rule::fact(Atom {
            predicate: atom.predicate.clone(),
            terms: atom.terms.iter().cloned().map(Term::Precomputed).collect(),
        }));
    }
    instantiated
}

/// The stable models of `v(Π) ∪ ℐ`, each intersected with the output atoms.
pub fn external_behavior(
    program: &Program,
    guide: &UserGuide,
    input: &GuideInput,
    config: &OracleConfig,
) -> Result<ExternalBehavior, OracleError> {
    input.validate(guide)?;
    if let Some(p) = input_symbols_in_heads(program, guide).into_iter().next() {
        return Err(OracleError::InputSymbolInHead(p));
    }
    if !input_in_domain(guide, input, config.eval_bounds())? {
        return Err(OracleError::OutsideDomain);
    }
    let instantiated = instantiate_program(program, input);
    let universe = grounding_universe(&instantiated, input, config);
    let ground_program = ground(&instantiated, &universe, config.max_ground_rules)?;
    let models = stable_models(&ground_program, config.guard)?;
    Ok(models
        .into_iter()
        .map(|model| {
            model
                .into_iter()
                .filter(|atom| guide.outputs.contains(&atom.predicate_symbol()))
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceOutcome {
    NoCounterexample {
        tested: usize,
    },
    Counterexample {
        input: GuideInput,
        behavior1: ExternalBehavior,
        behavior2: ExternalBehavior,
    },
}

impl fmt::Display for EquivalenceOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceOutcome::NoCounterexample { tested } => {
                write!(f, "no counterexample among {tested} inputs")
            }
            EquivalenceOutcome::Counterexample {
                input,
                behavior1,
                behavior2,
            } => {
                write!(f, "counterexample: ")?;
                for (name, value) in &input.valuation {
                    write!(f, "{name} = {value}, ")?;
                }
                write!(f, "facts {{")?;
                for (i, atom) in input.atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{atom}")?;
                }
                write!(
                    f,
                    "}}: {} vs {}",
                    display_behavior(behavior1),
                    display_behavior(behavior2)
                )
            }
        }
    }
}

/// Compares the external behavior of the two programs on every generated
/// input that lies in the guide's domain, reporting the first difference.
pub fn check_equivalence(
    program1: &Program,
    program2: &Program,
    guide: &UserGuide,
    inputs: impl IntoIterator<Item = GuideInput>,
    config: &OracleConfig,
) -> Result<EquivalenceOutcome, OracleError> {
    let mut tested = 0;
    for input in inputs {
        input.validate(guide)?;
        if !input_in_domain(guide, &input, config.eval_bounds())? {
            continue;
        }
        let behavior1 = external_behavior(program1, guide, &input, config)?;
        let behavior2 = external_behavior(program2, guide, &input, config)?;
        tested += 1;
        if behavior1 != behavior2 {
            return Ok(EquivalenceOutcome::Counterexample {
                input,
                behavior1,
                behavior2,
            });
        }
    }
    Ok(EquivalenceOutcome::NoCounterexample { tested })
}

/// Cartesian input generator: placeholder values from a pool, input facts
/// as bounded-size subsets of the atoms over a constant pool.
#[derive(Clone, Debug, Default)]
pub struct InputSpace {
    pub placeholder_values: Vec<PrecomputedTerm>,
    pub constant_pool: Vec<PrecomputedTerm>,
    pub max_facts: usize,
}

impl InputSpace {
    pub fn inputs(&self, guide: &UserGuide) -> Vec<GuideInput> {
        let placeholders: Vec<&String> = guide.placeholders.iter().collect();
        let mut valuations: Vec<BTreeMap<String, PrecomputedTerm>> = vec![BTreeMap::new()];
        for placeholder in placeholders {
            let mut extended = Vec::new();
            for valuation in &valuations {
                for value in &self.placeholder_values {
                    if let PrecomputedTerm::Symbol(s) = value {
                        if guide.placeholders.contains(s) {
                            continue;
                        }
                    }
                    let mut next = valuation.clone();
                    next.insert(placeholder.clone(), value.clone());
                    extended.push(next);
                }
            }
            valuations = extended;
        }

        let atom_pool = self.atom_pool(guide);
        let fact_sets = bounded_subsets(&atom_pool, self.max_facts);

        let mut out = Vec::with_capacity(valuations.len() * fact_sets.len());
        for valuation in &valuations {
            for facts in &fact_sets {
                out.push(GuideInput::new(valuation.clone(), facts.clone()));
            }
        }
        out
    }

    fn atom_pool(&self, guide: &UserGuide) -> Vec<GroundAtom> {
        let mut pool = Vec::new();
        for predicate in &guide.inputs {
            let mut tuples: Vec<Vec<PrecomputedTerm>> = vec![Vec::new()];
            for _ in 0..predicate.arity {
                let mut extended = Vec::new();
                for tuple in &tuples {
                    for value in &self.constant_pool {
                        if let PrecomputedTerm::Symbol(s) = value {
                            if guide.placeholders.contains(s) {
                                continue;
                            }
                        }
                        let mut next = tuple.clone();
                        next.push(value.clone());
                        extended.push(next);
                    }
                }
                tuples = extended;
            }
            for terms in tuples {
                pool.push(GroundAtom::new(predicate.name.clone(), terms));
            }
        }
        pool
    }
}

fn bounded_subsets(pool: &[GroundAtom], max_size: usize) -> Vec<BTreeSet<GroundAtom>> {
    let mut out = vec![BTreeSet::new()];
    let mut frontier: Vec<(usize, BTreeSet<GroundAtom>)> = vec![(0, BTreeSet::new())];
    for _ in 0..max_size {
        let mut next_frontier = Vec::new();
        for (start, set) in &frontier {
            for (offset, atom) in pool.iter().enumerate().skip(*start) {
                let mut next = set.clone();
                next.insert(atom.clone());
                out.push(next.clone());
                next_frontier.push((offset + 1, next));
            }
        }
        frontier = next_frontier;
        if frontier.is_empty() {
            break;
        }
    }
    out
}
