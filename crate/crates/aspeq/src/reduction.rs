//! Second-order quantifier elimination by fresh renaming, generated
//! specifications, and the first-order goal condition.
//!
//! The second-order completion of a program existentially binds its private
//! predicates. For programs without private recursion that quantifier can
//! be discharged by replacing the private predicates with fresh predicate
//! constants: the private definitions become assumptions and the remaining
//! conjuncts (output definitions and constraints) become the matter to
//! prove. Program 1's privates get the suffix `_1`, program 2's `_2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::{gate, Diagnostic};
use crate::completion::{
    second_order_completion, CompletedDefinition, CompletionError, SecondOrderCompletion,
};
use crate::guide::UserGuide;
use crate::syntax::asp::Program;
use crate::syntax::fol::Formula;
use crate::syntax::Predicate;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("applicability check failed: {}", format_diagnostics(.0))]
    Gate(Vec<Diagnostic>),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

fn format_diagnostics(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Maps each private predicate `p/n` to a fresh `p<suffix>/n`, appending
/// the suffix further if the name is already taken.
pub fn fresh_rename(
    privates: &[Predicate],
    suffix: &str,
    taken: &BTreeSet<Predicate>,
) -> BTreeMap<Predicate, Predicate> {
    let mut mapping = BTreeMap::new();
    let mut claimed = taken.clone();
    for private in privates {
        let mut name = format!("{}{}", private.name, suffix);
        loop {
            let candidate = Predicate::new(name.clone(), private.arity);
            if !claimed.contains(&candidate) {
                claimed.insert(candidate.clone());
                mapping.insert(private.clone(), candidate);
                break;
            }
            name.push_str(suffix);
        }
    }
    mapping
}

/// Splits a second-order completion along the renaming of its privates:
/// the renamed private definitions, and the renamed output definitions and
/// constraints.
pub fn split_completion(
    completion: &SecondOrderCompletion,
    renaming: &BTreeMap<Predicate, Predicate>,
) -> (Vec<CompletedDefinition>, Vec<Formula>) {
    let mut private_definitions = Vec::new();
    let mut rest = Vec::new();
    for definition in &completion.completion.definitions {
        let renamed = definition.rename_predicates(renaming);
        if completion.private.contains(&definition.predicate) {
            private_definitions.push(renamed);
        } else {
            rest.push(renamed.formula());
        }
    }
    for constraint in &completion.completion.constraints {
        rest.push(constraint.rename_predicates_unchecked(renaming));
    }
    (private_definitions, rest)
}

/// A specification: input and output symbols, assumptions, and
/// the sentences to verify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specification {
    pub placeholders: BTreeSet<String>,
    pub inputs: BTreeSet<Predicate>,
    pub outputs: BTreeSet<Predicate>,
    pub assumptions: Vec<Formula>,
    pub specs: Vec<Formula>,
}

impl Specification {
    /// Deterministic file rendering: inputs, assumes, specs, with bound
    /// variables renamed canonically.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for placeholder in &self.placeholders {
            writeln!(out, "input: {placeholder}.").unwrap();
        }
        for predicate in &self.inputs {
            writeln!(out, "input: {predicate}.").unwrap();
        }
        for assumption in &self.assumptions {
            writeln!(out, "assume: {}.", assumption.canonicalize_variables()).unwrap();
        }
        for spec in &self.specs {
            writeln!(out, "spec: {}.", spec.canonicalize_variables()).unwrap();
        }
        out
    }
}

fn gate_or_error(
    program1: &Program,
    program2: &Program,
    guide: &UserGuide,
) -> Result<(), ReductionError> {
    let diagnostics = gate(program1, program2, guide);
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(ReductionError::Gate(diagnostics))
    }
}

struct RenamedCompletion {
    definitions: Vec<CompletedDefinition>,
    rest: Vec<Formula>,
    targets: BTreeSet<Predicate>,
}

fn renamed_completion(
    program: &Program,
    inputs: &BTreeSet<Predicate>,
    outputs: &BTreeSet<Predicate>,
    suffix: &str,
    taken: &BTreeSet<Predicate>,
) -> Result<RenamedCompletion, CompletionError> {
    let completion = second_order_completion(program, inputs, outputs)?;
    let completion = SecondOrderCompletion {
        private: completion.private,
        completion: completion.completion.simplified(),
    };
    let renaming = fresh_rename(&completion.private, suffix, taken);
    let (definitions, rest) = split_completion(&completion, &renaming);
    Ok(RenamedCompletion {
        definitions,
        rest,
        targets: renaming.into_values().collect(),
    })
}

fn taken_predicates(guide: &UserGuide, programs: &[&Program]) -> BTreeSet<Predicate> {
    let mut taken = guide.public_predicates();
    for assumption in &guide.assumptions {
        taken.extend(assumption.predicates());
    }
    for program in programs {
        taken.extend(program.predicates());
    }
    taken
}

/// The specification a program implements relative to a guide: the guide
/// extended by the renamed private predicates of the program as inputs,
/// their completed definitions as assumptions, and the rest of the
/// completion as specs.
pub fn build_specification(
    program1: &Program,
    guide: &UserGuide,
) -> Result<Specification, ReductionError> {
    gate_or_error(program1, program1, guide)?;
    let taken = taken_predicates(guide, &[program1]);
    let renamed = renamed_completion(program1, &guide.inputs, &guide.outputs, "_1", &taken)?;

    let mut inputs = guide.inputs.clone();
    inputs.extend(renamed.targets.iter().cloned());
    let mut assumptions = guide.assumptions.clone();
    assumptions.extend(renamed.definitions.iter().map(|d| d.formula()));
    Ok(Specification {
        placeholders: guide.placeholders.clone(),
        inputs,
        outputs: guide.outputs.clone(),
        assumptions,
        specs: renamed.rest,
    })
}

/// The first-order verification condition for a pair of programs: shared
/// axioms and the two sides of the equivalence to be proved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalCondition {
    pub axioms: Vec<Formula>,
    /// Conjuncts of F'(p): program 1's output definitions and constraints.
    pub lhs: Vec<Formula>,
    /// Conjuncts of G'(q): program 2's output definitions and constraints.
    pub rhs: Vec<Formula>,
}

pub fn build_goal(
    program1: &Program,
    program2: &Program,
    guide: &UserGuide,
) -> Result<GoalCondition, ReductionError> {
    gate_or_error(program1, program2, guide)?;
    let taken = taken_predicates(guide, &[program1, program2]);
    let first = renamed_completion(program1, &guide.inputs, &guide.outputs, "_1", &taken)?;
    let mut taken = taken;
    taken.extend(first.targets.iter().cloned());
    let second = renamed_completion(program2, &guide.inputs, &guide.outputs, "_2", &taken)?;

    let mut axioms = guide.assumptions.clone();
    axioms.extend(first.definitions.iter().map(|d| d.formula()));
    axioms.extend(second.definitions.iter().map(|d| d.formula()));
    Ok(GoalCondition {
        axioms,
        lhs: first.rest,
        rhs: second.rest,
    })
}

impl Specification {
    /// The goal condition for the claim that `program2` implements this
    /// specification. For specifications produced by [`build_specification`]
    /// this coincides with [`build_goal`] on the original pair.
    pub fn goal_against(
        &self,
        program2: &Program,
        guide: &UserGuide,
    ) -> Result<GoalCondition, ReductionError> {
        gate_or_error(program2, program2, guide)?;
        let mut taken: BTreeSet<Predicate> = self.inputs.union(&self.outputs).cloned().collect();
        for formula in self.assumptions.iter().chain(&self.specs) {
            taken.extend(formula.predicates());
        }
        taken.extend(program2.predicates());
        let second = renamed_completion(program2, &self.inputs, &self.outputs, "_2", &taken)?;

        let mut axioms = self.assumptions.clone();
        axioms.extend(second.definitions.iter().map(|d| d.formula()));
        Ok(GoalCondition {
            axioms,
            lhs: self.specs.clone(),
            rhs: second.rest,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::asp::parse_program;
    use crate::parse::fol::parse_formula;

    const PRIMES_UNSAFE: &str = "\
composite(I*J) :- I > 1, J > 1.
prime(I) :- I = a..b, not composite(I).
";
    const PRIMES_SAFE: &str = "\
composite(I*J) :- I = 2..b, J = 2..b.
prime(I) :- I = a..b, not composite(I).
";

    fn primes_guide() -> UserGuide {
        UserGuide::parse("input: a -> integer, b -> integer.\noutput: prime/1.\n").unwrap()
    }

    fn assert_alpha_ac(actual: &Formula, expected: &str) {
        let expected = parse_formula(expected).unwrap();
        assert!(
            actual.alpha_ac_eq(&expected),
            "formulas differ:\n actual:   {actual}\n expected: {expected}"
        );
    }

    #[test]
    fn rename_is_suffix_based() {
        let mapping = fresh_rename(
            &[Predicate::new("composite", 1)],
            "_1",
            &BTreeSet::from([Predicate::new("prime", 1)]),
        );
        assert_eq!(
            mapping,
            BTreeMap::from([(
                Predicate::new("composite", 1),
                Predicate::new("composite_1", 1)
            )])
        );
    }

    #[test]
    fn rename_of_nothing_is_empty() {
        assert!(fresh_rename(&[], "_1", &BTreeSet::new()).is_empty());
    }

    #[test]
    fn rename_preserves_arity_and_avoids_collisions() {
        let mapping = fresh_rename(
            &[Predicate::new("aux", 2), Predicate::new("aux2", 1)],
            "_2",
            &BTreeSet::from([Predicate::new("aux_2", 2)]),
        );
        assert_eq!(
            mapping[&Predicate::new("aux", 2)],
            Predicate::new("aux_2_2", 2)
        );
        assert_eq!(
            mapping[&Predicate::new("aux2", 1)],
            Predicate::new("aux2_2", 1)
        );
    }

    #[test]
    fn renamed_symbol_sets_are_disjoint_for_equal_programs() {
        let program = parse_program(PRIMES_UNSAFE).unwrap();
        let goal = build_goal(&program, &program, &primes_guide()).unwrap();
        // composite/1 is private on both sides; the two renamings keep the
        // instances apart.
        let mut predicates = BTreeSet::new();
        for axiom in &goal.axioms {
            predicates.extend(axiom.predicates());
        }
        assert!(predicates.contains(&Predicate::new("composite_1", 1)));
        assert!(predicates.contains(&Predicate::new("composite_2", 1)));
        assert!(!predicates.contains(&Predicate::new("composite", 1)));
    }

    #[test]
    fn specification_for_unsafe_primes() {
        let program = parse_program(PRIMES_UNSAFE).unwrap();
        let spec = build_specification(&program, &primes_guide()).unwrap();

        assert_eq!(spec.placeholders, BTreeSet::from(["a".into(), "b".into()]));
        assert_eq!(
            spec.inputs,
            BTreeSet::from([Predicate::new("composite_1", 1)])
        );
        assert_eq!(spec.outputs, BTreeSet::from([Predicate::new("prime", 1)]));

        // guide assumptions plus the renamed private definition
        assert_eq!(spec.assumptions.len(), 3);
        assert_alpha_ac(
            &spec.assumptions[2],
            "forall X (composite_1(X) <-> exists N1, N2 (N1 > 1 and N2 > 1 and X = N1 * N2))",
        );

        assert_eq!(spec.specs.len(), 1);
        assert_alpha_ac(
            &spec.specs[0],
            "forall X (prime(X) <-> exists N1 (not composite_1(N1) and \
             exists N2, N3 (N2 = a and N3 = b and N2 <= N1 and N1 <= N3) and X = N1))",
        );

        let file = spec.to_file_string();
        assert!(file.contains("input: composite_1/1."));
        assert!(file.contains("input: a."));
        assert!(file.contains("spec: forall"));
    }

    #[test]
    fn specification_without_privates_adds_nothing() {
        let program = parse_program("q(X) :- p(X).").unwrap();
        let guide = UserGuide::parse("input: p/1.\noutput: q/1.\n").unwrap();
        let spec = build_specification(&program, &guide).unwrap();
        assert_eq!(spec.inputs, guide.inputs);
        assert!(spec.assumptions.is_empty());
        assert_eq!(spec.specs.len(), 1);
    }

    #[test]
    fn specification_for_the_orphan_program() {
        let program = parse_program(
            "parent_living(X) :- father(Y,X), living(Y).\n\
             parent_living(X) :- mother(Y,X), living(Y).\n\
             orphan(X) :- living(X), not parent_living(X).\n",
        )
        .unwrap();
        let guide =
            UserGuide::parse("input: living/1, father/2, mother/2.\noutput: orphan/1.\n").unwrap();
        let spec = build_specification(&program, &guide).unwrap();
        assert!(spec.inputs.contains(&Predicate::new("parent_living_1", 1)));
        assert_eq!(spec.assumptions.len(), 1);
        assert_alpha_ac(
            &spec.assumptions[0],
            "forall V1 (parent_living_1(V1) <-> \
             exists Y (father(Y, V1) and living(Y)) or \
             exists Y (mother(Y, V1) and living(Y)))",
        );
        assert_eq!(spec.specs.len(), 1);
        assert_alpha_ac(
            &spec.specs[0],
            "forall V1 (orphan(V1) <-> living(V1) and not parent_living_1(V1))",
        );
    }

    #[test]
    fn goal_for_the_prime_pair() {
        let program1 = parse_program(PRIMES_UNSAFE).unwrap();
        let program2 = parse_program(PRIMES_SAFE).unwrap();
        let goal = build_goal(&program1, &program2, &primes_guide()).unwrap();

        // two guide assumptions plus one private definition per side
        assert_eq!(goal.axioms.len(), 4);
        assert_alpha_ac(
            &goal.axioms[2],
            "forall X (composite_1(X) <-> exists N1, N2 (N1 > 1 and N2 > 1 and X = N1 * N2))",
        );
        assert_alpha_ac(
            &goal.axioms[3],
            "forall X (composite_2(X) <-> exists N1, N2 (\
               exists N3 (N3 = b and 2 <= N1 and N1 <= N3) and \
               exists N4 (N4 = b and 2 <= N2 and N2 <= N4) and \
               X = N1 * N2))",
        );
        assert_eq!(goal.lhs.len(), 1);
        assert_eq!(goal.rhs.len(), 1);
        assert_alpha_ac(
            &goal.lhs[0],
            "forall X (prime(X) <-> exists N1 (not composite_1(N1) and \
             exists N2, N3 (N2 = a and N3 = b and N2 <= N1 and N1 <= N3) and X = N1))",
        );
        assert_alpha_ac(
            &goal.rhs[0],
            "forall X (prime(X) <-> exists N1 (not composite_2(N1) and \
             exists N2, N3 (N2 = a and N3 = b and N2 <= N1 and N1 <= N3) and X = N1))",
        );
    }

    #[test]
    fn specification_route_equals_goal_route() {
        let program1 = parse_program(PRIMES_UNSAFE).unwrap();
        let program2 = parse_program(PRIMES_SAFE).unwrap();
        let guide = primes_guide();
        let direct = build_goal(&program1, &program2, &guide).unwrap();
        let via_spec = build_specification(&program1, &guide)
            .unwrap()
            .goal_against(&program2, &guide)
            .unwrap();
        assert_eq!(direct, via_spec);
    }

    #[test]
    fn gate_failures_propagate() {
        let looping = parse_program("prime(X) :- prime(X).").unwrap();
        let fine = parse_program(PRIMES_SAFE).unwrap();
        let err = build_goal(&looping, &fine, &primes_guide()).unwrap_err();
        assert!(matches!(err, ReductionError::Gate(_)));
    }

    #[test]
    fn goal_with_asymmetric_privates() {
        // Program 2 has no private predicates at all.
        let program1 = parse_program(
            "parent_living(X) :- father(Y,X), living(Y).\n\
             parent_living(X) :- mother(Y,X), living(Y).\n\
             orphan(X) :- living(X), not parent_living(X).\n",
        )
        .unwrap();
        let program2 = parse_program(
            "orphan(X) :- living(X), father(Y,X), mother(Z,X), not living(Y), not living(Z).\n",
        )
        .unwrap();
        let guide =
            UserGuide::parse("input: living/1, father/2, mother/2.\noutput: orphan/1.\n").unwrap();
        let goal = build_goal(&program1, &program2, &guide).unwrap();
        assert_eq!(goal.axioms.len(), 1);
        let axiom_preds = goal.axioms[0].predicates();
        assert!(axiom_preds.contains(&Predicate::new("parent_living_1", 1)));
    }
}
