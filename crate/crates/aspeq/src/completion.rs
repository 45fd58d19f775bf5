//! Translation of mini-gringo rules into two-sorted formulas, completed
//! definitions, and first- and second-order completion.
//!
//! A term `t` is translated through its value formula `val_t(Z)`, which
//! holds exactly when `Z` is one of the values of `t`. Body literals and
//! comparisons existentially close the value formulas of their argument
//! terms; a completed definition collects, for each predicate, one disjunct
//! per defining rule, existentially closing the rule variables and binding
//! the head arguments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::analysis::defining_rules;
use crate::syntax::asp::{Atom, BodyElement, Head, PrecomputedTerm, Program, Sign, Term};
use crate::syntax::fol::{FolTerm, Formula, Quantifier, Sort, Variable};
use crate::syntax::{Predicate, Relation};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("input symbol {0} occurs in a rule head")]
    InputSymbolInHead(Predicate),
}

/// `forall V1 .. Vn (p(V1, .., Vn) <-> rhs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletedDefinition {
    pub predicate: Predicate,
    pub variables: Vec<Variable>,
    pub rhs: Formula,
}

impl CompletedDefinition {
    pub fn formula(&self) -> Formula {
        let head = Formula::atom(
            self.predicate.name.clone(),
            self.variables
                .iter()
                .map(|v| FolTerm::Variable(v.clone()))
                .collect(),
        );
        Formula::quantify(
            Quantifier::Forall,
            self.variables.clone(),
            Formula::iff(head, self.rhs.clone()),
        )
    }

    pub fn simplified(&self) -> CompletedDefinition {
        CompletedDefinition {
            predicate: self.predicate.clone(),
            variables: self.variables.clone(),
            rhs: crate::simplify::simplify(self.rhs.clone()),
        }
    }

    pub fn rename_predicates(
        &self,
        mapping: &BTreeMap<Predicate, Predicate>,
    ) -> CompletedDefinition {
        CompletedDefinition {
            predicate: mapping
                .get(&self.predicate)
                .cloned()
                .unwrap_or_else(|| self.predicate.clone()),
            variables: self.variables.clone(),
            rhs: self.rhs.rename_predicates_unchecked(mapping),
        }
    }
}

impl fmt::Display for CompletedDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderCompletion {
    pub definitions: Vec<CompletedDefinition>,
    pub constraints: Vec<Formula>,
}

impl FirstOrderCompletion {
    pub fn formulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.definitions.iter().map(|d| d.formula()).collect();
        out.extend(self.constraints.iter().cloned());
        out
    }

    pub fn simplified(&self) -> FirstOrderCompletion {
        FirstOrderCompletion {
            definitions: self.definitions.iter().map(|d| d.simplified()).collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| crate::simplify::simplify(c.clone()))
                .collect(),
        }
    }

    pub fn definition_of(&self, predicate: &Predicate) -> Option<&CompletedDefinition> {
        self.definitions.iter().find(|d| &d.predicate == predicate)
    }
}

/// The existential closure over the private predicates is kept symbolic:
/// the private list plus the first-order body it would bind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrderCompletion {
    pub private: Vec<Predicate>,
    pub completion: FirstOrderCompletion,
}

/// Fresh variable names, one counter per stem.
#[derive(Default)]
struct VariableAllocator {
    counters: BTreeMap<&'static str, usize>,
}

impl VariableAllocator {
    fn fresh(&mut self, stem: &'static str, sort: Sort) -> Variable {
        let counter = self.counters.entry(stem).or_insert(0);
        *counter += 1;
        Variable {
            name: format!("{stem}{counter}"),
            sort,
        }
    }

    fn fresh_general(&mut self) -> Variable {
        self.fresh("X", Sort::General)
    }

    fn fresh_integer(&mut self) -> Variable {
        self.fresh("N", Sort::Integer)
    }

    fn fresh_target(&mut self, term: &Term) -> Variable {
        match value_sort(term) {
            Sort::Integer => self.fresh_integer(),
            Sort::General => self.fresh("Z", Sort::General),
        }
    }
}

/// The sort every value of the term is known to have: arithmetic terms and
/// intervals only take numeral values.
fn value_sort(term: &Term) -> Sort {
    match term {
        Term::Precomputed(PrecomputedTerm::Numeral(_))
        | Term::Negative(_)
        | Term::BinaryOperation(_, _, _)
        | Term::Interval(_, _) => Sort::Integer,
        Term::Precomputed(_) | Term::Variable(_) => Sort::General,
    }
}

fn value_formula(
    term: &Term,
    target: &Variable,
    vars: &BTreeMap<String, Variable>,
    alloc: &mut VariableAllocator,
) -> Formula {
    let target_term = FolTerm::Variable(target.clone());
    match term {
        Term::Precomputed(c) => {
            Formula::Comparison(target_term, Relation::Equal, FolTerm::Constant(c.clone()))
        }
        Term::Variable(name) => {
            let var = vars
                .get(name)
                .cloned()
                .unwrap_or_else(|| Variable::general(name.clone()));
            Formula::Comparison(target_term, Relation::Equal, FolTerm::Variable(var))
        }
        Term::Negative(inner) => {
            let i = alloc.fresh_integer();
            let binding = Formula::Comparison(
                target_term,
                Relation::Equal,
                FolTerm::Negative(FolTerm::Variable(i.clone()).into()),
            );
            let value = value_formula(inner, &i, vars, alloc);
            Formula::Quantified(
                Quantifier::Exists,
                vec![i],
                Formula::and(binding, value).into(),
            )
        }
        Term::BinaryOperation(op, lhs, rhs) => {
            let i = alloc.fresh_integer();
            let j = alloc.fresh_integer();
            let binding = Formula::Comparison(
                target_term,
                Relation::Equal,
                FolTerm::Arith(
                    *op,
                    FolTerm::Variable(i.clone()).into(),
                    FolTerm::Variable(j.clone()).into(),
                ),
            );
            let left = value_formula(lhs, &i, vars, alloc);
            let right = value_formula(rhs, &j, vars, alloc);
            Formula::Quantified(
                Quantifier::Exists,
                vec![i, j],
                Formula::conjoin([binding, left, right]).into(),
            )
        }
        Term::Interval(lhs, rhs) => {
            let i = alloc.fresh_integer();
            let j = alloc.fresh_integer();
            let k = alloc.fresh_integer();
            let left = value_formula(lhs, &i, vars, alloc);
            let right = value_formula(rhs, &j, vars, alloc);
            let low = Formula::Comparison(
                FolTerm::Variable(i.clone()),
                Relation::LessEqual,
                FolTerm::Variable(k.clone()),
            );
            let high = Formula::Comparison(
                FolTerm::Variable(k.clone()),
                Relation::LessEqual,
                FolTerm::Variable(j.clone()),
            );
            let binding =
                Formula::Comparison(target_term, Relation::Equal, FolTerm::Variable(k.clone()));
            Formula::Quantified(
                Quantifier::Exists,
                vec![i, j, k],
                Formula::conjoin([left, right, low, high, binding]).into(),
            )
        }
    }
}

/// `val_t(z)`: true in a standard interpretation iff `z` is a value of `t`.
/// Program variables occurring in `t` become general variables of the same
/// name.
pub fn term_value_formula(term: &Term, target: &Variable) -> Formula {
    value_formula(
        term,
        target,
        &BTreeMap::new(),
        &mut VariableAllocator::default(),
    )
}

fn atom_formula(
    atom: &Atom,
    vars: &BTreeMap<String, Variable>,
    alloc: &mut VariableAllocator,
    wrap: impl FnOnce(Formula) -> Formula,
) -> Formula {
    let mut targets = Vec::new();
    let mut values = Vec::new();
    for term in &atom.terms {
        let target = alloc.fresh_target(term);
        values.push(value_formula(term, &target, vars, alloc));
        targets.push(target);
    }
    let atom = Formula::atom(
        atom.predicate.clone(),
        targets
            .iter()
            .map(|v| FolTerm::Variable(v.clone()))
            .collect(),
    );
    let mut parts = values;
    parts.push(wrap(atom));
    Formula::quantify(Quantifier::Exists, targets, Formula::conjoin(parts))
}

fn body_element_formula(
    element: &BodyElement,
    vars: &BTreeMap<String, Variable>,
    alloc: &mut VariableAllocator,
) -> Formula {
    match element {
        BodyElement::Literal(literal) => {
            let wrap: Box<dyn FnOnce(Formula) -> Formula> = match literal.sign {
                Sign::Positive => Box::new(|f| f),
                Sign::Negative => Box::new(Formula::not),
                Sign::DoubleNegative => Box::new(|f| Formula::not(Formula::not(f))),
            };
            atom_formula(&literal.atom, vars, alloc, wrap)
        }
        BodyElement::Comparison(comparison) => {
            let lhs_target = alloc.fresh_target(&comparison.lhs);
            let rhs_target = alloc.fresh_target(&comparison.rhs);
            let lhs_value = value_formula(&comparison.lhs, &lhs_target, vars, alloc);
            let rhs_value = value_formula(&comparison.rhs, &rhs_target, vars, alloc);
            let relation = Formula::Comparison(
                FolTerm::Variable(lhs_target.clone()),
                comparison.relation,
                FolTerm::Variable(rhs_target.clone()),
            );
            Formula::quantify(
                Quantifier::Exists,
                vec![lhs_target, rhs_target],
                Formula::conjoin([lhs_value, rhs_value, relation]),
            )
        }
    }
}

/// Renames the rule's variables to fresh general variables and translates
/// its body into a conjunction.
fn body_formula(
    body: &[BodyElement],
    vars: &BTreeMap<String, Variable>,
    alloc: &mut VariableAllocator,
) -> Vec<Formula> {
    body.iter()
        .map(|element| body_element_formula(element, vars, alloc))
        .collect()
}

/// The completed definition of `p/n` in the program: one disjunct per rule
/// with `p/n` in the head. A choice head conjoins the head atom itself, so
/// the rule only says that the atom may hold when the body does.
pub fn completed_definition(predicate: &Predicate, program: &Program) -> CompletedDefinition {
    let mut alloc = VariableAllocator::default();
    let head_variables: Vec<Variable> = (0..predicate.arity)
        .map(|_| alloc.fresh("V", Sort::General))
        .collect();

    let mut disjuncts = Vec::new();
    for rule in defining_rules(program, predicate) {
        let (head_atom, is_choice) = match &rule.head {
            Head::Basic(atom) => (atom, false),
            Head::Choice(atom) => (atom, true),
            Head::Constraint => continue,
        };
        let mut alloc = VariableAllocator::default();
        // Head variables are shared by all disjuncts; rule variables are
        // renamed apart per rule.
        let vars: BTreeMap<String, Variable> = rule
            .variables()
            .into_iter()
            .map(|name| (name, alloc.fresh_general()))
            .collect();

        let mut parts = body_formula(&rule.body, &vars, &mut alloc);
        for (term, target) in head_atom.terms.iter().zip(&head_variables) {
            parts.push(value_formula(term, target, &vars, &mut alloc));
        }
        if is_choice {
            parts.push(Formula::atom(
                predicate.name.clone(),
                head_variables
                    .iter()
                    .map(|v| FolTerm::Variable(v.clone()))
                    .collect(),
            ));
        }
        let mut quantified: Vec<Variable> = rule
            .variables()
            .into_iter()
            .map(|name| vars[&name].clone())
            .collect();
        quantified.retain(|v| !head_variables.contains(v));
        disjuncts.push(Formula::quantify(
            Quantifier::Exists,
            quantified,
            Formula::conjoin(parts),
        ));
    }

    CompletedDefinition {
        predicate: predicate.clone(),
        variables: head_variables,
        rhs: Formula::disjoin(disjuncts),
    }
}

/// A constraint `:- Body` becomes the negated existential closure of the
/// body translation.
fn constraint_formula(body: &[BodyElement], variables: Vec<String>) -> Formula {
    let mut alloc = VariableAllocator::default();
    let vars: BTreeMap<String, Variable> = variables
        .into_iter()
        .map(|name| (name, alloc.fresh_general()))
        .collect();
    let parts = body_formula(body, &vars, &mut alloc);
    let quantified: Vec<Variable> = vars.values().cloned().collect();
    Formula::not(Formula::quantify(
        Quantifier::Exists,
        quantified,
        Formula::conjoin(parts),
    ))
}

/// The private symbols of the program relative to the interface.
pub fn private_predicates(
    program: &Program,
    inputs: &BTreeSet<Predicate>,
    outputs: &BTreeSet<Predicate>,
) -> BTreeSet<Predicate> {
    program
        .predicates()
        .into_iter()
        .filter(|p| !inputs.contains(p) && !outputs.contains(p))
        .collect()
}

/// Completed definitions of all output and private predicates plus the
/// translated constraints.
pub fn first_order_completion(
    program: &Program,
    inputs: &BTreeSet<Predicate>,
    outputs: &BTreeSet<Predicate>,
) -> Result<FirstOrderCompletion, CompletionError> {
    for rule in &program.rules {
        if let Some(atom) = rule.head.atom() {
            let p = atom.predicate_symbol();
            if inputs.contains(&p) {
                return Err(CompletionError::InputSymbolInHead(p));
            }
        }
    }
    let mut defined: BTreeSet<Predicate> = outputs.clone();
    defined.extend(private_predicates(program, inputs, outputs));
    let definitions = defined
        .iter()
        .map(|p| completed_definition(p, program))
        .collect();
    let constraints = program
        .rules
        .iter()
        .filter(|rule| matches!(rule.head, Head::Constraint))
        .map(|rule| constraint_formula(&rule.body, rule.variables()))
        .collect();
    Ok(FirstOrderCompletion {
        definitions,
        constraints,
    })
}

pub fn second_order_completion(
    program: &Program,
    inputs: &BTreeSet<Predicate>,
    outputs: &BTreeSet<Predicate>,
) -> Result<SecondOrderCompletion, CompletionError> {
    let completion = first_order_completion(program, inputs, outputs)?;
    Ok(SecondOrderCompletion {
        private: private_predicates(program, inputs, outputs)
            .into_iter()
            .collect(),
        completion,
    })
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("definition of {0} refers to itself (private recursion)")]
    Recursive(Predicate),
}

/// Eliminates the private predicates of a first-order completion by
/// unfolding their completed definitions into all other formulas. This is
/// only possible when the private definitions are not recursive.
pub fn eliminate_private_predicates(
    completion: &FirstOrderCompletion,
    private: &BTreeSet<Predicate>,
) -> Result<Vec<Formula>, UnfoldError> {
    // Fully expand each private definition so that its right-hand side
    // mentions no private predicates, detecting cycles on the way.
    fn expand(
        predicate: &Predicate,
        definitions: &BTreeMap<Predicate, (Vec<Variable>, Formula)>,
        expanded: &mut BTreeMap<Predicate, (Vec<Variable>, Formula)>,
        in_progress: &mut BTreeSet<Predicate>,
    ) -> Result<(), UnfoldError> {
        if expanded.contains_key(predicate) {
            return Ok(());
        }
        if !in_progress.insert(predicate.clone()) {
            return Err(UnfoldError::Recursive(predicate.clone()));
        }
        let (variables, rhs) = definitions[predicate].clone();
        let mut rhs = rhs;
        for p in rhs.predicates() {
            if definitions.contains_key(&p) {
                if &p == predicate {
                    return Err(UnfoldError::Recursive(predicate.clone()));
                }
                expand(&p, definitions, expanded, in_progress)?;
                let (def_vars, def_rhs) = expanded[&p].clone();
                rhs = unfold_atom(&rhs, &p, &def_vars, &def_rhs);
            }
        }
        in_progress.remove(predicate);
        expanded.insert(predicate.clone(), (variables, rhs));
        Ok(())
    }

    let definitions: BTreeMap<Predicate, (Vec<Variable>, Formula)> = completion
        .definitions
        .iter()
        .filter(|d| private.contains(&d.predicate))
        .map(|d| (d.predicate.clone(), (d.variables.clone(), d.rhs.clone())))
        .collect();

    let mut expanded = BTreeMap::new();
    for predicate in definitions.keys() {
        expand(predicate, &definitions, &mut expanded, &mut BTreeSet::new())?;
    }

    let mut out = Vec::new();
    for definition in &completion.definitions {
        if private.contains(&definition.predicate) {
            continue;
        }
        let mut formula = definition.formula();
        for (p, (vars, rhs)) in &expanded {
            formula = unfold_atom(&formula, p, vars, rhs);
        }
        out.push(formula);
    }
    for constraint in &completion.constraints {
        let mut formula = constraint.clone();
        for (p, (vars, rhs)) in &expanded {
            formula = unfold_atom(&formula, p, vars, rhs);
        }
        out.push(formula);
    }
    Ok(out)
}

/// Replaces every atom of `predicate` by the definition body with the head
/// variables substituted by the atom's arguments.
fn unfold_atom(
    formula: &Formula,
    predicate: &Predicate,
    def_vars: &[Variable],
    def_rhs: &Formula,
) -> Formula {
    match formula {
        Formula::Atom(atom) if atom.predicate_symbol() == *predicate => {
            let mut body = def_rhs.clone();
            // Simultaneous substitution via fresh intermediate names.
            let taken: BTreeSet<String> = body
                .variables()
                .iter()
                .map(|v| v.name.clone())
                .chain(
                    atom.terms
                        .iter()
                        .flat_map(|t| t.variables().into_iter().map(|v| v.name)),
                )
                .collect();
            let temps: Vec<Variable> = def_vars
                .iter()
                .enumerate()
                .map(|(i, v)| Variable {
                    name: format!("W{}{}", i + 1, unique_suffix(&taken)),
                    sort: v.sort,
                })
                .collect();
            for (from, to) in def_vars.iter().zip(&temps) {
                body = body.substitute(from, &FolTerm::Variable(to.clone()));
            }
            for (temp, term) in temps.iter().zip(&atom.terms) {
                body = body.substitute(temp, term);
            }
            body
        }
        Formula::Truth | Formula::Falsity | Formula::Atom(_) | Formula::Comparison(_, _, _) => {
            formula.clone()
        }
        Formula::Not(f) => Formula::not(unfold_atom(f, predicate, def_vars, def_rhs)),
        Formula::Binary(c, lhs, rhs) => Formula::Binary(
            *c,
            unfold_atom(lhs, predicate, def_vars, def_rhs).into(),
            unfold_atom(rhs, predicate, def_vars, def_rhs).into(),
        ),
        Formula::Quantified(q, vars, body) => Formula::Quantified(
            *q,
            vars.clone(),
            unfold_atom(body, predicate, def_vars, def_rhs).into(),
        ),
    }
}

fn unique_suffix(taken: &BTreeSet<String>) -> String {
    let mut i = 0;
    loop {
        let suffix = if i == 0 {
            String::new()
        } else {
            format!("_{i}")
        };
        if !taken
            .iter()
            .any(|name| name.starts_with('W') && name.ends_with(&suffix))
        {
            return suffix;
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::asp::parse_program;
    use crate::parse::fol::parse_formula;
    use crate::simplify::simplify;

    fn assert_alpha_ac(actual: &Formula, expected: &str) {
        let expected = parse_formula(expected).unwrap();
        assert!(
            actual.alpha_ac_eq(&expected),
            "formulas differ:\n actual:   {actual}\n expected: {expected}"
        );
    }

    #[test]
    fn value_formula_for_numeral() {
        let z = Variable::general("Z");
        let f = term_value_formula(&Term::numeral(5), &z);
        assert_eq!(f, parse_formula("Z = 5").unwrap());
    }

    #[test]
    fn value_formula_for_interval() {
        // With an integer target the interval element variable collapses
        // onto the target.
        let target = Variable::integer("N9");
        let raw = term_value_formula(
            &Term::Interval(Term::symbol("a").into(), Term::symbol("b").into()),
            &target,
        );
        assert_alpha_ac(
            &simplify(raw),
            "exists N2, N3 (N2 = a and N3 = b and N2 <= N9 and N9 <= N3)",
        );
    }

    #[test]
    fn value_formula_for_product() {
        let target = Variable::general("Z");
        let raw = term_value_formula(
            &Term::BinaryOperation(
                crate::syntax::ArithOp::Multiply,
                Term::variable("X").into(),
                Term::variable("Y").into(),
            ),
            &target,
        );
        assert_alpha_ac(
            &simplify(raw),
            "exists N1, N2 (Z = N1 * N2 and N1 = X and N2 = Y)",
        );
    }

    #[test]
    fn completed_definition_of_facts() {
        let program = parse_program("p(a). p(b).").unwrap();
        let definition = completed_definition(&Predicate::new("p", 1), &program);
        assert_alpha_ac(
            &simplify(definition.formula()),
            "forall V1 (p(V1) <-> V1 = a or V1 = b)",
        );
    }

    #[test]
    fn completed_definition_of_pair_rule() {
        let program = parse_program("p(a). p(b). q(X,Y) :- p(X), p(Y).").unwrap();
        let definition = completed_definition(&Predicate::new("q", 2), &program);
        // After simplification the rule variables collapse onto the head
        // variables.
        assert_alpha_ac(
            &simplify(definition.formula()),
            "forall V1, V2 (q(V1, V2) <-> p(V1) and p(V2))",
        );
    }

    #[test]
    fn completed_definition_of_undefined_predicate() {
        let program = parse_program("p(a).").unwrap();
        let definition = completed_definition(&Predicate::new("r", 1), &program);
        assert_alpha_ac(&definition.formula(), "forall V1 (r(V1) <-> #false)");
        // which simplifies to plain negation
        assert_alpha_ac(&simplify(definition.formula()), "forall V1 not r(V1)");
    }

    #[test]
    fn composite_definition_matches_printed_shape() {
        let program = parse_program("composite(I*J) :- I > 1, J > 1.").unwrap();
        let definition = completed_definition(&Predicate::new("composite", 1), &program);
        assert_alpha_ac(
            &simplify(definition.formula()),
            "forall X (composite(X) <-> exists N1, N2 (N1 > 1 and N2 > 1 and X = N1 * N2))",
        );
    }

    #[test]
    fn prime_definition_matches_printed_shape() {
        let program = parse_program("prime(I) :- I = a..b, not composite(I).").unwrap();
        let definition = completed_definition(&Predicate::new("prime", 1), &program);
        assert_alpha_ac(
            &simplify(definition.formula()),
            "forall X (prime(X) <-> exists N1 (not composite(N1) and \
             exists N2, N3 (N2 = a and N3 = b and N2 <= N1 and N1 <= N3) and X = N1))",
        );
    }

    #[test]
    fn safe_composite_definition() {
        let program = parse_program("composite(I*J) :- I = 2..b, J = 2..b.").unwrap();
        let definition = completed_definition(&Predicate::new("composite", 1), &program);
        // The numeral interval endpoint is inlined by witness substitution;
        // the placeholder endpoint `b` cannot be.
        let simplified = simplify(definition.formula());
        assert_alpha_ac(
            &simplified,
            "forall X (composite(X) <-> exists N1, N2 (\
               exists N3 (N3 = b and 2 <= N1 and N1 <= N3) and \
               exists N4 (N4 = b and 2 <= N2 and N2 <= N4) and \
               X = N1 * N2))",
        );
        // and stays equivalent to the fully spelled-out form
        let spelled = parse_formula(
            "forall X (composite(X) <-> exists N1, N2 (\
               exists N3, N4 (N3 = 2 and N4 = b and N3 <= N1 and N1 <= N4) and \
               exists N5, N6 (N5 = 2 and N6 = b and N5 <= N2 and N2 <= N6) and \
               X = N1 * N2))",
        )
        .unwrap();
        let interp = crate::interpretation::FiniteInterpretation {
            valuation: std::collections::BTreeMap::from([(
                "b".to_string(),
                PrecomputedTerm::Numeral(4),
            )]),
            atoms: [4, 6, 8, 9, 12, 16]
                .into_iter()
                .map(|n| {
                    crate::syntax::asp::GroundAtom::new(
                        "composite",
                        vec![PrecomputedTerm::Numeral(n)],
                    )
                })
                .collect(),
            universe: Some((0..=16).map(PrecomputedTerm::Numeral).collect()),
            int_range: Some((0, 16)),
        };
        assert_eq!(
            crate::interpretation::evaluate(&simplified, &interp),
            crate::interpretation::evaluate(&spelled, &interp),
        );
    }

    #[test]
    fn choice_definition_conjoins_the_head() {
        let program = parse_program("{p(X)} :- q(X).").unwrap();
        let definition = completed_definition(&Predicate::new("p", 1), &program);
        assert_alpha_ac(
            &simplify(definition.formula()),
            "forall V1 (p(V1) <-> q(V1) and p(V1))",
        );
    }

    #[test]
    fn two_fact_program_completion_structure() {
        let program = parse_program("p(a). p(b). q(X,Y) :- p(X), p(Y).").unwrap();
        let completion = first_order_completion(
            &program,
            &BTreeSet::new(),
            &BTreeSet::from([Predicate::new("q", 2)]),
        )
        .unwrap();
        // Private p/1 and output q/2 are both defined; there are no
        // constraints.
        assert_eq!(completion.definitions.len(), 2);
        assert!(completion.constraints.is_empty());
        assert!(completion.definition_of(&Predicate::new("p", 1)).is_some());
        assert!(completion.definition_of(&Predicate::new("q", 2)).is_some());

        let second_order = second_order_completion(
            &program,
            &BTreeSet::new(),
            &BTreeSet::from([Predicate::new("q", 2)]),
        )
        .unwrap();
        assert_eq!(second_order.private, vec![Predicate::new("p", 1)]);
    }

    #[test]
    fn private_elimination_golden_example() {
        let program = parse_program("p(a). p(b). q(X,Y) :- p(X), p(Y).").unwrap();
        let completion = first_order_completion(
            &program,
            &BTreeSet::new(),
            &BTreeSet::from([Predicate::new("q", 2)]),
        )
        .unwrap();
        let private = BTreeSet::from([Predicate::new("p", 1)]);
        let eliminated = eliminate_private_predicates(&completion, &private).unwrap();
        assert_eq!(eliminated.len(), 1);
        assert_alpha_ac(
            &simplify(eliminated[0].clone()),
            "forall V1, V2 (q(V1, V2) <-> (V1 = a or V1 = b) and (V2 = a or V2 = b))",
        );
    }

    #[test]
    fn constraints_are_negated_closures() {
        let program = parse_program(":- p(X).").unwrap();
        let completion = first_order_completion(
            &program,
            &BTreeSet::new(),
            &BTreeSet::from([Predicate::new("p", 1)]),
        )
        .unwrap();
        assert_eq!(completion.definitions.len(), 1);
        assert_alpha_ac(
            &completion.definitions[0].formula(),
            "forall V1 (p(V1) <-> #false)",
        );
        assert_eq!(completion.constraints.len(), 1);
        assert_alpha_ac(
            &simplify(completion.constraints[0].clone()),
            "not exists X1 (p(X1))",
        );
    }

    #[test]
    fn input_symbols_must_not_be_defined() {
        let program = parse_program("father(a,b).").unwrap();
        let err = first_order_completion(
            &program,
            &BTreeSet::from([Predicate::new("father", 2)]),
            &BTreeSet::new(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            CompletionError::InputSymbolInHead(Predicate::new("father", 2))
        );
    }

    #[test]
    fn recursive_private_definitions_cannot_be_eliminated() {
        let program = parse_program("p(X) :- p(X). q(X) :- p(X).").unwrap();
        let completion = first_order_completion(
            &program,
            &BTreeSet::new(),
            &BTreeSet::from([Predicate::new("q", 1)]),
        )
        .unwrap();
        let private = BTreeSet::from([Predicate::new("p", 1)]);
        assert_eq!(
            eliminate_private_predicates(&completion, &private),
            Err(UnfoldError::Recursive(Predicate::new("p", 1)))
        );
    }
}
