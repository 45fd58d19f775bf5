//! Desk-scale grounding: rule variables range over a finite universe of
//! precomputed terms, arithmetic and intervals are evaluated away, and
//! comparisons between ground terms are decided and dropped.
//!
//! Values of head terms may fall outside the universe; the resulting atoms
//! are kept (they are derivable facts) but never feed further instantiation.
//! The universe is therefore a window-style approximation chosen by the
//! caller, exact whenever all relevant values fall inside it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::asp::{BodyElement, GroundAtom, Head, PrecomputedTerm, Program, Sign, Term};

/// Values of a variable-free term. Arithmetic over non-numerals and
/// reversed intervals have no values.
pub fn eval_ground_term(term: &Term) -> BTreeSet<PrecomputedTerm> {
    match term {
        Term::Precomputed(c) => BTreeSet::from([c.clone()]),
        Term::Variable(_) => BTreeSet::new(),
        Term::Negative(inner) => eval_ground_term(inner)
            .into_iter()
            .filter_map(|v| v.as_numeral().and_then(i64::checked_neg))
            .map(PrecomputedTerm::Numeral)
            .collect(),
        Term::BinaryOperation(op, lhs, rhs) => {
            let left = eval_ground_term(lhs);
            let right = eval_ground_term(rhs);
            let mut out = BTreeSet::new();
            for l in &left {
                for r in &right {
                    if let (Some(m), Some(n)) = (l.as_numeral(), r.as_numeral()) {
                        if let Some(value) = op.apply(m, n) {
                            out.insert(PrecomputedTerm::Numeral(value));
                        }
                    }
                }
            }
            out
        }
        Term::Interval(lhs, rhs) => {
            let left = eval_ground_term(lhs);
            let right = eval_ground_term(rhs);
            let mut out = BTreeSet::new();
            for l in &left {
                for r in &right {
                    if let (Some(m), Some(n)) = (l.as_numeral(), r.as_numeral()) {
                        for k in m..=n {
                            out.insert(PrecomputedTerm::Numeral(k));
                        }
                    }
                }
            }
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroundHead {
    Atom(GroundAtom),
    Choice(GroundAtom),
    Constraint,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundRule {
    pub head: GroundHead,
    pub positive: Vec<GroundAtom>,
    pub negative: Vec<GroundAtom>,
    pub double_negative: Vec<GroundAtom>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    /// Every atom occurring in a head or body.
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            match &rule.head {
                GroundHead::Atom(a) | GroundHead::Choice(a) => {
                    out.insert(a.clone());
                }
                GroundHead::Constraint => (),
            }
            for a in rule
                .positive
                .iter()
                .chain(&rule.negative)
                .chain(&rule.double_negative)
            {
                out.insert(a.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroundError {
    #[error("grounding exceeds the cap of {0} rules")]
    CapExceeded(usize),
}

/// All instantiations of the program's rules with variables ranging over
/// `universe`.
pub fn ground(
    program: &Program,
    universe: &BTreeSet<PrecomputedTerm>,
    max_rules: usize,
) -> Result<GroundProgram, GroundError> {
    let universe: Vec<PrecomputedTerm> = universe.iter().cloned().collect();
    let mut rules = BTreeSet::new();
    for rule in &program.rules {
        let variables = rule.variables();
        let mut assignment = Vec::new();
        instantiate(
            rule,
            &variables,
            &universe,
            &mut assignment,
            &mut rules,
            max_rules,
        )?;
    }
    Ok(GroundProgram {
        rules: rules.into_iter().collect(),
    })
}

fn instantiate(
    rule: &crate::syntax::asp::Rule,
    variables: &[String],
    universe: &[PrecomputedTerm],
    assignment: &mut Vec<(String, PrecomputedTerm)>,
    rules: &mut BTreeSet<GroundRule>,
    max_rules: usize,
) -> Result<(), GroundError> {
    if assignment.len() < variables.len() {
        for value in universe {
            assignment.push((variables[assignment.len()].clone(), value.clone()));
            instantiate(rule, variables, universe, assignment, rules, max_rules)?;
            assignment.pop();
        }
        return Ok(());
    }

    let bindings: std::collections::BTreeMap<String, PrecomputedTerm> =
        assignment.iter().cloned().collect();

    // Comparisons hold when some pair of values of the two sides is in the
    // relation; failing instances vanish.
    let mut literals = Vec::new();
    for element in &rule.body {
        match element {
            BodyElement::Comparison(c) => {
                let lhs = eval_ground_term(&c.lhs.substitute_variables(&bindings));
                let rhs = eval_ground_term(&c.rhs.substitute_variables(&bindings));
                let holds = lhs
                    .iter()
                    .any(|l| rhs.iter().any(|r| c.relation.holds(&l, &r)));
                if !holds {
                    return Ok(());
                }
            }
            BodyElement::Literal(l) => literals.push(l),
        }
    }

    // Each literal stands for any one of the ground atoms its argument
    // values produce; instances multiply accordingly.
    let mut bodies: Vec<(Vec<GroundAtom>, Vec<GroundAtom>, Vec<GroundAtom>)> =
        vec![(Vec::new(), Vec::new(), Vec::new())];
    for literal in literals {
        let choices = atom_instances(&literal.atom, &bindings);
        if choices.is_empty() {
            return Ok(());
        }
        let mut extended = Vec::with_capacity(bodies.len() * choices.len());
        for body in &bodies {
            for choice in &choices {
                let mut next = body.clone();
                match literal.sign {
                    Sign::Positive => next.0.push(choice.clone()),
                    Sign::Negative => next.1.push(choice.clone()),
                    Sign::DoubleNegative => next.2.push(choice.clone()),
                }
                extended.push(next);
            }
        }
        bodies = extended;
    }

    let heads: Vec<GroundHead> = match &rule.head {
        Head::Constraint => vec![GroundHead::Constraint],
        Head::Basic(atom) => atom_instances(atom, &bindings)
            .into_iter()
            .map(GroundHead::Atom)
            .collect(),
        Head::Choice(atom) => atom_instances(atom, &bindings)
            .into_iter()
            .map(GroundHead::Choice)
            .collect(),
    };
    // A head atom with no values makes the instance vacuous.
    if heads.is_empty() {
        return Ok(());
    }

    for head in heads {
        for (positive, negative, double_negative) in &bodies {
            rules.insert(GroundRule {
                head: head.clone(),
                positive: positive.clone(),
                negative: negative.clone(),
                double_negative: double_negative.clone(),
            });
            if rules.len() > max_rules {
                return Err(GroundError::CapExceeded(max_rules));
            }
        }
    }
    Ok(())
}

/// The ground atoms an atom stands for under the bindings: the cartesian
/// product of the value sets of its arguments.
fn atom_instances(
    atom: &crate::syntax::asp::Atom,
    bindings: &std::collections::BTreeMap<String, PrecomputedTerm>,
) -> Vec<GroundAtom> {
    let mut tuples: Vec<Vec<PrecomputedTerm>> = vec![Vec::new()];
    for term in &atom.terms {
        let values = eval_ground_term(&term.substitute_variables(bindings));
        if values.is_empty() {
            return Vec::new();
        }
        let mut extended = Vec::with_capacity(tuples.len() * values.len());
        for tuple in &tuples {
            for value in &values {
                let mut next = tuple.clone();
                next.push(value.clone());
                extended.push(next);
            }
        }
        tuples = extended;
    }
    tuples
        .into_iter()
        .map(|terms| GroundAtom::new(atom.predicate.clone(), terms))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::asp::parse_program;

    fn numerals(range: std::ops::RangeInclusive<i64>) -> BTreeSet<PrecomputedTerm> {
        range.map(PrecomputedTerm::Numeral).collect()
    }

    #[test]
    fn ground_term_values() {
        let term = |text: &str| {
            let program = parse_program(&format!("p({text}).")).unwrap();
            match &program.rules[0].head {
                Head::Basic(atom) => atom.terms[0].clone(),
                _ => unreachable!(),
            }
        };
        assert_eq!(eval_ground_term(&term("2..4")), numerals(2..=4));
        assert_eq!(
            eval_ground_term(&term("3*4")),
            BTreeSet::from([PrecomputedTerm::Numeral(12)])
        );
        assert_eq!(eval_ground_term(&term("c+1")), BTreeSet::new());
        assert_eq!(eval_ground_term(&term("5..2")), BTreeSet::new());
        assert_eq!(eval_ground_term(&term("1..c")), BTreeSet::new());
        assert_eq!(
            eval_ground_term(&term("-(2+3)")),
            BTreeSet::from([PrecomputedTerm::Numeral(-5)])
        );
        assert_eq!(
            eval_ground_term(&term("(1..3)*2")),
            BTreeSet::from([
                PrecomputedTerm::Numeral(2),
                PrecomputedTerm::Numeral(4),
                PrecomputedTerm::Numeral(6),
            ])
        );
        assert_eq!(
            eval_ground_term(&term("inf")),
            BTreeSet::from([PrecomputedTerm::Infimum])
        );
    }

    #[test]
    fn empty_program_grounds_to_nothing() {
        let gp = ground(&parse_program("").unwrap(), &BTreeSet::new(), 1000).unwrap();
        assert!(gp.rules.is_empty());
    }

    #[test]
    fn comparisons_filter_instances() {
        let program = parse_program("q(X) :- X = 1..2.").unwrap();
        let gp = ground(&program, &numerals(0..=4), 1000).unwrap();
        let heads: BTreeSet<GroundAtom> = gp.atoms();
        assert_eq!(
            heads,
            BTreeSet::from([
                GroundAtom::new("q", vec![PrecomputedTerm::Numeral(1)]),
                GroundAtom::new("q", vec![PrecomputedTerm::Numeral(2)]),
            ])
        );
    }

    #[test]
    fn head_values_may_leave_the_universe() {
        let program = parse_program("composite(I*J) :- I > 1, J > 1.").unwrap();
        let gp = ground(&program, &numerals(0..=4), 10_000).unwrap();
        // 3 * 4 = 12 is derivable even though 12 is outside the universe.
        assert!(gp.atoms().contains(&GroundAtom::new(
            "composite",
            vec![PrecomputedTerm::Numeral(12)]
        )));
    }

    #[test]
    fn safe_composite_heads_cover_factor_products() {
        let program = parse_program("composite(I*J) :- I = 2..15, J = 2..15.").unwrap();
        let gp = ground(&program, &numerals(0..=15), 200_000).unwrap();
        let atoms = gp.atoms();
        for (i, j) in [(2, 5), (3, 5), (2, 7), (13, 15)] {
            assert!(
                atoms.contains(&GroundAtom::new(
                    "composite",
                    vec![PrecomputedTerm::Numeral(i * j)]
                )),
                "composite({}) missing",
                i * j
            );
        }
        // 1 is not a product of factors in [2, 15]
        assert!(!atoms.contains(&GroundAtom::new(
            "composite",
            vec![PrecomputedTerm::Numeral(1)]
        )));
    }

    #[test]
    fn body_intervals_expand_existentially() {
        let program = parse_program("q :- p(1..3).").unwrap();
        let gp = ground(&program, &BTreeSet::new(), 1000).unwrap();
        assert_eq!(gp.rules.len(), 3);
        for rule in &gp.rules {
            assert_eq!(rule.positive.len(), 1);
        }
    }

    #[test]
    fn negative_literals_expand_existentially_too() {
        let program = parse_program("q :- not p(1..2).").unwrap();
        let gp = ground(&program, &BTreeSet::new(), 1000).unwrap();
        assert_eq!(gp.rules.len(), 2);
        for rule in &gp.rules {
            assert_eq!(rule.negative.len(), 1);
        }
    }

    #[test]
    fn choice_heads_split() {
        let program = parse_program("{p(1..2)} :- q.").unwrap();
        let gp = ground(&program, &BTreeSet::new(), 1000).unwrap();
        assert_eq!(gp.rules.len(), 2);
        assert!(gp
            .rules
            .iter()
            .all(|r| matches!(r.head, GroundHead::Choice(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let program = parse_program("p(X, Y) :- q(X), q(Y).").unwrap();
        let err = ground(&program, &numerals(0..=50), 100).unwrap_err();
        assert_eq!(err, GroundError::CapExceeded(100));
    }
}
