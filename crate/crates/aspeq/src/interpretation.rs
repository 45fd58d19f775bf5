//! Evaluation of two-sorted formulas in finite restrictions of standard
//! interpretations.
//!
//! A standard interpretation fixes the universe of all precomputed terms,
//! interprets non-placeholder terms as themselves, placeholders through a
//! valuation, arithmetic as usual, comparisons through the total order on
//! precomputed terms, and predicates through a set of true ground atoms.
//! The true universe is infinite, so quantifiers are evaluated over a
//! caller-supplied finite sub-universe (general sort) and integer window
//! (integer sort).

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::asp::{GroundAtom, PrecomputedTerm};
use crate::syntax::fol::{Connective, FolTerm, Formula, Quantifier, Sort, Variable};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteInterpretation {
    /// Values of placeholders; all other symbolic constants denote themselves.
    pub valuation: BTreeMap<String, PrecomputedTerm>,
    /// The precomputed atoms that are true.
    pub atoms: BTreeSet<GroundAtom>,
    /// Range of general-sorted quantifiers.
    pub universe: Option<BTreeSet<PrecomputedTerm>>,
    /// Inclusive range of integer-sorted quantifiers.
    pub int_range: Option<(i64, i64)>,
}

impl FiniteInterpretation {
    pub fn with_universe(mut self, universe: BTreeSet<PrecomputedTerm>) -> Self {
        self.universe = Some(universe);
        self
    }

    pub fn with_int_range(mut self, lo: i64, hi: i64) -> Self {
        self.int_range = Some((lo, hi));
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbounded quantifier: no finite range configured for variable `{0}`")]
    UnboundedQuantifier(String),
    #[error("ill-sorted term: arithmetic applied to non-integer value `{0}`")]
    IllSorted(PrecomputedTerm),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

type Env = BTreeMap<Variable, PrecomputedTerm>;

pub fn evaluate(formula: &Formula, interp: &FiniteInterpretation) -> Result<bool, EvalError> {
    evaluate_in_env(formula, interp, &mut Env::new())
}

fn evaluate_term(
    term: &FolTerm,
    interp: &FiniteInterpretation,
    env: &Env,
) -> Result<PrecomputedTerm, EvalError> {
    match term {
        FolTerm::Constant(PrecomputedTerm::Symbol(s)) => Ok(interp
            .valuation
            .get(s)
            .cloned()
            .unwrap_or_else(|| PrecomputedTerm::Symbol(s.clone()))),
        FolTerm::Constant(c) => Ok(c.clone()),
        FolTerm::Variable(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(v.name.clone())),
        FolTerm::Negative(t) => {
            let value = evaluate_term(t, interp, env)?;
            match value.as_numeral() {
                Some(n) => Ok(PrecomputedTerm::Numeral(
                    n.checked_neg().ok_or(EvalError::Overflow)?,
                )),
                None => Err(EvalError::IllSorted(value)),
            }
        }
        FolTerm::Arith(op, l, r) => {
            let lv = evaluate_term(l, interp, env)?;
            let rv = evaluate_term(r, interp, env)?;
            match (lv.as_numeral(), rv.as_numeral()) {
                (Some(m), Some(n)) => Ok(PrecomputedTerm::Numeral(
                    op.apply(m, n).ok_or(EvalError::Overflow)?,
                )),
                (None, _) => Err(EvalError::IllSorted(lv)),
                (_, None) => Err(EvalError::IllSorted(rv)),
            }
        }
    }
}

fn evaluate_in_env(
    formula: &Formula,
    interp: &FiniteInterpretation,
    env: &mut Env,
) -> Result<bool, EvalError> {
    match formula {
        Formula::Truth => Ok(true),
        Formula::Falsity => Ok(false),
        Formula::Atom(atom) => {
            let mut terms = Vec::with_capacity(atom.terms.len());
            for t in &atom.terms {
                terms.push(evaluate_term(t, interp, env)?);
            }
            Ok(interp
                .atoms
                .contains(&GroundAtom::new(atom.predicate.clone(), terms)))
        }
        Formula::Comparison(l, relation, r) => {
            let lv = evaluate_term(l, interp, env)?;
            let rv = evaluate_term(r, interp, env)?;
            Ok(relation.holds(&lv, &rv))
        }
        Formula::Not(f) => Ok(!evaluate_in_env(f, interp, env)?),
        Formula::Binary(connective, lhs, rhs) => {
            let l = evaluate_in_env(lhs, interp, env)?;
            match connective {
                Connective::And if !l => Ok(false),
                Connective::Or if l => Ok(true),
                Connective::Implies if !l => Ok(true),
                Connective::And | Connective::Or | Connective::Implies => {
                    evaluate_in_env(rhs, interp, env)
                }
                Connective::Iff => Ok(l == evaluate_in_env(rhs, interp, env)?),
            }
        }
        Formula::Quantified(quantifier, variables, body) => {
            evaluate_quantified(*quantifier, variables, body, interp, env)
        }
    }
}

fn evaluate_quantified(
    quantifier: Quantifier,
    variables: &[Variable],
    body: &Formula,
    interp: &FiniteInterpretation,
    env: &mut Env,
) -> Result<bool, EvalError> {
    let Some((var, rest)) = variables.split_first() else {
        return evaluate_in_env(body, interp, env);
    };
    let domain: Vec<PrecomputedTerm> = match var.sort {
        Sort::General => interp
            .universe
            .as_ref()
            .ok_or_else(|| EvalError::UnboundedQuantifier(var.name.clone()))?
            .iter()
            .cloned()
            .collect(),
        Sort::Integer => {
            let (lo, hi) = interp
                .int_range
                .ok_or_else(|| EvalError::UnboundedQuantifier(var.name.clone()))?;
            (lo..=hi).map(PrecomputedTerm::Numeral).collect()
        }
    };
    let saved = env.get(var).cloned();
    for value in domain {
        env.insert(var.clone(), value);
        let result = evaluate_quantified(quantifier, rest, body, interp, env)?;
        match quantifier {
            Quantifier::Forall if !result => {
                restore(env, var, saved);
                return Ok(false);
            }
            Quantifier::Exists if result => {
                restore(env, var, saved);
                return Ok(true);
            }
            _ => (),
        }
    }
    restore(env, var, saved);
    Ok(matches!(quantifier, Quantifier::Forall))
}

fn restore(env: &mut Env, var: &Variable, saved: Option<PrecomputedTerm>) {
    match saved {
        Some(value) => {
            env.insert(var.clone(), value);
        }
        None => {
            env.remove(var);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::fol::parse_formula;

    fn primes_interp(a: PrecomputedTerm, b: PrecomputedTerm) -> FiniteInterpretation {
        FiniteInterpretation {
            valuation: BTreeMap::from([("a".to_string(), a), ("b".to_string(), b)]),
            atoms: BTreeSet::new(),
            universe: None,
            int_range: Some((0, 20)),
        }
    }

    #[test]
    fn integrality_assumption_holds_for_numeral_values() {
        let assumption = parse_formula("exists N (a = N) and exists N (b = N)").unwrap();
        let interp = primes_interp(PrecomputedTerm::Numeral(10), PrecomputedTerm::Numeral(15));
        assert_eq!(evaluate(&assumption, &interp), Ok(true));
    }

    #[test]
    fn integrality_assumption_fails_for_symbolic_values() {
        let assumption = parse_formula("exists N (a = N) and exists N (b = N)").unwrap();
        let interp = primes_interp(PrecomputedTerm::symbol("c"), PrecomputedTerm::Numeral(15));
        assert_eq!(evaluate(&assumption, &interp), Ok(false));
    }

    #[test]
    fn atoms_are_looked_up_in_the_input() {
        let interp = FiniteInterpretation {
            valuation: BTreeMap::new(),
            atoms: BTreeSet::from([
                GroundAtom::new(
                    "father",
                    vec![
                        PrecomputedTerm::symbol("jacob"),
                        PrecomputedTerm::symbol("joseph"),
                    ],
                ),
                GroundAtom::new(
                    "mother",
                    vec![
                        PrecomputedTerm::symbol("rachel"),
                        PrecomputedTerm::symbol("joseph"),
                    ],
                ),
                GroundAtom::new("living", vec![PrecomputedTerm::symbol("jacob")]),
                GroundAtom::new("living", vec![PrecomputedTerm::symbol("rachel")]),
                GroundAtom::new("living", vec![PrecomputedTerm::symbol("joseph")]),
            ]),
            universe: None,
            int_range: None,
        };
        assert_eq!(
            evaluate(&parse_formula("living(jacob)").unwrap(), &interp),
            Ok(true)
        );
        assert_eq!(
            evaluate(&parse_formula("living(esau)").unwrap(), &interp),
            Ok(false)
        );
    }

    #[test]
    fn arithmetic_and_comparisons() {
        let interp = FiniteInterpretation::default().with_int_range(0, 5);
        for (text, expected) in [
            ("exists N (N * N = 4 and N > 0)", true),
            ("forall N (N >= 0)", true),
            ("exists N (N + 1 = 0)", false),
            ("3 < 2 + 2", true),
            ("inf < 0", true),
            ("5 < sup", true),
            ("inf < sup", true),
        ] {
            assert_eq!(
                evaluate(&parse_formula(text).unwrap(), &interp),
                Ok(expected),
                "{text}"
            );
        }
    }

    #[test]
    fn numerals_precede_symbolic_constants() {
        let interp = FiniteInterpretation::default();
        assert_eq!(
            evaluate(&parse_formula("5 < abacus").unwrap(), &interp),
            Ok(true)
        );
        assert_eq!(
            evaluate(&parse_formula("abacus < blues").unwrap(), &interp),
            Ok(true)
        );
    }

    #[test]
    fn unbounded_quantifier_is_reported() {
        let interp = FiniteInterpretation::default().with_int_range(0, 1);
        assert_eq!(
            evaluate(&parse_formula("forall X (X = X)").unwrap(), &interp),
            Err(EvalError::UnboundedQuantifier("X".into()))
        );
    }

    #[test]
    fn quantifier_shadowing() {
        let interp = FiniteInterpretation::default().with_int_range(0, 3);
        // The inner N shadows the outer: for every N there is an N equal to 1.
        let f = parse_formula("forall N (exists N (N = 1))").unwrap();
        assert_eq!(evaluate(&f, &interp), Ok(true));
    }
}
