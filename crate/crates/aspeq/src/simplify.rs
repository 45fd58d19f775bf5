//! Equivalence-preserving simplification of two-sorted formulas.
//!
//! The rewrites are applied innermost-first and repeated until a fixpoint:
//! truth-constant absorption, decidable comparisons, substitution of
//! variables defined by an equality, restriction of general quantifiers to
//! the integer sort when an equality forces it, pruning of vacuous
//! quantifiers, and re-association of `and`/`or` chains. Every rewrite
//! preserves truth in all standard interpretations (nonempty domains).

use std::collections::BTreeSet;

use crate::syntax::asp::PrecomputedTerm;
use crate::syntax::fol::{Connective, FolTerm, Formula, Quantifier, Sort, Variable};
use crate::syntax::Relation;

pub fn simplify(formula: Formula) -> Formula {
    let mut current = formula;
    for _ in 0..64 {
        let next = simplify_once(current.clone());
        if next == current {
            return next;
        }
        current = next;
    }
    current
}

fn simplify_once(formula: Formula) -> Formula {
    // Quantifier restriction must run before witness substitution: once a
    // rule variable is re-sorted to integer, an equality with a general
    // variable no longer eliminates it, which keeps bindings like `X = N1`
    // in place instead of collapsing them the other way around.
    formula
        .apply(&mut fold_ground_arithmetic)
        .apply(&mut decide_comparisons)
        .apply(&mut simplify_truth_constants)
        .apply(&mut restrict_quantifier_domain)
        .apply(&mut substitute_defined_variables)
        .apply(&mut prune_quantifiers)
        .apply(&mut flatten_connectives)
}

/// Evaluates variable-free arithmetic subterms to numerals.
fn fold_term(term: &FolTerm) -> FolTerm {
    match term {
        FolTerm::Constant(_) | FolTerm::Variable(_) => term.clone(),
        FolTerm::Negative(t) => {
            let inner = fold_term(t);
            match inner {
                FolTerm::Constant(PrecomputedTerm::Numeral(n)) => match n.checked_neg() {
                    Some(m) => FolTerm::numeral(m),
                    None => FolTerm::Negative(inner.into()),
                },
                _ => FolTerm::Negative(inner.into()),
            }
        }
        FolTerm::Arith(op, l, r) => {
            let lf = fold_term(l);
            let rf = fold_term(r);
            if let (
                FolTerm::Constant(PrecomputedTerm::Numeral(m)),
                FolTerm::Constant(PrecomputedTerm::Numeral(n)),
            ) = (&lf, &rf)
            {
                if let Some(value) = op.apply(*m, *n) {
                    return FolTerm::numeral(value);
                }
            }
            FolTerm::Arith(*op, lf.into(), rf.into())
        }
    }
}

pub fn fold_ground_arithmetic(formula: Formula) -> Formula {
    match formula {
        Formula::Atom(a) => Formula::Atom(crate::syntax::fol::FolAtom {
            predicate: a.predicate,
            terms: a.terms.iter().map(fold_term).collect(),
        }),
        Formula::Comparison(l, rel, r) => Formula::Comparison(fold_term(&l), rel, fold_term(&r)),
        other => other,
    }
}

/// Decides comparisons that hold or fail in every standard interpretation:
/// reflexive comparisons between identical terms, and comparisons between
/// ground terms free of symbolic constants (which could be placeholders).
pub fn decide_comparisons(formula: Formula) -> Formula {
    let Formula::Comparison(l, rel, r) = &formula else {
        return formula;
    };
    if l == r {
        return match rel {
            Relation::Equal | Relation::LessEqual | Relation::GreaterEqual => Formula::Truth,
            Relation::NotEqual | Relation::Less | Relation::Greater => Formula::Falsity,
        };
    }
    let decidable = |t: &FolTerm| match t {
        FolTerm::Constant(PrecomputedTerm::Symbol(_)) => None,
        FolTerm::Constant(c) => Some(c.clone()),
        _ => None,
    };
    match (decidable(l), decidable(r)) {
        (Some(lv), Some(rv)) => {
            if rel.holds(&lv, &rv) {
                Formula::Truth
            } else {
                Formula::Falsity
            }
        }
        _ => formula,
    }
}

pub fn simplify_truth_constants(formula: Formula) -> Formula {
    match formula {
        Formula::Not(inner) => match *inner {
            Formula::Truth => Formula::Falsity,
            Formula::Falsity => Formula::Truth,
            Formula::Not(f) => *f,
            other => Formula::not(other),
        },
        Formula::Binary(connective, lhs, rhs) => {
            let lhs = *lhs;
            let rhs = *rhs;
            match connective {
                Connective::And => match (lhs, rhs) {
                    (Formula::Truth, f) | (f, Formula::Truth) => f,
                    (Formula::Falsity, _) | (_, Formula::Falsity) => Formula::Falsity,
                    (l, r) if l == r => l,
                    (l, r) => Formula::and(l, r),
                },
                Connective::Or => match (lhs, rhs) {
                    (Formula::Falsity, f) | (f, Formula::Falsity) => f,
                    (Formula::Truth, _) | (_, Formula::Truth) => Formula::Truth,
                    (l, r) if l == r => l,
                    (l, r) => Formula::or(l, r),
                },
                Connective::Implies => match (lhs, rhs) {
                    (Formula::Truth, f) => f,
                    (Formula::Falsity, _) => Formula::Truth,
                    (_, Formula::Truth) => Formula::Truth,
                    (f, Formula::Falsity) => Formula::not(f),
                    (l, r) => Formula::implies(l, r),
                },
                Connective::Iff => match (lhs, rhs) {
                    (Formula::Truth, f) | (f, Formula::Truth) => f,
                    (Formula::Falsity, f) | (f, Formula::Falsity) => Formula::not(f),
                    (l, r) if l == r => Formula::Truth,
                    (l, r) => Formula::iff(l, r),
                },
            }
        }
        // Domains of both sorts are nonempty, so quantifying over a
        // truth constant is vacuous.
        Formula::Quantified(_, _, body) if matches!(*body, Formula::Truth | Formula::Falsity) => {
            *body
        }
        other => other,
    }
}

/// In `exists X (... and X = t and ...)`, replaces `X` by `t` when sorts
/// permit; the defining conjunct then collapses to `t = t`.
pub fn substitute_defined_variables(formula: Formula) -> Formula {
    let Formula::Quantified(Quantifier::Exists, variables, body) = &formula else {
        return formula;
    };
    for var in variables {
        if let Some(term) = find_definition(var, body) {
            let new_body = body.substitute(var, &term);
            return Formula::Quantified(Quantifier::Exists, variables.clone(), new_body.into());
        }
    }
    formula
}

fn find_definition(var: &Variable, body: &Formula) -> Option<FolTerm> {
    for conjunct in body.conjuncts() {
        let Formula::Comparison(l, Relation::Equal, r) = conjunct else {
            continue;
        };
        for (side, term) in [(l, r), (r, l)] {
            if let FolTerm::Variable(v) = side {
                if v == var && term.sort().subsort_of(var.sort) && !term.variables().contains(var) {
                    return Some(term.clone());
                }
            }
        }
    }
    None
}

/// A general variable that is equated with an integer-sorted term inside a
/// nested existential conjunct can only take numeral values, so its
/// quantifier may be restricted to the integer sort.
pub fn restrict_quantifier_domain(formula: Formula) -> Formula {
    match &formula {
        Formula::Quantified(Quantifier::Exists, variables, body) => {
            if let Some((vars, old, fresh)) = find_restriction(variables, body) {
                let new_body = body.substitute(&old, &FolTerm::Variable(fresh));
                return Formula::Quantified(Quantifier::Exists, vars, new_body.into());
            }
            formula
        }
        // In `forall X (lhs -> rhs)`, an integrality constraint in the
        // hypothesis makes the non-integer instances vacuous.
        Formula::Quantified(Quantifier::Forall, variables, body) => {
            if let Formula::Binary(Connective::Implies, lhs, rhs) = &**body {
                if let Some((vars, old, fresh)) = find_restriction(variables, lhs) {
                    let new_lhs = lhs.substitute(&old, &FolTerm::Variable(fresh.clone()));
                    let new_rhs = rhs.substitute(&old, &FolTerm::Variable(fresh));
                    return Formula::Quantified(
                        Quantifier::Forall,
                        vars,
                        Formula::implies(new_lhs, new_rhs).into(),
                    );
                }
            }
            formula
        }
        _ => formula,
    }
}

/// Finds a general variable of `variables` that some (possibly nested)
/// existential conjunct of `body` equates with an integer-sorted term, and
/// returns the updated variable list together with the old variable and its
/// fresh integer replacement.
fn find_restriction(
    variables: &[Variable],
    body: &Formula,
) -> Option<(Vec<Variable>, Variable, Variable)> {
    let forced = forced_integer_variables(body);
    for (index, var) in variables.iter().enumerate() {
        if var.sort != Sort::General || !forced.contains(var) {
            continue;
        }
        let taken: BTreeSet<String> = body
            .variables()
            .into_iter()
            .map(|v| v.name)
            .chain(variables.iter().map(|v| v.name.clone()))
            .collect();
        let fresh = Variable {
            name: fresh_integer_name(&taken),
            sort: Sort::Integer,
        };
        let mut vars = variables.to_vec();
        vars[index] = fresh.clone();
        return Some((vars, var.clone(), fresh));
    }
    None
}

/// General variables equated with an integer-sorted term by some conjunct,
/// directly or inside nested existentials whose own variables do not shadow
/// them. Forcing propagates through chains of equalities between general
/// variables: in `X = Z and Z = N`, both `Z` and `X` can only take numeral
/// values.
fn forced_integer_variables(body: &Formula) -> BTreeSet<Variable> {
    let mut forced = BTreeSet::new();
    let mut pairs: Vec<(Variable, Variable)> = Vec::new();
    for conjunct in body.conjuncts() {
        match conjunct {
            Formula::Comparison(l, Relation::Equal, r) => {
                for (side, term) in [(l, r), (r, l)] {
                    if let FolTerm::Variable(v) = side {
                        if v.sort == Sort::General && term.sort() == Sort::Integer {
                            forced.insert(v.clone());
                        }
                    }
                }
                if let (FolTerm::Variable(v), FolTerm::Variable(w)) = (l, r) {
                    if v.sort == Sort::General && w.sort == Sort::General {
                        pairs.push((v.clone(), w.clone()));
                    }
                }
            }
            Formula::Quantified(Quantifier::Exists, inner_vars, inner_body) => {
                let inner = forced_integer_variables(inner_body);
                for v in inner {
                    if !inner_vars.contains(&v) {
                        forced.insert(v);
                    }
                }
            }
            _ => (),
        }
    }
    loop {
        let mut changed = false;
        for (v, w) in &pairs {
            if forced.contains(v) && forced.insert(w.clone()) {
                changed = true;
            }
            if forced.contains(w) && forced.insert(v.clone()) {
                changed = true;
            }
        }
        if !changed {
            return forced;
        }
    }
}

fn fresh_integer_name(taken: &BTreeSet<String>) -> String {
    let mut i = 1;
    loop {
        let candidate = format!("N{i}");
        if !taken.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}

/// Drops quantified variables without free occurrences in the body, and the
/// whole quantifier once its variable list is empty.
pub fn prune_quantifiers(formula: Formula) -> Formula {
    match formula {
        Formula::Quantified(q, variables, body) => {
            let free = body.free_variables();
            let variables: Vec<Variable> =
                variables.into_iter().filter(|v| free.contains(v)).collect();
            Formula::quantify(q, variables, *body)
        }
        other => other,
    }
}

/// Rebuilds `and`/`or` chains in canonical left association.
pub fn flatten_connectives(formula: Formula) -> Formula {
    match &formula {
        Formula::Binary(Connective::And, _, _) => {
            let parts: Vec<Formula> = formula.conjuncts().into_iter().cloned().collect();
            Formula::conjoin(parts)
        }
        Formula::Binary(Connective::Or, _, _) => {
            let parts: Vec<Formula> = formula.disjuncts().into_iter().cloned().collect();
            Formula::disjoin(parts)
        }
        _ => formula,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpretation::{evaluate, FiniteInterpretation};
    use crate::parse::fol::parse_formula;
    use crate::syntax::asp::GroundAtom;
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn simp(text: &str) -> Formula {
        simplify(parse_formula(text).unwrap())
    }

    #[test]
    fn truth_constant_absorption() {
        for (src, expected) in [
            ("#true and p", "p"),
            ("p and #true", "p"),
            ("#false or p", "p"),
            ("#true or p", "#true"),
            ("#false and p", "#false"),
            ("not #true", "#false"),
            ("not not p", "p"),
            ("#true -> p", "p"),
            ("p -> #true", "#true"),
            ("#false -> p", "#true"),
            ("p <-> #true", "p"),
            ("p <-> #false", "not p"),
        ] {
            assert_eq!(simp(src), parse_formula(expected).unwrap(), "{src}");
        }
    }

    #[test]
    fn witness_substitution() {
        for (src, expected) in [
            ("exists N (N = 3 and p(N))", "p(3)"),
            ("exists X (X = a and p(X))", "p(a)"),
            ("exists X (a = X and p(X))", "p(a)"),
            ("exists N (N = 3)", "#true"),
            ("exists X Y (X = Y and p(X, Y))", "exists Y (p(Y, Y))"),
        ] {
            assert_eq!(simp(src), parse_formula(expected).unwrap(), "{src}");
        }
    }

    #[test]
    fn integer_variables_keep_their_sort() {
        // N = a does not define the integer N by the general term a.
        let f = simp("exists N (N = a and p(N))");
        assert_eq!(f, parse_formula("exists N (N = a and p(N))").unwrap());
    }

    #[test]
    fn trivial_comparisons_are_decided() {
        for (src, expected) in [
            ("X = X", "#true"),
            ("X < X", "#false"),
            ("2 < 3", "#true"),
            ("2 + 2 = 4", "#true"),
            ("inf < 0 and 0 < sup", "#true"),
            ("a = 5", "a = 5"), // `a` may be a placeholder
            ("a = b", "a = b"),
            ("a = a", "#true"),
        ] {
            assert_eq!(simp(src), parse_formula(expected).unwrap(), "{src}");
        }
    }

    #[test]
    fn vacuous_quantifiers_are_pruned() {
        for (src, expected) in [
            ("exists X (p)", "p"),
            ("forall X Y (p(X))", "forall X (p(X))"),
            ("forall X #true", "#true"),
        ] {
            assert_eq!(simp(src), parse_formula(expected).unwrap(), "{src}");
        }
    }

    #[test]
    fn quantifier_domains_are_restricted() {
        // X is equated with an integer variable inside a nested existential,
        // so the outer quantifier can move to the integer sort.
        let f = simp("exists X (exists N (p(N) and X = N) and q(X))");
        let expected = parse_formula("exists N1 (p(N1) and q(N1))").unwrap();
        assert_eq!(f, expected);

        let f = simp("forall X (exists N (p(N) and X = N) -> q(X))");
        let expected = parse_formula("forall N1 (p(N1) -> q(N1))").unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn unfolded_definitions_collapse_onto_head_variables() {
        let f = simp(
            "forall V1, V2 (q(V1, V2) <-> exists X Y ((X = a or X = b) and (Y = a or Y = b) \
             and V1 = X and V2 = Y))",
        );
        let expected = parse_formula(
            "forall V1, V2 (q(V1, V2) <-> (V1 = a or V1 = b) and (V2 = a or V2 = b))",
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    // Random formulas over a small vocabulary, evaluated against random
    // finite interpretations: simplification must preserve truth.
    //
    // The finite windows must cover every value a term of the formula can
    // take, otherwise the truncation itself changes the meaning of
    // quantifiers. Numeral leaves stay within [-4, 4] and arithmetic is
    // only generated over numeral leaves, so a [-16, 16] window with a
    // matching universe is closed under everything the formulas compute.

    fn term_strategy(sort: Sort) -> BoxedStrategy<FolTerm> {
        let numeral = (-4i64..5).prop_map(FolTerm::numeral);
        let int_term = prop_oneof![
            numeral.clone(),
            prop_oneof![Just("N"), Just("M")].prop_map(|n| FolTerm::Variable(Variable::integer(n))),
            (numeral.clone(), numeral.clone()).prop_map(|(l, r)| {
                FolTerm::Arith(crate::syntax::ArithOp::Multiply, l.into(), r.into())
            }),
            (numeral.clone(), numeral).prop_map(|(l, r)| {
                FolTerm::Arith(crate::syntax::ArithOp::Add, l.into(), r.into())
            }),
        ];
        match sort {
            Sort::Integer => int_term.boxed(),
            Sort::General => prop_oneof![
                int_term,
                prop_oneof![Just("a"), Just("b")].prop_map(FolTerm::symbol),
                Just(FolTerm::Constant(PrecomputedTerm::Infimum)),
                Just(FolTerm::Constant(PrecomputedTerm::Supremum)),
                prop_oneof![Just("X"), Just("Y")]
                    .prop_map(|n| FolTerm::Variable(Variable::general(n))),
            ]
            .boxed(),
        }
    }

    fn formula_strategy() -> BoxedStrategy<Formula> {
        let leaf = prop_oneof![
            Just(Formula::Truth),
            Just(Formula::Falsity),
            term_strategy(Sort::General).prop_map(|t| Formula::atom("p", vec![t])),
            (term_strategy(Sort::General), term_strategy(Sort::General))
                .prop_map(|(l, r)| { Formula::Comparison(l, Relation::Less, r) }),
            (term_strategy(Sort::General), term_strategy(Sort::General))
                .prop_map(|(l, r)| { Formula::Comparison(l, Relation::Equal, r) }),
        ];
        leaf.prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::iff(l, r)),
                inner.clone().prop_map(|f| Formula::Quantified(
                    Quantifier::Exists,
                    vec![Variable::general("X"), Variable::integer("N")],
                    f.into()
                )),
                inner.clone().prop_map(|f| Formula::Quantified(
                    Quantifier::Forall,
                    vec![Variable::general("Y"), Variable::integer("M")],
                    f.into()
                )),
            ]
        })
        .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn simplification_preserves_truth(
            formula in formula_strategy(),
            true_atoms in proptest::collection::btree_set(-3i64..4, 0..5),
            placeholder_a in prop_oneof![
                Just(PrecomputedTerm::Numeral(1)),
                Just(PrecomputedTerm::symbol("c")),
            ],
        ) {
            // Close the formula so that free variables do not fail evaluation.
            let free: Vec<Variable> = formula.free_variables().into_iter().collect();
            let closed = Formula::quantify(Quantifier::Forall, free, formula);

            let mut universe: BTreeSet<PrecomputedTerm> =
                (-16i64..=16).map(PrecomputedTerm::Numeral).collect();
            universe.insert(PrecomputedTerm::symbol("a"));
            universe.insert(PrecomputedTerm::symbol("b"));
            universe.insert(PrecomputedTerm::symbol("c"));
            universe.insert(PrecomputedTerm::Infimum);
            universe.insert(PrecomputedTerm::Supremum);
            let interp = FiniteInterpretation {
                valuation: BTreeMap::from([("a".to_string(), placeholder_a)]),
                atoms: true_atoms
                    .into_iter()
                    .map(|n| GroundAtom::new("p", vec![PrecomputedTerm::Numeral(n)]))
                    .collect(),
                universe: Some(universe),
                int_range: Some((-16, 16)),
            };

            let before = evaluate(&closed, &interp).unwrap();
            let after = evaluate(&simplify(closed), &interp).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
