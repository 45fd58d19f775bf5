//! Background theory: first-order axioms satisfied by every interpretation
//! that is standard for the given placeholders.
//!
//! The comparison symbols form a linear order on the general sort with
//! `inf` at the bottom and `sup` at the top; numerals sit strictly between
//! them and below all symbolic constants, and symbolic constants are
//! ordered lexicographically. Placeholders denote unknown non-placeholder
//! terms, so no axiom pins their value or order.

use std::collections::BTreeSet;

use crate::syntax::asp::PrecomputedTerm;
use crate::syntax::fol::{FolTerm, Formula, Quantifier, SignatureSlice, Variable};
use crate::syntax::Relation;

fn forall(vars: Vec<Variable>, body: Formula) -> Formula {
    Formula::quantify(Quantifier::Forall, vars, body)
}

fn cmp(l: &Variable, rel: Relation, r: &Variable) -> Formula {
    Formula::Comparison(
        FolTerm::Variable(l.clone()),
        rel,
        FolTerm::Variable(r.clone()),
    )
}

/// Axioms of the background theory restricted to the constants that occur
/// in the proof tasks. All of them are universal sentences, so they hold in
/// every finite restriction of a standard interpretation as well.
pub fn theory_axioms(placeholders: &BTreeSet<String>, signature: &SignatureSlice) -> Vec<Formula> {
    let x = Variable::general("X");
    let y = Variable::general("Y");
    let z = Variable::general("Z");
    let n = Variable::integer("N");

    let mut axioms = vec![
        // linear order
        forall(vec![x.clone()], Formula::not(cmp(&x, Relation::Less, &x))),
        forall(
            vec![x.clone(), y.clone(), z.clone()],
            Formula::implies(
                Formula::and(cmp(&x, Relation::Less, &y), cmp(&y, Relation::Less, &z)),
                cmp(&x, Relation::Less, &z),
            ),
        ),
        forall(
            vec![x.clone(), y.clone()],
            Formula::or(
                Formula::or(cmp(&x, Relation::Less, &y), cmp(&x, Relation::Equal, &y)),
                cmp(&y, Relation::Less, &x),
            ),
        ),
        // derived comparisons
        forall(
            vec![x.clone(), y.clone()],
            Formula::iff(
                cmp(&x, Relation::LessEqual, &y),
                Formula::or(cmp(&x, Relation::Less, &y), cmp(&x, Relation::Equal, &y)),
            ),
        ),
        forall(
            vec![x.clone(), y.clone()],
            Formula::iff(cmp(&x, Relation::Greater, &y), cmp(&y, Relation::Less, &x)),
        ),
        forall(
            vec![x.clone(), y.clone()],
            Formula::iff(
                cmp(&x, Relation::GreaterEqual, &y),
                cmp(&y, Relation::LessEqual, &x),
            ),
        ),
        forall(
            vec![x.clone(), y.clone()],
            Formula::iff(
                cmp(&x, Relation::NotEqual, &y),
                Formula::not(cmp(&x, Relation::Equal, &y)),
            ),
        ),
    ];

    // extremes
    let inf = FolTerm::Constant(PrecomputedTerm::Infimum);
    let sup = FolTerm::Constant(PrecomputedTerm::Supremum);
    axioms.push(forall(
        vec![x.clone()],
        Formula::Comparison(
            inf.clone(),
            Relation::LessEqual,
            FolTerm::Variable(x.clone()),
        ),
    ));
    axioms.push(forall(
        vec![x.clone()],
        Formula::Comparison(
            FolTerm::Variable(x.clone()),
            Relation::LessEqual,
            sup.clone(),
        ),
    ));
    axioms.push(forall(
        vec![n.clone()],
        Formula::and(
            Formula::Comparison(inf.clone(), Relation::Less, FolTerm::Variable(n.clone())),
            Formula::Comparison(FolTerm::Variable(n.clone()), Relation::Less, sup.clone()),
        ),
    ));

    // Fixed (non-placeholder) symbolic constants sit above all numerals,
    // strictly between the extremes, and in lexicographic order.
    let fixed: Vec<&PrecomputedTerm> = signature
        .constants
        .iter()
        .filter(|c| match c {
            PrecomputedTerm::Symbol(s) => !placeholders.contains(s),
            _ => false,
        })
        .collect();
    for constant in &fixed {
        let c = FolTerm::Constant((*constant).clone());
        axioms.push(forall(
            vec![n.clone()],
            Formula::Comparison(FolTerm::Variable(n.clone()), Relation::Less, c.clone()),
        ));
        axioms.push(Formula::Comparison(inf.clone(), Relation::Less, c.clone()));
        axioms.push(Formula::Comparison(c, Relation::Less, sup.clone()));
    }
    for pair in fixed.windows(2) {
        axioms.push(Formula::Comparison(
            FolTerm::Constant(pair[0].clone()),
            Relation::Less,
            FolTerm::Constant(pair[1].clone()),
        ));
    }

    axioms
}
