//! Two-sorted first-order formulas over the signature of precomputed terms.
//!
//! The sort `general` ranges over all precomputed terms; its subsort
//! `integer` ranges over numerals. Arithmetic operations take and yield
//! integers; predicate and comparison arguments are general.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::asp::PrecomputedTerm;
use super::{ArithOp, Predicate, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    General,
    Integer,
}

impl Sort {
    /// True if a term of sort `self` may stand where `other` is expected.
    pub fn subsort_of(self, other: Sort) -> bool {
        self == other || (self == Sort::Integer && other == Sort::General)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
}

impl Variable {
    pub fn general(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            sort: Sort::General,
        }
    }

    pub fn integer(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            sort: Sort::Integer,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FolTerm {
    Constant(PrecomputedTerm),
    Variable(Variable),
    Negative(Box<FolTerm>),
    Arith(ArithOp, Box<FolTerm>, Box<FolTerm>),
}

impl FolTerm {
    pub fn numeral(n: i64) -> Self {
        FolTerm::Constant(PrecomputedTerm::Numeral(n))
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        FolTerm::Constant(PrecomputedTerm::symbol(name))
    }

    pub fn var(v: Variable) -> Self {
        FolTerm::Variable(v)
    }

    pub fn sort(&self) -> Sort {
        match self {
            FolTerm::Constant(PrecomputedTerm::Numeral(_)) => Sort::Integer,
            FolTerm::Constant(_) => Sort::General,
            FolTerm::Variable(v) => v.sort,
            FolTerm::Negative(_) | FolTerm::Arith(_, _, _) => Sort::Integer,
        }
    }

    /// Arithmetic may only be applied to integer-sorted subterms.
    pub fn well_sorted(&self) -> bool {
        match self {
            FolTerm::Constant(_) | FolTerm::Variable(_) => true,
            FolTerm::Negative(t) => t.well_sorted() && t.sort() == Sort::Integer,
            FolTerm::Arith(_, l, r) => {
                l.well_sorted()
                    && r.well_sorted()
                    && l.sort() == Sort::Integer
                    && r.sort() == Sort::Integer
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<Variable>) {
        match self {
            FolTerm::Constant(_) => (),
            FolTerm::Variable(v) => {
                out.insert(v.clone());
            }
            FolTerm::Negative(t) => t.collect_variables(out),
            FolTerm::Arith(_, l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<PrecomputedTerm>) {
        match self {
            FolTerm::Constant(c) => {
                out.insert(c.clone());
            }
            FolTerm::Variable(_) => (),
            FolTerm::Negative(t) => t.collect_constants(out),
            FolTerm::Arith(_, l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }

    pub fn substitute(&self, var: &Variable, term: &FolTerm) -> FolTerm {
        match self {
            FolTerm::Constant(_) => self.clone(),
            FolTerm::Variable(v) => {
                if v == var {
                    term.clone()
                } else {
                    self.clone()
                }
            }
            FolTerm::Negative(t) => FolTerm::Negative(t.substitute(var, term).into()),
            FolTerm::Arith(op, l, r) => FolTerm::Arith(
                *op,
                l.substitute(var, term).into(),
                r.substitute(var, term).into(),
            ),
        }
    }

    fn rename_variable(&self, from: &Variable, to: &Variable) -> FolTerm {
        self.substitute(from, &FolTerm::Variable(to.clone()))
    }

    fn precedence(&self) -> u8 {
        match self {
            FolTerm::Constant(_) | FolTerm::Variable(_) => 3,
            FolTerm::Negative(_) => 2,
            FolTerm::Arith(ArithOp::Multiply, _, _) => 2,
            FolTerm::Arith(_, _, _) => 1,
        }
    }
}

impl fmt::Display for FolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, parent: u8, term: &FolTerm) -> fmt::Result {
            if term.precedence() < parent {
                write!(f, "({term})")
            } else {
                write!(f, "{term}")
            }
        }
        match self {
            FolTerm::Constant(c) => write!(f, "{c}"),
            FolTerm::Variable(v) => write!(f, "{v}"),
            FolTerm::Negative(t) => {
                write!(f, "-")?;
                child(f, 3, t)
            }
            FolTerm::Arith(op, l, r) => {
                let prec = self.precedence();
                child(f, prec, l)?;
                write!(f, " {op} ")?;
                child(f, prec + 1, r)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FolAtom {
    pub predicate: String,
    pub terms: Vec<FolTerm>,
}

impl FolAtom {
    pub fn predicate_symbol(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.terms.len())
    }
}

impl fmt::Display for FolAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.terms.is_empty() {
            write!(f, "(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Truth,
    Falsity,
    Atom(FolAtom),
    Comparison(FolTerm, Relation, FolTerm),
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quantified(Quantifier, Vec<Variable>, Box<Formula>),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RenameError {
    #[error("renaming target {0} already occurs in the formula")]
    TargetOccurs(Predicate),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, terms: Vec<FolTerm>) -> Self {
        Formula::Atom(FolAtom {
            predicate: predicate.into(),
            terms,
        })
    }

    // constructor, not an operator on self
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(f.into())
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(Connective::And, lhs.into(), rhs.into())
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(Connective::Or, lhs.into(), rhs.into())
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(Connective::Implies, lhs.into(), rhs.into())
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary(Connective::Iff, lhs.into(), rhs.into())
    }

    /// Left-associated conjunction; `#true` for the empty sequence.
    pub fn conjoin(formulas: impl IntoIterator<Item = Formula>) -> Formula {
        formulas
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Truth)
    }

    /// Left-associated disjunction; `#false` for the empty sequence.
    pub fn disjoin(formulas: impl IntoIterator<Item = Formula>) -> Formula {
        formulas
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Falsity)
    }

    /// The maximal conjunction tree rooted here, flattened.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Binary(Connective::And, lhs, rhs) => {
                let mut out = lhs.conjuncts();
                out.extend(rhs.conjuncts());
                out
            }
            _ => vec![self],
        }
    }

    pub fn disjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Binary(Connective::Or, lhs, rhs) => {
                let mut out = lhs.disjuncts();
                out.extend(rhs.disjuncts());
                out
            }
            _ => vec![self],
        }
    }

    pub fn quantify(quantifier: Quantifier, variables: Vec<Variable>, body: Formula) -> Formula {
        if variables.is_empty() {
            body
        } else {
            Formula::Quantified(quantifier, variables, body.into())
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Variable> {
        match self {
            Formula::Truth | Formula::Falsity => BTreeSet::new(),
            Formula::Atom(a) => {
                let mut out = BTreeSet::new();
                for t in &a.terms {
                    t.collect_variables(&mut out);
                }
                out
            }
            Formula::Comparison(l, _, r) => {
                let mut out = l.variables();
                r.collect_variables(&mut out);
                out
            }
            Formula::Not(f) => f.free_variables(),
            Formula::Binary(_, lhs, rhs) => {
                let mut out = lhs.free_variables();
                out.extend(rhs.free_variables());
                out
            }
            Formula::Quantified(_, vars, body) => {
                let mut out = body.free_variables();
                for v in vars {
                    out.remove(v);
                }
                out
            }
        }
    }

    /// All variables, free or bound.
    pub fn variables(&self) -> BTreeSet<Variable> {
        match self {
            Formula::Truth | Formula::Falsity => BTreeSet::new(),
            Formula::Atom(a) => {
                let mut out = BTreeSet::new();
                for t in &a.terms {
                    t.collect_variables(&mut out);
                }
                out
            }
            Formula::Comparison(l, _, r) => {
                let mut out = l.variables();
                r.collect_variables(&mut out);
                out
            }
            Formula::Not(f) => f.variables(),
            Formula::Binary(_, lhs, rhs) => {
                let mut out = lhs.variables();
                out.extend(rhs.variables());
                out
            }
            Formula::Quantified(_, vars, body) => {
                let mut out = body.variables();
                out.extend(vars.iter().cloned());
                out
            }
        }
    }

    pub fn predicates(&self) -> BTreeSet<Predicate> {
        let mut out = BTreeSet::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates(&self, out: &mut BTreeSet<Predicate>) {
        match self {
            Formula::Truth | Formula::Falsity | Formula::Comparison(_, _, _) => (),
            Formula::Atom(a) => {
                out.insert(a.predicate_symbol());
            }
            Formula::Not(f) => f.collect_predicates(out),
            Formula::Binary(_, lhs, rhs) => {
                lhs.collect_predicates(out);
                rhs.collect_predicates(out);
            }
            Formula::Quantified(_, _, body) => body.collect_predicates(out),
        }
    }

    pub fn constants(&self) -> BTreeSet<PrecomputedTerm> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<PrecomputedTerm>) {
        match self {
            Formula::Truth | Formula::Falsity => (),
            Formula::Atom(a) => {
                for t in &a.terms {
                    t.collect_constants(out);
                }
            }
            Formula::Comparison(l, _, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
            Formula::Not(f) => f.collect_constants(out),
            Formula::Binary(_, lhs, rhs) => {
                lhs.collect_constants(out);
                rhs.collect_constants(out);
            }
            Formula::Quantified(_, _, body) => body.collect_constants(out),
        }
    }

    /// Capture-avoiding substitution of `term` for free occurrences of `var`.
    pub fn substitute(&self, var: &Variable, term: &FolTerm) -> Formula {
        match self {
            Formula::Truth | Formula::Falsity => self.clone(),
            Formula::Atom(a) => Formula::Atom(FolAtom {
                predicate: a.predicate.clone(),
                terms: a.terms.iter().map(|t| t.substitute(var, term)).collect(),
            }),
            Formula::Comparison(l, rel, r) => {
                Formula::Comparison(l.substitute(var, term), *rel, r.substitute(var, term))
            }
            Formula::Not(f) => Formula::not(f.substitute(var, term)),
            Formula::Binary(c, lhs, rhs) => Formula::Binary(
                *c,
                lhs.substitute(var, term).into(),
                rhs.substitute(var, term).into(),
            ),
            Formula::Quantified(q, vars, body) => {
                if vars.contains(var) {
                    return self.clone();
                }
                let term_vars = term.variables();
                let mut vars = vars.clone();
                let mut body = (**body).clone();
                let mut taken: BTreeSet<String> =
                    body.variables().into_iter().map(|v| v.name).collect();
                taken.extend(term_vars.iter().map(|v| v.name.clone()));
                for v in vars.iter_mut() {
                    if term_vars.contains(v) {
                        let fresh = fresh_name(&v.name, &taken);
                        taken.insert(fresh.clone());
                        let renamed = Variable {
                            name: fresh,
                            sort: v.sort,
                        };
                        body = body.rename_free_variable(v, &renamed);
                        *v = renamed;
                    }
                }
                Formula::Quantified(*q, vars, body.substitute(var, term).into())
            }
        }
    }

    fn rename_free_variable(&self, from: &Variable, to: &Variable) -> Formula {
        match self {
            Formula::Truth | Formula::Falsity => self.clone(),
            Formula::Atom(a) => Formula::Atom(FolAtom {
                predicate: a.predicate.clone(),
                terms: a
                    .terms
                    .iter()
                    .map(|t| t.rename_variable(from, to))
                    .collect(),
            }),
            Formula::Comparison(l, rel, r) => Formula::Comparison(
                l.rename_variable(from, to),
                *rel,
                r.rename_variable(from, to),
            ),
            Formula::Not(f) => Formula::not(f.rename_free_variable(from, to)),
            Formula::Binary(c, lhs, rhs) => Formula::Binary(
                *c,
                lhs.rename_free_variable(from, to).into(),
                rhs.rename_free_variable(from, to).into(),
            ),
            Formula::Quantified(q, vars, body) => {
                if vars.contains(from) {
                    self.clone()
                } else {
                    Formula::Quantified(
                        *q,
                        vars.clone(),
                        body.rename_free_variable(from, to).into(),
                    )
                }
            }
        }
    }

    /// Replaces predicate symbols according to `mapping`. Fails if a target
    /// symbol already occurs in the formula outside the mapping's domain.
    pub fn rename_predicates(
        &self,
        mapping: &BTreeMap<Predicate, Predicate>,
    ) -> Result<Formula, RenameError> {
        let present = self.predicates();
        for target in mapping.values() {
            if present.contains(target) && !mapping.contains_key(target) {
                return Err(RenameError::TargetOccurs(target.clone()));
            }
        }
        Ok(self.rename_predicates_unchecked(mapping))
    }

    pub fn rename_predicates_unchecked(&self, mapping: &BTreeMap<Predicate, Predicate>) -> Formula {
        match self {
            Formula::Truth | Formula::Falsity | Formula::Comparison(_, _, _) => self.clone(),
            Formula::Atom(a) => match mapping.get(&a.predicate_symbol()) {
                Some(target) => Formula::Atom(FolAtom {
                    predicate: target.name.clone(),
                    terms: a.terms.clone(),
                }),
                None => self.clone(),
            },
            Formula::Not(f) => Formula::not(f.rename_predicates_unchecked(mapping)),
            Formula::Binary(c, lhs, rhs) => Formula::Binary(
                *c,
                lhs.rename_predicates_unchecked(mapping).into(),
                rhs.rename_predicates_unchecked(mapping).into(),
            ),
            Formula::Quantified(q, vars, body) => Formula::Quantified(
                *q,
                vars.clone(),
                body.rename_predicates_unchecked(mapping).into(),
            ),
        }
    }

    /// Applies `transform` to every subformula, innermost first.
    pub fn apply(self, transform: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let inner = match self {
            Formula::Truth | Formula::Falsity | Formula::Atom(_) | Formula::Comparison(_, _, _) => {
                self
            }
            Formula::Not(f) => Formula::not(f.apply(transform)),
            Formula::Binary(c, lhs, rhs) => {
                Formula::Binary(c, lhs.apply(transform).into(), rhs.apply(transform).into())
            }
            Formula::Quantified(q, vars, body) => {
                Formula::Quantified(q, vars, body.apply(transform).into())
            }
        };
        transform(inner)
    }

    /// Structural equality modulo renaming of bound variables and the order
    /// and association of conjunctions and disjunctions.
    pub fn alpha_ac_eq(&self, other: &Formula) -> bool {
        alpha_ac_eq(self, other, &mut Vec::new())
    }

    /// Renames bound variables to `X1, X2, ...` (general) and `N1, N2, ...`
    /// (integer) in binder order, skipping the names of free variables.
    pub fn canonicalize_variables(&self) -> Formula {
        let free: BTreeSet<String> = self.free_variables().into_iter().map(|v| v.name).collect();
        let mut counters = (0usize, 0usize);
        canonicalize(self, &mut Vec::new(), &mut counters, &free)
    }
}

fn canonical_term(term: &FolTerm, scope: &[(Variable, Variable)]) -> FolTerm {
    match term {
        FolTerm::Constant(_) => term.clone(),
        FolTerm::Variable(v) => {
            for (old, new) in scope.iter().rev() {
                if old == v {
                    return FolTerm::Variable(new.clone());
                }
            }
            term.clone()
        }
        FolTerm::Negative(t) => FolTerm::Negative(canonical_term(t, scope).into()),
        FolTerm::Arith(op, l, r) => FolTerm::Arith(
            *op,
            canonical_term(l, scope).into(),
            canonical_term(r, scope).into(),
        ),
    }
}

fn canonicalize(
    formula: &Formula,
    scope: &mut Vec<(Variable, Variable)>,
    counters: &mut (usize, usize),
    free: &BTreeSet<String>,
) -> Formula {
    match formula {
        Formula::Truth | Formula::Falsity => formula.clone(),
        Formula::Atom(a) => Formula::Atom(FolAtom {
            predicate: a.predicate.clone(),
            terms: a.terms.iter().map(|t| canonical_term(t, scope)).collect(),
        }),
        Formula::Comparison(l, rel, r) => {
            Formula::Comparison(canonical_term(l, scope), *rel, canonical_term(r, scope))
        }
        Formula::Not(f) => Formula::not(canonicalize(f, scope, counters, free)),
        Formula::Binary(c, lhs, rhs) => Formula::Binary(
            *c,
            canonicalize(lhs, scope, counters, free).into(),
            canonicalize(rhs, scope, counters, free).into(),
        ),
        Formula::Quantified(q, vars, body) => {
            let mut renamed = Vec::with_capacity(vars.len());
            for var in vars {
                let name = loop {
                    let (stem, counter) = match var.sort {
                        Sort::General => ("X", &mut counters.0),
                        Sort::Integer => ("N", &mut counters.1),
                    };
                    *counter += 1;
                    let candidate = format!("{stem}{counter}");
                    if !free.contains(&candidate) {
                        break candidate;
                    }
                };
                let fresh = Variable {
                    name,
                    sort: var.sort,
                };
                scope.push((var.clone(), fresh.clone()));
                renamed.push(fresh);
            }
            let body = canonicalize(body, scope, counters, free);
            for _ in vars {
                scope.pop();
            }
            Formula::Quantified(*q, renamed, body.into())
        }
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let stem: String = base.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let stem = if stem.is_empty() {
        "X".to_string()
    } else {
        stem
    };
    let mut i = 1;
    loop {
        let candidate = format!("{stem}{i}");
        if !taken.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}

fn term_alpha_eq(lhs: &FolTerm, rhs: &FolTerm, bound: &[(Variable, Variable)]) -> bool {
    match (lhs, rhs) {
        (FolTerm::Constant(a), FolTerm::Constant(b)) => a == b,
        (FolTerm::Variable(a), FolTerm::Variable(b)) => {
            for (l, r) in bound.iter().rev() {
                if l == a || r == b {
                    return l == a && r == b;
                }
            }
            a == b
        }
        (FolTerm::Negative(a), FolTerm::Negative(b)) => term_alpha_eq(a, b, bound),
        (FolTerm::Arith(op_a, la, ra), FolTerm::Arith(op_b, lb, rb)) => {
            op_a == op_b && term_alpha_eq(la, lb, bound) && term_alpha_eq(ra, rb, bound)
        }
        _ => false,
    }
}

fn match_multiset(
    lhs: &[&Formula],
    rhs: &[&Formula],
    bound: &mut Vec<(Variable, Variable)>,
) -> bool {
    if lhs.len() != rhs.len() {
        return false;
    }
    if lhs.is_empty() {
        return true;
    }
    let first = lhs[0];
    let rest: Vec<&Formula> = lhs[1..].to_vec();
    for (i, candidate) in rhs.iter().enumerate() {
        if alpha_ac_eq(first, candidate, bound) {
            let mut remaining = rhs.to_vec();
            remaining.remove(i);
            if match_multiset(&rest, &remaining, bound) {
                return true;
            }
        }
    }
    false
}

fn alpha_ac_eq(lhs: &Formula, rhs: &Formula, bound: &mut Vec<(Variable, Variable)>) -> bool {
    match (lhs, rhs) {
        (Formula::Truth, Formula::Truth) | (Formula::Falsity, Formula::Falsity) => true,
        (Formula::Atom(a), Formula::Atom(b)) => {
            a.predicate == b.predicate
                && a.terms.len() == b.terms.len()
                && a.terms
                    .iter()
                    .zip(&b.terms)
                    .all(|(x, y)| term_alpha_eq(x, y, bound))
        }
        (Formula::Comparison(la, rel_a, ra), Formula::Comparison(lb, rel_b, rb)) => {
            rel_a == rel_b && term_alpha_eq(la, lb, bound) && term_alpha_eq(ra, rb, bound)
        }
        (Formula::Not(a), Formula::Not(b)) => alpha_ac_eq(a, b, bound),
        (
            Formula::Binary(ca @ (Connective::And | Connective::Or), _, _),
            Formula::Binary(cb, _, _),
        ) if ca == cb => {
            let (ls, rs) = match ca {
                Connective::And => (lhs.conjuncts(), rhs.conjuncts()),
                _ => (lhs.disjuncts(), rhs.disjuncts()),
            };
            match_multiset(&ls, &rs, bound)
        }
        (Formula::Binary(ca, la, ra), Formula::Binary(cb, lb, rb)) => {
            ca == cb && alpha_ac_eq(la, lb, bound) && alpha_ac_eq(ra, rb, bound)
        }
        (Formula::Quantified(qa, vars_a, body_a), Formula::Quantified(qb, vars_b, body_b)) => {
            if qa != qb || vars_a.len() != vars_b.len() {
                return false;
            }
            // Try every sort-respecting alignment of the two variable lists.
            fn align(
                vars_a: &[Variable],
                vars_b: &[Variable],
                used: &mut Vec<usize>,
                bound: &mut Vec<(Variable, Variable)>,
                body_a: &Formula,
                body_b: &Formula,
            ) -> bool {
                if used.len() == vars_a.len() {
                    return alpha_ac_eq(body_a, body_b, bound);
                }
                let a = &vars_a[used.len()];
                for (i, b) in vars_b.iter().enumerate() {
                    if used.contains(&i) || a.sort != b.sort {
                        continue;
                    }
                    used.push(i);
                    bound.push((a.clone(), b.clone()));
                    if align(vars_a, vars_b, used, bound, body_a, body_b) {
                        return true;
                    }
                    bound.pop();
                    used.pop();
                }
                false
            }
            align(vars_a, vars_b, &mut Vec::new(), bound, body_a, body_b)
        }
        _ => false,
    }
}

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Truth | Formula::Falsity | Formula::Atom(_) | Formula::Comparison(_, _, _) => {
                5
            }
            Formula::Not(_) | Formula::Quantified(_, _, _) => 4,
            Formula::Binary(Connective::And, _, _) => 3,
            Formula::Binary(Connective::Or, _, _) => 2,
            Formula::Binary(Connective::Implies, _, _) => 1,
            Formula::Binary(Connective::Iff, _, _) => 0,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, min: u8, formula: &Formula) -> fmt::Result {
            if formula.precedence() < min {
                write!(f, "({formula})")
            } else {
                write!(f, "{formula}")
            }
        }
        match self {
            Formula::Truth => write!(f, "#true"),
            Formula::Falsity => write!(f, "#false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Comparison(l, rel, r) => write!(f, "{l} {rel} {r}"),
            Formula::Not(inner) => {
                write!(f, "not ")?;
                child(f, 4, inner)
            }
            Formula::Binary(c, lhs, rhs) => {
                let prec = self.precedence();
                let (op, assoc_left) = match c {
                    Connective::And => ("and", true),
                    Connective::Or => ("or", true),
                    Connective::Implies => ("->", false),
                    Connective::Iff => ("<->", false),
                };
                if assoc_left {
                    child(f, prec, lhs)?;
                    write!(f, " {op} ")?;
                    child(f, prec + 1, rhs)
                } else {
                    child(f, prec + 1, lhs)?;
                    write!(f, " {op} ")?;
                    child(f, prec, rhs)
                }
            }
            Formula::Quantified(q, vars, body) => {
                match q {
                    Quantifier::Forall => write!(f, "forall ")?,
                    Quantifier::Exists => write!(f, "exists ")?,
                }
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, " ")?;
                // The body is always parenthesized unless it is another
                // quantification or a negation, matching the usual style.
                match **body {
                    Formula::Quantified(_, _, _) | Formula::Not(_) => write!(f, "{body}"),
                    _ => write!(f, "({body})"),
                }
            }
        }
    }
}

/// The predicate part of a subsignature sigma_0(P), together with the
/// constant inventory of the artifacts built over it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignatureSlice {
    pub predicates: BTreeSet<Predicate>,
    pub constants: BTreeSet<PrecomputedTerm>,
}

impl SignatureSlice {
    pub fn from_formulas<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut slice = SignatureSlice::default();
        for f in formulas {
            slice.predicates.extend(f.predicates());
            slice.constants.extend(f.constants());
        }
        slice
    }
}
