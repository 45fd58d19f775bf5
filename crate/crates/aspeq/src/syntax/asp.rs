//! Abstract syntax of mini-gringo programs.
//!
//! Rules are built from terms over numerals, symbolic constants, `inf`,
//! `sup`, variables, arithmetic operations, and intervals. Heads are basic
//! atoms, choice atoms, or absent (constraints); bodies are literals and
//! comparisons.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{ArithOp, Predicate, Relation};

/// A numeral, a symbolic constant, or one of the symbols `inf`, `sup`.
///
/// The derived order is the total order on precomputed terms: `inf` first,
/// then the numerals ordered by value, then the symbolic constants ordered
/// lexicographically, then `sup`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrecomputedTerm {
    Infimum,
    Numeral(i64),
    Symbol(String),
    Supremum,
}

impl PrecomputedTerm {
    pub fn symbol(name: impl Into<String>) -> Self {
        PrecomputedTerm::Symbol(name.into())
    }

    pub fn as_numeral(&self) -> Option<i64> {
        match self {
            PrecomputedTerm::Numeral(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for PrecomputedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecomputedTerm::Infimum => write!(f, "inf"),
            PrecomputedTerm::Numeral(n) => write!(f, "{n}"),
            PrecomputedTerm::Symbol(s) => write!(f, "{s}"),
            PrecomputedTerm::Supremum => write!(f, "sup"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Precomputed(PrecomputedTerm),
    Variable(String),
    Negative(Box<Term>),
    BinaryOperation(ArithOp, Box<Term>, Box<Term>),
    Interval(Box<Term>, Box<Term>),
}

impl Term {
    pub fn numeral(n: i64) -> Self {
        Term::Precomputed(PrecomputedTerm::Numeral(n))
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        Term::Precomputed(PrecomputedTerm::symbol(name))
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Precomputed(_) => true,
            Term::Variable(_) => false,
            Term::Negative(t) => t.is_ground(),
            Term::BinaryOperation(_, l, r) => l.is_ground() && r.is_ground(),
            Term::Interval(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<PrecomputedTerm>) {
        match self {
            Term::Precomputed(c) => {
                out.insert(c.clone());
            }
            Term::Variable(_) => (),
            Term::Negative(t) => t.collect_constants(out),
            Term::BinaryOperation(_, l, r) | Term::Interval(l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
        }
    }

    /// Replaces every symbolic constant in the domain of `valuation`.
    pub fn apply_valuation(&self, valuation: &BTreeMap<String, PrecomputedTerm>) -> Term {
        match self {
            Term::Precomputed(PrecomputedTerm::Symbol(s)) => match valuation.get(s) {
                Some(value) => Term::Precomputed(value.clone()),
                None => self.clone(),
            },
            Term::Precomputed(_) | Term::Variable(_) => self.clone(),
            Term::Negative(t) => Term::Negative(t.apply_valuation(valuation).into()),
            Term::BinaryOperation(op, l, r) => Term::BinaryOperation(
                *op,
                l.apply_valuation(valuation).into(),
                r.apply_valuation(valuation).into(),
            ),
            Term::Interval(l, r) => Term::Interval(
                l.apply_valuation(valuation).into(),
                r.apply_valuation(valuation).into(),
            ),
        }
    }

    /// Replaces variables according to `bindings`, leaving unbound ones alone.
    pub fn substitute_variables(&self, bindings: &BTreeMap<String, PrecomputedTerm>) -> Term {
        match self {
            Term::Precomputed(_) => self.clone(),
            Term::Variable(v) => match bindings.get(v) {
                Some(value) => Term::Precomputed(value.clone()),
                None => self.clone(),
            },
            Term::Negative(t) => Term::Negative(t.substitute_variables(bindings).into()),
            Term::BinaryOperation(op, l, r) => Term::BinaryOperation(
                *op,
                l.substitute_variables(bindings).into(),
                r.substitute_variables(bindings).into(),
            ),
            Term::Interval(l, r) => Term::Interval(
                l.substitute_variables(bindings).into(),
                r.substitute_variables(bindings).into(),
            ),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Precomputed(_) | Term::Variable(_) => 3,
            Term::Negative(_) => 2,
            Term::BinaryOperation(ArithOp::Multiply, _, _) => 2,
            Term::BinaryOperation(_, _, _) => 1,
            Term::Interval(_, _) => 0,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, parent: u8, term: &Term) -> fmt::Result {
            if term.precedence() < parent {
                write!(f, "({term})")
            } else {
                write!(f, "{term}")
            }
        }
        match self {
            Term::Precomputed(c) => write!(f, "{c}"),
            Term::Variable(v) => write!(f, "{v}"),
            Term::Negative(t) => {
                write!(f, "-")?;
                child(f, 3, t)
            }
            Term::BinaryOperation(op, l, r) => {
                let prec = self.precedence();
                child(f, prec, l)?;
                write!(f, "{op}")?;
                // Left-associative: a right child at equal precedence needs parens.
                child(f, prec + 1, r)
            }
            Term::Interval(l, r) => {
                child(f, 1, l)?;
                write!(f, "..")?;
                child(f, 1, r)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn predicate_symbol(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.terms.len())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.terms.is_empty() {
            write!(f, "(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// An atom whose arguments are all precomputed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: String,
    pub terms: Vec<PrecomputedTerm>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, terms: Vec<PrecomputedTerm>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            terms,
        }
    }

    pub fn predicate_symbol(&self) -> Predicate {
        Predicate::new(self.predicate.clone(), self.terms.len())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.terms.is_empty() {
            write!(f, "(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
    DoubleNegative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub sign: Sign,
    pub atom: Atom,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => (),
            Sign::Negative => write!(f, "not ")?,
            Sign::DoubleNegative => write!(f, "not not ")?,
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub lhs: Term,
    pub relation: Relation,
    pub rhs: Term,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyElement {
    Literal(Literal),
    Comparison(Comparison),
}

impl fmt::Display for BodyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElement::Literal(l) => write!(f, "{l}"),
            BodyElement::Comparison(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Basic(Atom),
    Choice(Atom),
    Constraint,
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::Basic(a) | Head::Choice(a) => Some(a),
            Head::Constraint => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElement>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule {
            head: Head::Basic(atom),
            body: Vec::new(),
        }
    }

    /// Variables of the rule in order of first occurrence (head, then body).
    pub fn variables(&self) -> Vec<String> {
        fn scan(term: &Term, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
            match term {
                Term::Precomputed(_) => (),
                Term::Variable(v) => {
                    if seen.insert(v.clone()) {
                        out.push(v.clone());
                    }
                }
                Term::Negative(t) => scan(t, seen, out),
                Term::BinaryOperation(_, l, r) | Term::Interval(l, r) => {
                    scan(l, seen, out);
                    scan(r, seen, out);
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        if let Some(atom) = self.head.atom() {
            for t in &atom.terms {
                scan(t, &mut seen, &mut out);
            }
        }
        for element in &self.body {
            match element {
                BodyElement::Literal(l) => {
                    for t in &l.atom.terms {
                        scan(t, &mut seen, &mut out);
                    }
                }
                BodyElement::Comparison(c) => {
                    scan(&c.lhs, &mut seen, &mut out);
                    scan(&c.rhs, &mut seen, &mut out);
                }
            }
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Basic(a) => write!(f, "{a}")?,
            Head::Choice(a) => write!(f, "{{{a}}}")?,
            Head::Constraint => (),
        }
        if !self.body.is_empty() || matches!(self.head, Head::Constraint) {
            if !matches!(self.head, Head::Constraint) {
                write!(f, " ")?;
            }
            write!(f, ":- ")?;
            for (i, element) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{element}")?;
            }
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    /// All predicate symbols contained in some head or body atom.
    pub fn predicates(&self) -> BTreeSet<Predicate> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            if let Some(atom) = rule.head.atom() {
                out.insert(atom.predicate_symbol());
            }
            for element in &rule.body {
                if let BodyElement::Literal(l) = element {
                    out.insert(l.atom.predicate_symbol());
                }
            }
        }
        out
    }

    /// All precomputed terms occurring in the program.
    pub fn constants(&self) -> BTreeSet<PrecomputedTerm> {
        let mut out = BTreeSet::new();
        let mut visit = |term: &Term| term.collect_constants(&mut out);
        for rule in &self.rules {
            if let Some(atom) = rule.head.atom() {
                for t in &atom.terms {
                    visit(t);
                }
            }
            for element in &rule.body {
                match element {
                    BodyElement::Literal(l) => {
                        for t in &l.atom.terms {
                            visit(t);
                        }
                    }
                    BodyElement::Comparison(c) => {
                        visit(&c.lhs);
                        visit(&c.rhs);
                    }
                }
            }
        }
        out
    }

    /// The program `v(Π)`: every occurrence of a constant in the domain of
    /// `valuation` is replaced by its value. Predicate names are untouched.
    pub fn apply_valuation(&self, valuation: &BTreeMap<String, PrecomputedTerm>) -> Program {
        let map_atom = |atom: &Atom| Atom {
            predicate: atom.predicate.clone(),
            terms: atom
                .terms
                .iter()
                .map(|t| t.apply_valuation(valuation))
                .collect(),
        };
        Program {
            rules: self
                .rules
                .iter()
                .map(|rule| Rule {
                    head: match &rule.head {
                        Head::Basic(a) => Head::Basic(map_atom(a)),
                        Head::Choice(a) => Head::Choice(map_atom(a)),
                        Head::Constraint => Head::Constraint,
                    },
                    body: rule
                        .body
                        .iter()
                        .map(|element| match element {
                            BodyElement::Literal(l) => BodyElement::Literal(Literal {
                                sign: l.sign,
                                atom: map_atom(&l.atom),
                            }),
                            BodyElement::Comparison(c) => BodyElement::Comparison(Comparison {
                                lhs: c.lhs.apply_valuation(valuation),
                                relation: c.relation,
                                rhs: c.rhs.apply_valuation(valuation),
                            }),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
