//! Predicate dependency graph, tightness, and private recursion.
//!
//! The graph has the program's predicate symbols as vertices and an edge
//! from the head predicate to each body predicate of a rule. An edge is
//! positive when the body occurrence is not in the scope of negation. Edges
//! are recorded per rule: a rule contributes one edge for every distinct
//! (head, body) predicate pair it contains, so the orphan program's three
//! rules contribute six edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::guide::UserGuide;
use crate::syntax::asp::{BodyElement, Head, Program, Rule, Sign};
use crate::syntax::Predicate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Predicate,
    pub to: Predicate,
    pub positive: bool,
    pub rule: usize,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.positive {
            "positive"
        } else {
            "non-positive"
        };
        write!(f, "{} -> {} ({kind})", self.from, self.to)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub vertices: BTreeSet<Predicate>,
    pub edges: Vec<Edge>,
}

impl DependencyGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.positive).count()
    }

    /// Collapsed adjacency: `to`-sets per `from` vertex.
    fn adjacency(&self, positive_only: bool) -> BTreeMap<&Predicate, BTreeSet<&Predicate>> {
        let mut out: BTreeMap<&Predicate, BTreeSet<&Predicate>> = BTreeMap::new();
        for edge in &self.edges {
            if positive_only && !edge.positive {
                continue;
            }
            out.entry(&edge.from).or_default().insert(&edge.to);
        }
        out
    }

    /// True if the subgraph of positive edges has a cycle.
    pub fn has_positive_cycle(&self) -> bool {
        has_cycle(&self.adjacency(true), &self.vertices.iter().collect())
    }

    /// True if some cycle visits only the given vertices.
    pub fn has_cycle_within(&self, allowed: &BTreeSet<Predicate>) -> bool {
        let allowed: BTreeSet<&Predicate> = self
            .vertices
            .iter()
            .filter(|v| allowed.contains(v))
            .collect();
        let mut adjacency = self.adjacency(false);
        adjacency.retain(|from, _| allowed.contains(from));
        for targets in adjacency.values_mut() {
            targets.retain(|to| allowed.contains(to));
        }
        has_cycle(&adjacency, &allowed)
    }
}

fn has_cycle<'a>(
    adjacency: &BTreeMap<&'a Predicate, BTreeSet<&'a Predicate>>,
    vertices: &BTreeSet<&'a Predicate>,
) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        InProgress,
        Done,
    }
    fn visit<'a>(
        vertex: &'a Predicate,
        adjacency: &BTreeMap<&'a Predicate, BTreeSet<&'a Predicate>>,
        state: &mut BTreeMap<&'a Predicate, State>,
    ) -> bool {
        match state.get(vertex) {
            Some(State::InProgress) => return true,
            Some(State::Done) => return false,
            _ => (),
        }
        state.insert(vertex, State::InProgress);
        if let Some(targets) = adjacency.get(vertex) {
            for target in targets {
                if visit(target, adjacency, state) {
                    return true;
                }
            }
        }
        state.insert(vertex, State::Done);
        false
    }
    let mut state = BTreeMap::new();
    vertices.iter().any(|v| visit(v, adjacency, &mut state))
}

pub fn dependency_graph(program: &Program) -> DependencyGraph {
    let mut graph = DependencyGraph {
        vertices: program.predicates(),
        edges: Vec::new(),
    };
    for (index, rule) in program.rules.iter().enumerate() {
        let Some(head) = rule.head.atom() else {
            continue;
        };
        let from = head.predicate_symbol();
        // One edge per distinct body predicate of this rule; the edge is
        // positive if some occurrence is outside the scope of negation.
        let mut per_rule: BTreeMap<Predicate, bool> = BTreeMap::new();
        for element in &rule.body {
            if let BodyElement::Literal(literal) = element {
                let to = literal.atom.predicate_symbol();
                let positive = literal.sign == Sign::Positive;
                let entry = per_rule.entry(to).or_insert(false);
                *entry = *entry || positive;
            }
        }
        for (to, positive) in per_rule {
            graph.edges.push(Edge {
                from: from.clone(),
                to,
                positive,
                rule: index,
            });
        }
    }
    graph
}

/// A program is tight if its dependency graph has no cycle of positive edges.
pub fn is_tight(program: &Program) -> bool {
    !dependency_graph(program).has_positive_cycle()
}

/// Private recursion: a dependency cycle through private symbols only, or a
/// choice rule whose head predicate is private.
pub fn uses_private_recursion(program: &Program, guide: &UserGuide) -> bool {
    let private: BTreeSet<Predicate> = program
        .predicates()
        .into_iter()
        .filter(|p| guide.is_private(p))
        .collect();
    for rule in &program.rules {
        if let Head::Choice(atom) = &rule.head {
            if private.contains(&atom.predicate_symbol()) {
                return true;
            }
        }
    }
    dependency_graph(program).has_cycle_within(&private)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    NotTight {
        program: usize,
    },
    PrivateRecursion {
        program: usize,
    },
    InputSymbolInHead {
        program: usize,
        predicate: Predicate,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NotTight { program } => {
                write!(f, "program {program}: not tight (cycle of positive edges)")
            }
            Diagnostic::PrivateRecursion { program } => {
                write!(f, "program {program}: uses private recursion")
            }
            Diagnostic::InputSymbolInHead { program, predicate } => {
                write!(
                    f,
                    "program {program}: input symbol {predicate} occurs in a rule head"
                )
            }
        }
    }
}

pub fn input_symbols_in_heads(program: &Program, guide: &UserGuide) -> BTreeSet<Predicate> {
    let mut out = BTreeSet::new();
    for rule in &program.rules {
        if let Some(atom) = rule.head.atom() {
            let p = atom.predicate_symbol();
            if guide.inputs.contains(&p) {
                out.insert(p);
            }
        }
    }
    out
}

/// Applicability gate: both programs must be tight, free of private
/// recursion, and must not define input symbols.
pub fn gate(program1: &Program, program2: &Program, guide: &UserGuide) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();
    for (index, program) in [(1, program1), (2, program2)] {
        for predicate in input_symbols_in_heads(program, guide) {
            diagnostics.push(Diagnostic::InputSymbolInHead {
                program: index,
                predicate,
            });
        }
        if !is_tight(program) {
            diagnostics.push(Diagnostic::NotTight { program: index });
        }
        if uses_private_recursion(program, guide) {
            diagnostics.push(Diagnostic::PrivateRecursion { program: index });
        }
    }
    diagnostics
}

/// Head predicates with the rules defining them, used by completion.
pub fn defining_rules<'a>(program: &'a Program, predicate: &Predicate) -> Vec<&'a Rule> {
    program
        .rules
        .iter()
        .filter(|rule| {
            rule.head
                .atom()
                .is_some_and(|atom| &atom.predicate_symbol() == predicate)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::asp::parse_program;

    pub(crate) const ORPHAN_A: &str = "\
parent_living(X) :- father(Y,X), living(Y).
parent_living(X) :- mother(Y,X), living(Y).
orphan(X) :- living(X), not parent_living(X).
";

    fn orphan_guide() -> UserGuide {
        UserGuide::parse("input: living/1, father/2, mother/2.\noutput: orphan/1.\n").unwrap()
    }

    #[test]
    fn orphan_graph_has_six_edges_one_non_positive() {
        let program = parse_program(ORPHAN_A).unwrap();
        let graph = dependency_graph(&program);
        assert_eq!(graph.vertices.len(), 5);
        assert_eq!(graph.edge_count(), 6);
        assert_eq!(graph.edge_count() - graph.positive_edge_count(), 1);
        let non_positive: Vec<&Edge> = graph.edges.iter().filter(|e| !e.positive).collect();
        assert_eq!(non_positive[0].from, Predicate::new("orphan", 1));
        assert_eq!(non_positive[0].to, Predicate::new("parent_living", 1));
    }

    #[test]
    fn orphan_program_is_tight() {
        let program = parse_program(ORPHAN_A).unwrap();
        assert!(is_tight(&program));
    }

    #[test]
    fn positive_self_loop_is_not_tight() {
        let program = parse_program("p(X) :- p(X).").unwrap();
        let graph = dependency_graph(&program);
        assert_eq!(graph.edge_count(), 1);
        assert!(graph.edges[0].positive);
        assert!(!is_tight(&program));
    }

    #[test]
    fn negative_cycle_is_tight() {
        let program = parse_program("p(X) :- not q(X).\nq(X) :- not p(X).\n").unwrap();
        assert!(is_tight(&program));
    }

    #[test]
    fn double_negation_is_not_positive() {
        let program = parse_program("p(X) :- not not p(X).").unwrap();
        assert!(is_tight(&program));
    }

    #[test]
    fn primes_have_no_private_recursion() {
        let program = parse_program(
            "composite(I*J) :- I > 1, J > 1.\nprime(I) :- I = a..b, not composite(I).\n",
        )
        .unwrap();
        let guide =
            UserGuide::parse("input: a -> integer, b -> integer.\noutput: prime/1.\n").unwrap();
        assert!(!uses_private_recursion(&program, &guide));
        assert!(is_tight(&program));
    }

    #[test]
    fn private_cycle_is_private_recursion() {
        let program = parse_program("aux(X) :- aux(X).").unwrap();
        let guide = UserGuide::parse("output: p/1.").unwrap();
        assert!(uses_private_recursion(&program, &guide));
    }

    #[test]
    fn choice_on_private_head_is_private_recursion() {
        let program = parse_program("{aux(1)}.").unwrap();
        let guide = UserGuide::parse("output: p/1.").unwrap();
        assert!(uses_private_recursion(&program, &guide));
        // The same choice rule on an output symbol is fine.
        let program = parse_program("{p(1)}.").unwrap();
        assert!(!uses_private_recursion(&program, &guide));
    }

    #[test]
    fn enlarging_out_never_creates_private_recursion() {
        let program = parse_program("aux(X) :- aux(X).").unwrap();
        let small = UserGuide::parse("output: p/1.").unwrap();
        let large = UserGuide::parse("output: p/1, aux/1.").unwrap();
        assert!(uses_private_recursion(&program, &small));
        assert!(!uses_private_recursion(&program, &large));
    }

    #[test]
    fn gate_reports_violations() {
        let guide = orphan_guide();
        let good = parse_program(ORPHAN_A).unwrap();
        let untight = parse_program("orphan(X) :- orphan(X).").unwrap();
        let in_head = parse_program("father(a,b).").unwrap();

        assert!(gate(&good, &good, &guide).is_empty());
        assert_eq!(
            gate(&untight, &good, &guide),
            vec![Diagnostic::NotTight { program: 1 }]
        );
        assert_eq!(
            gate(&good, &in_head, &guide),
            vec![Diagnostic::InputSymbolInHead {
                program: 2,
                predicate: Predicate::new("father", 2),
            }]
        );
    }

    #[test]
    fn deleting_rules_preserves_tightness() {
        let program =
            parse_program("p(X) :- q(X).\nq(X) :- r(X).\nr(X) :- not p(X).\ns(X) :- s(X), p(X).\n")
                .unwrap();
        assert!(!is_tight(&program));
        for skip in 0..program.rules.len() {
            let mut reduced = program.clone();
            reduced.rules.remove(skip);
            if is_tight(&program) {
                assert!(is_tight(&reduced));
            }
        }
        // Removing the self-loop rule makes it tight; removing others keeps
        // the loop and stays non-tight.
        let mut reduced = program.clone();
        reduced.rules.remove(3);
        assert!(is_tight(&reduced));
    }
}
