//! TPTP TFF rendering of proof tasks.
//!
//! The general sort is declared as `general`; integers are the built-in
//! `$int` sort, injected into `general` through `f_int`. Symbol mangling is
//! deterministic and reversible: predicate `p/n` becomes `p_<p>_<n>`,
//! symbolic constant `c` becomes `c_<c>`, and `inf`/`sup` become `c_inf`
//! and `c_sup`. Comparisons between two integer-sorted terms use the
//! built-in integer predicates; all others go through the order predicates
//! on `general`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::syntax::asp::PrecomputedTerm;
use crate::syntax::fol::{Connective, FolTerm, Formula, Quantifier, Sort, Variable};
use crate::syntax::Relation;

use super::ProofTask;

fn mangle_predicate(name: &str, arity: usize) -> String {
    format!("p_{name}_{arity}")
}

fn mangle_constant(constant: &PrecomputedTerm) -> String {
    match constant {
        PrecomputedTerm::Infimum => "c_inf".to_string(),
        PrecomputedTerm::Supremum => "c_sup".to_string(),
        PrecomputedTerm::Symbol(s) => format!("c_{s}"),
        PrecomputedTerm::Numeral(_) => unreachable!("numerals are rendered inline"),
    }
}

fn render_int_term(term: &FolTerm, out: &mut String) {
    match term {
        FolTerm::Constant(PrecomputedTerm::Numeral(n)) => {
            write!(out, "{n}").unwrap();
        }
        FolTerm::Variable(v) => {
            out.push_str(&v.name);
        }
        FolTerm::Negative(inner) => {
            out.push_str("$uminus(");
            render_int_term(inner, out);
            out.push(')');
        }
        FolTerm::Arith(op, l, r) => {
            let function = match op {
                crate::syntax::ArithOp::Add => "$sum",
                crate::syntax::ArithOp::Subtract => "$difference",
                crate::syntax::ArithOp::Multiply => "$product",
            };
            out.push_str(function);
            out.push('(');
            render_int_term(l, out);
            out.push_str(", ");
            render_int_term(r, out);
            out.push(')');
        }
        FolTerm::Constant(_) => unreachable!("general constant in integer position"),
    }
}

fn render_general_term(term: &FolTerm, out: &mut String) {
    if term.sort() == Sort::Integer {
        out.push_str("f_int(");
        render_int_term(term, out);
        out.push(')');
        return;
    }
    match term {
        FolTerm::Constant(c) => out.push_str(&mangle_constant(c)),
        FolTerm::Variable(v) => out.push_str(&v.name),
        _ => unreachable!("arithmetic terms are integer-sorted"),
    }
}

fn render_comparison(lhs: &FolTerm, relation: Relation, rhs: &FolTerm, out: &mut String) {
    let both_integer = lhs.sort() == Sort::Integer && rhs.sort() == Sort::Integer;
    if both_integer {
        match relation {
            Relation::Equal | Relation::NotEqual => {
                render_int_term(lhs, out);
                out.push_str(if relation == Relation::Equal {
                    " = "
                } else {
                    " != "
                });
                render_int_term(rhs, out);
            }
            _ => {
                let predicate = match relation {
                    Relation::Less => "$less",
                    Relation::Greater => "$greater",
                    Relation::LessEqual => "$lesseq",
                    Relation::GreaterEqual => "$greatereq",
                    Relation::Equal | Relation::NotEqual => unreachable!(),
                };
                out.push_str(predicate);
                out.push('(');
                render_int_term(lhs, out);
                out.push_str(", ");
                render_int_term(rhs, out);
                out.push(')');
            }
        }
        return;
    }
    match relation {
        Relation::Equal | Relation::NotEqual => {
            render_general_term(lhs, out);
            out.push_str(if relation == Relation::Equal {
                " = "
            } else {
                " != "
            });
            render_general_term(rhs, out);
        }
        _ => {
            let predicate = match relation {
                Relation::Less => "less",
                Relation::Greater => "greater",
                Relation::LessEqual => "less_eq",
                Relation::GreaterEqual => "greater_eq",
                Relation::Equal | Relation::NotEqual => unreachable!(),
            };
            out.push_str(predicate);
            out.push('(');
            render_general_term(lhs, out);
            out.push_str(", ");
            render_general_term(rhs, out);
            out.push(')');
        }
    }
}

fn render_formula(formula: &Formula, out: &mut String) {
    match formula {
        Formula::Truth => out.push_str("$true"),
        Formula::Falsity => out.push_str("$false"),
        Formula::Atom(atom) => {
            out.push_str(&mangle_predicate(&atom.predicate, atom.terms.len()));
            if !atom.terms.is_empty() {
                out.push('(');
                for (i, term) in atom.terms.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    render_general_term(term, out);
                }
                out.push(')');
            }
        }
        Formula::Comparison(lhs, relation, rhs) => {
            out.push('(');
            render_comparison(lhs, *relation, rhs, out);
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str("~(");
            render_formula(inner, out);
            out.push(')');
        }
        Formula::Binary(connective, lhs, rhs) => {
            let op = match connective {
                Connective::And => " & ",
                Connective::Or => " | ",
                Connective::Implies => " => ",
                Connective::Iff => " <=> ",
            };
            out.push('(');
            render_formula(lhs, out);
            out.push_str(op);
            render_formula(rhs, out);
            out.push(')');
        }
        Formula::Quantified(quantifier, variables, body) => {
            out.push(match quantifier {
                Quantifier::Forall => '!',
                Quantifier::Exists => '?',
            });
            out.push('[');
            for (i, v) in variables.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&v.name);
                out.push_str(match v.sort {
                    Sort::General => ": general",
                    Sort::Integer => ": $int",
                });
            }
            out.push_str("]: (");
            render_formula(body, out);
            out.push(')');
        }
    }
}

fn render_variable_sorted(formula: &Formula) -> String {
    let mut out = String::new();
    render_formula(formula, &mut out);
    out
}

/// Deterministic TFF text for a proof task: sort and symbol declarations,
/// the sort-bridging axioms, the task axioms, and the conjecture.
pub fn emit_tptp(task: &ProofTask) -> String {
    let mut predicates = BTreeSet::new();
    let mut constants = BTreeSet::new();
    for formula in task.axioms.iter().chain([&task.conjecture]) {
        predicates.extend(formula.predicates());
        for constant in formula.constants() {
            if !matches!(constant, PrecomputedTerm::Numeral(_)) {
                constants.insert(constant);
            }
        }
    }
    constants.insert(PrecomputedTerm::Infimum);
    constants.insert(PrecomputedTerm::Supremum);

    let mut out = String::new();
    writeln!(out, "% task: {}", task.name).unwrap();
    writeln!(out, "tff(general_type, type, general: $tType).").unwrap();
    writeln!(out, "tff(f_int_decl, type, f_int: $int > general).").unwrap();
    for predicate in ["less", "less_eq", "greater", "greater_eq"] {
        writeln!(
            out,
            "tff({predicate}_decl, type, {predicate}: (general * general) > $o)."
        )
        .unwrap();
    }
    for constant in &constants {
        let name = mangle_constant(constant);
        writeln!(out, "tff({name}_decl, type, {name}: general).").unwrap();
    }
    for predicate in &predicates {
        let name = mangle_predicate(&predicate.name, predicate.arity);
        if predicate.arity == 0 {
            writeln!(out, "tff({name}_decl, type, {name}: $o).").unwrap();
        } else {
            let args = vec!["general"; predicate.arity].join(" * ");
            let args = if predicate.arity == 1 {
                args
            } else {
                format!("({args})")
            };
            writeln!(out, "tff({name}_decl, type, {name}: {args} > $o).").unwrap();
        }
    }

    writeln!(
        out,
        "tff(f_int_injective, axiom, ![I: $int, J: $int]: (f_int(I) = f_int(J) => I = J))."
    )
    .unwrap();
    writeln!(
        out,
        "tff(less_bridge, axiom, ![I: $int, J: $int]: (less(f_int(I), f_int(J)) <=> $less(I, J)))."
    )
    .unwrap();

    for (index, axiom) in task.axioms.iter().enumerate() {
        writeln!(
            out,
            "tff(axiom_{}, axiom, {}).",
            index + 1,
            render_variable_sorted(&axiom.canonicalize_variables())
        )
        .unwrap();
    }
    writeln!(
        out,
        "tff(goal, conjecture, {}).",
        render_variable_sorted(&task.conjecture.canonicalize_variables())
    )
    .unwrap();
    out
}

/// Free variables of lemma-style sentences must be absent; generated tasks
/// are closed by construction. This helper closes stray free variables so
/// that emitted files are always well-formed TFF.
pub fn close_sentence(formula: &Formula) -> Formula {
    let free: Vec<Variable> = formula.free_variables().into_iter().collect();
    Formula::quantify(Quantifier::Forall, free, formula.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::fol::parse_formula;
    use crate::prover::{Direction, StepKind};

    fn task(conjecture: &str, axioms: &[&str]) -> ProofTask {
        ProofTask {
            name: "test_task".into(),
            direction: Direction::SpecificationFromProgram,
            kind: StepKind::Goal,
            axioms: axioms.iter().map(|a| parse_formula(a).unwrap()).collect(),
            conjecture: parse_formula(conjecture).unwrap(),
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let t = task(
            "forall X (p(X) <-> X = a)",
            &["forall X, Y (q(X, Y) -> less(X, Y))", "exists N (a = N)"],
        );
        assert_eq!(emit_tptp(&t), emit_tptp(&t));
    }

    #[test]
    fn integer_comparisons_use_builtin_predicates() {
        let t = task("forall I, J (I > 1 and J > 1 -> I < I * J)", &[]);
        let text = emit_tptp(&t);
        assert!(text.contains("$greater(N1, 1)"));
        assert!(text.contains("$less(N1, $product(N1, N2))"));
        assert!(text.contains("![N1: $int, N2: $int]"));
    }

    #[test]
    fn mixed_comparisons_use_general_predicates() {
        let t = task("forall X (X <= sup and inf <= X)", &[]);
        let text = emit_tptp(&t);
        assert!(text.contains("less_eq(X1, c_sup)"));
        assert!(text.contains("less_eq(c_inf, X1)"));
    }

    #[test]
    fn integers_are_injected_in_general_positions() {
        let t = task("forall N (p(N) -> exists X (X = N))", &[]);
        let text = emit_tptp(&t);
        assert!(text.contains("p_p_1(f_int(N1))"));
        assert!(text.contains("(X1 = f_int(N1))"));
    }

    #[test]
    fn declarations_cover_all_symbols() {
        let t = task("forall X (prime(X) <-> not composite_1(X) and X != a)", &[]);
        let text = emit_tptp(&t);
        assert!(text.contains("tff(p_prime_1_decl, type, p_prime_1: general > $o)."));
        assert!(text.contains("tff(p_composite_1_1_decl, type, p_composite_1_1: general > $o)."));
        assert!(text.contains("tff(c_a_decl, type, c_a: general)."));
        assert!(text.contains("tff(goal, conjecture,"));
        assert_eq!(text.matches("conjecture").count(), 1);
    }

    #[test]
    fn zero_arity_predicates_are_propositions() {
        let t = task("p -> p", &[]);
        let text = emit_tptp(&t);
        assert!(text.contains("tff(p_p_0_decl, type, p_p_0: $o)."));
        assert!(text.contains("(p_p_0 => p_p_0)"));
    }
}
