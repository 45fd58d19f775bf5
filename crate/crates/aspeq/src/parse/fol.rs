//! Parser for first-order formulas in the ASCII syntax of user-guide files:
//! `forall`, `exists`, `and`, `or`, `->`, `<->`, `not`, infix comparisons.
//!
//! The sort of a variable is inferred from its first letter: `U`-`Z` are
//! general, `I`-`N` are integer.

use crate::syntax::fol::{FolTerm, Formula, Quantifier, Sort, Variable};
use crate::syntax::{ArithOp, Relation};

use super::{ParseError, Token, TokenStream};

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut stream = TokenStream::new(text)?;
    let formula = formula(&mut stream)?;
    if !stream.at_end() {
        return Err(stream.error("unexpected trailing input after formula"));
    }
    Ok(formula)
}

pub fn variable_from_name(name: &str, position: super::Position) -> Result<Variable, ParseError> {
    let sort = match name.chars().next() {
        Some('U'..='Z') => Sort::General,
        Some('I'..='N') => Sort::Integer,
        _ => {
            return Err(ParseError::new(
                position,
                format!("variable `{name}` must start with U-Z (general) or I-N (integer)"),
            ))
        }
    };
    Ok(Variable {
        name: name.to_string(),
        sort,
    })
}

pub(super) fn formula(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    equivalence(stream)
}

fn equivalence(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let mut lhs = implication(stream)?;
    while stream.eat(&Token::DoubleArrow) {
        let rhs = implication(stream)?;
        lhs = Formula::iff(lhs, rhs);
    }
    Ok(lhs)
}

fn implication(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let lhs = disjunction(stream)?;
    if stream.eat(&Token::Arrow) {
        let rhs = implication(stream)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn disjunction(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let mut lhs = conjunction(stream)?;
    while stream.eat_word("or") {
        let rhs = conjunction(stream)?;
        lhs = Formula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn conjunction(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let mut lhs = unary(stream)?;
    while stream.eat_word("and") {
        let rhs = unary(stream)?;
        lhs = Formula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn unary(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    if stream.eat_word("not") {
        return Ok(Formula::not(unary(stream)?));
    }
    if stream.peek_word("forall") || stream.peek_word("exists") {
        let quantifier = if stream.eat_word("forall") {
            Quantifier::Forall
        } else {
            stream.eat_word("exists");
            Quantifier::Exists
        };
        let mut variables = vec![quantified_variable(stream)?];
        while stream.eat(&Token::Comma) {
            variables.push(quantified_variable(stream)?);
        }
        // Additional juxtaposed variables: `forall X Y (...)`.
        while let Some(Token::Variable(_)) = stream.peek() {
            variables.push(quantified_variable(stream)?);
        }
        let body = unary(stream)?;
        return Ok(Formula::Quantified(quantifier, variables, body.into()));
    }
    primary(stream)
}

fn quantified_variable(stream: &mut TokenStream) -> Result<Variable, ParseError> {
    let position = stream.position();
    match stream.peek().cloned() {
        Some(Token::Variable(name)) => {
            stream.advance();
            variable_from_name(&name, position)
        }
        _ => Err(stream.error("expected variable")),
    }
}

fn primary(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    match stream.peek().cloned() {
        Some(Token::TruthConstant(true)) => {
            stream.advance();
            Ok(Formula::Truth)
        }
        Some(Token::TruthConstant(false)) => {
            stream.advance();
            Ok(Formula::Falsity)
        }
        Some(Token::LeftParen) => {
            stream.advance();
            let inner = formula(stream)?;
            stream.expect(&Token::RightParen, "`)`")?;
            Ok(inner)
        }
        Some(Token::Ident(word)) => {
            // An identifier can start an atom (`p`, `p(...)`) or a term of
            // a comparison (`a = N`). Extremes always start terms.
            let is_extremum = word == "inf" || word == "sup";
            match stream.peek_second() {
                Some(Token::LeftParen) if !is_extremum => atom(stream),
                Some(
                    Token::Equal
                    | Token::NotEqual
                    | Token::Less
                    | Token::Greater
                    | Token::LessEqual
                    | Token::GreaterEqual
                    | Token::Plus
                    | Token::Minus
                    | Token::Star,
                ) => comparison(stream),
                _ if is_extremum => comparison(stream),
                _ => atom(stream),
            }
        }
        Some(Token::Variable(_) | Token::Number(_) | Token::Minus) => comparison(stream),
        Some(t) => Err(stream.error(format!("expected formula, found `{t}`"))),
        None => Err(stream.error("expected formula, found end of input")),
    }
}

fn atom(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let predicate = match stream.peek().cloned() {
        Some(Token::Ident(word)) => {
            stream.advance();
            word
        }
        _ => return Err(stream.error("expected predicate name")),
    };
    let mut terms = Vec::new();
    if stream.eat(&Token::LeftParen) {
        terms.push(term(stream)?);
        while stream.eat(&Token::Comma) {
            terms.push(term(stream)?);
        }
        stream.expect(&Token::RightParen, "`)`")?;
    }
    Ok(Formula::atom(predicate, terms))
}

/// Comparisons may be chained: `t1 < t2 < t3` abbreviates the conjunction
/// `t1 < t2 and t2 < t3`.
fn comparison(stream: &mut TokenStream) -> Result<Formula, ParseError> {
    let mut lhs = term(stream)?;
    let mut parts = Vec::new();
    loop {
        let relation = match stream.peek() {
            Some(Token::Equal) => Relation::Equal,
            Some(Token::NotEqual) => Relation::NotEqual,
            Some(Token::Less) => Relation::Less,
            Some(Token::Greater) => Relation::Greater,
            Some(Token::LessEqual) => Relation::LessEqual,
            Some(Token::GreaterEqual) => Relation::GreaterEqual,
            _ if parts.is_empty() => return Err(stream.error("expected comparison operator")),
            _ => break,
        };
        stream.advance();
        let rhs = term(stream)?;
        parts.push(Formula::Comparison(lhs.clone(), relation, rhs.clone()));
        lhs = rhs;
    }
    Ok(Formula::conjoin(parts))
}

pub(super) fn term(stream: &mut TokenStream) -> Result<FolTerm, ParseError> {
    let mut lhs = multiplicative(stream)?;
    loop {
        let op = match stream.peek() {
            Some(Token::Plus) => ArithOp::Add,
            Some(Token::Minus) => ArithOp::Subtract,
            _ => break,
        };
        stream.advance();
        let rhs = multiplicative(stream)?;
        lhs = arith(stream, op, lhs, rhs)?;
    }
    Ok(lhs)
}

fn multiplicative(stream: &mut TokenStream) -> Result<FolTerm, ParseError> {
    let mut lhs = unary_term(stream)?;
    while stream.eat(&Token::Star) {
        let rhs = unary_term(stream)?;
        lhs = arith(stream, ArithOp::Multiply, lhs, rhs)?;
    }
    Ok(lhs)
}

fn arith(
    stream: &TokenStream,
    op: ArithOp,
    lhs: FolTerm,
    rhs: FolTerm,
) -> Result<FolTerm, ParseError> {
    for side in [&lhs, &rhs] {
        if side.sort() != Sort::Integer {
            return Err(stream.error(format!(
                "arithmetic requires integer-sorted arguments, found `{side}`"
            )));
        }
    }
    Ok(FolTerm::Arith(op, lhs.into(), rhs.into()))
}

fn unary_term(stream: &mut TokenStream) -> Result<FolTerm, ParseError> {
    if stream.eat(&Token::Minus) {
        let inner = unary_term(stream)?;
        if let FolTerm::Constant(crate::syntax::asp::PrecomputedTerm::Numeral(n)) = inner {
            return Ok(FolTerm::numeral(-n));
        }
        if inner.sort() != Sort::Integer {
            return Err(stream.error(format!(
                "arithmetic requires integer-sorted arguments, found `{inner}`"
            )));
        }
        return Ok(FolTerm::Negative(inner.into()));
    }
    primary_term(stream)
}

fn primary_term(stream: &mut TokenStream) -> Result<FolTerm, ParseError> {
    let position = stream.position();
    match stream.peek().cloned() {
        Some(Token::Number(n)) => {
            stream.advance();
            Ok(FolTerm::numeral(n))
        }
        Some(Token::Ident(word)) => {
            stream.advance();
            match word.as_str() {
                "inf" => Ok(FolTerm::Constant(
                    crate::syntax::asp::PrecomputedTerm::Infimum,
                )),
                "sup" => Ok(FolTerm::Constant(
                    crate::syntax::asp::PrecomputedTerm::Supremum,
                )),
                _ => Ok(FolTerm::symbol(word)),
            }
        }
        Some(Token::Variable(name)) => {
            stream.advance();
            Ok(FolTerm::Variable(variable_from_name(&name, position)?))
        }
        Some(Token::LeftParen) => {
            stream.advance();
            let inner = term(stream)?;
            stream.expect(&Token::RightParen, "`)`")?;
            Ok(inner)
        }
        Some(t) => Err(stream.error(format!("expected term, found `{t}`"))),
        None => Err(stream.error("expected term, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::fol::{Connective, FolAtom};

    #[test]
    fn parse_guide_assumption() {
        let f = parse_formula("exists N (a = N) and exists N (b = N)").unwrap();
        let n = Variable::integer("N");
        let expected = Formula::and(
            Formula::Quantified(
                Quantifier::Exists,
                vec![n.clone()],
                Formula::Comparison(
                    FolTerm::symbol("a"),
                    Relation::Equal,
                    FolTerm::Variable(n.clone()),
                )
                .into(),
            ),
            Formula::Quantified(
                Quantifier::Exists,
                vec![n.clone()],
                Formula::Comparison(FolTerm::symbol("b"), Relation::Equal, FolTerm::Variable(n))
                    .into(),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parse_functionality_assumption() {
        let f = parse_formula("forall X exists Y forall Z (father(Z,X) <-> Y=Z)").unwrap();
        match f {
            Formula::Quantified(Quantifier::Forall, vars, body) => {
                assert_eq!(vars, vec![Variable::general("X")]);
                match *body {
                    Formula::Quantified(Quantifier::Exists, _, inner) => match *inner {
                        Formula::Quantified(Quantifier::Forall, _, leaf) => {
                            assert!(matches!(*leaf, Formula::Binary(Connective::Iff, _, _)));
                        }
                        _ => panic!(),
                    },
                    _ => panic!(),
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn parse_spec_statement_formula() {
        let text = "forall X (prime(X) <-> exists N1 (not composite_1(N1) and \
                    exists N2, N3 (N2 = a and N3 = b and N2 <= N1 and N1 <= N3) and X = N1))";
        let f = parse_formula(text).unwrap();
        assert_eq!(
            f.predicates(),
            std::collections::BTreeSet::from([
                crate::syntax::Predicate::new("prime", 1),
                crate::syntax::Predicate::new("composite_1", 1),
            ])
        );
        assert!(f.free_variables().is_empty());
    }

    #[test]
    fn variable_sorts_follow_first_letter() {
        let f = parse_formula("forall X exists N (X = N)").unwrap();
        match f {
            Formula::Quantified(_, vars, body) => {
                assert_eq!(vars[0].sort, Sort::General);
                match *body {
                    Formula::Quantified(_, inner_vars, _) => {
                        assert_eq!(inner_vars[0].sort, Sort::Integer);
                    }
                    _ => panic!(),
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn zero_ary_atoms_and_comparisons_disambiguate() {
        assert_eq!(
            parse_formula("p").unwrap(),
            Formula::Atom(FolAtom {
                predicate: "p".into(),
                terms: vec![],
            })
        );
        assert_eq!(
            parse_formula("a = b").unwrap(),
            Formula::Comparison(FolTerm::symbol("a"), Relation::Equal, FolTerm::symbol("b"))
        );
    }

    #[test]
    fn chained_comparison_desugars_to_conjunction() {
        let chained = parse_formula("2 <= N1 <= b").unwrap();
        let expected = parse_formula("2 <= N1 and N1 <= b").unwrap();
        assert_eq!(chained, expected);
    }

    #[test]
    fn ill_sorted_arithmetic_is_rejected() {
        assert!(parse_formula("a + 1 = N").is_err());
        assert!(parse_formula("X * 2 = N").is_err());
        assert!(parse_formula("N + 1 = X").is_ok());
    }

    #[test]
    fn lemma_formula_round_trips_through_display() {
        let texts = [
            "forall I, J (I > 1 and J > 1 -> I < I * J)",
            "forall X (prime(X) <-> exists N1 (not composite_1(N1) and X = N1))",
            "forall X (q(X) -> exists N (N = X and N > 0) or p)",
        ];
        for text in texts {
            let parsed = parse_formula(text).unwrap();
            let reparsed = parse_formula(&parsed.to_string()).unwrap();
            assert_eq!(parsed, reparsed, "{text} vs {parsed}");
        }
    }
}
