//! Parser for mini-gringo programs.
//!
//! One rule per `.`-terminated statement. Aggregates, pools, conditional
//! literals, classical negation, and `#` directives are out of the fragment
//! and rejected with an "unsupported construct" error.

use crate::syntax::asp::{Atom, BodyElement, Comparison, Head, Literal, Program, Rule, Sign, Term};
use crate::syntax::{ArithOp, Relation};

use super::{ParseError, Token, TokenStream};

const RESERVED: &[&str] = &["not", "inf", "sup", "and", "or", "forall", "exists"];

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut stream = TokenStream::new(text)?;
    let mut rules = Vec::new();
    while !stream.at_end() {
        rules.push(parse_rule(&mut stream)?);
    }
    Ok(Program { rules })
}

fn parse_rule(stream: &mut TokenStream) -> Result<Rule, ParseError> {
    let head = match stream.peek() {
        Some(Token::If) => {
            stream.advance();
            let body = parse_body(stream)?;
            stream.expect(&Token::Dot, "`.`")?;
            return Ok(Rule {
                head: Head::Constraint,
                body,
            });
        }
        Some(Token::LeftBrace) => {
            stream.advance();
            let atom = parse_atom(stream)?;
            if matches!(
                stream.peek(),
                Some(Token::Semicolon | Token::Comma | Token::Colon)
            ) {
                return Err(
                    stream.error("unsupported construct: choice rules must contain a single atom")
                );
            }
            stream.expect(&Token::RightBrace, "`}`")?;
            Head::Choice(atom)
        }
        Some(Token::Minus) => {
            return Err(stream.error("unsupported construct: classical negation"));
        }
        _ => Head::Basic(parse_atom(stream)?),
    };
    let body = if stream.eat(&Token::If) {
        parse_body(stream)?
    } else {
        Vec::new()
    };
    stream.expect(&Token::Dot, "`.`")?;
    Ok(Rule { head, body })
}

fn parse_body(stream: &mut TokenStream) -> Result<Vec<BodyElement>, ParseError> {
    // `:- .` is an empty body (an unconditional constraint, say).
    if stream.peek() == Some(&Token::Dot) {
        return Ok(Vec::new());
    }
    let mut elements = vec![parse_body_element(stream)?];
    while stream.eat(&Token::Comma) {
        elements.push(parse_body_element(stream)?);
    }
    if matches!(stream.peek(), Some(Token::Semicolon)) {
        return Err(stream.error("unsupported construct: `;` in rule body"));
    }
    Ok(elements)
}

fn parse_body_element(stream: &mut TokenStream) -> Result<BodyElement, ParseError> {
    if stream.eat_word("not") {
        let sign = if stream.eat_word("not") {
            Sign::DoubleNegative
        } else {
            Sign::Negative
        };
        let atom = parse_atom(stream)?;
        return Ok(BodyElement::Literal(Literal { sign, atom }));
    }
    // An identifier followed by `(` is an atom; an identifier followed by a
    // term or comparison operator starts a comparison; a bare identifier is
    // a 0-ary atom.
    if let Some(Token::Ident(word)) = stream.peek() {
        let is_extremum = word == "inf" || word == "sup";
        match stream.peek_second() {
            Some(Token::LeftParen) if !is_extremum => {
                return Ok(BodyElement::Literal(Literal {
                    sign: Sign::Positive,
                    atom: parse_atom(stream)?,
                }));
            }
            Some(
                Token::Plus
                | Token::Minus
                | Token::Star
                | Token::Dots
                | Token::Equal
                | Token::NotEqual
                | Token::Less
                | Token::Greater
                | Token::LessEqual
                | Token::GreaterEqual,
            ) => (),
            _ if is_extremum => (),
            _ => {
                return Ok(BodyElement::Literal(Literal {
                    sign: Sign::Positive,
                    atom: parse_atom(stream)?,
                }));
            }
        }
    }
    let lhs = parse_term(stream)?;
    let relation = parse_relation(stream)?;
    let rhs = parse_term(stream)?;
    Ok(BodyElement::Comparison(Comparison { lhs, relation, rhs }))
}

fn parse_relation(stream: &mut TokenStream) -> Result<Relation, ParseError> {
    let relation = match stream.peek() {
        Some(Token::Equal) => Relation::Equal,
        Some(Token::NotEqual) => Relation::NotEqual,
        Some(Token::Less) => Relation::Less,
        Some(Token::Greater) => Relation::Greater,
        Some(Token::LessEqual) => Relation::LessEqual,
        Some(Token::GreaterEqual) => Relation::GreaterEqual,
        _ => return Err(stream.error("expected comparison operator")),
    };
    stream.advance();
    Ok(relation)
}

fn parse_atom(stream: &mut TokenStream) -> Result<Atom, ParseError> {
    let predicate = match stream.peek() {
        Some(Token::Ident(word)) => {
            if RESERVED.contains(&word.as_str()) {
                return Err(stream.error(format!("`{word}` cannot be used as a predicate name")));
            }
            word.clone()
        }
        Some(t) => return Err(stream.error(format!("expected atom, found `{t}`"))),
        None => return Err(stream.error("expected atom, found end of input")),
    };
    stream.advance();
    let mut terms = Vec::new();
    if stream.eat(&Token::LeftParen) {
        terms.push(parse_term(stream)?);
        while stream.eat(&Token::Comma) {
            terms.push(parse_term(stream)?);
        }
        if matches!(stream.peek(), Some(Token::Semicolon)) {
            return Err(stream.error("unsupported construct: pooling"));
        }
        stream.expect(&Token::RightParen, "`)`")?;
    }
    Ok(Atom { predicate, terms })
}

pub(super) fn parse_term(stream: &mut TokenStream) -> Result<Term, ParseError> {
    let lhs = parse_additive(stream)?;
    if stream.eat(&Token::Dots) {
        let rhs = parse_additive(stream)?;
        if matches!(stream.peek(), Some(Token::Dots)) {
            return Err(stream.error("unsupported construct: chained `..`"));
        }
        return Ok(Term::Interval(lhs.into(), rhs.into()));
    }
    Ok(lhs)
}

fn parse_additive(stream: &mut TokenStream) -> Result<Term, ParseError> {
    let mut term = parse_multiplicative(stream)?;
    loop {
        let op = match stream.peek() {
            Some(Token::Plus) => ArithOp::Add,
            Some(Token::Minus) => ArithOp::Subtract,
            _ => break,
        };
        stream.advance();
        let rhs = parse_multiplicative(stream)?;
        term = Term::BinaryOperation(op, term.into(), rhs.into());
    }
    Ok(term)
}

fn parse_multiplicative(stream: &mut TokenStream) -> Result<Term, ParseError> {
    let mut term = parse_unary(stream)?;
    while stream.eat(&Token::Star) {
        let rhs = parse_unary(stream)?;
        term = Term::BinaryOperation(ArithOp::Multiply, term.into(), rhs.into());
    }
    Ok(term)
}

fn parse_unary(stream: &mut TokenStream) -> Result<Term, ParseError> {
    if stream.eat(&Token::Minus) {
        let inner = parse_unary(stream)?;
        // Fold a negated numeral into the numeral itself.
        if let Term::Precomputed(crate::syntax::asp::PrecomputedTerm::Numeral(n)) = inner {
            return Ok(Term::numeral(-n));
        }
        return Ok(Term::Negative(inner.into()));
    }
    parse_primary(stream)
}

fn parse_primary(stream: &mut TokenStream) -> Result<Term, ParseError> {
    match stream.peek().cloned() {
        Some(Token::Number(n)) => {
            stream.advance();
            Ok(Term::numeral(n))
        }
        Some(Token::Ident(word)) => {
            stream.advance();
            match word.as_str() {
                "inf" => Ok(Term::Precomputed(
                    crate::syntax::asp::PrecomputedTerm::Infimum,
                )),
                "sup" => Ok(Term::Precomputed(
                    crate::syntax::asp::PrecomputedTerm::Supremum,
                )),
                _ => Ok(Term::symbol(word)),
            }
        }
        Some(Token::Variable(name)) => {
            stream.advance();
            Ok(Term::variable(name))
        }
        Some(Token::LeftParen) => {
            stream.advance();
            let term = parse_term(stream)?;
            stream.expect(&Token::RightParen, "`)`")?;
            Ok(term)
        }
        Some(t) => Err(stream.error(format!("expected term, found `{t}`"))),
        None => Err(stream.error("expected term, found end of input")),
    }
}
