//! Parser for user-guide, specification, and helper files.
//!
//! These files consist of `.`-terminated statements: `input:`, `output:`,
//! `assume:`, and, in specification and helper files, `spec:`, `lemma:`,
//! and `axiom:` statements.

use crate::syntax::fol::Formula;
use crate::syntax::Predicate;

use super::{fol, ParseError, Token, TokenStream};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputDecl {
    /// `input: c.` — a placeholder.
    Placeholder(String),
    /// `input: c -> integer.` — a placeholder with an integrality assumption.
    IntegerPlaceholder(String),
    /// `input: p/n.` — an input predicate.
    Predicate(Predicate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Input(Vec<InputDecl>),
    Output(Vec<Predicate>),
    Assume(Formula),
    Spec(Formula),
    Lemma(Formula),
    Axiom(Formula),
}

pub fn parse_statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let mut stream = TokenStream::new(text)?;
    let mut statements = Vec::new();
    while !stream.at_end() {
        statements.push(parse_statement(&mut stream)?);
    }
    Ok(statements)
}

fn parse_statement(stream: &mut TokenStream) -> Result<Statement, ParseError> {
    let keyword = match stream.peek().cloned() {
        Some(Token::Ident(word)) => word,
        Some(t) => return Err(stream.error(format!("expected statement keyword, found `{t}`"))),
        None => return Err(stream.error("expected statement keyword")),
    };
    stream.advance();
    stream.expect(&Token::Colon, "`:`")?;
    let statement = match keyword.as_str() {
        "input" => {
            let mut decls = vec![parse_input_decl(stream)?];
            while stream.eat(&Token::Comma) {
                decls.push(parse_input_decl(stream)?);
            }
            Statement::Input(decls)
        }
        "output" => {
            let mut predicates = vec![parse_predicate_decl(stream)?];
            while stream.eat(&Token::Comma) {
                predicates.push(parse_predicate_decl(stream)?);
            }
            Statement::Output(predicates)
        }
        "assume" => Statement::Assume(fol::formula(stream)?),
        "spec" => Statement::Spec(fol::formula(stream)?),
        "lemma" => Statement::Lemma(fol::formula(stream)?),
        "axiom" => Statement::Axiom(fol::formula(stream)?),
        other => {
            return Err(stream.error(format!("unknown statement keyword `{other}`")));
        }
    };
    stream.expect(&Token::Dot, "`.`")?;
    Ok(statement)
}

fn parse_input_decl(stream: &mut TokenStream) -> Result<InputDecl, ParseError> {
    let name = parse_symbolic_name(stream)?;
    match stream.peek() {
        Some(Token::Slash) => {
            stream.advance();
            let arity = parse_arity(stream)?;
            Ok(InputDecl::Predicate(Predicate::new(name, arity)))
        }
        Some(Token::Arrow) => {
            stream.advance();
            if !stream.eat_word("integer") {
                return Err(stream.error("expected `integer` after `->`"));
            }
            Ok(InputDecl::IntegerPlaceholder(name))
        }
        _ => Ok(InputDecl::Placeholder(name)),
    }
}

fn parse_predicate_decl(stream: &mut TokenStream) -> Result<Predicate, ParseError> {
    let name = parse_symbolic_name(stream)?;
    stream.expect(&Token::Slash, "`/`")?;
    let arity = parse_arity(stream)?;
    Ok(Predicate::new(name, arity))
}

fn parse_symbolic_name(stream: &mut TokenStream) -> Result<String, ParseError> {
    match stream.peek().cloned() {
        Some(Token::Ident(word)) => {
            stream.advance();
            Ok(word)
        }
        Some(t) => Err(stream.error(format!("expected name, found `{t}`"))),
        None => Err(stream.error("expected name")),
    }
}

fn parse_arity(stream: &mut TokenStream) -> Result<usize, ParseError> {
    match stream.peek().cloned() {
        Some(Token::Number(n)) if n >= 0 => {
            stream.advance();
            Ok(n as usize)
        }
        _ => Err(stream.error("expected arity")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_primes_guide() {
        let statements =
            parse_statements("input: a -> integer, b -> integer.\noutput: prime/1.\n").unwrap();
        assert_eq!(
            statements,
            vec![
                Statement::Input(vec![
                    InputDecl::IntegerPlaceholder("a".into()),
                    InputDecl::IntegerPlaceholder("b".into()),
                ]),
                Statement::Output(vec![Predicate::new("prime", 1)]),
            ]
        );
    }

    #[test]
    fn parse_orphan_guide() {
        let statements =
            parse_statements("input: living/1, father/2, mother/2.\noutput: orphan/1.\n").unwrap();
        assert_eq!(
            statements,
            vec![
                Statement::Input(vec![
                    InputDecl::Predicate(Predicate::new("living", 1)),
                    InputDecl::Predicate(Predicate::new("father", 2)),
                    InputDecl::Predicate(Predicate::new("mother", 2)),
                ]),
                Statement::Output(vec![Predicate::new("orphan", 1)]),
            ]
        );
    }

    #[test]
    fn parse_assume_and_lemma() {
        let statements = parse_statements(
            "assume: exists N (a = N) and exists N (b = N).\n\
             lemma: forall I, J (I > 1 and J > 1 -> I < I*J).\n",
        )
        .unwrap();
        assert!(matches!(statements[0], Statement::Assume(_)));
        assert!(matches!(statements[1], Statement::Lemma(_)));
    }

    #[test]
    fn statements_in_any_order() {
        let statements =
            parse_statements("output: prime/1.\ninput: a.\nassume: exists N (a = N).\ninput: b.\n")
                .unwrap();
        assert_eq!(statements.len(), 4);
    }

    #[test]
    fn comments_are_ignored() {
        let statements =
            parse_statements("% the guide\ninput: a. % a placeholder\noutput: p/1.").unwrap();
        assert_eq!(statements.len(), 2);
    }
}
