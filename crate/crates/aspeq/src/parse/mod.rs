//! Parsers for program files, user-guide files, and formulas.
//!
//! All of them share one lexer. Statements are terminated by `.`, and `%`
//! starts a comment running to the end of the line.

mod lexer;

pub mod asp;
pub mod fol;
pub mod guide;

pub use lexer::{tokenize, Position, Token};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{position}: {message}")]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl ParseError {
    pub fn new(position: Position, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

pub(crate) struct TokenStream {
    tokens: Vec<(Token, Position)>,
    index: usize,
}

impl TokenStream {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(TokenStream {
            tokens: tokenize(text)?,
            index: 0,
        })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    pub fn peek_second(&self) -> Option<&Token> {
        self.tokens.get(self.index + 1).map(|(t, _)| t)
    }

    pub fn position(&self) -> Position {
        self.tokens
            .get(self.index)
            .or_else(|| self.tokens.last())
            .map(|(_, p)| *p)
            .unwrap_or_default()
    }

    pub fn advance(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.index).map(|(t, _)| t.clone());
        if token.is_some() {
            self.index += 1;
        }
        token
    }

    pub fn at_end(&self) -> bool {
        self.index >= self.tokens.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.position(), message)
    }

    pub fn expect(&mut self, expected: &Token, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == expected => {
                self.advance();
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {what}, found `{t}`"))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    /// Consumes the token if it matches.
    pub fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.advance();
            true
        } else {
            false
        }
    }

    /// Consumes a lowercase word if it equals `word`.
    pub fn eat_word(&mut self, word: &str) -> bool {
        match self.peek() {
            Some(Token::Ident(w)) if w == word => {
                self.advance();
                true
            }
            _ => false,
        }
    }

    pub fn peek_word(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Token::Ident(w)) if w == word)
    }
}
