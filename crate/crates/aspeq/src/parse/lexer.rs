use std::fmt;

use super::ParseError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    /// Lowercase-initial word: constant, predicate, or keyword.
    Ident(String),
    /// Uppercase-initial word: variable.
    Variable(String),
    Number(i64),
    TruthConstant(bool),
    Dot,
    Comma,
    Colon,
    Semicolon,
    If, // :-
    LeftParen,
    RightParen,
    LeftBrace,
    RightBrace,
    Dots, // ..
    Plus,
    Minus,
    Star,
    Slash,
    Equal,
    NotEqual,
    Less,
    Greater,
    LessEqual,
    GreaterEqual,
    Arrow,       // ->
    DoubleArrow, // <->
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) | Token::Variable(s) => write!(f, "{s}"),
            Token::Number(n) => write!(f, "{n}"),
            Token::TruthConstant(true) => write!(f, "#true"),
            Token::TruthConstant(false) => write!(f, "#false"),
            Token::Dot => write!(f, "."),
            Token::Comma => write!(f, ","),
            Token::Colon => write!(f, ":"),
            Token::Semicolon => write!(f, ";"),
            Token::If => write!(f, ":-"),
            Token::LeftParen => write!(f, "("),
            Token::RightParen => write!(f, ")"),
            Token::LeftBrace => write!(f, "{{"),
            Token::RightBrace => write!(f, "}}"),
            Token::Dots => write!(f, ".."),
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Slash => write!(f, "/"),
            Token::Equal => write!(f, "="),
            Token::NotEqual => write!(f, "!="),
            Token::Less => write!(f, "<"),
            Token::Greater => write!(f, ">"),
            Token::LessEqual => write!(f, "<="),
            Token::GreaterEqual => write!(f, ">="),
            Token::Arrow => write!(f, "->"),
            Token::DoubleArrow => write!(f, "<->"),
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }
}

pub fn tokenize(text: &str) -> Result<Vec<(Token, Position)>, ParseError> {
    let mut cursor = Cursor::new(text);
    let mut tokens = Vec::new();
    loop {
        while matches!(cursor.peek(), Some(c) if c.is_whitespace()) {
            cursor.bump();
        }
        if cursor.peek() == Some('%') {
            while !matches!(cursor.peek(), None | Some('\n')) {
                cursor.bump();
            }
            continue;
        }
        let position = cursor.position();
        let Some(c) = cursor.peek() else {
            break;
        };
        let token = match c {
            'a'..='z' => {
                let word = take_word(&mut cursor);
                Token::Ident(word)
            }
            'A'..='Z' => {
                let word = take_word(&mut cursor);
                Token::Variable(word)
            }
            '0'..='9' => {
                let mut digits = String::new();
                while matches!(cursor.peek(), Some(c) if c.is_ascii_digit()) {
                    digits.push(cursor.bump().unwrap());
                }
                let value = digits
                    .parse::<i64>()
                    .map_err(|_| ParseError::new(position, "numeral out of range"))?;
                Token::Number(value)
            }
            '#' => {
                cursor.bump();
                let word = take_word(&mut cursor);
                match word.as_str() {
                    "true" => Token::TruthConstant(true),
                    "false" => Token::TruthConstant(false),
                    _ => {
                        return Err(ParseError::new(
                            position,
                            format!("unsupported construct: `#{word}` directive"),
                        ))
                    }
                }
            }
            '.' => {
                cursor.bump();
                if cursor.eat('.') {
                    Token::Dots
                } else {
                    Token::Dot
                }
            }
            ',' => {
                cursor.bump();
                Token::Comma
            }
            ';' => {
                cursor.bump();
                Token::Semicolon
            }
            ':' => {
                cursor.bump();
                if cursor.eat('-') {
                    Token::If
                } else {
                    Token::Colon
                }
            }
            '(' => {
                cursor.bump();
                Token::LeftParen
            }
            ')' => {
                cursor.bump();
                Token::RightParen
            }
            '{' => {
                cursor.bump();
                Token::LeftBrace
            }
            '}' => {
                cursor.bump();
                Token::RightBrace
            }
            '+' => {
                cursor.bump();
                Token::Plus
            }
            '-' => {
                cursor.bump();
                if cursor.eat('>') {
                    Token::Arrow
                } else {
                    Token::Minus
                }
            }
            '*' => {
                cursor.bump();
                Token::Star
            }
            '/' => {
                cursor.bump();
                Token::Slash
            }
            '=' => {
                cursor.bump();
                Token::Equal
            }
            '!' => {
                cursor.bump();
                if cursor.eat('=') {
                    Token::NotEqual
                } else {
                    return Err(ParseError::new(position, "expected `!=`"));
                }
            }
            '<' => {
                cursor.bump();
                if cursor.eat('=') {
                    Token::LessEqual
                } else if cursor.eat('-') {
                    if cursor.eat('>') {
                        Token::DoubleArrow
                    } else {
                        return Err(ParseError::new(position, "expected `<->`"));
                    }
                } else {
                    Token::Less
                }
            }
            '>' => {
                cursor.bump();
                if cursor.eat('=') {
                    Token::GreaterEqual
                } else {
                    Token::Greater
                }
            }
            other => {
                return Err(ParseError::new(
                    position,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        tokens.push((token, position));
    }
    Ok(tokens)
}

fn take_word(cursor: &mut Cursor) -> String {
    let mut word = String::new();
    while matches!(cursor.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
        word.push(cursor.bump().unwrap());
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_rule() {
        let tokens: Vec<Token> = tokenize("prime(I) :- I = a..b, not composite(I).")
            .unwrap()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        assert_eq!(
            tokens,
            vec![
                Token::Ident("prime".into()),
                Token::LeftParen,
                Token::Variable("I".into()),
                Token::RightParen,
                Token::If,
                Token::Variable("I".into()),
                Token::Equal,
                Token::Ident("a".into()),
                Token::Dots,
                Token::Ident("b".into()),
                Token::Comma,
                Token::Ident("not".into()),
                Token::Ident("composite".into()),
                Token::LeftParen,
                Token::Variable("I".into()),
                Token::RightParen,
                Token::Dot,
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let tokens = tokenize("% a comment\np.\n").unwrap();
        assert_eq!(tokens.len(), 2);
        assert_eq!(tokens[0].1, Position { line: 2, column: 1 });
    }

    #[test]
    fn directives_are_rejected() {
        let err = tokenize("#show prime/1.").unwrap_err();
        assert!(err.message.contains("unsupported construct"));
    }

    #[test]
    fn arrows_and_comparisons() {
        let tokens: Vec<Token> = tokenize("<-> -> <= >= < > != ..")
            .unwrap()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        assert_eq!(
            tokens,
            vec![
                Token::DoubleArrow,
                Token::Arrow,
                Token::LessEqual,
                Token::GreaterEqual,
                Token::Less,
                Token::Greater,
                Token::NotEqual,
                Token::Dots,
            ]
        );
    }
}
