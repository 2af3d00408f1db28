use std::iter::Peekable;
use std::str::CharIndices;

use crate::error::{Error, ParseError, ParseErrorKind};
use crate::rational::parse_rational;

use super::{Literal, Polarity, Program, Rule, SignedAtom, Symbol, WeightedFact};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept reserved `__` names, as produced by the rewrites.
    pub allow_reserved: bool,
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with(text, ParseOptions::default())
}

pub fn parse_program_with(text: &str, options: ParseOptions) -> Result<Program, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    Parser {
        tokens,
        pos: 0,
        options,
        program: Program::new(),
    }
    .parse()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Not,
    ColonColon,
    If,
    Semi,
    Comma,
    Dot,
    Minus,
    Slash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Not => "`not`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::If => "`:-`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    text: &'a str,
    chars: Peekable<CharIndices<'a>>,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            chars: text.char_indices().peekable(),
            line: 1,
            line_start: 0,
        }
    }

    fn column(&self, offset: usize) -> usize {
        self.text[self.line_start..offset].chars().count() + 1
    }

    fn error(&self, offset: usize, message: String) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(offset),
            kind: ParseErrorKind::Syntax,
            message,
        }
    }

    fn take_while(&mut self, start: usize, pred: impl Fn(char) -> bool) -> &'a str {
        let mut end = start;
        while let Some(&(i, c)) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            end = i + c.len_utf8();
            self.chars.next();
        }
        &self.text[start..end]
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut tokens = Vec::new();
        while let Some(&(offset, c)) = self.chars.peek() {
            if c == '\n' {
                self.chars.next();
                self.line += 1;
                self.line_start = offset + 1;
                continue;
            }
            if c.is_whitespace() {
                self.chars.next();
                continue;
            }
            if c == '%' {
                self.take_while(offset, |c| c != '\n');
                continue;
            }
            let column = self.column(offset);
            let line = self.line;
            let tok = match c {
                'a'..='z' | 'A'..='Z' | '_' => {
                    let word = self.take_while(offset, |c| c.is_ascii_alphanumeric() || c == '_');
                    if word == "not" {
                        Tok::Not
                    } else {
                        Tok::Ident(word.to_string())
                    }
                }
                '0'..='9' => {
                    let mut end = self.take_while(offset, |c| c.is_ascii_digit()).len() + offset;
                    // A decimal point needs a digit after it; otherwise the dot ends a statement.
                    let rest = &self.text[end..];
                    if rest.starts_with('.') && rest[1..].starts_with(|c: char| c.is_ascii_digit())
                    {
                        self.chars.next();
                        end = offset + self.take_while(offset, |c| c.is_ascii_digit()).len();
                    }
                    Tok::Number(self.text[offset..end].to_string())
                }
                ':' => {
                    self.chars.next();
                    match self.chars.peek() {
                        Some(&(_, ':')) => {
                            self.chars.next();
                            Tok::ColonColon
                        }
                        Some(&(_, '-')) => {
                            self.chars.next();
                            Tok::If
                        }
                        _ => return Err(self.error(offset, "expected `::` or `:-`".into())),
                    }
                }
                ';' | ',' | '.' | '-' | '/' => {
                    self.chars.next();
                    match c {
                        ';' => Tok::Semi,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        '-' => Tok::Minus,
                        _ => Tok::Slash,
                    }
                }
                other => return Err(self.error(offset, format!("unexpected character `{other}`"))),
            };
            tokens.push(Spanned { tok, line, column });
        }
        tokens.push(Spanned {
            tok: Tok::Eof,
            line: self.line,
            column: self.column(self.text.len()),
        });
        Ok(tokens)
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    options: ParseOptions,
    program: Program,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let token = self.tokens[self.pos].clone();
        if token.tok != Tok::Eof {
            self.pos += 1;
        }
        token
    }

    fn error_at(&self, at: &Spanned, kind: ParseErrorKind, message: String) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            kind,
            message,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let here = self.here();
        self.error_at(
            here,
            ParseErrorKind::Syntax,
            format!("expected {expected}, found {}", here.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Spanned, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn parse(mut self) -> Result<Program, ParseError> {
        while *self.peek() != Tok::Eof {
            self.statement()?;
        }
        Ok(self.program)
    }

    fn statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Number(_) => self.weighted_fact(),
            Tok::If => {
                self.bump();
                let body = self.body()?;
                self.expect(Tok::Dot, "`,` or `.`")?;
                self.program.add_rule(Rule::new([], body));
                Ok(())
            }
            Tok::Ident(_) | Tok::Minus => {
                let mut head = vec![self.signed_atom()?];
                while *self.peek() == Tok::Semi {
                    self.bump();
                    head.push(self.signed_atom()?);
                }
                let body = match self.peek() {
                    Tok::If => {
                        self.bump();
                        self.body()?
                    }
                    _ => Vec::new(),
                };
                self.expect(Tok::Dot, "`.`")?;
                self.program.add_rule(Rule::new(head, body));
                Ok(())
            }
            _ => Err(self.unexpected("a weight, an atom or `:-`")),
        }
    }

    fn weighted_fact(&mut self) -> Result<(), ParseError> {
        let start = self.here().clone();
        let mut text = match self.bump().tok {
            Tok::Number(n) => n,
            _ => unreachable!("caller checked for a number"),
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump().tok {
                Tok::Number(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                _ => {
                    return Err(self.error_at(
                        &start,
                        ParseErrorKind::Syntax,
                        "malformed fraction".into(),
                    ))
                }
            }
        }
        let weight = parse_rational(&text).ok_or_else(|| {
            self.error_at(
                &start,
                ParseErrorKind::Syntax,
                format!("malformed weight `{text}`"),
            )
        })?;
        self.expect(Tok::ColonColon, "`::`")?;
        let atom = self.signed_atom()?;
        self.expect(Tok::Dot, "`.`")?;
        let fact = WeightedFact::new(atom, weight).map_err(|e| self.convert(&start, e))?;
        self.program
            .add_weighted_fact(fact)
            .map_err(|e| self.convert(&start, e))
    }

    fn convert(&self, at: &Spanned, error: Error) -> ParseError {
        let kind = match error {
            Error::WeightOutOfRange { .. } => ParseErrorKind::WeightOutOfRange,
            Error::DuplicateWeightedFact(_) => ParseErrorKind::DuplicateWeightedFact,
            Error::ConflictingWeightedFacts(_) => ParseErrorKind::ConflictingWeightedFacts,
            _ => ParseErrorKind::Syntax,
        };
        self.error_at(at, kind, error.to_string())
    }

    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut body = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            body.push(self.literal()?);
        }
        Ok(body)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            Ok(Literal::not(self.signed_atom()?))
        } else {
            Ok(Literal::pos(self.signed_atom()?))
        }
    }

    fn signed_atom(&mut self) -> Result<SignedAtom, ParseError> {
        let polarity = if *self.peek() == Tok::Minus {
            self.bump();
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        let at = self.here().clone();
        let name = match &at.tok {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.unexpected("an atom")),
        };
        self.bump();
        let symbol = if name.starts_with("__") {
            if !self.options.allow_reserved {
                return Err(self.error_at(
                    &at,
                    ParseErrorKind::ReservedName,
                    format!("`{name}` uses the reserved prefix `__`"),
                ));
            }
            Symbol::new_any(&name)
        } else {
            Symbol::new(&name)
        };
        let symbol = symbol.map_err(|_| {
            self.error_at(
                &at,
                ParseErrorKind::Syntax,
                format!("invalid atom name `{name}`"),
            )
        })?;
        Ok(SignedAtom::new(symbol, polarity))
    }
}
