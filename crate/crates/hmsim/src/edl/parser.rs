use super::ast::*;
use super::lexer::{split_complex, Token, TokenKind};
use super::ParseError;

/// Parses a token list into a syntax tree, stopping at the first error.
pub fn parse(tokens: &[Token]) -> Result<ExperimentSpec, ParseError> {
    let mut parser = Parser { tokens, index: 0 };
    let mut statements = Vec::new();
    while parser.peek().is_some() {
        statements.push(parser.statement()?);
    }
    Ok(ExperimentSpec { statements })
}

struct Parser<'a> {
    tokens: &'a [Token],
    index: usize,
}

fn describe(token: Option<&Token>) -> String {
    match token {
        None => "end of input".to_string(),
        Some(t) => match t.kind {
            TokenKind::Keyword => format!("keyword '{}'", t.lexeme),
            TokenKind::Ident => format!("identifier '{}'", t.lexeme),
            TokenKind::Int => format!("integer {}", t.lexeme),
            TokenKind::Float => format!("number {}", t.lexeme),
            TokenKind::Complex => format!("complex number {}", t.lexeme),
            TokenKind::Punct => format!("'{}'", t.lexeme),
        },
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.index)
    }

    /// Where an error about the next token points: the token itself, or the
    /// end of the last token at end of input.
    fn here(&self) -> Pos {
        match self.peek() {
            Some(t) => t.pos(),
            None => self.tokens.last().map_or(Pos::new(1, 1), Token::end),
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::new(
            format!("expected {expected}, found {}", describe(self.peek())),
            self.here(),
            Some(expected.to_string()),
        ))
    }

    fn at(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.peek().is_some_and(|t| t.is(kind, lexeme))
    }

    fn eat(&mut self, kind: TokenKind, lexeme: &str) -> bool {
        let found = self.at(kind, lexeme);
        if found {
            self.index += 1;
        }
        found
    }

    fn expect(&mut self, kind: TokenKind, lexeme: &str) -> Result<Pos, ParseError> {
        let pos = self.here();
        if self.eat(kind, lexeme) {
            Ok(pos)
        } else {
            self.error(&format!("'{lexeme}'"))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Pos, ParseError> {
        self.expect(TokenKind::Keyword, word)
    }

    fn punct(&mut self, p: &str) -> Result<Pos, ParseError> {
        self.expect(TokenKind::Punct, p)
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.index += 1;
                Ok(Ident {
                    name: t.lexeme.clone(),
                    pos: t.pos(),
                })
            }
            _ => self.error("identifier"),
        }
    }

    fn unsigned(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Int && !t.lexeme.starts_with('-') => match t.lexeme.parse() {
                Ok(v) => {
                    self.index += 1;
                    Ok(v)
                }
                Err(_) => Err(ParseError::new(
                    format!("integer {} is too large", t.lexeme),
                    t.pos(),
                    None,
                )),
            },
            _ => self.error("non-negative integer"),
        }
    }

    /// A real literal; integers are accepted where a float is expected.
    fn real(&mut self) -> Result<f64, ParseError> {
        match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::Int | TokenKind::Float) => {
                let value = finite(&t.lexeme, t)?;
                self.index += 1;
                Ok(value)
            }
            _ => self.error("number"),
        }
    }

    fn complex(&mut self) -> Result<(f64, f64), ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Complex => {
                let (re, im) = split_complex(&t.lexeme).expect("lexer produced a complex literal");
                let value = (finite(re, t)?, finite(im, t)?);
                self.index += 1;
                Ok(value)
            }
            Some(t) if matches!(t.kind, TokenKind::Int | TokenKind::Float) => Ok((self.real()?, 0.0)),
            _ => self.error("complex number"),
        }
    }

    /// `[ item {, item} ]`
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.punct("[")?;
        let mut items = vec![item(self)?];
        while self.eat(TokenKind::Punct, ",") {
            items.push(item(self)?);
        }
        self.punct("]")?;
        Ok(items)
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let pos = self.here();
        let keyword = match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword => t.lexeme.as_str(),
            _ => return self.error("statement"),
        };
        let stmt = match keyword {
            "space" => {
                self.index += 1;
                let name = self.ident()?;
                self.keyword("dim")?;
                let dim = self.unsigned()?;
                Statement::Space(SpaceDecl { pos, name, dim })
            }
            "state" => {
                self.index += 1;
                let name = self.ident()?;
                self.keyword("in")?;
                let space = self.ident()?;
                self.punct("=")?;
                let init = if self.eat(TokenKind::Keyword, "bloch") {
                    self.punct("(")?;
                    let theta = self.real()?;
                    self.punct(",")?;
                    let phi = self.real()?;
                    self.punct(")")?;
                    StateInit::Bloch { theta, phi }
                } else if self.at(TokenKind::Punct, "[") {
                    StateInit::Amplitudes(self.list(Self::complex)?)
                } else {
                    return self.error("'[' or 'bloch'");
                };
                Statement::State(StateDecl { pos, name, space, init })
            }
            "proj" => {
                self.index += 1;
                let name = self.ident()?;
                self.keyword("on")?;
                let space = self.ident()?;
                self.punct("=")?;
                let def = if self.eat(TokenKind::Keyword, "span") {
                    ProjDef::Span(self.list(Self::unsigned)?)
                } else if self.eat(TokenKind::Keyword, "ketbra") {
                    ProjDef::Ketbra(self.ident()?)
                } else if self.eat(TokenKind::Keyword, "not") {
                    ProjDef::Not(self.ident()?)
                } else {
                    return self.error("'span', 'ketbra' or 'not'");
                };
                Statement::Proj(ProjDecl { pos, name, space, def })
            }
            "history" => {
                self.index += 1;
                let name = self.ident()?;
                self.punct("=")?;
                let entries = self.list(|p| {
                    let time = p.real()?;
                    p.punct(":")?;
                    Ok(HistoryEntry { time, proj: p.ident()? })
                })?;
                Statement::History(HistoryDecl { pos, name, entries })
            }
            "orhistory" => {
                self.index += 1;
                let name = self.ident()?;
                self.punct("=")?;
                self.keyword("or")?;
                let branches = self.list(Self::ident)?;
                Statement::OrHistory(OrHistoryDecl { pos, name, branches })
            }
            _ => return self.error("statement"),
        };
        self.punct(";")?;
        Ok(stmt)
    }
}

fn finite(text: &str, token: &Token) -> Result<f64, ParseError> {
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::new(
            format!("number {} is out of range", token.lexeme),
            token.pos(),
            None,
        )),
    }
}
