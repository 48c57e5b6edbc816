use serde::Serialize;

use super::{ParseError, Pos};

pub const KEYWORDS: &[&str] = &[
    "space",
    "dim",
    "state",
    "in",
    "bloch",
    "proj",
    "on",
    "span",
    "ketbra",
    "not",
    "history",
    "orhistory",
    "or",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TokenKind {
    Keyword,
    Ident,
    Int,
    Float,
    Complex,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }

    /// Position just past the token.
    pub fn end(&self) -> Pos {
        Pos::new(self.line, self.column + self.lexeme.chars().count())
    }

    pub fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.kind == kind && self.lexeme == lexeme
    }
}

struct Cursor {
    chars: Vec<char>,
    index: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.index + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.index += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Length in chars of a real literal starting `offset` chars ahead:
    /// `-?digits(.digits)?([eE][+-]?digits)?`.
    fn real_len(&self, offset: usize) -> Option<(usize, bool)> {
        let at = |i: usize| self.peek_at(offset + i);
        let mut n = 0;
        if at(0) == Some('-') {
            n += 1;
        }
        let digits = |mut i: usize| {
            let start = i;
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            (i > start).then_some(i)
        };
        n = digits(n)?;
        let mut float = false;
        if at(n) == Some('.') {
            if let Some(end) = digits(n + 1) {
                n = end;
                float = true;
            }
        }
        if matches!(at(n), Some('e' | 'E')) {
            let sign = usize::from(matches!(at(n + 1), Some('+' | '-')));
            if let Some(end) = digits(n + 1 + sign) {
                n = end;
                float = true;
            }
        }
        Some((n, float))
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line; `a+bi` / `a-bi` with no spaces lex as one complex literal.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: source.chars().collect(),
        index: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let (kind, len) = if is_ident_start(c) {
            let mut n = 0;
            while cur.peek_at(n).is_some_and(is_ident_char) {
                n += 1;
            }
            let word: String = cur.chars[cur.index..cur.index + n].iter().collect();
            let kind = if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            (kind, n)
        } else if let Some((n, float)) = cur.real_len(0) {
            let imaginary = matches!(cur.peek_at(n), Some('+' | '-'))
                .then(|| {
                    // The sign of the imaginary part is the literal's own '+'/'-'.
                    let skip = usize::from(cur.peek_at(n) == Some('+'));
                    cur.real_len(n + skip).map(|(m, _)| n + skip + m)
                })
                .flatten()
                .filter(|&end| cur.peek_at(end) == Some('i') && !cur.peek_at(end + 1).is_some_and(is_ident_char));
            match imaginary {
                Some(end) => (TokenKind::Complex, end + 1),
                None if float => (TokenKind::Float, n),
                None => (TokenKind::Int, n),
            }
        } else if ";=[](),:".contains(c) {
            (TokenKind::Punct, 1)
        } else {
            return Err(ParseError::new(
                format!("unexpected character {c:?}"),
                Pos::new(line, column),
                None,
            ));
        };
        let lexeme: String = cur.chars[cur.index..cur.index + len].iter().collect();
        for _ in 0..len {
            cur.bump();
        }
        tokens.push(Token {
            kind,
            lexeme,
            line,
            column,
        });
    }
    Ok(tokens)
}

/// Splits a complex lexeme `a+bi` / `a-bi` into its parts.
pub(crate) fn split_complex(lexeme: &str) -> Option<(&str, &str)> {
    let body = lexeme.strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let imag = &body[split..];
    Some((&body[..split], imag.strip_prefix('+').unwrap_or(imag)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src).unwrap().into_iter().map(|t| (t.kind, t.lexeme)).collect()
    }

    #[test]
    fn space_declaration() {
        use TokenKind::*;
        assert_eq!(
            kinds("space Q dim 2;"),
            vec![
                (Keyword, "space".into()),
                (Ident, "Q".into()),
                (Keyword, "dim".into()),
                (Int, "2".into()),
                (Punct, ";".into())
            ]
        );
    }

    #[test]
    fn numbers() {
        use TokenKind::*;
        assert_eq!(kinds("0.5-0.5i"), vec![(Complex, "0.5-0.5i".into())]);
        assert_eq!(kinds("1+2i"), vec![(Complex, "1+2i".into())]);
        assert_eq!(kinds("-1e-3+2.5E+2i"), vec![(Complex, "-1e-3+2.5E+2i".into())]);
        assert!(tokenize("0.5 - 0.5i").is_err());
        assert_eq!(kinds("-0.25"), vec![(Float, "-0.25".into())]);
        assert_eq!(kinds("1e20"), vec![(Float, "1e20".into())]);
        assert_eq!(kinds("12"), vec![(Int, "12".into())]);
        // Not a complex literal, and a bare '+' is not a token.
        let err = tokenize("1+2id").unwrap_err();
        assert_eq!((err.line, err.column), (1, 2));
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("# header\n  proj P on Q = span [0]; # trailing\nspace").unwrap();
        assert_eq!(toks[0].lexeme, "proj");
        assert_eq!((toks[0].line, toks[0].column), (2, 3));
        let last = toks.last().unwrap();
        assert_eq!((last.line, last.column, last.kind), (3, 1, TokenKind::Keyword));
    }

    #[test]
    fn illegal_character() {
        let err = tokenize("state @x").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        let err = tokenize("space Q dim 2;\n  $").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert!(tokenize("1.").is_err());
    }

    #[test]
    fn complex_splitting() {
        assert_eq!(split_complex("0.5-0.5i"), Some(("0.5", "-0.5")));
        assert_eq!(split_complex("-1e-3+2e-3i"), Some(("-1e-3", "2e-3")));
        assert_eq!(split_complex("1+2i"), Some(("1", "2")));
    }
}
