use num_bigint::BigInt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Hash,
    Comma,
    Colon,
    Equals,
    LParen,
    RParen,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(_) => "string".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Equals => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub len: usize,
}

impl Token {
    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            offset: self.offset,
            message: message.into(),
        }
    }

    /// True when `next` starts right where this token ends.
    pub(crate) fn touches(&self, next: &Token) -> bool {
        self.offset + self.len == next.offset
    }
}

/// Splits a document into tokens. `%` starts a comment running to the end
/// of the line; line breaks are kept as tokens.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let mut chars = text.char_indices().peekable();
    let err = |offset: usize, line: usize, line_start: usize, msg: String| ParseError {
        line,
        column: text[line_start..offset].chars().count() + 1,
        offset,
        message: msg,
    };
    while let Some(&(i, c)) = chars.peek() {
        let column = text[line_start..i].chars().count() + 1;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '#' => Some(Tok::Hash),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Equals),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            out.push(Token {
                tok,
                line,
                column,
                offset: i,
                len: 1,
            });
            continue;
        }
        match c {
            '\n' => {
                chars.next();
                out.push(Token {
                    tok: Tok::Newline,
                    line,
                    column,
                    offset: i,
                    len: 1,
                });
                line += 1;
                line_start = i + 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
            }
            '%' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut end = None;
                while let Some((j, c)) = chars.next() {
                    match c {
                        '"' => {
                            end = Some(j);
                            break;
                        }
                        '\\' => match chars.next() {
                            Some((_, '"')) => s.push('"'),
                            Some((_, '\\')) => s.push('\\'),
                            Some((_, 'n')) => s.push('\n'),
                            Some((k, other)) => {
                                return Err(err(k, line, line_start, format!("unknown escape `\\{other}`")))
                            }
                            None => break,
                        },
                        '\n' => break,
                        c => s.push(c),
                    }
                }
                let Some(end) = end else {
                    return Err(err(i, line, line_start, "unterminated string".into()));
                };
                out.push(Token {
                    tok: Tok::Str(s),
                    line,
                    column,
                    offset: i,
                    len: end + 1 - i,
                });
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    chars.next();
                }
                let n: BigInt = text[i..end].parse().expect("digits");
                out.push(Token {
                    tok: Tok::Int(n),
                    line,
                    column,
                    offset: i,
                    len: end - i,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                out.push(Token {
                    tok: Tok::Ident(text[i..end].to_string()),
                    line,
                    column,
                    offset: i,
                    len: end - i,
                });
            }
            other => return Err(err(i, line, line_start, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: text[line_start..].chars().count() + 1,
        offset: text.len(),
        len: 0,
    });
    Ok(out)
}
