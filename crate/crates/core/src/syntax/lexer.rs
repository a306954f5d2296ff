use std::sync::Arc;

use crate::diag::Span;

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    ColonColon,
    Pipe,
    Star,
    Plus,
    Question,
    Slash,
    Eq,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("`${s}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub(crate) fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::ColonColon => "::",
            Tok::Pipe => "|",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Question => "?",
            Tok::Slash => "/",
            Tok::Eq => "=",
            Tok::Arrow => "=>",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    file: Option<Arc<str>>,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, (start, line, col): (usize, u32, u32)) -> Span {
        Span {
            file: self.file.clone(),
            start,
            end: self.pos,
            start_line: line,
            start_col: col,
            end_line: self.line,
            end_col: self.col,
        }
    }

    fn error(&self, at: (usize, u32, u32), msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            message: msg.into(),
            span: self.span_from(at),
            expected: Vec::new(),
        }
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                Some('(') if self.peek2() == Some(':') => {
                    let at = self.mark();
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        match self.bump() {
                            None => return Err(self.error(at, "unterminated comment")),
                            Some('(') if self.peek() == Some(':') => {
                                self.bump();
                                depth += 1;
                            }
                            Some(':') if self.peek() == Some(')') => {
                                self.bump();
                                depth -= 1;
                            }
                            _ => {}
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn string(&mut self, at: (usize, u32, u32)) -> Result<String, SyntaxError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error(at, "unterminated string literal")),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('"') => out.push('"'),
                    Some('\\') => out.push('\\'),
                    _ => return Err(self.error(at, "invalid escape in string literal")),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn next(&mut self) -> Result<Token, SyntaxError> {
        self.skip_trivia()?;
        let at = self.mark();
        let Some(c) = self.peek() else {
            return Ok(Token {
                tok: Tok::Eof,
                span: self.span_from(at),
            });
        };
        let tok = if c.is_ascii_alphabetic() {
            Tok::Ident(self.ident())
        } else if c == '$' {
            self.bump();
            if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                return Err(self.error(at, "expected a variable name after `$`"));
            }
            Tok::Var(self.ident())
        } else if c == '"' {
            Tok::Str(self.string(at)?)
        } else {
            self.bump();
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' if self.peek() == Some(':') => {
                    self.bump();
                    Tok::ColonColon
                }
                ':' => Tok::Colon,
                '|' => Tok::Pipe,
                '*' => Tok::Star,
                '+' => Tok::Plus,
                '?' => Tok::Question,
                '/' => Tok::Slash,
                '=' if self.peek() == Some('>') => {
                    self.bump();
                    Tok::Arrow
                }
                '=' => Tok::Eq,
                other => return Err(self.error(at, format!("unexpected character `{other}`"))),
            }
        };
        Ok(Token {
            tok,
            span: self.span_from(at),
        })
    }
}

pub(crate) fn tokenize(src: &str, file: Option<Arc<str>>) -> Result<Vec<Token>, SyntaxError> {
    let mut lx = Lexer {
        src,
        pos: 0,
        line: 1,
        col: 1,
        file,
    };
    let mut out = Vec::new();
    loop {
        let t = lx.next()?;
        let done = t.tok == Tok::Eof;
        out.push(t);
        if done {
            return Ok(out);
        }
    }
}
