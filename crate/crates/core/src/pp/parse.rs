//! Parser for the definition language
//!
//! ```text
//! def E(<free-list>) := [exists <var-list> .] <conjunct> { & <conjunct> }
//! conjunct := E(<var>, <var>) | <var> = <var>
//! ```
//!
//! A free list of length `2d` gives dimension `d`: the first half are the
//! source coordinates, the second half the target coordinates. A list entry
//! `x1:3` abbreviates `x1,x2,x3`. `#` starts a comment running to the end of
//! the line.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{PPDefinition, UnionFind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Range(String, usize, usize),
    LParen,
    RParen,
    Comma,
    Define,
    Dot,
    Amp,
    Eq,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |i: &mut usize, k: usize| {
            *i += k;
            col += k;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | ',' | '.' | '&' | '=' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '&' => Tok::Amp,
                    _ => Tok::Eq,
                };
                advance(&mut i, 1);
                out.push(Token { tok, line: l0, column: c0 });
            }
            ':' => {
                if chars.get(i + 1) == Some(&'=') {
                    advance(&mut i, 2);
                    out.push(Token {
                        tok: Tok::Define,
                        line: l0,
                        column: c0,
                    });
                } else {
                    return Err(error(l0, c0, "expected `:=`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                if chars.get(i) == Some(&':') && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                    let split = word
                        .char_indices()
                        .rev()
                        .take_while(|(_, c)| c.is_ascii_digit())
                        .last()
                        .map(|(k, _)| k)
                        .ok_or_else(|| error(l0, c0, "range needs a numbered variable like x1:3"))?;
                    let (stem, from) = word.split_at(split);
                    if stem.is_empty() {
                        return Err(error(l0, c0, "range needs a variable name before the number"));
                    }
                    let from: usize = from.parse().map_err(|_| error(l0, c0, "bad range start"))?;
                    i += 1;
                    col += 1;
                    let s2 = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let to: usize = chars[s2..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| error(l0, c0, "bad range end"))?;
                    col += i - s2;
                    if to < from {
                        return Err(error(l0, c0, format!("empty range {word}:{to}")));
                    }
                    out.push(Token {
                        tok: Tok::Range(stem.to_owned(), from, to),
                        line: l0,
                        column: c0,
                    });
                } else {
                    out.push(Token {
                        tok: Tok::Ident(word),
                        line: l0,
                        column: c0,
                    });
                }
            }
            other => return Err(error(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(error(t.line, t.column, format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            _ => Err(error(t.line, t.column, format!("expected {what}"))),
        }
    }

    /// Comma-separated names with range shorthand, ended by `stop`.
    fn name_list(&mut self, stop: Tok) -> Result<Vec<(String, Token)>> {
        let mut names = Vec::new();
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Ident(s) => names.push((s.clone(), t.clone())),
                Tok::Range(stem, from, to) => {
                    for k in *from..=*to {
                        names.push((format!("{stem}{k}"), t.clone()));
                    }
                }
                _ => return Err(error(t.line, t.column, "expected a variable name")),
            }
            let sep = self.next();
            if sep.tok == stop {
                return Ok(names);
            }
            if sep.tok != Tok::Comma {
                return Err(error(sep.line, sep.column, "expected `,`"));
            }
        }
    }
}

/// Parses one definition, merging variables related by equality atoms.
pub fn parse_pp(text: &str) -> Result<PPDefinition> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let (kw, t) = p.ident("`def`")?;
    if kw != "def" {
        return Err(error(t.line, t.column, "expected `def`"));
    }
    let (rel, t) = p.ident("relation name `E`")?;
    if rel != "E" {
        return Err(error(t.line, t.column, format!("unknown relation `{rel}`, only E is defined")));
    }
    p.expect(Tok::LParen, "`(`")?;
    let free = p.name_list(Tok::RParen)?;
    if free.len() % 2 != 0 {
        let t = &free[free.len() - 1].1;
        return Err(error(
            t.line,
            t.column,
            format!(
                "inconsistent dimension: {} free variables cannot split into source and target tuples",
                free.len()
            ),
        ));
    }
    p.expect(Tok::Define, "`:=`")?;

    let mut names: Vec<String> = Vec::new();
    let declare = |names: &mut Vec<String>, (name, t): (String, Token)| -> Result<usize> {
        if names.contains(&name) {
            return Err(error(t.line, t.column, format!("variable `{name}` declared twice")));
        }
        names.push(name);
        Ok(names.len() - 1)
    };
    let free_ids = free
        .into_iter()
        .map(|entry| declare(&mut names, entry))
        .collect::<Result<Vec<_>>>()?;
    if matches!(&p.peek().tok, Tok::Ident(s) if s == "exists") {
        p.next();
        for entry in p.name_list(Tok::Dot)? {
            declare(&mut names, entry)?;
        }
    }

    let lookup = |names: &[String], (name, t): &(String, Token)| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| error(t.line, t.column, format!("undeclared variable `{name}`")))
    };
    let mut atoms = Vec::new();
    let mut equalities = Vec::new();
    loop {
        let head = p.ident("an atom")?;
        if p.peek().tok == Tok::Eq {
            p.next();
            let rhs = p.ident("a variable")?;
            equalities.push((lookup(&names, &head)?, lookup(&names, &rhs)?));
        } else {
            if head.0 != "E" {
                return Err(error(head.1.line, head.1.column, format!("unknown relation `{}`", head.0)));
            }
            p.expect(Tok::LParen, "`(`")?;
            let a = p.ident("a variable")?;
            p.expect(Tok::Comma, "`,`")?;
            let b = p.ident("a variable")?;
            p.expect(Tok::RParen, "`)`")?;
            atoms.push((lookup(&names, &a)?, lookup(&names, &b)?));
        }
        let t = p.next();
        match t.tok {
            Tok::Amp => continue,
            Tok::End => break,
            _ => return Err(error(t.line, t.column, "expected `&` or end of input")),
        }
    }

    let mut uf = UnionFind::new(names.len());
    for &(a, b) in &equalities {
        uf.union(a, b);
    }
    let (ids, count) = uf.compact();
    let mut merged_names = alloc::vec![String::new(); count];
    for (v, name) in names.into_iter().enumerate().rev() {
        merged_names[ids[v]] = name;
    }
    let dim = free_ids.len() / 2;
    let def = PPDefinition::new(
        dim,
        count,
        free_ids.iter().map(|&v| ids[v]).collect(),
        atoms.into_iter().map(|(a, b)| (ids[a], ids[b])).collect(),
    )?;
    Ok(def.with_names(merged_names))
}
