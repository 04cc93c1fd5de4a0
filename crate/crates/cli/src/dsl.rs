//! The line-oriented presentation format:
//!
//! ```text
//! group H(p=3) {
//!   prime 3;
//!   gens a b c;
//!   central c;
//!   order a 3;
//!   comm [b,a] = c;
//! }
//! ```
//!
//! `gens` may list every generator or only the noncentral ones; `central`
//! marks the central block. Words are `id^exp` factors or `1`. Orders
//! default to the prime. `#` starts a comment.

use std::fmt;

use bogomolov::pc::{PcBuilder, PcError, PcPresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error(transparent)]
    Pc(#[from] PcError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(i64),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

fn syntax<T>(pos: &Pos, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Syntax { pos: pos.clone(), msg: msg.into() })
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    /// Tokenizes the body after the group header.
    fn new(chars: &[(char, Pos)], end: Pos) -> Result<Self, DslError> {
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (c, ref pos) = chars[i];
            if c == '#' {
                while i < chars.len() && chars[i].0 != '\n' {
                    i += 1;
                }
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].0.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|x| x.0).collect();
                match s.parse() {
                    Ok(n) => toks.push((Tok::Num(n), pos.clone())),
                    Err(_) => return syntax(pos, format!("number {s} is too large")),
                }
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].0) {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().map(|x| x.0).collect()), pos.clone()));
            } else if "{}[],;=^-".contains(c) {
                toks.push((Tok::Sym(c), pos.clone()));
                i += 1;
            } else {
                return syntax(pos, format!("unexpected character '{c}'"));
            }
        }
        Ok(Lexer { toks, at: 0, end })
    }

    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn pos(&self) -> Pos {
        self.peek().map(|t| t.1.clone()).unwrap_or_else(|| self.end.clone())
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<Pos, DslError> {
        match self.next() {
            Some((Tok::Sym(s), pos)) if s == c => Ok(pos),
            Some((t, pos)) => syntax(&pos, format!("expected '{c}', found {}", describe(&t))),
            None => syntax(&self.end, format!("expected '{c}', found end of input")),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        match self.next() {
            Some((Tok::Ident(s), pos)) => Ok((s, pos)),
            Some((t, pos)) => syntax(&pos, format!("expected identifier, found {}", describe(&t))),
            None => syntax(&self.end, "expected identifier, found end of input"),
        }
    }

    fn number(&mut self) -> Result<(i64, Pos), DslError> {
        let neg = matches!(self.peek(), Some((Tok::Sym('-'), _)));
        if neg {
            self.next();
        }
        match self.next() {
            Some((Tok::Num(n), pos)) => Ok((if neg { -n } else { n }, pos)),
            Some((t, pos)) => syntax(&pos, format!("expected number, found {}", describe(&t))),
            None => syntax(&self.end, "expected number, found end of input"),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some((Tok::Sym(s), _)) if *s == c)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Num(n) => format!("'{n}'"),
        Tok::Sym(c) => format!("'{c}'"),
    }
}

type Word = Vec<(String, i64, Pos)>;

#[derive(Default)]
struct Decls {
    prime: Option<u64>,
    gens: Vec<(String, Pos)>,
    central: Vec<(String, Pos)>,
    orders: Vec<(String, i64, Pos)>,
    pows: Vec<(String, Pos, Word)>,
    comms: Vec<((String, Pos), (String, Pos), Word)>,
}

fn word(lx: &mut Lexer) -> Result<Word, DslError> {
    let mut out = Vec::new();
    if let Some((Tok::Num(1), _)) = lx.peek() {
        lx.next();
        return Ok(out);
    }
    while let Some((Tok::Ident(_), _)) = lx.peek() {
        let (id, pos) = lx.ident()?;
        let e = if lx.at_sym('^') {
            lx.next();
            lx.number()?.0
        } else {
            1
        };
        out.push((id, e, pos));
    }
    if out.is_empty() {
        return syntax(&lx.pos(), "expected a word (id^exp factors or 1)");
    }
    Ok(out)
}

fn statement(lx: &mut Lexer, d: &mut Decls) -> Result<(), DslError> {
    let (kw, pos) = lx.ident()?;
    match kw.as_str() {
        "prime" => {
            let (p, ppos) = lx.number()?;
            if p < 2 {
                return syntax(&ppos, "prime must be at least 2");
            }
            if d.prime.replace(p as u64).is_some() {
                return syntax(&pos, "prime declared twice");
            }
        }
        "gens" | "central" => {
            while let Some((Tok::Ident(_), _)) = lx.peek() {
                let g = lx.ident()?;
                if kw == "gens" { &mut d.gens } else { &mut d.central }.push(g);
            }
        }
        "order" => {
            let (g, gpos) = lx.ident()?;
            let (q, _) = lx.number()?;
            d.orders.push((g, q, gpos));
        }
        "pow" => {
            let (g, gpos) = lx.ident()?;
            lx.expect_sym('=')?;
            d.pows.push((g, gpos, word(lx)?));
        }
        "comm" => {
            lx.expect_sym('[')?;
            let x = lx.ident()?;
            lx.expect_sym(',')?;
            let y = lx.ident()?;
            lx.expect_sym(']')?;
            lx.expect_sym('=')?;
            d.comms.push((x, y, word(lx)?));
        }
        _ => return syntax(&pos, format!("unknown statement '{kw}'")),
    }
    if lx.peek().is_none() {
        return Ok(());
    }
    lx.expect_sym(';').map(|_| ())
}

fn positions(text: &str) -> Vec<(char, Pos)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    for c in text.chars() {
        out.push((c, Pos { line, col }));
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    out
}

/// Parses and validates a presentation.
pub fn parse_dsl(text: &str) -> Result<PcPresentation, DslError> {
    let chars = positions(text);
    let end = chars.last().map(|(_, p)| Pos { line: p.line, col: p.col + 1 }).unwrap_or(Pos { line: 1, col: 1 });
    let mut i = 0;
    let skip_blank = |i: &mut usize| {
        while *i < chars.len() {
            match chars[*i].0 {
                '#' => {
                    while *i < chars.len() && chars[*i].0 != '\n' {
                        *i += 1;
                    }
                }
                c if c.is_whitespace() => *i += 1,
                _ => break,
            }
        }
    };
    skip_blank(&mut i);
    let kw: String = chars[i..].iter().take(5).map(|x| x.0).collect();
    let at = |i: usize| chars.get(i).map(|x| x.1.clone()).unwrap_or_else(|| end.clone());
    if kw != "group" || chars.get(i + 5).is_some_and(|c| is_ident_char(c.0)) {
        return syntax(&at(i), "expected 'group'");
    }
    i += 5;
    // the name is free text up to the opening brace
    let brace = match chars[i..].iter().position(|x| x.0 == '{') {
        Some(k) => i + k,
        None => return syntax(&end, "expected '{' after the group name"),
    };
    let name: String = chars[i..brace].iter().map(|x| x.0).collect::<String>().trim().to_string();
    if name.is_empty() {
        return syntax(&at(brace), "missing group name");
    }
    let close = match chars.iter().rposition(|x| x.0 == '}') {
        Some(k) if k > brace => k,
        _ => return syntax(&end, "expected '}' closing the group body"),
    };
    let mut j = close + 1;
    skip_blank(&mut j);
    if j < chars.len() {
        return syntax(&at(j), "unexpected text after the group body");
    }
    let mut lx = Lexer::new(&chars[brace + 1..close], at(close))?;
    let mut d = Decls::default();
    while lx.peek().is_some() {
        statement(&mut lx, &mut d)?;
    }
    build(name, d, &at(close))
}

fn build(name: String, d: Decls, close: &Pos) -> Result<PcPresentation, DslError> {
    let Some(prime) = d.prime else {
        return syntax(close, "missing 'prime' statement");
    };
    let mut declared: Vec<&str> = Vec::new();
    for (g, pos) in d.gens.iter().chain(&d.central) {
        if declared.contains(&g.as_str()) && !d.central.iter().any(|(c, _)| c == g) {
            return syntax(pos, format!("generator '{g}' declared twice"));
        }
        if !declared.contains(&g.as_str()) {
            declared.push(g);
        }
    }
    for (i, (c, pos)) in d.central.iter().enumerate() {
        if d.central[..i].iter().any(|(x, _)| x == c) {
            return syntax(pos, format!("generator '{c}' declared central twice"));
        }
    }
    let known = |g: &str, pos: &Pos| -> Result<(), DslError> {
        if declared.contains(&g) {
            Ok(())
        } else {
            syntax(pos, format!("unknown generator '{g}'"))
        }
    };
    let is_central = |g: &str| d.central.iter().any(|(c, _)| c == g);
    let mut b = PcBuilder::new(name, prime);
    for g in declared.iter().filter(|g| !is_central(g)) {
        b = b.gen(g, prime as i64);
    }
    for (g, _) in &d.central {
        b = b.central(g, prime as i64);
    }
    for (g, q, pos) in &d.orders {
        known(g, pos)?;
        b = b.order(g, *q);
    }
    fn plain<'a>(w: &'a Word, known: &dyn Fn(&str, &Pos) -> Result<(), DslError>) -> Result<Vec<(&'a str, i64)>, DslError> {
        w.iter().map(|(g, e, pos)| known(g, pos).map(|_| (g.as_str(), *e))).collect()
    }
    for (g, pos, w) in &d.pows {
        known(g, pos)?;
        b = b.pow(g, &plain(w, &known)?);
    }
    for ((x, xpos), (y, ypos), w) in &d.comms {
        known(x, xpos)?;
        known(y, ypos)?;
        b = b.comm(x, y, &plain(w, &known)?);
    }
    Ok(b.build()?)
}

#[cfg(test)]
mod tests;
