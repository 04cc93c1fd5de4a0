//! Group expressions on the command line.
//!
//! ```text
//! G1(p=3,r=1)   series(i=1,p=3)   heisenberg(p=3)   cyclic(3,2)
//! extraspecial(p=3,n=2,kind=p2)   metacyclic(p=3,r=1,b=2,a=1)
//! c2(p=3,r=1,b=2,a1=1,a2=2)   prod(heisenberg(3), cyclic(3,1))
//! cp(heisenberg(3), heisenberg(3), k1="c", k2="c", theta="a: a; b: b; c: c")
//! path/to/group.pc
//! ```
//!
//! Arguments are positional or `name=value`. Inside `cp`, `k1` and `k2`
//! are comma-separated words and `theta` lists `generator: word` images,
//! separated by `;`; unlisted generators map to the identity.

use std::fmt;

use bogomolov::families::{
    central_product, corollary_c2, corollary_c2_product, cyclic, extraspecial_product, heisenberg, metacyclic_split,
    series_g, CentralProduct, ExtraspecialKind, FamilyError, GeneratorMap,
};
use bogomolov::pc::{Element, PcError, PcPresentation};

use crate::dsl::{parse_dsl, DslError};

#[derive(Debug, thiserror::Error)]
pub enum ExprError {
    #[error("bad group expression at offset {at}: {msg}")]
    Syntax { at: usize, msg: String },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("{family}: {msg}")]
    BadArgument { family: String, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {err}")]
    Dsl { path: String, err: DslError },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Pc(#[from] PcError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(i64),
    Ident(String),
    Str(String),
    Call(Call),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Call {
    pub name: String,
    pub args: Vec<(Option<String>, Value)>,
}

/// A parsed group expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Call(Call),
    File(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(n) => write!(f, "{n}"),
            Value::Ident(s) => f.write_str(s),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Call(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, (k, v)) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if let Some(k) = k {
                write!(f, "{k}=")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Call(c) => write!(f, "{c}"),
            Expr::File(p) => f.write_str(p),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    at: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { at: self.at, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.at).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.s.len() && (self.s[self.at].is_ascii_alphanumeric() || self.s[self.at] == b'_') {
            self.at += 1;
        }
        if start == self.at || self.s[start].is_ascii_digit() {
            self.at = start;
            return None;
        }
        Some(String::from_utf8_lossy(&self.s[start..self.at]).into_owned())
    }

    fn call(&mut self, name: String) -> Result<Call, ExprError> {
        self.eat(b'(')?;
        let mut args = Vec::new();
        if self.peek() == Some(b')') {
            self.at += 1;
            return Ok(Call { name, args });
        }
        loop {
            let save = self.at;
            let key = match self.ident() {
                Some(k) if self.peek() == Some(b'=') => {
                    self.at += 1;
                    Some(k)
                }
                _ => {
                    self.at = save;
                    None
                }
            };
            args.push((key, self.value()?));
            match self.peek() {
                Some(b',') => self.at += 1,
                Some(b')') => {
                    self.at += 1;
                    return Ok(Call { name, args });
                }
                _ => return self.err("expected ',' or ')'"),
            }
        }
    }

    fn value(&mut self) -> Result<Value, ExprError> {
        match self.peek() {
            Some(b'"') => {
                self.at += 1;
                let start = self.at;
                while self.at < self.s.len() && self.s[self.at] != b'"' {
                    self.at += 1;
                }
                if self.at == self.s.len() {
                    return self.err("unterminated string");
                }
                let v = String::from_utf8_lossy(&self.s[start..self.at]).into_owned();
                self.at += 1;
                Ok(Value::Str(v))
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => {
                let start = self.at;
                self.at += 1;
                while self.at < self.s.len() && self.s[self.at].is_ascii_digit() {
                    self.at += 1;
                }
                let text = String::from_utf8_lossy(&self.s[start..self.at]).into_owned();
                match text.parse() {
                    Ok(n) => Ok(Value::Num(n)),
                    Err(_) => self.err(format!("bad number {text}")),
                }
            }
            _ => match self.ident() {
                Some(name) if self.peek() == Some(b'(') => Ok(Value::Call(self.call(name)?)),
                Some(name) => Ok(Value::Ident(name)),
                None => self.err("expected a value"),
            },
        }
    }
}

fn looks_like_call(s: &str) -> bool {
    let s = s.trim();
    match s.find('(') {
        Some(k) => !s[..k].is_empty() && s[..k].trim_end().bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_') && s.ends_with(')'),
        None => false,
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    if !looks_like_call(text) {
        return Ok(Expr::File(text.trim().to_string()));
    }
    let mut p = Parser { s: text.as_bytes(), at: 0 };
    let name = p.ident().ok_or(ExprError::Syntax { at: 0, msg: "expected a family name".into() })?;
    let call = p.call(name)?;
    if p.peek().is_some() {
        return p.err("unexpected text after the expression");
    }
    Ok(Expr::Call(call))
}

/// Arguments of one call matched against a parameter list.
struct Args<'a> {
    family: &'a str,
    values: Vec<Option<&'a Value>>,
    names: &'a [&'a str],
}

impl<'a> Args<'a> {
    fn new(call: &'a Call, names: &'a [&'a str]) -> Result<Self, ExprError> {
        let bad = |msg: String| ExprError::BadArgument { family: call.name.clone(), msg };
        let mut values = vec![None; names.len()];
        for (i, (k, v)) in call.args.iter().enumerate() {
            let slot = match k {
                Some(k) => names.iter().position(|n| n == k).ok_or_else(|| bad(format!("unknown parameter '{k}'")))?,
                None if i < names.len() => i,
                None => return Err(bad(format!("too many arguments (expected {})", names.join(", ")))),
            };
            if values[slot].replace(v).is_some() {
                return Err(bad(format!("parameter '{}' given twice", names[slot])));
            }
        }
        Ok(Args { family: &call.name, values, names })
    }

    fn bad(&self, msg: String) -> ExprError {
        ExprError::BadArgument { family: self.family.to_string(), msg }
    }

    fn get(&self, name: &str) -> Option<&'a Value> {
        self.values[self.names.iter().position(|n| *n == name).expect("declared parameter")]
    }

    fn num_or(&self, name: &str, default: Option<i64>) -> Result<i64, ExprError> {
        match self.get(name) {
            Some(Value::Num(n)) => Ok(*n),
            Some(v) => Err(self.bad(format!("parameter '{name}' must be a number, got {v}"))),
            None => default.ok_or_else(|| self.bad(format!("missing parameter '{name}'"))),
        }
    }

    fn u64(&self, name: &str) -> Result<u64, ExprError> {
        let n = self.num_or(name, None)?;
        u64::try_from(n).map_err(|_| self.bad(format!("parameter '{name}' must be nonnegative")))
    }

    fn u32_or(&self, name: &str, default: Option<i64>) -> Result<u32, ExprError> {
        let n = self.num_or(name, default)?;
        u32::try_from(n).map_err(|_| self.bad(format!("parameter '{name}' out of range")))
    }

    fn text(&self, name: &str) -> Result<Option<String>, ExprError> {
        match self.get(name) {
            None => Ok(None),
            Some(Value::Str(s)) | Some(Value::Ident(s)) => Ok(Some(s.clone())),
            Some(Value::Num(n)) => Ok(Some(n.to_string())),
            Some(v) => Err(self.bad(format!("parameter '{name}' must be text, got {v}"))),
        }
    }

    fn group(&self, name: &str) -> Result<Expr, ExprError> {
        match self.get(name) {
            Some(Value::Call(c)) => Ok(Expr::Call(c.clone())),
            Some(Value::Str(path)) => Ok(Expr::File(path.clone())),
            Some(Value::Ident(path)) => Ok(Expr::File(path.clone())),
            Some(v) => Err(self.bad(format!("parameter '{name}' must be a group, got {v}"))),
            None => Err(self.bad(format!("missing group '{name}'"))),
        }
    }
}

/// The pieces of a central product `G₁ ∘ G₂` before gluing.
#[derive(Clone, Debug)]
pub struct ProductParts {
    pub left: PcPresentation,
    pub k1: Vec<Element>,
    pub right: PcPresentation,
    pub k2: Vec<Element>,
    pub theta: GeneratorMap,
}

impl ProductParts {
    fn from_product(cp: &CentralProduct) -> Self {
        ProductParts {
            left: cp.theta.source.clone(),
            k1: cp.k1.clone(),
            right: cp.theta.target.clone(),
            k2: cp.k2.clone(),
            theta: cp.theta.clone(),
        }
    }

    pub fn glue(&self) -> Result<CentralProduct, ExprError> {
        Ok(central_product(&self.left, &self.k1, &self.right, &self.k2, &self.theta)?)
    }
}

/// Parses a word such as `a^2 c^-1` (or `1`) into an element.
pub fn word_element(p: &PcPresentation, text: &str) -> Result<Element, ExprError> {
    let bad = |msg: String| ExprError::BadArgument { family: p.name().to_string(), msg };
    let mut x = p.identity();
    for tok in text.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (g, e) = match tok.split_once('^') {
            Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad(format!("bad exponent in '{tok}'")))?),
            None => (tok, 1),
        };
        let i = p.index_of(g).ok_or_else(|| bad(format!("unknown generator '{g}'")))?;
        x = p.multiply(&x, &p.power(&p.generator(i), e));
    }
    Ok(x)
}

fn words(p: &PcPresentation, text: &str) -> Result<Vec<Element>, ExprError> {
    text.split(',').filter(|w| !w.trim().is_empty()).map(|w| word_element(p, w)).collect()
}

fn theta_map(source: &PcPresentation, target: &PcPresentation, text: &str) -> Result<GeneratorMap, ExprError> {
    let mut images = vec![target.identity(); source.num_gens()];
    for entry in text.split(';').filter(|e| !e.trim().is_empty()) {
        let (g, w) = entry.split_once(':').ok_or_else(|| ExprError::BadArgument {
            family: "cp".into(),
            msg: format!("theta entry '{}' is not 'generator: word'", entry.trim()),
        })?;
        let i = source.index_of(g.trim()).ok_or_else(|| ExprError::BadArgument {
            family: "cp".into(),
            msg: format!("unknown generator '{}' in theta", g.trim()),
        })?;
        images[i] = word_element(target, w)?;
    }
    Ok(GeneratorMap::new(source, target, images)?)
}

fn kind(args: &Args) -> Result<ExtraspecialKind, ExprError> {
    match args.text("kind")?.as_deref() {
        None | Some("p") | Some("1") => Ok(ExtraspecialKind::ExponentP),
        Some("p2") | Some("2") => Ok(ExtraspecialKind::ExponentP2),
        Some(k) => Err(args.bad(format!("kind must be p or p2, got {k}"))),
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        parse_expr(text)
    }

    pub fn build(&self) -> Result<PcPresentation, ExprError> {
        let c = match self {
            Expr::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ExprError::Io { path: path.clone(), msg: e.to_string() })?;
                return parse_dsl(&text).map_err(|err| ExprError::Dsl { path: path.clone(), err });
            }
            Expr::Call(c) => c,
        };
        let name = c.name.as_str();
        let g = match name {
            "G1" | "G2" | "G3" | "G4" | "G5" | "G6" => {
                let a = Args::new(c, &["p", "r"])?;
                series_g(name[1..].parse().expect("digit"), a.u64("p")?, a.u32_or("r", Some(1))?)?
            }
            "series" => {
                let a = Args::new(c, &["i", "p", "r"])?;
                series_g(a.u32_or("i", None)?, a.u64("p")?, a.u32_or("r", Some(1))?)?
            }
            "heisenberg" => heisenberg(Args::new(c, &["p"])?.u64("p")?)?,
            "cyclic" => {
                let a = Args::new(c, &["p", "e"])?;
                cyclic(a.u64("p")?, a.u32_or("e", Some(1))?)?
            }
            "extraspecial" => {
                let a = Args::new(c, &["p", "n", "kind"])?;
                extraspecial_product(a.u64("p")?, a.u32_or("n", None)?, kind(&a)?)?.0
            }
            "metacyclic" => {
                let a = Args::new(c, &["p", "r", "b", "a"])?;
                metacyclic_split(a.u64("p")?, a.u32_or("r", None)?, a.u32_or("b", None)?, a.u32_or("a", None)?)?
            }
            "c2" | "corollary_c2" => {
                let a = Args::new(c, &["p", "r", "b", "a1", "a2"])?;
                corollary_c2(a.u64("p")?, a.u32_or("r", None)?, a.u32_or("b", None)?, a.u32_or("a1", None)?, a.u32_or("a2", None)?)?
            }
            "prod" => {
                let a = Args::new(c, &["left", "right"])?;
                let (l, r) = (a.group("left")?.build()?, a.group("right")?.build()?);
                let mut g = l.direct_product(&r)?;
                g.set_name(self.to_string());
                return Ok(g);
            }
            "cp" => return Ok(self.product_parts()?.expect("cp has parts").glue()?.group),
            _ => return Err(ExprError::UnknownFamily(c.name.clone())),
        };
        Ok(g)
    }

    /// Factors, central subgroups and `θ` when the expression is a central
    /// product; `None` otherwise. For `c2` the factor with the larger
    /// exponent comes first, so that `θ` is a homomorphism.
    pub fn product_parts(&self) -> Result<Option<ProductParts>, ExprError> {
        let Expr::Call(c) = self else { return Ok(None) };
        match c.name.as_str() {
            "cp" => {
                let a = Args::new(c, &["left", "right", "k1", "k2", "theta"])?;
                let (l, r) = (a.group("left")?.build()?, a.group("right")?.build()?);
                let k1 = words(&l, &a.text("k1")?.unwrap_or_default())?;
                let k2 = words(&r, &a.text("k2")?.unwrap_or_default())?;
                let theta = match a.text("theta")? {
                    Some(t) => theta_map(&l, &r, &t)?,
                    None if l.labels() == r.labels() => theta_map(&l, &r, &l.labels().iter().map(|g| format!("{g}: {g}")).collect::<Vec<_>>().join(";"))?,
                    None => return Err(a.bad("missing parameter 'theta'".into())),
                };
                Ok(Some(ProductParts { left: l, k1, right: r, k2, theta }))
            }
            "c2" | "corollary_c2" => {
                let a = Args::new(c, &["p", "r", "b", "a1", "a2"])?;
                let (a1, a2) = (a.u32_or("a1", None)?, a.u32_or("a2", None)?);
                let cp = corollary_c2_product(a.u64("p")?, a.u32_or("r", None)?, a.u32_or("b", None)?, a1.max(a2), a1.min(a2))?;
                Ok(Some(ProductParts::from_product(&cp)))
            }
            "extraspecial" => {
                let a = Args::new(c, &["p", "n", "kind"])?;
                let (_, cp) = extraspecial_product(a.u64("p")?, a.u32_or("n", None)?, kind(&a)?)?;
                Ok(cp.map(|cp| ProductParts::from_product(&cp)))
            }
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests;
