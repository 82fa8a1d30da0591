//! Recursive-descent parser for identities and catalog entries.
//!
//! ```text
//! identity := name ':' expr '=' expr
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := 'sum' '(' idx '>=' int ',' expr ')'
//!           | 'poch' '(' base ';' base ';' affine ')'
//!           | 'infprod' '(' base (',' base)* ';' base ')'
//!           | 'q' ['^' exp] | 'a' ['^' exp] | '(-1)' '^' exp
//!           | int | '(' expr ')'
//! exp      := int | idx | '(' poly ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ast::{ExprNode, IdentityAST, Monomial};
use super::catalog::{CatalogEntry, Reading};
use super::form::Form;
use crate::cutoff::Q;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Ge,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Ge => f.write_str("'>='"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

/// Tokenizes `src`, skipping `#` comments and lines starting with `@`.
fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut line_start = true;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            line_start = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '@' && line_start) {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        line_start = false;
        let (l, cl) = (line, col);
        let tok = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            let tok = Tok::Int(src[pos..end].parse().unwrap());
            col += j - i;
            i = j;
            Token { tok, line: l, col: cl, start: pos, end }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(src.len(), |p| p.0);
            col += j - i;
            i = j;
            Token { tok: Tok::Ident(src[pos..end].to_string()), line: l, col: cl, start: pos, end }
        } else if c == '>' && chars.get(i + 1).map(|p| p.1) == Some('=') {
            i += 2;
            col += 2;
            Token { tok: Tok::Ge, line: l, col: cl, start: pos, end: pos + 2 }
        } else if "(),;+-*/^=:.".contains(c) {
            i += 1;
            col += 1;
            Token { tok: Tok::Sym(c), line: l, col: cl, start: pos, end: pos + 1 }
        } else {
            return Err(Error::Parse { line: l, col: cl, msg: format!("unexpected character '{c}'") });
        };
        out.push(tok);
    }
    out.push(Token { tok: Tok::Eof, line, col, start: src.len(), end: src.len() });
    Ok(out)
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

impl<'s> Parser<'s> {
    fn new(src: &'s str) -> Result<Self> {
        Ok(Parser { src, toks: lex(src)?, pos: 0, scope: Vec::new() })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
    }

    fn invalid<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::Validation { line: t.line, col: t.col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            return Ok(());
        }
        let t = self.peek().clone();
        self.err_at(&t, format!("expected '{c}', found {}", t.tok))
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(if neg { -n.clone() } else { n.clone() }),
            other => self.err_at(&t, format!("expected an integer, found {other}")),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let t = self.peek().clone();
        let n = self.int()?;
        i64::try_from(n).or_else(|_| self.err_at(&t, "integer out of range"))
    }

    fn identity(&mut self) -> Result<IdentityAST> {
        let first = self.peek().clone();
        let mut last = first.clone();
        while !matches!(self.peek().tok, Tok::Sym(':') | Tok::Eof) {
            last = self.next();
        }
        if first.start >= self.peek().start {
            return self.err_at(&first, "expected an identity name");
        }
        let name = &self.src[first.start..last.end];
        if !name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return self.err_at(&first, format!("invalid identity name '{name}'"));
        }
        let name = name.to_string();
        self.expect(':')?;
        let lhs = self.expr()?;
        self.expect('=')?;
        let rhs = self.expr()?;
        Ok(IdentityAST::new(name, lhs, rhs))
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let mut items = Vec::new();
        let mut neg = self.eat('-');
        loop {
            let t = self.term()?;
            push_summand(&mut items, neg, t);
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(match items.len() {
            1 if !items[0].0 => items.pop().unwrap().1,
            1 => match &items[0].1 {
                ExprNode::Const(c) => ExprNode::Const(-c),
                _ => ExprNode::Add(items),
            },
            _ => ExprNode::Add(items),
        })
    }

    fn term(&mut self) -> Result<ExprNode> {
        let mut items = Vec::new();
        push_factor(&mut items, false, self.factor()?);
        loop {
            let den = if self.eat('*') {
                false
            } else if self.eat('/') {
                true
            } else {
                break;
            };
            push_factor(&mut items, den, self.factor()?);
        }
        Ok(normalize_mul(items))
    }

    fn factor(&mut self) -> Result<ExprNode> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => Ok(ExprNode::Const(self.int()?)),
            Tok::Ident(s) => match s.as_str() {
                "sum" => self.sum(),
                "poch" => self.poch(),
                "infprod" => self.infprod(),
                "q" => {
                    self.next();
                    let e = if self.eat('^') { self.exponent(2)? } else { Form::int(1) };
                    Ok(ExprNode::QPow(e))
                }
                "a" => {
                    self.next();
                    let e = if self.eat('^') { self.exponent(1)? } else { Form::int(1) };
                    Ok(ExprNode::APow(e))
                }
                _ => self.invalid(&t, format!("unknown name '{s}'")),
            },
            Tok::Sym('(') => {
                if self.peek_at(1) == &Tok::Sym('-')
                    && self.peek_at(2) == &Tok::Int(BigInt::one())
                    && self.peek_at(3) == &Tok::Sym(')')
                    && self.peek_at(4) == &Tok::Sym('^')
                {
                    for _ in 0..5 {
                        self.next();
                    }
                    return Ok(ExprNode::Neg1Pow(self.exponent(1)?));
                }
                self.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => self.err_at(&t, format!("unexpected {other}")),
        }
    }

    fn sum(&mut self) -> Result<ExprNode> {
        self.next();
        self.expect('(')?;
        let t = self.next();
        let Tok::Ident(index) = t.tok.clone() else {
            return self.err_at(&t, format!("expected a summation index, found {}", t.tok));
        };
        if index == "a" || index == "q" || self.scope.contains(&index) {
            return self.invalid(&t, format!("index '{index}' is already bound"));
        }
        if self.peek().tok != Tok::Ge {
            let p = self.peek().clone();
            return self.err_at(&p, format!("expected '>=', found {}", p.tok));
        }
        self.next();
        let lower = self.small_int()?;
        self.expect(',')?;
        self.scope.push(index.clone());
        let body = self.expr();
        self.scope.pop();
        let body = body?;
        self.expect(')')?;
        Ok(ExprNode::Sum { index, lower, body: Box::new(body) })
    }

    fn poch(&mut self) -> Result<ExprNode> {
        self.next();
        self.expect('(')?;
        let base = self.monomial()?;
        self.expect(';')?;
        let step = self.step()?;
        self.expect(';')?;
        let len = self.exponent_body(1)?;
        self.expect(')')?;
        Ok(ExprNode::Poch { base, step, len })
    }

    fn infprod(&mut self) -> Result<ExprNode> {
        self.next();
        self.expect('(')?;
        let mut bases = vec![self.monomial()?];
        while self.eat(',') {
            bases.push(self.monomial()?);
        }
        self.expect(';')?;
        let step = self.step()?;
        self.expect(')')?;
        Ok(ExprNode::InfProduct { bases, step })
    }

    fn step(&mut self) -> Result<i64> {
        let t = self.peek().clone();
        let m = self.monomial()?;
        if m.sign != 1 || m.a_exp != 0 || m.q_exp < 1 {
            return self.err_at(&t, "the step must be a positive power of q");
        }
        Ok(m.q_exp)
    }

    /// `[-] atom ('*' atom)*` with atoms `1`, `a[^k]`, `q[^k]`.
    fn monomial(&mut self) -> Result<Monomial> {
        let mut m = Monomial { sign: 1, a_exp: 0, q_exp: 0 };
        if self.eat('-') {
            m.sign = -1;
        }
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Int(n) if n.is_one() => {}
                Tok::Ident(v) if v == "a" || v == "q" => {
                    let e = if self.eat('^') {
                        if self.eat('(') {
                            let e = self.small_int()?;
                            self.expect(')')?;
                            e
                        } else {
                            self.small_int()?
                        }
                    } else {
                        1
                    };
                    if v == "a" {
                        m.a_exp += e;
                    } else {
                        m.q_exp += e;
                    }
                }
                other => return self.err_at(&t, format!("expected a monomial in a and q, found {other}")),
            }
            if !(self.peek().tok == Tok::Sym('*') && matches!(self.peek_at(1), Tok::Ident(_) | Tok::Int(_))) {
                return Ok(m);
            }
            self.next();
        }
    }

    /// `int | idx | '(' poly ')'` of degree at most `max_deg`.
    fn exponent(&mut self, max_deg: usize) -> Result<Form> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(_) => Ok(Form::constant(Q::from(self.small_int()?))),
            Tok::Ident(_) => self.form_atom(),
            Tok::Sym('(') => {
                self.next();
                let f = self.exponent_body(max_deg)?;
                self.expect(')')?;
                Ok(f)
            }
            other => self.err_at(&t, format!("expected an exponent, found {other}")),
        }
    }

    fn exponent_body(&mut self, max_deg: usize) -> Result<Form> {
        let t = self.peek().clone();
        let f = self.form_expr()?;
        if f.degree() > max_deg {
            let what = if max_deg == 1 { "affine" } else { "quadratic" };
            return self.invalid(&t, format!("expression must be {what} in the indices"));
        }
        Ok(f)
    }

    fn form_expr(&mut self) -> Result<Form> {
        let neg = self.eat('-');
        let mut f = self.form_term()?;
        if neg {
            f = f.scale(-Q::one());
        }
        loop {
            if self.eat('+') {
                f = &f + &self.form_term()?;
            } else if self.eat('-') {
                f = &f - &self.form_term()?;
            } else {
                return Ok(f);
            }
        }
    }

    fn form_term(&mut self) -> Result<Form> {
        let mut f = self.form_atom()?;
        loop {
            let t = self.peek().clone();
            if self.eat('*') {
                let g = self.form_atom()?;
                f = match f.mul(&g) {
                    Some(h) => h,
                    None => return self.invalid(&t, "exponent of degree above two"),
                };
            } else if self.eat('/') {
                let d = self.form_atom()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => f = f.scale(c.recip()),
                    _ => return self.invalid(&t, "division by a non-constant or zero"),
                }
            } else {
                return Ok(f);
            }
        }
    }

    fn form_atom(&mut self) -> Result<Form> {
        let t = self.next();
        let base = match &t.tok {
            Tok::Int(n) => match i64::try_from(n) {
                Ok(v) => Form::int(v),
                Err(_) => return self.err_at(&t, "integer out of range"),
            },
            Tok::Ident(v) => {
                if !self.scope.contains(v) {
                    return self.invalid(&t, format!("unbound index '{v}'"));
                }
                Form::var(v)
            }
            Tok::Sym('(') => {
                let f = self.form_expr()?;
                self.expect(')')?;
                f
            }
            Tok::Sym('-') => return Ok(self.form_atom()?.scale(-Q::one())),
            other => return self.err_at(&t, format!("expected an index expression, found {other}")),
        };
        if self.eat('^') {
            let pt = self.peek().clone();
            let p = self.small_int()?;
            return match p {
                0 => Ok(Form::int(1)),
                1 => Ok(base),
                2 => base.mul(&base).map_or_else(|| self.invalid(&pt, "exponent of degree above two"), Ok),
                _ => self.invalid(&pt, "powers above 2 are not allowed in exponents"),
            };
        }
        Ok(base)
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }
}

fn push_summand(items: &mut Vec<(bool, ExprNode)>, neg: bool, e: ExprNode) {
    match e {
        ExprNode::Add(v) => items.extend(v.into_iter().map(|(n, x)| (n != neg, x))),
        ExprNode::Const(c) if c.is_negative() => items.push((!neg, ExprNode::Const(-c))),
        e => items.push((neg, e)),
    }
}

fn push_factor(items: &mut Vec<(bool, ExprNode)>, den: bool, e: ExprNode) {
    match e {
        ExprNode::Mul(v) => items.extend(v.into_iter().map(|(d, x)| (d != den, x))),
        e => items.push((den, e)),
    }
}

/// Numerators first, unit factors dropped, single factors unwrapped.
fn normalize_mul(items: Vec<(bool, ExprNode)>) -> ExprNode {
    let one = ExprNode::Const(BigInt::one());
    let (nums, dens): (Vec<_>, Vec<_>) = items.into_iter().filter(|(_, e)| *e != one).partition(|(d, _)| !d);
    let mut nums = nums;
    if nums.is_empty() && dens.is_empty() {
        return one;
    }
    if nums.len() == 1 && dens.is_empty() {
        return nums.pop().unwrap().1;
    }
    nums.extend(dens);
    ExprNode::Mul(nums)
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<ExprNode> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if !p.at_eof() {
        let t = p.peek().clone();
        return p.err_at(&t, format!("unexpected {}", t.tok));
    }
    Ok(e)
}

/// Parses one `name: lhs = rhs` identity, ignoring `@` directives.
pub fn parse(text: &str) -> Result<IdentityAST> {
    let entry = parse_entry(text)?;
    if entry.readings.len() != 1 {
        return Err(Error::Parse { line: 1, col: 1, msg: "expected exactly one identity".into() });
    }
    let mut r = entry.readings.into_iter().next().unwrap();
    r.identity.note = entry.note;
    Ok(r.identity)
}

/// Parses a catalog file: `@key value` directives followed by one identity,
/// or one identity per `@reading label` directive.
pub fn parse_entry(text: &str) -> Result<CatalogEntry> {
    let mut entry = CatalogEntry::default();
    let mut labels = Vec::new();
    let mut declared_a = false;
    for (n, line) in text.lines().enumerate() {
        let l = line.trim_start();
        let Some(rest) = l.strip_prefix('@') else {
            continue;
        };
        let rest = rest.split('#').next().unwrap().trim();
        let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let value = value.trim();
        let col = line.len() - l.len() + 1;
        let bad = |msg: &str| Error::Parse { line: n + 1, col, msg: msg.to_string() };
        match key {
            "name" => entry.name = value.to_string(),
            "dk" => {
                let v: Vec<i64> = value.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad("@dk needs two integers"))?;
                let [d, k] = v[..] else {
                    return Err(bad("@dk needs two integers"));
                };
                entry.dk = Some((d, k));
            }
            "transform" => entry.transform = Some(value.to_string()),
            "slater" => entry.slater = Some(value.parse().map_err(|_| bad("@slater needs a number"))?),
            "vars" => {
                if value != "a" {
                    return Err(bad("only 'a' may be declared free"));
                }
                declared_a = true;
            }
            "reading" => labels.push(value.to_string()),
            "note" => entry.note = Some(value.to_string()),
            _ => return Err(bad(&format!("unknown directive '@{key}'"))),
        }
    }
    let mut p = Parser::new(text)?;
    let mut ids = Vec::new();
    while !p.at_eof() {
        let t = p.peek().clone();
        let id = p.identity()?;
        if declared_a && !id.is_bivariate() {
            return p.invalid(&t, "declared '@vars a' but 'a' does not occur");
        }
        ids.push((t, id));
    }
    if ids.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: "no identity found".into() });
    }
    if !labels.is_empty() && labels.len() != ids.len() {
        return Err(Error::Parse { line: 1, col: 1, msg: "one '@reading' per identity is required".into() });
    }
    if entry.name.is_empty() {
        entry.name = ids[0].1.name.clone();
    }
    for (i, (t, id)) in ids.into_iter().enumerate() {
        if id.name != entry.name {
            return p.invalid(&t, format!("identity '{}' in entry '{}'", id.name, entry.name));
        }
        entry.readings.push(Reading { label: labels.get(i).cloned(), identity: id });
    }
    Ok(entry)
}
