use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use super::form::Form;

/// `sign * a^a_exp * q^q_exp`, the base of a Pochhammer symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: i8,
    pub a_exp: i64,
    pub q_exp: i64,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let pow = |v: &str, e: i64| match e {
            1 => v.to_string(),
            e if e < 0 => format!("{v}^({e})"),
            e => format!("{v}^{e}"),
        };
        match (self.a_exp, self.q_exp) {
            (0, 0) => f.write_str("1"),
            (a, 0) => f.write_str(&pow("a", a)),
            (0, q) => f.write_str(&pow("q", q)),
            (a, q) => write!(f, "{}*{}", pow("a", a), pow("q", q)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprNode {
    Sum { index: String, lower: i64, body: Box<ExprNode> },
    /// `(base; q^step)_len`
    Poch { base: Monomial, step: i64, len: Form },
    QPow(Form),
    APow(Form),
    Neg1Pow(Form),
    Const(BigInt),
    /// Signed summands; `true` marks subtraction.
    Add(Vec<(bool, ExprNode)>),
    /// Factors with `true` marking the denominator; numerators come first.
    Mul(Vec<(bool, ExprNode)>),
    /// `(b_1, ..., b_r; q^step)_inf`
    InfProduct { bases: Vec<Monomial>, step: i64 },
}

impl ExprNode {
    /// Summation indices bound anywhere below this node, outermost first.
    pub fn bound_indices(&self, out: &mut Vec<String>) {
        match self {
            ExprNode::Sum { index, body, .. } => {
                out.push(index.clone());
                body.bound_indices(out);
            }
            ExprNode::Add(v) | ExprNode::Mul(v) => v.iter().for_each(|(_, e)| e.bound_indices(out)),
            _ => {}
        }
    }

    /// Whether `a` occurs anywhere.
    pub fn mentions_a(&self) -> bool {
        match self {
            ExprNode::Sum { body, .. } => body.mentions_a(),
            ExprNode::Poch { base, .. } => base.a_exp != 0,
            ExprNode::APow(f) => !f.is_zero(),
            ExprNode::Add(v) | ExprNode::Mul(v) => v.iter().any(|(_, e)| e.mentions_a()),
            ExprNode::InfProduct { bases, .. } => bases.iter().any(|b| b.a_exp != 0),
            _ => false,
        }
    }

    /// Applies `f` to every node, children first.
    pub fn map(self, f: &mut impl FnMut(ExprNode) -> ExprNode) -> ExprNode {
        let node = match self {
            ExprNode::Sum { index, lower, body } => ExprNode::Sum { index, lower, body: Box::new(body.map(f)) },
            ExprNode::Add(v) => ExprNode::Add(v.into_iter().map(|(s, e)| (s, e.map(f))).collect()),
            ExprNode::Mul(v) => ExprNode::Mul(v.into_iter().map(|(s, e)| (s, e.map(f))).collect()),
            other => other,
        };
        f(node)
    }
}

fn pow(f: &mut fmt::Formatter<'_>, v: &str, e: &Form) -> fmt::Result {
    match e.as_constant() {
        Some(c) if c == 1.into() => f.write_str(v),
        Some(c) if c.is_integer() && *c.numer() > 0 => write!(f, "{v}^{c}"),
        _ if e.variables().len() == 1 && e == &Form::var(&e.variables()[0]) => write!(f, "{v}^{e}"),
        _ => write!(f, "{v}^({e})"),
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprNode::Sum { index, lower, body } => write!(f, "sum({index}>={lower}, {body})"),
            ExprNode::Poch { base, step, len } => {
                let step = Monomial { sign: 1, a_exp: 0, q_exp: *step };
                write!(f, "poch({base};{step};{len})")
            }
            ExprNode::QPow(e) => pow(f, "q", e),
            ExprNode::APow(e) => pow(f, "a", e),
            ExprNode::Neg1Pow(e) => pow(f, "(-1)", e),
            ExprNode::Const(c) => write!(f, "{c}"),
            ExprNode::Add(v) => {
                for (i, (neg, e)) in v.iter().enumerate() {
                    match (i, neg) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    if matches!(e, ExprNode::Add(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            ExprNode::Mul(v) => {
                let factor = |f: &mut fmt::Formatter<'_>, e: &ExprNode| match e {
                    ExprNode::Add(_) | ExprNode::Mul(_) => write!(f, "({e})"),
                    ExprNode::Const(c) if c.sign() == num_bigint::Sign::Minus => write!(f, "({e})"),
                    _ => write!(f, "{e}"),
                };
                let nums: Vec<_> = v.iter().filter(|(d, _)| !d).map(|(_, e)| e).collect();
                let dens: Vec<_> = v.iter().filter(|(d, _)| *d).map(|(_, e)| e).collect();
                if nums.is_empty() {
                    f.write_str("1")?;
                }
                for (i, e) in nums.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    factor(f, e)?;
                }
                match dens.len() {
                    0 => Ok(()),
                    1 => {
                        f.write_str("/")?;
                        factor(f, dens[0])
                    }
                    _ => {
                        f.write_str("/(")?;
                        for (i, e) in dens.iter().enumerate() {
                            if i > 0 {
                                f.write_str("*")?;
                            }
                            factor(f, e)?;
                        }
                        f.write_str(")")
                    }
                }
            }
            ExprNode::InfProduct { bases, step } => {
                f.write_str("infprod(")?;
                for (i, b) in bases.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{b}")?;
                }
                write!(f, ";{})", Monomial { sign: 1, a_exp: 0, q_exp: *step })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityAST {
    pub name: String,
    pub lhs: ExprNode,
    pub rhs: ExprNode,
    /// Summation indices, in order of appearance.
    pub variables: Vec<String>,
    /// Free variables; a subset of `{a}`.
    pub free: BTreeSet<String>,
    pub note: Option<String>,
}

impl IdentityAST {
    pub fn new(name: String, lhs: ExprNode, rhs: ExprNode) -> Self {
        let mut variables = Vec::new();
        lhs.bound_indices(&mut variables);
        rhs.bound_indices(&mut variables);
        let mut free = BTreeSet::new();
        if lhs.mentions_a() || rhs.mentions_a() {
            free.insert("a".to_string());
        }
        IdentityAST { name, lhs, rhs, variables, free, note: None }
    }

    pub fn is_bivariate(&self) -> bool {
        self.free.contains("a")
    }
}

/// `name: lhs = rhs`
pub fn render(id: &IdentityAST) -> String {
    format!("{}: {} = {}", id.name, id.lhs, id.rhs)
}
