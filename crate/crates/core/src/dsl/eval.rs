//! Evaluation of parsed expressions to truncated series.
//!
//! A sum is expanded index by index until every summand left provably lies
//! outside the box. The proof is a set of quadratic lower bounds on the
//! q-valuation of the summand (the valuation is at least their minimum),
//! computed symbolically with inner sums minimized out.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ast::{ExprNode, IdentityAST, Monomial};
use super::catalog::CatalogEntry;
use super::form::{Env, Form};
use crate::cutoff::{Quadratic, Q};
use crate::error::{Error, Result};
use crate::report::{Checker, Status, VerificationReport};
use crate::series::{HalfExponent, Orders, Poly, TruncatedSeries};
use crate::term::{Base, Term};

pub const DEFAULT_Q_ORDER: i64 = 100;
pub const DEFAULT_BIVARIATE: (i64, i64) = (20, 60);

/// Expands a closed expression (no free indices) on `orders`.
pub fn evaluate(expr: &ExprNode, orders: Orders) -> Result<TruncatedSeries> {
    eval(expr, &Env::new(), orders)
}

fn eval(e: &ExprNode, env: &Env, orders: Orders) -> Result<TruncatedSeries> {
    match e {
        ExprNode::Add(v) => {
            let mut s = TruncatedSeries::zero(orders);
            for (neg, x) in v {
                let t = eval(x, env, orders)?;
                s = if *neg { &s - &t } else { &s + &t };
            }
            Ok(s)
        }
        ExprNode::Sum { index, lower, body } => eval_sum(index, *lower, body, env, orders),
        _ => apply(Term::new(), e, false, env)?.build(orders),
    }
}

fn integer(f: &Form, env: &Env, what: &str) -> Result<i64> {
    let v = f.eval(env).ok_or_else(|| Error::Unsupported(format!("unbound index in {what} {f}")))?;
    if !v.is_integer() {
        return Err(Error::Unsupported(format!("{what} {f} is not an integer")));
    }
    Ok(v.to_integer())
}

fn base(m: &Monomial) -> Base {
    Base { sign: m.sign, a_power: m.a_exp, q_offset: m.q_exp }
}

fn apply<'a>(t: Term<'a>, e: &'a ExprNode, inv: bool, env: &Env) -> Result<Term<'a>> {
    let flip = |n: i64| if inv { -n } else { n };
    Ok(match e {
        ExprNode::Mul(v) => {
            let mut t = t;
            for (den, x) in v {
                t = apply(t, x, inv != *den, env)?;
            }
            t
        }
        ExprNode::QPow(f) => {
            let v = f.eval(env).ok_or_else(|| Error::Unsupported(format!("unbound index in q^({f})")))?;
            let twice = v * 2;
            if !twice.is_integer() {
                return Err(Error::Unsupported(format!("exponent {f} is not a half-integer")));
            }
            t.q_half(HalfExponent::halves(flip(twice.to_integer())))
        }
        ExprNode::APow(f) => t.a(flip(integer(f, env, "exponent")?)),
        ExprNode::Neg1Pow(f) => t.sign(integer(f, env, "exponent")?),
        ExprNode::Const(c) if inv => t.over_poly(Poly::constant(c.clone())),
        ExprNode::Const(c) => t.times_int(c.clone()),
        ExprNode::Poch { base: b, step, len } => {
            let n = integer(len, env, "length")?;
            if inv {
                t.over_poch(base(b), *step, n)
            } else {
                t.poch(base(b), *step, n)
            }
        }
        ExprNode::InfProduct { bases, step } => {
            let mut t = t;
            for b in bases {
                t = if inv { t.over_inf(base(b), *step) } else { t.times_inf(base(b), *step) };
            }
            t
        }
        ExprNode::Add(_) | ExprNode::Sum { .. } => match to_poly(e, env)? {
            Some(p) if inv => t.over_poly(p),
            Some(p) => t.times_poly(p),
            None if inv => return Err(Error::Unsupported(format!("division by the series {e}"))),
            None => {
                let env = env.clone();
                t.times_series(move |o| eval(e, &env, o))
            }
        },
    })
}

/// The exact polynomial value of a sum of monomials, if it is one.
fn to_poly(e: &ExprNode, env: &Env) -> Result<Option<Poly>> {
    Ok(match e {
        ExprNode::Add(v) => {
            let mut p = Poly::zero();
            for (neg, x) in v {
                let Some(y) = to_poly(x, env)? else {
                    return Ok(None);
                };
                p = if *neg { p - y } else { p + y };
            }
            Some(p)
        }
        ExprNode::Mul(v) => {
            let mut p = Poly::one();
            for (den, x) in v {
                if *den {
                    return Ok(None);
                }
                let Some(y) = to_poly(x, env)? else {
                    return Ok(None);
                };
                p = p * y;
            }
            Some(p)
        }
        ExprNode::Const(c) => Some(Poly::constant(c.clone())),
        ExprNode::QPow(f) => Some(Poly::monomial(BigInt::one(), 0, integer(f, env, "exponent")?)),
        ExprNode::APow(f) => Some(Poly::monomial(BigInt::one(), integer(f, env, "exponent")?, 0)),
        ExprNode::Neg1Pow(f) => {
            let s = if integer(f, env, "exponent")?.is_odd() { -1 } else { 1 };
            Some(Poly::constant(BigInt::from(s)))
        }
        _ => None,
    })
}

fn push_unique(v: &mut Vec<Form>, f: Form) {
    if !v.contains(&f) {
        v.push(f);
    }
}

/// Lower bounds for the q-valuation of `e` as a function of the indices
/// free in `e`. The valuation is at least the minimum of the returned forms.
fn val_forms(e: &ExprNode) -> Result<Vec<Form>> {
    Ok(match e {
        ExprNode::QPow(f) => vec![f.clone()],
        ExprNode::APow(_) | ExprNode::Neg1Pow(_) | ExprNode::Const(_) | ExprNode::InfProduct { .. } => {
            vec![Form::default()]
        }
        ExprNode::Poch { base, .. } => {
            if base.q_exp < 0 {
                return Err(Error::Unsupported(format!("base {base} with a negative power of q")));
            }
            vec![Form::default()]
        }
        ExprNode::Add(v) => {
            let mut out = Vec::new();
            for (_, x) in v {
                for f in val_forms(x)? {
                    push_unique(&mut out, f);
                }
            }
            out
        }
        ExprNode::Mul(v) => {
            let mut acc = vec![Form::default()];
            for (den, x) in v {
                let fs = match (den, x) {
                    (false, _) => val_forms(x)?,
                    (true, ExprNode::QPow(f)) => vec![f.scale(-Q::one())],
                    (true, ExprNode::Poch { .. } | ExprNode::InfProduct { .. }) => vec![Form::default()],
                    (true, _) => {
                        // 1/p has valuation -val(p) >= 0 when p has a unit term
                        if val_forms(x)?.iter().any(Form::is_zero) {
                            vec![Form::default()]
                        } else {
                            return Err(Error::Unsupported(format!("cannot bound the valuation of 1/({x})")));
                        }
                    }
                };
                let mut next = Vec::new();
                for a in &acc {
                    for b in &fs {
                        push_unique(&mut next, a + b);
                    }
                }
                acc = next;
            }
            acc
        }
        ExprNode::Sum { index, lower, body } => {
            let forms = val_forms(body)?;
            let ubs = upper_bounds(body, index);
            let mut out = Vec::new();
            for f in &forms {
                for g in eliminate(f, index, *lower, &ubs, e)? {
                    push_unique(&mut out, g);
                }
            }
            out
        }
    })
}

/// Upper limits on `x` beyond which a denominator `(b;q^s)_L` with `L`
/// decreasing in `x` has negative length, making the summand vanish.
fn upper_bounds(body: &ExprNode, x: &str) -> Vec<Form> {
    let ExprNode::Mul(v) = body else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (den, f) in v {
        if let (true, ExprNode::Poch { len, .. }) = (den, f) {
            let (_, b, c) = len.split(x);
            if let Some(b) = b.as_constant().filter(|b| *b < Q::zero()) {
                push_unique(&mut out, c.scale(-b.recip()));
            }
        }
    }
    out
}

/// Minimizes `f` over `x >= lower`, keeping the other indices symbolic.
fn eliminate(f: &Form, x: &str, lower: i64, ubs: &[Form], sum: &ExprNode) -> Result<Vec<Form>> {
    let (a, b, c) = f.split(x);
    if a > Q::zero() {
        // a x^2 + b x + c >= c - b^2 / 4a
        let sq = b.mul(&b).ok_or_else(|| Error::Unsupported(format!("valuation bound for {sum}")))?;
        return Ok(vec![&c - &sq.scale((a * 4).recip())]);
    }
    if a.is_zero() && b.is_zero() {
        return Ok(vec![c]);
    }
    let at = |v: &Form| f.substitute(x, v).ok_or_else(|| Error::Unsupported(format!("valuation bound for {sum}")));
    let mut out = vec![at(&Form::int(lower))?];
    if ubs.is_empty() {
        if a.is_zero() && b.as_constant().is_some_and(|b| b > Q::zero()) {
            return Ok(out);
        }
        return Err(Error::NonTerminatingSum(sum.to_string()));
    }
    for u in ubs {
        push_unique(&mut out, at(u)?);
    }
    Ok(out)
}

fn eval_sum(index: &str, lower: i64, body: &ExprNode, env: &Env, orders: Orders) -> Result<TruncatedSeries> {
    let what = || format!("sum over {index} >= {lower}");
    let mut bounds = Vec::new();
    for f in val_forms(body)? {
        let (a, b, c) = f
            .partial(env)
            .univariate(index)
            .ok_or_else(|| Error::Unsupported(format!("free index in the summand of {}", what())))?;
        bounds.push(Quadratic::new(a, b, c));
    }
    let mut upper: Option<i64> = None;
    for u in upper_bounds(body, index) {
        let v = u.eval(env).ok_or_else(|| Error::Unsupported(what()))?;
        let v = v.floor().to_integer();
        upper = Some(upper.map_or(v, |w| w.min(v)));
    }
    if upper.is_none() && bounds.iter().any(|q| q.a < Q::zero() || (q.a.is_zero() && q.b <= Q::zero())) {
        return Err(Error::NonTerminatingSum(what()));
    }
    let mut s = TruncatedSeries::zero(orders);
    let mut env = env.clone();
    let mut j = lower;
    while upper.is_none_or(|u| j <= u) && !bounds.iter().all(|q| q.exhausted(j, orders.q)) {
        env.insert(index.to_string(), j);
        s = &s + &eval(body, &env, orders)?;
        j += 1;
    }
    Ok(s)
}

/// The box an identity is checked on: univariate ones drop the a-order.
pub fn orders_for(id: &IdentityAST, q_order: i64, a_order: i64) -> Orders {
    if id.is_bivariate() {
        Orders::bivariate(a_order, q_order)
    } else {
        Orders::univariate(q_order)
    }
}

pub fn evaluate_sides(id: &IdentityAST, orders: Orders) -> Result<(TruncatedSeries, TruncatedSeries)> {
    Ok((evaluate(&id.lhs, orders)?, evaluate(&id.rhs, orders)?))
}

/// Checks `lhs = rhs` coefficientwise on the box.
pub fn verify(id: &IdentityAST, q_order: i64, a_order: i64) -> Result<VerificationReport> {
    let orders = orders_for(id, q_order, a_order);
    let mut c = Checker::new(id.name.clone());
    let (l, r) = evaluate_sides(id, orders)?;
    c.compare("lhs = rhs", &l, &r);
    if let Some(n) = &id.note {
        c.note(n.clone());
    }
    Ok(c.finish(orders))
}

/// Checks every reading of a catalog entry. With several readings the entry
/// passes when exactly one holds, is ambiguous when more than one does and
/// fails when none does.
pub fn verify_entry(entry: &CatalogEntry, q_order: i64, a_order: i64) -> Result<VerificationReport> {
    if let [only] = &entry.readings[..] {
        let mut r = verify(&only.identity, q_order, a_order)?;
        r.target = entry.name.clone();
        if let Some(n) = &entry.note {
            r.notes.push(n.clone());
        }
        return Ok(r);
    }
    let mut reports = Vec::new();
    for (i, reading) in entry.readings.iter().enumerate() {
        let label = reading.label.clone().unwrap_or_else(|| format!("reading {}", i + 1));
        let orders = orders_for(&reading.identity, q_order, a_order);
        let mut c = Checker::new(entry.name.clone());
        let (l, r) = evaluate_sides(&reading.identity, orders)?;
        c.compare(&label, &l, &r);
        reports.push((label, c.finish(orders)));
    }
    let holding: Vec<&str> = reports.iter().filter(|r| r.1.passed()).map(|r| r.0.as_str()).collect();
    let mut notes = Vec::new();
    for (label, r) in &reports {
        match &r.first_divergence {
            None => notes.push(format!("reading '{label}' holds")),
            Some(d) => notes.push(format!("reading '{label}' fails at a^{} q^{}", d.a_exp, d.q_exp)),
        }
    }
    if let Some(n) = &entry.note {
        notes.push(n.clone());
    }
    let (_, first) = &reports[0];
    let mut out = VerificationReport {
        target: entry.name.clone(),
        status: Status::Pass,
        checked_q_order: reports.iter().map(|r| r.1.checked_q_order).min().unwrap(),
        checked_a_order: reports.iter().filter_map(|r| r.1.checked_a_order).min(),
        first_divergence: None,
        elapsed_ms: reports.iter().map(|r| r.1.elapsed_ms).sum(),
        notes,
    };
    match holding.len() {
        1 => {}
        0 => {
            out.status = Status::Fail;
            out.first_divergence = first.first_divergence.clone();
        }
        _ => out.status = Status::Ambiguous,
    }
    Ok(out)
}
