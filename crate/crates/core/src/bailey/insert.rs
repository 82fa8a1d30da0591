use num_rational::Ratio;

use super::{alpha_term, BetaSequence, BetaSource, DKParams};
use crate::cutoff::{sum_indices, Quadratic, Q};
use crate::error::Result;
use crate::series::{Orders, TruncatedSeries};
use crate::term::{Base, Term};

/// Limiting forms of Bailey's lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    /// `sum a^j q^{j^2} beta_j = 1/(aq;q)_inf sum a^m q^{m^2} alpha_m`
    Wbl,
    /// base `q^2` beta and alpha with `(-q;q^2)` weights
    Atnsbl,
    /// `(-1;q)_j` weights and `(-aq;q)_inf / (aq;q)_inf` prefactor
    Ssbl,
}

impl Transform {
    fn scale(self) -> i64 {
        if self == Transform::Atnsbl {
            2
        } else {
            1
        }
    }

    /// q-exponent `c2 j^2 + c1 j` of the weight on index `j`, halved.
    fn weight(self) -> (i64, i64) {
        match self {
            Transform::Wbl | Transform::Atnsbl => (2, 0),
            Transform::Ssbl => (1, 1),
        }
    }

    /// Weight factors other than the monomial `a^j q^{...}`.
    fn weigh<'a>(self, t: Term<'a>, j: i64, alpha_side: bool) -> Term<'a> {
        let (c2, c1) = self.weight();
        let t = t.a(j).q((c2 * j * j + c1 * j) / 2);
        match (self, alpha_side) {
            (Transform::Wbl, _) => t,
            (Transform::Ssbl, false) => t.poch(Base::q(0).neg(), 1, j),
            (Transform::Ssbl, true) => t.poch(Base::q(0).neg(), 1, j).over_poch(Base::aq(1).neg(), 1, j),
            (Transform::Atnsbl, false) => t.poch(Base::q(1).neg(), 2, j),
            (Transform::Atnsbl, true) => t.poch(Base::q(1).neg(), 2, j).over_poch(Base::aq(1).neg(), 2, j),
        }
    }

    fn prefactor<'a>(self) -> Term<'a> {
        match self {
            Transform::Wbl => Term::new().over_inf(Base::aq(1), 1),
            Transform::Ssbl => Term::new().times_inf(Base::aq(1).neg(), 1).over_inf(Base::aq(1), 1),
            Transform::Atnsbl => Term::new().times_inf(Base::aq(1).neg(), 2).over_inf(Base::aq(2), 2),
        }
    }
}

/// Lower bound on the q-valuation of the `j`-th weighted beta term: beta_j
/// has valuation at least `min(0, c) j^2 / d^2 - j/2`, where `c` is the
/// coefficient of `r^2` in alpha's exponent.
fn lhs_bound(t: Transform, p: &DKParams) -> Quadratic {
    let s = Q::from(t.scale());
    let c = Ratio::new(p.alpha_quadratic().numerator, 2).min(Q::from(0));
    let (c2, c1) = t.weight();
    Quadratic::new(
        Ratio::new(c2, 2) + s * c / (p.d * p.d),
        Ratio::new(c1, 2) - s / 2,
        Q::from(0),
    )
}

/// Bound for the alpha term with `m = d r`, as a quadratic in `r`.
fn rhs_bound(t: Transform, p: &DKParams) -> Quadratic {
    let s = Q::from(t.scale());
    let c = Ratio::new(p.alpha_quadratic().numerator, 2);
    let (c2, c1) = t.weight();
    let d = p.d;
    Quadratic::new(
        Ratio::new(c2 * d * d, 2) + s * c,
        Ratio::new(c1 * d, 2) - s * Ratio::new(d, 2),
        Q::from(0),
    )
}

/// `sum_m weight(m) alpha_m(a, q^s)` without the infinite-product prefactor.
pub fn alpha_sum(t: Transform, p: &DKParams, orders: Orders) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::zero(orders);
    let what = format!("alpha side of ({}, {})", p.d, p.k);
    sum_indices(rhs_bound(t, p), 0, orders.q, &what, |r| {
        let m = p.d * r;
        let term = alpha_term(p, m as u64, t.scale()).expect("multiple of d");
        s = &s + &t.weigh(term, m, true).build(orders)?;
        Ok(())
    })?;
    Ok(s)
}

/// Both sides of the transform applied to `(alpha, beta)` with beta from
/// `betas`.
pub fn insert_with(t: Transform, betas: &BetaSequence, orders: Orders) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let p = betas.params;
    let mut lhs = TruncatedSeries::zero(orders);
    let what = format!("beta side of ({}, {})", p.d, p.k);
    sum_indices(lhs_bound(t, &p), 0, orders.q, &what, |j| {
        let term = t.weigh(Term::new(), j, false).times_series(move |o| {
            if t != Transform::Atnsbl {
                return Ok((*betas.get(j as u64, o)?).clone());
            }
            // q -> q^2 halves a negative order, so ask for ceil(N/2) there
            let inner = Orders { q: o.q.max(-((-o.q).div_euclid(2))), ..o };
            Ok(betas.get(j as u64, inner)?.substitute(0, 2))
        });
        lhs = &lhs + &term.build(orders)?;
        Ok(())
    })?;
    let rhs = t.prefactor().times_series(|o| alpha_sum(t, &p, o)).build(orders)?;
    Ok((lhs, rhs))
}

pub fn insert(t: Transform, p: &DKParams, source: BetaSource, orders: Orders) -> Result<(TruncatedSeries, TruncatedSeries)> {
    insert_with(t, &BetaSequence::new(*p, source), orders)
}
