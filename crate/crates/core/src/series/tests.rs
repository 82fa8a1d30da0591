use super::*;
use proptest::prelude::*;

fn q(c: i64, e: i64, n: i64) -> TruncatedSeries {
    TruncatedSeries::monomial(c, 0, e, n)
}

fn aq(c: i64, a: i64, e: i64, n: i64) -> TruncatedSeries {
    TruncatedSeries::monomial(c, a, e, n)
}

fn coeffs(s: &TruncatedSeries) -> Vec<i64> {
    (0..=s.q_order()).map(|e| i64::try_from(s.coeff(0, e)).unwrap()).collect()
}

/// Partition numbers by the textbook O(n^2) recurrence over largest part.
fn partition_numbers(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p
}

#[test]
fn monomial_examples() {
    assert_eq!(q(1, 0, 10).to_string(), "1");
    assert_eq!(aq(-3, 1, 2, 10).to_string(), "-3aq^2");
    assert!(q(5, 11, 10).is_zero());
}

#[test]
fn ring_examples() {
    let one = q(1, 0, 10);
    let x = q(1, 1, 10);
    assert_eq!(((&one + &x) * (&one - &x)).to_string(), "1 -1q^2");
    let lin = &one - &aq(1, 1, 1, 10);
    assert_eq!((&lin + &aq(1, 1, 1, 10)).to_string(), "1");
    // (q;q)_3 by repeated multiplication
    let mut p = one.clone();
    for j in 1..=3 {
        p = &p * &(&one - &q(1, j, 10));
    }
    assert_eq!(p.to_string(), "1 -1q -1q^2 +1q^4 +1q^5 -1q^6");
}

#[test]
fn invert_examples() {
    let s = &q(1, 0, 4) - &q(1, 1, 4);
    assert_eq!(s.invert().unwrap().to_string(), "1 +1q +1q^2 +1q^3 +1q^4");
    let s = &q(1, 0, 3) - &aq(1, 1, 1, 3);
    assert_eq!(s.invert().unwrap().to_string(), "1 +1aq +1a^2q^2 +1a^3q^3");
    let euler = pochhammer(&PochhammerSpec::q_inf(1, 1), Orders::univariate(8)).unwrap();
    assert_eq!(coeffs(&euler.invert().unwrap()), partition_numbers(8));
    // (a;q)_2 has constant term 1 - a
    let bad = pochhammer(&PochhammerSpec::new(1, 1, 0, 1, Length::Finite(2)), Orders::univariate(5))
        .unwrap();
    assert!(matches!(bad.invert(), Err(Error::NotInvertible(_))));
}

#[test]
fn pochhammer_examples() {
    let o = Orders::univariate(10);
    assert_eq!(pochhammer(&PochhammerSpec::q(1, 1, 0), o).unwrap().to_string(), "1");
    let minus_one = PochhammerSpec::new(-1, 0, 0, 1, Length::Finite(2));
    assert_eq!(pochhammer(&minus_one, o).unwrap().to_string(), "2 +2q");
    let bad = PochhammerSpec::new(-1, 0, 0, 1, Length::Infinite);
    assert!(matches!(pochhammer(&bad, o), Err(Error::NonTruncating(_))));
}

#[test]
fn triple_product_mod10() {
    // (q^2, q^8, q^10; q^10)_inf expanded factor by factor as plain polynomials
    let n = 40usize;
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for e in (1..=n).filter(|e| [2, 8, 0].contains(&(e % 10))) {
        for m in (e..=n).rev() {
            c[m] -= c[m - e];
        }
    }
    assert_eq!(coeffs(&triple_product(2, 8, 10, n as i64).unwrap()), c);
}

#[test]
fn theta_examples() {
    let h = HalfExponent::halves;
    let pent = theta_sum(h(3), h(-1), 12).unwrap();
    assert_eq!(pent.to_string(), "1 -1q -1q^2 +1q^5 +1q^7 -1q^12");
    let t = theta_sum(h(2), h(0), 10).unwrap();
    assert_eq!(t.to_string(), "1 -2q +2q^4 -2q^9");
    let rr = theta_sum(h(5), h(-1), 30).unwrap();
    assert_eq!(rr, triple_product(2, 3, 5, 30).unwrap());
    assert!(matches!(theta_sum(h(3), h(0), 10), Err(Error::NonIntegerExponent(_))));
}

#[test]
fn substitute_examples() {
    assert_eq!(aq(1, 1, 1, 10).substitute(2, 1).to_string(), "1aq^3");
    let s = &q(1, 0, 10) + &q(1, 1, 10);
    assert_eq!(s.substitute(0, 2).to_string(), "1 +1q^2");
    assert_eq!(aq(1, 2, 1, 10).substitute(3, 1).to_string(), "1a^2q^7");
}

#[test]
fn eval_examples() {
    let s = &(&q(1, 0, 10) + &aq(1, 1, 1, 10)) + &aq(1, 2, 3, 10);
    assert_eq!(s.eval_a(AValue::One).unwrap().to_string(), "1 +1q +1q^3");
    let s = &q(1, 0, 10) + &aq(1, 1, 1, 10);
    assert_eq!(s.eval_a(AValue::Zero).unwrap().to_string(), "1");
    assert_eq!(aq(1, 1, 1, 10).eval_a(AValue::QPower(1)).unwrap().to_string(), "1q^2");
    assert_eq!(aq(1, -1, 1, 10).eval_a(AValue::Zero), Err(Error::NegativeAPower));
}

#[test]
fn laurent_product_shrinks_order() {
    let s = &q(1, 0, 10) + &q(1, 5, 10);
    let p = &q(1, -2, 10) * &s;
    assert_eq!(p.q_order(), 8);
    assert_eq!(p.to_string(), "1q^-2 +1q^3");
}

#[test]
fn first_difference_ordering() {
    let x = TruncatedSeries::from_terms(
        [(0, 1, 1.into()), (2, 3, 5.into()), (1, 3, 1.into())],
        Orders::bivariate(5, 10),
    );
    let y = TruncatedSeries::from_terms([(0, 1, 1.into()), (2, 3, 4.into())], Orders::bivariate(5, 10));
    let d = x.first_difference(&y).unwrap();
    assert_eq!((d.a_exp, d.q_exp), (1, 3));
    assert_eq!((d.lhs, d.rhs), (BigInt::from(1), BigInt::from(0)));
}

fn arb_series(n: i64, a: i64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0..=a, 0..=n, -4i64..=4), 0..12).prop_map(move |ts| {
        TruncatedSeries::from_terms(
            ts.into_iter().map(|(a, q, c)| (a, q, BigInt::from(c))),
            Orders::bivariate(a, n),
        )
    })
}

fn arb_unit(n: i64, a: i64) -> impl Strategy<Value = TruncatedSeries> {
    (arb_series(n, a), prop::bool::ANY).prop_map(move |(s, neg)| {
        let head = TruncatedSeries::monomial_in(BigInt::from(if neg { -1 } else { 1 }), 0, 0, s.orders());
        let tail = s.shift(0, 1);
        &head + &tail
    })
}

proptest! {
    #[test]
    fn ring_laws(x in arb_series(12, 4), y in arb_series(12, 4), z in arb_series(12, 4)) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn inverse_is_inverse(u in arb_unit(14, 5)) {
        let inv = u.invert().unwrap();
        prop_assert_eq!(&u * &inv, TruncatedSeries::one(u.orders()));
    }

    #[test]
    fn div_poly_matches_invert(u in arb_unit(6, 3), x in arb_series(14, 4)) {
        // an exact polynomial divisor: drop truncation by rebuilding as Poly
        let p = u.terms().fold(Poly::zero(), |acc, (a, q, c)| acc + Poly::monomial(c.clone(), a, q));
        let mut d = x.truncate(Orders::bivariate(4, 14));
        d.div_poly(&p).unwrap();
        let ps = p.to_series(Orders::bivariate(4, 14));
        prop_assert_eq!(&d * &ps, x.truncate(Orders::bivariate(4, 14)));
    }

    #[test]
    fn linear_ops_roundtrip(x in arb_series(14, 4), s in prop::bool::ANY, p in 0i64..3, e in 1i64..4) {
        let f = LinearFactor::new(if s { 1 } else { -1 }, p, e);
        let mut y = x.clone();
        y.mul_linear(f);
        prop_assert_eq!(&y, &(&x * &f.to_poly().to_series(x.orders())));
        y.div_linear(f).unwrap();
        prop_assert_eq!(&y, &x);
    }

    #[test]
    fn pochhammer_splits(sign in prop::bool::ANY, ap in 0i64..3, off in 0i64..3, step in 1i64..4, m in 0u64..5, n in 0u64..5) {
        let o = Orders::bivariate(6, 30);
        let spec = PochhammerSpec::new(if sign { 1 } else { -1 }, ap, off, step, Length::Finite(m + n));
        let head = pochhammer(&spec.with_length(Length::Finite(m)), o).unwrap();
        let tail = pochhammer(&spec.skip(m), o).unwrap();
        prop_assert_eq!(&head * &tail, pochhammer(&spec, o).unwrap());
    }

    #[test]
    fn substitute_composes(x in arb_series(20, 4), d1 in 0i64..3, d2 in 0i64..3) {
        prop_assert_eq!(x.substitute(d1, 1).substitute(d2, 1), x.substitute(d1 + d2, 1));
    }

    #[test]
    fn theta_is_triple_product(a2 in 1i64..12, b in -10i64..10) {
        // A = a2/2, B = b/2 with matching parity; need x = A - B > 0, y = A + B > 0
        let b2 = if (a2 + b) % 2 == 0 { b } else { b + 1 };
        prop_assume!(a2 > b2.abs());
        let t = theta_sum(HalfExponent::halves(a2), HalfExponent::halves(b2), 50).unwrap();
        let x = (a2 - b2) / 2;
        let y = (a2 + b2) / 2;
        prop_assert_eq!(t, triple_product(x, y, a2, 50).unwrap());
    }
}
