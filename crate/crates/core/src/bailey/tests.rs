use num_bigint::BigInt;

use super::*;
use crate::report::Status;
use crate::series::{pochhammer, theta_sum, AValue, LinearFactor, PochhammerSpec};

fn biv(a: i64, q: i64) -> Orders {
    Orders::bivariate(a, q)
}

fn dk(d: i64, k: i64) -> DKParams {
    DKParams::new(d, k).unwrap()
}

/// alpha read straight off its defining quotient, before any cancellation:
/// (-1)^r a^{(k-d)r} q^{...} (aq^{2d};q^{2d})_r (a;q^d)_r / ((a;q^{2d})_r (q^d;q^d)_r)
fn alpha_uncancelled(p: &DKParams, m: u64, orders: Orders) -> TruncatedSeries {
    let (d, m) = (p.d, m as i64);
    if m % d != 0 {
        return TruncatedSeries::zero(orders);
    }
    let r = m / d;
    let e = HalfExponent::halves((2 * d * p.k - 2 * d * d + d) * r * r - d * r);
    Term::new()
        .sign(r)
        .a((p.k - d) * r)
        .q_half(e)
        .poch(Base::aq(2 * d), 2 * d, r)
        .poch(Base::aq(0), d, r)
        .over_poch(Base::aq(0), 2 * d, r)
        .over_poch(Base::q(d), d, r)
        .build(orders)
        .unwrap()
}

/// Number of partitions of each n <= max into parts congruent to +-1 mod 5.
fn rr_counts(max: usize) -> Vec<i64> {
    let mut c = vec![0i64; max + 1];
    c[0] = 1;
    for part in (1..=max).filter(|p| p % 5 == 1 || p % 5 == 4) {
        for n in part..=max {
            c[n] += c[n - part];
        }
    }
    c
}

#[test]
fn params() {
    assert_eq!(dk(2, 4).lambda, 3);
    assert_eq!(dk(2, 1).lambda, -3);
    assert_eq!(dk(4, 6).lambda, 2);
    assert!(DKParams::new(0, 1).is_err());
}

#[test]
fn alpha_examples() {
    let o = Orders::univariate(6);
    assert_eq!(alpha(&dk(1, 2), 0, o).unwrap().to_string(), "1");
    let a1 = alpha(&dk(1, 2), 1, o).unwrap();
    // -aq (1 - aq^2) / (1 - q)
    assert_eq!(a1.coeff(1, 1), BigInt::from(-1));
    assert_eq!(a1.coeff(1, 2), BigInt::from(-1));
    assert_eq!(a1.coeff(2, 3), BigInt::from(1));
    assert_eq!(a1.coeff(2, 4), BigInt::from(1));
    assert!(alpha(&dk(2, 3), 3, o).unwrap().is_zero());
}

#[test]
fn alpha_cancelled_form_matches_definition() {
    for (d, k) in DKParams::SUPPORTED {
        let p = dk(d, k);
        for m in 0..=8 {
            assert_eq!(
                alpha(&p, m, biv(12, 40)).unwrap(),
                alpha_uncancelled(&p, m, biv(12, 40)),
                "(d,k)=({d},{k}) m={m}"
            );
        }
    }
}

#[test]
fn beta_examples() {
    let o = biv(8, 20);
    for (d, k) in DKParams::SUPPORTED {
        assert_eq!(beta_definitional(&dk(d, k), 0, o).unwrap().to_string(), "1");
    }
    let unit = pochhammer(&PochhammerSpec::q(1, 1, 2), o).unwrap().invert().unwrap();
    assert_eq!(beta_definitional(&dk(1, 2), 2, o).unwrap(), unit);
    assert_eq!(
        beta_definitional(&dk(2, 4), 3, o).unwrap(),
        beta_closed(&dk(2, 4), 3, o).unwrap()
    );
    assert_eq!(beta_closed(&dk(2, 4), 0, o).unwrap().to_string(), "1");
    let mut inv = TruncatedSeries::one(o);
    inv.div_linear(LinearFactor::new(1, 1, 1)).unwrap();
    inv.div_linear(LinearFactor::new(1, 0, 1)).unwrap();
    assert_eq!(beta_closed(&dk(2, 1), 1, o).unwrap(), inv);
    assert_eq!(
        beta_closed(&dk(4, 6), 2, o).unwrap(),
        beta_definitional(&dk(4, 6), 2, o).unwrap()
    );
    assert_eq!(
        beta_closed(&dk(1, 2), 1, o),
        Err(Error::UnsupportedParams { d: 1, k: 2 })
    );
}

#[test]
fn all_pairs_agree_small() {
    for (d, k) in DKParams::SUPPORTED {
        let r = verify_bailey_pair(&dk(d, k), 8, biv(8, 24)).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
    }
}

#[test]
fn corrupted_beta_is_located() {
    let p = dk(2, 4);
    let o = biv(6, 20);
    let r = verify_beta_against(&p, 4, o, "corrupt", |n| {
        let b = beta_closed(&p, n, o)?;
        Ok(if n == 2 { &b + &TruncatedSeries::monomial_in(1.into(), 0, 5, o) } else { b })
    })
    .unwrap();
    assert_eq!(r.status, Status::Fail);
    let d = r.first_divergence.unwrap();
    assert_eq!((d.location.as_str(), d.a_exp, d.q_exp), ("n=2", 0, 5));
    assert_eq!(d.rhs_coeff, &d.lhs_coeff + 1);
}

#[test]
fn wbl_rogers_ramanujan() {
    let (lhs, rhs) = insert(Transform::Wbl, &dk(1, 2), BetaSource::Definitional, Orders::univariate(20)).unwrap();
    let l = lhs.eval_a(AValue::One).unwrap();
    let r = rhs.eval_a(AValue::One).unwrap();
    assert_eq!(l, r);
    let expect = rr_counts(20);
    for (n, &c) in expect.iter().enumerate() {
        assert_eq!(l.coeff(0, n as i64), BigInt::from(c));
    }
    assert!(l.to_string().starts_with("1 +1q +1q^2 +1q^3 +2q^4 +2q^5 +3q^6"));
}

#[test]
fn ssbl_two_three_bivariate() {
    let o = biv(8, 24);
    let (lhs, rhs) = insert(Transform::Ssbl, &dk(2, 3), BetaSource::Closed, o).unwrap();
    // sum a^n q^{n(n+1)/2} (-1;q)_n / ((aq;q^2)_n (q;q)_n)
    let mut l = TruncatedSeries::zero(o);
    for n in 0..=7 {
        let t = Term::new()
            .a(n)
            .q(n * (n + 1) / 2)
            .poch(Base::q(0).neg(), 1, n)
            .over_poch(Base::aq(1), 2, n)
            .over_poch(Base::q(1), 1, n);
        l = &l + &t.build(o).unwrap();
    }
    assert_eq!(lhs, l);
    // (-aq;q)_inf/(aq;q)_inf sum (-1)^r a^{3r} q^{5r^2} (-1;q)_{2r} (1-aq^{4r}) (a;q^2)_r
    //   / ((1-a) (q^2;q^2)_r (-aq;q)_{2r})
    let sum = |o: Orders| {
        let mut s = TruncatedSeries::zero(o);
        for r in 0..=3 {
            let t = Term::new()
                .sign(r)
                .a(3 * r)
                .q(5 * r * r)
                .poch(Base::q(0).neg(), 1, 2 * r)
                .times_linear(LinearFactor::new(1, 1, 4 * r))
                .poch(Base::aq(0), 2, r)
                .over_linear(LinearFactor::new(1, 1, 0))
                .over_poch(Base::q(2), 2, r)
                .over_poch(Base::aq(1).neg(), 1, 2 * r);
            s = &s + &t.build(o)?;
        }
        Ok(s)
    };
    let r = Term::new()
        .times_inf(Base::aq(1).neg(), 1)
        .over_inf(Base::aq(1), 1)
        .times_series(sum)
        .build(o)
        .unwrap();
    assert_eq!(rhs, r);
    assert_eq!(lhs, rhs);
}

#[test]
fn pentagonal_from_trivial_pair() {
    let n = 40;
    let s = alpha_sum(Transform::Wbl, &dk(1, 1), Orders::univariate(n)).unwrap();
    let s = s.eval_a(AValue::One).unwrap();
    assert_eq!(s, theta_sum(HalfExponent::halves(3), HalfExponent::halves(1), n).unwrap());
}

#[test]
fn definitional_and_closed_insertions_agree() {
    let o = biv(6, 20);
    for (d, k) in DKParams::SUPPORTED {
        for t in [Transform::Wbl, Transform::Ssbl, Transform::Atnsbl] {
            let (l1, r1) = insert(t, &dk(d, k), BetaSource::Definitional, o).unwrap();
            let (l2, _) = insert(t, &dk(d, k), BetaSource::Closed, o).unwrap();
            assert_eq!(l1, l2, "{t:?} ({d},{k})");
            assert_eq!(l1, r1, "{t:?} ({d},{k})");
        }
    }
}

#[test]
fn sequences_memoize() {
    let s = BetaSequence::new(dk(2, 4), BetaSource::Definitional);
    let x = s.get(3, biv(4, 10)).unwrap();
    let y = s.get(3, biv(4, 10)).unwrap();
    assert!(std::sync::Arc::ptr_eq(&x, &y));
    let a = AlphaSequence::new(dk(2, 4));
    assert!(a.get(1, biv(4, 10)).unwrap().is_zero());
}
