use num_bigint::BigInt;

use super::*;
use crate::report::Status;

fn idx(d: i64, k: i64, i: i64) -> FamilyIndex {
    FamilyIndex::new(d, k, i).unwrap()
}

fn biv(a: i64, q: i64) -> Orders {
    Orders::bivariate(a, q)
}

/// Partitions of each n <= max into parts p with `allowed(p)`.
fn restricted_counts(max: usize, allowed: impl Fn(usize) -> bool) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(0); max + 1];
    c[0] = BigInt::from(1);
    for p in (1..=max).filter(|&p| allowed(p)) {
        for n in p..=max {
            let prev = c[n - p].clone();
            c[n] += prev;
        }
    }
    c
}

/// Parts not congruent to 0 or +-di modulo (2k+1)d.
fn gordon_counts(ix: FamilyIndex, max: usize) -> Vec<BigInt> {
    let m = ix.modulus() as usize;
    let r = (ix.d * ix.i) as usize % m;
    restricted_counts(max, |p| p % m != 0 && p % m != r && p % m != m - r)
}

fn assert_counts(s: &TruncatedSeries, expect: &[BigInt]) {
    for (n, c) in expect.iter().enumerate() {
        assert_eq!(&s.coeff(0, n as i64), c, "q^{n}");
    }
}

#[test]
fn index_validation() {
    assert!(FamilyIndex::new(2, 3, 4).is_err());
    assert!(FamilyIndex::new(2, 3, 0).is_err());
    assert_eq!(idx(2, 3, 1).modulus(), 14);
}

#[test]
fn q_at_zero_is_one() {
    for (d, k) in [(1, 1), (1, 3), (2, 3), (3, 4), (4, 2)] {
        for i in 1..=k {
            let s = q_family(idx(d, k, i), biv(6, 30)).unwrap();
            assert_eq!(s.eval_a(AValue::Zero).unwrap().to_string(), "1");
        }
    }
}

#[test]
fn q_at_one_counts_partitions() {
    for ix in [idx(1, 2, 2), idx(1, 2, 1), idx(2, 3, 3), idx(3, 4, 2)] {
        let s = q_family(ix, Orders::univariate(40)).unwrap().eval_a(AValue::One).unwrap();
        assert_counts(&s, &gordon_counts(ix, 40));
    }
    let rr = q_family(idx(1, 2, 2), Orders::univariate(8)).unwrap().eval_a(AValue::One).unwrap();
    assert!(rr.to_string().starts_with("1 +1q +1q^2 +1q^3 +2q^4"));
}

#[test]
fn alternate_form_agrees() {
    assert_eq!(q_kk_alternate(2, 2, biv(20, 60)).unwrap(), q_family(idx(2, 2, 2), biv(20, 60)).unwrap());
    assert_eq!(q_kk_alternate(3, 4, biv(12, 40)).unwrap(), q_family(idx(3, 4, 4), biv(12, 40)).unwrap());
    assert_eq!(q_kk_alternate(1, 1, biv(10, 30)).unwrap(), q_family(idx(1, 1, 1), biv(10, 30)).unwrap());
}

#[test]
fn q_systems_pass() {
    for (d, k) in [(2, 3), (1, 2), (1, 1), (4, 2)] {
        let r = verify_q_system(d, k, biv(12, 40)).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
        assert_eq!((r.checked_q_order, r.checked_a_order), (40, Some(12)));
    }
}

#[test]
fn broken_family_is_located() {
    let r = verify_system("broken", 2, 3, biv(8, 24), |i, o| {
        let s = q_family(idx(2, 3, i), o)?;
        Ok(if i == 2 { &s + &TruncatedSeries::monomial_in(1.into(), 3, 9, o) } else { s })
    })
    .unwrap();
    assert_eq!(r.status, Status::Fail);
    let d = r.first_divergence.unwrap();
    assert_eq!(d.location, "i=2");
    assert_eq!((d.a_exp, d.q_exp), (3, 9));
}

#[test]
fn f_at_zero_is_one() {
    for (d, k) in F_FAMILIES {
        for i in 1..=k {
            let s = f_family(idx(d, k, i), biv(6, 30)).unwrap();
            assert_eq!(s.eval_a(AValue::Zero).unwrap().to_string(), "1", "({d},{k},{i})");
        }
    }
}

#[test]
fn f_star_matches() {
    assert_eq!(f_star_222(biv(20, 60)).unwrap(), f_family(idx(2, 2, 2), biv(20, 60)).unwrap());
}

#[test]
fn f_233_at_one() {
    let s = f_family(idx(2, 3, 3), Orders::univariate(30)).unwrap().eval_a(AValue::One).unwrap();
    assert!(s.to_string().starts_with("1 +1q +2q^2 +3q^3 +5q^4"));
    assert_counts(&s, &gordon_counts(idx(2, 3, 3), 30));
}

#[test]
fn f_systems_pass() {
    for (d, k) in F_FAMILIES {
        let r = verify_f_system(d, k, biv(10, 36)).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
    }
}

#[test]
fn f_equals_q() {
    let o = biv(10, 36);
    for (d, k) in F_FAMILIES {
        for i in 1..=k {
            assert_eq!(f_family(idx(d, k, i), o).unwrap(), q_family(idx(d, k, i), o).unwrap(), "({d},{k},{i})");
        }
    }
}

#[test]
fn f_333_needs_even_length() {
    // the same sum with (a;q)_{2n-1} in the denominator
    let odd = |o: Orders| {
        let mut s = TruncatedSeries::zero(o);
        for n in 0..=7 {
            for r in 0..=n / 3 {
                let t = Term::new()
                    .sign(r)
                    .a(n)
                    .q(n * n)
                    .q_half(HalfExponent::halves(3 * r * (r - 1)))
                    .poch(Base::aq(0), 3, n - r)
                    .over_poch(Base::aq(0), 1, 2 * n - 1)
                    .over_poch(Base::q(1), 1, n - 3 * r)
                    .over_poch(Base::q(3), 3, r);
                s = &s + &t.build(o)?;
            }
        }
        Ok(s)
    };
    let o = biv(8, 30);
    let r = verify_system("odd", 3, 3, o, |i, o| if i == 3 { odd(o) } else { f_family(idx(3, 3, i), o) }).unwrap();
    assert_eq!(r.status, Status::Fail);
}

#[test]
fn unsupported_f() {
    assert_eq!(f_family(idx(1, 2, 1), biv(2, 4)), Err(Error::UnsupportedParams { d: 1, k: 2 }));
    assert!(verify_f_system(4, 6, biv(2, 4)).is_err());
}

#[test]
fn product_sides() {
    let s = product_side(idx(2, 2, 1), 40).unwrap();
    assert_counts(&s, &restricted_counts(40, |p| ![0, 2, 8].contains(&(p % 10))));
    let s = product_side(idx(1, 2, 1), 40).unwrap();
    assert_counts(&s, &restricted_counts(40, |p| p % 5 == 2 || p % 5 == 3));
    // (q^9, q^18, q^27; q^27)_inf = (q^9; q^9)_inf
    let s = product_side(idx(3, 4, 3), 60).unwrap();
    assert_counts(&s, &restricted_counts(60, |p| p % 9 != 0));
}

#[test]
fn product_side_checks_pass() {
    for (d, k) in [(1, 2), (2, 3), (3, 4), (4, 6)] {
        for i in 1..=k {
            let r = verify_product_side(idx(d, k, i), 60).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
    }
}
