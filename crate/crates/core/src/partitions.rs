//! Counting oracles for the d-extended Gordon theorem, built by direct
//! enumeration and independent of the series code they are checked against.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qdiff::{product_side, q_family, verify_system, FamilyIndex};
use crate::report::{Checker, VerificationReport};
use crate::series::{Orders, TruncatedSeries};
use crate::term::{Base, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartitionConstraint {
    pub d: i64,
    pub k: i64,
    pub i: i64,
}

impl PartitionConstraint {
    pub fn new(d: i64, k: i64, i: i64) -> Result<Self> {
        FamilyIndex::new(d, k, i)?;
        Ok(PartitionConstraint { d, k, i })
    }

    fn index(&self) -> FamilyIndex {
        FamilyIndex { d: self.d, k: self.k, i: self.i }
    }

    /// Whether `part` is allowed on the congruence side: not 0 or `+-di`
    /// modulo `(2k+1)d`.
    pub fn allows(&self, part: i64) -> bool {
        let m = (2 * self.k + 1) * self.d;
        let r = part.rem_euclid(m);
        let di = (self.d * self.i).rem_euclid(m);
        r != 0 && r != di && r != m - di
    }
}

/// Partitions of `n` into parts allowed by [`PartitionConstraint::allows`].
pub fn count_a(c: &PartitionConstraint, n: u64) -> u64 {
    let n = n as usize;
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for p in (1..=n).filter(|&p| c.allows(p as i64)) {
        for m in p..=n {
            ways[m] += ways[m - p];
        }
    }
    ways[n]
}

/// `table[n][m]`: partitions of `n <= max_n` with exactly `m` parts where `d`
/// appears at most `i-1` times and any two consecutive multiples of `d`
/// together appear at most `k-1` times.
pub fn b_table(c: &PartitionConstraint, max_n: u64) -> Vec<Vec<u64>> {
    let max_n = max_n as usize;
    let mut table = vec![vec![0u64; max_n + 1]; max_n + 1];
    // parts are chosen from largest to smallest; `above` is the frequency of
    // the next larger multiple of d
    fn go(c: &PartitionConstraint, part: usize, left: usize, parts: usize, above: usize, total: usize, table: &mut [Vec<u64>]) {
        let n = total - left;
        if part == 0 {
            table[n][parts] += 1;
            return;
        }
        let d = c.d as usize;
        let multiple = part.is_multiple_of(d);
        let mut cap = left / part;
        if multiple {
            cap = cap.min((c.k as usize - 1).saturating_sub(above));
            if part == d {
                cap = cap.min(c.i as usize - 1);
            }
        }
        for f in 0..=cap {
            let next_above = if multiple { f } else { above };
            go(c, part - 1, left - f * part, parts + f, next_above, total, table);
        }
    }
    // unused weight at the end means every n <= max_n is covered in one pass
    go(c, max_n, max_n, 0, 0, max_n, &mut table);
    table
}

pub fn count_b(c: &PartitionConstraint, n: u64) -> u64 {
    b_table(c, n)[n as usize].iter().sum()
}

/// Partitions counted by [`count_b`] with exactly `m` parts.
pub fn count_b_parts(c: &PartitionConstraint, m: u64, n: u64) -> u64 {
    b_table(c, n)[n as usize].get(m as usize).copied().unwrap_or(0)
}

/// `sum b(m, n) a^m q^n` on the box `(a_order, q_order)`.
pub fn b_genfun(c: &PartitionConstraint, a_order: i64, q_order: i64) -> TruncatedSeries {
    let orders = Orders::bivariate(a_order, q_order);
    let table = b_table(c, q_order.max(0) as u64);
    let terms = table.iter().enumerate().flat_map(|(n, row)| {
        row.iter()
            .enumerate()
            .filter(|&(m, &v)| v != 0 && m as i64 <= a_order)
            .map(move |(m, &v)| (m as i64, n as i64, BigInt::from(v)))
    });
    TruncatedSeries::from_terms(terms, orders)
}

/// `A(n) = B(n)` for every `n <= n_max`.
pub fn verify_partition_theorem(c: &PartitionConstraint, n_max: u64) -> VerificationReport {
    let mut check = Checker::new(format!("partitions d={} k={} i={}", c.d, c.k, c.i));
    let table = b_table(c, n_max);
    for n in 0..=n_max {
        let b: u64 = table[n as usize].iter().sum();
        check.compare_counts(format_args!("n={n}"), n as i64, &count_a(c, n).into(), &b.into());
    }
    check.finish(Orders::univariate(n_max as i64))
}

/// Compares the enumerated generating function with `Q_{d,k,i}`.
pub fn verify_refined(c: &PartitionConstraint, orders: Orders) -> Result<VerificationReport> {
    let a = orders.a.ok_or(Error::Unsupported("refined check needs a bounded a-order".into()))?;
    let mut check = Checker::new(format!("refined d={} k={} i={}", c.d, c.k, c.i));
    check.compare("B = Q", &b_genfun(c, a, orders.q), &q_family(c.index(), orders)?);
    Ok(check.finish(orders))
}

/// The q-difference system on the enumerated `B_{d,k,i}(a)`.
pub fn verify_b_recurrences(d: i64, k: i64, orders: Orders) -> Result<VerificationReport> {
    let a = orders.a.ok_or(Error::Unsupported("recurrences need a bounded a-order".into()))?;
    FamilyIndex::new(d, k, 1)?;
    verify_system(&format!("B system d={d} k={k}"), d, k, orders, |i, o| {
        Ok(b_genfun(&PartitionConstraint { d, k, i }, a.min(o.a.unwrap_or(a)), o.q))
    })
}

/// `sum q^{N_1^2 + ... + N_{k-1}^2 + N_i + ... + N_{k-1}} / ((q;q)_{n_1} ... (q;q)_{n_{k-1}})`
/// with `N_j = n_j + ... + n_{k-1}`.
pub fn andrews_gordon_lhs(k: i64, i: i64, q_order: i64) -> Result<TruncatedSeries> {
    if k < 2 || i < 1 || i > k {
        return Err(Error::InvalidIndex { d: 1, k, i });
    }
    let orders = Orders::univariate(q_order);
    let mut s = TruncatedSeries::zero(orders);
    let parts = (k - 1) as usize;
    // N_1^2 <= q_order bounds the total
    let max_total = (0..).take_while(|t: &i64| t * t <= q_order).last().unwrap_or(0);
    let mut n = vec![0i64; parts];
    loop {
        // tails[j] = N_{j+1}
        let mut tails = vec![0i64; parts];
        let mut acc = 0;
        for j in (0..parts).rev() {
            acc += n[j];
            tails[j] = acc;
        }
        let e: i64 = tails.iter().map(|t| t * t).sum::<i64>() + tails[(i - 1) as usize..].iter().sum::<i64>();
        if e <= q_order {
            let t = n.iter().fold(Term::new().q(e), |t, &nj| t.over_poch(Base::q(1), 1, nj));
            s = &s + &t.build(orders)?;
        }
        // next tuple with total <= max_total
        let mut j = 0;
        loop {
            if j == parts {
                return Ok(s);
            }
            n[j] += 1;
            if n.iter().sum::<i64>() <= max_total {
                break;
            }
            n[j] = 0;
            j += 1;
        }
    }
}

pub fn verify_andrews_gordon(k: i64, i: i64, q_order: i64) -> Result<VerificationReport> {
    let mut check = Checker::new(format!("andrews-gordon k={k} i={i}"));
    let lhs = andrews_gordon_lhs(k, i, q_order)?;
    check.compare("multisum", &lhs, &product_side(FamilyIndex::new(1, k, i)?, q_order)?);
    Ok(check.finish(Orders::univariate(q_order)))
}
