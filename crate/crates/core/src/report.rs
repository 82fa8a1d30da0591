use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;

use crate::series::{Orders, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Ambiguous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Ambiguous => "ambiguous",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// Which comparison failed, e.g. `"n=3"` or `"i=2"`.
    pub location: String,
    pub a_exp: i64,
    pub q_exp: i64,
    pub lhs_coeff: BigInt,
    pub rhs_coeff: BigInt,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: coefficient of a^{} q^{} is {} on the left, {} on the right",
            self.location, self.a_exp, self.q_exp, self.lhs_coeff, self.rhs_coeff
        )
    }
}

/// Outcome of one verification target. `status == Fail` exactly when
/// `first_divergence` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub target: String,
    pub status: Status,
    pub checked_q_order: i64,
    pub checked_a_order: Option<i64>,
    pub first_divergence: Option<Divergence>,
    pub elapsed_ms: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} q_order={}", self.target, self.status, self.checked_q_order)?;
        if let Some(a) = self.checked_a_order {
            write!(f, " a_order={a}")?;
        }
        write!(f, " ({} ms)", self.elapsed_ms)?;
        if let Some(d) = &self.first_divergence {
            write!(f, "\n  first divergence at {d}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates coefficientwise comparisons into a report. Only the first
/// divergence is kept; the certified box is the smallest one compared.
pub struct Checker {
    target: String,
    start: Instant,
    orders: Option<Orders>,
    divergence: Option<Divergence>,
    notes: Vec<String>,
}

impl Checker {
    pub fn new(target: impl Into<String>) -> Self {
        Checker {
            target: target.into(),
            start: Instant::now(),
            orders: None,
            divergence: None,
            notes: Vec::new(),
        }
    }

    /// Compares two series on their common box. Returns true on agreement.
    pub fn compare(&mut self, location: impl fmt::Display, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> bool {
        let common = lhs.orders().min(rhs.orders());
        self.orders = Some(match self.orders {
            Some(o) => o.min(common),
            None => common,
        });
        match lhs.first_difference(rhs) {
            None => true,
            Some(d) => {
                if self.divergence.is_none() {
                    self.divergence = Some(Divergence {
                        location: location.to_string(),
                        a_exp: d.a_exp,
                        q_exp: d.q_exp,
                        lhs_coeff: d.lhs,
                        rhs_coeff: d.rhs,
                    });
                }
                false
            }
        }
    }

    /// Records an integer comparison (e.g. partition counts) at `q^n`.
    pub fn compare_counts(&mut self, location: impl fmt::Display, n: i64, lhs: &BigInt, rhs: &BigInt) -> bool {
        if lhs == rhs {
            return true;
        }
        if self.divergence.is_none() {
            self.divergence = Some(Divergence {
                location: location.to_string(),
                a_exp: 0,
                q_exp: n,
                lhs_coeff: lhs.clone(),
                rhs_coeff: rhs.clone(),
            });
        }
        false
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn failed(&self) -> bool {
        self.divergence.is_some()
    }

    /// Finishes with `fallback` as the certified box if nothing was compared
    /// series-wise.
    pub fn finish(self, fallback: Orders) -> VerificationReport {
        let o = self.orders.unwrap_or(fallback);
        VerificationReport {
            target: self.target,
            status: if self.divergence.is_some() { Status::Fail } else { Status::Pass },
            checked_q_order: o.q,
            checked_a_order: o.a,
            first_divergence: self.divergence,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            notes: self.notes,
        }
    }
}
