//! Termination test for single sums whose summands have a quadratic lower
//! bound on their q-valuation.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// `a j^2 + b j + c`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Quadratic {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        Quadratic { a, b, c }
    }

    pub fn eval(&self, j: i64) -> Q {
        self.a * j * j + self.b * j + self.c
    }

    /// True once the bound exceeds `n` and is nondecreasing from `j` on, so
    /// no summand with index >= j can reach the box.
    pub fn exhausted(&self, j: i64, n: i64) -> bool {
        let rising = self.a * (2 * j + 1) + self.b >= Q::from(0);
        rising && self.eval(j) > Q::from(n)
    }
}

/// Iterates `j = start, start+1, ...` until `bound` shows the remaining
/// summands vanish on the box, calling `f` for each index.
pub fn sum_indices<F>(bound: Quadratic, start: i64, n: i64, what: &str, mut f: F) -> Result<()>
where
    F: FnMut(i64) -> Result<()>,
{
    if bound.a < Q::from(0) || (bound.a == Q::from(0) && bound.b <= Q::from(0)) {
        return Err(Error::NonTerminatingSum(what.to_string()));
    }
    let mut j = start;
    while !bound.exhausted(j, n) {
        f(j)?;
        j += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stops_after_vertex() {
        // j^2 - 6j has its minimum at 3 and exceeds 4 from j = 7 on
        let b = Quadratic::new(Q::from(1), Q::from(-6), Q::from(0));
        let mut seen = Vec::new();
        sum_indices(b, 0, 4, "j", |j| {
            seen.push(j);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_unbounded() {
        let b = Quadratic::new(Q::from(0), Q::from(-1), Q::from(0));
        assert!(sum_indices(b, 0, 4, "j", |_| Ok(())).is_err());
    }
}
