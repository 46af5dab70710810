//! Fraction-free (Bareiss) elimination over the scalar ring, used to compare
//! linear spans of relations with polynomial coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse row keyed by column.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Result of [`outside_span`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanResidue {
    /// Rank of the base rows over the fraction field.
    pub base_rank: usize,
    /// Indices of the `extra` rows that do not lie in the span of the base.
    pub outside: Vec<usize>,
}

fn complexity(s: &Scalar) -> (usize, i64) {
    (s.num_terms(), s.max_degree())
}

/// Determines which rows of `extra` lie outside the span of `base` over the
/// fraction field of the scalar ring.
///
/// Bareiss elimination with full pivoting, drawing pivots only from `base`
/// rows. Every row is updated as `(p·row - row[c]·pivot_row) / prev`, which
/// keeps all entries in the ring. Once the base is exhausted, an extra row is
/// zero iff it was a combination of base rows.
pub fn outside_span(base: &[SparseRow], extra: &[SparseRow]) -> Result<SpanResidue> {
    let mut rows: Vec<SparseRow> = base.iter().chain(extra).cloned().collect();
    for r in rows.iter_mut() {
        r.retain(|_, v| !v.is_zero());
    }
    let n_base = base.len();
    let mut done = vec![false; rows.len()];
    let mut prev = Scalar::one();
    let mut rank = 0;

    loop {
        // smallest available pivot among unprocessed base rows
        let mut best: Option<(usize, usize, (usize, i64))> = None;
        for (r, row) in rows.iter().enumerate().take(n_base) {
            if done[r] {
                continue;
            }
            for (c, v) in row {
                let cx = complexity(v);
                if best.as_ref().is_none_or(|b| cx < b.2) {
                    best = Some((r, *c, cx));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        done[pr] = true;
        rank += 1;
        let pivot_row = rows[pr].clone();
        let p = pivot_row[&pc].clone();
        let unit_step = p == prev;

        for (r, row) in rows.iter_mut().enumerate() {
            if done[r] || row.is_empty() {
                continue;
            }
            let factor = row.remove(&pc);
            if factor.is_none() && unit_step {
                continue;
            }
            let mut next = SparseRow::new();
            let cols: Vec<usize> = match &factor {
                Some(_) => {
                    let mut c: Vec<usize> = row.keys().chain(pivot_row.keys()).copied().collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                }
                None => row.keys().copied().collect(),
            };
            for c in cols {
                if c == pc {
                    continue;
                }
                let mut num = Scalar::zero();
                if let Some(v) = row.get(&c) {
                    num.add_product(&p, v);
                }
                if let (Some(f), Some(pv)) = (&factor, pivot_row.get(&c)) {
                    num -= &(f * pv);
                }
                if num.is_zero() {
                    continue;
                }
                let q = num.exact_div(&prev).ok_or_else(|| {
                    Error::Invalid(format!("inexact Bareiss division of {num} by {prev}"))
                })?;
                next.insert(c, q);
            }
            *row = next;
        }
        prev = p;
    }

    let outside = (n_base..rows.len())
        .filter(|&r| !rows[r].is_empty())
        .map(|r| r - n_base)
        .collect();
    Ok(SpanResidue {
        base_rank: rank,
        outside,
    })
}

/// Rank over the fraction field.
pub fn rank(rows: &[SparseRow]) -> Result<usize> {
    Ok(outside_span(rows, &[])?.base_rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, Scalar)]) -> SparseRow {
        entries.iter().cloned().collect()
    }

    fn s(src: &str) -> Scalar {
        src.parse().unwrap()
    }

    #[test]
    fn rank_of_symbolic_matrix() {
        // [[b, 1], [1, C]] has determinant bC - 1, nonzero as a polynomial
        let m = vec![row(&[(0, s("b")), (1, s("1"))]), row(&[(0, s("1")), (1, s("C"))])];
        assert_eq!(rank(&m).unwrap(), 2);
        // second row = (1 - b) * first
        let m = vec![
            row(&[(0, s("b")), (1, s("C"))]),
            row(&[(0, s("b - b^2")), (1, s("C - b*C"))]),
        ];
        assert_eq!(rank(&m).unwrap(), 1);
    }

    #[test]
    fn membership_with_rational_function_coefficients() {
        // (1, b) and (C, 0) span everything; (1, 0) needs coefficient 1/C
        let base = vec![row(&[(0, s("1")), (1, s("b"))]), row(&[(0, s("C"))])];
        let extra = vec![row(&[(0, s("1"))]), row(&[(2, s("1"))]), SparseRow::new()];
        let res = outside_span(&base, &extra).unwrap();
        assert_eq!(res.base_rank, 2);
        assert_eq!(res.outside, vec![1]);
    }

    #[test]
    fn three_by_three_needs_exact_division() {
        let m = vec![
            row(&[(0, s("b")), (1, s("C")), (2, s("1"))]),
            row(&[(0, s("1")), (1, s("b")), (2, s("C"))]),
            row(&[(0, s("C")), (1, s("1")), (2, s("b"))]),
        ];
        assert_eq!(rank(&m).unwrap(), 3);
        let mut dep = m.clone();
        let combo: SparseRow = (0..3)
            .map(|c| {
                let v = &(&m[0].get(&c).cloned().unwrap_or_default() * &s("b"))
                    + &(&m[1].get(&c).cloned().unwrap_or_default() * &s("C - 1"));
                (c, v)
            })
            .collect();
        dep[2] = combo;
        assert_eq!(rank(&dep).unwrap(), 2);
    }
}
