//! Sparse Gaussian elimination over `Q(q)`.

use std::collections::BTreeMap;

use crate::qfield::RatFunc;

/// A sparse row: column index to nonzero coefficient.
pub type Row = BTreeMap<usize, RatFunc>;

/// Rough size of a coefficient, used to prefer simple pivots.
fn weight(c: &RatFunc) -> usize {
    c.numerator().degree().unwrap_or(0)
        + c.denominator().degree().unwrap_or(0)
        + c.numerator().term_count()
}

fn axpy(row: &mut Row, rhs: &mut RatFunc, factor: &RatFunc, pivot: &Row, pivot_rhs: &RatFunc) {
    for (col, v) in pivot {
        let d = factor * v;
        match row.get_mut(col) {
            Some(x) => {
                let s = &*x - &d;
                if s.is_zero() {
                    row.remove(col);
                } else {
                    *x = s;
                }
            }
            None => {
                row.insert(*col, -d);
            }
        }
    }
    *rhs = &*rhs - &(factor * pivot_rhs);
}

/// Solve `rows · x = rhs` exactly. Free variables are set to zero.
/// Returns `None` when the system is inconsistent.
pub fn solve(rows: Vec<Row>, rhs: Vec<RatFunc>, ncols: usize) -> Option<Vec<RatFunc>> {
    assert_eq!(rows.len(), rhs.len());
    let mut pivots: Vec<(usize, Row, RatFunc)> = Vec::new();
    let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (mut row, mut b) in rows.into_iter().zip(rhs) {
        loop {
            // earliest pivot first: its row only contains later pivot columns
            let hit = row.keys().filter_map(|c| pivot_of.get(c)).min().copied();
            let Some(k) = hit else { break };
            let (col, prow, pb) = &pivots[k];
            let col = *col;
            let factor = row[&col].clone();
            axpy(&mut row, &mut b, &factor, prow, pb);
        }
        if row.is_empty() {
            if !b.is_zero() {
                return None;
            }
            continue;
        }
        let col = *row
            .iter()
            .min_by_key(|(c, v)| (weight(v), **c))
            .map(|(c, _)| c)
            .expect("nonempty");
        let inv = row[&col].inv().expect("stored coefficients are nonzero");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        b = &b * &inv;
        pivot_of.insert(col, pivots.len());
        pivots.push((col, row, b));
    }
    let mut x = vec![RatFunc::zero(); ncols];
    for (col, row, b) in pivots.iter().rev() {
        let mut v = b.clone();
        for (c, a) in row {
            if c != col && !x[*c].is_zero() {
                v = &v - &(a * &x[*c]);
            }
        }
        x[*col] = v;
    }
    Some(x)
}
