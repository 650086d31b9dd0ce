//! Small dense exact linear algebra: elimination, rank, nullspace, solves.

use num_traits::{One, Zero};

use crate::exact_lp::Rational;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in &mut rows[r] {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len().max(r));
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A nonzero `x` with `A x = 0`, or `None` when the columns of `A` are
/// linearly independent. `ncols` is needed when `A` has no rows.
pub fn nullspace_vector(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); ncols];
    x[free] = Rational::one();
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = -row[free].clone();
    }
    Some(x)
}

/// Solve the square system `A x = b`; `None` if `A` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
