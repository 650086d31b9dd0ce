//! LP building blocks over mixture weights `lambda` of a finite point list.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exact_lp::{find_feasible, Constraint, Rational, VarBound};

pub type Point = Vec<Rational>;

/// `sum lambda = 1` over `n` weights.
pub(crate) fn simplex_row(n: usize) -> Constraint {
    Constraint::eq(vec![Rational::one(); n], Rational::one())
}

/// The coordinate-`j` functional `sum_i lambda_i p_i[j]`.
pub(crate) fn coordinate_row(points: &[Point], j: usize) -> Vec<Rational> {
    points.iter().map(|p| p[j].clone()).collect()
}

/// `sum lambda_i p_i = u` and `sum lambda = 1`.
pub(crate) fn representation_rows(points: &[Point], u: &[Rational]) -> Vec<Constraint> {
    let mut rows: Vec<Constraint> = (0..u.len())
        .map(|j| Constraint::eq(coordinate_row(points, j), u[j].clone()))
        .collect();
    rows.push(simplex_row(points.len()));
    rows
}

/// Weights representing `u` as a mixture of `points`, if any.
pub fn hull_weights(points: &[Point], u: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if points.is_empty() {
        return Ok(None);
    }
    let rows = representation_rows(points, u);
    Ok(find_feasible(
        &rows,
        &vec![VarBound::nonnegative(); points.len()],
    )?)
}

pub fn in_hull(points: &[Point], u: &[Rational]) -> Result<bool> {
    Ok(hull_weights(points, u)?.is_some())
}

pub(crate) fn combine(points: &[Point], weights: &[Rational]) -> Point {
    let dim = points.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); dim];
    for (p, w) in points.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(p) {
            *o += w * x;
        }
    }
    out
}
