//! Affine dimension, extreme points, and Carathéodory reduction.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_lp::Rational;
use crate::hull::{hull_weights, Point};
use crate::linalg::{nullspace_vector, rank};

/// `u` written as a mixture of extreme points; `parts` index the input list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<(usize, Rational)>,
    pub point: Point,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn reconstruct(&self, points: &[Point]) -> Point {
        let dim = self.point.len();
        let mut out = vec![Rational::zero(); dim];
        for (i, w) in &self.parts {
            for (o, x) in out.iter_mut().zip(&points[*i]) {
                *o += w * x;
            }
        }
        out
    }
}

/// Rank of `{p_i - p_0}`.
pub fn affine_dimension(points: &[Point]) -> Result<usize> {
    let Some(base) = points.first() else {
        return Err(Error::InvalidInput(
            "affine dimension of an empty point list".into(),
        ));
    };
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rank(&diffs))
}

/// `points[i]` is not a mixture of the other points. A duplicate of
/// `points[i]` elsewhere in the list makes it non-extreme.
pub fn is_extreme(points: &[Point], i: usize) -> Result<bool> {
    if i >= points.len() {
        return Err(Error::InvalidInput(format!("index {i} out of range")));
    }
    let others: Vec<Point> = points
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, p)| p.clone())
        .collect();
    Ok(hull_weights(&others, &points[i])?.is_none())
}

/// Indices of the extreme points of `conv(points)`, one (the lowest index)
/// per distinct extreme vector.
pub fn extreme_indices(points: &[Point]) -> Result<Vec<usize>> {
    let mut distinct: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !distinct.iter().any(|&k| points[k] == *p) {
            distinct.push(i);
        }
    }
    let reps: Vec<Point> = distinct.iter().map(|&i| points[i].clone()).collect();
    let mut out = Vec::new();
    for (pos, &i) in distinct.iter().enumerate() {
        if is_extreme(&reps, pos)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Write `u` as a mixture of at most `affine_dimension(points) + 1` extreme
/// points of `conv(points)`.
///
/// Starts from any representation over the extreme points and repeatedly
/// moves along an affine dependence of the support until a weight vanishes.
pub fn decompose(points: &[Point], u: &[Rational]) -> Result<Decomposition> {
    if points.is_empty() {
        return Err(Error::InvalidInput(
            "decompose over an empty point list".into(),
        ));
    }
    if points.iter().any(|p| p.len() != u.len()) {
        return Err(Error::InvalidInput("point dimensions disagree".into()));
    }
    let ext = extreme_indices(points)?;
    let ext_points: Vec<Point> = ext.iter().map(|&i| points[i].clone()).collect();
    let Some(weights) = hull_weights(&ext_points, u)? else {
        return Err(Error::NotInHull);
    };
    let mut support: Vec<(usize, Rational)> = ext
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive())
        .map(|(&i, w)| (i, w))
        .collect();

    while let Some(mu) = affine_dependence(points, &support) {
        let step = support
            .iter()
            .zip(&mu)
            .filter(|(_, m)| m.is_positive())
            .map(|((_, w), m)| w / m)
            .min()
            .expect("an affine dependence has a positive entry");
        for ((_, w), m) in support.iter_mut().zip(&mu) {
            *w -= &step * m;
        }
        support.retain(|(_, w)| !w.is_zero());
    }

    let decomposition = Decomposition {
        parts: support,
        point: u.to_vec(),
    };
    debug_assert_eq!(decomposition.reconstruct(points), u);
    Ok(decomposition)
}

/// Nonzero `mu` with `sum mu_i p_i = 0` and `sum mu_i = 0`, normalized to
/// have a positive entry.
fn affine_dependence(points: &[Point], support: &[(usize, Rational)]) -> Option<Vec<Rational>> {
    if support.len() < 2 {
        return None;
    }
    let dim = points[support[0].0].len();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|j| support.iter().map(|(i, _)| points[*i][j].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); support.len()]);
    let mut mu = nullspace_vector(&rows, support.len())?;
    if !mu.iter().any(Signed::is_positive) {
        for m in &mut mu {
            *m = -&*m;
        }
    }
    Some(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter()
            .map(|p| p.iter().map(|&x| r(x)).collect())
            .collect()
    }

    fn square() -> Vec<Point> {
        pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]])
    }

    #[test]
    fn dimensions() {
        assert_eq!(affine_dimension(&pts(&[&[0, 0]])).unwrap(), 0);
        assert_eq!(affine_dimension(&pts(&[&[0, 2], &[1, 0]])).unwrap(), 1);
        assert_eq!(affine_dimension(&square()).unwrap(), 2);
        assert_eq!(affine_dimension(&pts(&[&[1, 1], &[1, 1]])).unwrap(), 0);
        assert!(affine_dimension(&[]).is_err());
    }

    #[test]
    fn extremality() {
        assert!(is_extreme(&square(), 2).unwrap());
        let mut with_center = square();
        with_center.push(vec![q(1, 2), q(1, 2)]);
        assert!(!is_extreme(&with_center, 4).unwrap());
        assert!(!is_extreme(&pts(&[&[0, 0], &[1, 1], &[2, 2]]), 1).unwrap());
        assert!(!is_extreme(&pts(&[&[0, 0], &[0, 0]]), 0).unwrap());
    }

    #[test]
    fn segment_decomposition_is_unique() {
        let d = decompose(&pts(&[&[0, 2], &[1, 0]]), &[q(1, 2), r(1)]).unwrap();
        assert_eq!(d.parts, vec![(0, q(1, 2)), (1, q(1, 2))]);
    }

    #[test]
    fn vertex_decomposes_to_itself() {
        let sq = square();
        let d = decompose(&sq, &sq[3]).unwrap();
        assert_eq!(d.parts, vec![(3, r(1))]);
    }

    #[test]
    fn square_center_uses_at_most_three_vertices() {
        let sq = square();
        let u = vec![q(1, 2), q(1, 2)];
        let d = decompose(&sq, &u).unwrap();
        assert!(d.len() <= 3);
        assert_eq!(d.reconstruct(&sq), u);
        assert_eq!(d.parts.iter().map(|(_, w)| w).sum::<Rational>(), r(1));
        for (i, _) in &d.parts {
            assert!(is_extreme(&sq, *i).unwrap());
        }
    }

    #[test]
    fn interior_points_never_cited() {
        let mut pts = square();
        pts.insert(0, vec![q(1, 2), q(1, 2)]);
        let d = decompose(&pts, &[q(1, 2), q(1, 2)]).unwrap();
        assert!(d.parts.iter().all(|(i, _)| *i != 0));
    }

    #[test]
    fn outside_point_rejected() {
        assert_eq!(decompose(&square(), &[r(2), r(2)]), Err(Error::NotInHull));
    }
}
