mod common;

use common::{instance, points, points_with_mixture, r};
use mixsolve_core::caratheodory::{affine_dimension, decompose, extreme_indices, is_extreme};
use mixsolve_core::exact_lp::Rational;
use mixsolve_core::gen::{random_pareto_point, random_points};
use mixsolve_core::hull::in_hull;
use mixsolve_core::instance::finite_hull;
use mixsolve_core::oracle::oracle_minimal_face;
use mixsolve_core::pareto_face::{
    fs_certificate, is_pareto, minimal_face, optimal_value, pareto_point, verify_certificate,
};
use mixsolve_core::{ExtReal, ProblemValue};
use num_traits::Signed;
use proptest::prelude::*;

fn gap(b: &[Rational], p: &[Rational], u: &[Rational]) -> Rational {
    b.iter()
        .zip(p)
        .zip(u)
        .map(|((bj, x), y)| bj * (x - y))
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pareto_point_is_pareto_and_attains_value(inst in instance(10, 3, 1)) {
        let ProblemValue::Optimal(ExtReal::Finite(v)) = optimal_value(&inst).unwrap() else {
            return Ok(());
        };
        let w = pareto_point(&inst).unwrap();
        let (_, pts) = finite_hull(&inst);
        prop_assert_eq!(&w[0], &v);
        prop_assert!(in_hull(&pts, &w).unwrap());
        prop_assert!(is_pareto(&w, &pts).unwrap());
        for (wj, d) in w[1..].iter().zip(inst.bounds()) {
            prop_assert!(wj <= d);
        }
    }

    #[test]
    fn minimal_face_matches_oracle((pts, u) in points_with_mixture(8, 3, 3)) {
        prop_assert_eq!(minimal_face(&pts, &u).unwrap(), oracle_minimal_face(&pts, &u).unwrap());
    }

    #[test]
    fn face_of_pareto_point_is_pareto(seed in any::<u64>(), m in 1..=10usize, dim in 1..=3usize) {
        let pts = random_points(seed, m, dim, 3);
        let (u, _) = random_pareto_point(seed ^ 1, &pts);
        for i in minimal_face(&pts, &u).unwrap() {
            prop_assert!(is_pareto(&pts[i], &pts).unwrap());
        }
    }

    #[test]
    fn certificate_verifies_on_random_pareto_points(seed in any::<u64>(), m in 1..=10usize, dim in 1..=4usize) {
        let pts = random_points(seed, m, dim, 3);
        let (u, _) = random_pareto_point(seed.wrapping_add(17), &pts);
        let cert = fs_certificate(&pts, &u).unwrap();
        prop_assert!(cert.k() <= dim);
        let report = verify_certificate(&pts, &u, &cert);
        prop_assert!(report.is_valid(), "{:?}", report.failures);
        prop_assert_eq!(&cert.active, &oracle_minimal_face(&pts, &u).unwrap());
        let last = cert.planes.last().unwrap();
        prop_assert!(last.b.iter().all(Signed::is_positive));
    }

    #[test]
    fn sum_of_supporting_normals_separates_both(seed in any::<u64>(), m in 2..=8usize, dim in 2..=3usize, ra in 0..=50i64, rb in 0..=50i64) {
        let pts = random_points(seed, m, dim, 3);
        let (u, weights) = random_pareto_point(seed ^ 7, &pts);
        // The first selection weight supports the whole hull at `u`; the last
        // one may only support a sub-face, in which case the pair is skipped.
        let b1 = &weights[0];
        let b2 = weights.last().unwrap();
        let supporting = |b: &[Rational]| pts.iter().all(|p| !gap(b, p, &u).is_negative());
        if !supporting(b1) || !supporting(b2) {
            return Ok(());
        }
        let sum: Vec<Rational> = b1.iter().zip(b2).map(|(x, y)| r(ra + 1) * x + r(rb + 1) * y).collect();
        prop_assert!(supporting(&sum));
        for p in &pts {
            if gap(b1, p, &u).is_positive() || gap(b2, p, &u).is_positive() {
                prop_assert!(gap(&sum, p, &u).is_positive());
            }
        }
    }

    #[test]
    fn non_pareto_points_are_rejected(pts in points(8, 3, 3)) {
        let dim = pts[0].len();
        let top: Vec<Rational> = (0..dim).map(|j| pts.iter().map(|p| p[j].clone()).max().unwrap() + r(1)).collect();
        prop_assert!(!is_pareto(&top, &pts).unwrap());
        prop_assert!(fs_certificate(&pts, &top).is_err());
    }

    #[test]
    fn caratheodory_reduction((pts, u) in points_with_mixture(10, 4, 4)) {
        let d = decompose(&pts, &u).unwrap();
        prop_assert_eq!(d.reconstruct(&pts), u.clone());
        prop_assert!(d.len() <= affine_dimension(&pts).unwrap() + 1);
        prop_assert_eq!(d.parts.iter().map(|(_, w)| w).sum::<Rational>(), r(1));
        let ext = extreme_indices(&pts).unwrap();
        for (i, w) in &d.parts {
            prop_assert!(w.is_positive());
            prop_assert!(ext.contains(i));
        }
        // Decomposing the same point over the cited points alone is again a
        // valid decomposition.
        let cited: Vec<Vec<Rational>> = d.parts.iter().map(|(i, _)| pts[*i].clone()).collect();
        let again = decompose(&cited, &d.point).unwrap();
        prop_assert_eq!(again.reconstruct(&cited), u);
        prop_assert!(again.len() <= d.len());
    }

    #[test]
    fn extreme_points_of_a_face_are_extreme_overall(seed in any::<u64>(), m in 1..=10usize, dim in 1..=3usize) {
        let pts = random_points(seed, m, dim, 3);
        let (u, _) = random_pareto_point(seed ^ 3, &pts);
        let face: Vec<usize> = minimal_face(&pts, &u).unwrap().into_iter().collect();
        let face_pts: Vec<Vec<Rational>> = face.iter().map(|&i| pts[i].clone()).collect();
        let overall = extreme_indices(&pts).unwrap();
        for k in extreme_indices(&face_pts).unwrap() {
            let v = &face_pts[k];
            let first = pts.iter().position(|p| p == v).unwrap();
            prop_assert!(overall.contains(&first));
            // Against the duplicate-free list, the same vector is extreme.
            let mut distinct: Vec<Vec<Rational>> = Vec::new();
            for p in &pts {
                if !distinct.contains(p) {
                    distinct.push(p.clone());
                }
            }
            let pos = distinct.iter().position(|p| p == v).unwrap();
            prop_assert!(is_extreme(&distinct, pos).unwrap());
        }
    }
}
