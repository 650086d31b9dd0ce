#![allow(dead_code)]

use mixsolve_core::exact_lp::Rational;
use mixsolve_core::gen::{random_instance, GenParams};
use mixsolve_core::Instance;
use proptest::prelude::*;

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn to_points(raw: Vec<Vec<i64>>) -> Vec<Vec<Rational>> {
    raw.into_iter()
        .map(|p| p.into_iter().map(r).collect())
        .collect()
}

/// Up to `max_m` points of a common dimension `1..=max_dim`, coordinates in
/// `0..=top`.
pub fn points(max_m: usize, max_dim: usize, top: i64) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(0..=top, d), 1..=max_m).prop_map(to_points)
    })
}

/// Points plus positive integer mixing weights, one per point.
pub fn points_with_mixture(
    max_m: usize,
    max_dim: usize,
    top: i64,
) -> impl Strategy<Value = (Vec<Vec<Rational>>, Vec<Rational>)> {
    points(max_m, max_dim, top)
        .prop_flat_map(|p| {
            let m = p.len();
            (Just(p), prop::collection::vec(0..=3i64, m))
        })
        .prop_filter_map("all-zero weights", |(p, raw)| {
            let total: i64 = raw.iter().sum();
            (total > 0).then(|| {
                let dim = p[0].len();
                let mut u = vec![r(0); dim];
                for (pt, &w) in p.iter().zip(&raw) {
                    for (o, x) in u.iter_mut().zip(pt) {
                        *o += q(w, total) * x;
                    }
                }
                (p, u)
            })
        })
}

pub fn instance(
    max_atoms: usize,
    max_j: usize,
    inf_tenths: i64,
) -> impl Strategy<Value = Instance> {
    (1..=max_atoms, 0..=max_j, any::<u64>()).prop_map(move |(atoms, constraints, seed)| {
        random_instance(&GenParams {
            atoms,
            constraints,
            seed,
            inf_fraction: q(inf_tenths, 10),
        })
        .expect("valid generator parameters")
    })
}
