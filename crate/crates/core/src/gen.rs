//! Seeded random instances and MDPs over small rational grids.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cmdp::Mdp;
use crate::error::{Error, Result};
use crate::exact_lp::Rational;
use crate::instance::{ExtReal, Instance, PerfVec};

/// Grid values are `k / GRID_DEN` with `|k| <= GRID_SPAN`.
pub const GRID_DEN: i64 = 8;
pub const GRID_SPAN: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub atoms: usize,
    pub constraints: usize,
    pub seed: u64,
    pub inf_fraction: Rational,
}

fn grid(rng: &mut ChaCha8Rng, lo: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=GRID_SPAN).into(), GRID_DEN.into())
}

/// Bernoulli draw with exact rational probability `p` in `[0, 1]`.
fn coin(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    let num = p.numer().to_u64().unwrap_or(0);
    let den = p.denom().to_u64().unwrap_or(1);
    num > 0 && rng.gen_range(0..den) < num
}

/// A random instance: atom coordinates on the grid, each replaced by `inf`
/// with probability `inf_fraction`; each bound is the matching coordinate of
/// one randomly chosen anchor atom plus a nonnegative grid offset.
pub fn random_instance(params: &GenParams) -> Result<Instance> {
    if params.atoms == 0 {
        return Err(Error::InvalidInput("at least one atom is required".into()));
    }
    let p = &params.inf_fraction;
    if p.is_negative() || p > &Rational::one() || p.denom().to_u64().is_none() {
        return Err(Error::InvalidInput(format!(
            "inf fraction {p} must be a probability with a u64 denominator"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let dim = params.constraints + 1;
    let atoms: Vec<PerfVec> = (0..params.atoms)
        .map(|_| {
            PerfVec(
                (0..dim)
                    .map(|_| {
                        let value = grid(&mut rng, -GRID_SPAN);
                        if coin(&mut rng, p) {
                            ExtReal::Infinite
                        } else {
                            ExtReal::Finite(value)
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let anchor = &atoms[rng.gen_range(0..atoms.len())];
    let bounds = (1..dim)
        .map(|j| {
            let offset = grid(&mut rng, 0);
            match &anchor.0[j] {
                ExtReal::Finite(a) => a + offset,
                ExtReal::Infinite => grid(&mut rng, -GRID_SPAN) + offset,
            }
        })
        .collect();
    Instance::new(atoms, bounds)
}

/// A random MDP with up to the given numbers of states, actions per state,
/// and constraint criteria. Transition rows put integer weights on a random
/// subset of successors; costs are on the nonnegative grid.
pub fn random_mdp(seed: u64, max_states: usize, max_actions: usize, max_constraints: usize) -> Mdp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states.max(1));
    let actions: Vec<usize> = (0..n)
        .map(|_| rng.gen_range(1..=max_actions.max(1)))
        .collect();
    let transition = actions
        .iter()
        .map(|&k| {
            (0..k)
                .map(|_| {
                    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                    if weights.iter().all(|&w| w == 0) {
                        weights[rng.gen_range(0..n)] = 1;
                    }
                    let total: i64 = weights.iter().sum();
                    weights
                        .iter()
                        .map(|&w| Rational::new(w.into(), total.into()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let j = rng.gen_range(0..=max_constraints);
    let costs = (0..=j)
        .map(|_| {
            actions
                .iter()
                .map(|&k| (0..k).map(|_| grid(&mut rng, 0)).collect())
                .collect()
        })
        .collect();
    let gamma = Rational::new(rng.gen_range(1..=3).into(), 4.into());
    let mut initial = vec![Rational::zero(); n];
    initial[rng.gen_range(0..n)] = Rational::one();
    Mdp::new(actions, transition, costs, gamma, initial).expect("generated MDP is valid")
}

/// `count` points in `dim` dimensions with integer coordinates in `0..=top`.
/// Small ranges give the coincident and coplanar points that stress the
/// face computations.
pub fn random_points(seed: u64, count: usize, dim: usize, top: i64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| Rational::from_integer(rng.gen_range(0..=top).into()))
                .collect()
        })
        .collect()
}

/// A Pareto point of `conv(points)` together with the lexicographic weight
/// sequence that selected it.
///
/// Successive nonnegative weight vectors (possibly with zero entries) each
/// keep only the points minimizing them; the last one is strictly positive.
/// A mixture with positive weights over the survivors is Pareto optimal.
/// Zero entries in the early weights let the survivors span faces of any
/// dimension, not only the points minimizing one strictly positive weight.
pub fn random_pareto_point(
    seed: u64,
    points: &[Vec<Rational>],
) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    assert!(!points.is_empty(), "need at least one point");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = points[0].len();
    let mut alive: Vec<usize> = (0..points.len()).collect();
    let mut weights = Vec::new();
    let stages = rng.gen_range(0..dim.max(1));
    for stage in 0..=stages {
        let last = stage == stages;
        let c: Vec<Rational> = (0..dim)
            .map(|_| {
                let lo = if last { 1 } else { 0 };
                Rational::from_integer(rng.gen_range(lo..=3).into())
            })
            .collect();
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let score = |i: usize| -> Rational { points[i].iter().zip(&c).map(|(x, w)| x * w).sum() };
        let best = alive
            .iter()
            .map(|&i| score(i))
            .min()
            .expect("alive is nonempty");
        alive.retain(|&i| score(i) == best);
        weights.push(c);
    }
    let raw: Vec<i64> = alive.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = raw.iter().sum();
    let mut u = vec![Rational::zero(); dim];
    for (&i, &w) in alive.iter().zip(&raw) {
        let lambda = Rational::new(w.into(), total.into());
        for (o, x) in u.iter_mut().zip(&points[i]) {
            *o += &lambda * x;
        }
    }
    (u, weights)
}
