//! Brute-force ground truth built straight from the definitions.
//!
//! Nothing here calls into the pipeline modules; the only shared code is the
//! LP kernel. Everything is exponential in the number of points, so inputs
//! are capped and oversized inputs are rejected rather than truncated.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::cmdp::Mdp;
use crate::error::{Error, Result};
use crate::exact_lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Rational};
use crate::instance::{ExtReal, Instance, PerfVec};
use crate::pareto_face::ProblemValue;

pub const MAX_FACE_POINTS: usize = 10;
pub const MAX_MINIMAL_FACE_POINTS: usize = 12;
pub const MAX_SEARCH_ATOMS: usize = 16;

/// The atom-index sets of all faces of a hull. A face is recorded with every
/// point it contains, so duplicates of a vertex travel together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<BTreeSet<usize>>,
}

impl FaceSet {
    pub fn contains(&self, set: &BTreeSet<usize>) -> bool {
        self.faces.iter().any(|f| f == set)
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// `min W_0 s.t. W_j <= d_j` as one LP over all admissible atom weights.
pub fn oracle_optimal(instance: &Instance) -> Result<ProblemValue> {
    let j_count = instance.constraints();
    // An atom with an infinite constraint cost can never carry weight in a
    // feasible mixture.
    let admissible: Vec<&PerfVec> = instance
        .atoms()
        .iter()
        .map(|a| &a.w)
        .filter(|w| w.0[1..].iter().all(ExtReal::is_finite))
        .collect();
    if admissible.is_empty() {
        return Ok(ProblemValue::Inconsistent);
    }
    let system = |atoms: &[&PerfVec]| -> Vec<Constraint> {
        let n = atoms.len();
        let mut rows = vec![
            Constraint::ge(vec![Rational::one(); n], Rational::one()),
            Constraint::le(vec![Rational::one(); n], Rational::one()),
        ];
        for j in 1..=j_count {
            let neg: Vec<Rational> = atoms
                .iter()
                .map(|w| -w.0[j].finite().expect("admissible").clone())
                .collect();
            rows.push(Constraint::ge(neg, -instance.bounds()[j - 1].clone()));
        }
        rows
    };
    let mut feas = LinearProgram::maximize(vec![Rational::zero(); admissible.len()]).nonnegative();
    feas.constraints = system(&admissible);
    if !solve_lp(&feas)?.is_optimal() {
        return Ok(ProblemValue::Inconsistent);
    }
    let finite: Vec<&PerfVec> = admissible
        .into_iter()
        .filter(|w| w.0[0].is_finite())
        .collect();
    if finite.is_empty() {
        return Ok(ProblemValue::Optimal(ExtReal::Infinite));
    }
    // Maximize -W_0 to keep this path distinct from the pipeline's LP.
    let neg_cost = finite
        .iter()
        .map(|w| -w.0[0].finite().unwrap().clone())
        .collect();
    let mut lp = LinearProgram::maximize(neg_cost).nonnegative();
    lp.constraints = system(&finite);
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { value, .. } => ProblemValue::Optimal(ExtReal::Finite(-value)),
        LpOutcome::Infeasible => ProblemValue::Optimal(ExtReal::Infinite),
        LpOutcome::Unbounded => {
            return Err(Error::Invariant("bounded LP reported unbounded".into()))
        }
    })
}

/// `u` is a convex combination of the points indexed by `set`.
pub fn oracle_in_hull(points: &[Vec<Rational>], set: &[usize], u: &[Rational]) -> Result<bool> {
    if set.is_empty() {
        return Ok(false);
    }
    let mut lp = LinearProgram::maximize(vec![Rational::zero(); set.len()]).nonnegative();
    for (j, uj) in u.iter().enumerate() {
        lp.push(Constraint::eq(
            set.iter().map(|&i| points[i][j].clone()).collect(),
            uj.clone(),
        ));
    }
    lp.push(Constraint::eq(
        vec![Rational::one(); set.len()],
        Rational::one(),
    ));
    Ok(solve_lp(&lp)?.is_optimal())
}

/// Definition test: `conv(set)` is a face of `conv(points)` and `set` holds
/// every point lying in it.
///
/// Fails iff some outside point `p_j` admits `x = a p_j + (1 - a) y` with
/// `x` in `conv(set)`, `y` in the hull, and `a > 0`. We maximize `a`.
pub fn is_face(points: &[Vec<Rational>], set: &BTreeSet<usize>) -> Result<bool> {
    if set.is_empty() {
        return Ok(false);
    }
    let m = points.len();
    let dim = points[0].len();
    let inside: Vec<usize> = set.iter().copied().collect();
    let s = inside.len();
    // variables: sigma (s), a (1), lambda (m)
    for j in (0..m).filter(|j| !set.contains(j)) {
        let mut objective = vec![Rational::zero(); s + 1 + m];
        objective[s] = Rational::one();
        let mut lp = LinearProgram::maximize(objective).nonnegative();
        for c in 0..dim {
            let mut row: Vec<Rational> = inside.iter().map(|&i| points[i][c].clone()).collect();
            row.push(-points[j][c].clone());
            row.extend(points.iter().map(|p| -p[c].clone()));
            lp.push(Constraint::eq(row, Rational::zero()));
        }
        let mut sigma_sum = vec![Rational::one(); s];
        sigma_sum.resize(s + 1 + m, Rational::zero());
        lp.push(Constraint::eq(sigma_sum, Rational::one()));
        let mut mass = vec![Rational::zero(); s];
        mass.resize(s + 1 + m, Rational::one());
        lp.push(Constraint::eq(mass, Rational::one()));
        match solve_lp(&lp)? {
            LpOutcome::Optimal { value, .. } if value.is_positive() => return Ok(false),
            LpOutcome::Optimal { .. } => {}
            _ => {
                return Err(Error::Invariant(
                    "face LP must be feasible and bounded".into(),
                ))
            }
        }
    }
    Ok(true)
}

fn check_points(points: &[Vec<Rational>], limit: usize, what: &str) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points".into()));
    }
    if points.len() > limit {
        return Err(Error::SizeLimit {
            what: format!("{what} point count {}", points.len()),
            limit,
        });
    }
    if points.iter().any(|p| p.len() != points[0].len()) {
        return Err(Error::InvalidInput("point dimensions disagree".into()));
    }
    Ok(())
}

fn mask_set(mask: u32, m: usize) -> BTreeSet<usize> {
    (0..m).filter(|i| mask & (1 << i) != 0).collect()
}

/// Every face of `conv(points)`, by exhaustive subset enumeration.
pub fn oracle_faces(points: &[Vec<Rational>]) -> Result<FaceSet> {
    check_points(points, MAX_FACE_POINTS, "face enumeration")?;
    let m = points.len();
    let mut faces = Vec::new();
    for mask in 1u32..(1 << m) {
        let set = mask_set(mask, m);
        if is_face(points, &set)? {
            faces.push(set);
        }
    }
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(FaceSet { faces })
}

/// Calls `f` on every `k`-subset of `0..m` in lexicographic order until it
/// returns `Some`.
fn first_combination<T>(
    m: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if k > m {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx)? {
            return Ok(Some(t));
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            return Ok(None);
        };
        idx[pos] += 1;
        for p in pos + 1..k {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// The intersection of all faces containing `u`.
///
/// That intersection is itself a face and sits inside every face containing
/// `u`, so it is the unique face of fewest points containing `u`; subsets are
/// searched by increasing size and the first face found is returned.
pub fn oracle_minimal_face(points: &[Vec<Rational>], u: &[Rational]) -> Result<BTreeSet<usize>> {
    check_points(points, MAX_MINIMAL_FACE_POINTS, "minimal face")?;
    if u.len() != points[0].len() {
        return Err(Error::InvalidInput("point dimensions disagree".into()));
    }
    let m = points.len();
    let all: Vec<usize> = (0..m).collect();
    if !oracle_in_hull(points, &all, u)? {
        return Err(Error::NotInHull);
    }
    for k in 1..=m {
        let found = first_combination(m, k, |combo| {
            if !oracle_in_hull(points, combo, u)? {
                return Ok(None);
            }
            let set: BTreeSet<usize> = combo.iter().copied().collect();
            Ok(is_face(points, &set)?.then_some(set))
        })?;
        if let Some(face) = found {
            return Ok(face);
        }
    }
    Err(Error::Invariant(
        "the whole hull is a face containing u".into(),
    ))
}

fn better(a: &ProblemValue, b: &ProblemValue) -> bool {
    match (a, b) {
        (ProblemValue::Inconsistent, _) => false,
        (ProblemValue::Optimal(_), ProblemValue::Inconsistent) => true,
        (ProblemValue::Optimal(x), ProblemValue::Optimal(y)) => x < y,
    }
}

/// Best objective over mixtures supported on at most `s` atoms, by solving
/// the restricted LP on every atom subset of size `min(s, m)`.
pub fn oracle_support_search(instance: &Instance, s: usize) -> Result<ProblemValue> {
    let m = instance.len();
    if m > MAX_SEARCH_ATOMS {
        return Err(Error::SizeLimit {
            what: format!("support search atom count {m}"),
            limit: MAX_SEARCH_ATOMS,
        });
    }
    if s == 0 {
        return Err(Error::InvalidInput("support size must be positive".into()));
    }
    let k = s.min(m);
    let mut best = ProblemValue::Inconsistent;
    first_combination(m, k, |combo| {
        let atoms = combo
            .iter()
            .map(|&i| instance.atoms()[i].w.clone())
            .collect();
        let sub = Instance::new(atoms, instance.bounds().to_vec())?;
        let v = oracle_optimal(&sub)?;
        if better(&v, &best) {
            best = v;
        }
        Ok(None::<()>)
    })?;
    Ok(best)
}

/// Optimal constrained discounted cost over all (randomized) policies, via
/// the LP over discounted state-action frequencies `x(s, a) >= 0`:
/// `sum_a x(t, a) - gamma sum_{s,a} P(t|s,a) x(s, a) = initial(t)`,
/// objective `sum c_0 x`, and `sum c_j x <= d_j`.
pub fn oracle_occupation_lp(mdp: &Mdp, d: &[Rational]) -> Result<ProblemValue> {
    if d.len() + 1 != mdp.costs.len() {
        return Err(Error::InvalidInput(
            "bound count does not match the cost tables".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..mdp.states())
        .flat_map(|s| (0..mdp.actions[s]).map(move |a| (s, a)))
        .collect();
    let flatten = |table: &Vec<Vec<Rational>>| -> Vec<Rational> {
        pairs.iter().map(|&(s, a)| table[s][a].clone()).collect()
    };
    let mut lp = LinearProgram::minimize(flatten(&mdp.costs[0])).nonnegative();
    for t in 0..mdp.states() {
        let row = pairs
            .iter()
            .map(|&(s, a)| {
                let own = if s == t {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                own - &mdp.gamma * &mdp.transition[s][a][t]
            })
            .collect();
        lp.push(Constraint::eq(row, mdp.initial[t].clone()));
    }
    for (table, bound) in mdp.costs[1..].iter().zip(d) {
        lp.push(Constraint::le(flatten(table), bound.clone()));
    }
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { value, .. } => ProblemValue::Optimal(ExtReal::Finite(value)),
        LpOutcome::Infeasible => ProblemValue::Inconsistent,
        LpOutcome::Unbounded => {
            return Err(Error::Invariant(
                "occupation LP with bounded costs is unbounded".into(),
            ))
        }
    })
}
