//! The finite model: a convex set of mixtures over finitely many atoms, with
//! `J + 1` affine performance functionals valued in `(-inf, +inf]`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_lp::Rational;

/// A rational or `+inf`. Multiplication follows `0 * inf = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rational),
    Infinite,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Rational::zero())
    }

    pub fn integer(n: i64) -> Self {
        ExtReal::Finite(Rational::from_integer(n.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }

    /// Scale by a nonnegative rational.
    pub fn scale(&self, a: &Rational) -> ExtReal {
        debug_assert!(!a.is_negative());
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v * a),
            ExtReal::Infinite if a.is_zero() => ExtReal::zero(),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(v: Rational) -> Self {
        ExtReal::Finite(v)
    }
}

impl Add for &ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: &ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinite,
        }
    }
}

impl Mul<&ExtReal> for &Rational {
    type Output = ExtReal;

    fn mul(self, rhs: &ExtReal) -> ExtReal {
        rhs.scale(self)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinite) => Ordering::Less,
            (ExtReal::Infinite, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinite, ExtReal::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "+inf" | "Infinity" => Ok(ExtReal::Infinite),
            "-inf" | "-Infinity" => Err(Error::InvalidInput(
                "-inf is not an admissible value (costs must be bounded below)".into(),
            )),
            _ => parse_rational(t).map(ExtReal::Finite),
        }
    }
}

/// Parse `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("invalid rational `{s}`"));
    let ok_chars = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    if !ok_chars {
        return Err(bad());
    }
    Rational::from_str(t).map_err(|_| bad())
}

/// Combine values under mixture weights: `sum w_i v_i` with `0 * inf = 0`.
pub fn ext_combine(weights: &[Rational], values: &[ExtReal]) -> Result<ExtReal> {
    if weights.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} values",
            weights.len(),
            values.len()
        )));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::InvalidInput("negative mixture weight".into()));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidInput(format!(
            "weights sum to {total}, not 1"
        )));
    }
    Ok(weights
        .iter()
        .zip(values)
        .fold(ExtReal::zero(), |acc, (w, v)| &acc + &v.scale(w)))
}

/// A performance vector `(W_0, ..., W_J)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerfVec(pub Vec<ExtReal>);

impl PerfVec {
    pub fn finite(values: Vec<Rational>) -> Self {
        PerfVec(values.into_iter().map(ExtReal::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(ExtReal::is_finite)
    }

    pub fn to_finite(&self) -> Option<Vec<Rational>> {
        self.0.iter().map(|v| v.finite().cloned()).collect()
    }
}

impl fmt::Display for PerfVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub id: usize,
    pub w: PerfVec,
}

/// Minimize `W_0` over mixtures of `atoms` subject to `W_j <= d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    atoms: Vec<Atom>,
    bounds: Vec<Rational>,
}

impl Instance {
    /// Atom ids are assigned in list order.
    pub fn new(atoms: Vec<PerfVec>, bounds: Vec<Rational>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("instance has no atoms".into()));
        }
        let width = bounds.len() + 1;
        for (i, w) in atoms.iter().enumerate() {
            if w.len() != width {
                return Err(Error::InvalidInput(format!(
                    "atom {i} has {} costs, expected J+1 = {width}",
                    w.len()
                )));
            }
        }
        let atoms = atoms
            .into_iter()
            .enumerate()
            .map(|(id, w)| Atom { id, w })
            .collect();
        Ok(Self { atoms, bounds })
    }

    /// Number of constraints `J`.
    pub fn constraints(&self) -> usize {
        self.bounds.len()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, id: usize) -> Option<&Atom> {
        self.atoms.get(id)
    }

    pub fn bounds(&self) -> &[Rational] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// A finitely supported convex combination of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mixture {
    support: Vec<(usize, Rational)>,
}

impl Mixture {
    /// Entries are sorted by atom id.
    pub fn new(mut support: Vec<(usize, Rational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidInput("mixture has empty support".into()));
        }
        if support.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidInput(
                "mixture weights must be positive".into(),
            ));
        }
        support.sort_by_key(|(id, _)| *id);
        if support.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidInput("mixture repeats an atom id".into()));
        }
        let total: Rational = support.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(Self { support })
    }

    pub fn dirac(id: usize) -> Self {
        Self {
            support: vec![(id, Rational::one())],
        }
    }

    pub fn support(&self) -> &[(usize, Rational)] {
        &self.support
    }

    pub fn ids(&self) -> BTreeSet<usize> {
        self.support.iter().map(|(id, _)| *id).collect()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `alpha * self + (1 - alpha) * other`, for `alpha` in `(0, 1)`.
    pub fn blend(&self, other: &Mixture, alpha: &Rational) -> Result<Mixture> {
        if !alpha.is_positive() || *alpha >= Rational::one() {
            return Err(Error::InvalidInput(
                "blend weight must lie in (0, 1)".into(),
            ));
        }
        let beta = Rational::one() - alpha;
        let mut acc: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (id, w) in &self.support {
            *acc.entry(*id).or_insert_with(Rational::zero) += w * alpha;
        }
        for (id, w) in &other.support {
            *acc.entry(*id).or_insert_with(Rational::zero) += w * &beta;
        }
        Mixture::new(acc.into_iter().collect())
    }
}

impl fmt::Display for Mixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (id, w)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "p{id}: {w}")?;
        }
        f.write_str("}")
    }
}

pub fn evaluate(instance: &Instance, mixture: &Mixture) -> Result<PerfVec> {
    let width = instance.constraints() + 1;
    let mut weights = Vec::with_capacity(mixture.len());
    let mut atoms = Vec::with_capacity(mixture.len());
    for (id, w) in mixture.support() {
        let atom = instance
            .atom(*id)
            .ok_or_else(|| Error::InvalidInput(format!("mixture cites unknown atom {id}")))?;
        weights.push(w.clone());
        atoms.push(atom);
    }
    (0..width)
        .map(|j| {
            let values: Vec<ExtReal> = atoms.iter().map(|a| a.w.0[j].clone()).collect();
            ext_combine(&weights, &values)
        })
        .collect::<Result<Vec<_>>>()
        .map(PerfVec)
}

/// `W_j <= d_j` for every constraint; vacuous when `J = 0`.
pub fn is_feasible(instance: &Instance, mixture: &Mixture) -> Result<bool> {
    let w = evaluate(instance, mixture)?;
    Ok(instance
        .bounds()
        .iter()
        .zip(&w.0[1..])
        .all(|(d, v)| *v <= ExtReal::Finite(d.clone())))
}

/// Ids of atoms finite on every coordinate in `coords`, ascending.
pub fn finite_atoms(instance: &Instance, coords: &[usize]) -> Vec<usize> {
    instance
        .atoms()
        .iter()
        .filter(|a| coords.iter().all(|&j| a.w.0[j].is_finite()))
        .map(|a| a.id)
        .collect()
}

/// Ids and finite vectors of the atoms finite on all `J + 1` coordinates.
pub fn finite_hull(instance: &Instance) -> (Vec<usize>, Vec<Vec<Rational>>) {
    instance
        .atoms()
        .iter()
        .filter_map(|a| a.w.to_finite().map(|v| (a.id, v)))
        .unzip()
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

    fn fin(vals: &[i64]) -> PerfVec {
        PerfVec::finite(vals.iter().map(|&v| r(v)).collect())
    }

    fn instance_a() -> Instance {
        Instance::new(vec![fin(&[0, 2]), fin(&[1, 0]), fin(&[2, 2])], vec![r(1)]).unwrap()
    }

    fn instance_c() -> Instance {
        Instance::new(
            vec![
                PerfVec(vec![ExtReal::Infinite, ExtReal::integer(0)]),
                PerfVec(vec![ExtReal::Infinite, ExtReal::integer(1)]),
            ],
            vec![q(1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn combine_identity_and_midpoint() {
        assert_eq!(
            ext_combine(&[r(1)], &[ExtReal::integer(5)]).unwrap(),
            ExtReal::integer(5)
        );
        assert_eq!(
            ext_combine(
                &[q(1, 2), q(1, 2)],
                &[ExtReal::integer(0), ExtReal::integer(2)]
            )
            .unwrap(),
            ExtReal::integer(1)
        );
    }

    #[test]
    fn combine_with_infinite_value() {
        assert_eq!(
            ext_combine(
                &[q(1, 2), q(1, 2)],
                &[ExtReal::integer(0), ExtReal::Infinite]
            )
            .unwrap(),
            ExtReal::Infinite
        );
        // zero weight on inf contributes nothing
        assert_eq!(
            ext_combine(&[r(1), r(0)], &[ExtReal::integer(3), ExtReal::Infinite]).unwrap(),
            ExtReal::integer(3)
        );
    }

    #[test]
    fn combine_rejects_bad_weights() {
        assert!(ext_combine(&[q(1, 2)], &[ExtReal::integer(1)]).is_err());
        assert!(ext_combine(&[r(2), r(-1)], &[ExtReal::integer(1), ExtReal::integer(1)]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let a = instance_a();
        let mid = Mixture::new(vec![(0, q(1, 2)), (1, q(1, 2))]).unwrap();
        assert_eq!(
            evaluate(&a, &mid).unwrap(),
            PerfVec::finite(vec![q(1, 2), r(1)])
        );
        assert_eq!(evaluate(&a, &Mixture::dirac(2)).unwrap(), fin(&[2, 2]));
        let c = instance_c();
        assert_eq!(
            evaluate(&c, &Mixture::dirac(0)).unwrap(),
            PerfVec(vec![ExtReal::Infinite, ExtReal::integer(0)])
        );
        assert!(evaluate(&a, &Mixture::dirac(7)).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let a = instance_a();
        let mid = Mixture::new(vec![(0, q(1, 2)), (1, q(1, 2))]).unwrap();
        assert!(is_feasible(&a, &mid).unwrap());
        assert!(!is_feasible(&a, &Mixture::dirac(0)).unwrap());
        let free =
            Instance::new(vec![fin(&[4]), PerfVec(vec![ExtReal::Infinite])], vec![]).unwrap();
        assert!(is_feasible(&free, &Mixture::dirac(1)).unwrap());
    }

    #[test]
    fn finite_atom_filter() {
        let c = instance_c();
        assert!(finite_atoms(&c, &[0, 1]).is_empty());
        assert_eq!(finite_atoms(&c, &[1]), vec![0, 1]);
        assert_eq!(finite_atoms(&instance_a(), &[0, 1]), vec![0, 1, 2]);
    }

    #[test]
    fn parsing() {
        assert_eq!("3/6".parse::<ExtReal>().unwrap(), ExtReal::Finite(q(1, 2)));
        assert_eq!("inf".parse::<ExtReal>().unwrap(), ExtReal::Infinite);
        assert!("-inf".parse::<ExtReal>().is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_rational("-7").unwrap(), r(-7));
    }

    #[test]
    fn mixture_validation() {
        assert!(Mixture::new(vec![(0, q(1, 2)), (1, q(2, 5))]).is_err());
        assert!(Mixture::new(vec![(0, q(1, 2)), (0, q(1, 2))]).is_err());
        assert!(Mixture::new(vec![(0, r(0)), (1, r(1))]).is_err());
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(vec![], vec![]).is_err());
        assert!(Instance::new(vec![fin(&[1, 2])], vec![]).is_err());
    }
}
