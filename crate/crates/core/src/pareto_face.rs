//! Geometry of the performance hull: optimal value, Pareto points, minimal
//! faces, and the supporting-hyperplane certificate for a Pareto point.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_lp::{dot, solve_lp, Constraint, LinearProgram, LpOutcome, Rational, VarBound};
use crate::hull::{coordinate_row, hull_weights, representation_rows, simplex_row, Point};
use crate::instance::{finite_atoms, ExtReal, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemValue {
    Inconsistent,
    Optimal(ExtReal),
}

impl ProblemValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ProblemValue::Optimal(v) => v.finite(),
            ProblemValue::Inconsistent => None,
        }
    }
}

impl fmt::Display for ProblemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemValue::Inconsistent => f.write_str("inconsistent"),
            ProblemValue::Optimal(v) => write!(f, "{v}"),
        }
    }
}

/// LP over the mixture weights of `ids` with `W_j <= bound_j` for every
/// `(j, bound_j)` in `caps`. The objective is `sum_j obj[j] * W_j`.
fn capped_mixture_lp(
    instance: &Instance,
    ids: &[usize],
    caps: &[(usize, Rational)],
    obj: &[Rational],
) -> LinearProgram {
    let value = |id: usize, j: usize| -> Rational {
        instance.atoms()[id].w.0[j]
            .finite()
            .cloned()
            .expect("caller filters atoms to finite coordinates")
    };
    let objective = ids
        .iter()
        .map(|&id| {
            obj.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| c * value(id, j))
                .sum()
        })
        .collect();
    let mut lp = LinearProgram::minimize(objective).nonnegative();
    lp.push(simplex_row(ids.len()));
    for (j, cap) in caps {
        lp.push(Constraint::le(
            ids.iter().map(|&id| value(id, *j)).collect(),
            cap.clone(),
        ));
    }
    lp
}

fn constraint_caps(instance: &Instance) -> Vec<(usize, Rational)> {
    instance
        .bounds()
        .iter()
        .enumerate()
        .map(|(j, d)| (j + 1, d.clone()))
        .collect()
}

/// Optimal value of `min W_0 s.t. W_j <= d_j` over all mixtures.
pub fn optimal_value(instance: &Instance) -> Result<ProblemValue> {
    let width = instance.constraints() + 1;
    let caps = constraint_caps(instance);

    let constraint_coords: Vec<usize> = (1..width).collect();
    let usable = finite_atoms(instance, &constraint_coords);
    if usable.is_empty() {
        return Ok(ProblemValue::Inconsistent);
    }
    let feas = capped_mixture_lp(instance, &usable, &caps, &vec![Rational::zero(); width]);
    if solve_lp(&feas)? == LpOutcome::Infeasible {
        return Ok(ProblemValue::Inconsistent);
    }

    let all: Vec<usize> = (0..width).collect();
    let finite = finite_atoms(instance, &all);
    if finite.is_empty() {
        return Ok(ProblemValue::Optimal(ExtReal::Infinite));
    }
    let mut obj = vec![Rational::zero(); width];
    obj[0] = Rational::one();
    match solve_lp(&capped_mixture_lp(instance, &finite, &caps, &obj))? {
        LpOutcome::Optimal { value, .. } => Ok(ProblemValue::Optimal(ExtReal::Finite(value))),
        LpOutcome::Infeasible => Ok(ProblemValue::Optimal(ExtReal::Infinite)),
        LpOutcome::Unbounded => Err(Error::Invariant("mixture LP cannot be unbounded".into())),
    }
}

/// A Pareto optimal performance vector `W*` with `W*_0` equal to the optimal
/// value: the minimizer of `sum_j W_j` subject to `W_j <= d_j` for all
/// `j = 0..J`, where `d_0` is the optimal value.
pub fn pareto_point(instance: &Instance) -> Result<Point> {
    let d0 = match optimal_value(instance)? {
        ProblemValue::Optimal(ExtReal::Finite(v)) => v,
        other => {
            return Err(Error::Precondition(format!(
                "pareto_point needs a finite optimal value, got {other}"
            )))
        }
    };
    let width = instance.constraints() + 1;
    let all: Vec<usize> = (0..width).collect();
    let ids = finite_atoms(instance, &all);
    let mut caps = vec![(0, d0)];
    caps.extend(constraint_caps(instance));
    let lp = capped_mixture_lp(instance, &ids, &caps, &vec![Rational::one(); width]);
    let LpOutcome::Optimal { point: weights, .. } = solve_lp(&lp)? else {
        return Err(Error::Invariant(
            "auxiliary sum problem has no optimum".into(),
        ));
    };
    let points: Vec<Point> = ids
        .iter()
        .map(|&id| instance.atoms()[id].w.to_finite().expect("finite atom"))
        .collect();
    Ok(crate::hull::combine(&points, &weights))
}

/// Dominance test: no mixture of `atoms` is componentwise `<= u` with a
/// strictly smaller coordinate sum.
pub fn is_pareto(u: &[Rational], atoms: &[Point]) -> Result<bool> {
    check_dims(atoms, u)?;
    if atoms.is_empty() {
        return Ok(false);
    }
    let objective = atoms.iter().map(|p| p.iter().sum()).collect();
    let mut lp = LinearProgram::minimize(objective).nonnegative();
    lp.push(simplex_row(atoms.len()));
    for (j, uj) in u.iter().enumerate() {
        lp.push(Constraint::le(coordinate_row(atoms, j), uj.clone()));
    }
    let target: Rational = u.iter().sum();
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { value, .. } => value == target,
        _ => false,
    })
}

fn check_dims(atoms: &[Point], u: &[Rational]) -> Result<()> {
    if let Some((i, _)) = atoms.iter().enumerate().find(|(_, p)| p.len() != u.len()) {
        return Err(Error::InvalidInput(format!(
            "atom {i} has dimension {}, point has {}",
            atoms[i].len(),
            u.len()
        )));
    }
    Ok(())
}

/// Indices of the atoms spanning the smallest face of `conv(atoms)` that
/// contains `u`: those with positive weight in some representation of `u`.
pub fn minimal_face(atoms: &[Point], u: &[Rational]) -> Result<BTreeSet<usize>> {
    check_dims(atoms, u)?;
    let Some(first) = hull_weights(atoms, u)? else {
        return Err(Error::NotInHull);
    };
    let mut face: BTreeSet<usize> = positive_entries(&first);
    let rows = representation_rows(atoms, u);
    for i in 0..atoms.len() {
        if face.contains(&i) {
            continue;
        }
        let mut objective = vec![Rational::zero(); atoms.len()];
        objective[i] = Rational::one();
        let mut lp = LinearProgram::maximize(objective).nonnegative();
        lp.constraints = rows.clone();
        if let LpOutcome::Optimal { point, .. } = solve_lp(&lp)? {
            // Any optimum witnesses every atom it puts weight on.
            face.extend(positive_entries(&point));
        }
    }
    Ok(face)
}

fn positive_entries(weights: &[Rational]) -> BTreeSet<usize> {
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// `{x : b . x = beta}` with `b >= 0` and `sum b = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub b: Vec<Rational>,
    pub beta: Rational,
}

impl Hyperplane {
    pub fn eval(&self, p: &[Rational]) -> Rational {
        dot(&self.b, p)
    }

    pub fn is_strict(&self) -> bool {
        self.b.iter().all(Signed::is_positive)
    }
}

/// A nested sequence of supporting hyperplanes at a Pareto point whose
/// intersection with the hull is the minimal face of that point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub w_star: Point,
    pub planes: Vec<Hyperplane>,
    pub active: BTreeSet<usize>,
}

impl Certificate {
    pub fn k(&self) -> usize {
        self.planes.len()
    }

    /// Rename atom indices through `ids` (index `i` becomes `ids[i]`).
    pub fn relabel(&self, ids: &[usize]) -> Certificate {
        Certificate {
            w_star: self.w_star.clone(),
            planes: self.planes.clone(),
            active: self.active.iter().map(|&i| ids[i]).collect(),
        }
    }
}

struct NormalLp<'a> {
    atoms: &'a [Point],
    u: &'a [Rational],
}

impl NormalLp<'_> {
    /// Nonnegative normalized `b` with `b . (p - u) >= 0` for `p` in `current`.
    fn supporting_lp(
        &self,
        current: &[usize],
        objective: Vec<Rational>,
        extra_vars: usize,
    ) -> LinearProgram {
        let n = self.u.len();
        let mut lp = LinearProgram::maximize(objective);
        for j in 0..n {
            lp.bounds[j] = VarBound::nonnegative();
        }
        let pad = |mut row: Vec<Rational>| {
            row.resize(n + extra_vars, Rational::zero());
            row
        };
        lp.push(Constraint::eq(
            pad(vec![Rational::one(); n]),
            Rational::one(),
        ));
        for &i in current {
            let diff: Vec<Rational> = self.atoms[i]
                .iter()
                .zip(self.u)
                .map(|(p, x)| p - x)
                .collect();
            if diff.iter().all(Zero::is_zero) {
                continue;
            }
            lp.push(Constraint::ge(pad(diff), Rational::zero()));
        }
        lp
    }

    /// `max t s.t. b_j >= t`, over supporting normals.
    fn max_min(&self, current: &[usize]) -> Result<Option<(Rational, Vec<Rational>)>> {
        let n = self.u.len();
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = Rational::one();
        let mut lp = self.supporting_lp(current, objective, 1);
        for j in 0..n {
            let mut row = vec![Rational::zero(); n + 1];
            row[j] = Rational::one();
            row[n] = -Rational::one();
            lp.push(Constraint::ge(row, Rational::zero()));
        }
        Ok(match solve_lp(&lp)? {
            LpOutcome::Optimal { value, mut point } => {
                point.truncate(n);
                Some((value, point))
            }
            _ => None,
        })
    }

    /// `max b . (q - u)` over supporting normals.
    fn max_separation(
        &self,
        current: &[usize],
        q: usize,
    ) -> Result<Option<(Rational, Vec<Rational>)>> {
        let diff: Vec<Rational> = self.atoms[q]
            .iter()
            .zip(self.u)
            .map(|(p, x)| p - x)
            .collect();
        let lp = self.supporting_lp(current, diff, 0);
        Ok(match solve_lp(&lp)? {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        })
    }
}

fn normalize(b: Vec<Rational>) -> Vec<Rational> {
    let s: Rational = b.iter().sum();
    b.into_iter().map(|x| x / &s).collect()
}

/// Build the hyperplane certificate for a Pareto point `u` of `conv(atoms)`.
///
/// Each stage works on the atoms lying on every plane emitted so far. It
/// finds, for every atom that some nonnegative supporting normal at `u`
/// strictly separates, such a normal, and emits their sum (plus a strictly
/// positive supporting normal when one exists). The sum separates all those
/// atoms at once. The process ends once nothing can be separated and the
/// last plane is strictly positive.
pub fn fs_certificate(atoms: &[Point], u: &[Rational]) -> Result<Certificate> {
    check_dims(atoms, u)?;
    if !is_pareto(u, atoms)? {
        return Err(Error::NotPareto);
    }
    let n = u.len();
    let lps = NormalLp { atoms, u };
    let mut current: Vec<usize> = (0..atoms.len()).collect();
    let mut planes: Vec<Hyperplane> = Vec::new();

    loop {
        let stage = planes.len() + 1;
        let strict = match lps.max_min(&current)? {
            Some((t, b)) if t.is_positive() => Some(b),
            Some(_) => None,
            None => return Err(Error::CertificateStall { stage }),
        };

        let mut normals: Vec<Vec<Rational>> = Vec::new();
        if let Some(b) = &strict {
            normals.push(b.clone());
        }
        let mut separated = false;
        for &q in &current {
            let gap = |b: &Vec<Rational>| -> Rational {
                atoms[q]
                    .iter()
                    .zip(u)
                    .zip(b)
                    .map(|((p, x), bj)| bj * (p - x))
                    .sum()
            };
            if normals.iter().any(|b| gap(b).is_positive()) {
                separated = true;
                continue;
            }
            if atoms[q].as_slice() == u {
                continue;
            }
            if let Some((value, b)) = lps.max_separation(&current, q)? {
                if value.is_positive() {
                    separated = true;
                    normals.push(b);
                }
            }
        }

        if !separated {
            if planes.last().is_some_and(Hyperplane::is_strict) {
                break;
            }
            let Some(b) = strict else {
                return Err(Error::CertificateStall { stage });
            };
            let beta = dot(&b, u);
            planes.push(Hyperplane { b, beta });
            break;
        }

        let mut sum = vec![Rational::zero(); n];
        for b in &normals {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += x;
            }
        }
        let b = normalize(sum);
        let beta = dot(&b, u);
        current.retain(|&i| dot(&b, &atoms[i]) == beta);
        planes.push(Hyperplane { b, beta });
        if planes.len() > n {
            return Err(Error::Invariant(format!(
                "certificate needs more than J+1 = {n} hyperplanes"
            )));
        }
    }

    Ok(Certificate {
        w_star: u.to_vec(),
        planes,
        active: current.into_iter().collect(),
    })
}

/// Outcome of [`verify_certificate`]: empty `failures` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateReport {
    pub failures: Vec<String>,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

/// Check every certificate property exactly, including that the plane
/// intersection equals the minimal face of `u`.
pub fn verify_certificate(
    atoms: &[Point],
    u: &[Rational],
    cert: &Certificate,
) -> CertificateReport {
    let mut report = CertificateReport::default();
    let n = u.len();
    if cert.w_star.as_slice() != u {
        report.fail("certificate point differs from u");
    }
    if cert.planes.is_empty() {
        report.fail("certificate has no hyperplanes");
    }
    if cert.planes.len() > n {
        report.fail(format!(
            "certificate has {} hyperplanes, more than J+1 = {n}",
            cert.planes.len()
        ));
    }
    if let Some(i) = atoms.iter().position(|p| p.len() != n) {
        report.fail(format!("atom {i} has the wrong dimension"));
        return report;
    }

    let mut current: Vec<usize> = (0..atoms.len()).collect();
    for (idx, plane) in cert.planes.iter().enumerate() {
        let i = idx + 1;
        if plane.b.len() != n {
            report.fail(format!("plane {i}: normal has the wrong dimension"));
            return report;
        }
        if plane.b.iter().any(Signed::is_negative) {
            report.fail(format!("plane {i}: normal has a negative component"));
        }
        if !plane.b.iter().sum::<Rational>().is_one() {
            report.fail(format!("plane {i}: normal is not normalized to sum 1"));
        }
        if plane.eval(u) != plane.beta {
            report.fail(format!("plane {i}: support equality fails at u"));
        }
        for &q in &current {
            if plane.eval(&atoms[q]) < plane.beta {
                report.fail(format!("plane {i}: stage inequality fails at atom {q}"));
            }
        }
        current.retain(|&q| plane.eval(&atoms[q]) == plane.beta);
    }
    if let Some(last) = cert.planes.last() {
        if !last.is_strict() {
            report.fail("final normal not strictly positive");
        }
    }
    let on_planes: BTreeSet<usize> = current.into_iter().collect();
    if on_planes != cert.active {
        report.fail("active set differs from the atoms on all planes");
    }
    match minimal_face(atoms, u) {
        Ok(face) if face == cert.active => {}
        Ok(_) => report.fail("active set differs from the minimal face of u"),
        Err(e) => report.fail(format!("minimal face unavailable: {e}")),
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiskVerdict {
    /// The only supporting normal is violated by a point at infinity.
    Contradiction,
    /// The infinite coordinate carries positive weight, so no violation.
    NoCounterexample,
    /// The supporting normal has a negative component.
    NoNonnegativeNormal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskReport {
    pub normal: [Rational; 2],
    pub beta: Rational,
    /// The ray point `(inf, lo)`.
    pub probe_second: Rational,
    pub probe_value: ExtReal,
    pub verdict: DiskVerdict,
}

impl fmt::Display for DiskReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "supporting normal at u: b = ({}, {})",
            self.normal[0], self.normal[1]
        )?;
        writeln!(f, "beta = {}", self.beta)?;
        writeln!(
            f,
            "b . (inf, {}) = {} under 0 * inf = 0",
            self.probe_second, self.probe_value
        )?;
        match self.verdict {
            DiskVerdict::Contradiction => write!(
                f,
                "violated by (inf, {}): {} < {}; no supporting hyperplane exists over the extended set",
                self.probe_second, self.probe_value, self.beta
            ),
            DiskVerdict::NoCounterexample => write!(
                f,
                "no counterexample: {} >= {}",
                self.probe_value, self.beta
            ),
            DiskVerdict::NoNonnegativeNormal => {
                write!(f, "no counterexample: the supporting normal is not nonnegative")
            }
        }
    }
}

/// The disk-plus-ray set in `(-inf, inf]^2`: the unique supporting normal of
/// the disk at boundary point `u`, tested against the ray
/// `{(inf, v) : lo <= v <= hi}`.
pub fn disk_counterexample(
    center: [Rational; 2],
    radius: Rational,
    u: [Rational; 2],
    ray: (Rational, Rational),
) -> Result<DiskReport> {
    if !radius.is_positive() {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let (lo, hi) = ray;
    if lo > hi {
        return Err(Error::InvalidInput("ray interval is empty".into()));
    }
    let inward = [&center[0] - &u[0], &center[1] - &u[1]];
    let dist2 = &inward[0] * &inward[0] + &inward[1] * &inward[1];
    if dist2 != &radius * &radius {
        return Err(Error::InvalidInput("u is not on the disk boundary".into()));
    }
    let scale = inward[0].abs() + inward[1].abs();
    let normal = [&inward[0] / &scale, &inward[1] / &scale];
    let beta = &normal[0] * &u[0] + &normal[1] * &u[1];
    if normal.iter().any(Signed::is_negative) {
        let probe_value = (&normal[0] * &ExtReal::Infinite).add_finite(&(&normal[1] * &lo));
        return Ok(DiskReport {
            normal,
            beta,
            probe_second: lo,
            probe_value,
            verdict: DiskVerdict::NoNonnegativeNormal,
        });
    }
    // b_2 >= 0, so the ray minimum of b . v sits at v_2 = lo.
    let probe_value = (&normal[0] * &ExtReal::Infinite).add_finite(&(&normal[1] * &lo));
    let verdict = if probe_value < ExtReal::Finite(beta.clone()) {
        DiskVerdict::Contradiction
    } else {
        DiskVerdict::NoCounterexample
    };
    Ok(DiskReport {
        normal,
        beta,
        probe_second: lo,
        probe_value,
        verdict,
    })
}

trait AddFinite {
    fn add_finite(&self, x: &Rational) -> ExtReal;
}

impl AddFinite for ExtReal {
    fn add_finite(&self, x: &Rational) -> ExtReal {
        self + &ExtReal::Finite(x.clone())
    }
}
