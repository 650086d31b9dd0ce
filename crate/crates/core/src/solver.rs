//! End-to-end solve: an optimal mixture of at most `J + 1` atoms with a
//! certificate for its performance vector.
//!
//! The main branch runs: optimal value, Pareto point of the auxiliary sum
//! problem, hyperplane certificate, minimal face, Carathéodory reduction over
//! the face's extreme points, and finally lifting each extreme performance
//! vector back to an atom. When every feasible mixture has infinite
//! objective, the problem is re-posed with `W_1` as the objective and the
//! first constraint dropped.

use crate::caratheodory::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::exact_lp::Rational;
use crate::hull::Point;
use crate::instance::{evaluate, finite_hull, is_feasible, ExtReal, Instance, Mixture, PerfVec};
use crate::pareto_face::{
    fs_certificate, minimal_face, optimal_value, pareto_point, verify_certificate, Certificate,
    ProblemValue,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Main,
    DegenerateJ0,
    DegenerateRecursive,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Main => "main",
            Branch::DegenerateJ0 => "degenerate-j0",
            Branch::DegenerateRecursive => "degenerate-recursive",
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        match s {
            "main" => Some(Branch::Main),
            "degenerate-j0" => Some(Branch::DegenerateJ0),
            "degenerate-recursive" => Some(Branch::DegenerateRecursive),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub mixture: Mixture,
    pub value: ExtReal,
    pub branch: Branch,
    /// Present on the main branch; `active` holds instance atom ids.
    pub certificate: Option<Certificate>,
    /// Main branch: the reduction of `W*` over the face's extreme vectors,
    /// with `parts` holding atom ids.
    pub decomposition: Option<Decomposition>,
    /// Degenerate recursive branch: optimal `W_1` of the reduced problem.
    pub reduced_value: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SolveOutcome {
    Solved(Solution),
    Inconsistent,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::Inconsistent => None,
        }
    }
}

pub fn solve(instance: &Instance) -> Result<SolveOutcome> {
    match optimal_value(instance)? {
        ProblemValue::Inconsistent => Ok(SolveOutcome::Inconsistent),
        ProblemValue::Optimal(ExtReal::Infinite) => {
            degenerate_solve(instance).map(SolveOutcome::Solved)
        }
        ProblemValue::Optimal(ExtReal::Finite(d0)) => {
            main_solve(instance, &d0).map(SolveOutcome::Solved)
        }
    }
}

/// Lowest id of a fully finite atom whose performance vector equals `w`.
pub fn lift(instance: &Instance, w: &[Rational]) -> Result<usize> {
    instance
        .atoms()
        .iter()
        .find(|a| a.w.to_finite().as_deref() == Some(w))
        .map(|a| a.id)
        .ok_or_else(|| Error::NoLiftFound(PerfVec::finite(w.to_vec()).to_string()))
}

fn main_solve(instance: &Instance, d0: &Rational) -> Result<Solution> {
    let j = instance.constraints();
    let (ids, points) = finite_hull(instance);

    let w_star = pareto_point(instance)?;
    let cert = fs_certificate(&points, &w_star)?;
    let face = minimal_face(&points, &w_star)?;
    if face != cert.active {
        return Err(Error::Invariant(
            "certificate active set differs from the minimal face".into(),
        ));
    }

    // One representative per distinct vector in the face.
    let mut face_points: Vec<Point> = Vec::new();
    for &i in &face {
        if !face_points.contains(&points[i]) {
            face_points.push(points[i].clone());
        }
    }
    let reduced = decompose(&face_points, &w_star)?;
    let mut parts = Vec::with_capacity(reduced.len());
    for (k, weight) in &reduced.parts {
        parts.push((lift(instance, &face_points[*k])?, weight.clone()));
    }
    let mixture = Mixture::new(parts.clone())?;

    let perf = evaluate(instance, &mixture)?;
    if perf != PerfVec::finite(w_star.clone()) {
        return Err(Error::Invariant(
            "lifted mixture does not reproduce W*".into(),
        ));
    }
    if perf.0[0] != ExtReal::Finite(d0.clone()) {
        return Err(Error::Invariant(
            "mixture value differs from the optimal value".into(),
        ));
    }
    if mixture.len() > j + 1 {
        return Err(Error::Invariant(format!(
            "support {} exceeds J+1",
            mixture.len()
        )));
    }
    if !is_feasible(instance, &mixture)? {
        return Err(Error::Invariant("main-branch mixture is infeasible".into()));
    }

    Ok(Solution {
        mixture,
        value: ExtReal::Finite(d0.clone()),
        branch: Branch::Main,
        certificate: Some(cert.relabel(&ids)),
        decomposition: Some(Decomposition {
            parts,
            point: w_star,
        }),
        reduced_value: None,
    })
}

/// Solve a consistent instance whose optimal value is `+inf`.
pub fn degenerate_solve(instance: &Instance) -> Result<Solution> {
    match optimal_value(instance)? {
        ProblemValue::Optimal(ExtReal::Infinite) => {}
        other => {
            return Err(Error::Precondition(format!(
                "degenerate_solve needs a consistent instance with infinite value, got {other}"
            )))
        }
    }
    if instance.constraints() == 0 {
        return Ok(Solution {
            mixture: Mixture::dirac(0),
            value: ExtReal::Infinite,
            branch: Branch::DegenerateJ0,
            certificate: None,
            decomposition: None,
            reduced_value: None,
        });
    }

    let reduced = reduced_instance(instance)?;
    let reduced_value = match optimal_value(&reduced)? {
        ProblemValue::Optimal(ExtReal::Finite(v)) => v,
        other => {
            return Err(Error::Invariant(format!(
                "reduced problem of a consistent instance must have a finite value, got {other}"
            )))
        }
    };
    let inner = main_solve(&reduced, &reduced_value)?;
    let mixture = inner.mixture;
    if !is_feasible(instance, &mixture)? {
        return Err(Error::Invariant(
            "reduced optimum is infeasible for the original problem".into(),
        ));
    }
    debug_assert_eq!(evaluate(instance, &mixture)?.0[0], ExtReal::Infinite);
    Ok(Solution {
        mixture,
        value: ExtReal::Infinite,
        branch: Branch::DegenerateRecursive,
        certificate: None,
        decomposition: None,
        reduced_value: Some(reduced_value),
    })
}

/// Objective `W_1`, constraints `W_j <= d_j` for `j = 2..J`, same atoms.
pub fn reduced_instance(instance: &Instance) -> Result<Instance> {
    if instance.constraints() == 0 {
        return Err(Error::Precondition(
            "no constraint to promote to the objective".into(),
        ));
    }
    let atoms = instance
        .atoms()
        .iter()
        .map(|a| PerfVec(a.w.0[1..].to_vec()))
        .collect();
    Instance::new(atoms, instance.bounds()[1..].to_vec())
}

/// One named check of [`check_solution`]; `failure` is `None` when it passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        Check { name, failure }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check a claimed solution against an instance: support size, feasibility,
/// reported value, branch consistency, and the certificate when present.
/// Optimality itself is not checked here.
pub fn check_solution(instance: &Instance, solution: &Solution) -> Vec<Check> {
    let j = instance.constraints();
    let mut checks = Vec::new();
    let support = solution.mixture.len();
    checks.push(Check::new(
        "support",
        (support > j + 1).then(|| format!("support exceeds J+1: {support} atoms for J = {j}")),
    ));
    let perf = match evaluate(instance, &solution.mixture) {
        Ok(p) => p,
        Err(e) => {
            checks.push(Check::new("evaluate", Some(e.to_string())));
            return checks;
        }
    };
    let violated: Vec<String> = instance
        .bounds()
        .iter()
        .zip(&perf.0[1..])
        .enumerate()
        .filter(|(_, (d, w))| **w > ExtReal::Finite((*d).clone()))
        .map(|(k, (d, w))| format!("W_{} = {w} > {d}", k + 1))
        .collect();
    checks.push(Check::new(
        "feasibility",
        (!violated.is_empty()).then(|| format!("constraints violated: {}", violated.join(", "))),
    ));
    checks.push(Check::new(
        "value",
        (perf.0[0] != solution.value).then(|| {
            format!(
                "mixture has W_0 = {}, reported {}",
                perf.0[0], solution.value
            )
        }),
    ));
    let branch_ok = match solution.branch {
        Branch::Main => solution.value.is_finite() && solution.certificate.is_some(),
        Branch::DegenerateJ0 => !solution.value.is_finite() && j == 0,
        Branch::DegenerateRecursive => !solution.value.is_finite() && j > 0,
    };
    checks.push(Check::new(
        "branch",
        (!branch_ok).then(|| {
            format!(
                "branch {} does not match the reported value",
                solution.branch.as_str()
            )
        }),
    ));
    if let Some(cert) = &solution.certificate {
        checks.push(Check::new(
            "certificate",
            certificate_failure(instance, &perf, cert),
        ));
    }
    checks
}

fn certificate_failure(instance: &Instance, perf: &PerfVec, cert: &Certificate) -> Option<String> {
    if perf.to_finite().as_deref() != Some(cert.w_star.as_slice()) {
        return Some("certificate point differs from the mixture's performance vector".into());
    }
    let (ids, points) = finite_hull(instance);
    let mut local = std::collections::BTreeSet::new();
    for id in &cert.active {
        match ids.iter().position(|i| i == id) {
            Some(pos) => {
                local.insert(pos);
            }
            None => return Some(format!("active atom {id} is not a finite atom")),
        }
    }
    let relabeled = Certificate {
        w_star: cert.w_star.clone(),
        planes: cert.planes.clone(),
        active: local,
    };
    let report = verify_certificate(&points, &cert.w_star, &relabeled);
    (!report.is_valid()).then(|| report.failures.join("; "))
}
