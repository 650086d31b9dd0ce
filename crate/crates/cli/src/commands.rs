//! Subcommand implementations. Each writes its report to `out` and returns
//! the process exit status; input problems come back as `Err`.

use std::fs;
use std::io::Write;
use std::path::Path;

use mixsolve_core::cmdp::{build_instance, DEFAULT_POLICY_CAP};
use mixsolve_core::gen::{random_instance, GenParams};
use mixsolve_core::instance::parse_rational;
use mixsolve_core::oracle::oracle_optimal;
use mixsolve_core::pareto_face::{
    disk_counterexample, fs_certificate, verify_certificate, DiskVerdict,
};
use mixsolve_core::{
    check_solution, solve, ExtReal, Instance, ProblemValue, Rational, SolveOutcome,
};
use num_traits::{One, Signed};

use crate::error::CliError;
use crate::format::{from_json, to_json, InstanceFile, MdpFile, SolutionFile, Status};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    InputError = 1,
    Inconsistent = 2,
    VerificationFailed = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

type CmdResult = Result<Exit, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<output>".into(),
        source: e,
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let file: InstanceFile = from_json(&path.display().to_string(), &read(path)?)?;
    file.to_instance()
}

fn report_outcome(out: &mut dyn Write, outcome: &SolveOutcome) -> std::io::Result<()> {
    match outcome {
        SolveOutcome::Inconsistent => writeln!(out, "status: inconsistent"),
        SolveOutcome::Solved(s) => {
            writeln!(out, "status: optimal")?;
            writeln!(out, "value: {}", s.value)?;
            writeln!(out, "branch: {}", s.branch.as_str())?;
            writeln!(out, "mixture: {}", s.mixture)?;
            if let Some(c) = &s.certificate {
                writeln!(out, "certificate: {} hyperplane(s)", c.k())?;
            }
            Ok(())
        }
    }
}

pub fn cmd_solve(input: &Path, output: &Path, out: &mut dyn Write) -> CmdResult {
    let instance = load_instance(input)?;
    let outcome = solve(&instance)?;
    write_file(output, &to_json(&SolutionFile::from_outcome(&outcome)))?;
    report_outcome(out, &outcome).map_err(io)?;
    Ok(match outcome {
        SolveOutcome::Solved(_) => Exit::Ok,
        SolveOutcome::Inconsistent => Exit::Inconsistent,
    })
}

pub fn cmd_verify(input: &Path, solution: &Path, out: &mut dyn Write) -> CmdResult {
    let instance = load_instance(input)?;
    let file: SolutionFile = from_json(&solution.display().to_string(), &read(solution)?)?;
    let j = instance.constraints();
    let mut results: Vec<(&str, Option<String>)> = Vec::new();
    let truth = oracle_optimal(&instance)?;

    match file.status {
        Status::Inconsistent => {
            results.push((
                "status",
                (truth != ProblemValue::Inconsistent)
                    .then(|| format!("instance is consistent with optimal value {truth}")),
            ));
        }
        Status::Optimal => {
            results.push((
                "weights",
                (!file.weights_sum_to_one()).then(|| {
                    format!(
                        "mixture weights do not sum to 1 (sum = {})",
                        file.weight_sum()
                    )
                }),
            ));
            let support = file.mixture.len();
            results.push((
                "support",
                (support > j + 1)
                    .then(|| format!("support exceeds J+1: {support} atoms for J = {j}")),
            ));
            match file.to_outcome() {
                Ok(SolveOutcome::Solved(s)) => {
                    for check in check_solution(&instance, &s) {
                        if check.name != "support" {
                            results.push((check.name, check.failure));
                        }
                    }
                    results.push((
                        "optimality",
                        (truth != ProblemValue::Optimal(s.value.clone())).then(|| {
                            format!("reported value {} but the optimum is {truth}", s.value)
                        }),
                    ));
                }
                Ok(SolveOutcome::Inconsistent) => unreachable!("status is optimal"),
                Err(e) if file.weights_sum_to_one() => {
                    results.push(("solution", Some(e.to_string())))
                }
                Err(_) => {}
            }
        }
    }

    let mut all_ok = true;
    for (name, failure) in &results {
        match failure {
            None => writeln!(out, "ok    {name}"),
            Some(msg) => {
                all_ok = false;
                writeln!(out, "FAIL  {name}: {msg}")
            }
        }
        .map_err(io)?;
    }
    Ok(if all_ok {
        Exit::Ok
    } else {
        Exit::VerificationFailed
    })
}

/// Parse `p/q`, an integer, or a plain decimal such as `0.1`, exactly.
pub fn parse_fraction(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Invalid(format!("invalid rational `{s}`"));
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            "0"
        } else {
            whole
        };
        let int = parse_rational(whole).map_err(|_| bad())?;
        let scale = Rational::from_integer(num_traits::pow(10u32.into(), frac.len()));
        let tail = parse_rational(frac).map_err(|_| bad())? / scale;
        return Ok(if negative || int.is_negative() {
            int - tail
        } else {
            int + tail
        });
    }
    parse_rational(s).map_err(|_| bad())
}

pub fn cmd_gen(
    atoms: usize,
    constraints: usize,
    seed: u64,
    inf_fraction: &Rational,
    out: &mut dyn Write,
) -> CmdResult {
    let instance = random_instance(&GenParams {
        atoms,
        constraints,
        seed,
        inf_fraction: inf_fraction.clone(),
    })?;
    out.write_all(to_json(&InstanceFile::from_instance(&instance)).as_bytes())
        .map_err(io)?;
    Ok(Exit::Ok)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Points on the circle with the given center and radius, from the rational
/// parametrization `t -> ((1 - t^2), 2t) / (1 + t^2)`.
fn circle_samples(
    center: &[Rational; 2],
    radius: &Rational,
    ts: &[Rational],
) -> Vec<Vec<Rational>> {
    ts.iter()
        .map(|t| {
            let t2 = t * t;
            let den = Rational::one() + &t2;
            vec![
                &center[0] + radius * (Rational::one() - &t2) / &den,
                &center[1] + radius * (t * Rational::from_integer(2.into())) / &den,
            ]
        })
        .collect()
}

pub fn cmd_demo_example1(out: &mut dyn Write) -> CmdResult {
    let center = [Rational::one(), q(3, 2)];
    let radius = q(1, 2);
    let u = [Rational::one(), Rational::one()];
    let report = disk_counterexample(
        center.clone(),
        radius.clone(),
        u.clone(),
        (q(0, 1), q(2, 1)),
    )?;
    let mut w = |s: String| -> Result<(), CliError> { writeln!(out, "{s}").map_err(io) };
    w(
        "set: disk with center (1, 3/2) and radius 1/2, plus the ray {(inf, v) : 0 <= v <= 2}"
            .into(),
    )?;
    w(format!("point u = {}", fmt_point(&u)))?;
    w(report.to_string())?;
    if report.verdict == DiskVerdict::Contradiction {
        w(
            "the only supporting normal at u has b_1 = 0, so u has no certificate in the full set"
                .into(),
        )?;
    }

    // Finite restriction: the ray is dropped and the disk edge is sampled.
    let ts: Vec<Rational> = [
        (-3, 1),
        (-2, 1),
        (-1, 2),
        (-1, 3),
        (0, 1),
        (1, 3),
        (1, 2),
        (2, 1),
        (3, 1),
    ]
    .iter()
    .map(|&(n, d)| q(n, d))
    .collect();
    let mut atoms = vec![
        vec![Rational::one(), Rational::one()],
        vec![Rational::one(), q(2, 1)],
    ];
    atoms.extend(circle_samples(&center, &radius, &ts));
    w(String::new())?;
    w(format!(
        "finite restriction: {} atoms on the disk edge, infinite atoms dropped",
        atoms.len()
    ))?;
    let cert = fs_certificate(&atoms, &u)?;
    for (i, plane) in cert.planes.iter().enumerate() {
        w(format!(
            "plane {}: b = {}, beta = {}",
            i + 1,
            fmt_point(&plane.b),
            plane.beta
        ))?;
    }
    let active: Vec<String> = cert.active.iter().map(|i| fmt_point(&atoms[*i])).collect();
    w(format!("active set: {}", active.join(", ")))?;
    let check = verify_certificate(&atoms, &u, &cert);
    let j = u.len() - 1;
    if check.is_valid() && cert.k() <= j + 1 {
        w(format!(
            "certificate verified, k ≤ J+1 (k = {}, J = {j})",
            cert.k()
        ))?;
        Ok(Exit::Ok)
    } else {
        w(format!(
            "certificate rejected: {}",
            check.failures.join("; ")
        ))?;
        Ok(Exit::VerificationFailed)
    }
}

pub fn parse_bounds(s: &str) -> Result<Vec<Rational>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| parse_fraction(part.trim()))
        .collect()
}

pub fn cmd_mdp_solve(input: &Path, bounds: &[Rational], out: &mut dyn Write) -> CmdResult {
    let file: MdpFile = from_json(&input.display().to_string(), &read(input)?)?;
    let mdp = file.to_mdp()?;
    let (instance, policies) = build_instance(&mdp, bounds, DEFAULT_POLICY_CAP)?;
    writeln!(
        out,
        "{} deterministic policies, J = {}",
        policies.len(),
        instance.constraints()
    )
    .map_err(io)?;
    let outcome = solve(&instance)?;
    match &outcome {
        SolveOutcome::Inconsistent => {
            writeln!(out, "status: inconsistent").map_err(io)?;
            Ok(Exit::Inconsistent)
        }
        SolveOutcome::Solved(s) => {
            writeln!(out, "status: optimal").map_err(io)?;
            writeln!(out, "value: {}", s.value).map_err(io)?;
            for (id, weight) in s.mixture.support() {
                let perf = &instance.atoms()[*id].w;
                writeln!(
                    out,
                    "policy {:?} with weight {weight}: costs {perf}",
                    policies[*id].0
                )
                .map_err(io)?;
            }
            if let ExtReal::Finite(_) = s.value {
                writeln!(
                    out,
                    "mixed policy uses {} of at most {} deterministic policies",
                    s.mixture.len(),
                    instance.constraints() + 1
                )
                .map_err(io)?;
            }
            Ok(Exit::Ok)
        }
    }
}
