//! Finite discounted constrained MDPs as instances over deterministic
//! stationary policies.
//!
//! Each deterministic policy becomes one atom whose performance vector is its
//! vector of discounted costs. An optimal mixture of these atoms is an optimal
//! mixed policy: performance is affine in the occupation measure, and the
//! occupation measures of deterministic policies span the feasible set.
//!
//! This is a finite stand-in for general constrained MDPs: only discounted
//! criteria with `0 < gamma < 1` are supported. Undiscounted or infinite costs
//! are modeled by writing instances with `inf` atoms directly.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_lp::Rational;
use crate::instance::{Instance, PerfVec};
use crate::linalg::solve_square;

pub const DEFAULT_POLICY_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    /// `actions[s]` is the number of actions available in state `s`.
    pub actions: Vec<usize>,
    /// `transition[s][a][t]` is the probability of moving from `s` to `t`.
    pub transition: Vec<Vec<Vec<Rational>>>,
    /// `costs[j][s][a]` for `j = 0..=J`; `costs[0]` is the objective.
    pub costs: Vec<Vec<Vec<Rational>>>,
    pub gamma: Rational,
    pub initial: Vec<Rational>,
}

/// `Policy(actions)` plays `actions[s]` in state `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Policy(pub Vec<usize>);

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl Mdp {
    pub fn new(
        actions: Vec<usize>,
        transition: Vec<Vec<Vec<Rational>>>,
        costs: Vec<Vec<Vec<Rational>>>,
        gamma: Rational,
        initial: Vec<Rational>,
    ) -> Result<Self> {
        let mdp = Mdp {
            actions,
            transition,
            costs,
            gamma,
            initial,
        };
        mdp.validate()?;
        Ok(mdp)
    }

    pub fn states(&self) -> usize {
        self.actions.len()
    }

    /// Number of constraint criteria `J`.
    pub fn constraints(&self) -> usize {
        self.costs.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.states();
        if n == 0 {
            return Err(invalid("an MDP needs at least one state"));
        }
        if let Some(s) = self.actions.iter().position(|&a| a == 0) {
            return Err(invalid(format!("state {s} has no actions")));
        }
        if self.transition.len() != n {
            return Err(invalid(format!(
                "transition has {} states, expected {n}",
                self.transition.len()
            )));
        }
        for (s, rows) in self.transition.iter().enumerate() {
            if rows.len() != self.actions[s] {
                return Err(invalid(format!(
                    "state {s}: transition has {} actions, expected {}",
                    rows.len(),
                    self.actions[s]
                )));
            }
            for (a, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(invalid(format!(
                        "P({s},{a}) has length {}, expected {n}",
                        row.len()
                    )));
                }
                if row.iter().any(Signed::is_negative) {
                    return Err(invalid(format!("P({s},{a}) has a negative entry")));
                }
                if row.iter().sum::<Rational>() != Rational::one() {
                    return Err(invalid(format!("P({s},{a}) does not sum to 1")));
                }
            }
        }
        if self.costs.is_empty() {
            return Err(invalid("at least the objective cost table is required"));
        }
        for (j, table) in self.costs.iter().enumerate() {
            if table.len() != n
                || table
                    .iter()
                    .zip(&self.actions)
                    .any(|(row, &k)| row.len() != k)
            {
                return Err(invalid(format!(
                    "cost table {j} does not match the action counts"
                )));
            }
        }
        if !self.gamma.is_positive() || self.gamma >= Rational::one() {
            return Err(invalid("discount must lie strictly between 0 and 1"));
        }
        if self.initial.len() != n
            || self.initial.iter().any(Signed::is_negative)
            || self.initial.iter().sum::<Rational>() != Rational::one()
        {
            return Err(invalid(
                "initial distribution must be a probability vector over the states",
            ));
        }
        Ok(())
    }

    fn check_policy(&self, policy: &Policy) -> Result<()> {
        if policy.0.len() != self.states()
            || policy.0.iter().zip(&self.actions).any(|(&a, &k)| a >= k)
        {
            return Err(invalid(format!(
                "policy {:?} is not valid for this MDP",
                policy.0
            )));
        }
        Ok(())
    }
}

/// All deterministic stationary policies, lexicographic in the state-by-state
/// action choice.
pub fn enumerate_policies(mdp: &Mdp, cap: usize) -> Result<Vec<Policy>> {
    let mut count: usize = 1;
    for &k in &mdp.actions {
        count = count
            .checked_mul(k)
            .filter(|&c| c <= cap)
            .ok_or_else(|| Error::SizeLimit {
                what: "deterministic policy count".into(),
                limit: cap,
            })?;
    }
    let mut out = Vec::with_capacity(count);
    let mut current = vec![0usize; mdp.states()];
    loop {
        out.push(Policy(current.clone()));
        let Some(s) = (0..current.len())
            .rev()
            .find(|&s| current[s] + 1 < mdp.actions[s])
        else {
            return Ok(out);
        };
        current[s] += 1;
        for later in &mut current[s + 1..] {
            *later = 0;
        }
    }
}

/// Discounted costs `W_j = initial . v_j` where `(I - gamma P_pi) v_j = c_pi`.
pub fn evaluate_policy(mdp: &Mdp, policy: &Policy) -> Result<PerfVec> {
    mdp.check_policy(policy)?;
    let n = mdp.states();
    let system: Vec<Vec<Rational>> = (0..n)
        .map(|s| {
            let row = &mdp.transition[s][policy.0[s]];
            (0..n)
                .map(|t| {
                    let diag = if s == t {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    diag - &mdp.gamma * &row[t]
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(mdp.costs.len());
    for table in &mdp.costs {
        let c: Vec<Rational> = (0..n).map(|s| table[s][policy.0[s]].clone()).collect();
        let v = solve_square(&system, &c)
            .ok_or_else(|| Error::Invariant("policy evaluation system is singular".into()))?;
        values.push(mdp.initial.iter().zip(&v).map(|(p, x)| p * x).sum());
    }
    Ok(PerfVec::finite(values))
}

/// One atom per deterministic policy, in enumeration order, with bounds `d`.
pub fn build_instance(mdp: &Mdp, d: &[Rational], cap: usize) -> Result<(Instance, Vec<Policy>)> {
    if d.len() != mdp.constraints() {
        return Err(invalid(format!(
            "got {} bounds for an MDP with {} constraint criteria",
            d.len(),
            mdp.constraints()
        )));
    }
    let policies = enumerate_policies(mdp, cap)?;
    let atoms = policies
        .iter()
        .map(|p| evaluate_policy(mdp, p))
        .collect::<Result<Vec<_>>>()?;
    Ok((Instance::new(atoms, d.to_vec())?, policies))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{ExtReal, Mixture};
    use crate::solver::solve;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// One state, action a costs (0, 2), action b costs (1, 0).
    fn two_action() -> Mdp {
        Mdp::new(
            vec![2],
            vec![vec![vec![r(1)], vec![r(1)]]],
            vec![vec![vec![r(0), r(1)]], vec![vec![r(2), r(0)]]],
            q(1, 2),
            vec![r(1)],
        )
        .unwrap()
    }

    fn uniform(actions: Vec<usize>) -> Mdp {
        let n = actions.len();
        let row = vec![q(1, n as i64); n];
        let transition = actions.iter().map(|&k| vec![row.clone(); k]).collect();
        let costs = vec![actions.iter().map(|&k| vec![r(0); k]).collect()];
        Mdp::new(actions, transition, costs, q(1, 2), row).unwrap()
    }

    #[test]
    fn one_state_evaluation() {
        let m = two_action();
        assert_eq!(
            evaluate_policy(&m, &Policy(vec![0])).unwrap(),
            PerfVec::finite(vec![r(0), r(4)])
        );
        assert_eq!(
            evaluate_policy(&m, &Policy(vec![1])).unwrap(),
            PerfVec::finite(vec![r(2), r(0)])
        );
    }

    #[test]
    fn zero_costs_evaluate_to_zero() {
        let m = uniform(vec![2, 3]);
        for p in enumerate_policies(&m, DEFAULT_POLICY_CAP).unwrap() {
            assert_eq!(
                evaluate_policy(&m, &p).unwrap(),
                PerfVec::finite(vec![r(0)])
            );
        }
    }

    #[test]
    fn policy_counts_and_order() {
        assert_eq!(
            enumerate_policies(&two_action(), DEFAULT_POLICY_CAP)
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            enumerate_policies(&uniform(vec![2, 2]), DEFAULT_POLICY_CAP)
                .unwrap()
                .len(),
            4
        );
        let six = enumerate_policies(&uniform(vec![1, 2, 3]), DEFAULT_POLICY_CAP).unwrap();
        assert_eq!(six.len(), 6);
        assert_eq!(six[0], Policy(vec![0, 0, 0]));
        assert_eq!(six[1], Policy(vec![0, 0, 1]));
        assert_eq!(six[5], Policy(vec![0, 1, 2]));
        assert!(six.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_policies(&uniform(vec![3, 3, 3]), 26),
            Err(Error::SizeLimit { limit: 26, .. })
        ));
    }

    #[test]
    fn mixed_policy_is_optimal() {
        let (inst, _) = build_instance(&two_action(), &[r(2)], DEFAULT_POLICY_CAP).unwrap();
        assert_eq!(inst.constraints(), 1);
        let out = solve(&inst).unwrap();
        let s = out.solution().unwrap();
        assert_eq!(s.value, ExtReal::integer(1));
        assert_eq!(
            s.mixture,
            Mixture::new(vec![(0, q(1, 2)), (1, q(1, 2))]).unwrap()
        );
    }

    #[test]
    fn loose_bound_gives_deterministic_policy() {
        let (inst, _) = build_instance(&two_action(), &[r(4)], DEFAULT_POLICY_CAP).unwrap();
        let out = solve(&inst).unwrap();
        let s = out.solution().unwrap();
        assert_eq!(s.value, ExtReal::integer(0));
        assert_eq!(s.mixture, Mixture::dirac(0));
    }

    #[test]
    fn validation_errors() {
        let m = two_action();
        let mut bad = m.clone();
        bad.gamma = r(1);
        assert!(bad.validate().is_err());
        let mut bad = m.clone();
        bad.transition[0][0] = vec![q(1, 2)];
        assert!(bad.validate().is_err());
        assert!(evaluate_policy(&m, &Policy(vec![2])).is_err());
        assert!(build_instance(&m, &[], DEFAULT_POLICY_CAP).is_err());
    }
}
