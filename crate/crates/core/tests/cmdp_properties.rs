mod common;

use common::r;
use mixsolve_core::cmdp::{build_instance, evaluate_policy, DEFAULT_POLICY_CAP};
use mixsolve_core::exact_lp::Rational;
use mixsolve_core::gen::random_mdp;
use mixsolve_core::oracle::oracle_occupation_lp;
use mixsolve_core::{solve, ExtReal, ProblemValue, SolveOutcome};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mixed_policies_match_occupation_lp(seed in any::<u64>(), slack in prop::collection::vec(0..=8i64, 2)) {
        let mdp = random_mdp(seed, 3, 3, 2);
        let j = mdp.constraints();
        // Anchor bounds at the first deterministic policy, loosened or
        // tightened by a grid offset, so both outcomes occur.
        let (probe, policies) = build_instance(&mdp, &vec![r(0); j], DEFAULT_POLICY_CAP).unwrap();
        let anchor = probe.atoms()[0].w.to_finite().unwrap();
        let d: Vec<Rational> = (0..j).map(|k| &anchor[k + 1] + Rational::new((slack[k] - 4).into(), 4.into())).collect();
        let (inst, _) = build_instance(&mdp, &d, DEFAULT_POLICY_CAP).unwrap();
        prop_assert_eq!(inst.len(), policies.len());
        let truth = oracle_occupation_lp(&mdp, &d).unwrap();
        match solve(&inst).unwrap() {
            SolveOutcome::Inconsistent => prop_assert_eq!(truth, ProblemValue::Inconsistent),
            SolveOutcome::Solved(s) => {
                prop_assert_eq!(ProblemValue::Optimal(s.value.clone()), truth);
                prop_assert!(matches!(s.value, ExtReal::Finite(_)));
                prop_assert!(s.mixture.len() <= j + 1);
            }
        }
    }

    #[test]
    fn policy_values_are_nonnegative_for_nonnegative_costs(seed in any::<u64>()) {
        let mdp = random_mdp(seed, 3, 3, 2);
        let (_, policies) = build_instance(&mdp, &vec![r(0); mdp.constraints()], DEFAULT_POLICY_CAP).unwrap();
        for p in &policies {
            let w = evaluate_policy(&mdp, p).unwrap();
            prop_assert!(w.0.iter().all(|x| *x >= ExtReal::zero()));
        }
    }
}
