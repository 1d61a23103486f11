use std::collections::BTreeMap;

use super::{run_trials, EstimateWithCI, Tally, TrialPlan};
use crate::dataset::{hamming_distance, Dataset};
use crate::error::{invalid, Error, Result};
use crate::mechanism::Mechanism;
use crate::outcome::Label;
use crate::privacy::PrivacyClaim;
use crate::repetition::{Algorithm, Oracle};
use crate::rng::{RandomSource, PAIRED_DOMAIN};
use crate::table::{Cell, Record};

#[derive(Default)]
struct RunTally {
    failures: u64,
    calls: u128,
    calls_sq: u128,
}

impl Tally for RunTally {
    fn merge(self, o: Self) -> Self {
        Self {
            failures: self.failures + o.failures,
            calls: self.calls + o.calls,
            calls_sq: self.calls_sq + o.calls_sq,
        }
    }
}

/// Failure rate and call counts of one algorithm over a trial plan.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub failure: EstimateWithCI,
    pub calls: EstimateWithCI,
    pub expected_calls: f64,
    pub privacy: PrivacyClaim,
}

/// Runs `algorithm` once per trial on `d`, counting a failure whenever the
/// released value is below `target_m`.
pub fn simulate(
    algorithm: &Algorithm,
    oracle: Oracle<'_>,
    d: &Dataset,
    target_m: f64,
    plan: &TrialPlan,
) -> Result<SimulationReport> {
    if target_m.is_nan() {
        return Err(invalid("target value must not be NaN"));
    }
    let privacy = algorithm.privacy(oracle.declared_privacy(), oracle.arms())?;
    let tally = run_trials(plan, |i| {
        let mut rng = RandomSource::for_trial(plan.master_seed, i);
        let r = algorithm.run(oracle, d, &mut rng)?;
        let calls = r.calls as u128;
        Ok(RunTally {
            failures: (r.best.value() < target_m) as u64,
            calls,
            calls_sq: calls * calls,
        })
    })?;
    Ok(SimulationReport {
        failure: EstimateWithCI::proportion(tally.failures, plan.trials),
        calls: EstimateWithCI::mean(tally.calls, tally.calls_sq, plan.trials),
        expected_calls: algorithm.expected_calls(oracle.arms()),
        privacy,
    })
}

/// Fraction of runs whose released value falls below `target_m`.
pub fn estimate_failure(
    algorithm: &Algorithm,
    oracle: Oracle<'_>,
    d: &Dataset,
    target_m: f64,
    plan: &TrialPlan,
) -> Result<EstimateWithCI> {
    Ok(simulate(algorithm, oracle, d, target_m, plan)?.failure)
}

/// Mean number of oracle calls per run.
pub fn estimate_calls(
    algorithm: &Algorithm,
    oracle: Oracle<'_>,
    d: &Dataset,
    plan: &TrialPlan,
) -> Result<EstimateWithCI> {
    Ok(simulate(algorithm, oracle, d, f64::NEG_INFINITY, plan)?.calls)
}

/// One `simulate` configuration as a CSV row.
#[derive(Clone, Debug)]
pub struct SimulationRow {
    pub algorithm: Algorithm,
    pub arms: usize,
    pub target: f64,
    pub report: SimulationReport,
}

impl Record for SimulationRow {
    fn header() -> Vec<&'static str> {
        vec![
            "algorithm",
            "gamma",
            "c",
            "t",
            "arms",
            "trials",
            "target",
            "failure",
            "failure_hw95",
            "failure_ci",
            "mean_calls",
            "mean_calls_hw95",
            "expected_calls",
            "privacy_epsilon",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        let blank = || Cell::Text(String::new());
        let (gamma, c, t) = match self.algorithm {
            Algorithm::NaiveMax { t } => (blank(), blank(), Cell::Int(t as i64)),
            Algorithm::LiuTalwar { gamma } => (Cell::Real(gamma), blank(), blank()),
            Algorithm::Hybrid { gamma, c } | Algorithm::Metaselect { gamma, c } => {
                (Cell::Real(gamma), Cell::Int(c as i64), blank())
            }
        };
        let r = &self.report;
        vec![
            Cell::Text(self.algorithm.tag().name().into()),
            gamma,
            c,
            t,
            Cell::Int(self.arms as i64),
            Cell::Int(r.failure.trials as i64),
            Cell::Real(self.target),
            Cell::Real(r.failure.point),
            Cell::Real(r.failure.half_width_95),
            Cell::Text(r.failure.method.name().into()),
            Cell::Real(r.calls.point),
            Cell::Real(r.calls.half_width_95),
            Cell::Real(r.expected_calls),
            Cell::Real(r.privacy.epsilon()),
        ]
    }
}

/// Labels with fewer observations than this on either input are excluded
/// from [`estimate_epsilon`].
pub const EPSILON_COUNT_FLOOR: u64 = 50;

/// Empirical privacy loss between two inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonEstimate {
    /// `max |ln(freq(l | d) / freq(l | d2))|` over labels meeting the floor.
    pub epsilon: f64,
    /// Delta-method standard error of the maximizing label's log ratio.
    pub standard_error: f64,
    pub label: Label,
    pub used: Vec<Label>,
    pub excluded: Vec<Label>,
    pub trials: u64,
}

#[derive(Default)]
struct LabelCounts(BTreeMap<Label, [u64; 2]>);

impl Tally for LabelCounts {
    fn merge(mut self, other: Self) -> Self {
        for (label, [a, b]) in other.0 {
            let slot = self.0.entry(label).or_default();
            slot[0] += a;
            slot[1] += b;
        }
        self
    }
}

/// Estimates the privacy loss of `mech` between `d` and `d2` from label
/// frequencies. A sanity check, not a certified bound.
///
/// Returns [`Error::Inconclusive`] when no label reaches the count floor on
/// both inputs.
pub fn estimate_epsilon(mech: &dyn Mechanism, d: &Dataset, d2: &Dataset, plan: &TrialPlan) -> Result<EpsilonEstimate> {
    hamming_distance(d, d2)?;
    let counts = run_trials(plan, |i| {
        let a = mech.sample(d, &mut RandomSource::for_trial(plan.master_seed, i))?;
        let b = mech.sample(d2, &mut RandomSource::derive(plan.master_seed, PAIRED_DOMAIN, i))?;
        let mut c = LabelCounts::default();
        c.0.entry(a.label().clone()).or_default()[0] += 1;
        c.0.entry(b.label().clone()).or_default()[1] += 1;
        Ok(c)
    })?;
    let mut counts = counts.0;
    for label in mech.outcome_space().unwrap_or_default() {
        counts.entry(label).or_default();
    }
    let n = plan.trials as f64;
    let mut best: Option<(f64, f64, Label)> = None;
    let (mut used, mut excluded) = (Vec::new(), Vec::new());
    for (label, [a, b]) in counts {
        if a < EPSILON_COUNT_FLOOR || b < EPSILON_COUNT_FLOOR {
            excluded.push(label);
            continue;
        }
        let (fa, fb) = (a as f64 / n, b as f64 / n);
        let ratio = (fa.ln() - fb.ln()).abs();
        let se = ((1.0 - fa) / (n * fa) + (1.0 - fb) / (n * fb)).sqrt();
        if best.as_ref().is_none_or(|(r, _, _)| ratio > *r) {
            best = Some((ratio, se, label.clone()));
        }
        used.push(label);
    }
    let Some((epsilon, standard_error, label)) = best else {
        return Err(Error::Inconclusive(format!(
            "no label was observed at least {EPSILON_COUNT_FLOOR} times on both inputs in {} trials",
            plan.trials
        )));
    };
    Ok(EpsilonEstimate {
        epsilon,
        standard_error,
        label,
        used,
        excluded,
        trials: plan.trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanism::{coin_mechanism, randomized_response_mechanism};

    fn d(s: &str) -> Dataset {
        s.parse().unwrap()
    }

    #[test]
    fn naive_calls_are_exact() {
        let coin = coin_mechanism(0.5, 1.0, 0.0).unwrap();
        let e = estimate_calls(
            &Algorithm::NaiveMax { t: 7 },
            Oracle::Single(&coin),
            &d("0"),
            &TrialPlan::new(500, 1),
        )
        .unwrap();
        assert_eq!((e.point, e.half_width_95), (7.0, 0.0));
    }

    #[test]
    fn unreachable_target_never_fails() {
        let coin = coin_mechanism(0.5, 1.0, 0.0).unwrap();
        let plan = TrialPlan::new(2000, 3);
        for alg in [Algorithm::NaiveMax { t: 2 }, Algorithm::LiuTalwar { gamma: 0.3 }] {
            let e = estimate_failure(&alg, Oracle::Single(&coin), &d("0"), -1e300, &plan).unwrap();
            assert_eq!(e.point, 0.0);
        }
    }

    #[test]
    fn results_do_not_depend_on_workers() {
        let coin = coin_mechanism(0.5, 1.0, 0.0).unwrap();
        let alg = Algorithm::Hybrid { gamma: 0.01, c: 2 };
        let run = |jobs| {
            simulate(
                &alg,
                Oracle::Single(&coin),
                &d("0"),
                1.0,
                &TrialPlan::new(20_000, 9).with_parallelism(jobs),
            )
            .unwrap()
        };
        let base = run(1);
        for jobs in [2, 8] {
            assert_eq!(run(jobs), base);
        }
    }

    #[test]
    fn epsilon_of_a_coin_is_small() {
        let coin = coin_mechanism(0.3, 1.0, 0.0).unwrap();
        let e = estimate_epsilon(&coin, &d("0"), &d("1"), &TrialPlan::new(100_000, 2)).unwrap();
        assert!(e.epsilon < 0.05, "{e:?}");
        assert!(e.excluded.is_empty());
    }

    #[test]
    fn epsilon_of_randomized_response() {
        let rr = randomized_response_mechanism(3f64.ln(), 0).unwrap();
        let e = estimate_epsilon(&rr, &d("0"), &d("1"), &TrialPlan::new(200_000, 4)).unwrap();
        assert!((e.epsilon - 3f64.ln()).abs() <= 4.0 * e.standard_error, "{e:?}");
    }

    #[test]
    fn rare_labels_are_excluded_and_reported() {
        let coin = coin_mechanism(0.0, 1.0, 0.0).unwrap();
        let e = estimate_epsilon(&coin, &d("0"), &d("1"), &TrialPlan::new(1000, 2)).unwrap();
        assert_eq!(e.excluded, vec![crate::mechanism::HI]);
        assert_eq!(e.epsilon, 0.0);
    }

    #[test]
    fn too_few_trials_is_inconclusive() {
        let rr = randomized_response_mechanism(1.0, 0).unwrap();
        let err = estimate_epsilon(&rr, &d("0"), &d("1"), &TrialPlan::new(20, 2)).unwrap_err();
        assert!(matches!(err, Error::Inconclusive(_)));
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let rr = randomized_response_mechanism(1.0, 0).unwrap();
        assert!(estimate_epsilon(&rr, &d("0"), &d("10"), &TrialPlan::new(20, 2)).is_err());
    }
}
