use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{run_trials, EstimateWithCI, Tally, TrialPlan};
use crate::adversarial::{
    build_ball, build_hyper_ball, build_two_point, BallGadget, HyperBallGadget, TwoPointGadget, R, R_PRIME,
};
use crate::dataset::{hamming_distance, Dataset};
use crate::error::{invalid, Error, Result};
use crate::manifest::Manifest;
use crate::mechanism::{IndexedMechanism, Mechanism};
use crate::repetition::{Algorithm, Oracle};
use crate::rng::{RandomSource, GADGET_DOMAIN, PAIRED_DOMAIN, PROBE_DOMAIN};
use crate::table::{Cell, Record};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetVariant {
    TwoPoint,
    Ball,
    HyperBall,
}

impl GadgetVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::TwoPoint => "two_point",
            Self::Ball => "ball",
            Self::HyperBall => "hyper_ball",
        }
    }
}

impl fmt::Display for GadgetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_point" => Ok(Self::TwoPoint),
            "ball" => Ok(Self::Ball),
            "hyper_ball" => Ok(Self::HyperBall),
            other => Err(invalid(format!(
                "unknown gadget variant {other:?} (expected two_point, ball or hyper_ball)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundConfig {
    pub variant: GadgetVariant,
    pub epsilon: f64,
    pub t_budget: f64,
    /// Number of hyperparameter arms; only the hyper_ball variant uses it.
    pub arms: usize,
    pub algorithm: Algorithm,
    pub gadget_seed: u64,
    /// Draw a fresh hidden center (and good arm) for every trial.
    pub resample_center: bool,
}

impl LowerBoundConfig {
    /// Expected-call allowance: `T`, or `T K` for the hyperparameter gadget.
    pub fn call_budget(&self) -> f64 {
        match self.variant {
            GadgetVariant::HyperBall => self.t_budget * self.arms as f64,
            _ => self.t_budget,
        }
    }

    fn oracle_arms(&self) -> usize {
        match self.variant {
            GadgetVariant::HyperBall => self.arms,
            _ => 1,
        }
    }
}

/// Outcome of a lower-bound experiment.
///
/// "Failure" means the algorithm released `(r', 0)`. The near input is
/// `d0 = 0^dim`; the far input is the point whose median is 1 (`d1` for the
/// two-point gadget, the hidden center otherwise).
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundReport {
    pub config: LowerBoundConfig,
    pub plan: TrialPlan,
    pub radius: usize,
    pub q: f64,
    pub dim: usize,
    pub expected_calls: f64,
    pub budget_exceeded: bool,
    /// `Pr[(r', 0)]` at `d0`; at least 1/4 for any algorithm within budget.
    pub near_failure: EstimateWithCI,
    /// The same, restricted to runs making at most twice the budget in calls.
    pub near_failure_within_2t: EstimateWithCI,
    /// `Pr[(r', 0)]` at the far input.
    pub far_failure: EstimateWithCI,
    pub privacy_overhead: f64,
    /// `e^{-2 c eps dist(d0, far)} / 8`, the group-privacy floor on `far_failure`.
    pub floor: f64,
    /// Calls made per run at `d0`.
    pub near_calls: EstimateWithCI,
    /// Exact `(near, far)` failure probabilities of the simulated runs.
    pub closed_form: (f64, f64),
    /// `(r, 1)` outcomes seen when probing non-good arms at random inputs.
    pub off_arm_successes: Option<u64>,
}

impl LowerBoundReport {
    /// `near_failure >= 1/4 - CI`; not asserted when the budget is exceeded.
    pub fn near_check(&self) -> Option<bool> {
        (!self.budget_exceeded).then_some(self.near_failure.point >= 0.25 - self.near_failure.half_width_95)
    }

    /// `far_failure >= floor - CI`.
    pub fn floor_check(&self) -> bool {
        self.far_failure.point >= self.floor - self.far_failure.half_width_95
    }

    pub fn off_arm_check(&self) -> Option<bool> {
        self.off_arm_successes.map(|n| n == 0)
    }

    pub fn passed(&self) -> bool {
        self.near_check().unwrap_or(true) && self.floor_check() && self.off_arm_check().unwrap_or(true)
    }

    pub fn to_manifest(&self) -> Manifest {
        let mut m = Manifest::new();
        let c = &self.config;
        m.set("variant", c.variant)
            .set("epsilon", c.epsilon)
            .set("t_budget", c.t_budget)
            .set("arms", c.arms);
        algorithm_entries(&c.algorithm, &mut m);
        m.set("gadget_seed", c.gadget_seed)
            .set("resample_center", c.resample_center)
            .set("trials", self.plan.trials)
            .set("seed", self.plan.master_seed)
            .set("radius", self.radius)
            .set("q", self.q)
            .set("dim", self.dim)
            .set("expected_calls", self.expected_calls)
            .set("call_budget", c.call_budget())
            .set("budget_exceeded", self.budget_exceeded)
            .set("near_failure", self.near_failure.point)
            .set("near_failure_hw95", self.near_failure.half_width_95)
            .set("near_failure_within_2t", self.near_failure_within_2t.point)
            .set("far_failure", self.far_failure.point)
            .set("far_failure_hw95", self.far_failure.half_width_95)
            .set("privacy_overhead", self.privacy_overhead)
            .set("floor", self.floor)
            .set("mean_calls", self.near_calls.point)
            .set("mean_calls_hw95", self.near_calls.half_width_95)
            .set("closed_form_near", self.closed_form.0)
            .set("closed_form_far", self.closed_form.1);
        if let Some(n) = self.off_arm_successes {
            m.set("off_arm_successes", n);
        }
        m.set("passed", self.passed());
        m
    }
}

fn algorithm_entries(alg: &Algorithm, m: &mut Manifest) {
    m.set("alg", alg.tag());
    match *alg {
        Algorithm::NaiveMax { t } => {
            m.set("t", t);
        }
        Algorithm::LiuTalwar { gamma } => {
            m.set("gamma", gamma);
        }
        Algorithm::Hybrid { gamma, c } | Algorithm::Metaselect { gamma, c } => {
            m.set("gamma", gamma).set("c", c);
        }
    }
}

fn verdict(check: Option<bool>) -> &'static str {
    match check {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

impl fmt::Display for LowerBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "{} gadget (eps={}, T={}, radius={}, dim={}) vs {} over {} trials",
            c.variant,
            c.epsilon,
            c.t_budget,
            self.radius,
            self.dim,
            c.algorithm.tag(),
            self.plan.trials
        )?;
        if self.budget_exceeded {
            writeln!(
                f,
                "budget exceeded: expected calls {} > {}, no near-input assertion",
                self.expected_calls,
                c.call_budget()
            )?;
        }
        writeln!(
            f,
            "(a) Pr[(r',0) at d0] = {} [>= 1/4: {}]; within 2x budget: {}; exact {:.6}",
            self.near_failure,
            verdict(self.near_check()),
            self.near_failure_within_2t,
            self.closed_form.0
        )?;
        writeln!(
            f,
            "(b) Pr[(r',0) at far input] = {}; exact {:.6e}",
            self.far_failure, self.closed_form.1
        )?;
        writeln!(
            f,
            "(c) floor e^(-2 c eps dist)/8 = {:.6e} with c = {} [(b) >= (c) - CI: {}]",
            self.floor,
            self.privacy_overhead,
            verdict(Some(self.floor_check()))
        )?;
        write!(f, "(d) mean calls = {}", self.near_calls)?;
        if let Some(n) = self.off_arm_successes {
            write!(
                f,
                "\noff-arm probe: {n} (r,1) outcomes [{}]",
                verdict(self.off_arm_check())
            )?;
        }
        Ok(())
    }
}

impl Record for LowerBoundReport {
    fn header() -> Vec<&'static str> {
        vec![
            "variant",
            "algorithm",
            "epsilon",
            "t_budget",
            "arms",
            "trials",
            "radius",
            "q",
            "dim",
            "expected_calls",
            "budget_exceeded",
            "near_failure",
            "near_failure_hw95",
            "near_failure_within_2t",
            "far_failure",
            "far_failure_hw95",
            "floor",
            "closed_form_near",
            "closed_form_far",
            "mean_calls",
            "mean_calls_hw95",
            "off_arm_successes",
            "passed",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        let c = &self.config;
        vec![
            Cell::Text(c.variant.name().into()),
            Cell::Text(c.algorithm.tag().name().into()),
            Cell::Real(c.epsilon),
            Cell::Real(c.t_budget),
            Cell::Int(c.arms as i64),
            Cell::Int(self.plan.trials as i64),
            Cell::Int(self.radius as i64),
            Cell::Real(self.q),
            Cell::Int(self.dim as i64),
            Cell::Real(self.expected_calls),
            Cell::Text(self.budget_exceeded.to_string()),
            Cell::Real(self.near_failure.point),
            Cell::Real(self.near_failure.half_width_95),
            Cell::Real(self.near_failure_within_2t.point),
            Cell::Real(self.far_failure.point),
            Cell::Real(self.far_failure.half_width_95),
            Cell::Real(self.floor),
            Cell::Real(self.closed_form.0),
            Cell::Real(self.closed_form.1),
            Cell::Real(self.near_calls.point),
            Cell::Real(self.near_calls.half_width_95),
            self.off_arm_successes
                .map_or(Cell::Text(String::new()), |n| Cell::Int(n as i64)),
            Cell::Text(self.passed().to_string()),
        ]
    }
}

#[derive(Default)]
struct LbTally {
    near_failures: u64,
    near_calls: u128,
    near_calls_sq: u128,
    within: u64,
    within_failures: u64,
    far_failures: u64,
    off_arm_successes: u64,
}

impl Tally for LbTally {
    fn merge(self, o: Self) -> Self {
        Self {
            near_failures: self.near_failures + o.near_failures,
            near_calls: self.near_calls + o.near_calls,
            near_calls_sq: self.near_calls_sq + o.near_calls_sq,
            within: self.within + o.within,
            within_failures: self.within_failures + o.within_failures,
            far_failures: self.far_failures + o.far_failures,
            off_arm_successes: self.off_arm_successes + o.off_arm_successes,
        }
    }
}

enum Gadget {
    TwoPoint(TwoPointGadget),
    Ball(BallGadget),
    HyperBall(HyperBallGadget),
}

impl Gadget {
    fn build(c: &LowerBoundConfig) -> Result<Self> {
        Ok(match c.variant {
            GadgetVariant::TwoPoint => Gadget::TwoPoint(build_two_point(c.epsilon, c.t_budget)?),
            GadgetVariant::Ball => Gadget::Ball(build_ball(c.epsilon, c.t_budget, c.gadget_seed)?),
            GadgetVariant::HyperBall => {
                Gadget::HyperBall(build_hyper_ball(c.epsilon, c.t_budget, c.arms, c.gadget_seed)?)
            }
        })
    }

    fn ball(&self) -> Option<&BallGadget> {
        match self {
            Gadget::TwoPoint(_) => None,
            Gadget::Ball(b) => Some(b),
            Gadget::HyperBall(h) => Some(h.inner()),
        }
    }

    fn radius(&self) -> usize {
        match self {
            Gadget::TwoPoint(g) => g.radius(),
            _ => self.ball().expect("ball variant").radius(),
        }
    }

    fn q(&self) -> f64 {
        match self {
            Gadget::TwoPoint(g) => g.q(),
            _ => self.ball().expect("ball variant").q(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Gadget::TwoPoint(g) => g.radius(),
            _ => self.ball().expect("ball variant").dim(),
        }
    }

    /// This trial's copy: a fresh center (and good arm) drawn from the gadget
    /// seed when resampling.
    fn for_trial(&self, c: &LowerBoundConfig, trial: u64) -> Result<Gadget> {
        let mut rng = RandomSource::derive(c.gadget_seed, GADGET_DOMAIN, trial + 1);
        Ok(match self {
            Gadget::TwoPoint(g) => Gadget::TwoPoint(g.clone()),
            Gadget::Ball(b) => Gadget::Ball(b.with_center(b.random_center(&mut rng))?),
            Gadget::HyperBall(h) => {
                let center = h.inner().random_center(&mut rng);
                let k_star = rng.random_range(0..c.arms);
                Gadget::HyperBall(HyperBallGadget::new(h.inner().with_center(center)?, k_star, c.arms)?)
            }
        })
    }

    fn oracle(&self) -> Oracle<'_> {
        match self {
            Gadget::TwoPoint(g) => Oracle::Single(g as &dyn Mechanism),
            Gadget::Ball(b) => Oracle::Single(b as &dyn Mechanism),
            Gadget::HyperBall(h) => Oracle::Family(h as &dyn IndexedMechanism),
        }
    }

    fn far_input(&self) -> &Dataset {
        match self {
            Gadget::TwoPoint(g) => g.d1(),
            _ => self.ball().expect("ball variant").center(),
        }
    }
}

/// Per-draw failure of the oracle the algorithm actually queries: for the
/// hyperparameter gadget, the arm-uniform mixture in which every arm but
/// one always fails.
fn mixed_failure(arm_failure: f64, arms: usize) -> f64 {
    let k = arms as f64;
    (arm_failure + (k - 1.0)) / k
}

fn closed_form(gadget: &Gadget, c: &LowerBoundConfig, d0: &Dataset) -> Result<(f64, f64)> {
    let arms = c.oracle_arms();
    let run = |f: f64| c.algorithm.all_draws_fail(mixed_failure(f, arms), arms);
    let far = run(gadget.q())?;
    let near = match gadget {
        Gadget::TwoPoint(g) => run(g.path().failure(g.radius()))?,
        _ if !c.resample_center => {
            let b = gadget.ball().expect("ball variant");
            run(b.path().failure(hamming_distance(d0, b.center())?))?
        }
        _ => {
            // Average over the binomial distance of a uniform center from d0.
            let b = gadget.ball().expect("ball variant");
            let n = b.dim();
            let ln_half_power = -(n as f64) * std::f64::consts::LN_2;
            let mut ln_binom = 0.0;
            let mut total = 0.0;
            for t in 0..=n {
                if t > 0 {
                    ln_binom += ((n - t + 1) as f64).ln() - (t as f64).ln();
                }
                total += (ln_binom + ln_half_power).exp() * run(b.path().failure(t))?;
            }
            total
        }
    };
    Ok((near, far))
}

/// Runs `config.algorithm` against the configured gadget at `d0` and at the
/// far input, checking the lower-bound proofs' probability steps.
pub fn run_lower_bound_experiment(config: &LowerBoundConfig, plan: &TrialPlan) -> Result<LowerBoundReport> {
    plan.validate()?;
    config.algorithm.validate()?;
    if config.variant == GadgetVariant::HyperBall && config.arms == 0 {
        return Err(invalid("hyper_ball needs at least one arm"));
    }
    let base = Gadget::build(config)?;
    let d0 = Dataset::zeros(base.dim())?;
    let budget = config.call_budget();
    let within_limit = (2.0 * budget).floor() as u64;
    let probing = config.variant == GadgetVariant::HyperBall && config.arms > 1;
    let fixed = !config.resample_center;

    let tally = run_trials(plan, |i| {
        let owned;
        let gadget = if fixed {
            &base
        } else {
            owned = base.for_trial(config, i)?;
            &owned
        };
        let oracle = gadget.oracle();
        let near = config
            .algorithm
            .run(oracle, &d0, &mut RandomSource::for_trial(plan.master_seed, i))?;
        let mut far_rng = RandomSource::derive(plan.master_seed, PAIRED_DOMAIN, i);
        let far = config.algorithm.run(oracle, gadget.far_input(), &mut far_rng)?;
        let near_failed = near.best.label() == &R_PRIME;
        let calls = near.calls as u128;
        let within = near.calls <= within_limit;
        let mut off_arm_successes = 0;
        if probing {
            if let Gadget::HyperBall(h) = gadget {
                let mut rng = RandomSource::derive(plan.master_seed, PROBE_DOMAIN, i);
                let u = h.inner().random_center(&mut rng);
                let mut j = rng.random_range(0..config.arms - 1);
                if j >= h.k_star() {
                    j += 1;
                }
                off_arm_successes = (h.sample_arm(&u, j, &mut rng)?.label() == &R) as u64;
            }
        }
        Ok(LbTally {
            near_failures: near_failed as u64,
            near_calls: calls,
            near_calls_sq: calls * calls,
            within: within as u64,
            within_failures: (within && near_failed) as u64,
            far_failures: (far.best.label() == &R_PRIME) as u64,
            off_arm_successes,
        })
    })?;

    let near_calls = EstimateWithCI::mean(tally.near_calls, tally.near_calls_sq, plan.trials);
    let expected_calls = config.algorithm.expected_calls(config.oracle_arms());
    let budget_exceeded = expected_calls > budget * (1.0 + 1e-12) || near_calls.lower() > budget;
    let near_failure_within_2t = if tally.within == 0 {
        EstimateWithCI {
            point: f64::NAN,
            half_width_95: f64::NAN,
            trials: 0,
            method: super::CiMethod::Wald,
        }
    } else {
        EstimateWithCI::proportion(tally.within_failures, tally.within)
    };
    let privacy_overhead = config.algorithm.privacy_overhead();
    let floor = (-2.0 * privacy_overhead * config.epsilon * base.dim() as f64).exp() / 8.0;
    Ok(LowerBoundReport {
        config: config.clone(),
        plan: *plan,
        radius: base.radius(),
        q: base.q(),
        dim: base.dim(),
        expected_calls,
        budget_exceeded,
        near_failure: EstimateWithCI::proportion(tally.near_failures, plan.trials),
        near_failure_within_2t,
        far_failure: EstimateWithCI::proportion(tally.far_failures, plan.trials),
        privacy_overhead,
        floor,
        near_calls,
        closed_form: closed_form(&base, config, &d0)?,
        off_arm_successes: probing.then_some(tally.off_arm_successes),
    })
}
