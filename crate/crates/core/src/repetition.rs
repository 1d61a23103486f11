//! Private boosting algorithms.
//!
//! Every algorithm releases one of the outcomes it drew from the oracle: the
//! one with the highest value, earliest draw first on ties.
//!
//! * [`naive_max`] runs the mechanism `T` times.
//! * [`liu_talwar`] runs it a geometric number of times with mean `1/gamma`.
//! * [`hybrid`] keeps the best of `c` random-stopping runs at inner target
//!   `gamma^{1/c}`.
//! * [`metaselect`] applies the hybrid to the arm-uniform mixture of an
//!   indexed family at inner target `gamma^{1/c} / K`.

use std::fmt;

use rand_distr::{Distribution, Geometric};

use crate::accounting::compose_simple;
use crate::dataset::Dataset;
use crate::error::{check_open_unit, check_range, invalid, Result};
use crate::mechanism::{ArmUniform, IndexedMechanism, Mechanism, SingleArm};
use crate::outcome::{Label, Outcome};
use crate::privacy::PrivacyClaim;
use crate::rng::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmTag {
    NaiveMax,
    LiuTalwar,
    Hybrid,
    Metaselect,
}

impl AlgorithmTag {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NaiveMax => "naive",
            Self::LiuTalwar => "lt",
            Self::Hybrid => "hybrid",
            Self::Metaselect => "metaselect",
        }
    }
}

impl fmt::Display for AlgorithmTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one boosting run.
#[derive(Clone, Debug, PartialEq)]
pub struct RepetitionReport {
    pub best: Outcome,
    /// Oracle invocations made by this run.
    pub calls: u64,
    pub privacy: PrivacyClaim,
    pub algorithm: AlgorithmTag,
}

/// Sees every oracle outcome in draw order.
pub trait Probe {
    fn observe(&mut self, outcome: &Outcome);
}

impl Probe for () {
    fn observe(&mut self, _: &Outcome) {}
}

/// Records every outcome drawn during a run.
#[derive(Clone, Debug, Default)]
pub struct Transcript(pub Vec<Outcome>);

impl Probe for Transcript {
    fn observe(&mut self, outcome: &Outcome) {
        self.0.push(outcome.clone());
    }
}

impl Transcript {
    pub fn max_value(&self) -> Option<f64> {
        self.0.iter().map(Outcome::value).reduce(f64::max)
    }

    pub fn saw(&self, label: &Label) -> bool {
        self.0.iter().any(|o| o.label() == label)
    }
}

/// Running argmax with strict improvement, so the earliest maximum wins.
#[derive(Default)]
struct Selection {
    best: Option<Outcome>,
    calls: u64,
}

impl Selection {
    fn offer(&mut self, outcome: Outcome) {
        if self.best.as_ref().is_none_or(|b| outcome.value() > b.value()) {
            self.best = Some(outcome);
        }
    }

    fn draw(&mut self, mech: &dyn Mechanism, d: &Dataset, rng: &mut RandomSource, probe: &mut dyn Probe) -> Result<()> {
        let o = mech.sample(d, rng)?;
        probe.observe(&o);
        self.calls += 1;
        self.offer(o);
        Ok(())
    }

    fn absorb(&mut self, inner: Selection) {
        self.calls += inner.calls;
        if let Some(o) = inner.best {
            self.offer(o);
        }
    }

    fn finish(self, privacy: PrivacyClaim, algorithm: AlgorithmTag) -> RepetitionReport {
        RepetitionReport {
            best: self.best.expect("every algorithm makes at least one call"),
            calls: self.calls,
            privacy,
            algorithm,
        }
    }
}

/// Stopping count for random stopping: `Pr[N = n] = gamma (1 - gamma)^{n-1}`, `n >= 1`.
fn stopping_count(gamma: f64, rng: &mut RandomSource) -> Result<u64> {
    let geo = Geometric::new(gamma).map_err(|e| invalid(format!("geometric({gamma}): {e}")))?;
    Ok(geo.sample(rng).saturating_add(1))
}

fn random_stopping(
    mech: &dyn Mechanism,
    d: &Dataset,
    gamma: f64,
    rng: &mut RandomSource,
    probe: &mut dyn Probe,
) -> Result<Selection> {
    let n = stopping_count(gamma, rng)?;
    let mut sel = Selection::default();
    for _ in 0..n {
        sel.draw(mech, d, rng, probe)?;
    }
    Ok(sel)
}

/// Claimed guarantee of one random-stopping run at target `gamma`:
/// `3 eps`-DP for an `eps`-DP mechanism. For `(eps, delta)` input the delta
/// term scales with the expected number of calls, `delta / gamma`.
pub fn liu_talwar_privacy(base: PrivacyClaim, gamma: f64) -> Result<PrivacyClaim> {
    check_open_unit("gamma", gamma)?;
    match base {
        PrivacyClaim::Pure { epsilon } => Ok(PrivacyClaim::Pure { epsilon: 3.0 * epsilon }),
        PrivacyClaim::Approx { epsilon, delta } => Ok(PrivacyClaim::Approx {
            epsilon: 3.0 * epsilon,
            delta: (delta / gamma).min(1.0),
        }),
        PrivacyClaim::Renyi { .. } => Err(invalid("random stopping accounting for Rényi claims is not supported")),
    }
}

/// A boosting algorithm with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    NaiveMax { t: u64 },
    LiuTalwar { gamma: f64 },
    Hybrid { gamma: f64, c: u32 },
    Metaselect { gamma: f64, c: u32 },
}

/// What the algorithm queries: a single mechanism or an indexed family.
#[derive(Clone, Copy)]
pub enum Oracle<'a> {
    Single(&'a dyn Mechanism),
    Family(&'a dyn IndexedMechanism),
}

impl Oracle<'_> {
    pub fn declared_privacy(&self) -> PrivacyClaim {
        match self {
            Oracle::Single(m) => m.declared_privacy(),
            Oracle::Family(f) => f.declared_privacy(),
        }
    }

    pub fn arms(&self) -> usize {
        match self {
            Oracle::Single(_) => 1,
            Oracle::Family(f) => f.arms(),
        }
    }
}

impl Algorithm {
    pub fn tag(&self) -> AlgorithmTag {
        match self {
            Self::NaiveMax { .. } => AlgorithmTag::NaiveMax,
            Self::LiuTalwar { .. } => AlgorithmTag::LiuTalwar,
            Self::Hybrid { .. } => AlgorithmTag::Hybrid,
            Self::Metaselect { .. } => AlgorithmTag::Metaselect,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::NaiveMax { t: 0 } => Err(invalid("naive repetition needs T >= 1")),
            Self::NaiveMax { .. } => Ok(()),
            Self::LiuTalwar { gamma } => check_open_unit("gamma", gamma),
            Self::Hybrid { gamma, c } | Self::Metaselect { gamma, c } => {
                check_open_unit("gamma", gamma)?;
                if c == 0 {
                    return Err(invalid("number of rounds c must be at least 1"));
                }
                Ok(())
            }
        }
    }

    /// Random-stopping target of each inner round, or `None` for naive repetition.
    pub fn inner_target(&self, arms: usize) -> Option<f64> {
        match *self {
            Self::NaiveMax { .. } => None,
            Self::LiuTalwar { gamma } => Some(gamma),
            Self::Hybrid { gamma, c } => Some(gamma.powf(1.0 / c as f64)),
            Self::Metaselect { gamma, c } => Some(gamma.powf(1.0 / c as f64) / arms as f64),
        }
    }

    fn rounds(&self) -> u64 {
        match *self {
            Self::NaiveMax { t } => t,
            Self::LiuTalwar { .. } => 1,
            Self::Hybrid { c, .. } | Self::Metaselect { c, .. } => c as u64,
        }
    }

    /// Exact expected number of oracle calls.
    pub fn expected_calls(&self, arms: usize) -> f64 {
        match self.inner_target(arms) {
            None => self.rounds() as f64,
            Some(target) => self.rounds() as f64 / target,
        }
    }

    /// Exact probability that every draw of a run is a failure, when each
    /// oracle call fails independently with probability `per_draw_failure`.
    ///
    /// For a two-valued oracle this is the probability that the run releases
    /// the low value. `arms` only affects metaselection's inner target.
    pub fn all_draws_fail(&self, per_draw_failure: f64, arms: usize) -> Result<f64> {
        self.validate()?;
        check_range("per_draw_failure", per_draw_failure, 0.0, 1.0)?;
        let f = per_draw_failure;
        let per_round = match self.inner_target(arms) {
            None => f,
            Some(g) => g * f / (1.0 - (1.0 - g) * f),
        };
        Ok(per_round.powi(self.rounds().min(i32::MAX as u64) as i32))
    }

    /// Composed guarantee for a run against an oracle declaring `base`.
    pub fn privacy(&self, base: PrivacyClaim, arms: usize) -> Result<PrivacyClaim> {
        self.validate()?;
        match self.inner_target(arms) {
            None => compose_simple(base, self.rounds()),
            Some(target) => compose_simple(liu_talwar_privacy(base, target)?, self.rounds()),
        }
    }

    /// Factor by which the algorithm multiplies a pure base epsilon.
    pub fn privacy_overhead(&self) -> f64 {
        match self.privacy(PrivacyClaim::Pure { epsilon: 1.0 }, 1) {
            Ok(claim) => claim.epsilon(),
            Err(_) => f64::NAN,
        }
    }

    pub fn run(&self, oracle: Oracle<'_>, d: &Dataset, rng: &mut RandomSource) -> Result<RepetitionReport> {
        self.run_probed(oracle, d, rng, &mut ())
    }

    /// Like [`Algorithm::run`], reporting every drawn outcome to `probe`.
    ///
    /// Single-mechanism algorithms given a family run against its
    /// arm-uniform mixture; metaselection given a single mechanism treats it
    /// as a one-armed family.
    pub fn run_probed(
        &self,
        oracle: Oracle<'_>,
        d: &Dataset,
        rng: &mut RandomSource,
        probe: &mut dyn Probe,
    ) -> Result<RepetitionReport> {
        self.validate()?;
        match (self, oracle) {
            (Self::Metaselect { .. }, Oracle::Single(m)) => {
                self.run_probed(Oracle::Family(&SingleArm(m)), d, rng, probe)
            }
            (Self::Metaselect { .. }, Oracle::Family(f)) => {
                let mixture = ArmUniform::new(f)?;
                let privacy = self.privacy(f.declared_privacy(), f.arms())?;
                let sel = self.select(&mixture, d, f.arms(), rng, probe)?;
                Ok(sel.finish(privacy, self.tag()))
            }
            (_, Oracle::Family(f)) => {
                let mixture = ArmUniform::new(f)?;
                self.run_probed(Oracle::Single(&mixture), d, rng, probe)
            }
            (_, Oracle::Single(m)) => {
                let privacy = self.privacy(m.declared_privacy(), 1)?;
                let sel = self.select(m, d, 1, rng, probe)?;
                Ok(sel.finish(privacy, self.tag()))
            }
        }
    }

    fn select(
        &self,
        mech: &dyn Mechanism,
        d: &Dataset,
        arms: usize,
        rng: &mut RandomSource,
        probe: &mut dyn Probe,
    ) -> Result<Selection> {
        let mut sel = Selection::default();
        match self.inner_target(arms) {
            None => {
                for _ in 0..self.rounds() {
                    sel.draw(mech, d, rng, probe)?;
                }
            }
            Some(target) => {
                for _ in 0..self.rounds() {
                    sel.absorb(random_stopping(mech, d, target, rng, probe)?);
                }
            }
        }
        Ok(sel)
    }
}

/// Best of exactly `t` runs of `mech` on `d`; `(t eps, t delta)`-DP.
pub fn naive_max(mech: &dyn Mechanism, d: &Dataset, t: u64, rng: &mut RandomSource) -> Result<RepetitionReport> {
    Algorithm::NaiveMax { t }.run(Oracle::Single(mech), d, rng)
}

/// Random stopping with `Geometric(gamma)` many runs; `3 eps`-DP.
pub fn liu_talwar(mech: &dyn Mechanism, d: &Dataset, gamma: f64, rng: &mut RandomSource) -> Result<RepetitionReport> {
    Algorithm::LiuTalwar { gamma }.run(Oracle::Single(mech), d, rng)
}

/// Best of `c` random-stopping runs at target `gamma^{1/c}`; `3 c eps`-DP.
pub fn hybrid(
    mech: &dyn Mechanism,
    d: &Dataset,
    gamma: f64,
    c: u32,
    rng: &mut RandomSource,
) -> Result<RepetitionReport> {
    Algorithm::Hybrid { gamma, c }.run(Oracle::Single(mech), d, rng)
}

/// Hybrid boosting of the arm-uniform mixture of `family`, with inner target
/// `gamma^{1/c} / K`; `3 c eps`-DP.
pub fn metaselect(
    family: &dyn IndexedMechanism,
    d: &Dataset,
    gamma: f64,
    c: u32,
    rng: &mut RandomSource,
) -> Result<RepetitionReport> {
    if family.arms() == 0 {
        return Err(invalid("metaselection needs at least one arm"));
    }
    Algorithm::Metaselect { gamma, c }.run(Oracle::Family(family), d, rng)
}

/// A boosting algorithm bound to its oracle, usable wherever a mechanism is
/// expected (for example by the empirical privacy estimator).
pub struct Boosted<'a> {
    algorithm: Algorithm,
    oracle: Oracle<'a>,
    privacy: PrivacyClaim,
}

impl<'a> Boosted<'a> {
    pub fn new(algorithm: Algorithm, oracle: Oracle<'a>) -> Result<Self> {
        let privacy = algorithm.privacy(oracle.declared_privacy(), oracle.arms())?;
        Ok(Self {
            algorithm,
            oracle,
            privacy,
        })
    }
}

impl Mechanism for Boosted<'_> {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        Ok(self.algorithm.run(self.oracle, d, rng)?.best)
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.privacy
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        match self.oracle {
            Oracle::Single(m) => m.outcome_space(),
            Oracle::Family(f) => f.outcome_space(),
        }
    }
}
