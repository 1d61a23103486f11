//! Monte Carlo estimation of failure probabilities, call counts and
//! empirical privacy loss, plus the lower-bound experiments.
//!
//! Trial `i` draws from its own substream of the master seed and every
//! aggregate is an integer sum, so estimates are identical for any worker
//! count.

mod estimators;
mod lower_bound;

pub use estimators::{
    estimate_calls, estimate_epsilon, estimate_failure, simulate, EpsilonEstimate, SimulationReport, SimulationRow,
    EPSILON_COUNT_FLOOR,
};
pub use lower_bound::{run_lower_bound_experiment, GadgetVariant, LowerBoundConfig, LowerBoundReport};

use std::fmt;

use rayon::prelude::*;

use crate::error::{invalid, Result};

const Z95: f64 = 1.96;

/// How many trials to run and how to seed them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialPlan {
    pub trials: u64,
    pub master_seed: u64,
    /// Worker threads; 0 lets the thread pool decide.
    pub parallelism: usize,
}

impl TrialPlan {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            parallelism: 1,
        }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("a trial plan needs at least one trial"));
        }
        Ok(())
    }
}

/// Interval construction behind an [`EstimateWithCI`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CiMethod {
    /// `1.96 sqrt(p (1 - p) / n)`.
    Wald,
    /// No events (or only events) observed: the half-width is the exact
    /// one-sided 95% binomial bound `1 - 0.05^{1/n}`.
    ExactBinomialBound,
    /// `1.96 s / sqrt(n)` with the sample standard deviation `s`.
    Normal,
}

impl CiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Wald => "wald",
            Self::ExactBinomialBound => "exact_bound",
            Self::Normal => "normal",
        }
    }
}

/// A point estimate with a 95% confidence half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateWithCI {
    pub point: f64,
    pub half_width_95: f64,
    pub trials: u64,
    pub method: CiMethod,
}

impl EstimateWithCI {
    /// Proportion `hits / trials`.
    pub fn proportion(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let point = hits as f64 / n;
        if hits == 0 || hits == trials {
            return Self {
                point,
                half_width_95: 1.0 - 0.05f64.powf(1.0 / n),
                trials,
                method: CiMethod::ExactBinomialBound,
            };
        }
        Self {
            point,
            half_width_95: Z95 * (point * (1.0 - point) / n).sqrt(),
            trials,
            method: CiMethod::Wald,
        }
    }

    /// Mean of `trials` non-negative integer observations given their sum
    /// and sum of squares.
    pub fn mean(sum: u128, sum_sq: u128, trials: u64) -> Self {
        let n = trials as u128;
        let point = sum as f64 / trials as f64;
        let half_width_95 = if trials < 2 {
            0.0
        } else {
            // n * sum_sq >= sum^2 by Cauchy-Schwarz, so this is exact and non-negative.
            let centered = n * sum_sq - sum * sum;
            let variance = centered as f64 / (trials as f64 * (trials - 1) as f64);
            Z95 * (variance / trials as f64).sqrt()
        };
        Self {
            point,
            half_width_95,
            trials,
            method: CiMethod::Normal,
        }
    }

    /// Binomial standard error of a proportion estimate.
    pub fn standard_error(&self) -> f64 {
        match self.method {
            CiMethod::ExactBinomialBound => 0.0,
            _ => self.half_width_95 / Z95,
        }
    }

    pub fn lower(&self) -> f64 {
        self.point - self.half_width_95
    }

    pub fn upper(&self) -> f64 {
        self.point + self.half_width_95
    }

    /// Whether `value` lies within `k` standard errors of the point; for
    /// exact-bound estimates, whether it lies inside the bound.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        match self.method {
            CiMethod::ExactBinomialBound => (value - self.point).abs() <= self.half_width_95,
            _ => (value - self.point).abs() <= k * self.standard_error(),
        }
    }
}

impl fmt::Display for EstimateWithCI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.method {
            CiMethod::ExactBinomialBound if self.point == 0.0 => {
                write!(f, "0 (95% upper bound {:.3e}, n={})", self.half_width_95, self.trials)
            }
            _ => write!(f, "{:.6} ± {:.2e} (n={})", self.point, self.half_width_95, self.trials),
        }
    }
}

/// Order-independent per-trial aggregate.
pub(crate) trait Tally: Default + Send {
    fn merge(self, other: Self) -> Self;
}

/// Runs `per_trial(i)` for every trial index and merges the results.
pub(crate) fn run_trials<T, F>(plan: &TrialPlan, per_trial: F) -> Result<T>
where
    T: Tally,
    F: Fn(u64) -> Result<T> + Sync,
{
    plan.validate()?;
    if plan.parallelism == 1 {
        let mut acc = T::default();
        for i in 0..plan.trials {
            acc = acc.merge(per_trial(i)?);
        }
        return Ok(acc);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism)
        .build()
        .map_err(|e| invalid(format!("cannot start {} workers: {e}", plan.parallelism)))?;
    pool.install(|| {
        (0..plan.trials)
            .into_par_iter()
            .map(&per_trial)
            .try_reduce(T::default, |a, b| Ok(a.merge(b)))
    })
}
