//! Private repetition and hyperparameter tuning.
//!
//! Boosting algorithms that raise a private mechanism's success probability
//! to `1 - gamma` ([`repetition`]), the privacy accounting behind them
//! ([`accounting`]), the adversarial mechanisms from the matching lower
//! bounds ([`adversarial`]) and a reproducible Monte Carlo harness that
//! checks both sides ([`harness`]).
//!
//! ```
//! use privrep_core::{coin_mechanism, liu_talwar, Dataset, RandomSource};
//!
//! let coin = coin_mechanism(0.5, 1.0, 0.0)?;
//! let d = Dataset::zeros(8)?;
//! let report = liu_talwar(&coin, &d, 0.01, &mut RandomSource::seeded(7))?;
//! assert!(report.calls >= 1);
//! assert_eq!(report.privacy.epsilon(), 0.0);
//! # Ok::<(), privrep_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accounting;
pub mod adversarial;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod manifest;
pub mod mechanism;
pub mod outcome;
pub mod privacy;
pub mod repetition;
pub mod rng;
pub mod table;

pub use accounting::{
    compose_advanced, compose_simple, frontier_sweep, group_privacy_approx, group_privacy_pure, group_privacy_renyi,
    lb_privacy_overhead, lb_privacy_overhead_renyi, renyi_frontier, renyi_simplified_floor, ub_hybrid, FrontierQuery,
    FrontierRow, LowerBoundVariant,
};
pub use adversarial::{
    ball_mass_fraction, build_ball, build_hyper_ball, build_two_point, verify_dp_exhaustive, BallGadget,
    HyperBallGadget, TwoPointGadget,
};
pub use dataset::{hamming_distance, Dataset};
pub use error::{Error, Result};
pub use harness::{
    estimate_calls, estimate_epsilon, estimate_failure, run_lower_bound_experiment, EstimateWithCI, GadgetVariant,
    LowerBoundConfig, TrialPlan,
};
pub use manifest::Manifest;
pub use mechanism::{
    coin_mechanism, randomized_response_mechanism, ExactIndexedMechanism, ExactMechanism, IndexedMechanism, Mechanism,
    MechanismFamily,
};
pub use outcome::{Label, Outcome};
pub use privacy::PrivacyClaim;
pub use repetition::{hybrid, liu_talwar, metaselect, naive_max, Algorithm, Oracle, RepetitionReport};
pub use rng::RandomSource;
pub use table::write_csv;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/mechanisms.md")]
    mod mechanisms {}
    #[doc = include_str!("../../../book/src/accounting.md")]
    mod accounting {}
    #[doc = include_str!("../../../book/src/repetition.md")]
    mod repetition {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    mod gadgets {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
