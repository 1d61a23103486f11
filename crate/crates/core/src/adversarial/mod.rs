//! The lower-bound gadgets and an exhaustive differential-privacy verifier.
//!
//! Each gadget emits one of two outcomes, `(r, 1)` or `(r', 0)`, with a
//! success probability that depends on the input only through its Hamming
//! distance to a distinguished point. The distance-indexed probabilities form
//! a [`SuccessPath`] that descends from `1 - q` to `q` as fast as a
//! `2 eps`-DP mechanism allows.

mod gadgets;
mod verify;

pub use gadgets::{build_ball, build_hyper_ball, build_two_point, BallGadget, HyperBallGadget, TwoPointGadget};
pub use verify::{verify_dp_exhaustive, DpVerification, MAX_EXHAUSTIVE_DIM};

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::outcome::{Label, Outcome};

/// The common outcome at the distinguished point.
pub const R: Label = Label::from_static("r");
/// The common outcome far from the distinguished point.
pub const R_PRIME: Label = Label::from_static("r'");

pub(crate) fn success_outcome() -> Outcome {
    Outcome::new(R, 1.0).expect("finite")
}

pub(crate) fn failure_outcome() -> Outcome {
    Outcome::new(R_PRIME, 0.0).expect("finite")
}

/// Probability of `(r, 1)` as a function of distance to the distinguished
/// point.
///
/// Success and failure masses are stored separately: near the start the
/// failure mass is tiny and `1 - success` would round it away.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessPath {
    epsilon: f64,
    radius: usize,
    q: f64,
    success: Vec<f64>,
    failure: Vec<f64>,
}

impl SuccessPath {
    /// Fastest descent from `p[0] = 1 - q` under the two-sided `e^{2 eps}`
    /// ratio constraint on both outcomes, clamped at `q = e^{-eps radius}`,
    /// with entries for distances `0..=max_distance`.
    ///
    /// Fails if the path has not reached `q` by distance `radius`.
    pub fn build(epsilon: f64, radius: usize, max_distance: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(format!(
                "gadget epsilon = {epsilon} must be finite and positive"
            )));
        }
        if radius == 0 {
            return Err(invalid("gadget radius must be at least 1"));
        }
        let q = (-epsilon * radius as f64).exp();
        if !(q > 0.0 && q < 0.5) {
            return Err(invalid(format!(
                "q = e^(-{epsilon} * {radius}) = {q} must lie in (0, 1/2) for the gadget to separate its endpoints"
            )));
        }
        let k = (2.0 * epsilon).exp();
        let len = max_distance.max(radius) + 1;
        let (mut s, mut f) = (1.0 - q, q);
        let mut success = Vec::with_capacity(len);
        let mut failure = Vec::with_capacity(len);
        success.push(s);
        failure.push(f);
        for _ in 1..len {
            if s > q {
                if f * k <= 1.0 - s / k {
                    f *= k;
                    s = 1.0 - f;
                    if s <= q {
                        s = q;
                        f = 1.0 - q;
                    }
                } else {
                    s = (s / k).max(q);
                    f = 1.0 - s;
                }
            }
            success.push(s);
            failure.push(f);
        }
        if success[radius] != q {
            return Err(Error::Construction(format!(
                "success path for epsilon={epsilon}, radius={radius} is at {} instead of q={q} at the radius",
                success[radius]
            )));
        }
        Ok(Self {
            epsilon,
            radius,
            q,
            success,
            failure,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Largest tabulated distance; farther points reuse its entry.
    pub fn max_distance(&self) -> usize {
        self.success.len() - 1
    }

    pub fn success(&self, distance: usize) -> f64 {
        self.success[distance.min(self.max_distance())]
    }

    pub fn failure(&self, distance: usize) -> f64 {
        self.failure[distance.min(self.max_distance())]
    }

    /// Largest one-step log ratio of either outcome's probability.
    pub fn max_step_log_ratio(&self) -> f64 {
        let step = |v: &[f64]| v.windows(2).map(|w| (w[0].ln() - w[1].ln()).abs()).fold(0.0, f64::max);
        step(&self.success).max(step(&self.failure))
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, distance: usize, rng: &mut R) -> Outcome {
        if rng.random::<f64>() < self.failure(distance) {
            failure_outcome()
        } else {
            success_outcome()
        }
    }

    pub(crate) fn distribution(&self, distance: usize) -> Vec<(Outcome, f64)> {
        vec![
            (success_outcome(), self.success(distance)),
            (failure_outcome(), self.failure(distance)),
        ]
    }
}

/// Mass of a radius-`delta` Hamming ball in `{0,1}^{10 delta}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallMass {
    /// `sum_{i <= delta} C(10 delta, i) / 2^{10 delta}`.
    pub full: f64,
    /// `C(10 delta, delta) / 2^{10 delta}`.
    pub single_term: f64,
    pub ln_full: f64,
    pub ln_single_term: f64,
}

/// Ball mass evaluated in log space, checking `full <= (delta + 1) single_term`
/// and `single_term <= e^{-3 delta}`.
pub fn ball_mass_fraction(delta: usize) -> Result<BallMass> {
    if delta == 0 {
        return Err(invalid("ball radius must be at least 1"));
    }
    let n = 10 * delta;
    let ln_half_power = -(n as f64) * std::f64::consts::LN_2;
    let mut ln_binom = 0.0;
    let mut terms = Vec::with_capacity(delta + 1);
    for i in 0..=delta {
        if i > 0 {
            ln_binom += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        terms.push(ln_binom + ln_half_power);
    }
    let ln_single_term = terms[delta];
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_full = top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln();
    let tol = 1e-12;
    assert!(
        ln_full <= ((delta + 1) as f64).ln() + ln_single_term + tol,
        "ball mass exceeds (delta+1) times its largest term"
    );
    assert!(
        ln_single_term <= -3.0 * delta as f64 + tol,
        "binomial estimate violated at delta={delta}"
    );
    Ok(BallMass {
        full: ln_full.exp(),
        single_term: ln_single_term.exp(),
        ln_full,
        ln_single_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn path_boundary_values() {
        let p = SuccessPath::build(1.0, 5, 50).unwrap();
        assert_relative_eq!(p.q(), (-5f64).exp(), max_relative = 1e-12);
        assert_eq!(p.success(0), 1.0 - p.q());
        assert_eq!(p.failure(0), p.q());
        for t in 5..=60 {
            assert_eq!(p.success(t), p.q());
        }
    }

    #[test]
    fn path_respects_the_step_ratio() {
        for eps in [0.05, 0.5, 1.0, 2.0, 3.0] {
            for radius in [1, 2, 3, 7, 20, 50] {
                if eps * radius as f64 <= std::f64::consts::LN_2 {
                    assert!(SuccessPath::build(eps, radius, radius).is_err());
                    continue;
                }
                let p = SuccessPath::build(eps, radius, 10 * radius).unwrap();
                assert!(p.max_step_log_ratio() <= 2.0 * eps + 1e-9, "eps={eps} radius={radius}");
                for t in 0..p.max_distance() {
                    assert!(p.success(t + 1) <= p.success(t));
                }
            }
        }
    }

    #[test]
    fn path_rejects_degenerate_parameters() {
        assert!(SuccessPath::build(0.0, 3, 3).is_err());
        assert!(SuccessPath::build(1.0, 0, 3).is_err());
        assert!(SuccessPath::build(f64::NAN, 3, 3).is_err());
    }

    #[test]
    fn ball_mass_examples() {
        let m1 = ball_mass_fraction(1).unwrap();
        assert_relative_eq!(m1.single_term, 10.0 / 1024.0, max_relative = 1e-12);
        assert_relative_eq!(m1.full, 11.0 / 1024.0, max_relative = 1e-12);
        assert!(m1.single_term <= 0.0497871);
        let m2 = ball_mass_fraction(2).unwrap();
        assert_relative_eq!(m2.single_term, 190.0 / 1048576.0, max_relative = 1e-12);
        assert!(m2.single_term <= 0.00247875);
        assert!(ball_mass_fraction(0).is_err());
    }

    #[test]
    fn ball_mass_estimate_holds_to_thirty() {
        for delta in 1..=30 {
            let m = ball_mass_fraction(delta).unwrap();
            assert!(m.ln_single_term <= -3.0 * delta as f64);
            assert!(m.full >= m.single_term);
        }
    }
}
