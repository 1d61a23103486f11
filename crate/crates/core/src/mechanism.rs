//! The randomized-mechanism interfaces and the baseline mechanisms used in
//! tests and simulations.

use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{check_nonneg, check_range, invalid, Result};
use crate::outcome::{median_of_values, upper_quantile, Label, Outcome};
use crate::privacy::PrivacyClaim;
use crate::rng::RandomSource;

/// A randomized map from datasets to outcomes.
///
/// `sample` must be a pure function of the dataset and the consumed random
/// stream. Implementations are shared across trial workers, hence `Sync`.
pub trait Mechanism: Send + Sync {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome>;

    fn declared_privacy(&self) -> PrivacyClaim;

    /// Finite list of labels the mechanism can emit, when known.
    fn outcome_space(&self) -> Option<Vec<Label>> {
        None
    }
}

/// A mechanism whose output distribution can be written down exactly.
pub trait ExactMechanism: Mechanism {
    /// Every outcome in the outcome space with its probability at `d`.
    /// Zero-probability outcomes are included so that labels line up across
    /// datasets.
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>>;

    fn median(&self, d: &Dataset) -> Result<f64> {
        let dist = self.distribution(d)?;
        let weighted: Vec<(f64, f64)> = dist.iter().map(|(o, p)| (o.value(), *p)).collect();
        median_of_values(&weighted)
    }
}

/// A mechanism taking an extra index `k` in `0..arms()`, e.g. a learning
/// algorithm parameterized by a hyperparameter setting.
pub trait IndexedMechanism: Send + Sync {
    fn sample_arm(&self, d: &Dataset, k: usize, rng: &mut RandomSource) -> Result<Outcome>;

    fn arms(&self) -> usize;

    /// Guarantee satisfied by every arm's restriction.
    fn declared_privacy(&self) -> PrivacyClaim;

    fn outcome_space(&self) -> Option<Vec<Label>> {
        None
    }
}

pub trait ExactIndexedMechanism: IndexedMechanism {
    fn arm_distribution(&self, d: &Dataset, k: usize) -> Result<Vec<(Outcome, f64)>>;

    /// `max_k Median(M(d, k))`, the metaselection utility target.
    fn best_arm_median(&self, d: &Dataset) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for k in 0..self.arms() {
            let dist = self.arm_distribution(d, k)?;
            let weighted: Vec<(f64, f64)> = dist.iter().map(|(o, p)| (o.value(), *p)).collect();
            best = best.max(median_of_values(&weighted)?);
        }
        Ok(best)
    }
}

fn check_arm(k: usize, arms: usize) -> Result<()> {
    if k >= arms {
        return Err(invalid(format!("arm {k} out of range for {arms} arms")));
    }
    Ok(())
}

/// Data-independent coin: `hi` with probability `p_success`, else `lo`.
#[derive(Clone, Debug)]
pub struct CoinMechanism {
    p_success: f64,
    hi: Outcome,
    lo: Outcome,
}

pub const HI: Label = Label::from_static("hi");
pub const LO: Label = Label::from_static("lo");

pub fn coin_mechanism(p_success: f64, hi: f64, lo: f64) -> Result<CoinMechanism> {
    check_range("p_success", p_success, 0.0, 1.0)?;
    if !(hi > lo) {
        return Err(invalid(format!("coin requires hi > lo, got hi={hi}, lo={lo}")));
    }
    Ok(CoinMechanism {
        p_success,
        hi: Outcome::new(HI, hi)?,
        lo: Outcome::new(LO, lo)?,
    })
}

impl CoinMechanism {
    pub fn p_success(&self) -> f64 {
        self.p_success
    }
}

impl Mechanism for CoinMechanism {
    fn sample(&self, _d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        Ok(if rng.random::<f64>() < self.p_success {
            self.hi.clone()
        } else {
            self.lo.clone()
        })
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        PrivacyClaim::Pure { epsilon: 0.0 }
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        Some(vec![HI, LO])
    }
}

impl ExactMechanism for CoinMechanism {
    fn distribution(&self, _d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        Ok(vec![
            (self.hi.clone(), self.p_success),
            (self.lo.clone(), 1.0 - self.p_success),
        ])
    }
}

/// Reports bit `bit_index` of the dataset truthfully with probability
/// `e^eps / (1 + e^eps)` and flipped otherwise.
#[derive(Clone, Debug)]
pub struct RandomizedResponse {
    epsilon: f64,
    bit_index: usize,
    truth: f64,
}

pub const ONE: Label = Label::from_static("1");
pub const ZERO: Label = Label::from_static("0");

pub fn randomized_response_mechanism(epsilon: f64, bit_index: usize) -> Result<RandomizedResponse> {
    check_nonneg("epsilon", epsilon)?;
    Ok(RandomizedResponse {
        epsilon,
        bit_index,
        truth: 1.0 / (1.0 + (-epsilon).exp()),
    })
}

impl RandomizedResponse {
    pub fn truth_probability(&self) -> f64 {
        self.truth
    }

    fn read_bit(&self, d: &Dataset) -> Result<bool> {
        d.bit(self.bit_index).ok_or_else(|| {
            invalid(format!(
                "bit index {} out of range for dataset of dim {}",
                self.bit_index,
                d.dim()
            ))
        })
    }

    fn outcome(bit: bool) -> Outcome {
        if bit {
            Outcome::new(ONE, 1.0).expect("finite")
        } else {
            Outcome::new(ZERO, 0.0).expect("finite")
        }
    }
}

impl Mechanism for RandomizedResponse {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        let bit = self.read_bit(d)?;
        let truthful = rng.random::<f64>() < self.truth;
        Ok(Self::outcome(bit == truthful))
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        PrivacyClaim::Pure { epsilon: self.epsilon }
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        Some(vec![ONE, ZERO])
    }
}

impl ExactMechanism for RandomizedResponse {
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        let bit = self.read_bit(d)?;
        let p_one = if bit { self.truth } else { 1.0 - self.truth };
        Ok(vec![(Self::outcome(true), p_one), (Self::outcome(false), 1.0 - p_one)])
    }
}

/// A finite family of mechanisms indexed by arm.
pub struct MechanismFamily<M> {
    arms: Vec<M>,
    privacy: PrivacyClaim,
}

impl<M: Mechanism> MechanismFamily<M> {
    pub fn new(arms: Vec<M>) -> Result<Self> {
        let Some(first) = arms.first() else {
            return Err(invalid("a mechanism family needs at least one arm"));
        };
        let mut privacy = first.declared_privacy();
        for arm in &arms[1..] {
            privacy = loosest(privacy, arm.declared_privacy())?;
        }
        Ok(Self { arms, privacy })
    }

    pub fn arm(&self, k: usize) -> Option<&M> {
        self.arms.get(k)
    }
}

/// The weakest guarantee implied by both claims.
fn loosest(a: PrivacyClaim, b: PrivacyClaim) -> Result<PrivacyClaim> {
    use PrivacyClaim::*;
    match (a, b) {
        (Renyi { alpha: a1, epsilon: e1 }, Renyi { alpha: a2, epsilon: e2 }) if a1 == a2 => Ok(Renyi {
            alpha: a1,
            epsilon: e1.max(e2),
        }),
        (Renyi { .. }, _) | (_, Renyi { .. }) => Err(invalid(
            "cannot combine Rényi claims of different orders or with (epsilon, delta) claims",
        )),
        (x, y) => {
            let epsilon = x.epsilon().max(y.epsilon());
            let delta = x.delta().unwrap_or(0.0).max(y.delta().unwrap_or(0.0));
            Ok(if delta == 0.0 {
                Pure { epsilon }
            } else {
                Approx { epsilon, delta }
            })
        }
    }
}

impl<M: Mechanism> IndexedMechanism for MechanismFamily<M> {
    fn sample_arm(&self, d: &Dataset, k: usize, rng: &mut RandomSource) -> Result<Outcome> {
        check_arm(k, self.arms.len())?;
        self.arms[k].sample(d, rng)
    }

    fn arms(&self) -> usize {
        self.arms.len()
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.privacy
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        let mut labels = Vec::new();
        for arm in &self.arms {
            for l in arm.outcome_space()? {
                if !labels.contains(&l) {
                    labels.push(l);
                }
            }
        }
        Some(labels)
    }
}

impl<M: ExactMechanism> ExactIndexedMechanism for MechanismFamily<M> {
    fn arm_distribution(&self, d: &Dataset, k: usize) -> Result<Vec<(Outcome, f64)>> {
        check_arm(k, self.arms.len())?;
        self.arms[k].distribution(d)
    }
}

/// `M'(d)`: draw `k` uniformly from the arms, then run `M(d, k)`.
///
/// This is the reduction from metaselection to repetition: `M'` inherits the
/// per-arm privacy guarantee and reaches the best arm's median with
/// probability at least `1/(2K)`.
pub struct ArmUniform<'a, F: ?Sized> {
    family: &'a F,
}

impl<'a, F: IndexedMechanism + ?Sized> ArmUniform<'a, F> {
    pub fn new(family: &'a F) -> Result<Self> {
        if family.arms() == 0 {
            return Err(invalid("family has no arms"));
        }
        Ok(Self { family })
    }
}

impl<F: IndexedMechanism + ?Sized> Mechanism for ArmUniform<'_, F> {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        let k = rng.random_range(0..self.family.arms());
        self.family.sample_arm(d, k, rng)
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.family.declared_privacy()
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        self.family.outcome_space()
    }
}

impl<F: ExactIndexedMechanism + ?Sized> ExactMechanism for ArmUniform<'_, F> {
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        let arms = self.family.arms();
        let weight = 1.0 / arms as f64;
        let mut merged: Vec<(Outcome, f64)> = Vec::new();
        for k in 0..arms {
            for (o, p) in self.family.arm_distribution(d, k)? {
                match merged.iter_mut().find(|(m, _)| *m == o) {
                    Some(slot) => slot.1 += weight * p,
                    None => merged.push((o, weight * p)),
                }
            }
        }
        Ok(merged)
    }
}

impl<F: ExactIndexedMechanism + ?Sized> ArmUniform<'_, F> {
    /// The `(1 - 1/K)`-quantile of `M'`, which the literature's metaselection
    /// guarantees compete with.
    pub fn top_quantile(&self, d: &Dataset) -> Result<f64> {
        let dist = self.distribution(d)?;
        let weighted: Vec<(f64, f64)> = dist.iter().map(|(o, p)| (o.value(), *p)).collect();
        upper_quantile(&weighted, 1.0 / self.family.arms() as f64)
    }
}

/// The restriction `M(., k)` of an indexed mechanism to a single arm.
pub struct ArmView<'a, F: ?Sized> {
    family: &'a F,
    k: usize,
}

impl<'a, F: IndexedMechanism + ?Sized> ArmView<'a, F> {
    pub fn new(family: &'a F, k: usize) -> Result<Self> {
        check_arm(k, family.arms())?;
        Ok(Self { family, k })
    }
}

impl<F: IndexedMechanism + ?Sized> Mechanism for ArmView<'_, F> {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        self.family.sample_arm(d, self.k, rng)
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.family.declared_privacy()
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        self.family.outcome_space()
    }
}

impl<F: ExactIndexedMechanism + ?Sized> ExactMechanism for ArmView<'_, F> {
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        self.family.arm_distribution(d, self.k)
    }
}

/// A single mechanism seen as a one-armed family.
pub struct SingleArm<'a, M: ?Sized>(pub &'a M);

impl<M: Mechanism + ?Sized> IndexedMechanism for SingleArm<'_, M> {
    fn sample_arm(&self, d: &Dataset, k: usize, rng: &mut RandomSource) -> Result<Outcome> {
        check_arm(k, 1)?;
        self.0.sample(d, rng)
    }

    fn arms(&self) -> usize {
        1
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.0.declared_privacy()
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        self.0.outcome_space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(s: &str) -> Dataset {
        s.parse().unwrap()
    }

    #[test]
    fn fair_coin_median_is_hi() {
        let coin = coin_mechanism(0.5, 1.0, 0.0).unwrap();
        assert_eq!(coin.median(&d("0")).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_coin_always_lo() {
        let coin = coin_mechanism(0.0, 1.0, 0.0).unwrap();
        let mut rng = RandomSource::seeded(1);
        for _ in 0..1000 {
            assert_eq!(coin.sample(&d("0"), &mut rng).unwrap().label(), &LO);
        }
    }

    #[test]
    fn fair_coin_frequency() {
        let coin = coin_mechanism(0.5, 1.0, 0.0).unwrap();
        let mut rng = RandomSource::seeded(11);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| coin.sample(&d("0"), &mut rng).unwrap().value() == 1.0)
            .count();
        assert_abs_diff_eq!(hits as f64 / n as f64, 0.5, epsilon = 0.002);
    }

    #[test]
    fn coin_rejects_bad_parameters() {
        assert!(coin_mechanism(1.5, 1.0, 0.0).is_err());
        assert!(coin_mechanism(-0.1, 1.0, 0.0).is_err());
        assert!(coin_mechanism(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn coin_is_zero_dp() {
        let coin = coin_mechanism(0.3, 1.0, 0.0).unwrap();
        assert_eq!(coin.declared_privacy(), PrivacyClaim::Pure { epsilon: 0.0 });
        assert_eq!(coin.outcome_space().unwrap().len(), 2);
    }

    #[test]
    fn randomized_response_truth_probability() {
        let rr = randomized_response_mechanism(3f64.ln(), 0).unwrap();
        assert_abs_diff_eq!(rr.truth_probability(), 0.75, epsilon = 1e-15);
        let rr0 = randomized_response_mechanism(0.0, 0).unwrap();
        assert_eq!(rr0.truth_probability(), 0.5);
    }

    #[test]
    fn randomized_response_distribution_follows_the_bit() {
        let rr = randomized_response_mechanism(3f64.ln(), 1).unwrap();
        let dist = rr.distribution(&d("010")).unwrap();
        assert_eq!(dist[0].0.label(), &ONE);
        assert_abs_diff_eq!(dist[0].1, 0.75, epsilon = 1e-15);
        let dist = rr.distribution(&d("000")).unwrap();
        assert_abs_diff_eq!(dist[0].1, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn randomized_response_rejects_short_dataset() {
        let rr = randomized_response_mechanism(1.0, 5).unwrap();
        let mut rng = RandomSource::seeded(0);
        assert!(rr.sample(&d("0101"), &mut rng).is_err());
        assert!(rr.distribution(&d("0101")).is_err());
    }

    #[test]
    fn arm_uniform_mixes_arms() {
        let fam = MechanismFamily::new(vec![
            coin_mechanism(0.0, 1.0, 0.0).unwrap(),
            coin_mechanism(0.0, 1.0, 0.0).unwrap(),
            coin_mechanism(0.0, 1.0, 0.0).unwrap(),
            coin_mechanism(0.9, 1.0, 0.0).unwrap(),
        ])
        .unwrap();
        let mix = ArmUniform::new(&fam).unwrap();
        let dist = mix.distribution(&d("0")).unwrap();
        let hi = dist.iter().find(|(o, _)| o.label() == &HI).unwrap().1;
        assert_abs_diff_eq!(hi, 0.225, epsilon = 1e-15);
        assert_eq!(fam.best_arm_median(&d("0")).unwrap(), 1.0);
        assert_eq!(mix.median(&d("0")).unwrap(), 0.0);
    }

    #[test]
    fn family_privacy_is_the_loosest_arm() {
        let fam = MechanismFamily::new(vec![
            randomized_response_mechanism(0.5, 0).unwrap(),
            randomized_response_mechanism(1.5, 0).unwrap(),
        ])
        .unwrap();
        assert_eq!(fam.declared_privacy(), PrivacyClaim::Pure { epsilon: 1.5 });
        assert!(MechanismFamily::<CoinMechanism>::new(vec![]).is_err());
    }

    #[test]
    fn arm_view_checks_index() {
        let fam = MechanismFamily::new(vec![coin_mechanism(0.5, 1.0, 0.0).unwrap()]).unwrap();
        assert!(ArmView::new(&fam, 0).is_ok());
        assert!(ArmView::new(&fam, 1).is_err());
    }
}
