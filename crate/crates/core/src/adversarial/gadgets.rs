use rand::Rng;

use super::{failure_outcome, SuccessPath, R, R_PRIME};
use crate::dataset::{hamming_distance, Dataset};
use crate::error::{invalid, Result};
use crate::manifest::Manifest;
use crate::mechanism::{ExactIndexedMechanism, ExactMechanism, IndexedMechanism, Mechanism};
use crate::outcome::{Label, Outcome};
use crate::privacy::PrivacyClaim;
use crate::rng::{RandomSource, GADGET_DOMAIN};

fn check_budget(epsilon: f64, t_budget: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!(
            "gadget epsilon = {epsilon} must be finite and positive"
        )));
    }
    if !(t_budget >= epsilon.exp()) || !t_budget.is_finite() {
        return Err(invalid(format!(
            "call budget T = {t_budget} must be finite and at least e^epsilon = {}",
            epsilon.exp()
        )));
    }
    Ok(())
}

/// `ceil(ln(factor * t) / eps)`.
fn radius_for(epsilon: f64, t_budget: f64, factor: f64) -> usize {
    ((factor * t_budget).ln() / epsilon).ceil() as usize
}

/// The same-input gadget on `{0,1}^Delta`: `(r, 1)` w.p. `1 - q` at
/// `d1 = 1^Delta` and w.p. `q` at `d0 = 0^Delta`, other points interpolated
/// by distance to `d1`.
#[derive(Clone, Debug)]
pub struct TwoPointGadget {
    path: SuccessPath,
    t_budget: Option<f64>,
    d0: Dataset,
    d1: Dataset,
}

/// Two-point gadget defeating `T`-call algorithms: `Delta = ceil(ln(4T)/eps)`.
pub fn build_two_point(epsilon: f64, t_budget: f64) -> Result<TwoPointGadget> {
    check_budget(epsilon, t_budget)?;
    let mut g = TwoPointGadget::with_radius(epsilon, radius_for(epsilon, t_budget, 4.0))?;
    g.t_budget = Some(t_budget);
    Ok(g)
}

impl TwoPointGadget {
    /// Two-point gadget with an explicit radius.
    pub fn with_radius(epsilon: f64, radius: usize) -> Result<Self> {
        let path = SuccessPath::build(epsilon, radius, radius)?;
        Ok(Self {
            path,
            t_budget: None,
            d0: Dataset::zeros(radius)?,
            d1: Dataset::ones(radius)?,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.path.epsilon()
    }

    pub fn radius(&self) -> usize {
        self.path.radius()
    }

    pub fn q(&self) -> f64 {
        self.path.q()
    }

    pub fn t_budget(&self) -> Option<f64> {
        self.t_budget
    }

    pub fn d0(&self) -> &Dataset {
        &self.d0
    }

    pub fn d1(&self) -> &Dataset {
        &self.d1
    }

    pub fn path(&self) -> &SuccessPath {
        &self.path
    }

    pub fn to_manifest(&self) -> Manifest {
        let mut m = Manifest::new();
        m.set("gadget", "two_point")
            .set("epsilon", self.epsilon())
            .set("radius", self.radius())
            .set("q", self.q())
            .set("dim", self.radius());
        if let Some(t) = self.t_budget {
            m.set("t_budget", t);
        }
        m
    }
}

impl Mechanism for TwoPointGadget {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        Ok(self.path.sample(hamming_distance(d, &self.d1)?, rng))
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        PrivacyClaim::Pure {
            epsilon: 2.0 * self.epsilon(),
        }
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        Some(vec![R, R_PRIME])
    }
}

impl ExactMechanism for TwoPointGadget {
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        Ok(self.path.distribution(hamming_distance(d, &self.d1)?))
    }
}

/// The arbitrary-input gadget `M_v` on `{0,1}^dim`: `(r, 1)` w.p. `1 - q` at
/// the hidden center `v` and w.p. `q` outside the radius-`Delta` ball around it.
#[derive(Clone, Debug)]
pub struct BallGadget {
    path: SuccessPath,
    center: Dataset,
    t_budget: Option<f64>,
    seed: Option<u64>,
}

/// Ball gadget defeating `T`-call algorithms on arbitrary inputs:
/// `Delta = ceil(ln(8T)/eps)` inside `{0,1}^{10 Delta}`, with the center drawn
/// from `center_seed`.
pub fn build_ball(epsilon: f64, t_budget: f64, center_seed: u64) -> Result<BallGadget> {
    check_ball_parameters(epsilon, t_budget)?;
    let radius = radius_for(epsilon, t_budget, 8.0);
    let mut rng = RandomSource::derive(center_seed, GADGET_DOMAIN, 0);
    let center = Dataset::random(10 * radius, &mut rng)?;
    let mut g = BallGadget::shrunken(epsilon, radius, center)?;
    g.t_budget = Some(t_budget);
    g.seed = Some(center_seed);
    Ok(g)
}

fn check_ball_parameters(epsilon: f64, t_budget: f64) -> Result<()> {
    check_budget(epsilon, t_budget)?;
    if epsilon > 3.0 {
        return Err(invalid(format!("ball gadget needs epsilon <= 3, got {epsilon}")));
    }
    Ok(())
}

impl BallGadget {
    /// Ball gadget of radius `radius` around `center`, in the dimension of
    /// `center`. Small dimensions make exhaustive verification feasible.
    pub fn shrunken(epsilon: f64, radius: usize, center: Dataset) -> Result<Self> {
        let path = SuccessPath::build(epsilon, radius, center.dim())?;
        Ok(Self {
            path,
            center,
            t_budget: None,
            seed: None,
        })
    }

    /// The same gadget moved to a new center of the same dimension.
    pub fn with_center(&self, center: Dataset) -> Result<Self> {
        hamming_distance(&center, &self.center)?;
        Ok(Self {
            path: self.path.clone(),
            center,
            t_budget: self.t_budget,
            seed: None,
        })
    }

    /// A uniformly random center of this gadget's dimension.
    pub fn random_center<R: Rng + ?Sized>(&self, rng: &mut R) -> Dataset {
        Dataset::random(self.dim(), rng).expect("gadget dimension is positive")
    }

    pub fn epsilon(&self) -> f64 {
        self.path.epsilon()
    }

    pub fn radius(&self) -> usize {
        self.path.radius()
    }

    pub fn q(&self) -> f64 {
        self.path.q()
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &Dataset {
        &self.center
    }

    pub fn t_budget(&self) -> Option<f64> {
        self.t_budget
    }

    pub fn path(&self) -> &SuccessPath {
        &self.path
    }

    pub fn to_manifest(&self) -> Manifest {
        let mut m = Manifest::new();
        m.set("gadget", "ball")
            .set("epsilon", self.epsilon())
            .set("radius", self.radius())
            .set("q", self.q())
            .set("dim", self.dim());
        if let Some(t) = self.t_budget {
            m.set("t_budget", t);
        }
        if let Some(s) = self.seed {
            m.set("seed", s);
        }
        m.set("center", &self.center);
        m
    }
}

impl Mechanism for BallGadget {
    fn sample(&self, d: &Dataset, rng: &mut RandomSource) -> Result<Outcome> {
        Ok(self.path.sample(hamming_distance(d, &self.center)?, rng))
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        PrivacyClaim::Pure {
            epsilon: 2.0 * self.epsilon(),
        }
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        Some(vec![R, R_PRIME])
    }
}

impl ExactMechanism for BallGadget {
    fn distribution(&self, d: &Dataset) -> Result<Vec<(Outcome, f64)>> {
        Ok(self.path.distribution(hamming_distance(d, &self.center)?))
    }
}

/// The hyperparameter gadget `M_{v,k}`: arm `k_star` is a ball gadget, every
/// other arm always emits `(r', 0)`.
#[derive(Clone, Debug)]
pub struct HyperBallGadget {
    inner: BallGadget,
    k_star: usize,
    arms: usize,
    seed: Option<u64>,
}

/// Draws the center and the good arm uniformly from `seed`.
pub fn build_hyper_ball(epsilon: f64, t_budget: f64, arms: usize, seed: u64) -> Result<HyperBallGadget> {
    if arms == 0 {
        return Err(invalid("hyperparameter gadget needs at least one arm"));
    }
    check_ball_parameters(epsilon, t_budget)?;
    let radius = radius_for(epsilon, t_budget, 8.0);
    let mut rng = RandomSource::derive(seed, GADGET_DOMAIN, 0);
    let center = Dataset::random(10 * radius, &mut rng)?;
    let k_star = rng.random_range(0..arms);
    let mut inner = BallGadget::shrunken(epsilon, radius, center)?;
    inner.t_budget = Some(t_budget);
    let mut g = HyperBallGadget::new(inner, k_star, arms)?;
    g.seed = Some(seed);
    Ok(g)
}

impl HyperBallGadget {
    pub fn new(inner: BallGadget, k_star: usize, arms: usize) -> Result<Self> {
        if k_star >= arms {
            return Err(invalid(format!("good arm {k_star} out of range for {arms} arms")));
        }
        Ok(Self {
            inner,
            k_star,
            arms,
            seed: None,
        })
    }

    pub fn inner(&self) -> &BallGadget {
        &self.inner
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn to_manifest(&self) -> Manifest {
        let mut m = self.inner.to_manifest();
        m.set("gadget", "hyper_ball")
            .set("arms", self.arms)
            .set("k_star", self.k_star);
        if let Some(s) = self.seed {
            m.set("seed", s);
        }
        m
    }

    fn check(&self, d: &Dataset, k: usize) -> Result<()> {
        if k >= self.arms {
            return Err(invalid(format!("arm {k} out of range for {} arms", self.arms)));
        }
        hamming_distance(d, self.inner.center()).map(|_| ())
    }
}

impl IndexedMechanism for HyperBallGadget {
    fn sample_arm(&self, d: &Dataset, k: usize, rng: &mut RandomSource) -> Result<Outcome> {
        self.check(d, k)?;
        if k == self.k_star {
            self.inner.sample(d, rng)
        } else {
            Ok(failure_outcome())
        }
    }

    fn arms(&self) -> usize {
        self.arms
    }

    fn declared_privacy(&self) -> PrivacyClaim {
        self.inner.declared_privacy()
    }

    fn outcome_space(&self) -> Option<Vec<Label>> {
        Some(vec![R, R_PRIME])
    }
}

impl ExactIndexedMechanism for HyperBallGadget {
    fn arm_distribution(&self, d: &Dataset, k: usize) -> Result<Vec<(Outcome, f64)>> {
        self.check(d, k)?;
        if k == self.k_star {
            self.inner.distribution(d)
        } else {
            Ok(vec![(super::success_outcome(), 0.0), (failure_outcome(), 1.0)])
        }
    }
}
