//! Closed-form privacy arithmetic: composition, group privacy, and the two
//! sides of the privacy/computation frontier.
//!
//! Everything here is a pure function. Lower-bound curves are clamped at zero
//! where the underlying bound is vacuous.

use std::f64::consts::E;

use crate::error::{check_nonneg, check_open_unit, check_range, invalid, Result};
use crate::privacy::PrivacyClaim;
use crate::table::{Cell, Record};

/// Lower bound on `Pr[M(d') in E]` for an `epsilon`-DP mechanism, given
/// `Pr[M(d) in E] = p_event` and `|d - d'|_H = distance`:
/// `p_event * e^{-epsilon * distance}`.
///
/// The bound is evaluated as `distance` successive single-step bounds, so
/// applying it for `a` steps and then `b` steps gives bit-for-bit the same
/// result as applying it for `a + b` steps.
pub fn group_privacy_pure(epsilon: f64, distance: u64, p_event: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    check_range("p_event", p_event, 0.0, 1.0)?;
    let step = (-epsilon).exp();
    let mut bound = p_event;
    if step == 1.0 {
        return Ok(bound);
    }
    for _ in 0..distance {
        if bound == 0.0 {
            break;
        }
        bound *= step;
    }
    Ok(bound)
}

/// `max(0, p_event * e^{-epsilon * distance} - distance * delta)`, the lower
/// bound implied by `(epsilon, delta)`-DP at distance `distance`.
pub fn group_privacy_approx(epsilon: f64, delta: f64, distance: u64, p_event: f64) -> Result<f64> {
    check_range("delta", delta, 0.0, 1.0)?;
    let pure = group_privacy_pure(epsilon, distance, p_event)?;
    Ok((pure - distance as f64 * delta).max(0.0))
}

/// Whether `delta < e^{-epsilon * distance} / (8 * distance)`, the regime in
/// which an event of probability 1/4 keeps probability `e^{-epsilon * distance}/8`.
pub fn delta_small_enough(epsilon: f64, delta: f64, distance: u64) -> bool {
    if distance == 0 {
        return true;
    }
    let d = distance as f64;
    delta < (-epsilon * d).exp() / (8.0 * d)
}

/// Lower bound on `Pr[M(d') in E]` for an `(alpha, epsilon)`-Rényi DP
/// mechanism at distance `distance`, obtained by solving
/// `p <= e^{eps * S} * Pr[d']^{(1-1/alpha)^distance}` with
/// `S = sum_{i=1..distance} (1-1/alpha)^i` for `Pr[d']`.
///
/// At `epsilon = 0` the Rényi divergence vanishes, the two output
/// distributions coincide, and the bound is `p_event` itself.
pub fn group_privacy_renyi(alpha: f64, epsilon: f64, distance: u64, p_event: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(invalid(format!("Rényi order alpha = {alpha} must exceed 1")));
    }
    check_nonneg("epsilon", epsilon)?;
    check_range("p_event", p_event, 0.0, 1.0)?;
    if epsilon == 0.0 || distance == 0 || p_event == 0.0 {
        return Ok(p_event);
    }
    let ratio = 1.0 - 1.0 / alpha;
    let mut power = 1.0;
    let mut sum = 0.0;
    for _ in 0..distance {
        power *= ratio;
        sum += power;
    }
    // log Pr[d'] >= (log p - eps * S) / ratio^distance
    let log_bound = (p_event.ln() - epsilon * sum) / power;
    Ok(log_bound.exp())
}

/// The simplified Rényi group-privacy floor `e^{-e (alpha-1) epsilon} / 44`,
/// valid when `alpha >= distance + 1` and `p_event >= 1/4`.
pub fn renyi_simplified_floor(alpha: f64, epsilon: f64, distance: u64, p_event: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(invalid(format!("Rényi order alpha = {alpha} must exceed 1")));
    }
    check_nonneg("epsilon", epsilon)?;
    if alpha < distance as f64 + 1.0 {
        return Err(invalid(format!(
            "simplified bound needs alpha >= distance + 1 (alpha={alpha}, distance={distance})"
        )));
    }
    if !(0.25..=1.0).contains(&p_event) {
        return Err(invalid(format!(
            "simplified bound needs p_event in [1/4, 1], got {p_event}"
        )));
    }
    Ok((-E * (alpha - 1.0) * epsilon).exp() / 44.0)
}

/// Basic composition of `t` runs: `(eps, delta) -> (t eps, t delta)`.
///
/// The composed `delta` is capped at 1.
pub fn compose_simple(claim: PrivacyClaim, t: u64) -> Result<PrivacyClaim> {
    if t == 0 {
        return Err(invalid("composition needs at least one run"));
    }
    let n = t as f64;
    match claim {
        PrivacyClaim::Pure { epsilon } => Ok(PrivacyClaim::Pure { epsilon: n * epsilon }),
        PrivacyClaim::Approx { epsilon, delta } => Ok(PrivacyClaim::Approx {
            epsilon: n * epsilon,
            delta: (n * delta).min(1.0),
        }),
        PrivacyClaim::Renyi { .. } => Err(invalid("simple composition of Rényi claims is not supported")),
    }
}

/// Advanced composition:
/// `(t eps^2 + eps sqrt(2 t ln(1/delta')), t delta + delta')`.
pub fn compose_advanced(epsilon: f64, delta: f64, t: u64, delta_prime: f64) -> Result<PrivacyClaim> {
    check_nonneg("epsilon", epsilon)?;
    check_range("delta", delta, 0.0, 1.0)?;
    check_open_unit("delta_prime", delta_prime)?;
    if t == 0 {
        return Err(invalid("composition needs at least one run"));
    }
    let n = t as f64;
    let eps = n * epsilon * epsilon + epsilon * (2.0 * n * (1.0 / delta_prime).ln()).sqrt();
    Ok(PrivacyClaim::Approx {
        epsilon: eps,
        delta: (n * delta + delta_prime).min(1.0),
    })
}

/// Which lower-bound theorem a curve comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundVariant {
    /// Meta-algorithms that only query the input dataset.
    SameInput,
    /// Meta-algorithms that may query arbitrary datasets.
    Coded,
    /// Hyperparameter tuning over `K` arms with `T K` calls; `t` is per arm.
    Hyperparameter,
}

impl LowerBoundVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SameInput => "same_input",
            Self::Coded => "coded",
            Self::Hyperparameter => "hyperparameter",
        }
    }
}

fn check_overhead_inputs(t: f64, gamma: f64) -> Result<()> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(invalid(format!(
            "computational overhead T = {t} must be finite and >= 1"
        )));
    }
    check_open_unit("gamma", gamma)
}

/// Smallest privacy overhead `c` compatible with failure probability `gamma`
/// and computational overhead `t`:
/// `ln(1/(8 gamma)) / (2 ln 4T)` for same-input algorithms and
/// `ln(1/(8 gamma)) / (40 ln 8T)` otherwise. Zero when `gamma >= 1/8`.
pub fn lb_privacy_overhead(t: f64, gamma: f64, variant: LowerBoundVariant) -> Result<f64> {
    check_overhead_inputs(t, gamma)?;
    let numerator = (1.0 / (8.0 * gamma)).ln();
    if numerator <= 0.0 {
        return Ok(0.0);
    }
    let denominator = match variant {
        LowerBoundVariant::SameInput => 2.0 * (4.0 * t).ln(),
        LowerBoundVariant::Coded | LowerBoundVariant::Hyperparameter => 40.0 * (8.0 * t).ln(),
    };
    Ok(numerator / denominator)
}

/// Rényi-DP counterpart: `ln(1/(44 gamma)) / (2 e ln 4T)`, zero when
/// `gamma >= 1/44`.
pub fn lb_privacy_overhead_renyi(t: f64, gamma: f64) -> Result<f64> {
    check_overhead_inputs(t, gamma)?;
    let numerator = (1.0 / (44.0 * gamma)).ln();
    if numerator <= 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / (2.0 * E * (4.0 * t).ln()))
}

/// Privacy and expected oracle calls of the hybrid booster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridBound {
    pub privacy: PrivacyClaim,
    pub expected_calls: f64,
}

/// `c` rounds of random stopping at inner target `gamma^{1/c} / K`, keeping
/// the best: `3 c eps`-DP with `K c gamma^{-1/c}` expected calls.
pub fn ub_hybrid(c: u32, gamma: f64, arms: u32, base_epsilon: f64) -> Result<HybridBound> {
    if c == 0 {
        return Err(invalid("hybrid needs c >= 1"));
    }
    if arms == 0 {
        return Err(invalid("need at least one arm"));
    }
    check_open_unit("gamma", gamma)?;
    check_nonneg("base_epsilon", base_epsilon)?;
    let c_f = c as f64;
    let inner_target = gamma.powf(1.0 / c_f) / arms as f64;
    Ok(HybridBound {
        privacy: PrivacyClaim::Pure {
            epsilon: 3.0 * c_f * base_epsilon,
        },
        expected_calls: c_f / inner_target,
    })
}

/// Integer repetition counts searched for the hybrid upper curve.
pub const MAX_HYBRID_ROUNDS: u32 = 64;

/// Relative slack when comparing expected calls against a budget, so that a
/// budget of exactly `1/gamma` admits a single round despite rounding.
const BUDGET_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierQuery {
    pub gamma: f64,
    pub arms: u32,
    pub t_grid: Vec<f64>,
    pub same_input: bool,
}

impl FrontierQuery {
    pub fn validate(&self) -> Result<()> {
        check_open_unit("gamma", self.gamma)?;
        if self.arms == 0 {
            return Err(invalid("arms must be at least 1"));
        }
        if self.t_grid.is_empty() {
            return Err(invalid("t_grid is empty"));
        }
        for &t in &self.t_grid {
            if !(t >= 1.0) || !t.is_finite() {
                return Err(invalid(format!("grid value T = {t} must be finite and >= 1")));
            }
        }
        Ok(())
    }

    /// The theorem the lower curve comes from: hyperparameter tuning for
    /// several arms, otherwise same-input or coded repetition.
    pub fn variant(&self) -> LowerBoundVariant {
        if self.arms > 1 {
            LowerBoundVariant::Hyperparameter
        } else if self.same_input {
            LowerBoundVariant::SameInput
        } else {
            LowerBoundVariant::Coded
        }
    }

    /// Whether the lower-bound curve is identically zero (`gamma >= 1/8`).
    pub fn lower_bound_vacuous(&self) -> bool {
        self.gamma >= 0.125
    }

    fn sorted_grid(&self) -> Vec<f64> {
        let mut grid = self.t_grid.clone();
        grid.sort_by(f64::total_cmp);
        grid
    }
}

/// One point of the frontier. `c_upper` is `None` when no hybrid with at
/// most [`MAX_HYBRID_ROUNDS`] rounds fits in the budget.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontierRow {
    pub t: f64,
    pub c_lower: f64,
    pub c_upper: Option<u32>,
    pub expected_calls_upper: Option<f64>,
}

impl FrontierRow {
    pub fn consistent(&self) -> bool {
        self.c_upper.is_none_or(|c| self.c_lower <= c as f64)
    }
}

impl Record for FrontierRow {
    fn header() -> Vec<&'static str> {
        vec!["t", "c_lower", "c_upper", "expected_calls_upper"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.t),
            Cell::Real(self.c_lower),
            self.c_upper.map_or(Cell::Real(f64::INFINITY), |c| Cell::Int(c as i64)),
            Cell::Real(self.expected_calls_upper.unwrap_or(f64::INFINITY)),
        ]
    }
}

/// Lower and upper privacy-overhead curves over `query.t_grid`, sorted by `T`.
pub fn frontier_sweep(query: &FrontierQuery, base_epsilon: f64) -> Result<Vec<FrontierRow>> {
    query.validate()?;
    check_nonneg("base_epsilon", base_epsilon)?;
    let variant = query.variant();
    query
        .sorted_grid()
        .into_iter()
        .map(|t| {
            let c_lower = lb_privacy_overhead(t, query.gamma, variant)?;
            let budget = t * query.arms as f64;
            let mut upper = None;
            for c in 1..=MAX_HYBRID_ROUNDS {
                let bound = ub_hybrid(c, query.gamma, query.arms, base_epsilon)?;
                if bound.expected_calls <= budget * (1.0 + BUDGET_SLACK) {
                    upper = Some((c, bound.expected_calls));
                    break;
                }
            }
            Ok(FrontierRow {
                t,
                c_lower,
                c_upper: upper.map(|u| u.0),
                expected_calls_upper: upper.map(|u| u.1),
            })
        })
        .collect()
}

/// Point of the Rényi lower-bound curve.
#[derive(Clone, Debug, PartialEq)]
pub struct RenyiFrontierRow {
    pub t: f64,
    pub c_lower_renyi: f64,
}

impl Record for RenyiFrontierRow {
    fn header() -> Vec<&'static str> {
        vec!["t", "c_lower_renyi"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![Cell::Real(self.t), Cell::Real(self.c_lower_renyi)]
    }
}

pub fn renyi_frontier(query: &FrontierQuery) -> Result<Vec<RenyiFrontierRow>> {
    query.validate()?;
    query
        .sorted_grid()
        .into_iter()
        .map(|t| {
            Ok(RenyiFrontierRow {
                t,
                c_lower_renyi: lb_privacy_overhead_renyi(t, query.gamma)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn pure_group_privacy_examples() {
        assert_relative_eq!(
            group_privacy_pure(2f64.ln(), 2, 0.25).unwrap(),
            1.0 / 16.0,
            max_relative = 1e-15
        );
        assert_eq!(group_privacy_pure(0.0, 5, 0.3).unwrap(), 0.3);
        assert_eq!(group_privacy_pure(1.0, 0, 0.7).unwrap(), 0.7);
    }

    #[test]
    fn pure_group_privacy_rejects_bad_ranges() {
        assert!(group_privacy_pure(-0.1, 1, 0.5).is_err());
        assert!(group_privacy_pure(1.0, 1, 1.5).is_err());
    }

    #[test]
    fn approx_group_privacy_examples() {
        assert_relative_eq!(
            group_privacy_approx(1.0, 0.0, 3, 0.25).unwrap(),
            0.25 * (-3f64).exp(),
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(
            group_privacy_approx(1.0, 0.0, 3, 0.25).unwrap(),
            0.012446,
            epsilon = 1e-6
        );
        let delta = (-3f64).exp() / 24.0 * 0.999;
        assert!(delta_small_enough(1.0, delta, 3));
        assert!(group_privacy_approx(1.0, delta, 3, 0.25).unwrap() >= (-3f64).exp() / 8.0);
        assert_eq!(group_privacy_approx(0.0, 0.0, 4, 0.9).unwrap(), 0.9);
    }

    #[test]
    fn approx_group_privacy_clamps_at_zero() {
        assert_eq!(group_privacy_approx(1.0, 0.5, 3, 0.25).unwrap(), 0.0);
        assert!(!delta_small_enough(1.0, 0.01, 3));
    }

    #[test]
    fn renyi_group_privacy_examples() {
        let simplified = renyi_simplified_floor(4.0, 0.1, 3, 0.25).unwrap();
        assert_abs_diff_eq!(simplified, 0.010055, epsilon = 1e-6);
        assert_eq!(group_privacy_renyi(3.0, 0.0, 7, 0.4).unwrap(), 0.4);
        let single = group_privacy_renyi(2.0, 0.5, 1, 0.25).unwrap();
        assert_relative_eq!(single, (0.25 * (-0.25f64).exp()).powi(2), max_relative = 1e-12);
        assert_abs_diff_eq!(single, 0.037908, epsilon = 1e-6);
    }

    #[test]
    fn renyi_general_bound_dominates_simplified_floor() {
        for &(alpha, eps, dist) in &[(4.0, 0.1, 3u64), (10.0, 0.05, 9), (2.0, 1.0, 1)] {
            let general = group_privacy_renyi(alpha, eps, dist, 0.25).unwrap();
            let floor = renyi_simplified_floor(alpha, eps, dist, 0.25).unwrap();
            assert!(general >= floor, "{alpha} {eps} {dist}: {general} < {floor}");
        }
    }

    #[test]
    fn renyi_rejects_small_alpha() {
        assert!(group_privacy_renyi(1.0, 0.1, 1, 0.5).is_err());
        assert!(renyi_simplified_floor(3.0, 0.1, 3, 0.25).is_err());
        assert!(renyi_simplified_floor(4.0, 0.1, 3, 0.2).is_err());
    }

    #[test]
    fn renyi_large_alpha_approaches_pure() {
        let r = group_privacy_renyi(1e6, 0.7, 1, 0.3).unwrap();
        let p = group_privacy_pure(0.7, 1, 0.3).unwrap();
        assert_relative_eq!(r, p, max_relative = 1e-4);
    }

    #[test]
    fn simple_composition_examples() {
        assert_eq!(
            compose_simple(PrivacyClaim::Pure { epsilon: 1.0 }, 3).unwrap(),
            PrivacyClaim::Pure { epsilon: 3.0 }
        );
        match compose_simple(
            PrivacyClaim::Approx {
                epsilon: 0.1,
                delta: 1e-7,
            },
            20,
        )
        .unwrap()
        {
            PrivacyClaim::Approx { epsilon, delta } => {
                assert_relative_eq!(epsilon, 2.0, max_relative = 1e-15);
                assert_relative_eq!(delta, 2e-6, max_relative = 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            compose_simple(PrivacyClaim::Pure { epsilon: 0.0 }, 100).unwrap(),
            PrivacyClaim::Pure { epsilon: 0.0 }
        );
    }

    #[test]
    fn simple_composition_rejects_renyi_and_zero_runs() {
        assert!(compose_simple(
            PrivacyClaim::Renyi {
                alpha: 2.0,
                epsilon: 1.0
            },
            2
        )
        .is_err());
        assert!(compose_simple(PrivacyClaim::Pure { epsilon: 1.0 }, 0).is_err());
    }

    #[test]
    fn advanced_composition_examples() {
        let a = compose_advanced(0.1, 0.0, 100, 1e-6).unwrap();
        assert_abs_diff_eq!(a.epsilon(), 6.2565, epsilon = 1e-4);
        assert_eq!(a.delta(), Some(1e-6));
        let z = compose_advanced(0.0, 0.0, 50, 0.01).unwrap();
        assert_eq!(
            z,
            PrivacyClaim::Approx {
                epsilon: 0.0,
                delta: 0.01
            }
        );
        let one = compose_advanced(1.0, 0.0, 1, 1e-3).unwrap();
        assert_abs_diff_eq!(one.epsilon(), 4.7169, epsilon = 1e-4);
    }

    #[test]
    fn advanced_composition_rejects_bad_delta_prime() {
        assert!(compose_advanced(0.1, 0.0, 10, 0.0).is_err());
        assert!(compose_advanced(0.1, 0.0, 10, 1.0).is_err());
    }

    #[test]
    fn advanced_beats_simple_past_a_crossover() {
        for &(eps, dp) in &[(0.1, 1e-6), (0.05, 1e-9), (0.5, 1e-3)] {
            let grid: Vec<u64> = (0..=24).map(|i| 1u64 << i).collect();
            let wins: Vec<bool> = grid
                .iter()
                .map(|&t| compose_advanced(eps, 0.0, t, dp).unwrap().epsilon() < t as f64 * eps)
                .collect();
            let first = wins.iter().position(|&w| w);
            let first = first.unwrap_or_else(|| panic!("no crossover for eps={eps}"));
            assert!(wins[first..].iter().all(|&w| w), "advanced stops winning for eps={eps}");
        }
    }

    // Expected values computed independently in double precision:
    //   ln(1/(8e-6)) / (2 ln 4000)  = 0.7074993233426119
    //   ln(1/(8e-6)) / (40 ln 8000) = 0.03264663401301806
    //   ln(1/(44e-6)) / (2e ln 4000) = 0.22246772661611702
    #[test]
    fn lower_bound_curves() {
        assert_abs_diff_eq!(
            lb_privacy_overhead(1000.0, 1e-6, LowerBoundVariant::SameInput).unwrap(),
            0.7074993233426119,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lb_privacy_overhead(1000.0, 1e-6, LowerBoundVariant::Coded).unwrap(),
            0.03264663401301806,
            epsilon = 1e-12
        );
        assert_eq!(lb_privacy_overhead(50.0, 0.125, LowerBoundVariant::Coded).unwrap(), 0.0);
        assert_abs_diff_eq!(
            lb_privacy_overhead_renyi(1000.0, 1e-6).unwrap(),
            0.22246772661611702,
            epsilon = 1e-12
        );
        assert_eq!(lb_privacy_overhead_renyi(1000.0, 1.0 / 44.0).unwrap(), 0.0);
        let t = 10f64.exp() / 4.0;
        assert_abs_diff_eq!(lb_privacy_overhead_renyi(t, 1e-4).unwrap(), 0.099809, epsilon = 1e-6);
    }

    #[test]
    fn hyperparameter_curve_matches_coded() {
        let a = lb_privacy_overhead(77.0, 1e-5, LowerBoundVariant::Coded).unwrap();
        let b = lb_privacy_overhead(77.0, 1e-5, LowerBoundVariant::Hyperparameter).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vacuous_gamma_clamps() {
        assert_eq!(
            lb_privacy_overhead(10.0, 0.2, LowerBoundVariant::SameInput).unwrap(),
            0.0
        );
        assert!(lb_privacy_overhead(0.5, 0.01, LowerBoundVariant::SameInput).is_err());
        assert!(lb_privacy_overhead(10.0, 1.0, LowerBoundVariant::SameInput).is_err());
    }

    #[test]
    fn hybrid_bound_examples() {
        let b = ub_hybrid(3, 1e-6, 1, 1.0).unwrap();
        assert_eq!(b.privacy, PrivacyClaim::Pure { epsilon: 9.0 });
        assert_relative_eq!(b.expected_calls, 300.0, max_relative = 1e-12);
        let b = ub_hybrid(1, 0.1, 1, 1.0).unwrap();
        assert_eq!(b.privacy, PrivacyClaim::Pure { epsilon: 3.0 });
        assert_relative_eq!(b.expected_calls, 10.0, max_relative = 1e-12);
        let b = ub_hybrid(2, 1e-4, 10, 0.5).unwrap();
        assert_eq!(b.privacy, PrivacyClaim::Pure { epsilon: 3.0 });
        assert_relative_eq!(b.expected_calls, 2000.0, max_relative = 1e-12);
    }

    fn query(t_grid: Vec<f64>) -> FrontierQuery {
        FrontierQuery {
            gamma: 1e-6,
            arms: 1,
            t_grid,
            same_input: false,
        }
    }

    #[test]
    fn frontier_examples() {
        let rows = frontier_sweep(&query(vec![1e6, 300.0, 10.0]), 1.0).unwrap();
        assert_eq!(rows.iter().map(|r| r.t).collect::<Vec<_>>(), vec![10.0, 300.0, 1e6]);
        assert_eq!(rows[0].c_upper, None);
        assert_eq!(rows[1].c_upper, Some(3));
        assert_eq!(rows[2].c_upper, Some(1));
        assert!(rows.iter().all(FrontierRow::consistent));
    }

    #[test]
    fn frontier_rejects_bad_query() {
        assert!(frontier_sweep(&query(vec![]), 1.0).is_err());
        assert!(frontier_sweep(&query(vec![0.5]), 1.0).is_err());
    }

    #[test]
    fn frontier_variant_selection() {
        let mut q = query(vec![10.0]);
        assert_eq!(q.variant(), LowerBoundVariant::Coded);
        q.same_input = true;
        assert_eq!(q.variant(), LowerBoundVariant::SameInput);
        q.arms = 4;
        assert_eq!(q.variant(), LowerBoundVariant::Hyperparameter);
    }
}
