use std::fs;
use std::path::Path;

use privrep_core::adversarial::{DpVerification, MAX_EXHAUSTIVE_DIM};
use privrep_core::harness::{simulate as run_simulation, SimulationRow};
use privrep_core::mechanism::{ArmUniform, ArmView, CoinMechanism};
use privrep_core::rng::GADGET_DOMAIN;
use privrep_core::table::{Cell, Record};
use privrep_core::{
    coin_mechanism, frontier_sweep, randomized_response_mechanism, renyi_frontier, run_lower_bound_experiment,
    verify_dp_exhaustive, write_csv, Algorithm, BallGadget, Dataset, Error, ExactIndexedMechanism, ExactMechanism,
    FrontierQuery, GadgetVariant, HyperBallGadget, LowerBoundConfig, Mechanism, MechanismFamily, Oracle, RandomSource,
    TrialPlan, TwoPointGadget,
};

use crate::settings::Settings;
use crate::Failure;

const DP_TOLERANCE: f64 = 1e-9;

fn prepare(out: &Path, settings: &Settings) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })?;
    settings.effective().save(&out.join("manifest.txt"))?;
    Ok(())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Core(Error::InvalidInput(msg.into()))
}

/// `points` values from `lo` to `hi`, evenly spaced in log scale, snapped to
/// integers when within rounding of one.
fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if !(lo >= 1.0 && hi >= lo && hi.is_finite()) {
        return Err(invalid(format!("need 1 <= t_min <= t_max, got {lo} and {hi}")));
    }
    if points == 0 || (points == 1 && lo != hi) {
        return Err(invalid("points must be at least 2 unless t_min == t_max"));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..points)
        .map(|i| {
            let t = 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64);
            if (t - t.round()).abs() <= 1e-9 * t {
                t.round()
            } else {
                t
            }
        })
        .collect())
}

pub fn frontier(mut s: Settings, out: &Path) -> Result<(), Failure> {
    let gamma = s.get("gamma", 1e-6)?;
    let arms = s.get("arms", 1u32)?;
    let epsilon = s.get("epsilon", 1.0)?;
    let same_input = s.get("same_input", false)?;
    let t_grid = if s.has("t") {
        s.list::<f64>("t", "")?
    } else {
        let lo = s.get("t_min", 10.0)?;
        let hi = s.get("t_max", 1e6)?;
        let points = s.get("points", 11usize)?;
        log_grid(lo, hi, points)?
    };
    let query = FrontierQuery {
        gamma,
        arms,
        t_grid,
        same_input,
    };
    query.validate()?;
    if query.lower_bound_vacuous() {
        eprintln!("warning: gamma = {gamma} >= 1/8, the lower-bound curve is identically zero");
    }
    let rows = frontier_sweep(&query, epsilon)?;
    let renyi = renyi_frontier(&query)?;
    prepare(out, &s)?;
    write_csv(&rows, &out.join("frontier.csv"))?;
    write_csv(&renyi, &out.join("frontier_renyi.csv"))?;
    println!("{} lower bound, gamma={gamma}, K={arms}", query.variant().name());
    println!(
        "{:>12} {:>12} {:>8} {:>14} {:>12}",
        "T", "c_lower", "c_upper", "calls_upper", "c_renyi"
    );
    for (r, q) in rows.iter().zip(&renyi) {
        let c_upper = r.c_upper.map_or("inf".to_string(), |c| c.to_string());
        let calls = r.expected_calls_upper.map_or("inf".to_string(), |c| format!("{c:.4}"));
        println!(
            "{:>12} {:>12.6} {:>8} {:>14} {:>12.6}",
            r.t, r.c_lower, c_upper, calls, q.c_lower_renyi
        );
    }
    let bad: Vec<f64> = rows.iter().filter(|r| !r.consistent()).map(|r| r.t).collect();
    if !bad.is_empty() {
        return Err(Failure::Assertion(format!("c_lower > c_upper at T = {bad:?}")));
    }
    Ok(())
}

fn algorithm(name: &str, gamma: f64, c: u32, t: u64) -> Result<Algorithm, Failure> {
    let alg = match name {
        "naive" => Algorithm::NaiveMax { t },
        "lt" => Algorithm::LiuTalwar { gamma },
        "hybrid" => Algorithm::Hybrid { gamma, c },
        "metaselect" => Algorithm::Metaselect { gamma, c },
        other => {
            return Err(invalid(format!(
                "unknown algorithm {other:?} (expected naive, lt, hybrid or metaselect)"
            )))
        }
    };
    alg.validate()?;
    Ok(alg)
}

pub fn simulate(mut s: Settings, out: &Path, jobs: usize) -> Result<(), Failure> {
    let alg_name: String = s.get("alg", "lt".to_string())?;
    let mut p = s.list::<f64>("p", "0.5")?;
    let arms = s.get("arms", p.len())?;
    if p.len() == 1 && arms > 1 {
        p = vec![p[0]; arms];
    }
    if p.len() != arms || arms == 0 {
        return Err(invalid(format!("--p lists {} arms but --arms is {arms}", p.len())));
    }
    let (gammas, cs, ts): (Vec<f64>, Vec<u32>, Vec<u64>) = match alg_name.as_str() {
        "naive" => (vec![f64::NAN], vec![1], s.list("t", "10")?),
        "lt" => (s.list("gamma", "0.1")?, vec![1], vec![1]),
        _ => (s.list("gamma", "0.1")?, s.list("c", "1")?, vec![1]),
    };
    let trials = s.get("trials", 100_000u64)?;
    let seed = s.seed()?;
    let coins = p
        .iter()
        .map(|&pk| coin_mechanism(pk, 1.0, 0.0))
        .collect::<privrep_core::Result<Vec<CoinMechanism>>>()?;
    let family = MechanismFamily::new(coins)?;
    let mixture = ArmUniform::new(&family)?;
    let d = Dataset::zeros(1)?;
    let metaselect = alg_name == "metaselect";
    let (oracle, target) = if metaselect {
        (Oracle::Family(&family), family.best_arm_median(&d)?)
    } else if arms == 1 {
        let coin = family.arm(0).expect("one arm");
        (Oracle::Single(coin as &dyn Mechanism), coin.median(&d)?)
    } else {
        (Oracle::Single(&mixture as &dyn Mechanism), mixture.median(&d)?)
    };
    let plan = TrialPlan::new(trials, seed).with_parallelism(jobs);
    prepare(out, &s)?;
    let mut rows = Vec::new();
    for &gamma in &gammas {
        for &c in &cs {
            for &t in &ts {
                let alg = algorithm(&alg_name, gamma, c, t)?;
                let report = run_simulation(&alg, oracle, &d, target, &plan)?;
                println!(
                    "{} {}: failure {} | calls {} (expected {}) | privacy {}",
                    alg.tag(),
                    describe(&alg),
                    report.failure,
                    report.calls,
                    report.expected_calls,
                    report.privacy
                );
                rows.push(SimulationRow {
                    algorithm: alg,
                    arms,
                    target,
                    report,
                });
            }
        }
    }
    write_csv(&rows, &out.join("simulate.csv"))?;
    Ok(())
}

fn describe(alg: &Algorithm) -> String {
    match *alg {
        Algorithm::NaiveMax { t } => format!("T={t}"),
        Algorithm::LiuTalwar { gamma } => format!("gamma={gamma}"),
        Algorithm::Hybrid { gamma, c } | Algorithm::Metaselect { gamma, c } => format!("gamma={gamma}, c={c}"),
    }
}

struct VerifyRow {
    gadget: String,
    arm: Option<usize>,
    epsilon: f64,
    radius: Option<usize>,
    dim: usize,
    declared: f64,
    result: DpVerification,
}

impl VerifyRow {
    fn passed(&self) -> bool {
        self.result.within(self.declared, DP_TOLERANCE)
    }
}

impl Record for VerifyRow {
    fn header() -> Vec<&'static str> {
        vec![
            "gadget",
            "arm",
            "epsilon",
            "radius",
            "dim",
            "declared_epsilon",
            "max_log_ratio",
            "pairs",
            "pass",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        let opt = |v: Option<usize>| v.map_or(Cell::Text(String::new()), |x| Cell::Int(x as i64));
        vec![
            Cell::Text(self.gadget.clone()),
            opt(self.arm),
            Cell::Real(self.epsilon),
            opt(self.radius),
            Cell::Int(self.dim as i64),
            Cell::Real(self.declared),
            Cell::Real(self.result.max_log_ratio),
            Cell::Int(self.result.pairs_checked as i64),
            Cell::Text(self.passed().to_string()),
        ]
    }
}

pub fn gadget_verify(mut s: Settings, out: &Path) -> Result<(), Failure> {
    let gadget: String = s.get("gadget", "ball".to_string())?;
    let epsilon = s.get("epsilon", 0.5)?;
    let mut rows = Vec::new();
    let mut row = |arm, radius, dim, mech: &dyn ExactMechanism| -> Result<(), Failure> {
        let result = verify_dp_exhaustive(mech, dim)?;
        rows.push(VerifyRow {
            gadget: gadget.clone(),
            arm,
            epsilon,
            radius,
            dim,
            declared: mech.declared_privacy().epsilon(),
            result,
        });
        Ok(())
    };
    let check_dim = |dim: usize| {
        if dim == 0 || dim > MAX_EXHAUSTIVE_DIM {
            Err(invalid(format!(
                "exhaustive verification needs 1 <= dim <= {MAX_EXHAUSTIVE_DIM}, got {dim}"
            )))
        } else {
            Ok(())
        }
    };
    match gadget.as_str() {
        "ball" | "hyper_ball" => {
            let radius = s.get("radius", 2usize)?;
            let dim = s.get("dim", 8usize)?;
            check_dim(dim)?;
            let seed = s.seed()?;
            let mut rng = RandomSource::derive(seed, GADGET_DOMAIN, 0);
            let center = Dataset::random(dim, &mut rng)?;
            let ball = BallGadget::shrunken(epsilon, radius, center)?;
            if gadget == "ball" {
                row(None, Some(radius), dim, &ball)?;
            } else {
                let arms = s.get("arms", 3usize)?;
                if arms == 0 {
                    return Err(invalid("hyper_ball needs at least one arm"));
                }
                let k_star = rand::Rng::random_range(&mut rng, 0..arms);
                let hyper = HyperBallGadget::new(ball, k_star, arms)?;
                for k in 0..arms {
                    row(Some(k), Some(radius), dim, &ArmView::new(&hyper, k)?)?;
                }
            }
        }
        "two_point" => {
            let radius = s.get("radius", 4usize)?;
            check_dim(radius)?;
            row(
                None,
                Some(radius),
                radius,
                &TwoPointGadget::with_radius(epsilon, radius)?,
            )?;
        }
        "rr" => {
            let dim = s.get("dim", 4usize)?;
            check_dim(dim)?;
            row(None, None, dim, &randomized_response_mechanism(epsilon, 0)?)?;
        }
        "coin" => {
            let p = s.get("p", 0.5)?;
            let dim = s.get("dim", 4usize)?;
            check_dim(dim)?;
            row(None, None, dim, &coin_mechanism(p, 1.0, 0.0)?)?;
        }
        other => {
            return Err(invalid(format!(
                "unknown gadget {other:?} (expected ball, two_point, hyper_ball, rr or coin)"
            )))
        }
    }
    prepare(out, &s)?;
    write_csv(&rows, &out.join("gadget_verify.csv"))?;
    let mut failed = Vec::new();
    for r in &rows {
        let arm = r.arm.map_or(String::new(), |k| format!(" arm {k}"));
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {}{arm}: {} vs declared {}", r.gadget, r.result, r.declared);
        if !r.passed() {
            failed.push(r.arm);
        }
    }
    if !failed.is_empty() {
        return Err(Failure::Assertion(format!(
            "{gadget}: max log-ratio exceeds the declared epsilon"
        )));
    }
    Ok(())
}

pub fn lower_bound(mut s: Settings, out: &Path, jobs: usize) -> Result<(), Failure> {
    let variant: GadgetVariant = s.get::<String>("variant", "two_point".into())?.parse()?;
    let epsilon = s.get("epsilon", 1.0)?;
    let t_budget: f64 = s.get("t", 10.0)?;
    let arms = if variant == GadgetVariant::HyperBall {
        s.get("arms", 5usize)?
    } else {
        1
    };
    let alg_name: String = s.get("alg", "lt".to_string())?;
    let alg = match alg_name.as_str() {
        "naive" => {
            let reps = s.get("reps", t_budget.floor().max(1.0) as u64)?;
            algorithm("naive", f64::NAN, 1, reps)?
        }
        "lt" => algorithm("lt", s.get("gamma", 1.0 / t_budget)?, 1, 1)?,
        name => {
            let gamma = s.get("gamma", 1.0 / t_budget)?;
            let c = s.get("c", 1u32)?;
            algorithm(name, gamma, c, 1)?
        }
    };
    let trials = s.get("trials", 100_000u64)?;
    let seed = s.seed()?;
    let gadget_seed = s.get("gadget_seed", seed)?;
    let resample = s.get("resample", true)?;
    let config = LowerBoundConfig {
        variant,
        epsilon,
        t_budget,
        arms,
        algorithm: alg,
        gadget_seed,
        resample_center: resample,
    };
    let oracle_arms = if variant == GadgetVariant::HyperBall { arms } else { 1 };
    let expected = alg.expected_calls(oracle_arms);
    if expected > config.call_budget() * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "budget exceeded: {} makes {expected} calls in expectation but the gadget is built against {}",
            alg.tag(),
            config.call_budget()
        )));
    }
    prepare(out, &s)?;
    let report = run_lower_bound_experiment(&config, &TrialPlan::new(trials, seed).with_parallelism(jobs))?;
    println!("{report}");
    write_csv(std::slice::from_ref(&report), &out.join("lower_bound.csv"))?;
    report.to_manifest().save(&out.join("report.txt"))?;
    if report.budget_exceeded {
        return Err(invalid(format!(
            "budget exceeded: observed {} calls per run against a budget of {}",
            report.near_calls,
            config.call_budget()
        )));
    }
    if !report.passed() {
        return Err(Failure::Assertion("lower-bound proof step not reproduced".into()));
    }
    println!("PASS");
    Ok(())
}
