use std::fmt;

use crate::dataset::Dataset;
use crate::error::{invalid, Result};
use crate::mechanism::ExactMechanism;
use crate::outcome::Label;

/// Enumeration guard: `2^dim` datasets are visited.
pub const MAX_EXHAUSTIVE_DIM: usize = 20;

/// Tight pure-DP epsilon of a mechanism on a small Hamming cube.
#[derive(Clone, Debug, PartialEq)]
pub struct DpVerification {
    /// `max |ln Pr[l | u] - ln Pr[l | u']|` over neighbors `u, u'` and labels `l`;
    /// infinite if some label has zero probability on exactly one side.
    pub max_log_ratio: f64,
    /// A neighbor pair and label attaining the maximum.
    pub witness: Option<(Dataset, Dataset, Label)>,
    pub pairs_checked: u64,
}

impl DpVerification {
    pub fn within(&self, epsilon: f64, tolerance: f64) -> bool {
        self.max_log_ratio <= epsilon + tolerance
    }
}

impl fmt::Display for DpVerification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max log-ratio {} over {} neighbor pairs",
            self.max_log_ratio, self.pairs_checked
        )?;
        if let Some((u, v, l)) = &self.witness {
            write!(f, " (attained at {u} vs {v}, label {l})")?;
        }
        Ok(())
    }
}

fn label_probabilities(mech: &dyn ExactMechanism, d: &Dataset) -> Result<Vec<(Label, f64)>> {
    let mut out: Vec<(Label, f64)> = Vec::new();
    for (o, p) in mech.distribution(d)? {
        match out.iter_mut().find(|(l, _)| l == o.label()) {
            Some(slot) => slot.1 += p,
            None => out.push((o.label().clone(), p)),
        }
    }
    Ok(out)
}

fn probability_of(dist: &[(Label, f64)], label: &Label) -> f64 {
    dist.iter().find(|(l, _)| l == label).map_or(0.0, |(_, p)| *p)
}

/// Exhaustively checks every neighbor pair of `{0,1}^dim` using the
/// mechanism's exact probabilities.
pub fn verify_dp_exhaustive(mech: &dyn ExactMechanism, dim: usize) -> Result<DpVerification> {
    if dim == 0 || dim > MAX_EXHAUSTIVE_DIM {
        return Err(invalid(format!(
            "exhaustive verification needs 1 <= dim <= {MAX_EXHAUSTIVE_DIM}, got {dim}"
        )));
    }
    let n = 1u64 << dim;
    let dists = (0..n)
        .map(|i| label_probabilities(mech, &Dataset::from_index(dim, i)?))
        .collect::<Result<Vec<_>>>()?;
    let mut best = DpVerification {
        max_log_ratio: 0.0,
        witness: None,
        pairs_checked: 0,
    };
    for i in 0..n {
        for bit in 0..dim {
            let j = i | 1 << bit;
            if j == i {
                continue;
            }
            best.pairs_checked += 1;
            let (a, b) = (&dists[i as usize], &dists[j as usize]);
            for label in a.iter().chain(b.iter()).map(|(l, _)| l) {
                let (pa, pb) = (probability_of(a, label), probability_of(b, label));
                let ratio = match (pa > 0.0, pb > 0.0) {
                    (false, false) => continue,
                    (true, true) => (pa.ln() - pb.ln()).abs(),
                    _ => f64::INFINITY,
                };
                if ratio > best.max_log_ratio || (ratio == f64::INFINITY && best.witness.is_none()) {
                    best.max_log_ratio = ratio;
                    best.witness = Some((
                        Dataset::from_index(dim, i)?,
                        Dataset::from_index(dim, j)?,
                        label.clone(),
                    ));
                }
            }
        }
    }
    Ok(best)
}
