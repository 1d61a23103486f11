//! Mechanism outputs: an opaque label paired with a real quality score.

use std::borrow::Cow;
use std::fmt;

use crate::error::{invalid, Result};

/// Opaque output identifier. Static labels clone without allocating.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Cow<'static, str>);

impl Label {
    pub const fn from_static(s: &'static str) -> Self {
        Label(Cow::Borrowed(s))
    }

    pub fn new(s: impl Into<String>) -> Self {
        Label(Cow::Owned(s.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A `(label, value)` pair. The value is always finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    label: Label,
    value: f64,
}

impl Outcome {
    pub fn new(label: Label, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(invalid(format!("outcome value must be finite, got {value}")));
        }
        Ok(Self { label, value })
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

const MASS_TOLERANCE: f64 = 1e-12;

/// `sup { z : Pr[v >= z] >= 1/2 }` over a finite weighted support.
///
/// Probabilities must be non-negative and sum to one within `1e-12`. The
/// supremum is attained at a support point, namely the largest value whose
/// upper-tail mass reaches one half.
pub fn median_of_values(weighted_values: &[(f64, f64)]) -> Result<f64> {
    upper_quantile(weighted_values, 0.5)
}

/// `sup { z : Pr[v >= z] >= level }` over a finite weighted support.
pub fn upper_quantile(weighted_values: &[(f64, f64)], level: f64) -> Result<f64> {
    if weighted_values.is_empty() {
        return Err(invalid("median of an empty distribution"));
    }
    if !(level > 0.0 && level <= 1.0) {
        return Err(invalid(format!("tail level {level} must lie in (0, 1]")));
    }
    let mut total = 0.0;
    for &(v, p) in weighted_values {
        if !v.is_finite() {
            return Err(invalid(format!("support value {v} is not finite")));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(invalid(format!("probability {p} is not a valid mass")));
        }
        total += p;
    }
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(invalid(format!("probabilities sum to {total}, not 1")));
    }

    let mut support: Vec<(f64, f64)> = weighted_values.iter().copied().filter(|&(_, p)| p > 0.0).collect();
    support.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Sum equal values together so the tail mass is evaluated once per point.
    let mut tail = 0.0;
    let mut i = 0;
    while i < support.len() {
        let v = support[i].0;
        while i < support.len() && support[i].0 == v {
            tail += support[i].1;
            i += 1;
        }
        if tail >= level - MASS_TOLERANCE {
            return Ok(v);
        }
    }
    // Unreachable for normalized input: the full mass is ~1 >= level.
    Ok(support.last().map(|s| s.0).unwrap_or(f64::NEG_INFINITY))
}
