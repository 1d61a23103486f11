use std::fmt;

use crate::error::{check_nonneg, check_range, invalid, Result};

/// A differential-privacy guarantee.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PrivacyClaim {
    /// `epsilon`-DP.
    Pure { epsilon: f64 },
    /// `(epsilon, delta)`-DP.
    Approx { epsilon: f64, delta: f64 },
    /// `(alpha, epsilon)`-Rényi DP.
    Renyi { alpha: f64, epsilon: f64 },
}

impl PrivacyClaim {
    pub fn pure(epsilon: f64) -> Result<Self> {
        check_nonneg("epsilon", epsilon)?;
        Ok(Self::Pure { epsilon })
    }

    pub fn approx(epsilon: f64, delta: f64) -> Result<Self> {
        check_nonneg("epsilon", epsilon)?;
        check_range("delta", delta, 0.0, 1.0)?;
        Ok(Self::Approx { epsilon, delta })
    }

    pub fn renyi(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(invalid(format!("Rényi order alpha = {alpha} must exceed 1")));
        }
        check_nonneg("epsilon", epsilon)?;
        Ok(Self::Renyi { alpha, epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        match *self {
            Self::Pure { epsilon } | Self::Approx { epsilon, .. } | Self::Renyi { epsilon, .. } => epsilon,
        }
    }

    /// `delta` of a pure or approximate claim; `None` for Rényi claims.
    pub fn delta(&self) -> Option<f64> {
        match *self {
            Self::Pure { .. } => Some(0.0),
            Self::Approx { delta, .. } => Some(delta),
            Self::Renyi { .. } => None,
        }
    }

    /// `Approx { epsilon, 0 }` becomes `Pure { epsilon }`; everything else is unchanged.
    pub fn normalized(self) -> Self {
        match self {
            Self::Approx { epsilon, delta: 0.0 } => Self::Pure { epsilon },
            other => other,
        }
    }

    /// Equality after normalization.
    pub fn same_guarantee(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl fmt::Display for PrivacyClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Pure { epsilon } => write!(f, "pure(epsilon={epsilon})"),
            Self::Approx { epsilon, delta } => write!(f, "approx(epsilon={epsilon}, delta={delta})"),
            Self::Renyi { alpha, epsilon } => write!(f, "renyi(alpha={alpha}, epsilon={epsilon})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_delta_normalizes_to_pure() {
        let a = PrivacyClaim::approx(0.7, 0.0).unwrap();
        let p = PrivacyClaim::pure(0.7).unwrap();
        assert_ne!(a, p);
        assert!(a.same_guarantee(&p));
        assert!(!PrivacyClaim::approx(0.7, 1e-9).unwrap().same_guarantee(&p));
    }

    #[test]
    fn constructors_check_ranges() {
        assert!(PrivacyClaim::pure(-1.0).is_err());
        assert!(PrivacyClaim::pure(f64::NAN).is_err());
        assert!(PrivacyClaim::approx(1.0, 1.5).is_err());
        assert!(PrivacyClaim::renyi(1.0, 1.0).is_err());
        assert!(PrivacyClaim::renyi(2.0, 1.0).is_ok());
    }
}
