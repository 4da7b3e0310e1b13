//! Upper tail of the χ² distribution through the regularized incomplete
//! gamma function Q(df/2, x/2).

use crate::error::{Error, Result};

/// P(X > x) for X ~ χ²(df).
pub fn chi2_sf(x: f64, df: usize) -> Result<f64> {
    if df == 0 {
        return Err(Error::InvalidArgument("χ² degrees of freedom must be positive".into()));
    }
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("χ² statistic must be nonnegative, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(gamma_q(df as f64 / 2.0, x / 2.0))
}

/// Regularized upper incomplete gamma Q(a, x), a > 0, x ≥ 0.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(a, x).clamp(0.0, 1.0)
}
