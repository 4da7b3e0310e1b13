//! Scalar helpers shared by the estimators.

/// ln(1 + e^x) without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Logistic function, stable for large |x|.
#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// log Σ exp(xᵢ). Returns -inf for an empty slice or all -inf inputs.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(0.0), 0.5);
        assert!(logistic(700.0) <= 1.0);
        assert!(logistic(-700.0) >= 0.0 && logistic(-700.0).is_finite());
        assert_abs_diff_eq!(logistic(4.0), 1.0 / (1.0 + (-4.0f64).exp()), epsilon = 1e-16);
    }

    #[test]
    fn softplus_matches_naive_in_range() {
        for &x in &[-30.0, -2.0, 0.0, 1.5, 30.0] {
            assert_abs_diff_eq!(softplus(x), (1.0 + f64::exp(x)).ln(), epsilon = 1e-12);
        }
        assert_eq!(softplus(800.0), 800.0);
    }

    #[test]
    fn lse_handles_extremes() {
        assert_abs_diff_eq!(log_sum_exp(&[-1000.0, -1000.0]), -1000.0 + 2f64.ln(), epsilon = 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
