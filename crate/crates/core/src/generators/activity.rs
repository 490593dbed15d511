use crate::error::{Error, Result};
use crate::rng::Rng;

/// Pareto(x_min = 1) inverse CDF: `(1 - u)^(-1 / (gamma_a - 1))`.
pub fn pareto_inverse_cdf(u: f64, gamma_a: f64) -> f64 {
    (1.0 - u).powf(-1.0 / (gamma_a - 1.0))
}

/// I.i.d. node activities from a continuous Pareto with minimum 1.
pub fn sample_activity(n: usize, gamma_a: f64, rng: &mut Rng) -> Result<Vec<f64>> {
    if gamma_a.is_nan() || gamma_a <= 1.0 {
        return Err(Error::invalid(format!(
            "activity exponent {gamma_a} must exceed 1"
        )));
    }
    Ok((0..n)
        .map(|_| pareto_inverse_cdf(rng.next_f64(), gamma_a))
        .collect())
}
