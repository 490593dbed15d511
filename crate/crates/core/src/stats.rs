//! Small numeric helpers shared by the experiment modules.

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q + k)^(-s)` for `s > 1`, `q > 0`,
/// via Euler–Maclaurin summation after ten explicit terms.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const N: usize = 10;
    // B_2, B_4, ..., B_12
    const BERNOULLI: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let mut sum: f64 = (0..N).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + N as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2) / (2j)!
    let mut coeff = s;
    let mut fact = 2.0;
    let mut power = a.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        sum += b / fact * coeff * power;
        let m = 2.0 * (j as f64 + 1.0);
        coeff *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        power /= a * a;
    }
    sum
}

/// Discrete power-law maximum-likelihood exponent for the values `>= x_min`:
/// maximizes `-α Σ ln x - n ln ζ(α, x_min)` by golden-section search on
/// `(1, 10]`. `None` when fewer than two values qualify.
pub fn discrete_powerlaw_alpha(values: &[usize], x_min: usize) -> Option<f64> {
    let tail: Vec<f64> = values
        .iter()
        .filter(|&&x| x >= x_min && x > 0)
        .map(|&x| x as f64)
        .collect();
    if tail.len() < 2 || x_min == 0 {
        return None;
    }
    let n = tail.len() as f64;
    let sum_ln: f64 = tail.iter().map(|x| x.ln()).sum();
    let log_lik = |alpha: f64| -alpha * sum_ln - n * hurwitz_zeta(alpha, x_min as f64).ln();
    let (mut lo, mut hi) = (1.0 + 1e-6, 10.0);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (log_lik(a), log_lik(b));
    while hi - lo > 1e-9 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = log_lik(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = log_lik(a);
        }
    }
    Some(0.5 * (lo + hi))
}

/// Median of a non-empty slice (mean of the two middle values for even
/// lengths). NaN-free input assumed.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (`n - 1` denominator); 0 for a single value.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|x| (x - m).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: partial sum plus the integral tail estimate.
    fn zeta_brute(s: f64, q: f64) -> f64 {
        let big = 2_000_000usize;
        let partial: f64 = (0..big).map(|k| (q + k as f64).powf(-s)).sum();
        partial + (q + big as f64 - 0.5).powf(1.0 - s) / (s - 1.0)
    }

    #[test]
    fn zeta_reference_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - pi2_6).abs() < 1e-13);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_3).abs() < 1e-13);
        for &(s, q) in &[(2.5, 10.0), (1.5, 3.0), (3.2, 25.0)] {
            let rel = (hurwitz_zeta(s, q) - zeta_brute(s, q)).abs() / zeta_brute(s, q);
            assert!(rel < 1e-9, "s = {s}, q = {q}: {rel}");
        }
    }

    #[test]
    fn powerlaw_recovers_exponent() {
        // exact discrete power-law sample by inverse-CDF on a fine table
        let alpha = 2.7;
        let x_min = 5usize;
        let z = hurwitz_zeta(alpha, x_min as f64);
        let mut rng = crate::rng::Rng::new(17);
        let mut xs = Vec::new();
        for _ in 0..20_000 {
            let u = rng.next_f64();
            let mut x = x_min;
            let mut cdf = (x as f64).powf(-alpha) / z;
            while cdf < u && x < 1_000_000 {
                x += 1;
                cdf += (x as f64).powf(-alpha) / z;
            }
            xs.push(x);
        }
        let est = discrete_powerlaw_alpha(&xs, x_min).unwrap();
        assert!((est - alpha).abs() < 0.05, "{est}");
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
        assert!((std_dev(&[1.0, 2.0, 3.0, 4.0]) - 1.2909944487358056).abs() < 1e-12);
    }
}
