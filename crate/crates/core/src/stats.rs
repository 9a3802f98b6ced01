//! Small sample-statistics helpers used by the Monte-Carlo checks.

use serde::Serialize;

/// Mean, unbiased standard deviation and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
}

impl Summary {
    pub fn of(xs: impl IntoIterator<Item = f64>) -> Self {
        // Welford
        let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
        for x in xs {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
        }
        let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        Self {
            n,
            mean,
            std_dev: var.sqrt(),
        }
    }

    pub fn std_err(&self) -> f64 {
        if self.n == 0 {
            return f64::NAN;
        }
        self.std_dev / (self.n as f64).sqrt()
    }

    /// Half-width of the normal-approximation 95% confidence interval.
    pub fn ci95(&self) -> f64 {
        1.96 * self.std_err()
    }
}

/// Kolmogorov-Smirnov statistic of `sample` against the continuous `cdf`.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite sample"));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample KS critical value at significance `level`
/// (`sqrt(-ln(level/2)/2) / sqrt(n)`).
pub fn ks_critical(n: usize, level: f64) -> f64 {
    (-(level / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Sorted `(value, empirical quantile)` pairs, quantile `i/n` for the
/// i-th smallest value (1-based).
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut xs = values.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite value"));
    let n = xs.len() as f64;
    xs.into_iter()
        .enumerate()
        .map(|(i, x)| (x, (i + 1) as f64 / n))
        .collect()
}

/// Linear-interpolated percentile of a sample, `q` in [0, 100].
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut xs = values.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite value"));
    if xs.is_empty() {
        return f64::NAN;
    }
    let pos = q / 100.0 * (xs.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    xs[lo] + (xs[hi] - xs[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_known_sample() {
        let s = Summary::of([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std_dev - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.std_err() - s.std_dev / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ks_of_uniform_grid_is_small() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.0005).abs() < 1e-12);
        // 1.6276 / sqrt(n) at the 1% level
        assert!((ks_critical(10_000, 0.01) - 0.016276).abs() < 1e-5);
    }

    #[test]
    fn percentiles() {
        let xs = [5.0, 1.0, 3.0, 2.0, 4.0];
        assert_eq!(percentile(&xs, 0.0), 1.0);
        assert_eq!(percentile(&xs, 50.0), 3.0);
        assert_eq!(percentile(&xs, 100.0), 5.0);
        assert_eq!(percentile(&xs, 10.0), 1.4);
        let cdf = empirical_cdf(&xs);
        assert_eq!(cdf[0], (1.0, 0.2));
        assert_eq!(cdf[4], (5.0, 1.0));
    }
}
