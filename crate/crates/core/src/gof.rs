//! Goodness-of-fit statistics used to validate samplers and simulators.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
/// Sorts `samples` in place.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        let lo = f - i as f64 / n;
        let hi = (i + 1) as f64 / n - f;
        d.max(lo).max(hi)
    })
}

/// Asymptotic KS critical value `c(α)/√n`.
pub fn ks_critical(n: usize, significance: f64) -> f64 {
    (-0.5 * (significance / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

/// Two-sample KS statistic between empirical samples (both sorted in place).
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Pearson χ² test of binned counts against expected bin probabilities.
/// Bins with expected count below 5 are pooled into their neighbour.
/// Returns `(statistic, p_value)`.
pub fn chi_square_test(counts: &[u64], probabilities: &[f64]) -> (f64, f64) {
    assert_eq!(counts.len(), probabilities.len());
    let total: u64 = counts.iter().sum();
    let n = total as f64;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probabilities) {
        obs += c as f64;
        exp += p * n;
        if exp >= 5.0 {
            pooled.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if let Some(last) = pooled.last_mut() {
        last.0 += obs;
        last.1 += exp;
    }
    let stat: f64 = pooled.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (pooled.len().max(2) - 1) as f64;
    let p = 1.0 - ChiSquared::new(dof).expect("dof > 0").cdf(stat);
    (stat, p)
}

/// Bins `samples` on the edges `edges[0] < ... < edges[k]`; values outside
/// are counted in an overflow bin appended at the end.
pub fn histogram(samples: &[f64], edges: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; edges.len()];
    for &x in samples {
        let idx = edges.partition_point(|&e| e <= x);
        if idx == 0 || idx == edges.len() {
            counts[edges.len() - 1] += 1;
        } else {
            counts[idx - 1] += 1;
        }
    }
    counts
}

/// Standard error of a binomial proportion.
pub fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
