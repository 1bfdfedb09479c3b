/// Number of quantile levels at which two pools are compared.
pub const KS_QUANTILES: usize = 512;

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    s
}

fn cdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&y| y <= x) as f64 / sorted.len() as f64
}

/// Kolmogorov distance between the empirical laws of `a` and `b`, evaluated
/// at the [`KS_QUANTILES`] quantiles of each sample.
pub fn kolmogorov_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let mut worst: f64 = 0.0;
    for s in [&sa, &sb] {
        for q in 0..KS_QUANTILES {
            let idx = ((q as f64 + 0.5) / KS_QUANTILES as f64 * s.len() as f64) as usize;
            let x = s[idx.min(s.len() - 1)];
            worst = worst.max((cdf(&sa, x) - cdf(&sb, x)).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_disjoint() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(kolmogorov_distance(&a, &a), 0.0);
        let b: Vec<f64> = a.iter().map(|x| x + 5000.0).collect();
        assert!(kolmogorov_distance(&a, &b) > 0.99);
    }

    #[test]
    fn point_masses() {
        assert_eq!(kolmogorov_distance(&[1.0; 10], &[1.0; 20]), 0.0);
        assert_eq!(kolmogorov_distance(&[0.0; 10], &[1.0; 10]), 1.0);
        let half: Vec<f64> = (0..100).map(|i| if i < 50 { 0.0 } else { 1.0 }).collect();
        assert!((kolmogorov_distance(&[0.0; 10], &half) - 0.5).abs() < 1e-12);
    }
}
