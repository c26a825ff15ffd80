use statrs::distribution::{ContinuousCDF, StudentsT};

pub fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(samples);
    (samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Half-width of the two-sided confidence interval for the mean under a
/// Student t distribution. Zero for fewer than two samples.
pub fn error_margin(samples: &[f64], confidence: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive degrees of freedom");
    let q = t.inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    q * std_dev(samples) / (n as f64).sqrt()
}
