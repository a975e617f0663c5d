//! Sample statistics shared by the Monte Carlo harnesses.

use serde::{Deserialize, Serialize};

/// Running power sums of an integer-valued sample. Integer accumulation keeps
/// the result independent of the order in which batches are merged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntMoments {
    pub count: u64,
    sum: [i128; 4],
}

impl IntMoments {
    pub fn push(&mut self, x: i64) {
        let x = x as i128;
        self.count += 1;
        self.sum[0] += x;
        self.sum[1] += x * x;
        self.sum[2] += x * x * x;
        self.sum[3] += x * x * x * x;
    }

    pub fn merge(mut self, other: IntMoments) -> IntMoments {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(other.sum) {
            *a += b;
        }
        self
    }

    pub fn summary(&self) -> SampleSummary {
        if self.count == 0 {
            return SampleSummary::default();
        }
        let t = self.count as f64;
        let mean = self.sum[0] as f64 / t;
        let (m2, m4) = self
            .exact_central()
            .unwrap_or_else(|| self.shifted_central());
        let variance = if self.count > 1 { m2 * t / (t - 1.0) } else { 0.0 };
        // Var(s²) ≈ (μ₄ − (T−3)/(T−1)·σ⁴)/T
        let se_variance = if self.count > 3 {
            ((m4 - (t - 3.0) / (t - 1.0) * variance * variance) / t)
                .max(0.0)
                .sqrt()
        } else {
            0.0
        };
        SampleSummary {
            count: self.count,
            mean,
            variance,
            se_mean: (variance / t).sqrt(),
            se_variance,
        }
    }

    /// Population central moments μ₂, μ₄ from the integer sums, when the
    /// scaled numerators fit in i128.
    fn exact_central(&self) -> Option<(f64, f64)> {
        let t = self.count as i128;
        let [s1, s2, s3, s4] = self.sum;
        let t2 = t.checked_mul(t)?;
        let t3 = t2.checked_mul(t)?;
        let s1_2 = s1.checked_mul(s1)?;
        let m2_num = t.checked_mul(s2)?.checked_sub(s1_2)?;
        let m4_num = t3
            .checked_mul(s4)?
            .checked_sub(4i128.checked_mul(t2)?.checked_mul(s3)?.checked_mul(s1)?)?
            .checked_add(6i128.checked_mul(t)?.checked_mul(s2)?.checked_mul(s1_2)?)?
            .checked_sub(3i128.checked_mul(s1_2)?.checked_mul(s1_2)?)?;
        let tf = t as f64;
        Some((m2_num as f64 / (tf * tf), m4_num as f64 / tf.powi(4)))
    }

    fn shifted_central(&self) -> (f64, f64) {
        let t = self.count as f64;
        let mean = self.sum[0] as f64 / t;
        let raw: Vec<f64> = self.sum.iter().map(|&s| s as f64 / t).collect();
        let m2 = raw[1] - mean * mean;
        let m4 = raw[3] - 4.0 * mean * raw[2] + 6.0 * mean * mean * raw[1]
            - 3.0 * mean.powi(4);
        (m2.max(0.0), m4.max(0.0))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub se_mean: f64,
    /// Standard error of the sample variance (fourth-central-moment formula).
    pub se_variance: f64,
}

/// Mean, unbiased variance and standard error of a float sample.
pub fn mean_var(xs: &[f64]) -> (f64, f64, f64) {
    let t = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / t;
    if xs.len() < 2 {
        return (mean, 0.0, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, var, (var / t).sqrt())
}

/// Sample covariance (unbiased).
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    let t = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / t;
    let my = ys.iter().sum::<f64>() / t;
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (t - 1.0)
}

/// Least-squares fit of log y = log c + exponent·log x.
///
/// Returns `None` with fewer than two usable points (y must be positive).
pub fn power_law_exponent(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 || pts.len() != xs.len() {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
