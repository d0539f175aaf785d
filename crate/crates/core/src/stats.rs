//! Small numerical-statistics helpers used by the estimators and the
//! Monte Carlo harnesses.
//!
//! All summations are compensated (Neumaier) and strictly sequential in
//! index order, so results are reproducible bit-for-bit within one build.

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    compensation: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of a slice.
pub fn kahan_sum(xs: &[f64]) -> f64 {
    let mut acc = Kahan::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    kahan_sum(xs) / xs.len() as f64
}

/// Second moment about zero, `mean(x^2)`.
pub fn second_moment(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut acc = Kahan::new();
    for &x in xs {
        acc.add(x * x);
    }
    acc.value() / xs.len() as f64
}

/// Population variance about the sample mean (divides by n).
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    let mut acc = Kahan::new();
    for &x in xs {
        let d = x - m;
        acc.add(d * d);
    }
    acc.value() / xs.len() as f64
}

/// Median of a sample (average of the middle pair for even sizes).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty sample");
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-comparable value"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Sample lag-1 autocorrelation.
pub fn lag1_autocorrelation(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let mut num = Kahan::new();
    let mut den = Kahan::new();
    for w in xs.windows(2) {
        num.add((w[0] - m) * (w[1] - m));
    }
    for &x in xs {
        let d = x - m;
        den.add(d * d);
    }
    let d = den.value();
    if d == 0.0 {
        0.0
    } else {
        num.value() / d
    }
}

/// Standard error of the mean of a (possibly autocorrelated) stationary
/// sequence, estimated by batch means.
///
/// Splits the first `batches * (n / batches)` points into equal batches,
/// and returns `sd(batch means) / sqrt(batches)`. Batch lengths well above
/// the correlation time make the batch means effectively independent.
pub fn batch_means_se(xs: &[f64], batches: usize) -> f64 {
    let b = batches.max(2).min(xs.len().max(1));
    let len = xs.len() / b;
    if len == 0 || b < 2 {
        return f64::INFINITY;
    }
    let means: Vec<f64> = (0..b).map(|i| mean(&xs[i * len..(i + 1) * len])).collect();
    let grand = mean(&means);
    let mut acc = Kahan::new();
    for &m in &means {
        let d = m - grand;
        acc.add(d * d);
    }
    let var_of_means = acc.value() / (b as f64 - 1.0);
    (var_of_means / b as f64).sqrt()
}

/// Least-squares line fit `y = slope * x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len(), "mismatched fit inputs");
    assert!(xs.len() >= 2, "fit needs at least two points");
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = Kahan::new();
    let mut sxx = Kahan::new();
    for (&x, &y) in xs.iter().zip(ys) {
        sxy.add((x - mx) * (y - my));
        sxx.add((x - mx) * (x - mx));
    }
    let slope = sxy.value() / sxx.value();
    (slope, my - slope * mx)
}
