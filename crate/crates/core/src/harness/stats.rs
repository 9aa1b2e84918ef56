//! Binomial intervals and trend tests for logical-error-rate curves.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
/// One-sided 95% normal quantile.
pub const Z95_ONE_SIDED: f64 = 1.644_853_626_951_472_2;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Mann–Kendall statistic `S` and its tie-corrected normal score.
pub fn mann_kendall(values: &[f64]) -> (i64, f64) {
    let n = values.len();
    let mut s: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            s += match values[j].partial_cmp(&values[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut tie_term = 0.0;
    let mut k = 0;
    while k < n {
        let mut t = 1;
        while k + t < n && sorted[k + t] == sorted[k] {
            t += 1;
        }
        let t = t as f64;
        tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
        k += t as usize;
    }
    let nf = n as f64;
    let var = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - tie_term) / 18.0;
    let z = if var <= 0.0 {
        0.0
    } else if s > 0 {
        (s as f64 - 1.0) / var.sqrt()
    } else if s < 0 {
        (s as f64 + 1.0) / var.sqrt()
    } else {
        0.0
    };
    (s, z)
}

/// One-sided two-proportion z score for "rate at `a` exceeds rate at `b`".
pub fn drop_z(fail_a: u64, trials_a: u64, fail_b: u64, trials_b: u64) -> f64 {
    let (na, nb) = (trials_a as f64, trials_b as f64);
    let pooled = (fail_a + fail_b) as f64 / (na + nb);
    let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
    if se == 0.0 {
        return 0.0;
    }
    (fail_a as f64 / na - fail_b as f64 / nb) / se
}

/// Outcome of checking a curve of `(failures, trials)` for a non-decreasing trend.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneTrend {
    pub mann_kendall_s: i64,
    pub mann_kendall_z: f64,
    /// Largest pairwise drop score over all `i < j`.
    pub worst_drop_z: f64,
    /// Pairs `(i, j)`, `i < j`, whose rate decreases significantly.
    pub significant_drops: Vec<(usize, usize)>,
}

impl MonotoneTrend {
    /// Mann–Kendall shows an increasing trend at one-sided 95% and no pair of
    /// points decreases significantly at one-sided 95% after a Bonferroni
    /// correction over all pairs.
    pub fn is_monotone(&self) -> bool {
        self.mann_kendall_z > Z95_ONE_SIDED && self.significant_drops.is_empty()
    }
}

pub fn monotone_trend(points: &[(u64, u64)]) -> MonotoneTrend {
    let rates: Vec<f64> = points.iter().map(|&(f, t)| f as f64 / t as f64).collect();
    let (s, z) = mann_kendall(&rates);
    let pairs = points.len() * points.len().saturating_sub(1) / 2;
    let threshold = bonferroni_z(pairs.max(1));
    let mut worst = f64::NEG_INFINITY;
    let mut drops = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dz = drop_z(points[i].0, points[i].1, points[j].0, points[j].1);
            worst = worst.max(dz);
            if dz > threshold {
                drops.push((i, j));
            }
        }
    }
    MonotoneTrend {
        mann_kendall_s: s,
        mann_kendall_z: z,
        worst_drop_z: worst,
        significant_drops: drops,
    }
}

/// One-sided normal quantile for level `0.05 / m`, by bisection on the tail.
fn bonferroni_z(m: usize) -> f64 {
    let target = 0.05 / m as f64;
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if upper_tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Standard normal upper tail `P(Z > x)` via the complementary error function.
fn upper_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Complementary error function (Numerical Recipes `erfcc`, |rel err| < 1.2e-7).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let r = t
        * (-z * z - 1.265_512_23
            + t * (1.000_023_68
                + t * (0.374_091_96
                    + t * (0.096_784_18
                        + t * (-0.186_288_06
                            + t * (0.278_868_07
                                + t * (-1.135_203_98
                                    + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77)))))))))
            .exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}
