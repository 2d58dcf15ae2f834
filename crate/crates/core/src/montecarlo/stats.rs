use serde::{Deserialize, Serialize};

use super::{BerCurve, MonteCarloError};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Error count over a number of trials. Merging is plain addition, so any
/// partition of the trials aggregates to the same tally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub errors: u64,
    pub trials: u64,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            errors: self.errors + other.errors,
            trials: self.trials + other.trials,
        }
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.errors, self.trials, Z_95)
    }
}

/// Wilson score interval; at zero errors the lower end is exactly 0.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Least-squares slope of `-ln p` against `s`.
pub fn fit_exponent_points(points: &[(f64, f64)]) -> Result<f64, MonteCarloError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|&(s, p)| (s, -p.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(MonteCarloError::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let sx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let sy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - sx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - sx) * (p.1 - sy)).sum();
    if sxx == 0.0 {
        return Err(MonteCarloError::InsufficientPoints(1));
    }
    Ok(sxy / sxx)
}

/// Empirical error exponent: slope of `-ln BER` over the points with
/// `s ≥ s_min` and at least one observed error.
pub fn fit_error_exponent(curve: &BerCurve, s_min: f64) -> Result<f64, MonteCarloError> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|p| p.s >= s_min && p.errors > 0)
        .map(|p| (p.s, p.empirical_ber))
        .collect();
    fit_exponent_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets() {
        let (lo, hi) = wilson_interval(30, 1000, Z_95);
        assert!(lo < 0.03 && 0.03 < hi);
        // statsmodels proportion_confint(30, 1000, method="wilson")
        assert!((lo - 0.021_093_738_828_834_696).abs() < 1e-12);
        assert!((hi - 0.042_503_414_147_587_126).abs() < 1e-12);
        let (lo, hi) = wilson_interval(0, 1000, Z_95);
        assert_eq!(lo, 0.0);
        assert!((hi - Z_95 * Z_95 / (1000.0 + Z_95 * Z_95)).abs() < 1e-12);
        assert_eq!(wilson_interval(5, 5, Z_95).1, 1.0);
    }

    #[test]
    fn tallies_merge() {
        let a = Tally {
            errors: 3,
            trials: 10,
        };
        let b = Tally {
            errors: 1,
            trials: 5,
        };
        assert_eq!(
            a.merge(b),
            Tally {
                errors: 4,
                trials: 15
            }
        );
        assert_eq!(a.merge(b), b.merge(a));
    }

    #[test]
    fn synthetic_slopes() {
        let one: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, (-(i as f64)).exp())).collect();
        assert!((fit_exponent_points(&one).unwrap() - 1.0).abs() < 1e-9);
        let four: Vec<(f64, f64)> = (1..=10)
            .map(|i| (i as f64 * 0.3, (-4.0 * i as f64 * 0.3).exp()))
            .collect();
        assert!((fit_exponent_points(&four).unwrap() - 4.0).abs() < 1e-9);
        assert!(fit_exponent_points(&[(1.0, 0.1), (2.0, 0.0), (3.0, 0.0)]).is_err());
    }
}
