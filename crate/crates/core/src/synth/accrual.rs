use statrs::distribution::{ContinuousCDF, Gamma};

use super::{DisciplineProfile, SynthError};

/// Share of lifetime citations received within `lag_years` of publication.
///
/// The citation rate is a gamma density with the profile's shape and its
/// mode placed at `peak_lag_years`.
pub fn accrual_fraction(profile: &DisciplineProfile, lag_years: f64) -> Result<f64, SynthError> {
    if lag_years.is_nan() || lag_years < 0.0 {
        return Err(SynthError::Invalid(format!("negative lag {lag_years}")));
    }
    Ok(AccrualCurve::new(profile)?.fraction(lag_years))
}

#[derive(Clone, Debug)]
pub(crate) struct AccrualCurve {
    gamma: Gamma,
}

impl AccrualCurve {
    pub(crate) fn new(profile: &DisciplineProfile) -> Result<Self, SynthError> {
        let k = profile.accrual_shape;
        if !(k > 1.0 && profile.peak_lag_years > 0.0) {
            return Err(SynthError::Invalid("accrual curve needs shape > 1 and a positive peak".into()));
        }
        let scale = profile.peak_lag_years / (k - 1.0);
        let gamma = Gamma::new(k, 1.0 / scale).map_err(|e| SynthError::Invalid(e.to_string()))?;
        Ok(Self { gamma })
    }

    pub(crate) fn fraction(&self, lag_years: f64) -> f64 {
        if lag_years <= 0.0 {
            0.0
        } else {
            self.gamma.cdf(lag_years).clamp(0.0, 1.0)
        }
    }

    /// Expected share of lifetime citations an article collects during the
    /// census year of a two-year impact-factor window, averaged over the two
    /// cited publication years and a uniform publication date within each.
    pub(crate) fn impact_window(&self) -> f64 {
        // the cited-year-minus-one cohort is seen at lags 1-u..2-u, the
        // cited-year-minus-two cohort at 2-u..3-u
        let g = |u: f64| 0.5 * (self.fraction(3.0 - u) - self.fraction(1.0 - u));
        simpson(g, 0.0, 1.0, 256)
    }
}

pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}
