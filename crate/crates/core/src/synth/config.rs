use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::SynthError;
use crate::corpus::YearRange;

/// Citation life cycle and quality structure of one area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisciplineProfile {
    #[serde(default)]
    pub name: Option<String>,
    /// Years from publication to the peak citation rate.
    pub peak_lag_years: f64,
    /// Gamma shape of the citation rate; must exceed 1 for an interior mode.
    #[serde(default = "default_accrual_shape")]
    pub accrual_shape: f64,
    /// Location of log lifetime citations.
    #[serde(default = "default_log_mean")]
    pub log_mean: f64,
    /// Scale of log lifetime citations.
    #[serde(default = "default_log_sd")]
    pub log_sd: f64,
    /// Share of log-citation variance carried by journal quality.
    pub journal_coupling: f64,
}

fn default_accrual_shape() -> f64 {
    3.0
}
fn default_log_mean() -> f64 {
    2.0
}
fn default_log_sd() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub period: YearRange,
    pub snapshot_dates: Vec<NaiveDate>,
    /// JCR editions to emit impact factors for; defaults to every period year.
    #[serde(default)]
    pub jcr_editions: Vec<i32>,
    pub universities: usize,
    #[serde(default = "default_sds_per_uda")]
    pub sds_per_uda: usize,
    pub min_scientists_per_sds: usize,
    pub max_scientists_per_sds: usize,
    #[serde(default = "default_one")]
    pub publications_per_scientist_year: usize,
    #[serde(default = "default_journals")]
    pub journals_per_category: usize,
    /// Probability that a publication gets a second author from the same SDS.
    #[serde(default)]
    pub coauthor_probability: f64,
    /// Probability that a scientist is affiliated for only part of the period.
    #[serde(default)]
    pub partial_affiliation_probability: f64,
    /// Probability that a journal is also listed in a second category of its area.
    #[serde(default)]
    pub cross_listed_share: f64,
    /// Spread of latent university strength, which tilts journal choice.
    #[serde(default = "default_one_f")]
    pub university_strength_sd: f64,
    /// Replace random timing and binomial accrual with mid-year publication
    /// and rounded expected counts.
    #[serde(default)]
    pub deterministic_accrual: bool,
    pub uda: BTreeMap<String, DisciplineProfile>,
}

fn default_sds_per_uda() -> usize {
    2
}
fn default_one() -> usize {
    1
}
fn default_one_f() -> f64 {
    1.0
}
fn default_journals() -> usize {
    10
}

fn unit_interval(name: &str, v: f64) -> Result<(), SynthError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(SynthError::Invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

impl DisciplineProfile {
    pub fn validate(&self, uda_id: &str) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Invalid(format!("uda '{uda_id}': {m}")));
        if !(self.peak_lag_years.is_finite() && self.peak_lag_years > 0.0) {
            return bad(format!("peak_lag_years must be positive, got {}", self.peak_lag_years));
        }
        if !(self.accrual_shape.is_finite() && self.accrual_shape > 1.0) {
            return bad(format!("accrual_shape must exceed 1, got {}", self.accrual_shape));
        }
        if !(self.log_sd.is_finite() && self.log_sd >= 0.0) || !self.log_mean.is_finite() {
            return bad("log_mean and log_sd must be finite, log_sd nonnegative".into());
        }
        unit_interval(&format!("uda '{uda_id}': journal_coupling"), self.journal_coupling)
    }
}

impl SynthConfig {
    pub fn from_toml(text: &str) -> Result<Self, SynthError> {
        let config: SynthConfig = toml::from_str(text).map_err(|e| SynthError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, SynthError> {
        let text = std::fs::read_to_string(path).map_err(|e| SynthError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            SynthError::Parse(m) => SynthError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn editions(&self) -> Vec<i32> {
        if self.jcr_editions.is_empty() {
            self.period.years().collect()
        } else {
            self.jcr_editions.clone()
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let invalid = |m: &str| Err(SynthError::Invalid(m.into()));
        if self.universities == 0
            || self.sds_per_uda == 0
            || self.min_scientists_per_sds == 0
            || self.publications_per_scientist_year == 0
            || self.journals_per_category == 0
        {
            return invalid("all counts must be at least 1");
        }
        if self.min_scientists_per_sds > self.max_scientists_per_sds {
            return invalid("min_scientists_per_sds exceeds max_scientists_per_sds");
        }
        if self.sds_per_uda > 99 {
            return invalid("sds_per_uda must be at most 99");
        }
        if self.uda.is_empty() {
            return invalid("at least one [uda.<id>] section is required");
        }
        if self.snapshot_dates.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("snapshot_dates must be strictly increasing");
        }
        unit_interval("coauthor_probability", self.coauthor_probability)?;
        unit_interval("partial_affiliation_probability", self.partial_affiliation_probability)?;
        unit_interval("cross_listed_share", self.cross_listed_share)?;
        if !(self.university_strength_sd.is_finite() && self.university_strength_sd >= 0.0) {
            return invalid("university_strength_sd must be finite and nonnegative");
        }
        for (id, p) in &self.uda {
            if id.is_empty() || id.contains(['/', ';', ',']) {
                return Err(SynthError::Invalid(format!("invalid uda id '{id}'")));
            }
            p.validate(id)?;
        }
        Ok(())
    }
}
