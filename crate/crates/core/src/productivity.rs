//! Scientific strength, sector productivity and area roll-up.
//!
//! Scientific strength of a (university, SDS) unit is the sum of quality
//! indices of the period's publications having at least one author from the
//! unit in the publication year; a publication counts once per unit however
//! many of its authors belong there. Productivity divides strength by the
//! unit's average head count. Area productivity is the staff-share weighted
//! sum of each sector's productivity relative to its national average, so
//! 1.0 means national-average performance.
//!
//! Sums run over publications in ascending id order, so results are
//! reproducible to the bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, OrgStructure, StaffTable, YearRange};
use crate::normalize::{Proxy, ScoreSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProductivityError {
    #[error("no quality score for publication '{0}'")]
    MissingScore(String),
    #[error("university '{university_id}' has no staff in sds '{sds_id}'")]
    NoStaff { university_id: String, sds_id: String },
    #[error("no university has staff in sds '{0}'")]
    NoActiveUniversity(String),
    #[error("university '{university_id}' has no staffed, normalizable sds in uda '{uda_id}'")]
    NoStaffedSds { university_id: String, uda_id: String },
}

/// How the national reference productivity of a sector is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NationalAverageMode {
    /// Total strength over total staff of all active universities.
    #[default]
    Pooled,
    /// Unweighted mean of the active universities' productivities.
    Mean,
}

impl fmt::Display for NationalAverageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NationalAverageMode::Pooled => "pooled",
            NationalAverageMode::Mean => "mean",
        })
    }
}

impl FromStr for NationalAverageMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pooled" => Ok(Self::Pooled),
            "mean" => Ok(Self::Mean),
            other => Err(format!("unknown national average mode '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScientificStrength {
    pub university_id: String,
    pub sds_id: String,
    pub proxy: Proxy,
    pub value: f64,
    pub publications: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdsProductivity {
    pub university_id: String,
    pub sds_id: String,
    pub proxy: Proxy,
    pub strength: f64,
    pub staff: f64,
    pub value: f64,
}

/// National reference productivity of one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SdsBaseline {
    pub sds_id: String,
    pub value: f64,
    pub universities: usize,
}

impl SdsBaseline {
    /// A sector with no national output cannot normalize anything.
    pub fn is_normalizable(&self) -> bool {
        self.value > 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UdaProductivity {
    pub university_id: String,
    pub uda_id: String,
    pub proxy: Proxy,
    pub value: f64,
    /// Average head count over every staffed sector of the area.
    pub staff: f64,
    /// Staffed sectors left out because their national average is zero.
    pub dropped_sds: Vec<String>,
}

/// Strength of one unit over the period.
pub fn scientific_strength(
    corpus: &Corpus,
    scores: &ScoreSet,
    university_id: &str,
    sds_id: &str,
    period: YearRange,
) -> Result<ScientificStrength, ProductivityError> {
    let unit = (university_id.to_string(), sds_id.to_string());
    let mut value = 0.0;
    let mut publications = 0;
    for p in corpus.publications_in(period) {
        if corpus.attributed_units(p).contains(&unit) {
            let score = scores
                .get(&p.id)
                .ok_or_else(|| ProductivityError::MissingScore(p.id.clone()))?;
            value += score.value;
            publications += 1;
        }
    }
    Ok(ScientificStrength {
        university_id: unit.0,
        sds_id: unit.1,
        proxy: scores.spec.proxy(),
        value,
        publications,
    })
}

pub fn sds_productivity(strength: &ScientificStrength, staff: f64) -> Result<SdsProductivity, ProductivityError> {
    if staff <= 0.0 {
        return Err(ProductivityError::NoStaff {
            university_id: strength.university_id.clone(),
            sds_id: strength.sds_id.clone(),
        });
    }
    Ok(SdsProductivity {
        university_id: strength.university_id.clone(),
        sds_id: strength.sds_id.clone(),
        proxy: strength.proxy,
        strength: strength.value,
        staff,
        value: strength.value / staff,
    })
}

/// Reference productivity over every university active in one sector.
pub fn national_average_sds(
    sds_id: &str,
    productivities: &[SdsProductivity],
    mode: NationalAverageMode,
) -> Result<SdsBaseline, ProductivityError> {
    let active: Vec<&SdsProductivity> = productivities
        .iter()
        .filter(|p| p.sds_id == sds_id && p.staff > 0.0)
        .collect();
    if active.is_empty() {
        return Err(ProductivityError::NoActiveUniversity(sds_id.to_string()));
    }
    let value = match mode {
        NationalAverageMode::Pooled => {
            let strength: f64 = active.iter().map(|p| p.strength).sum();
            let staff: f64 = active.iter().map(|p| p.staff).sum();
            strength / staff
        }
        NationalAverageMode::Mean => active.iter().map(|p| p.value).sum::<f64>() / active.len() as f64,
    };
    Ok(SdsBaseline { sds_id: sds_id.to_string(), value, universities: active.len() })
}

/// Area productivity of a university: sum over its staffed, normalizable
/// sectors of (P_s / P*_s) weighted by the sector's share of that staff.
pub fn uda_productivity(
    structure: &OrgStructure,
    productivities: &[SdsProductivity],
    baselines: &BTreeMap<String, SdsBaseline>,
    university_id: &str,
    uda_id: &str,
) -> Result<UdaProductivity, ProductivityError> {
    let sectors: BTreeSet<&str> = structure.sds_of_uda(uda_id).map(|s| s.id.as_str()).collect();
    let staffed: Vec<&SdsProductivity> = productivities
        .iter()
        .filter(|p| p.university_id == university_id && sectors.contains(p.sds_id.as_str()) && p.staff > 0.0)
        .collect();
    let no_sds = || ProductivityError::NoStaffedSds {
        university_id: university_id.to_string(),
        uda_id: uda_id.to_string(),
    };
    if staffed.is_empty() {
        return Err(no_sds());
    }
    let staff: f64 = staffed.iter().map(|p| p.staff).sum();
    let (included, dropped): (Vec<&SdsProductivity>, Vec<&SdsProductivity>) = staffed
        .into_iter()
        .partition(|p| baselines.get(&p.sds_id).is_some_and(SdsBaseline::is_normalizable));
    if included.is_empty() {
        return Err(no_sds());
    }
    let weight_total: f64 = included.iter().map(|p| p.staff).sum();
    let value = included
        .iter()
        .map(|p| (p.value / baselines[&p.sds_id].value) * (p.staff / weight_total))
        .sum();
    Ok(UdaProductivity {
        university_id: university_id.to_string(),
        uda_id: uda_id.to_string(),
        proxy: included[0].proxy,
        value,
        staff,
        dropped_sds: dropped.into_iter().map(|p| p.sds_id.clone()).collect(),
    })
}

/// Every productivity figure for one proxy and period.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductivityTable {
    pub proxy: Proxy,
    pub period: YearRange,
    /// Staffed (university, SDS) units, ordered by (university, sds).
    pub sds: Vec<SdsProductivity>,
    pub baselines: BTreeMap<String, SdsBaseline>,
    /// Ordered by (uda, university).
    pub uda: Vec<UdaProductivity>,
    /// Universities with area staff but no normalizable sector: (uda, university).
    pub unnormalizable: Vec<(String, String)>,
}

impl ProductivityTable {
    pub fn compute(
        corpus: &Corpus,
        scores: &ScoreSet,
        period: YearRange,
        mode: NationalAverageMode,
    ) -> Result<Self, ProductivityError> {
        let staff = StaffTable::for_period(corpus, period);
        let mut strength: BTreeMap<(String, String), (f64, usize)> = staff
            .iter()
            .map(|(u, s, _)| ((u.to_string(), s.to_string()), (0.0, 0)))
            .collect();
        for p in corpus.publications_in(period) {
            let units = corpus.attributed_units(p);
            if units.is_empty() {
                continue;
            }
            let score = scores
                .get(&p.id)
                .ok_or_else(|| ProductivityError::MissingScore(p.id.clone()))?;
            for unit in units {
                let entry = strength.entry(unit).or_insert((0.0, 0));
                entry.0 += score.value;
                entry.1 += 1;
            }
        }
        let proxy = scores.spec.proxy();
        let mut sds = Vec::with_capacity(strength.len());
        for ((university_id, sds_id), (value, publications)) in strength {
            let add = staff.get(&university_id, &sds_id);
            let ss = ScientificStrength { university_id, sds_id, proxy, value, publications };
            sds.push(sds_productivity(&ss, add)?);
        }

        let mut baselines = BTreeMap::new();
        for sds_id in corpus.structure.sds.keys() {
            if let Ok(b) = national_average_sds(sds_id, &sds, mode) {
                baselines.insert(sds_id.clone(), b);
            }
        }

        let mut uda = Vec::new();
        let mut unnormalizable = Vec::new();
        for uda_id in corpus.structure.udas.keys() {
            for university_id in corpus.structure.universities.keys() {
                if staff.uda_staff(&corpus.structure, university_id, uda_id) <= 0.0 {
                    continue;
                }
                match uda_productivity(&corpus.structure, &sds, &baselines, university_id, uda_id) {
                    Ok(p) => uda.push(p),
                    Err(ProductivityError::NoStaffedSds { .. }) => {
                        unnormalizable.push((uda_id.clone(), university_id.clone()))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(Self { proxy, period, sds, baselines, uda, unnormalizable })
    }

    pub fn uda_entries<'a>(&'a self, uda_id: &'a str) -> impl Iterator<Item = &'a UdaProductivity> + 'a {
        self.uda.iter().filter(move |p| p.uda_id == uda_id)
    }
}
