//! University rankings per area and pairwise ranking comparison.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::natural_id_cmp;
use crate::normalize::Proxy;
use crate::productivity::UdaProductivity;

/// Default minimum average area staff for a university to be ranked.
pub const DEFAULT_MIN_STAFF: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankingError {
    #[error("no university in uda '{0}' reaches the staff threshold")]
    NobodyRanked(String),
    #[error("rankings are for different udas ('{0}' and '{1}')")]
    UdaMismatch(String, String),
    #[error("rankings of uda '{uda_id}' share {common} universities; at least 2 are needed")]
    TooFewCommon { uda_id: String, common: usize },
    #[error("correlation undefined: {0} has no variance")]
    DegenerateCorrelation(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    /// Average area staff below the threshold.
    BelowMinStaff,
    /// Every staffed sector of the area has a zero national average.
    NoNormalizableSds,
    /// Absent from another ranking it was compared against.
    NotInAllRankings,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::BelowMinStaff => "below-min-staff",
            ExclusionReason::NoNormalizableSds => "no-normalizable-sds",
            ExclusionReason::NotInAllRankings => "not-in-all-rankings",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exclusion {
    pub university_id: String,
    pub university_name: String,
    pub staff: f64,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedUniversity {
    pub university_id: String,
    pub university_name: String,
    pub staff: f64,
    pub value: f64,
    /// 1 = highest productivity.
    pub rank: usize,
    /// Shares its value with a neighbour; order among tie-mates follows id.
    pub tied: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ranking {
    pub uda_id: String,
    pub uda_name: String,
    pub proxy: Proxy,
    /// Observation date or JCR edition label.
    pub observation: String,
    pub entries: Vec<RankedUniversity>,
    pub excluded: Vec<Exclusion>,
}

/// Descending value, ties by university id.
fn by_value_desc(a: &RankedUniversity, b: &RankedUniversity) -> Ordering {
    b.value
        .total_cmp(&a.value)
        .then_with(|| natural_id_cmp(&a.university_id, &b.university_id))
}

fn assign_ranks(entries: &mut [RankedUniversity]) {
    for (i, e) in entries.iter_mut().enumerate() {
        e.rank = i + 1;
        e.tied = false;
    }
    for i in 1..entries.len() {
        if entries[i].value == entries[i - 1].value {
            entries[i].tied = true;
            entries[i - 1].tied = true;
        }
    }
}

impl Ranking {
    pub fn rank_of(&self, university_id: &str) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.university_id == university_id)
            .map(|e| e.rank)
    }

    pub fn university_ids(&self) -> BTreeSet<&str> {
        self.entries.iter().map(|e| e.university_id.as_str()).collect()
    }

    /// Keeps only `keep`, preserving order and renumbering ranks 1..N.
    /// Dropped universities move to the exclusion list.
    pub fn restricted_to(&self, keep: &BTreeSet<&str>) -> Ranking {
        let mut out = self.clone();
        let (kept, dropped): (Vec<_>, Vec<_>) = out
            .entries
            .drain(..)
            .partition(|e| keep.contains(e.university_id.as_str()));
        out.entries = kept;
        assign_ranks(&mut out.entries);
        out.excluded.extend(dropped.into_iter().map(|e| Exclusion {
            university_id: e.university_id,
            university_name: e.university_name,
            staff: e.staff,
            reason: ExclusionReason::NotInAllRankings,
        }));
        out
    }

    /// Rebuilds a ranking from ranks alone (for example published rank
    /// lists), recording `value` as N + 1 - rank.
    pub fn from_ranks(
        uda_id: &str,
        proxy: Proxy,
        rows: impl IntoIterator<Item = (String, String, f64, usize)>,
    ) -> Ranking {
        let mut entries: Vec<RankedUniversity> = rows
            .into_iter()
            .map(|(university_id, university_name, staff, rank)| RankedUniversity {
                university_id,
                university_name,
                staff,
                value: 0.0,
                rank,
                tied: false,
            })
            .collect();
        let n = entries.len();
        for e in &mut entries {
            e.value = (n + 1 - e.rank.min(n)) as f64;
        }
        entries.sort_by_key(|e| e.rank);
        Ranking {
            uda_id: uda_id.to_string(),
            uda_name: uda_id.to_string(),
            proxy,
            observation: String::new(),
            entries,
            excluded: Vec::new(),
        }
    }
}

/// Ranks one area's universities by productivity, excluding those whose
/// average area staff is below `min_staff`.
pub fn rank_universities(
    uda_id: &str,
    uda_name: &str,
    proxy: Proxy,
    observation: &str,
    candidates: &[UdaProductivity],
    university_name: impl Fn(&str) -> String,
    min_staff: f64,
) -> Result<Ranking, RankingError> {
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for c in candidates.iter().filter(|c| c.uda_id == uda_id) {
        let name = university_name(&c.university_id);
        if c.staff < min_staff {
            excluded.push(Exclusion {
                university_id: c.university_id.clone(),
                university_name: name,
                staff: c.staff,
                reason: ExclusionReason::BelowMinStaff,
            });
        } else {
            entries.push(RankedUniversity {
                university_id: c.university_id.clone(),
                university_name: name,
                staff: c.staff,
                value: c.value,
                rank: 0,
                tied: false,
            });
        }
    }
    if entries.is_empty() {
        return Err(RankingError::NobodyRanked(uda_id.to_string()));
    }
    entries.sort_by(by_value_desc);
    assign_ranks(&mut entries);
    excluded.sort_by(|a, b| natural_id_cmp(&a.university_id, &b.university_id));
    Ok(Ranking {
        uda_id: uda_id.to_string(),
        uda_name: uda_name.to_string(),
        proxy,
        observation: observation.to_string(),
        entries,
        excluded,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrelationMethod {
    /// Spearman correlation of the two rank vectors.
    #[default]
    Spearman,
    /// Pearson correlation of the underlying productivity values.
    PearsonValues,
}

impl fmt::Display for CorrelationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationMethod::Spearman => "spearman",
            CorrelationMethod::PearsonValues => "pearson-values",
        })
    }
}

impl FromStr for CorrelationMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spearman" => Ok(Self::Spearman),
            "pearson-values" => Ok(Self::PearsonValues),
            other => Err(format!("unknown correlation method '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankingComparison {
    pub uda_id: String,
    pub uda_name: String,
    pub n_universities: usize,
    pub n_changed: usize,
    pub pct_changed: f64,
    pub max_shift: usize,
    pub mean_shift: f64,
    pub median_shift: f64,
    pub correlation: f64,
    pub method: CorrelationMethod,
    /// Universities present in only one of the two rankings.
    pub dropped: Vec<String>,
}

/// Spearman correlation of two permutations of 1..N.
pub fn spearman_permutation(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let d2: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = *x as f64 - *y as f64;
            d * d
        })
        .sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Sample Pearson correlation; `None` when either side is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Median with the two central values averaged for even counts.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Restricts both rankings to their common universities, re-ranked 1..N.
fn common_pair(a: &Ranking, b: &Ranking) -> Result<(Ranking, Ranking, Vec<String>), RankingError> {
    if a.uda_id != b.uda_id {
        return Err(RankingError::UdaMismatch(a.uda_id.clone(), b.uda_id.clone()));
    }
    let ids_a = a.university_ids();
    let ids_b = b.university_ids();
    let common: BTreeSet<&str> = ids_a.intersection(&ids_b).copied().collect();
    if common.len() < 2 {
        return Err(RankingError::TooFewCommon { uda_id: a.uda_id.clone(), common: common.len() });
    }
    let mut dropped: Vec<String> = ids_a
        .symmetric_difference(&ids_b)
        .map(|s| s.to_string())
        .collect();
    dropped.sort_by(|x, y| natural_id_cmp(x, y));
    if dropped.is_empty() {
        Ok((a.clone(), b.clone(), dropped))
    } else {
        Ok((a.restricted_to(&common), b.restricted_to(&common), dropped))
    }
}

pub fn compare_rankings(
    a: &Ranking,
    b: &Ranking,
    method: CorrelationMethod,
) -> Result<RankingComparison, RankingError> {
    let (a, b, dropped) = common_pair(a, b)?;
    let b_by_id: BTreeMap<&str, &RankedUniversity> =
        b.entries.iter().map(|e| (e.university_id.as_str(), e)).collect();
    let pairs: Vec<(&RankedUniversity, &RankedUniversity)> = a
        .entries
        .iter()
        .map(|e| (e, b_by_id[e.university_id.as_str()]))
        .collect();
    let shifts: Vec<usize> = pairs.iter().map(|(x, y)| x.rank.abs_diff(y.rank)).collect();
    let n = shifts.len();
    let n_changed = shifts.iter().filter(|s| **s != 0).count();
    let as_f64: Vec<f64> = shifts.iter().map(|s| *s as f64).collect();
    let correlation = match method {
        CorrelationMethod::Spearman => {
            let ra: Vec<usize> = pairs.iter().map(|(x, _)| x.rank).collect();
            let rb: Vec<usize> = pairs.iter().map(|(_, y)| y.rank).collect();
            spearman_permutation(&ra, &rb)
        }
        CorrelationMethod::PearsonValues => {
            let va: Vec<f64> = pairs.iter().map(|(x, _)| x.value).collect();
            let vb: Vec<f64> = pairs.iter().map(|(_, y)| y.value).collect();
            pearson(&va, &vb).ok_or(RankingError::DegenerateCorrelation("a productivity vector"))?
        }
    };
    Ok(RankingComparison {
        uda_id: a.uda_id.clone(),
        uda_name: a.uda_name.clone(),
        n_universities: n,
        n_changed,
        pct_changed: 100.0 * n_changed as f64 / n as f64,
        max_shift: shifts.iter().copied().max().unwrap_or(0),
        mean_shift: as_f64.iter().sum::<f64>() / n as f64,
        median_shift: median(&as_f64),
        correlation,
        method,
        dropped,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftRow {
    pub university_id: String,
    pub university_name: String,
    pub staff: f64,
    pub rank_a: usize,
    pub rank_b: usize,
    /// rank_a - rank_b; negative means the university ranks better under `a`.
    pub variation: i64,
}

/// Per-university rank pairs ordered by variation, then university id.
pub fn shift_report(a: &Ranking, b: &Ranking) -> Result<Vec<ShiftRow>, RankingError> {
    let (a, b, _) = common_pair(a, b)?;
    let mut rows: Vec<ShiftRow> = a
        .entries
        .iter()
        .map(|e| {
            let rank_b = b.rank_of(&e.university_id).expect("common university");
            ShiftRow {
                university_id: e.university_id.clone(),
                university_name: e.university_name.clone(),
                staff: e.staff,
                rank_a: e.rank,
                rank_b,
                variation: e.rank as i64 - rank_b as i64,
            }
        })
        .collect();
    rows.sort_by(|x, y| {
        x.variation
            .cmp(&y.variation)
            .then_with(|| natural_id_cmp(&x.university_id, &y.university_id))
    });
    Ok(rows)
}
