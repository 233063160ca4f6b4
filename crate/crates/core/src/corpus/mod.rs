//! Domain model and validated ingestion of publication corpora.
//!
//! A corpus is read from eight flat CSV files (see [`CorpusPaths`]). Loading
//! either returns a fully cross-linked [`Corpus`] or the complete list of
//! problems found, each located by file and line.

mod load;
mod model;
mod write;

use std::collections::BTreeMap;

pub use load::{
    load_corpus, CorpusErrors, CorpusPaths, LoadError, LoadErrorKind, AFFILIATIONS, IMPACT_FACTORS, JOURNALS,
    PUBLICATIONS, SCIENTISTS, SNAPSHOTS, STRUCTURE, UNIVERSITIES,
};
pub use model::*;
pub use write::write_corpus;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StaffError {
    #[error("unknown university '{0}'")]
    UnknownUniversity(String),
    #[error("unknown sds '{0}'")]
    UnknownSds(String),
}

/// Average number of scientists affiliated with (university, SDS) over the
/// years of `period`. A scientist present in k of n years contributes k/n.
pub fn staff_count(
    corpus: &Corpus,
    university_id: &str,
    sds_id: &str,
    period: YearRange,
) -> Result<StaffCount, StaffError> {
    if !corpus.structure.universities.contains_key(university_id) {
        return Err(StaffError::UnknownUniversity(university_id.to_string()));
    }
    if !corpus.structure.sds.contains_key(sds_id) {
        return Err(StaffError::UnknownSds(sds_id.to_string()));
    }
    let person_years: usize = corpus
        .scientists
        .values()
        .map(|s| {
            period
                .years()
                .filter_map(|y| s.affiliation_in(y))
                .filter(|a| a.university_id == university_id && a.sds_id == sds_id)
                .count()
        })
        .sum();
    Ok(StaffCount {
        university_id: university_id.to_string(),
        sds_id: sds_id.to_string(),
        value: person_years as f64 / period.len() as f64,
    })
}

/// Staff averages for every (university, SDS) with a nonzero head count in
/// the period. Agrees exactly with [`staff_count`].
#[derive(Clone, Debug, PartialEq)]
pub struct StaffTable {
    pub period: YearRange,
    units: BTreeMap<(String, String), f64>,
}

impl StaffTable {
    pub fn for_period(corpus: &Corpus, period: YearRange) -> Self {
        let mut person_years: BTreeMap<(String, String), usize> = BTreeMap::new();
        for s in corpus.scientists.values() {
            for a in period.years().filter_map(|y| s.affiliation_in(y)) {
                *person_years
                    .entry((a.university_id.clone(), a.sds_id.clone()))
                    .or_default() += 1;
            }
        }
        let years = period.len() as f64;
        let units = person_years
            .into_iter()
            .map(|(k, n)| (k, n as f64 / years))
            .collect();
        Self { period, units }
    }

    pub fn get(&self, university_id: &str, sds_id: &str) -> f64 {
        self.units
            .get(&(university_id.to_string(), sds_id.to_string()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Staffed (university, SDS) pairs with their averages, ordered by key.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.units
            .iter()
            .map(|((u, s), v)| (u.as_str(), s.as_str(), *v))
    }

    /// Head count of a university in a whole area: the sum over its sectors.
    pub fn uda_staff(&self, structure: &OrgStructure, university_id: &str, uda_id: &str) -> f64 {
        structure
            .sds_of_uda(uda_id)
            .map(|s| self.get(university_id, &s.id))
            .sum()
    }
}
