//! Percentile quality indices for publications.
//!
//! Two proxies are supported. Article citations are ranked within the
//! cohort of corpus publications sharing a subject category and a
//! publication year, using the cumulative count as of an observation date.
//! Journal impact factors are ranked within the journals (or, optionally,
//! the publications) of a subject category for one JCR edition.
//!
//! The percentile is the share of the cohort strictly below the value, so a
//! publication can never reach 100 and tied values share the lower
//! percentile. Publications listed in several categories receive the mean
//! of their per-category percentiles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Publication};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NormalizeError {
    #[error("empty cohort")]
    EmptyCohort,
    #[error("value {0} is not a member of the cohort")]
    NotInCohort(f64),
    #[error("non-finite value in cohort")]
    NonFinite,
    #[error("unknown publication '{0}'")]
    UnknownPublication(String),
    #[error("publication '{publication}' has no citation snapshot on or before {date}")]
    NoSnapshot { publication: String, date: NaiveDate },
    #[error("journal '{journal}' has no impact factor for JCR {edition} in category '{category}'")]
    MissingImpactFactor { journal: String, edition: i32, category: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proxy {
    /// Citations received by the article itself.
    Citations,
    /// Impact factor of the journal carrying the article.
    ImpactFactor,
}

impl fmt::Display for Proxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proxy::Citations => "citations",
            Proxy::ImpactFactor => "impact-factor",
        })
    }
}

impl FromStr for Proxy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "citations" => Ok(Proxy::Citations),
            "impact-factor" => Ok(Proxy::ImpactFactor),
            other => Err(format!("unknown proxy '{other}'")),
        }
    }
}

/// Who populates an impact-factor cohort.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JournalWeighting {
    /// One member per journal carrying a value for the (edition, category).
    #[default]
    Journal,
    /// One member per corpus publication in the category, valued at its
    /// journal's impact factor.
    Publication,
}

impl fmt::Display for JournalWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JournalWeighting::Journal => "journal",
            JournalWeighting::Publication => "publication",
        })
    }
}

impl FromStr for JournalWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "journal" => Ok(JournalWeighting::Journal),
            "publication" => Ok(JournalWeighting::Publication),
            other => Err(format!("unknown journal weighting '{other}'")),
        }
    }
}

/// What a score is computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "proxy", rename_all = "kebab-case")]
pub enum ScoringSpec {
    Citations { date: NaiveDate },
    ImpactFactor { edition: i32, weighting: JournalWeighting },
}

impl ScoringSpec {
    pub fn proxy(&self) -> Proxy {
        match self {
            ScoringSpec::Citations { .. } => Proxy::Citations,
            ScoringSpec::ImpactFactor { .. } => Proxy::ImpactFactor,
        }
    }

    /// `2008-03-31` or `jcr2006`.
    pub fn observation_label(&self) -> String {
        match self {
            ScoringSpec::Citations { date } => date.to_string(),
            ScoringSpec::ImpactFactor { edition, .. } => format!("jcr{edition}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CohortKey {
    pub category_id: String,
    /// Publication year; only citation cohorts are split by year.
    pub year: Option<i32>,
}

impl fmt::Display for CohortKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.year {
            Some(y) => write!(f, "{}/{}", self.category_id, y),
            None => write!(f, "{}", self.category_id),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cohort {
    pub key: CohortKey,
    /// (member id, raw metric). Members are publications, or journals for
    /// journal-weighted impact-factor cohorts.
    pub members: Vec<(String, f64)>,
}

/// A publication that could not be scored, and why.
#[derive(Clone, Debug, PartialEq)]
pub struct Skip {
    pub publication_id: String,
    pub reason: NormalizeError,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CohortSet {
    pub cohorts: Vec<Cohort>,
    pub skipped: Vec<Skip>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QualityScore {
    pub publication_id: String,
    pub proxy: Proxy,
    /// Percentile in [0, 100).
    pub value: f64,
    pub categories: Vec<String>,
    pub year: i32,
    pub observation: String,
}

impl QualityScore {
    pub fn cohort_label(&self) -> String {
        let cats = self.categories.join(";");
        match self.proxy {
            Proxy::Citations => format!("{cats}/{}/{}", self.year, self.observation),
            Proxy::ImpactFactor => format!("{cats}/{}", self.observation),
        }
    }
}

/// Cohort values sorted once for repeated strict-below queries.
#[derive(Clone, Debug)]
pub struct SortedCohort {
    values: Vec<f64>,
}

impl SortedCohort {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Result<Self, NormalizeError> {
        let mut values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(NormalizeError::EmptyCohort);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NormalizeError::NonFinite);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn percentile(&self, value: f64) -> Result<f64, NormalizeError> {
        let below = self.values.partition_point(|v| *v < value);
        if self.values.get(below) != Some(&value) {
            return Err(NormalizeError::NotInCohort(value));
        }
        Ok(100.0 * below as f64 / self.values.len() as f64)
    }
}

/// Percentage of `cohort` strictly below `value`. `value` must be a member.
pub fn percentile_rank(value: f64, cohort: &[f64]) -> Result<f64, NormalizeError> {
    SortedCohort::new(cohort.iter().copied())?.percentile(value)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn publication<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Publication, NormalizeError> {
    corpus
        .publications
        .get(id)
        .ok_or_else(|| NormalizeError::UnknownPublication(id.to_string()))
}

fn journal_if(corpus: &Corpus, p: &Publication, edition: i32, category: &str) -> Result<f64, NormalizeError> {
    corpus
        .journals
        .get(&p.journal_id)
        .and_then(|j| j.impact_factor(edition, category))
        .ok_or_else(|| NormalizeError::MissingImpactFactor {
            journal: p.journal_id.clone(),
            edition,
            category: category.to_string(),
        })
}

fn citations(p: &Publication, date: NaiveDate) -> Result<f64, NormalizeError> {
    p.citations_at(date)
        .map(|c| c as f64)
        .ok_or_else(|| NormalizeError::NoSnapshot { publication: p.id.clone(), date })
}

/// Citation percentile of one publication as of `date`, against every
/// same-category, same-year corpus publication observed by then.
pub fn qi_article(corpus: &Corpus, publication_id: &str, date: NaiveDate) -> Result<QualityScore, NormalizeError> {
    let p = publication(corpus, publication_id)?;
    let own = citations(p, date)?;
    let mut percentiles = Vec::with_capacity(p.category_ids.len());
    for category in &p.category_ids {
        let cohort: Vec<f64> = corpus
            .publications
            .values()
            .filter(|q| q.year == p.year && q.category_ids.contains(category))
            .filter_map(|q| q.citations_at(date))
            .map(|c| c as f64)
            .collect();
        percentiles.push(percentile_rank(own, &cohort)?);
    }
    Ok(QualityScore {
        publication_id: p.id.clone(),
        proxy: Proxy::Citations,
        value: mean(&percentiles),
        categories: p.category_ids.iter().cloned().collect(),
        year: p.year,
        observation: date.to_string(),
    })
}

/// Impact-factor percentile of a publication's journal within each of its
/// categories for JCR `edition`.
pub fn qi_journal(
    corpus: &Corpus,
    publication_id: &str,
    edition: i32,
    weighting: JournalWeighting,
) -> Result<QualityScore, NormalizeError> {
    let p = publication(corpus, publication_id)?;
    let mut percentiles = Vec::with_capacity(p.category_ids.len());
    for category in &p.category_ids {
        let own = journal_if(corpus, p, edition, category)?;
        let cohort: Vec<f64> = match weighting {
            JournalWeighting::Journal => corpus
                .journals
                .values()
                .filter_map(|j| j.impact_factor(edition, category))
                .collect(),
            JournalWeighting::Publication => corpus
                .publications
                .values()
                .filter(|q| q.category_ids.contains(category))
                .filter_map(|q| journal_if(corpus, q, edition, category).ok())
                .collect(),
        };
        percentiles.push(percentile_rank(own, &cohort)?);
    }
    Ok(QualityScore {
        publication_id: p.id.clone(),
        proxy: Proxy::ImpactFactor,
        value: mean(&percentiles),
        categories: p.category_ids.iter().cloned().collect(),
        year: p.year,
        observation: format!("jcr{edition}"),
    })
}

/// Partitions the scorable members of the corpus into cohorts. Citation
/// cohorts hold publications keyed by (category, year); journal-weighted
/// impact-factor cohorts hold journals keyed by category. Publications that
/// cannot be scored are listed in `skipped`.
pub fn build_cohorts(corpus: &Corpus, spec: &ScoringSpec) -> CohortSet {
    let mut cohorts: BTreeMap<CohortKey, Vec<(String, f64)>> = BTreeMap::new();
    let mut skipped = Vec::new();
    match *spec {
        ScoringSpec::Citations { date } => {
            for p in corpus.publications.values() {
                match citations(p, date) {
                    Ok(c) => {
                        for category in &p.category_ids {
                            let key = CohortKey { category_id: category.clone(), year: Some(p.year) };
                            cohorts.entry(key).or_default().push((p.id.clone(), c));
                        }
                    }
                    Err(reason) => skipped.push(Skip { publication_id: p.id.clone(), reason }),
                }
            }
        }
        ScoringSpec::ImpactFactor { edition, weighting } => {
            if weighting == JournalWeighting::Journal {
                for j in corpus.journals.values() {
                    for ((e, category), value) in &j.impact_factors {
                        if *e == edition {
                            let key = CohortKey { category_id: category.clone(), year: None };
                            cohorts.entry(key).or_default().push((j.id.clone(), *value));
                        }
                    }
                }
            }
            for p in corpus.publications.values() {
                let values: Result<Vec<(String, f64)>, _> = p
                    .category_ids
                    .iter()
                    .map(|c| journal_if(corpus, p, edition, c).map(|v| (c.clone(), v)))
                    .collect();
                match values {
                    Ok(values) if weighting == JournalWeighting::Publication => {
                        for (category, v) in values {
                            let key = CohortKey { category_id: category, year: None };
                            cohorts.entry(key).or_default().push((p.id.clone(), v));
                        }
                    }
                    Ok(_) => {}
                    Err(reason) => skipped.push(Skip { publication_id: p.id.clone(), reason }),
                }
            }
        }
    }
    CohortSet {
        cohorts: cohorts
            .into_iter()
            .map(|(key, members)| Cohort { key, members })
            .collect(),
        skipped,
    }
}

/// Scores for every scorable publication under one spec.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreSet {
    pub spec: ScoringSpec,
    pub scores: BTreeMap<String, QualityScore>,
    pub skipped: Vec<Skip>,
}

impl ScoreSet {
    pub fn get(&self, publication_id: &str) -> Option<&QualityScore> {
        self.scores.get(publication_id)
    }
}

/// Scores the whole corpus in one pass over its cohorts. Each score equals
/// what [`qi_article`] or [`qi_journal`] returns for the same publication.
pub fn score_corpus(corpus: &Corpus, spec: &ScoringSpec) -> ScoreSet {
    let set = build_cohorts(corpus, spec);
    let mut sorted: BTreeMap<&CohortKey, SortedCohort> = BTreeMap::new();
    for cohort in &set.cohorts {
        let s = SortedCohort::new(cohort.members.iter().map(|(_, v)| *v)).expect("cohorts are nonempty and finite");
        sorted.insert(&cohort.key, s);
    }
    let skipped_ids: BTreeSet<&str> = set.skipped.iter().map(|s| s.publication_id.as_str()).collect();
    let mut scores = BTreeMap::new();
    for p in corpus.publications.values() {
        if skipped_ids.contains(p.id.as_str()) {
            continue;
        }
        let mut percentiles = Vec::with_capacity(p.category_ids.len());
        for category in &p.category_ids {
            let (year, raw) = match *spec {
                ScoringSpec::Citations { date } => (Some(p.year), citations(p, date)),
                ScoringSpec::ImpactFactor { edition, .. } => (None, journal_if(corpus, p, edition, category)),
            };
            let key = CohortKey { category_id: category.clone(), year };
            let raw = raw.expect("scorable publication");
            percentiles.push(sorted[&key].percentile(raw).expect("member of own cohort"));
        }
        scores.insert(
            p.id.clone(),
            QualityScore {
                publication_id: p.id.clone(),
                proxy: spec.proxy(),
                value: mean(&percentiles),
                categories: p.category_ids.iter().cloned().collect(),
                year: p.year,
                observation: spec.observation_label(),
            },
        );
    }
    ScoreSet { spec: *spec, scores, skipped: set.skipped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Journal, Publication};
    use proptest::prelude::*;

    /// Independent strict-comparison count.
    fn brute_percentile(value: f64, cohort: &[f64]) -> f64 {
        let mut below = 0usize;
        for &c in cohort {
            if c < value {
                below += 1;
            }
        }
        100.0 * below as f64 / cohort.len() as f64
    }

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn publication(id: &str, year: i32, journal: &str, cats: &[&str], cites: u64) -> Publication {
        Publication {
            id: id.into(),
            year,
            journal_id: journal.into(),
            category_ids: cats.iter().map(|c| c.to_string()).collect(),
            author_ids: BTreeSet::new(),
            snapshots: [(d("2008-03-31"), cites)].into(),
        }
    }

    fn corpus_of(pubs: Vec<Publication>, journals: Vec<(&str, Vec<(i32, &str, f64)>)>) -> Corpus {
        let mut c = Corpus::default();
        for p in pubs {
            c.publications.insert(p.id.clone(), p);
        }
        for (id, ifs) in journals {
            c.journals.insert(
                id.into(),
                Journal {
                    id: id.into(),
                    name: id.into(),
                    impact_factors: ifs.into_iter().map(|(e, cat, v)| ((e, cat.to_string()), v)).collect(),
                },
            );
        }
        c
    }

    #[test]
    fn percentile_examples() {
        assert_eq!(percentile_rank(5.0, &[5.0]).unwrap(), 0.0);
        let distinct: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(percentile_rank(10.0, &distinct).unwrap(), 90.0);
        let cohort = [0.0, 0.0, 0.0, 1.0, 2.0, 2.0, 3.0, 4.0, 5.0, 7.0];
        assert_eq!(brute_percentile(2.0, &cohort), 40.0);
        assert_eq!(percentile_rank(2.0, &cohort).unwrap(), 40.0);
    }

    #[test]
    fn percentile_errors() {
        assert_eq!(percentile_rank(1.0, &[]), Err(NormalizeError::EmptyCohort));
        assert_eq!(percentile_rank(1.5, &[1.0, 2.0]), Err(NormalizeError::NotInCohort(1.5)));
        assert_eq!(percentile_rank(1.0, &[1.0, f64::NAN]), Err(NormalizeError::NonFinite));
    }

    #[test]
    fn all_ties_score_zero() {
        assert_eq!(percentile_rank(3.0, &[3.0; 7]).unwrap(), 0.0);
    }

    #[test]
    fn qi_article_examples() {
        // zero citations against a cohort where all others have at least one
        let pubs = (0..5)
            .map(|i| publication(&format!("P{i}"), 2004, "J", &["C"], i))
            .collect();
        let c = corpus_of(pubs, vec![]);
        assert_eq!(qi_article(&c, "P0", d("2008-03-31")).unwrap().value, 0.0);

        // top cited of 20 distinct counts; another year does not leak in
        let mut pubs: Vec<_> = (0..20)
            .map(|i| publication(&format!("P{i:02}"), 2004, "J", &["C"], i * 3))
            .collect();
        pubs.push(publication("Q", 2005, "J", &["C"], 1000));
        let c = corpus_of(pubs, vec![]);
        assert_eq!(qi_article(&c, "P19", d("2008-03-31")).unwrap().value, 95.0);
        assert_eq!(qi_article(&c, "Q", d("2008-03-31")).unwrap().value, 0.0);
    }

    #[test]
    fn multi_category_mean() {
        // category A: 10 members, target has 4 strictly below -> 40
        // category B: 5 members, target has 3 strictly below -> 60
        let mut pubs = vec![publication("T", 2004, "J", &["A", "B"], 10)];
        for i in 0..4 {
            pubs.push(publication(&format!("a{i}"), 2004, "J", &["A"], i));
        }
        for i in 0..5 {
            pubs.push(publication(&format!("A{i}"), 2004, "J", &["A"], 20 + i));
        }
        for i in 0..3 {
            pubs.push(publication(&format!("b{i}"), 2004, "J", &["B"], i));
        }
        pubs.push(publication("B0", 2004, "J", &["B"], 50));
        let c = corpus_of(pubs, vec![]);
        let s = qi_article(&c, "T", d("2008-03-31")).unwrap();
        assert_eq!(s.value, 50.0);
        assert_eq!(s.cohort_label(), "A;B/2004/2008-03-31");
    }

    #[test]
    fn qi_article_requires_snapshot() {
        let c = corpus_of(vec![publication("P", 2004, "J", &["C"], 3)], vec![]);
        assert_eq!(
            qi_article(&c, "P", d("2008-03-30")),
            Err(NormalizeError::NoSnapshot { publication: "P".into(), date: d("2008-03-30") })
        );
        assert_eq!(qi_article(&c, "P", d("2009-01-01")).unwrap().value, 0.0);
        assert!(matches!(qi_article(&c, "X", d("2009-01-01")), Err(NormalizeError::UnknownPublication(_))));
    }

    #[test]
    fn qi_journal_examples() {
        let c = corpus_of(vec![publication("P", 2004, "J0", &["C"], 0)], vec![("J0", vec![(2006, "C", 1.2)])]);
        assert_eq!(qi_journal(&c, "P", 2006, JournalWeighting::Journal).unwrap().value, 0.0);

        let journals: Vec<_> = (0..8).map(|i| (format!("J{i}"), vec![(2006, "C", 0.5 + i as f64)])).collect();
        let journals: Vec<(&str, _)> = journals.iter().map(|(id, v)| (id.as_str(), v.clone())).collect();
        let c = corpus_of(vec![publication("P", 2004, "J0", &["C"], 0)], journals);
        assert_eq!(qi_journal(&c, "P", 2006, JournalWeighting::Journal).unwrap().value, 0.0);

        let journals: Vec<_> = (0..10).map(|i| (format!("J{i}"), vec![(2006, "C", 1.0 + i as f64)])).collect();
        let journals: Vec<(&str, _)> = journals.iter().map(|(id, v)| (id.as_str(), v.clone())).collect();
        // seventh lowest of ten distinct values
        let c = corpus_of(vec![publication("P", 2004, "J6", &["C"], 0)], journals);
        assert_eq!(qi_journal(&c, "P", 2006, JournalWeighting::Journal).unwrap().value, 60.0);
        assert!(matches!(
            qi_journal(&c, "P", 2005, JournalWeighting::Journal),
            Err(NormalizeError::MissingImpactFactor { edition: 2005, .. })
        ));
    }

    #[test]
    fn publication_weighted_journal_cohorts() {
        // J1 carries three publications, J2 one; J2 has the higher IF
        let pubs = vec![
            publication("P1", 2004, "J1", &["C"], 0),
            publication("P2", 2004, "J1", &["C"], 0),
            publication("P3", 2005, "J1", &["C"], 0),
            publication("P4", 2004, "J2", &["C"], 0),
        ];
        let c = corpus_of(pubs, vec![("J1", vec![(2006, "C", 1.0)]), ("J2", vec![(2006, "C", 2.0)])]);
        assert_eq!(qi_journal(&c, "P4", 2006, JournalWeighting::Journal).unwrap().value, 50.0);
        assert_eq!(qi_journal(&c, "P4", 2006, JournalWeighting::Publication).unwrap().value, 75.0);
    }

    #[test]
    fn cohort_keying() {
        let pubs = vec![
            publication("P1", 2004, "J", &["C"], 1),
            publication("P2", 2005, "J", &["C"], 2),
            publication("P3", 2005, "J", &["X", "Y", "Z"], 2),
        ];
        let c = corpus_of(pubs, vec![]);
        let set = build_cohorts(&c, &ScoringSpec::Citations { date: d("2008-03-31") });
        let keys: Vec<String> = set.cohorts.iter().map(|c| c.key.to_string()).collect();
        assert_eq!(keys, vec!["C/2004", "C/2005", "X/2005", "Y/2005", "Z/2005"]);
        let appearances = set
            .cohorts
            .iter()
            .filter(|c| c.members.iter().any(|(id, _)| id == "P3"))
            .count();
        assert_eq!(appearances, 3);

        let set = build_cohorts(&c, &ScoringSpec::Citations { date: d("2001-01-01") });
        assert!(set.cohorts.is_empty());
        assert_eq!(set.skipped.len(), 3);
    }

    #[test]
    fn bulk_scores_match_single_scores() {
        let corpus = crate::corpus::tests::fixture();
        for spec in [
            ScoringSpec::Citations { date: d("2008-03-31") },
            ScoringSpec::Citations { date: d("2006-01-01") },
            ScoringSpec::ImpactFactor { edition: 2006, weighting: JournalWeighting::Journal },
            ScoringSpec::ImpactFactor { edition: 2005, weighting: JournalWeighting::Publication },
        ] {
            let set = score_corpus(&corpus, &spec);
            for p in corpus.publications.keys() {
                let single = match spec {
                    ScoringSpec::Citations { date } => qi_article(&corpus, p, date),
                    ScoringSpec::ImpactFactor { edition, weighting } => qi_journal(&corpus, p, edition, weighting),
                };
                match (set.get(p), single) {
                    (Some(bulk), Ok(single)) => assert_eq!(bulk, &single),
                    (None, Err(_)) => assert!(set.skipped.iter().any(|s| &s.publication_id == p)),
                    (bulk, single) => panic!("{p}: bulk {bulk:?} vs single {single:?}"),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force(cohort in prop::collection::vec(0u32..8, 1..=12), pick in any::<prop::sample::Index>()) {
            let cohort: Vec<f64> = cohort.into_iter().map(f64::from).collect();
            let value = cohort[pick.index(cohort.len())];
            let p = percentile_rank(value, &cohort).unwrap();
            prop_assert_eq!(p, brute_percentile(value, &cohort));
            prop_assert!((0.0..100.0).contains(&p));
        }

        #[test]
        fn invariant_under_monotone_transform(cohort in prop::collection::vec(0.0f64..50.0, 1..30)) {
            let transformed: Vec<f64> = cohort.iter().map(|v| (v * 0.7).exp() + 3.0).collect();
            for (v, t) in cohort.iter().zip(&transformed) {
                prop_assert_eq!(percentile_rank(*v, &cohort).unwrap(), percentile_rank(*t, &transformed).unwrap());
            }
        }

        #[test]
        fn monotone_in_value(cohort in prop::collection::vec(0u32..20, 2..30)) {
            let cohort: Vec<f64> = cohort.into_iter().map(f64::from).collect();
            for a in &cohort {
                for b in &cohort {
                    let (pa, pb) = (percentile_rank(*a, &cohort).unwrap(), percentile_rank(*b, &cohort).unwrap());
                    if a > b {
                        // strictly more than every tie-mate of b
                        prop_assert!(pa > pb);
                    }
                }
            }
        }
    }
}
