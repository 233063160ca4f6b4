//! Evaluation exercises and their comparison across observation dates.
//!
//! An exercise runs the full pipeline (scores, productivity, rankings) for
//! one period under one proxy. The benchmark analysis treats the citation
//! ranking observed long after the period as ground truth and reports how
//! far an early citation ranking and an impact-factor ranking each fall from
//! it. The lag sweep repeats the citation-versus-impact-factor comparison at
//! several citation observation dates.

use std::collections::BTreeSet;

use chrono::{Months, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, YearRange};
use crate::normalize::{score_corpus, JournalWeighting, NormalizeError, ScoringSpec};
use crate::productivity::{NationalAverageMode, ProductivityError, ProductivityTable};
use crate::ranking::{
    compare_rankings, rank_universities, CorrelationMethod, Exclusion, ExclusionReason, Ranking,
    RankingComparison, RankingError, DEFAULT_MIN_STAFF,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TemporalError {
    #[error("invalid exercise: {0}")]
    Spec(String),
    #[error("corpus does not cover the exercise: {0}")]
    Coverage(String),
    #[error(transparent)]
    Productivity(#[from] ProductivityError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExerciseOptions {
    pub min_staff: f64,
    pub national_average: NationalAverageMode,
    pub journal_weighting: JournalWeighting,
    pub correlation: CorrelationMethod,
    /// Minimum distance of the benchmark observation from the period end.
    pub maturity_lag_months: u32,
}

impl Default for ExerciseOptions {
    fn default() -> Self {
        Self {
            min_staff: DEFAULT_MIN_STAFF,
            national_average: NationalAverageMode::Pooled,
            journal_weighting: JournalWeighting::Journal,
            correlation: CorrelationMethod::Spearman,
            maturity_lag_months: 36,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExerciseSpec {
    pub period: YearRange,
    pub scoring: ScoringSpec,
    pub min_staff: f64,
    pub national_average: NationalAverageMode,
}

impl ExerciseSpec {
    pub fn citations(period: YearRange, date: NaiveDate, options: &ExerciseOptions) -> Self {
        Self {
            period,
            scoring: ScoringSpec::Citations { date },
            min_staff: options.min_staff,
            national_average: options.national_average,
        }
    }

    pub fn impact_factor(period: YearRange, edition: i32, options: &ExerciseOptions) -> Self {
        Self {
            period,
            scoring: ScoringSpec::ImpactFactor { edition, weighting: options.journal_weighting },
            min_staff: options.min_staff,
            national_average: options.national_average,
        }
    }

    fn validate(&self) -> Result<(), TemporalError> {
        if let ScoringSpec::Citations { date } = self.scoring {
            if date < self.period.end_date() {
                return Err(TemporalError::Spec(format!(
                    "citation observation date {date} precedes the end of period {}",
                    self.period
                )));
            }
        }
        if !(self.min_staff.is_finite() && self.min_staff >= 0.0) {
            return Err(TemporalError::Spec(format!("invalid min staff {}", self.min_staff)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exercise {
    pub spec: ExerciseSpec,
    /// One ranking per area that has at least one ranked university, by uda id.
    pub rankings: Vec<Ranking>,
    pub notices: Vec<String>,
    pub productivity: ProductivityTable,
}

impl Exercise {
    pub fn ranking(&self, uda_id: &str) -> Option<&Ranking> {
        self.rankings.iter().find(|r| r.uda_id == uda_id)
    }
}

/// Full pipeline for one spec: percentile scores, productivity, rankings.
pub fn run_exercise(corpus: &Corpus, spec: &ExerciseSpec) -> Result<Exercise, TemporalError> {
    spec.validate()?;
    let scores = score_corpus(corpus, &spec.scoring);
    let productivity = ProductivityTable::compute(corpus, &scores, spec.period, spec.national_average)
        .map_err(|e| match e {
            ProductivityError::MissingScore(id) => {
                let reason = scores
                    .skipped
                    .iter()
                    .find(|s| s.publication_id == id)
                    .map(|s| s.reason.clone())
                    .unwrap_or(NormalizeError::UnknownPublication(id));
                TemporalError::Coverage(reason.to_string())
            }
            other => TemporalError::Productivity(other),
        })?;

    let mut notices = Vec::new();
    if corpus.publications_in(spec.period).next().is_none() {
        notices.push(format!("no publications in period {}", spec.period));
    }
    let observation = spec.scoring.observation_label();
    let proxy = spec.scoring.proxy();
    let mut rankings = Vec::new();
    for (uda_id, uda) in &corpus.structure.udas {
        let candidates: Vec<_> = productivity.uda_entries(uda_id).cloned().collect();
        let name = |u: &str| corpus.structure.university_name(u).to_string();
        match rank_universities(uda_id, &uda.name, proxy, &observation, &candidates, name, spec.min_staff) {
            Ok(mut ranking) => {
                let staff = crate::corpus::StaffTable::for_period(corpus, spec.period);
                for (_, u) in productivity.unnormalizable.iter().filter(|(a, _)| a == uda_id) {
                    ranking.excluded.push(Exclusion {
                        university_id: u.clone(),
                        university_name: name(u),
                        staff: staff.uda_staff(&corpus.structure, u, uda_id),
                        reason: ExclusionReason::NoNormalizableSds,
                    });
                }
                rankings.push(ranking);
            }
            Err(RankingError::NobodyRanked(_)) => {
                notices.push(format!("uda '{uda_id}': no university could be ranked"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Exercise { spec: *spec, rankings, notices, productivity })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkComparison {
    pub uda_id: String,
    pub uda_name: String,
    /// Early citation ranking against the benchmark.
    pub citations_early: RankingComparison,
    /// Impact-factor ranking against the benchmark.
    pub impact_factor: RankingComparison,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkReport {
    pub period: YearRange,
    pub early_date: NaiveDate,
    pub mature_date: NaiveDate,
    pub jcr_edition: i32,
    pub comparisons: Vec<BenchmarkComparison>,
    pub notices: Vec<String>,
}

/// Resolves the benchmark date: the given one, or the latest snapshot in the
/// corpus provided it lies at least the maturity lag past the period end.
fn mature_date(
    corpus: &Corpus,
    period: YearRange,
    mature: Option<NaiveDate>,
    options: &ExerciseOptions,
    notices: &mut Vec<String>,
) -> Result<NaiveDate, TemporalError> {
    let threshold = period
        .end_date()
        .checked_add_months(Months::new(options.maturity_lag_months))
        .ok_or_else(|| TemporalError::Spec("maturity lag out of range".into()))?;
    match mature {
        Some(d) => {
            if d < threshold {
                notices.push(format!(
                    "benchmark date {d} is less than {} months after the period end",
                    options.maturity_lag_months
                ));
            }
            Ok(d)
        }
        None => corpus
            .snapshot_dates()
            .into_iter()
            .next_back()
            .filter(|d| *d >= threshold)
            .ok_or_else(|| {
                TemporalError::Coverage(format!("no citation snapshot on or after {threshold} for a mature benchmark"))
            }),
    }
}

/// Compares an early citation ranking and an impact-factor ranking against
/// the mature citation benchmark, area by area, over the universities
/// ranked in all three.
pub fn benchmark_analysis(
    corpus: &Corpus,
    period: YearRange,
    early: NaiveDate,
    mature: Option<NaiveDate>,
    jcr_edition: i32,
    options: &ExerciseOptions,
) -> Result<BenchmarkReport, TemporalError> {
    let mut notices = Vec::new();
    let mature = mature_date(corpus, period, mature, options, &mut notices)?;
    if mature < early {
        return Err(TemporalError::Spec(format!("mature date {mature} precedes early date {early}")));
    }
    let benchmark = run_exercise(corpus, &ExerciseSpec::citations(period, mature, options))?;
    let early_ex = run_exercise(corpus, &ExerciseSpec::citations(period, early, options))?;
    let if_ex = run_exercise(corpus, &ExerciseSpec::impact_factor(period, jcr_edition, options))?;
    notices.extend(benchmark.notices.iter().cloned());

    let mut comparisons = Vec::new();
    for bench in &benchmark.rankings {
        let (Some(e), Some(j)) = (early_ex.ranking(&bench.uda_id), if_ex.ranking(&bench.uda_id)) else {
            notices.push(format!("uda '{}': not ranked in every arm", bench.uda_id));
            continue;
        };
        let common: BTreeSet<&str> = bench
            .university_ids()
            .intersection(&e.university_ids())
            .copied()
            .collect::<BTreeSet<_>>()
            .intersection(&j.university_ids())
            .copied()
            .collect();
        let bench = bench.restricted_to(&common);
        let e = e.restricted_to(&common);
        let j = j.restricted_to(&common);
        match (
            compare_rankings(&e, &bench, options.correlation),
            compare_rankings(&j, &bench, options.correlation),
        ) {
            (Ok(citations_early), Ok(impact_factor)) => comparisons.push(BenchmarkComparison {
                uda_id: bench.uda_id.clone(),
                uda_name: bench.uda_name.clone(),
                citations_early,
                impact_factor,
            }),
            (Err(err), _) | (_, Err(err)) => notices.push(format!("uda '{}': {err}", bench.uda_id)),
        }
    }
    Ok(BenchmarkReport { period, early_date: early, mature_date: mature, jcr_edition, comparisons, notices })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub date: NaiveDate,
    /// Citation ranking at `date` against the impact-factor ranking, per area.
    pub comparisons: Vec<RankingComparison>,
}

/// Citation-versus-impact-factor comparison at each observation date,
/// ascending by date.
pub fn lag_sweep(
    corpus: &Corpus,
    period: YearRange,
    dates: &[NaiveDate],
    jcr_edition: i32,
    options: &ExerciseOptions,
) -> Result<Vec<SweepRow>, TemporalError> {
    let dates: BTreeSet<NaiveDate> = dates.iter().copied().collect();
    if dates.is_empty() {
        return Err(TemporalError::Spec("lag sweep needs at least one date".into()));
    }
    let if_ex = run_exercise(corpus, &ExerciseSpec::impact_factor(period, jcr_edition, options))?;
    let mut rows = Vec::with_capacity(dates.len());
    for date in dates {
        let cit = run_exercise(corpus, &ExerciseSpec::citations(period, date, options))?;
        let comparisons = cit
            .rankings
            .iter()
            .filter_map(|a| if_ex.ranking(&a.uda_id).map(|b| (a, b)))
            .filter_map(|(a, b)| compare_rankings(a, b, options.correlation).ok())
            .collect();
        rows.push(SweepRow { date, comparisons });
    }
    Ok(rows)
}
