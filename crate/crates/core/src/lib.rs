//! Quality-weighted research productivity rankings of universities.
//!
//! Publications are scored on a percentile scale within their subject
//! category, either by the citations they have received as of an
//! observation date or by the impact factor of the journal that carries
//! them. Scores are summed per university and disciplinary sector, divided
//! by staff, normalized by the national sector average, and rolled up into
//! area-level productivity. Rankings built from the two proxies can then be
//! compared, and the comparison repeated at different citation observation
//! dates.

pub mod cli;
pub mod corpus;
pub mod manifest;
pub mod normalize;
pub mod productivity;
pub mod ranking;
pub mod report;
pub mod synth;
pub mod temporal;

pub use corpus::{load_corpus, staff_count, Corpus, CorpusPaths, YearRange};
pub use normalize::{percentile_rank, Proxy, QualityScore, ScoringSpec};
pub use productivity::{NationalAverageMode, ProductivityTable};
pub use ranking::{compare_rankings, rank_universities, shift_report, Ranking, RankingComparison};


pub use temporal::{benchmark_analysis, lag_sweep, run_exercise, ExerciseOptions, ExerciseSpec};
