//! Seeded synthetic corpora.
//!
//! Lifetime citations are lognormal around a per-area location, tilted by
//! the latent quality of the journal by an amount set by the area's
//! `journal_coupling`. Cumulative counts at each snapshot date follow the
//! area's gamma-shaped accrual curve. Journal impact factors are the
//! expected citations in a two-year window for the journal's articles.
//! Universities differ only in a latent strength that tilts which journals
//! their scientists publish in.

mod accrual;
mod config;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, StandardNormal};

pub use accrual::accrual_fraction;
use accrual::AccrualCurve;
pub use config::{DisciplineProfile, SynthConfig};

use crate::corpus::{
    write_corpus, Affiliation, Corpus, Journal, OrgStructure, Publication, Scientist, Sds, SubjectCategory, Uda,
    University, YearRange,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

// one ChaCha stream per purpose, so adding draws to one stage leaves the
// others untouched
const STREAM_STRENGTH: u64 = 1;
const STREAM_STAFF: u64 = 2;
const STREAM_JOURNALS: u64 = 3;
const STREAM_PUBLICATIONS: u64 = 4;
const STREAM_CITATIONS: u64 = 5;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn padded(prefix: &str, i: usize, total: usize) -> String {
    let width = total.to_string().len();
    format!("{prefix}{i:0width$}")
}

fn normal(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

struct Area<'a> {
    profile: &'a DisciplineProfile,
    curve: AccrualCurve,
    /// (sds id, category id)
    sectors: Vec<(String, String)>,
}

struct SynthJournal {
    id: String,
    area: usize,
    quality: f64,
    categories: BTreeSet<String>,
}

/// Builds the corpus described by `config`. A pure function of the config.
pub fn generate(config: &SynthConfig) -> Result<Corpus, SynthError> {
    config.validate()?;
    let period = config.period;

    let mut structure = OrgStructure::default();
    let mut areas = Vec::new();
    for (uda_id, profile) in &config.uda {
        let uda_name = profile.name.clone().unwrap_or_else(|| uda_id.clone());
        structure.udas.insert(uda_id.clone(), Uda { id: uda_id.clone(), name: uda_name.clone() });
        let sectors: Vec<(String, String)> = (1..=config.sds_per_uda)
            .map(|i| (format!("{uda_id}/{i:02}"), format!("{uda_id}-{i:02}")))
            .collect();
        for (i, (sds_id, _)) in sectors.iter().enumerate() {
            structure.sds.insert(
                sds_id.clone(),
                Sds { id: sds_id.clone(), name: format!("{uda_name} sector {}", i + 1), uda_id: uda_id.clone() },
            );
        }
        areas.push(Area { profile, curve: AccrualCurve::new(profile)?, sectors });
    }
    let university_ids: Vec<String> = (1..=config.universities).map(|i| i.to_string()).collect();
    for id in &university_ids {
        structure
            .universities
            .insert(id.clone(), University { id: id.clone(), name: format!("University {id}") });
    }

    let mut strength_rng = rng(config.seed, STREAM_STRENGTH);
    let strength: Vec<f64> =
        university_ids.iter().map(|_| config.university_strength_sd * normal(&mut strength_rng)).collect();

    // journals, grouped by primary category
    let mut journal_rng = rng(config.seed, STREAM_JOURNALS);
    let n_categories: usize = areas.iter().map(|a| a.sectors.len()).sum();
    let n_journals = n_categories * config.journals_per_category;
    let mut journals = Vec::with_capacity(n_journals);
    for (ai, area) in areas.iter().enumerate() {
        for (si, (_, category)) in area.sectors.iter().enumerate() {
            for _ in 0..config.journals_per_category {
                let quality = normal(&mut journal_rng);
                let mut categories = BTreeSet::from([category.clone()]);
                if area.sectors.len() > 1 && journal_rng.random::<f64>() < config.cross_listed_share {
                    let other = (si + journal_rng.random_range(1..area.sectors.len())) % area.sectors.len();
                    categories.insert(area.sectors[other].1.clone());
                }
                let id = padded("J", journals.len() + 1, n_journals);
                journals.push(SynthJournal { id, area: ai, quality, categories });
            }
        }
    }

    // staff: (scientist index -> university index, area, sector, years)
    struct Staff {
        university: usize,
        area: usize,
        sector: usize,
        years: YearRange,
    }
    let mut staff_rng = rng(config.seed, STREAM_STAFF);
    let mut staff = Vec::new();
    for u in 0..university_ids.len() {
        for (ai, area) in areas.iter().enumerate() {
            for si in 0..area.sectors.len() {
                let n = staff_rng.random_range(config.min_scientists_per_sds..=config.max_scientists_per_sds);
                for _ in 0..n {
                    let mut years = period;
                    if period.len() > 1 && staff_rng.random::<f64>() < config.partial_affiliation_probability {
                        if staff_rng.random::<bool>() {
                            years.first = staff_rng.random_range(period.first + 1..=period.last);
                        } else {
                            years.last = staff_rng.random_range(period.first..period.last);
                        }
                    }
                    staff.push(Staff { university: u, area: ai, sector: si, years });
                }
            }
        }
    }
    let scientist_ids: Vec<String> = (1..=staff.len()).map(|i| padded("S", i, staff.len())).collect();

    // journal choice per (university, category): weight exp(strength * quality)
    let mut choosers: BTreeMap<(usize, &str), (Vec<usize>, WeightedIndex<f64>)> = BTreeMap::new();
    for (u, s) in strength.iter().enumerate() {
        for area in &areas {
            for (_, category) in &area.sectors {
                let candidates: Vec<usize> =
                    (0..journals.len()).filter(|&j| journals[j].categories.contains(category)).collect();
                let weights = candidates.iter().map(|&j| (s * journals[j].quality).exp().clamp(1e-300, 1e300));
                let index = WeightedIndex::new(weights).map_err(|e| SynthError::Invalid(e.to_string()))?;
                choosers.insert((u, category.as_str()), (candidates, index));
            }
        }
    }

    struct Draft {
        year: i32,
        journal: usize,
        authors: BTreeSet<usize>,
    }
    let mut pub_rng = rng(config.seed, STREAM_PUBLICATIONS);
    let mut drafts = Vec::new();
    for year in period.years() {
        let active: Vec<usize> = (0..staff.len()).filter(|&i| staff[i].years.contains(year)).collect();
        let mut by_sector: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &i in &active {
            by_sector.entry((staff[i].area, staff[i].sector)).or_default().push(i);
        }
        for &i in &active {
            let st = &staff[i];
            let category = areas[st.area].sectors[st.sector].1.as_str();
            let (candidates, index) = &choosers[&(st.university, category)];
            let peers = &by_sector[&(st.area, st.sector)];
            for _ in 0..config.publications_per_scientist_year {
                let journal = candidates[index.sample(&mut pub_rng)];
                let mut authors = BTreeSet::from([i]);
                if peers.len() > 1 && pub_rng.random::<f64>() < config.coauthor_probability {
                    let k = pub_rng.random_range(0..peers.len() - 1);
                    let pos = peers.iter().position(|&p| p == i).expect("author is a peer");
                    authors.insert(peers[if k >= pos { k + 1 } else { k }]);
                }
                drafts.push(Draft { year, journal, authors });
            }
        }
    }

    let mut cite_rng = rng(config.seed, STREAM_CITATIONS);
    let mut publications = BTreeMap::new();
    for (n, d) in drafts.iter().enumerate() {
        let j = &journals[d.journal];
        let area = &areas[j.area];
        let p = area.profile;
        let noise = if p.journal_coupling < 1.0 { normal(&mut cite_rng) } else { 0.0 };
        let log_c =
            p.log_mean + p.log_sd * (p.journal_coupling.sqrt() * j.quality + (1.0 - p.journal_coupling).sqrt() * noise);
        let lifetime = log_c.exp().round().min(1e12) as u64;
        let offset = if config.deterministic_accrual { 0.5 } else { cite_rng.random::<f64>() };
        let start = NaiveDate::from_ymd_opt(d.year, 1, 1).expect("valid year");
        let mut snapshots = BTreeMap::new();
        let (mut count, mut prev_f) = (0u64, 0.0f64);
        for &date in config.snapshot_dates.iter().filter(|dt| dt.year() >= d.year) {
            let lag = (date - start).num_days() as f64 / 365.25 - offset;
            let f = area.curve.fraction(lag.max(0.0)).max(prev_f);
            if config.deterministic_accrual {
                count = (lifetime as f64 * f).round() as u64;
            } else if prev_f < 1.0 && f > prev_f {
                let p_new = ((f - prev_f) / (1.0 - prev_f)).clamp(0.0, 1.0);
                let step = Binomial::new(lifetime - count, p_new).map_err(|e| SynthError::Invalid(e.to_string()))?;
                count += cite_rng.sample(step);
            }
            prev_f = f;
            snapshots.insert(date, count);
        }
        let id = padded("P", n + 1, drafts.len());
        let publication = Publication {
            id: id.clone(),
            year: d.year,
            journal_id: j.id.clone(),
            category_ids: j.categories.clone(),
            author_ids: d.authors.iter().map(|&a| scientist_ids[a].clone()).collect(),
            snapshots,
        };
        publications.insert(id, publication);
    }

    let editions = config.editions();
    let mut categories = BTreeMap::new();
    let mut corpus_journals = BTreeMap::new();
    for j in &journals {
        let area = &areas[j.area];
        let p = area.profile;
        let c = p.journal_coupling;
        let expected = (p.log_mean + p.log_sd * c.sqrt() * j.quality + 0.5 * p.log_sd.powi(2) * (1.0 - c)).exp();
        let value = (expected * area.curve.impact_window() * 1000.0).round() / 1000.0;
        let mut impact_factors = BTreeMap::new();
        for &edition in &editions {
            for category in &j.categories {
                impact_factors.insert((edition, category.clone()), value);
                categories
                    .entry(category.clone())
                    .or_insert_with(|| SubjectCategory { id: category.clone(), name: category.clone() });
            }
        }
        corpus_journals.insert(
            j.id.clone(),
            Journal { id: j.id.clone(), name: format!("Journal {}", j.id), impact_factors },
        );
    }

    let scientists = staff
        .iter()
        .zip(&scientist_ids)
        .map(|(s, id)| {
            let affiliation = Affiliation {
                years: s.years,
                university_id: university_ids[s.university].clone(),
                sds_id: areas[s.area].sectors[s.sector].0.clone(),
            };
            (id.clone(), Scientist { id: id.clone(), affiliations: vec![affiliation] })
        })
        .collect();

    Ok(Corpus { structure, categories, journals: corpus_journals, publications, scientists })
}

/// Generates and writes the corpus file set into `dir`.
pub fn generate_to_dir(config: &SynthConfig, dir: &Path) -> Result<Vec<PathBuf>, SynthError> {
    let corpus = generate(config)?;
    write_corpus(&corpus, dir).map_err(|e| SynthError::Io(format!("{}: {e}", dir.display())))
}

#[cfg(test)]
mod tests;
