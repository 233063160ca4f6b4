//! Shared helpers: seeded micro-corpora and a from-scratch productivity oracle.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use proxyrank::corpus::{
    Affiliation, Corpus, Journal, Publication, Scientist, Sds, SubjectCategory, Uda, University, YearRange,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const SNAPSHOT: &str = "2008-03-31";
pub const EDITION: i32 = 2006;

pub fn period() -> YearRange {
    YearRange::new(2004, 2006).unwrap()
}

pub fn snapshot() -> NaiveDate {
    SNAPSHOT.parse().unwrap()
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub struct MicroSpec {
    pub max_universities: usize,
    pub max_sds: usize,
    pub max_publications: usize,
    pub max_staff: usize,
}

impl MicroSpec {
    pub const SMALL: MicroSpec = MicroSpec { max_universities: 5, max_sds: 3, max_publications: 20, max_staff: 4 };
    pub const MEDIUM: MicroSpec = MicroSpec { max_universities: 8, max_sds: 4, max_publications: 80, max_staff: 6 };
}

/// Random corpus in memory: universities 1..=U, sectors split over two
/// areas, one category per sector plus an optional shared one, citations
/// observed once at `SNAPSHOT`, impact factors for `EDITION`.
pub fn micro_corpus(seed: u64, spec: &MicroSpec) -> Corpus {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n_univ = r.random_range(1..=spec.max_universities);
    let n_sds = r.random_range(1..=spec.max_sds);
    let n_pub = r.random_range(0..=spec.max_publications);
    let mut c = Corpus::default();

    for u in 1..=n_univ {
        let id = u.to_string();
        c.structure.universities.insert(id.clone(), University { id: id.clone(), name: format!("U{u}") });
    }
    for a in ["A", "B"] {
        c.structure.udas.insert(a.into(), Uda { id: a.into(), name: a.into() });
    }
    let sds: Vec<String> = (0..n_sds).map(|i| format!("S{i}")).collect();
    for (i, s) in sds.iter().enumerate() {
        let uda = if i % 2 == 0 { "A" } else { "B" };
        c.structure.sds.insert(s.clone(), Sds { id: s.clone(), name: s.clone(), uda_id: uda.into() });
    }

    let mut scientists = Vec::new();
    for u in 1..=n_univ {
        for s in &sds {
            for _ in 0..r.random_range(0..=spec.max_staff) {
                let id = format!("R{:03}", scientists.len());
                let first = r.random_range(2004..=2006);
                let last = r.random_range(first..=2006);
                let affiliation = Affiliation {
                    years: YearRange::new(first, last).unwrap(),
                    university_id: u.to_string(),
                    sds_id: s.clone(),
                };
                scientists.push((id.clone(), affiliation.clone()));
                c.scientists.insert(id.clone(), Scientist { id, affiliations: vec![affiliation] });
            }
        }
    }

    let categories: Vec<String> = (0..=n_sds).map(|i| format!("C{i}")).collect();
    for cat in &categories {
        c.categories.insert(cat.clone(), SubjectCategory { id: cat.clone(), name: cat.clone() });
    }
    let n_journals = r.random_range(1..=6);
    for j in 0..n_journals {
        let id = format!("J{j}");
        let mut impact_factors = BTreeMap::new();
        let home = r.random_range(0..categories.len());
        for (k, cat) in categories.iter().enumerate() {
            if k == home || j == 0 || r.random_bool(0.5) {
                // coarse values so ties occur
                impact_factors.insert((EDITION, cat.clone()), r.random_range(0..8) as f64 * 0.5);
            }
        }
        c.journals.insert(id.clone(), Journal { id: id.clone(), name: id, impact_factors });
    }

    for p in 0..n_pub {
        let id = format!("P{p:03}");
        let year = r.random_range(2003..=2007);
        let journal = &c.journals[&format!("J{}", r.random_range(0..n_journals))];
        let listed: Vec<&String> = journal.impact_factors.keys().map(|(_, cat)| cat).collect();
        let mut category_ids = BTreeSet::from([listed[r.random_range(0..listed.len())].clone()]);
        if r.random_bool(0.3) {
            category_ids.insert(listed[r.random_range(0..listed.len())].clone());
        }
        let mut author_ids = BTreeSet::new();
        if !scientists.is_empty() {
            for _ in 0..r.random_range(0..=3) {
                author_ids.insert(scientists[r.random_range(0..scientists.len())].0.clone());
            }
        }
        let snapshots = BTreeMap::from([(snapshot(), r.random_range(0..12u64))]);
        c.publications.insert(
            id.clone(),
            Publication { id, year, journal_id: journal.id.clone(), category_ids, author_ids, snapshots },
        );
    }
    c
}

/// QI_A of every publication by direct counting.
pub fn naive_article_scores(c: &Corpus, date: NaiveDate) -> BTreeMap<String, f64> {
    let cites = |p: &Publication| p.citations_at(date).unwrap() as f64;
    c.publications
        .values()
        .map(|p| {
            let per_category: Vec<f64> = p
                .category_ids
                .iter()
                .map(|cat| {
                    let cohort: Vec<&Publication> = c
                        .publications
                        .values()
                        .filter(|q| q.year == p.year && q.category_ids.contains(cat))
                        .collect();
                    let below = cohort.iter().filter(|q| cites(q) < cites(p)).count();
                    100.0 * below as f64 / cohort.len() as f64
                })
                .collect();
            (p.id.clone(), per_category.iter().sum::<f64>() / per_category.len() as f64)
        })
        .collect()
}

/// QI_J of every publication: its journal's standing among the journals
/// listed in each of its categories.
pub fn naive_journal_scores(c: &Corpus, edition: i32) -> BTreeMap<String, f64> {
    c.publications
        .values()
        .map(|p| {
            let own = &c.journals[&p.journal_id];
            let per_category: Vec<f64> = p
                .category_ids
                .iter()
                .map(|cat| {
                    let mine = own.impact_factor(edition, cat).unwrap();
                    let all: Vec<f64> = c.journals.values().filter_map(|j| j.impact_factor(edition, cat)).collect();
                    100.0 * all.iter().filter(|v| **v < mine).count() as f64 / all.len() as f64
                })
                .collect();
            (p.id.clone(), per_category.iter().sum::<f64>() / per_category.len() as f64)
        })
        .collect()
}

fn naive_staff(c: &Corpus, u: &str, s: &str, period: YearRange) -> f64 {
    let mut person_years = 0usize;
    for sc in c.scientists.values() {
        for y in period.years() {
            if sc.affiliations.iter().any(|a| a.years.contains(y) && a.university_id == u && a.sds_id == s) {
                person_years += 1;
            }
        }
    }
    person_years as f64 / period.len() as f64
}

fn naive_strength(c: &Corpus, scores: &BTreeMap<String, f64>, u: &str, s: &str, period: YearRange) -> f64 {
    let mut total = 0.0;
    for p in c.publications.values() {
        if !period.contains(p.year) {
            continue;
        }
        let by_unit = p.author_ids.iter().any(|a| {
            c.scientists[a]
                .affiliations
                .iter()
                .any(|af| af.years.contains(p.year) && af.university_id == u && af.sds_id == s)
        });
        if by_unit {
            total += scores[&p.id];
        }
    }
    total
}

/// Area productivity per (uda, university), pooled national averages,
/// recomputed with no shared code beyond the corpus types.
pub fn naive_uda_productivity(
    c: &Corpus,
    scores: &BTreeMap<String, f64>,
    period: YearRange,
) -> BTreeMap<(String, String), f64> {
    let mut baseline = BTreeMap::new();
    for s in c.structure.sds.keys() {
        let (mut ss, mut staff) = (0.0, 0.0);
        for u in c.structure.universities.keys() {
            let add = naive_staff(c, u, s, period);
            if add > 0.0 {
                ss += naive_strength(c, scores, u, s, period);
                staff += add;
            }
        }
        baseline.insert(s.clone(), if staff > 0.0 { ss / staff } else { 0.0 });
    }
    let mut out = BTreeMap::new();
    for uda in c.structure.udas.keys() {
        for u in c.structure.universities.keys() {
            let (mut weighted, mut staff) = (0.0, 0.0);
            for s in c.structure.sds.values().filter(|s| &s.uda_id == uda) {
                let add = naive_staff(c, u, &s.id, period);
                let base = baseline[&s.id];
                if add > 0.0 && base > 0.0 {
                    let p = naive_strength(c, scores, u, &s.id, period) / add;
                    weighted += p / base * add;
                    staff += add;
                }
            }
            if staff > 0.0 {
                out.insert((uda.clone(), u.clone()), weighted / staff);
            }
        }
    }
    out
}

/// Percentile by strict counting.
pub fn naive_percentile(value: f64, cohort: &[f64]) -> f64 {
    100.0 * cohort.iter().filter(|v| **v < value).count() as f64 / cohort.len() as f64
}

/// Spearman rank correlation with tied values sharing their mean rank.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(x: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        let mut out = vec![0.0; x.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
                j += 1;
            }
            for &k in &idx[i..=j] {
                out[k] = (i + j) as f64 / 2.0;
            }
            i = j + 1;
        }
        out
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// The published Biology rank pairs: (university id, staff, rank by
/// citations, rank by impact factor, variation).
pub fn biology_rank_pairs() -> Vec<(String, f64, usize, usize, i64)> {
    let text = std::fs::read_to_string(data_dir().join("biology_table4.tsv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect()
}
