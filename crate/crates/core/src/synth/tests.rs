use std::collections::BTreeMap;
use std::fs;

use chrono::NaiveDate;
use rand::seq::SliceRandom;

use super::*;
use crate::corpus::{load_corpus, CorpusPaths};
use crate::normalize::{score_corpus, JournalWeighting, ScoringSpec};
use crate::ranking::pearson;

pub(crate) const BASE: &str = r#"
seed = 11
period = "2004-2006"
snapshot_dates = ["2006-01-01", "2008-03-31"]
universities = 6
sds_per_uda = 2
min_scientists_per_sds = 2
max_scientists_per_sds = 5
publications_per_scientist_year = 1
journals_per_category = 6
coauthor_probability = 0.3
partial_affiliation_probability = 0.2
cross_listed_share = 0.3

[uda.BIO]
name = "Biology"
peak_lag_years = 2.0
journal_coupling = 0.6

[uda.MAT]
peak_lag_years = 3.0
journal_coupling = 0.6
"#;

fn base() -> SynthConfig {
    SynthConfig::from_toml(BASE).unwrap()
}

fn d(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

/// Average ranks, ties sharing the mean of their positions.
fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            ranks[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    ranks
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y)).unwrap_or(0.0)
}

#[test]
fn config_errors() {
    let missing = BASE.replace("seed = 11\n", "");
    let err = SynthConfig::from_toml(&missing).unwrap_err();
    assert!(err.to_string().contains("seed"), "{err}");

    let bad = BASE.replace("universities = 6", "universities = \"six\"");
    let err = SynthConfig::from_toml(&bad).unwrap_err();
    assert!(err.to_string().contains("line"), "{err}");

    let zero = BASE.replace("universities = 6", "universities = 0");
    assert!(matches!(SynthConfig::from_toml(&zero), Err(SynthError::Invalid(_))));

    let unordered = BASE.replace(r#"["2006-01-01", "2008-03-31"]"#, r#"["2008-03-31", "2006-01-01"]"#);
    assert!(matches!(SynthConfig::from_toml(&unordered), Err(SynthError::Invalid(_))));

    let coupling = BASE.replacen("journal_coupling = 0.6", "journal_coupling = 1.5", 1);
    assert!(matches!(SynthConfig::from_toml(&coupling), Err(SynthError::Invalid(_))));
}

#[test]
fn deterministic_and_loadable() {
    let config = base();
    let a = generate(&config).unwrap();
    assert_eq!(a, generate(&config).unwrap());

    let (da, db) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let files_a = generate_to_dir(&config, da.path()).unwrap();
    let files_b = generate_to_dir(&config, db.path()).unwrap();
    for (fa, fb) in files_a.iter().zip(&files_b) {
        assert_eq!(fs::read(fa).unwrap(), fs::read(fb).unwrap(), "{}", fa.display());
    }
    let loaded = load_corpus(&CorpusPaths::in_dir(da.path())).unwrap();
    assert_eq!(loaded, a);

    let other = generate(&SynthConfig { seed: 12, ..config }).unwrap();
    assert_ne!(other.publications, a.publications);
}

#[test]
fn snapshots_are_cumulative() {
    let mut config = base();
    config.snapshot_dates = vec![d("2004-06-30"), d("2005-01-01"), d("2006-01-01"), d("2008-03-31"), d("2030-01-01")];
    let c = generate(&config).unwrap();
    for p in c.publications.values() {
        let counts: Vec<u64> = p.snapshots.values().copied().collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{}: {counts:?}", p.id);
        assert!(p.snapshots.keys().all(|dt| dt.year() >= p.year));
    }
}

#[test]
fn full_coupling_orders_citations_like_impact_factors() {
    let mut config = base();
    config.deterministic_accrual = true;
    for p in config.uda.values_mut() {
        p.journal_coupling = 1.0;
    }
    let c = generate(&config).unwrap();
    let date = d("2008-03-31");
    let mut cohorts: BTreeMap<(String, i32), Vec<(f64, u64)>> = BTreeMap::new();
    for p in c.publications.values() {
        let j = &c.journals[&p.journal_id];
        for cat in &p.category_ids {
            let impact = j.impact_factor(2006, cat).unwrap();
            cohorts.entry((cat.clone(), p.year)).or_default().push((impact, p.citations_at(date).unwrap()));
        }
    }
    for members in cohorts.values() {
        for a in members {
            for b in members {
                if a.0 < b.0 {
                    assert!(a.1 <= b.1, "{a:?} vs {b:?}");
                }
                if a.1 < b.1 {
                    assert!(a.0 <= b.0, "{a:?} vs {b:?}");
                }
            }
        }
    }
}

#[test]
fn zero_coupling_decouples_article_and_journal_scores() {
    // pooled within-cohort correlation of QI_A and QI_J, averaged over seeds,
    // against its permutation distribution under shuffling within cohorts
    let mut config = base();
    config.universities = 10;
    for p in config.uda.values_mut() {
        p.journal_coupling = 0.0;
    }
    let date = d("2008-03-31");
    let mut samples: Vec<Vec<Vec<(f64, f64)>>> = Vec::new();
    for seed in 0..20 {
        let c = generate(&SynthConfig { seed, ..config.clone() }).unwrap();
        let a = score_corpus(&c, &ScoringSpec::Citations { date });
        let j = score_corpus(&c, &ScoringSpec::ImpactFactor { edition: 2006, weighting: JournalWeighting::Journal });
        let mut cohorts: BTreeMap<(String, i32), Vec<(f64, f64)>> = BTreeMap::new();
        for (id, sa) in &a.scores {
            let key = (sa.categories.iter().next().unwrap().clone(), sa.year);
            cohorts.entry(key).or_default().push((sa.value, j.scores[id].value));
        }
        samples.push(cohorts.into_values().collect());
    }
    let statistic = |s: &[Vec<Vec<(f64, f64)>>]| -> f64 {
        s.iter()
            .map(|cohorts| {
                let (x, y): (Vec<f64>, Vec<f64>) = cohorts.iter().flatten().copied().unzip();
                spearman(&x, &y)
            })
            .sum::<f64>()
            / s.len() as f64
    };
    let observed = statistic(&samples);
    let mut r = rng(99, 0);
    let mut null: Vec<f64> = (0..200)
        .map(|_| {
            let shuffled: Vec<Vec<Vec<(f64, f64)>>> = samples
                .iter()
                .map(|cohorts| {
                    cohorts
                        .iter()
                        .map(|m| {
                            let mut ys: Vec<f64> = m.iter().map(|p| p.1).collect();
                            ys.shuffle(&mut r);
                            m.iter().zip(ys).map(|(p, y)| (p.0, y)).collect()
                        })
                        .collect()
                })
                .collect();
            statistic(&shuffled)
        })
        .collect();
    null.sort_by(f64::total_cmp);
    let (lo, hi) = (null[2], null[197]);
    assert!(lo <= observed && observed <= hi, "observed {observed}, null [{lo}, {hi}]");
}

#[test]
fn citation_distribution_is_right_skewed() {
    let mut config = base();
    config.universities = 30;
    config.snapshot_dates = vec![d("2040-01-01")];
    let c = generate(&config).unwrap();
    let mut by_area: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for p in c.publications.values() {
        let area = &p.category_ids.iter().next().unwrap()[..3];
        by_area.entry(area).or_default().push(p.citations_at(d("2040-01-01")).unwrap() as f64);
    }
    for (area, mut v) in by_area {
        assert!(v.len() >= 200, "{area}: {}", v.len());
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.sort_by(f64::total_cmp);
        let median = crate::ranking::median(&v);
        assert!(mean > median, "{area}: mean {mean} median {median}");
    }
}

#[test]
fn long_peak_lowers_early_lifetime_agreement() {
    // one-year period observed 9 months after its end and at saturation
    let mut config = base();
    config.period = YearRange::single(2004);
    config.universities = 10;
    config.snapshot_dates = vec![d("2005-09-30"), d("2060-01-01")];
    let mut wins = 0;
    let seeds = 20;
    for seed in 0..seeds {
        let c = generate(&SynthConfig { seed, ..config.clone() }).unwrap();
        let mut corr = BTreeMap::new();
        for area in ["BIO", "MAT"] {
            let (early, late): (Vec<f64>, Vec<f64>) = c
                .publications
                .values()
                .filter(|p| p.category_ids.iter().next().unwrap().starts_with(area))
                .map(|p| (p.citations_at(d("2005-09-30")).unwrap() as f64, p.citations_at(d("2060-01-01")).unwrap() as f64))
                .unzip();
            corr.insert(area, spearman(&early, &late));
        }
        if corr["MAT"] < corr["BIO"] {
            wins += 1;
        }
    }
    assert!(wins * 2 > seeds, "{wins}/{seeds}");
}
