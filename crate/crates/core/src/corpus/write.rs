use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::load::*;
use super::model::Corpus;

fn join(ids: &std::collections::BTreeSet<String>) -> String {
    ids.iter().map(String::as_str).collect::<Vec<_>>().join(";")
}

fn write_rows(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

/// Writes the eight ingestion files into `dir` in canonical order. Loading
/// the result yields a corpus equal to `corpus`.
pub fn write_corpus(corpus: &Corpus, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let paths = CorpusPaths::in_dir(dir);

    write_rows(
        &paths.universities,
        &["id", "name"],
        corpus
            .structure
            .universities
            .values()
            .map(|u| vec![u.id.clone(), u.name.clone()])
            .collect(),
    )?;
    write_rows(
        &paths.structure,
        &["sds_id", "sds_name", "uda_id", "uda_name"],
        corpus
            .structure
            .sds
            .values()
            .map(|s| {
                let uda = corpus.structure.uda_name(&s.uda_id).to_string();
                vec![s.id.clone(), s.name.clone(), s.uda_id.clone(), uda]
            })
            .collect(),
    )?;
    write_rows(
        &paths.scientists,
        &["id"],
        corpus.scientists.keys().map(|id| vec![id.clone()]).collect(),
    )?;
    write_rows(
        &paths.affiliations,
        &["scientist_id", "year_from", "year_to", "university_id", "sds_id"],
        corpus
            .scientists
            .values()
            .flat_map(|s| {
                s.affiliations.iter().map(move |a| {
                    vec![
                        s.id.clone(),
                        a.years.first.to_string(),
                        a.years.last.to_string(),
                        a.university_id.clone(),
                        a.sds_id.clone(),
                    ]
                })
            })
            .collect(),
    )?;
    write_rows(
        &paths.journals,
        &["id", "name"],
        corpus
            .journals
            .values()
            .map(|j| vec![j.id.clone(), j.name.clone()])
            .collect(),
    )?;
    write_rows(
        &paths.impact_factors,
        &["journal_id", "jcr_edition_year", "category_id", "impact_factor"],
        corpus
            .journals
            .values()
            .flat_map(|j| {
                j.impact_factors.iter().map(move |((edition, category), value)| {
                    vec![j.id.clone(), edition.to_string(), category.clone(), value.to_string()]
                })
            })
            .collect(),
    )?;
    write_rows(
        &paths.publications,
        &["id", "year", "journal_id", "category_ids", "author_ids"],
        corpus
            .publications
            .values()
            .map(|p| {
                vec![
                    p.id.clone(),
                    p.year.to_string(),
                    p.journal_id.clone(),
                    join(&p.category_ids),
                    join(&p.author_ids),
                ]
            })
            .collect(),
    )?;
    write_rows(
        &paths.snapshots,
        &["publication_id", "observation_date", "citations"],
        corpus
            .publications
            .values()
            .flat_map(|p| {
                p.snapshots
                    .iter()
                    .map(move |(d, c)| vec![p.id.clone(), d.to_string(), c.to_string()])
            })
            .collect(),
    )?;
    Ok(paths.all().iter().map(|p| p.to_path_buf()).collect())
}
