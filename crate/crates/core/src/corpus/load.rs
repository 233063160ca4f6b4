use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::model::*;

pub const PUBLICATIONS: &str = "publications.csv";
pub const SNAPSHOTS: &str = "snapshots.csv";
pub const JOURNALS: &str = "journals.csv";
pub const IMPACT_FACTORS: &str = "impact_factors.csv";
pub const SCIENTISTS: &str = "scientists.csv";
pub const AFFILIATIONS: &str = "affiliations.csv";
pub const STRUCTURE: &str = "structure.csv";
pub const UNIVERSITIES: &str = "universities.csv";

/// Explicit locations of the eight ingestion files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusPaths {
    pub publications: PathBuf,
    pub snapshots: PathBuf,
    pub journals: PathBuf,
    pub impact_factors: PathBuf,
    pub scientists: PathBuf,
    pub affiliations: PathBuf,
    pub structure: PathBuf,
    pub universities: PathBuf,
}

impl CorpusPaths {
    /// The standard file names inside `dir`.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            publications: dir.join(PUBLICATIONS),
            snapshots: dir.join(SNAPSHOTS),
            journals: dir.join(JOURNALS),
            impact_factors: dir.join(IMPACT_FACTORS),
            scientists: dir.join(SCIENTISTS),
            affiliations: dir.join(AFFILIATIONS),
            structure: dir.join(STRUCTURE),
            universities: dir.join(UNIVERSITIES),
        }
    }

    pub fn all(&self) -> [&Path; 8] {
        [
            &self.publications,
            &self.snapshots,
            &self.journals,
            &self.impact_factors,
            &self.scientists,
            &self.affiliations,
            &self.structure,
            &self.universities,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadErrorKind {
    MissingFile,
    Io(String),
    MissingColumn(String),
    BadValue { column: String, value: String, expected: &'static str },
    Duplicate { key: String },
    Dangling { column: String, key: String },
    NonMonotonic { publication: String, earlier: NaiveDate, later: NaiveDate },
    SnapshotBeforePublication { publication: String, date: NaiveDate, year: i32 },
    EmptyCategories { publication: String },
    NegativeImpactFactor { journal: String, value: f64 },
    EmptyYearRange { scientist: String },
    OverlappingAffiliation { scientist: String, year: i32 },
    ConflictingUda { uda: String },
}

/// One ingestion problem, located by file and (1-based) line.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadError {
    pub file: String,
    pub line: Option<u64>,
    pub kind: LoadErrorKind,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: ", self.file, line)?,
            None => write!(f, "{}: ", self.file)?,
        }
        use LoadErrorKind::*;
        match &self.kind {
            MissingFile => write!(f, "file not found"),
            Io(e) => write!(f, "read error: {e}"),
            MissingColumn(c) => write!(f, "missing column '{c}'"),
            BadValue { column, value, expected } => {
                write!(f, "column '{column}': expected {expected}, got '{value}'")
            }
            Duplicate { key } => write!(f, "duplicate key '{key}'"),
            Dangling { column, key } => write!(f, "dangling reference: {column} '{key}' not found"),
            NonMonotonic { publication, earlier, later } => write!(
                f,
                "citations of '{publication}' decrease between {earlier} and {later}"
            ),
            SnapshotBeforePublication { publication, date, year } => write!(
                f,
                "snapshot {date} of '{publication}' precedes its publication year {year}"
            ),
            EmptyCategories { publication } => {
                write!(f, "publication '{publication}' has no subject category")
            }
            NegativeImpactFactor { journal, value } => {
                write!(f, "impact factor {value} of journal '{journal}' is not a nonnegative number")
            }
            EmptyYearRange { scientist } => {
                write!(f, "affiliation of '{scientist}' has year_from > year_to")
            }
            OverlappingAffiliation { scientist, year } => {
                write!(f, "scientist '{scientist}' has more than one affiliation in {year}")
            }
            ConflictingUda { uda } => write!(f, "uda '{uda}' listed with conflicting names"),
        }
    }
}

/// Every problem found while loading; no partial corpus is returned.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct CorpusErrors(pub Vec<LoadError>);

impl fmt::Display for CorpusErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error(s) loading corpus", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

/// A CSV file read into memory with required columns resolved.
struct Table {
    file: String,
    columns: HashMap<String, usize>,
    rows: Vec<Row>,
}

impl Table {
    fn read(path: &Path, required: &[&str], errors: &mut Vec<LoadError>) -> Option<Table> {
        let file = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let err = |kind| LoadError { file: file.clone(), line: None, kind };
        if !path.is_file() {
            errors.push(err(LoadErrorKind::MissingFile));
            return None;
        }
        let reader = match File::open(path) {
            Ok(f) => f,
            Err(e) => {
                errors.push(err(LoadErrorKind::Io(e.to_string())));
                return None;
            }
        };
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = match rdr.headers() {
            Ok(h) => h.clone(),
            Err(e) => {
                errors.push(err(LoadErrorKind::Io(e.to_string())));
                return None;
            }
        };
        let columns: HashMap<String, usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim_start_matches('\u{feff}').to_string(), i))
            .collect();
        let missing: Vec<_> = required
            .iter()
            .filter(|c| !columns.contains_key(**c))
            .collect();
        if !missing.is_empty() {
            for c in missing {
                errors.push(err(LoadErrorKind::MissingColumn(c.to_string())));
            }
            return None;
        }
        let mut rows = Vec::new();
        for record in rdr.records() {
            match record {
                Ok(r) => rows.push(Row {
                    line: r.position().map(|p| p.line()).unwrap_or(0),
                    fields: r.iter().map(str::to_string).collect(),
                }),
                Err(e) => {
                    let line = e.position().map(|p| p.line());
                    errors.push(LoadError { file: file.clone(), line, kind: LoadErrorKind::Io(e.to_string()) });
                }
            }
        }
        Some(Table { file, columns, rows })
    }

    fn get<'a>(&self, row: &'a Row, column: &str) -> &'a str {
        row.fields
            .get(self.columns[column])
            .map(String::as_str)
            .unwrap_or("")
    }

    fn error(&self, row: &Row, kind: LoadErrorKind) -> LoadError {
        LoadError { file: self.file.clone(), line: Some(row.line), kind }
    }

    fn parse<T: std::str::FromStr>(
        &self,
        row: &Row,
        column: &str,
        expected: &'static str,
        errors: &mut Vec<LoadError>,
    ) -> Option<T> {
        let raw = self.get(row, column);
        match raw.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                errors.push(self.error(
                    row,
                    LoadErrorKind::BadValue { column: column.into(), value: raw.into(), expected },
                ));
                None
            }
        }
    }

    fn key(&self, row: &Row, column: &str, errors: &mut Vec<LoadError>) -> Option<String> {
        let raw = self.get(row, column);
        if raw.is_empty() {
            errors.push(self.error(
                row,
                LoadErrorKind::BadValue { column: column.into(), value: String::new(), expected: "a nonempty id" },
            ));
            return None;
        }
        Some(raw.to_string())
    }
}

fn split_ids(raw: &str) -> BTreeSet<String> {
    raw.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Loads and cross-validates a corpus. Either the whole corpus is returned
/// or every detected problem is.
pub fn load_corpus(paths: &CorpusPaths) -> Result<Corpus, CorpusErrors> {
    let mut errors = Vec::new();
    let e = &mut errors;

    let universities_t = Table::read(&paths.universities, &["id", "name"], e);
    let structure_t = Table::read(&paths.structure, &["sds_id", "sds_name", "uda_id", "uda_name"], e);
    let scientists_t = Table::read(&paths.scientists, &["id"], e);
    let affiliations_t = Table::read(
        &paths.affiliations,
        &["scientist_id", "year_from", "year_to", "university_id", "sds_id"],
        e,
    );
    let journals_t = Table::read(&paths.journals, &["id", "name"], e);
    let impact_t = Table::read(
        &paths.impact_factors,
        &["journal_id", "jcr_edition_year", "category_id", "impact_factor"],
        e,
    );
    let publications_t = Table::read(
        &paths.publications,
        &["id", "year", "journal_id", "category_ids", "author_ids"],
        e,
    );
    let snapshots_t = Table::read(&paths.snapshots, &["publication_id", "observation_date", "citations"], e);

    let mut structure = OrgStructure::default();
    if let Some(t) = &universities_t {
        for row in &t.rows {
            let (Some(id), name) = (t.key(row, "id", e), t.get(row, "name")) else { continue };
            if structure.universities.contains_key(&id) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: id }));
                continue;
            }
            structure
                .universities
                .insert(id.clone(), University { id, name: name.to_string() });
        }
    }
    if let Some(t) = &structure_t {
        for row in &t.rows {
            let (Some(sds_id), Some(uda_id)) = (t.key(row, "sds_id", e), t.key(row, "uda_id", e)) else {
                continue;
            };
            let uda_name = t.get(row, "uda_name").to_string();
            match structure.udas.get(&uda_id) {
                Some(u) if u.name != uda_name => {
                    e.push(t.error(row, LoadErrorKind::ConflictingUda { uda: uda_id.clone() }));
                }
                Some(_) => {}
                None => {
                    structure
                        .udas
                        .insert(uda_id.clone(), Uda { id: uda_id.clone(), name: uda_name });
                }
            }
            if structure.sds.contains_key(&sds_id) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: sds_id }));
                continue;
            }
            let name = t.get(row, "sds_name").to_string();
            structure.sds.insert(sds_id.clone(), Sds { id: sds_id, name, uda_id });
        }
    }

    let mut scientists: BTreeMap<String, Scientist> = BTreeMap::new();
    if let Some(t) = &scientists_t {
        for row in &t.rows {
            let Some(id) = t.key(row, "id", e) else { continue };
            if scientists.contains_key(&id) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: id }));
                continue;
            }
            scientists.insert(id.clone(), Scientist { id, affiliations: Vec::new() });
        }
    }
    if let Some(t) = &affiliations_t {
        for row in &t.rows {
            let scientist = t.key(row, "scientist_id", e);
            let from = t.parse::<i32>(row, "year_from", "an integer year", e);
            let to = t.parse::<i32>(row, "year_to", "an integer year", e);
            let university = t.key(row, "university_id", e);
            let sds = t.key(row, "sds_id", e);
            let (Some(scientist), Some(from), Some(to), Some(university), Some(sds)) =
                (scientist, from, to, university, sds)
            else {
                continue;
            };
            let mut ok = true;
            if universities_t.is_some() && !structure.universities.contains_key(&university) {
                e.push(t.error(row, LoadErrorKind::Dangling { column: "university_id".into(), key: university.clone() }));
                ok = false;
            }
            if structure_t.is_some() && !structure.sds.contains_key(&sds) {
                e.push(t.error(row, LoadErrorKind::Dangling { column: "sds_id".into(), key: sds.clone() }));
                ok = false;
            }
            let Some(years) = YearRange::new(from, to) else {
                e.push(t.error(row, LoadErrorKind::EmptyYearRange { scientist }));
                continue;
            };
            let Some(entry) = scientists.get_mut(&scientist) else {
                if scientists_t.is_some() {
                    e.push(t.error(row, LoadErrorKind::Dangling { column: "scientist_id".into(), key: scientist }));
                }
                continue;
            };
            if let Some(clash) = entry.affiliations.iter().find(|a| a.years.overlaps(&years)) {
                let year = clash.years.first.max(years.first);
                e.push(t.error(row, LoadErrorKind::OverlappingAffiliation { scientist, year }));
                continue;
            }
            if ok {
                entry.affiliations.push(Affiliation { years, university_id: university, sds_id: sds });
            }
        }
    }
    for s in scientists.values_mut() {
        s.affiliations.sort_by_key(|a| a.years);
    }

    let mut journals: BTreeMap<String, Journal> = BTreeMap::new();
    if let Some(t) = &journals_t {
        for row in &t.rows {
            let Some(id) = t.key(row, "id", e) else { continue };
            if journals.contains_key(&id) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: id }));
                continue;
            }
            let name = t.get(row, "name").to_string();
            journals.insert(id.clone(), Journal { id, name, impact_factors: BTreeMap::new() });
        }
    }
    let mut categories: BTreeMap<String, SubjectCategory> = BTreeMap::new();
    let mut add_category = |id: &str| {
        categories
            .entry(id.to_string())
            .or_insert_with(|| SubjectCategory { id: id.to_string(), name: id.to_string() });
    };
    if let Some(t) = &impact_t {
        for row in &t.rows {
            let journal = t.key(row, "journal_id", e);
            let edition = t.parse::<i32>(row, "jcr_edition_year", "an integer year", e);
            let category = t.key(row, "category_id", e);
            let value = t.parse::<f64>(row, "impact_factor", "a decimal number", e);
            let (Some(journal), Some(edition), Some(category), Some(value)) = (journal, edition, category, value)
            else {
                continue;
            };
            if !(value.is_finite() && value >= 0.0) {
                e.push(t.error(row, LoadErrorKind::NegativeImpactFactor { journal, value }));
                continue;
            }
            let Some(j) = journals.get_mut(&journal) else {
                if journals_t.is_some() {
                    e.push(t.error(row, LoadErrorKind::Dangling { column: "journal_id".into(), key: journal }));
                }
                continue;
            };
            let key = (edition, category.clone());
            if j.impact_factors.contains_key(&key) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: format!("{journal}/{edition}/{category}") }));
                continue;
            }
            add_category(&category);
            j.impact_factors.insert(key, value);
        }
    }

    let mut publications: BTreeMap<String, Publication> = BTreeMap::new();
    if let Some(t) = &publications_t {
        for row in &t.rows {
            let id = t.key(row, "id", e);
            let year = t.parse::<i32>(row, "year", "an integer year", e);
            let journal = t.key(row, "journal_id", e);
            let (Some(id), Some(year), Some(journal_id)) = (id, year, journal) else { continue };
            if publications.contains_key(&id) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: id }));
                continue;
            }
            // Invalid rows are still indexed so snapshots do not cascade into
            // dangling-reference errors; the corpus is discarded anyway.
            if journals_t.is_some() && !journals.contains_key(&journal_id) {
                e.push(t.error(row, LoadErrorKind::Dangling { column: "journal_id".into(), key: journal_id.clone() }));
            }
            let category_ids = split_ids(t.get(row, "category_ids"));
            if category_ids.is_empty() {
                e.push(t.error(row, LoadErrorKind::EmptyCategories { publication: id.clone() }));
            }
            let author_ids = split_ids(t.get(row, "author_ids"));
            if scientists_t.is_some() {
                for a in author_ids.iter().filter(|a| !scientists.contains_key(*a)) {
                    e.push(t.error(row, LoadErrorKind::Dangling { column: "author_ids".into(), key: a.clone() }));
                }
            }
            for c in &category_ids {
                add_category(c);
            }
            publications.insert(
                id.clone(),
                Publication { id, year, journal_id, category_ids, author_ids, snapshots: BTreeMap::new() },
            );
        }
    }
    if let Some(t) = &snapshots_t {
        // (publication, date) -> (count, line), checked for monotonicity afterwards
        let mut seen: BTreeMap<(String, NaiveDate), (u64, u64)> = BTreeMap::new();
        for row in &t.rows {
            let publication = t.key(row, "publication_id", e);
            let date = t.parse::<NaiveDate>(row, "observation_date", "an ISO-8601 date", e);
            let citations = t.parse::<u64>(row, "citations", "a nonnegative integer", e);
            let (Some(publication), Some(date), Some(citations)) = (publication, date, citations) else {
                continue;
            };
            let Some(p) = publications.get(&publication) else {
                if publications_t.is_some() {
                    e.push(t.error(row, LoadErrorKind::Dangling { column: "publication_id".into(), key: publication }));
                }
                continue;
            };
            if date < NaiveDate::from_ymd_opt(p.year, 1, 1).expect("valid year") {
                e.push(t.error(row, LoadErrorKind::SnapshotBeforePublication { publication, date, year: p.year }));
                continue;
            }
            let key = (publication, date);
            if seen.contains_key(&key) {
                e.push(t.error(row, LoadErrorKind::Duplicate { key: format!("{}@{}", key.0, key.1) }));
                continue;
            }
            seen.insert(key, (citations, row.line));
        }
        let mut previous: Option<(&String, NaiveDate, u64)> = None;
        for ((publication, date), (count, line)) in &seen {
            if let Some((prev_pub, prev_date, prev_count)) = previous {
                if prev_pub == publication && *count < prev_count {
                    e.push(LoadError {
                        file: t.file.clone(),
                        line: Some(*line),
                        kind: LoadErrorKind::NonMonotonic {
                            publication: publication.clone(),
                            earlier: prev_date,
                            later: *date,
                        },
                    });
                }
            }
            previous = Some((publication, *date, *count));
        }
        for ((publication, date), (count, _)) in seen {
            if let Some(p) = publications.get_mut(&publication) {
                p.snapshots.insert(date, count);
            }
        }
    }

    if errors.is_empty() {
        Ok(Corpus { structure, categories, journals, publications, scientists })
    } else {
        Err(CorpusErrors(errors))
    }
}
