use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Inclusive range of calendar years. Serialized as its display form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl YearRange {
    pub fn new(first: i32, last: i32) -> Option<Self> {
        (first <= last).then_some(Self { first, last })
    }

    pub fn single(year: i32) -> Self {
        Self { first: year, last: year }
    }

    pub fn contains(&self, year: i32) -> bool {
        self.first <= year && year <= self.last
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.first..=self.last
    }

    pub fn len(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// December 31 of the last year.
    pub fn end_date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.last, 12, 31).expect("valid year")
    }

    pub fn overlaps(&self, other: &YearRange) -> bool {
        self.first <= other.last && other.first <= self.last
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.first == self.last {
            write!(f, "{}", self.first)
        } else {
            write!(f, "{}-{}", self.first, self.last)
        }
    }
}

impl FromStr for YearRange {
    type Err = String;

    /// Accepts `2004` or `2004-2006`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| format!("invalid year '{t}' in period '{s}'"))
        };
        let (first, last) = match s.split_once('-') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let y = parse(s)?;
                (y, y)
            }
        };
        YearRange::new(first, last).ok_or_else(|| format!("empty period '{s}'"))
    }
}

impl Serialize for YearRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for YearRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubjectCategory {
    pub id: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Journal {
    pub id: String,
    pub name: String,
    /// Impact factor keyed by (JCR edition year, category id).
    pub impact_factors: BTreeMap<(i32, String), f64>,
}

impl Journal {
    pub fn impact_factor(&self, edition: i32, category_id: &str) -> Option<f64> {
        self.impact_factors
            .get(&(edition, category_id.to_string()))
            .copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub journal_id: String,
    pub category_ids: BTreeSet<String>,
    /// Matched university authors only; external co-authors are not listed.
    pub author_ids: BTreeSet<String>,
    /// Cumulative citation count by observation date.
    pub snapshots: BTreeMap<NaiveDate, u64>,
}

impl Publication {
    /// Cumulative citations as of `date`, carrying the latest earlier
    /// snapshot forward. `None` if nothing was observed on or before `date`.
    pub fn citations_at(&self, date: NaiveDate) -> Option<u64> {
        self.snapshots.range(..=date).next_back().map(|(_, c)| *c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affiliation {
    pub years: YearRange,
    pub university_id: String,
    pub sds_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scientist {
    pub id: String,
    pub affiliations: Vec<Affiliation>,
}

impl Scientist {
    pub fn affiliation_in(&self, year: i32) -> Option<&Affiliation> {
        self.affiliations.iter().find(|a| a.years.contains(year))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sds {
    pub id: String,
    pub name: String,
    pub uda_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Uda {
    pub id: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct University {
    pub id: String,
    pub name: String,
}

/// Sectors, areas and universities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrgStructure {
    pub sds: BTreeMap<String, Sds>,
    pub udas: BTreeMap<String, Uda>,
    pub universities: BTreeMap<String, University>,
}

impl OrgStructure {
    pub fn sds_of_uda<'a>(&'a self, uda_id: &'a str) -> impl Iterator<Item = &'a Sds> + 'a {
        self.sds.values().filter(move |s| s.uda_id == uda_id)
    }

    pub fn university_name<'a>(&'a self, id: &'a str) -> &'a str {
        self.universities
            .get(id)
            .map(|u| u.name.as_str())
            .unwrap_or(id)
    }

    pub fn uda_name<'a>(&'a self, id: &'a str) -> &'a str {
        self.udas.get(id).map(|u| u.name.as_str()).unwrap_or(id)
    }
}

/// Average head count of a (university, SDS) over a period.
#[derive(Clone, Debug, PartialEq)]
pub struct StaffCount {
    pub university_id: String,
    pub sds_id: String,
    pub value: f64,
}

/// A fully cross-linked, validated corpus. Immutable after load.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    pub structure: OrgStructure,
    pub categories: BTreeMap<String, SubjectCategory>,
    pub journals: BTreeMap<String, Journal>,
    pub publications: BTreeMap<String, Publication>,
    pub scientists: BTreeMap<String, Scientist>,
}

impl Corpus {
    pub fn publications_in(&self, period: YearRange) -> impl Iterator<Item = &Publication> {
        self.publications
            .values()
            .filter(move |p| period.contains(p.year))
    }

    /// All snapshot dates observed anywhere in the corpus, ascending.
    pub fn snapshot_dates(&self) -> BTreeSet<NaiveDate> {
        self.publications
            .values()
            .flat_map(|p| p.snapshots.keys().copied())
            .collect()
    }

    /// (university, SDS) units a publication is attributed to: every unit
    /// with at least one matched author affiliated there in the publication year.
    pub fn attributed_units(&self, publication: &Publication) -> BTreeSet<(String, String)> {
        publication
            .author_ids
            .iter()
            .filter_map(|a| self.scientists.get(a))
            .filter_map(|s| s.affiliation_in(publication.year))
            .map(|a| (a.university_id.clone(), a.sds_id.clone()))
            .collect()
    }
}

/// Orders identifiers numerically when both are plain integers, otherwise
/// lexicographically.
pub fn natural_id_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        _ => a.cmp(b),
    }
}
