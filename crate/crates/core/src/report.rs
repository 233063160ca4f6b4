//! Tabular reports in TSV and JSON, and reading ranking files back.
//!
//! Numbers are formatted once to a fixed number of decimals and both
//! encodings are produced from that text, so they always agree.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, Months, NaiveDate};
use serde_json::{Map, Number, Value};

use crate::corpus::natural_id_cmp;
use crate::normalize::{Proxy, ScoreSet};
use crate::productivity::ProductivityTable;
use crate::ranking::{Ranking, RankingComparison, ShiftRow};
use crate::temporal::{BenchmarkReport, SweepRow};

pub const CORRELATION_DECIMALS: usize = 3;
pub const SUMMARY_DECIMALS: usize = 1;
pub const VALUE_DECIMALS: usize = 6;
pub const SCORE_DECIMALS: usize = 4;
pub const STAFF_DECIMALS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected tsv or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Value and number of decimals.
    Num(f64, usize),
    Bool(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.replace(['\t', '\n', '\r'], " "),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v, d) => format_number(*v, *d),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Num(v, d) => format_number(*v, *d)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// Fixed decimals, without a sign on zero.
pub fn format_number(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Prepends a `run` column carrying the manifest identifier.
    pub fn stamped(mut self, run_id: &str) -> Self {
        self.columns.insert(0, "run".into());
        for r in &mut self.rows {
            r.insert(0, Cell::text(run_id));
        }
        self
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::render).collect::<Vec<_>>().join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect::<Map<_, _>>()))
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.to_tsv(),
            Format::Json => self.to_json(),
        }
    }
}

fn num(v: f64, d: usize) -> Cell {
    Cell::Num(v, d)
}

fn int(v: usize) -> Cell {
    Cell::Int(v as i64)
}

pub fn ranking_table(rankings: &[Ranking]) -> Table {
    let mut t = Table::new(&[
        "uda_id",
        "uda_name",
        "proxy",
        "observation",
        "rank",
        "university_id",
        "university_name",
        "staff",
        "value",
        "tied",
    ]);
    for r in rankings {
        for e in &r.entries {
            t.push(vec![
                Cell::text(&r.uda_id),
                Cell::text(&r.uda_name),
                Cell::text(r.proxy.to_string()),
                Cell::text(&r.observation),
                int(e.rank),
                Cell::text(&e.university_id),
                Cell::text(&e.university_name),
                num(e.staff, STAFF_DECIMALS),
                num(e.value, VALUE_DECIMALS),
                Cell::Bool(e.tied),
            ]);
        }
    }
    t
}

pub fn exclusion_table(rankings: &[Ranking]) -> Table {
    let mut t = Table::new(&["uda_id", "university_id", "university_name", "staff", "reason"]);
    for r in rankings {
        let mut excluded: Vec<_> = r.excluded.iter().collect();
        excluded.sort_by(|a, b| natural_id_cmp(&a.university_id, &b.university_id));
        for e in excluded {
            t.push(vec![
                Cell::text(&r.uda_id),
                Cell::text(&e.university_id),
                Cell::text(&e.university_name),
                num(e.staff, STAFF_DECIMALS),
                Cell::text(e.reason.to_string()),
            ]);
        }
    }
    t
}

const STAT_COLUMNS: [&str; 7] =
    ["n_universities", "n_changed", "pct_changed", "max_shift", "mean_shift", "median_shift", "correlation"];

fn stat_cells(c: &RankingComparison) -> Vec<Cell> {
    vec![
        int(c.n_universities),
        int(c.n_changed),
        num(c.pct_changed, SUMMARY_DECIMALS),
        int(c.max_shift),
        num(c.mean_shift, SUMMARY_DECIMALS),
        num(c.median_shift, SUMMARY_DECIMALS),
        num(c.correlation, CORRELATION_DECIMALS),
    ]
}

/// Correlation and change statistics, one row per area.
pub fn comparison_table(comparisons: &[RankingComparison]) -> Table {
    let mut columns = vec!["uda_id", "uda_name"];
    columns.extend(STAT_COLUMNS);
    columns.push("method");
    let mut t = Table::new(&columns);
    for c in comparisons {
        let mut row = vec![Cell::text(&c.uda_id), Cell::text(&c.uda_name)];
        row.extend(stat_cells(c));
        row.push(Cell::text(c.method.to_string()));
        t.push(row);
    }
    t
}

/// Per-university rank pairs.
pub fn shift_table(uda_id: &str, rows: &[ShiftRow]) -> Table {
    let mut t = Table::new(&[
        "uda_id",
        "university_id",
        "university_name",
        "staff",
        "rank_a",
        "rank_b",
        "variation",
    ]);
    for r in rows {
        t.push(vec![
            Cell::text(uda_id),
            Cell::text(&r.university_id),
            Cell::text(&r.university_name),
            num(r.staff, STAFF_DECIMALS),
            int(r.rank_a),
            int(r.rank_b),
            Cell::Int(r.variation),
        ]);
    }
    t
}

/// Both arms against the mature citation benchmark, side by side.
pub fn benchmark_table(report: &BenchmarkReport) -> Table {
    let mut columns = vec!["period", "early_date", "mature_date", "jcr_edition", "uda_id", "uda_name", "arm"];
    columns.extend(STAT_COLUMNS);
    let mut t = Table::new(&columns);
    for c in &report.comparisons {
        for (arm, stats) in [("citations-early", &c.citations_early), ("impact-factor", &c.impact_factor)] {
            let mut row = vec![
                Cell::text(report.period.to_string()),
                Cell::text(report.early_date.to_string()),
                Cell::text(report.mature_date.to_string()),
                Cell::Int(report.jcr_edition as i64),
                Cell::text(&c.uda_id),
                Cell::text(&c.uda_name),
                Cell::text(arm),
            ];
            row.extend(stat_cells(stats));
            t.push(row);
        }
    }
    t
}

fn shift_months(d: NaiveDate, m: i64) -> Option<NaiveDate> {
    if m >= 0 {
        d.checked_add_months(Months::new(m as u32))
    } else {
        d.checked_sub_months(Months::new(m.unsigned_abs() as u32))
    }
}

/// Whole calendar months from `from` to `to`, rounded down.
pub fn whole_months(from: NaiveDate, to: NaiveDate) -> i64 {
    let mut m = (to.year() - from.year()) as i64 * 12 + to.month() as i64 - from.month() as i64;
    while shift_months(from, m).is_some_and(|d| d > to) {
        m -= 1;
    }
    while shift_months(from, m + 1).is_some_and(|d| d <= to) {
        m += 1;
    }
    m
}

/// Citation ranking at each date against the impact-factor ranking.
pub fn sweep_table(period: crate::corpus::YearRange, jcr_edition: i32, rows: &[SweepRow]) -> Table {
    let mut columns = vec!["period", "observation_date", "months_after_period", "jcr_edition", "uda_id", "uda_name"];
    columns.extend(STAT_COLUMNS);
    let mut t = Table::new(&columns);
    let end = period.end_date();
    for r in rows {
        let months = whole_months(end, r.date);
        for c in &r.comparisons {
            let mut row = vec![
                Cell::text(period.to_string()),
                Cell::text(r.date.to_string()),
                Cell::Int(months),
                Cell::Int(jcr_edition as i64),
                Cell::text(&c.uda_id),
                Cell::text(&c.uda_name),
            ];
            row.extend(stat_cells(c));
            t.push(row);
        }
    }
    t
}

pub fn score_table(scores: &ScoreSet) -> Table {
    let mut t = Table::new(&["publication_id", "proxy", "observation", "year", "categories", "value"]);
    for s in scores.scores.values() {
        t.push(vec![
            Cell::text(&s.publication_id),
            Cell::text(s.proxy.to_string()),
            Cell::text(&s.observation),
            Cell::Int(s.year as i64),
            Cell::text(s.categories.join(";")),
            num(s.value, SCORE_DECIMALS),
        ]);
    }
    t
}

/// Sector productivities with their national baselines.
pub fn productivity_table(table: &ProductivityTable) -> Table {
    let mut t = Table::new(&[
        "period",
        "proxy",
        "university_id",
        "sds_id",
        "strength",
        "staff",
        "productivity",
        "national_average",
        "ratio",
    ]);
    for p in &table.sds {
        let baseline = table.baselines.get(&p.sds_id).map(|b| b.value).unwrap_or(0.0);
        let ratio = if baseline > 0.0 { num(p.value / baseline, VALUE_DECIMALS) } else { Cell::text("") };
        t.push(vec![
            Cell::text(table.period.to_string()),
            Cell::text(p.proxy.to_string()),
            Cell::text(&p.university_id),
            Cell::text(&p.sds_id),
            num(p.strength, VALUE_DECIMALS),
            num(p.staff, VALUE_DECIMALS),
            num(p.value, VALUE_DECIMALS),
            num(baseline, VALUE_DECIMALS),
            ratio,
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{file}: {message}")]
pub struct ReadError {
    pub file: String,
    pub message: String,
}

fn json_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Rows of a TSV or JSON report as column -> text. JSON is recognised by a
/// leading `[`.
fn read_rows(path: &Path) -> Result<Vec<BTreeMap<String, String>>, ReadError> {
    let err = |message: String| ReadError { file: path.display().to_string(), message };
    let text = fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    if text.trim_start().starts_with('[') {
        let rows: Vec<Map<String, Value>> = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        return Ok(rows
            .into_iter()
            .map(|r| r.iter().map(|(k, v)| (k.clone(), json_text(v))).collect())
            .collect());
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| err(e.to_string()))?.clone();
    reader
        .records()
        .map(|r| {
            let r = r.map_err(|e| err(e.to_string()))?;
            Ok(headers.iter().map(String::from).zip(r.iter().map(String::from)).collect())
        })
        .collect()
}

/// Reads a ranking report (as written by `ranking_table`, or any file with
/// at least `uda_id`, `university_id` and `rank` columns), one ranking per area.
/// Ranks within an area must be a permutation of 1..N.
pub fn read_rankings(path: &Path) -> Result<Vec<Ranking>, ReadError> {
    let err = |message: String| ReadError { file: path.display().to_string(), message };
    let rows = read_rows(path)?;
    struct Area {
        name: String,
        proxy: Option<Proxy>,
        observation: String,
        rows: Vec<(String, String, f64, usize)>,
    }
    let mut areas: BTreeMap<String, Area> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let get = |c: &str| row.get(c).map(String::as_str).filter(|s| !s.is_empty());
        let need = |c: &str| get(c).ok_or_else(|| err(format!("row {line}: missing '{c}'")));
        let uda_id = need("uda_id")?.to_string();
        let university_id = need("university_id")?.to_string();
        let rank: usize = need("rank")?
            .parse()
            .map_err(|_| err(format!("row {line}: rank '{}' is not a positive integer", row["rank"])))?;
        let staff: f64 = match get("staff") {
            Some(s) => s.parse().map_err(|_| err(format!("row {line}: bad staff '{s}'")))?,
            None => 0.0,
        };
        let proxy = match get("proxy") {
            Some(p) => Some(p.parse::<Proxy>().map_err(|e| err(format!("row {line}: {e}")))?),
            None => None,
        };
        let name = get("university_name").unwrap_or(&university_id).to_string();
        let area = areas.entry(uda_id.clone()).or_insert_with(|| Area {
            name: get("uda_name").unwrap_or(&uda_id).to_string(),
            proxy,
            observation: get("observation").unwrap_or("").to_string(),
            rows: Vec::new(),
        });
        if area.rows.iter().any(|r| r.0 == university_id) {
            return Err(err(format!("row {line}: university '{university_id}' listed twice in uda '{uda_id}'")));
        }
        area.rows.push((university_id, name, staff, rank));
    }
    let mut out = Vec::new();
    for (uda_id, area) in areas {
        let mut ranks: Vec<usize> = area.rows.iter().map(|r| r.3).collect();
        ranks.sort_unstable();
        if ranks.iter().enumerate().any(|(i, r)| *r != i + 1) {
            return Err(err(format!("ranks of uda '{uda_id}' are not a permutation of 1..{}", ranks.len())));
        }
        let mut r = Ranking::from_ranks(&uda_id, area.proxy.unwrap_or(Proxy::Citations), area.rows);
        r.uda_name = area.name;
        r.observation = area.observation;
        out.push(r);
    }
    Ok(out)
}
