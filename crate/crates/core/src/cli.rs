//! `proxyrank` command line.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 usage or spec error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::corpus::{load_corpus, Corpus, CorpusPaths, YearRange};
use crate::manifest::RunManifest;
use crate::normalize::{score_corpus, JournalWeighting, Proxy};
use crate::productivity::NationalAverageMode;
use crate::ranking::{compare_rankings, shift_report, CorrelationMethod, DEFAULT_MIN_STAFF};
use crate::report::{self, Format, Table};
use crate::synth::{generate_to_dir, SynthConfig, SynthError};
use crate::temporal::{benchmark_analysis, lag_sweep, run_exercise, ExerciseOptions, ExerciseSpec, TemporalError};

#[derive(Parser, Debug)]
#[command(name = "proxyrank", version, about = "Research productivity rankings under citation and impact-factor proxies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a corpus directory and list every problem found.
    Validate {
        corpus_dir: PathBuf,
    },
    /// Rank universities within each area for one period and proxy.
    Rank(RankArgs),
    /// Compare two ranking files area by area.
    Compare(CompareArgs),
    /// Benchmark and lag analyses of citation versus impact-factor rankings.
    Temporal(TemporalArgs),
    /// Generate a synthetic corpus from a TOML config.
    Synth {
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Minimum average area staff for a university to be ranked.
    #[arg(long, default_value_t = DEFAULT_MIN_STAFF)]
    min_staff: f64,
    /// National average per sector: pooled or mean.
    #[arg(long, default_value_t = NationalAverageMode::Pooled)]
    national_average: NationalAverageMode,
    /// Impact-factor cohort: journal or publication.
    #[arg(long, default_value_t = JournalWeighting::Journal)]
    journal_weighting: JournalWeighting,
    /// Correlation between rankings: spearman or pearson-values.
    #[arg(long, default_value_t = CorrelationMethod::Spearman)]
    correlation: CorrelationMethod,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "tsv")]
    format: Format,
}

impl CommonArgs {
    fn options(&self) -> ExerciseOptions {
        ExerciseOptions {
            min_staff: self.min_staff,
            national_average: self.national_average,
            journal_weighting: self.journal_weighting,
            correlation: self.correlation,
            ..ExerciseOptions::default()
        }
    }

    fn config(&self) -> serde_json::Value {
        json!({
            "min_staff": self.min_staff,
            "national_average": self.national_average.to_string(),
            "journal_weighting": self.journal_weighting.to_string(),
            "correlation": self.correlation.to_string(),
            "format": self.format.to_string(),
        })
    }
}

#[derive(Args, Debug)]
struct RankArgs {
    corpus_dir: PathBuf,
    #[arg(long)]
    period: YearRange,
    #[arg(long)]
    proxy: Proxy,
    /// Citation observation date (citations proxy).
    #[arg(long)]
    date: Option<NaiveDate>,
    /// JCR edition year (impact-factor proxy).
    #[arg(long)]
    jcr_edition: Option<i32>,
    /// Also write every publication's quality score.
    #[arg(long)]
    dump_scores: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    ranking_a: PathBuf,
    ranking_b: PathBuf,
    #[arg(long, default_value_t = CorrelationMethod::Spearman)]
    correlation: CorrelationMethod,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "tsv")]
    format: Format,
}

#[derive(Args, Debug)]
struct TemporalArgs {
    corpus_dir: PathBuf,
    #[arg(long)]
    period: YearRange,
    #[arg(long)]
    jcr_edition: i32,
    /// Early citation observation date, compared with the benchmark.
    #[arg(long)]
    early: Option<NaiveDate>,
    /// Benchmark observation date; defaults to the latest snapshot.
    #[arg(long, requires = "early")]
    mature: Option<NaiveDate>,
    /// Comma-separated observation dates for a lag sweep.
    #[arg(long, value_delimiter = ',')]
    sweep: Vec<NaiveDate>,
    /// Minimum distance of an automatic benchmark date from the period end.
    #[arg(long, default_value_t = 36)]
    maturity_lag_months: u32,
    #[command(flatten)]
    common: CommonArgs,
}

/// Failure with its exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Spec(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Spec(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Spec(m) => m,
        }
    }
}

impl From<TemporalError> for Failure {
    fn from(e: TemporalError) -> Self {
        match e {
            TemporalError::Spec(_) => Failure::Spec(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Validate { corpus_dir } => validate(&corpus_dir),
        Command::Rank(args) => rank(&args),
        Command::Compare(args) => compare(&args),
        Command::Temporal(args) => temporal(&args),
        Command::Synth { config, out_dir } => synth(&config, &out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn validate(dir: &Path) -> Result<(), Failure> {
    if !dir.is_dir() {
        return Err(Failure::Input(format!("{}: not a directory", dir.display())));
    }
    match load_corpus(&CorpusPaths::in_dir(dir)) {
        Ok(c) => {
            println!(
                "0 errors ({} publications, {} journals, {} scientists, {} universities)",
                c.publications.len(),
                c.journals.len(),
                c.scientists.len(),
                c.structure.universities.len()
            );
            Ok(())
        }
        Err(errors) => {
            for e in &errors.0 {
                println!("{e}");
            }
            println!("{} errors", errors.0.len());
            Err(Failure::Input(format!("{} failed validation", dir.display())))
        }
    }
}

fn load(dir: &Path) -> Result<(Corpus, Vec<PathBuf>), Failure> {
    let paths = CorpusPaths::in_dir(dir);
    let corpus = load_corpus(&paths).map_err(|e| Failure::Input(e.to_string()))?;
    Ok((corpus, paths.all().iter().map(|p| p.to_path_buf()).collect()))
}

/// Writes tables, stamped with the run id, then the manifest.
fn emit(out: &Path, format: Format, mut manifest: RunManifest, tables: Vec<(&str, Table)>) -> Result<(), Failure> {
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    for (name, table) in tables {
        let path = out.join(format!("{name}.{}", format.extension()));
        fs::write(&path, table.stamped(manifest.run_id()).render(format)).map_err(|e| io_failure(&path, e))?;
        manifest.record_output(&path).map_err(|e| io_failure(&path, e))?;
    }
    manifest.write(out).map_err(|e| io_failure(out, e))?;
    Ok(())
}

fn rank(args: &RankArgs) -> Result<(), Failure> {
    let options = args.common.options();
    let spec = match (args.proxy, args.date, args.jcr_edition) {
        (Proxy::Citations, Some(date), None) => ExerciseSpec::citations(args.period, date, &options),
        (Proxy::ImpactFactor, None, Some(edition)) => ExerciseSpec::impact_factor(args.period, edition, &options),
        (Proxy::Citations, _, _) => return Err(Failure::Spec("--proxy citations needs --date and no --jcr-edition".into())),
        (Proxy::ImpactFactor, _, _) => {
            return Err(Failure::Spec("--proxy impact-factor needs --jcr-edition and no --date".into()))
        }
    };
    let (corpus, inputs) = load(&args.corpus_dir)?;
    let exercise = run_exercise(&corpus, &spec)?;
    for n in &exercise.notices {
        eprintln!("notice: {n}");
    }

    let mut config = args.common.config();
    config["period"] = json!(args.period);
    config["proxy"] = json!(args.proxy.to_string());
    config["observation"] = json!(spec.scoring.observation_label());
    config["dump_scores"] = json!(args.dump_scores);
    let manifest = RunManifest::new("rank", config, &inputs).map_err(|e| Failure::Input(e.to_string()))?;

    let mut tables = vec![
        ("rankings", report::ranking_table(&exercise.rankings)),
        ("exclusions", report::exclusion_table(&exercise.rankings)),
        ("productivity", report::productivity_table(&exercise.productivity)),
    ];
    if args.dump_scores {
        tables.push(("scores", report::score_table(&score_corpus(&corpus, &spec.scoring))));
    }
    emit(&args.common.out, args.common.format, manifest, tables)?;
    for r in &exercise.rankings {
        println!("{}: {} ranked, {} excluded", r.uda_id, r.entries.len(), r.excluded.len());
    }
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<(), Failure> {
    let a = report::read_rankings(&args.ranking_a).map_err(|e| Failure::Input(e.to_string()))?;
    let b = report::read_rankings(&args.ranking_b).map_err(|e| Failure::Input(e.to_string()))?;
    let mut comparisons = Vec::new();
    let mut shifts = Table::new(&[]);
    for ra in &a {
        let Some(rb) = b.iter().find(|r| r.uda_id == ra.uda_id) else { continue };
        let c = compare_rankings(ra, rb, args.correlation).map_err(|e| Failure::Input(e.to_string()))?;
        let rows = shift_report(ra, rb).map_err(|e| Failure::Input(e.to_string()))?;
        let t = report::shift_table(&ra.uda_id, &rows);
        if shifts.columns.is_empty() {
            shifts = t;
        } else {
            shifts.rows.extend(t.rows);
        }
        if !c.dropped.is_empty() {
            eprintln!("notice: uda '{}': {} universities not in both rankings", c.uda_id, c.dropped.len());
        }
        comparisons.push(c);
    }
    if comparisons.is_empty() {
        return Err(Failure::Input("the two ranking files share no uda".into()));
    }
    let config = json!({"correlation": args.correlation.to_string(), "format": args.format.to_string()});
    let manifest = RunManifest::new("compare", config, &[args.ranking_a.clone(), args.ranking_b.clone()])
        .map_err(|e| Failure::Input(e.to_string()))?;
    let summary = report::comparison_table(&comparisons);
    print!("{}", summary.to_tsv());
    emit(&args.out, args.format, manifest, vec![("comparison", summary), ("shifts", shifts)])
}

fn temporal(args: &TemporalArgs) -> Result<(), Failure> {
    if args.early.is_none() && args.sweep.is_empty() {
        return Err(Failure::Spec("temporal needs --early and/or --sweep".into()));
    }
    let options = ExerciseOptions { maturity_lag_months: args.maturity_lag_months, ..args.common.options() };
    let (corpus, inputs) = load(&args.corpus_dir)?;

    let mut tables = Vec::new();
    let mut config = args.common.config();
    config["period"] = json!(args.period);
    config["jcr_edition"] = json!(args.jcr_edition);
    if let Some(early) = args.early {
        let report = benchmark_analysis(&corpus, args.period, early, args.mature, args.jcr_edition, &options)?;
        for n in &report.notices {
            eprintln!("notice: {n}");
        }
        config["early"] = json!(early);
        config["mature"] = json!(report.mature_date);
        config["maturity_lag_months"] = json!(args.maturity_lag_months);
        let table = report::benchmark_table(&report);
        print!("{}", table.to_tsv());
        tables.push(("benchmark", table));
    }
    if !args.sweep.is_empty() {
        let rows = lag_sweep(&corpus, args.period, &args.sweep, args.jcr_edition, &options)?;
        let mut dates: Vec<NaiveDate> = args.sweep.clone();
        dates.sort();
        dates.dedup();
        config["sweep"] = json!(dates);
        let table = report::sweep_table(args.period, args.jcr_edition, &rows);
        print!("{}", table.to_tsv());
        tables.push(("sweep", table));
    }
    let manifest = RunManifest::new("temporal", config, &inputs).map_err(|e| Failure::Input(e.to_string()))?;
    emit(&args.common.out, args.common.format, manifest, tables)
}

fn synth(config_path: &Path, out_dir: &Path) -> Result<(), Failure> {
    let config = SynthConfig::from_file(config_path).map_err(|e| match e {
        SynthError::Io(m) => Failure::Input(m),
        other => Failure::Spec(other.to_string()),
    })?;
    let files = generate_to_dir(&config, out_dir).map_err(|e| Failure::Input(e.to_string()))?;
    let resolved = serde_json::to_value(&config).map_err(|e| Failure::Input(e.to_string()))?;
    let mut manifest = RunManifest::new("synth", resolved, &[config_path.to_path_buf()])
        .map_err(|e| Failure::Input(e.to_string()))?;
    for f in &files {
        manifest.record_output(f).map_err(|e| io_failure(f, e))?;
    }
    manifest.write(out_dir).map_err(|e| io_failure(out_dir, e))?;
    println!("wrote {} files to {} (seed {})", files.len(), out_dir.display(), config.seed);
    Ok(())
}
