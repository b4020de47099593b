//! Batch processing of census CSV files and the derived summary tables.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::io::{Read, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::codec::{parse_gauss, GaussCode};
use crate::engine::EngineConfig;
use crate::invariants::compute_invariants_with;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("missing required column {0:?}")]
    MissingColumn(&'static str),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("at least two points are needed for a fit")]
    TooFewPoints,
    #[error("proportion at c={0} is not positive")]
    NonPositive(f64),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub name: String,
    pub gauss: GaussCode,
}

/// A row that failed to ingest; `row` counts data rows from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestError {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ingested {
    pub records: Vec<CensusRecord>,
    pub errors: Vec<IngestError>,
}

const NAME_COLUMNS: [&str; 3] = ["Name", "Knot", "Link"];

fn column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| names.contains(&h.trim()))
}

/// Reads `Name`/`Knot`/`Link` and `Gauss Code` columns; bad rows are collected.
pub fn ingest_csv<R: Read>(source: R) -> Result<Ingested, CensusError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = rdr.headers()?.clone();
    let name_col = column(&headers, &NAME_COLUMNS).ok_or(CensusError::MissingColumn("Name"))?;
    let code_col =
        column(&headers, &["Gauss Code"]).ok_or(CensusError::MissingColumn("Gauss Code"))?;
    let mut out = Ingested::default();
    let mut names = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let name = rec.get(name_col).unwrap_or("").trim().to_string();
        let fail = |message: String| IngestError { row, message };
        if name.is_empty() {
            out.errors.push(fail("empty name".into()));
            continue;
        }
        if !names.insert(name.clone()) {
            out.errors.push(fail(format!("duplicate name {name}")));
            continue;
        }
        match rec.get(code_col).map(parse_gauss) {
            Some(Ok(gauss)) => out.records.push(CensusRecord { name, gauss }),
            Some(Err(e)) => out.errors.push(fail(format!("{name}: {e}"))),
            None => out
                .errors
                .push(fail(format!("{name}: missing Gauss Code field"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowValues {
    pub state_code: String,
    pub unoriented_genus: usize,
    pub crosscap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRow {
    pub name: String,
    pub gauss: String,
    pub crossings: usize,
    pub outcome: Result<RowValues, String>,
}

impl ResultRow {
    pub fn values(&self) -> Option<&RowValues> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BatchOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub best_only: bool,
}

pub fn process_record(r: &CensusRecord, config: &EngineConfig) -> ResultRow {
    let outcome = compute_invariants_with(&r.gauss, config)
        .map(|rep| RowValues {
            state_code: rep.witness.to_string(),
            unoriented_genus: rep.unoriented_genus,
            crosscap: rep.crosscap,
        })
        .map_err(|e| e.to_string());
    ResultRow {
        name: r.name.clone(),
        gauss: r.gauss.to_string(),
        crossings: r.gauss.crossing_count(),
        outcome,
    }
}

/// One row per record, in input order.
pub fn process_batch(
    records: &[CensusRecord],
    opts: &BatchOptions,
) -> Result<Vec<ResultRow>, CensusError> {
    let config = EngineConfig {
        best_only: opts.best_only,
        ..EngineConfig::default()
    };
    let run = || {
        records
            .par_iter()
            .map(|r| process_record(r, &config))
            .collect()
    };
    match opts.jobs {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CensusError::Pool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

pub const OUTPUT_HEADER: &str = "Name,Gauss Code,State Code,Unoriented Genus,Crosscap Number";

fn quoted(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

fn name_field(name: &str) -> String {
    if name.contains([',', '"', '\n', '\r']) {
        quoted(name)
    } else {
        name.to_string()
    }
}

/// Writes the output CSV; failed rows carry `error: ...` in the state code
/// column and empty numbers.
pub fn emit_csv<W: Write>(rows: &[ResultRow], mut sink: W) -> Result<(), CensusError> {
    let mut buf = String::with_capacity(64 * (rows.len() + 1));
    buf.push_str(OUTPUT_HEADER);
    buf.push('\n');
    for r in rows {
        let (state, genus, crosscap) = match &r.outcome {
            Ok(v) => (
                v.state_code.clone(),
                v.unoriented_genus.to_string(),
                v.crosscap.to_string(),
            ),
            Err(e) => (format!("error: {e}"), String::new(), String::new()),
        };
        let _ = writeln!(
            buf,
            "{},{},{},{},{}",
            name_field(&r.name),
            quoted(&r.gauss),
            quoted(&state),
            genus,
            crosscap
        );
    }
    sink.write_all(buf.as_bytes())?;
    sink.flush()?;
    Ok(())
}

/// Reads an output CSV back into result rows.
pub fn read_results<R: Read>(source: R) -> Result<Vec<ResultRow>, CensusError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let headers = rdr.headers()?.clone();
    let idx = |names: &[&str], label: &'static str| {
        column(&headers, names).ok_or(CensusError::MissingColumn(label))
    };
    let name_col = idx(&NAME_COLUMNS, "Name")?;
    let code_col = idx(&["Gauss Code"], "Gauss Code")?;
    let state_col = idx(&["State Code"], "State Code")?;
    let genus_col = idx(&["Unoriented Genus"], "Unoriented Genus")?;
    let cross_col = idx(&["Crosscap Number"], "Crosscap Number")?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(i).unwrap_or("").trim().to_string();
        let gauss = get(code_col);
        let crossings = parse_gauss(&gauss).map(|g| g.crossing_count()).unwrap_or(0);
        let state = get(state_col);
        let outcome = match (get(genus_col).parse(), get(cross_col).parse()) {
            (Ok(unoriented_genus), Ok(crosscap)) if crossings > 0 => Ok(RowValues {
                state_code: state,
                unoriented_genus,
                crosscap,
            }),
            _ => Err(state.strip_prefix("error: ").unwrap_or(&state).to_string()),
        };
        rows.push(ResultRow {
            name: get(name_col),
            gauss,
            crossings,
            outcome,
        });
    }
    Ok(rows)
}

/// Counts and statistics of one integer invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub counts: BTreeMap<usize, usize>,
    pub mean: f64,
    pub median: f64,
    pub modes: Vec<usize>,
    pub max: usize,
}

impl Distribution {
    pub fn from_values(values: &[usize]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mean = sorted.iter().sum::<usize>() as f64 / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
        };
        let mut counts = BTreeMap::new();
        for &v in &sorted {
            *counts.entry(v).or_insert(0) += 1;
        }
        let top = counts.values().copied().max().unwrap_or(0);
        let modes = counts
            .iter()
            .filter(|(_, &k)| k == top)
            .map(|(&v, _)| v)
            .collect();
        Some(Distribution {
            counts,
            mean,
            median,
            modes,
            max: sorted[n - 1],
        })
    }

    pub fn count(&self, value: usize) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn mode_text(&self) -> String {
        self.modes
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Formats a statistic the way the tables print it: integers bare, others to 2 decimals.
pub fn format_stat(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0;
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        let s = format!("{r:.2}");
        s.trim_end_matches('0').to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub crossings: usize,
    pub population: usize,
    pub genus: Distribution,
    pub crosscap: Distribution,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

fn by_crossings(rows: &[ResultRow]) -> BTreeMap<usize, Vec<&RowValues>> {
    let mut map: BTreeMap<usize, Vec<&RowValues>> = BTreeMap::new();
    for r in rows {
        if let Some(v) = r.values() {
            map.entry(r.crossings).or_default().push(v);
        }
    }
    map
}

/// Per crossing number distributions of the unoriented genus and crosscap number.
/// Error rows are skipped.
pub fn summarize(rows: &[ResultRow]) -> SummaryTable {
    let rows = by_crossings(rows)
        .into_iter()
        .map(|(c, vals)| {
            let g: Vec<usize> = vals.iter().map(|v| v.unoriented_genus).collect();
            let x: Vec<usize> = vals.iter().map(|v| v.crosscap).collect();
            SummaryRow {
                crossings: c,
                population: vals.len(),
                genus: Distribution::from_values(&g).expect("non-empty group"),
                crosscap: Distribution::from_values(&x).expect("non-empty group"),
            }
        })
        .collect();
    SummaryTable { rows }
}

impl SummaryTable {
    fn value_range(&self) -> Vec<usize> {
        let max = self
            .rows
            .iter()
            .map(|r| r.genus.max.max(r.crosscap.max))
            .max()
            .unwrap_or(0);
        (1..=max).collect()
    }

    pub fn to_csv(&self) -> String {
        let values = self.value_range();
        let mut out = String::from("c,invariant");
        for v in &values {
            let _ = write!(out, ",n{v}");
        }
        out.push_str(",mean,median,mode,max\n");
        for r in &self.rows {
            for (label, d) in [("Gamma", &r.genus), ("gamma", &r.crosscap)] {
                let _ = write!(out, "{},{label}", r.crossings);
                for v in &values {
                    let _ = write!(out, ",{}", d.count(*v));
                }
                let mode = d.mode_text();
                let mode = if d.modes.len() > 1 {
                    quoted(&mode)
                } else {
                    mode
                };
                let _ = writeln!(
                    out,
                    ",{:.2},{},{mode},{}",
                    d.mean,
                    format_stat(d.median),
                    d.max
                );
            }
        }
        out
    }
}

impl fmt::Display for SummaryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values = self.value_range();
        write!(f, "{:>3} {:>5}", "c", "")?;
        for v in &values {
            write!(f, " {v:>6}")?;
        }
        writeln!(
            f,
            " {:>6} {:>6} {:>6} {:>4}",
            "mean", "median", "mode", "max"
        )?;
        for r in &self.rows {
            for (label, d) in [("Gamma", &r.genus), ("gamma", &r.crosscap)] {
                write!(f, "{:>3} {label:>5}", r.crossings)?;
                for v in &values {
                    write!(f, " {:>6}", d.count(*v))?;
                }
                writeln!(
                    f,
                    " {:>6.2} {:>6} {:>6} {:>4}",
                    d.mean,
                    format_stat(d.median),
                    d.mode_text(),
                    d.max
                )?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectRow {
    pub crossings: usize,
    /// Count of records with crosscap > genus, keyed by crosscap value.
    pub by_crosscap: BTreeMap<usize, usize>,
    pub total: usize,
    pub population: usize,
}

impl DefectRow {
    pub fn proportion(&self) -> f64 {
        self.total as f64 / self.population as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DefectTable {
    pub rows: Vec<DefectRow>,
}

/// Per crossing number counts of records whose crosscap number exceeds the genus.
pub fn defect_report(rows: &[ResultRow]) -> DefectTable {
    let rows = by_crossings(rows)
        .into_iter()
        .map(|(c, vals)| {
            let mut by_crosscap = BTreeMap::new();
            for v in vals.iter().filter(|v| v.crosscap > v.unoriented_genus) {
                *by_crosscap.entry(v.crosscap).or_insert(0) += 1;
            }
            DefectRow {
                crossings: c,
                total: by_crosscap.values().sum(),
                by_crosscap,
                population: vals.len(),
            }
        })
        .collect();
    DefectTable { rows }
}

impl DefectTable {
    fn crosscaps(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .rows
            .iter()
            .flat_map(|r| r.by_crosscap.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `(c, proportion)` for rows with at least one defect.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.total > 0)
            .map(|r| (r.crossings as f64, r.proportion()))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let keys = self.crosscaps();
        let mut out = String::from("c");
        for k in &keys {
            let _ = write!(out, ",gamma{k}");
        }
        out.push_str(",total,population,proportion\n");
        for r in &self.rows {
            let _ = write!(out, "{}", r.crossings);
            for k in &keys {
                let _ = write!(out, ",{}", r.by_crosscap.get(k).copied().unwrap_or(0));
            }
            let _ = writeln!(out, ",{},{},{:.5}", r.total, r.population, r.proportion());
        }
        out
    }
}

impl fmt::Display for DefectTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys = self.crosscaps();
        write!(f, "{:>3}", "c")?;
        for k in &keys {
            write!(f, " {:>6}", format!("gamma{k}"))?;
        }
        writeln!(
            f,
            " {:>6} {:>10} {:>10}",
            "total", "population", "proportion"
        )?;
        for r in &self.rows {
            write!(f, "{:>3}", r.crossings)?;
            for k in &keys {
                write!(f, " {:>6}", r.by_crosscap.get(k).copied().unwrap_or(0))?;
            }
            writeln!(
                f,
                " {:>6} {:>10} {:>10.5}",
                r.total,
                r.population,
                r.proportion()
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    pub amplitude: f64,
    pub rate: f64,
}

/// Least squares on `(c, ln p)`, giving `p ~ amplitude * exp(-rate * c)`.
pub fn fit_exponential_decay(points: &[(f64, f64)]) -> Result<ExponentialFit, CensusError> {
    if points.len() < 2 {
        return Err(CensusError::TooFewPoints);
    }
    if let Some(&(c, _)) = points.iter().find(|(_, p)| *p <= 0.0 || p.is_nan()) {
        return Err(CensusError::NonPositive(c));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(CensusError::TooFewPoints);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Ok(ExponentialFit {
        amplitude: intercept.exp(),
        rate: -slope,
    })
}
