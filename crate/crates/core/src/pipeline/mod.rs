//! Census ingestion, batch validation and report emission.

mod cache;

pub use cache::{digest, InvariantCache};

use std::io::{self, Read};
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{certify_combinatorial, certify_direct, Certificate, Verdict};
use crate::determinant::{
    det_bracket, det_goeritz, det_spanning_trees, DeterminantError, DEFAULT_STATE_LIMIT,
    DEFAULT_TREE_LIMIT,
};
use crate::diagram::Diagram;
use crate::notation::{braid_closure, BraidWord, PdCode};
use crate::numerics::{ConstantNote, PrecisionContext, Real};
use crate::tait::{goeritz, smaller_shading};
use crate::twist::decompose;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}")]
    Io { path: String, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing mandatory column {0:?}")]
    MissingHeader(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    /// 1-based line in the source file, header included.
    pub line: usize,
    pub name: String,
    pub pd: Option<PdCode>,
    pub braid: Option<BraidWord>,
    pub det: Option<BigInt>,
    pub volume: Option<String>,
    pub crossings: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub line: usize,
    pub name: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Census {
    pub rows: Vec<CensusRow>,
    pub errors: Vec<RowError>,
}

pub fn ingest_csv(path: impl AsRef<Path>) -> Result<Census, PipelineError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ingest_reader(file)
}

/// Reads a census table with columns name, pd, braid, det, volume, crossings.
/// `name` and one of `pd`/`braid` are mandatory; other columns are ignored.
pub fn ingest_reader(reader: impl Read) -> Result<Census, PipelineError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let name_col = col("name").ok_or(PipelineError::MissingHeader("name"))?;
    let (pd_col, braid_col) = (col("pd"), col("braid"));
    if pd_col.is_none() && braid_col.is_none() {
        return Err(PipelineError::MissingHeader("pd"));
    }
    let (det_col, vol_col, cross_col) = (col("det"), col("volume"), col("crossings"));

    let mut census = Census::default();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                census.errors.push(RowError {
                    line,
                    name: String::new(),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let field = |c: Option<usize>| {
            c.and_then(|c| record.get(c))
                .filter(|s| !s.is_empty())
                .map(str::to_string)
        };
        let name = field(Some(name_col)).unwrap_or_default();
        match parse_row(
            line,
            name.clone(),
            field(pd_col),
            field(braid_col),
            field(det_col),
            field(vol_col),
            field(cross_col),
        ) {
            Ok(row) => census.rows.push(row),
            Err(message) => census.errors.push(RowError {
                line,
                name,
                message,
            }),
        }
    }
    Ok(census)
}

fn parse_row(
    line: usize,
    name: String,
    pd: Option<String>,
    braid: Option<String>,
    det: Option<String>,
    volume: Option<String>,
    crossings: Option<String>,
) -> Result<CensusRow, String> {
    if name.is_empty() {
        return Err("empty name".into());
    }
    if pd.is_none() && braid.is_none() {
        return Err("neither pd nor braid given".into());
    }
    let pd = pd
        .map(|s| s.parse::<PdCode>().map_err(|e| format!("pd: {e}")))
        .transpose()?;
    let braid = braid
        .map(|s| s.parse::<BraidWord>().map_err(|e| format!("braid: {e}")))
        .transpose()?;
    let det = det
        .map(|s| match s.parse::<BigInt>() {
            Ok(d) if d >= BigInt::from(0) => Ok(d),
            _ => Err(format!("det: {s:?} is not a nonnegative integer")),
        })
        .transpose()?;
    if let Some(v) = &volume {
        match Real::parse_decimal(v, 64) {
            Some(x) if !x.is_negative() => {}
            _ => return Err(format!("volume: {v:?} is not a nonnegative decimal")),
        }
    }
    let crossings = crossings
        .map(|s| s.parse::<u64>().map_err(|_| format!("crossings: {s:?}")))
        .transpose()?;
    Ok(CensusRow {
        line,
        name,
        pd,
        braid,
        det,
        volume,
        crossings,
    })
}

/// Cached per-diagram invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub digest: String,
    pub c: usize,
    pub components: usize,
    pub connected: bool,
    pub alternating: bool,
    pub prime: bool,
    pub reduced: bool,
    pub t: Option<usize>,
    pub twist_sizes: Vec<usize>,
    /// Decimal; `None` when no determinant route applies.
    pub det: Option<String>,
}

pub fn compute_invariants(d: &Diagram) -> Invariants {
    let connected = d.is_connected();
    let twist = connected.then(|| decompose(d).ok()).flatten();
    let det = if !connected {
        Some("0".to_string())
    } else {
        smaller_shading(d)
            .ok()
            .map(|tg| det_goeritz(&goeritz(&tg)).value.to_string())
    };
    Invariants {
        digest: digest(d.pd()),
        c: d.crossing_count(),
        components: d.component_count(),
        connected,
        alternating: d.is_alternating(),
        prime: connected && d.is_prime(),
        reduced: connected && d.is_reduced(),
        t: twist.as_ref().map(|td| td.t()),
        twist_sizes: twist.map(|td| td.sizes()).unwrap_or_default(),
        det,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub method: &'static str,
    pub value: Option<String>,
    pub skipped: Option<String>,
}

/// Bracket and spanning-tree determinants, where their limits allow.
pub fn oracle_determinants(d: &Diagram) -> Vec<OracleResult> {
    let wrap = |method, r: Result<BigInt, DeterminantError>| match r {
        Ok(v) => OracleResult {
            method,
            value: Some(v.to_string()),
            skipped: None,
        },
        Err(e) => OracleResult {
            method,
            value: None,
            skipped: Some(e.to_string()),
        },
    };
    let bracket = det_bracket(d, DEFAULT_STATE_LIMIT).map(|r| r.value);
    let trees = smaller_shading(d)
        .map_err(DeterminantError::from)
        .and_then(|tg| det_spanning_trees(&tg, DEFAULT_TREE_LIMIT))
        .map(|r| r.value);
    vec![wrap("bracket", bracket), wrap("spanning_trees", trees)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub field: &'static str,
    pub tabulated: String,
    pub computed: String,
    pub method: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub line: usize,
    pub name: String,
    pub source: &'static str,
    pub invariants: Option<Invariants>,
    pub oracle: Vec<OracleResult>,
    pub tabulated_det: Option<String>,
    pub volume: Option<String>,
    pub discrepancies: Vec<Discrepancy>,
    pub certificate: Option<Certificate>,
    pub error: Option<String>,
}

impl RowReport {
    pub fn violation(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.violation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub digits: u32,
    pub bits: u32,
    pub oracle: bool,
    pub constants: Vec<ConstantNote>,
}

impl Provenance {
    pub fn new(ctx: &PrecisionContext, oracle: bool) -> Self {
        Provenance {
            tool: "voldet",
            version: env!("CARGO_PKG_VERSION"),
            digits: ctx.digits(),
            bits: ctx.bits(),
            oracle,
            constants: ctx.provenance(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub ingest_errors: usize,
    pub row_errors: usize,
    pub certified: usize,
    pub inconclusive: usize,
    pub hypothesis_failed: usize,
    pub violations: usize,
    pub discrepancies: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub provenance: Provenance,
    pub summary: Summary,
    pub rows: Vec<RowReport>,
    pub ingest_errors: Vec<RowError>,
}

impl ValidationReport {
    /// No discrepancies, violations or input errors.
    pub fn is_clean(&self) -> bool {
        let s = &self.summary;
        s.violations == 0 && s.discrepancies == 0 && s.ingest_errors == 0 && s.row_errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat per-row summary; provenance goes in leading `#` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} {} digits={} bits={} oracle={}\n",
            self.provenance.tool,
            self.provenance.version,
            self.provenance.digits,
            self.provenance.bits,
            self.provenance.oracle
        ));
        for note in &self.provenance.constants {
            out.push_str(&format!("# {}={} ({})\n", note.name, note.value, note.method));
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record([
            "line", "name", "c", "t", "det", "tabulated_det", "volume", "method", "verdict",
            "margin", "violation", "discrepancies", "error",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            let inv = r.invariants.as_ref();
            let cert = r.certificate.as_ref();
            let opt = |v: Option<String>| v.unwrap_or_default();
            w.write_record([
                r.line.to_string(),
                r.name.clone(),
                opt(inv.map(|i| i.c.to_string())),
                opt(inv.and_then(|i| i.t).map(|t| t.to_string())),
                opt(inv.and_then(|i| i.det.clone())),
                opt(r.tabulated_det.clone()),
                opt(r.volume.clone()),
                opt(cert.map(|c| enum_name(&c.method))),
                opt(cert.map(|c| enum_name(&c.verdict))),
                opt(cert.and_then(|c| c.comparison.as_ref()).map(|c| c.margin.clone())),
                r.violation().to_string(),
                r.discrepancies
                    .iter()
                    .map(|d| format!("{}:{}!={}", d.field, d.tabulated, d.computed))
                    .collect::<Vec<_>>()
                    .join(";"),
                opt(r.error.clone()),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Cross-check determinants with the bracket and spanning-tree routes.
    pub oracle: bool,
    pub parallel: bool,
    /// Analyze the mirror image of every diagram.
    pub mirror: bool,
}

fn row_diagram(row: &CensusRow, mirror: bool) -> Result<Option<(Diagram, &'static str)>, String> {
    let (pd, source) = match (&row.pd, &row.braid) {
        (Some(pd), _) => (pd.clone(), "pd"),
        (None, Some(b)) => (braid_closure(b).map_err(|e| e.to_string())?, "braid"),
        (None, None) => return Ok(None),
    };
    let pd = if mirror { pd.mirror() } else { pd };
    Diagram::build(&pd)
        .map(|d| Some((d, source)))
        .map_err(|e| e.to_string())
}

fn validate_row(
    row: &CensusRow,
    ctx: &PrecisionContext,
    opts: ValidateOptions,
    cache: Option<&InvariantCache>,
) -> RowReport {
    let mut report = RowReport {
        line: row.line,
        name: row.name.clone(),
        source: "none",
        invariants: None,
        oracle: Vec::new(),
        tabulated_det: row.det.as_ref().map(BigInt::to_string),
        volume: row.volume.clone(),
        discrepancies: Vec::new(),
        certificate: None,
        error: None,
    };
    let diagram = match row_diagram(row, opts.mirror) {
        Ok(d) => d,
        Err(e) => {
            report.error = Some(e);
            return report;
        }
    };
    if let Some((d, source)) = &diagram {
        report.source = source;
        let key = digest(d.pd());
        let inv = cache
            .and_then(|c| c.get(&key).cloned())
            .unwrap_or_else(|| compute_invariants(d));
        if let (Some(tab), Some(det)) = (&report.tabulated_det, &inv.det) {
            if tab != det {
                report.discrepancies.push(Discrepancy {
                    field: "det",
                    tabulated: tab.clone(),
                    computed: det.clone(),
                    method: "goeritz",
                });
            }
        }
        if let Some(tab) = row.crossings {
            // the diagram's crossing count is the crossing number only when
            // it is reduced and alternating
            if inv.alternating && inv.reduced && tab as usize != inv.c {
                report.discrepancies.push(Discrepancy {
                    field: "crossings",
                    tabulated: tab.to_string(),
                    computed: inv.c.to_string(),
                    method: "reduced alternating diagram",
                });
            }
        }
        if opts.oracle {
            report.oracle = oracle_determinants(d);
            for o in &report.oracle {
                if let (Some(v), Some(det)) = (&o.value, &inv.det) {
                    if v != det {
                        report.discrepancies.push(Discrepancy {
                            field: "det",
                            tabulated: det.clone(),
                            computed: v.clone(),
                            method: o.method,
                        });
                    }
                }
            }
        }
        report.invariants = Some(inv);
    }

    let det = report
        .invariants
        .as_ref()
        .and_then(|i| i.det.as_ref())
        .or(report.tabulated_det.as_ref())
        .and_then(|s| s.parse::<BigInt>().ok());
    match (&row.volume, det, &diagram) {
        (Some(vol), Some(det), _) => match certify_direct(&det, vol, ctx) {
            Ok(cert) => report.certificate = Some(cert),
            Err(e) => report.error = Some(e.to_string()),
        },
        (_, _, Some((d, _))) => report.certificate = Some(certify_combinatorial(d, ctx)),
        _ => report.error = Some("no volume and no diagram to certify".into()),
    }
    report
}

/// Validates every row; output order follows input order whether or not
/// rows are processed in parallel.
pub fn validate_table(
    census: &Census,
    ctx: &PrecisionContext,
    opts: ValidateOptions,
    cache: Option<&InvariantCache>,
) -> ValidationReport {
    let rows: Vec<RowReport> = if opts.parallel {
        census
            .rows
            .par_iter()
            .map(|r| validate_row(r, ctx, opts, cache))
            .collect()
    } else {
        census
            .rows
            .iter()
            .map(|r| validate_row(r, ctx, opts, cache))
            .collect()
    };
    let mut summary = Summary {
        rows: rows.len(),
        ingest_errors: census.errors.len(),
        ..Summary::default()
    };
    for r in &rows {
        summary.discrepancies += r.discrepancies.len();
        if r.error.is_some() {
            summary.row_errors += 1;
        }
        if let Some(c) = &r.certificate {
            match c.verdict {
                Verdict::Certified => summary.certified += 1,
                Verdict::Inconclusive => summary.inconclusive += 1,
                Verdict::HypothesisFailed => summary.hypothesis_failed += 1,
            }
            if c.violation {
                summary.violations += 1;
            }
        }
    }
    ValidationReport {
        provenance: Provenance::new(ctx, opts.oracle),
        summary,
        rows,
        ingest_errors: census.errors.clone(),
    }
}

/// Writes freshly computed invariants back to `cache`, in row order.
pub fn update_cache(report: &ValidationReport, cache: &mut InvariantCache) -> io::Result<usize> {
    let mut added = 0;
    for inv in report.rows.iter().filter_map(|r| r.invariants.as_ref()) {
        if cache.get(&inv.digest).is_none() {
            added += 1;
        }
        cache.put(inv.clone())?;
    }
    Ok(added)
}
