use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use voldet::bounds::{
    bound_report, threshold_burton, threshold_thm1, vol_ub_lat, vol_ub_ve, FibonacciVariant,
    Hypotheses,
};
use voldet::certify::{certify_bound_chain, certify_combinatorial, certify_direct, diagram_facts};
use voldet::determinant::det_of_diagram;
use voldet::diagram::Diagram;
use voldet::notation::{braid_closure, parse_braid, parse_pd};
use voldet::numerics::{cached_constants, PrecisionContext};
use voldet::pipeline::{
    compute_invariants, ingest_csv, oracle_determinants, update_cache, validate_table,
    InvariantCache, ValidateOptions,
};

#[derive(Parser)]
#[command(name = "voldet", version, about = "Volume/determinant checks for alternating links")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "VOLDET_DIGITS", default_value_t = 50)]
    digits: u32,
    /// Cross-check determinants with the bracket and spanning-tree routes.
    #[arg(long, global = true, value_enum, default_value_t = Switch::Off)]
    oracle: Switch,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Analyze mirror images.
    #[arg(long, global = true)]
    mirror: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Standard,
    Borromean817,
}

impl From<Variant> for FibonacciVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Standard => FibonacciVariant::Standard,
            Variant::Borromean817 => FibonacciVariant::Borromean817,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the working constants and how they were computed.
    Constants,
    /// Crossings, twist regions, classifications and determinant of a diagram.
    Invariants {
        /// PD code, braid word ("N: 1 -2 ..."), or a file holding either.
        input: String,
    },
    /// Evaluate every bound at the given twist number, crossing number and determinant.
    Bounds {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        det: Option<String>,
        #[arg(long, value_enum, default_value_t = Variant::Standard)]
        variant: Variant,
    },
    /// Certify vol < 2 pi ln det for a diagram.
    Certify {
        input: String,
        /// Known hyperbolic volume; switches to the direct check.
        #[arg(long)]
        volume: Option<String>,
    },
    /// Thresholds and twist-number volume bounds over a range of t.
    Sweep {
        /// Inclusive range, e.g. 2..40 or 2..=40.
        #[arg(long, default_value = "2..=40")]
        t_range: String,
        /// Emit CSV regardless of --format.
        #[arg(long)]
        emit_csv: bool,
    },
    /// Validate a census table.
    ValidateTable {
        csv: PathBuf,
        /// JSON-lines invariant cache.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Print to stdout, exiting quietly when the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(InputError(e.into()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let ctx = cached_constants(cli.digits).map_err(input_err)?;
    match &cli.command {
        Command::Constants => constants(cli, &ctx),
        Command::Invariants { input } => invariants(cli, input),
        Command::Bounds { t, c, det, variant } => bounds(cli, &ctx, *t, *c, det.as_deref(), *variant),
        Command::Certify { input, volume } => certify(cli, &ctx, input, volume.as_deref()),
        Command::Sweep { t_range, emit_csv } => sweep(cli, &ctx, t_range, *emit_csv),
        Command::ValidateTable { csv, cache, output } => {
            validate(cli, &ctx, csv, cache.as_deref(), output.as_deref())
        }
    }
}

fn print_json(v: &impl serde::Serialize) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn load_diagram(input: &str, mirror: bool) -> Result<Diagram> {
    let text = if Path::new(input).is_file() {
        fs::read_to_string(input)
            .with_context(|| format!("reading {input}"))
            .map_err(input_err)?
    } else {
        input.to_string()
    };
    let text = text.trim();
    let pd = if text.starts_with('[') || text.starts_with("PD") {
        parse_pd(text).map_err(input_err)?
    } else {
        braid_closure(&parse_braid(text).map_err(input_err)?).map_err(input_err)?
    };
    let pd = if mirror { pd.mirror() } else { pd };
    Diagram::build(&pd).map_err(input_err)
}

fn constants(cli: &Cli, ctx: &PrecisionContext) -> Result<ExitCode> {
    let notes = ctx.provenance();
    match cli.format {
        Format::Json => print_json(&json!({
            "digits": ctx.digits(),
            "bits": ctx.bits(),
            "constants": notes,
        })),
        Format::Csv => {
            outln!("name,value,method");
            for n in notes {
                outln!("{},{},\"{}\"", n.name, n.value, n.method);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn invariants(cli: &Cli, input: &str) -> Result<ExitCode> {
    let d = load_diagram(input, cli.mirror)?;
    let inv = compute_invariants(&d);
    let facts = diagram_facts(&d);
    let regions = facts.twist.as_ref().map(|td| td.regions.clone());
    let mut out = json!({
        "pd": d.pd().render(),
        "invariants": inv,
        "twist_regions": regions,
        "twist_reduced_heuristic": facts.twist_check,
        "hypotheses": facts.hypotheses.0,
    });
    let mut clean = true;
    if cli.oracle == Switch::On {
        let oracle = oracle_determinants(&d);
        clean = oracle
            .iter()
            .all(|o| o.value.is_none() || o.value == inv.det);
        out["oracle"] = serde_json::to_value(&oracle)?;
        out["oracle_agrees"] = Value::Bool(clean);
    }
    match cli.format {
        Format::Json => print_json(&out),
        Format::Csv => {
            outln!("c,components,t,det,alternating,prime,reduced,twist_sizes");
            outln!(
                "{},{},{},{},{},{},{},\"{:?}\"",
                inv.c,
                inv.components,
                inv.t.map(|t| t.to_string()).unwrap_or_default(),
                inv.det.clone().unwrap_or_default(),
                inv.alternating,
                inv.prime,
                inv.reduced,
                inv.twist_sizes
            );
        }
    }
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn bounds(
    cli: &Cli,
    ctx: &PrecisionContext,
    t: u64,
    c: u64,
    det: Option<&str>,
    variant: Variant,
) -> Result<ExitCode> {
    let det = det
        .map(|s| s.parse::<num_bigint::BigInt>())
        .transpose()
        .map_err(|e| input_err(anyhow!("--det: {e}")))?;
    if c < t {
        return Err(input_err(anyhow!("--c must be at least --t")));
    }
    let report = bound_report(t, c, det.as_ref(), variant.into(), &Hypotheses::asserted(), ctx);
    match cli.format {
        Format::Json => print_json(&report),
        Format::Csv => {
            outln!("kind,name,value,applicable");
            let rows = report
                .det_lower
                .iter()
                .map(|e| ("det_lower", e))
                .chain(report.vol_upper.iter().map(|e| ("vol_upper", e)));
            for (kind, e) in rows {
                outln!("{kind},{},{},{}", e.name, e.value.clone().unwrap_or_default(), e.applicable);
            }
            for th in &report.thresholds {
                outln!(
                    "threshold,{},{},{}",
                    th.name,
                    th.value.clone().unwrap_or_default(),
                    th.applicable
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn certify(cli: &Cli, ctx: &PrecisionContext, input: &str, volume: Option<&str>) -> Result<ExitCode> {
    let d = load_diagram(input, cli.mirror)?;
    let out = match volume {
        Some(v) => {
            let det = det_of_diagram(&d).map_err(input_err)?.value;
            let cert = certify_direct(&det, v, ctx).map_err(input_err)?;
            let code = if cert.violation { ExitCode::from(1) } else { ExitCode::SUCCESS };
            (json!({ "certificate": cert }), code)
        }
        None => {
            let cert = certify_combinatorial(&d, ctx);
            let chain = det_of_diagram(&d)
                .ok()
                .filter(|r| r.value >= 2.into())
                .and_then(|r| certify_bound_chain(&d, &r.value, FibonacciVariant::Standard, ctx).ok());
            (json!({ "certificate": cert, "bound_chain": chain }), ExitCode::SUCCESS)
        }
    };
    match cli.format {
        Format::Json => print_json(&out.0),
        Format::Csv => {
            let cert = &out.0["certificate"];
            outln!("method,verdict,margin");
            outln!(
                "{},{},{}",
                cert["method"].as_str().unwrap_or_default(),
                cert["verdict"].as_str().unwrap_or_default(),
                cert["comparison"]["margin"].as_str().unwrap_or_default()
            );
        }
    }
    Ok(out.1)
}

fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range {text:?} must look like 2..40"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (u64, u64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty range {text:?}");
    }
    Ok((lo, hi))
}

fn sweep(cli: &Cli, ctx: &PrecisionContext, range: &str, emit_csv: bool) -> Result<ExitCode> {
    let (lo, hi) = parse_range(range).map_err(input_err)?;
    let d = 12;
    let fmt = |r: Option<voldet::numerics::Real>| r.map(|v| v.to_fixed(d)).unwrap_or_default();
    let rows: Vec<[String; 5]> = (lo..=hi)
        .map(|t| {
            [
                t.to_string(),
                fmt(threshold_burton(t, ctx).ok().map(|th| th.value)),
                fmt(threshold_thm1(t, ctx).ok().map(|th| th.value)),
                fmt(vol_ub_lat(t, ctx).ok()),
                fmt(vol_ub_ve(t, ctx).ok()),
            ]
        })
        .collect();
    let header = ["t", "threshold_burton", "threshold_thm1", "vol_ub_lat", "vol_ub_ve"];
    if emit_csv || cli.format == Format::Csv {
        outln!("{}", header.join(","));
        for r in rows {
            outln!("{}", r.join(","));
        }
    } else {
        let list: Vec<Value> = rows
            .iter()
            .map(|r| {
                header
                    .iter()
                    .zip(r)
                    .map(|(k, v)| (k.to_string(), if v.is_empty() { Value::Null } else { json!(v) }))
                    .collect()
            })
            .collect();
        print_json(&list);
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(
    cli: &Cli,
    ctx: &PrecisionContext,
    path: &Path,
    cache_path: Option<&Path>,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let census = ingest_csv(path).map_err(input_err)?;
    let mut cache = cache_path
        .map(InvariantCache::open)
        .transpose()
        .context("opening cache")?;
    let opts = ValidateOptions {
        oracle: cli.oracle == Switch::On,
        parallel: true,
        mirror: cli.mirror,
    };
    let report = validate_table(&census, ctx, opts, cache.as_ref());
    if let Some(cache) = cache.as_mut() {
        let added = update_cache(&report, cache).context("writing cache")?;
        log::info!("cache: {added} new entries");
    }
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => out!("{text}"),
    }
    let s = &report.summary;
    eprintln!(
        "rows {} certified {} inconclusive {} hypothesis_failed {} violations {} discrepancies {} errors {}",
        s.rows,
        s.certified,
        s.inconclusive,
        s.hypothesis_failed,
        s.violations,
        s.discrepancies,
        s.ingest_errors + s.row_errors
    );
    Ok(if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
