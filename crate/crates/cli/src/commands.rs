use std::io;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use bogomolov::oracle::{oracle, OracleError, OracleOptions, DEFAULT_ORACLE_CAP};
use bogomolov::pc::{PcPresentation, DEFAULT_CAP};
use bogomolov::sequences::{
    verify_exact_sequence, verify_main1, CentralExtensionData, ExactSequenceReport, Main1Report, SequenceError,
    SequenceOptions, DEFAULT_COMMUTATOR_CAP,
};
use bogomolov::wedge::{Certificate, PairStrategy, WedgeError, WedgeOptions, WedgeSystem};
use serde::Serialize;

use crate::cache::Cache;
use crate::expr::{word_element, Expr, ExprError};
use crate::record::{OracleSummary, ResultRecord, Timings, VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("cache: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    B0,
    Schur,
    OracleCheck,
}

#[derive(Clone, Debug)]
pub struct JobOptions {
    pub certificate: bool,
    pub oracle: bool,
    /// Cap on enumerated element pairs for the engine.
    pub cap: u64,
    /// Cap on the group order for the oracle.
    pub oracle_cap: u64,
    pub modulus: Option<u32>,
    pub jobs: usize,
    pub use_cache: bool,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            certificate: false,
            oracle: false,
            cap: DEFAULT_CAP,
            oracle_cap: DEFAULT_ORACLE_CAP,
            modulus: None,
            jobs: 1,
            use_cache: true,
        }
    }
}

impl JobOptions {
    fn wedge(&self) -> WedgeOptions {
        WedgeOptions { cap: self.cap, jobs: self.jobs.max(1), certificate: self.certificate, strategy: None }
    }

    fn sequence(&self) -> SequenceOptions {
        SequenceOptions { cap: DEFAULT_COMMUTATOR_CAP.max(self.oracle_cap), jobs: self.jobs.max(1), wedge: self.wedge() }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub source: Expr,
    pub command: Command,
    pub options: JobOptions,
}

#[derive(Clone, Debug, Serialize)]
pub struct JobOutput {
    #[serde(flatten)]
    pub record: ResultRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

fn cache_key(job: &JobSpec) -> String {
    match job.command {
        Command::B0 if job.options.oracle => "b0+oracle".into(),
        Command::B0 => "b0".into(),
        Command::Schur => "schur".into(),
        Command::OracleCheck => "oracle-check".into(),
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e5).round() / 100.0
}

fn strategy_name(s: PairStrategy) -> String {
    match s {
        PairStrategy::AllPairs => "all_pairs".into(),
        PairStrategy::Transversal => "transversal".into(),
    }
}

/// Cached record for the job, if any and if caching applies.
pub fn lookup(job: &JobSpec, group: &PcPresentation, cache: Option<&Cache>) -> Result<Option<ResultRecord>, CliError> {
    match cache {
        Some(c) if job.options.use_cache && !job.options.certificate => {
            Ok(c.lookup(&group.canonical_hash(), &cache_key(job), VERSION)?.map(|r| ResultRecord { cached: true, ..r }))
        }
        _ => Ok(None),
    }
}

/// Runs the job without touching the cache.
pub fn compute(job: &JobSpec, group: &PcPresentation) -> Result<JobOutput, CliError> {
    let start = Instant::now();
    let o = &job.options;
    let mut record = ResultRecord {
        hash: group.canonical_hash(),
        group: group.name().to_string(),
        order: group.order().to_string(),
        command: cache_key(job),
        b0: None,
        m_star: None,
        m0: None,
        w: None,
        strategy: None,
        certificate_verified: None,
        oracle: None,
        timings: Timings::default(),
        version: VERSION.to_string(),
        cached: false,
    };
    let sys = WedgeSystem::build(group)?;
    let mut certificate = None;
    if job.command == Command::Schur {
        record.w = Some(sys.w_invariants()?);
        record.m_star = Some(sys.m_star_invariants()?);
    } else {
        let b = sys.bogomolov(&o.wedge())?;
        if o.certificate {
            record.certificate_verified = b.certificate.as_ref().map(|c| c.verify(&sys));
            certificate = b.certificate.clone();
        }
        record.b0 = Some(b.invariants);
        record.m_star = Some(b.m_star_invariants);
        record.m0 = Some(b.m0_invariants);
        record.w = Some(b.w_invariants);
        record.strategy = Some(strategy_name(b.strategy));
    }
    if job.command == Command::OracleCheck || o.oracle {
        let t = Instant::now();
        let r = oracle(group, &OracleOptions { cap: o.oracle_cap, modulus_exponent: o.modulus })?;
        let agree = Some(&r.w) == record.w.as_ref()
            && Some(&r.m) == record.m_star.as_ref()
            && Some(&r.m0) == record.m0.as_ref()
            && Some(&r.b0) == record.b0.as_ref();
        record.oracle = Some(OracleSummary {
            verdict: if agree { "agree" } else { "disagree" }.into(),
            modulus_exponent: r.modulus_exponent,
            w: r.w,
            m_star: r.m,
            m0: r.m0,
            b0: r.b0,
        });
        record.timings.oracle_ms = Some(ms(t));
    }
    record.timings.total_ms = ms(start);
    Ok(JobOutput { record, certificate })
}

/// Looks the job up in the cache, computing and appending on a miss.
pub fn run(job: &JobSpec, cache: Option<&Cache>) -> Result<JobOutput, CliError> {
    let group = job.source.build()?;
    if let Some(record) = lookup(job, &group, cache)? {
        return Ok(JobOutput { record, certificate: None });
    }
    let out = compute(job, &group)?;
    if let Some(c) = cache.filter(|_| job.options.use_cache) {
        c.append(&out.record)?;
    }
    Ok(out)
}

/// Exactness check for a central product expression, or for `E` with
/// the central subgroup spanned by `kernel` (comma-separated words).
pub fn seq_check(source: &Expr, kernel: Option<&str>, options: &JobOptions) -> Result<ExactSequenceReport, CliError> {
    let data = match kernel {
        Some(words) => {
            let e = source.build()?;
            let gens = words.split(',').filter(|w| !w.trim().is_empty()).map(|w| word_element(&e, w)).collect::<Result<Vec<_>, _>>()?;
            CentralExtensionData::new(&e, &gens)?
        }
        None => match source.product_parts()? {
            Some(parts) => CentralExtensionData::from_central_product(&parts.glue()?),
            None => return Err(CliError::Usage(format!("{source} is not a central product; pass --kernel"))),
        },
    };
    Ok(verify_exact_sequence(&data, &options.sequence())?)
}

pub fn main1_check(source: &Expr, options: &JobOptions) -> Result<Main1Report, CliError> {
    let parts = source
        .product_parts()?
        .ok_or_else(|| CliError::Usage(format!("{source} is not a central product expression (cp, c2 or extraspecial with n >= 2)")))?;
    Ok(verify_main1(&parts.left, &parts.k1, &parts.right, &parts.k2, &parts.theta, &options.sequence())?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridAxis {
    pub name: String,
    pub values: Vec<String>,
}

/// `name=1..6`, `name=3,5` or `name=p,p2`; an empty list gives no cells.
pub fn parse_axis(text: &str) -> Result<GridAxis, CliError> {
    let (name, rest) = text.split_once('=').ok_or_else(|| CliError::Usage(format!("grid axis '{text}' is not name=values")))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(CliError::Usage(format!("bad grid parameter name '{name}'")));
    }
    let mut values = Vec::new();
    for part in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let bad = || CliError::Usage(format!("bad range '{part}'"));
                let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                values.extend((a..=b).map(|v| v.to_string()));
            }
            None => values.push(part.to_string()),
        }
    }
    Ok(GridAxis { name: name.to_string(), values })
}

/// Expressions for every grid cell, first axis varying slowest. `G`
/// stands for the six-member series with index `i`.
pub fn grid_expressions(family: &str, axes: &[GridAxis]) -> Vec<String> {
    if axes.is_empty() || axes.iter().any(|a| a.values.is_empty()) {
        return Vec::new();
    }
    let family = if family == "G" { "series" } else { family };
    let mut cells: Vec<Vec<String>> = vec![Vec::new()];
    for axis in axes {
        cells = cells
            .into_iter()
            .flat_map(|c| axis.values.iter().map(move |v| [c.clone(), vec![format!("{}={v}", axis.name)]].concat()))
            .collect();
    }
    cells.into_iter().map(|c| format!("{family}({})", c.join(","))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub expr: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<ResultRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs `b0` on every cell with `workers` threads. Cached cells are
/// reused; fresh records are appended by the calling thread only.
pub fn sweep(expressions: &[String], options: &JobOptions, workers: usize, cache: Option<&Cache>) -> Result<Vec<SweepCell>, CliError> {
    let cell_options = JobOptions { jobs: 1, certificate: false, ..options.clone() };
    let next = AtomicUsize::new(0);
    let mut cells: Vec<Option<SweepCell>> = vec![None; expressions.len()];
    let (tx, rx) = mpsc::channel::<(usize, SweepCell)>();
    let mut write_error = None;
    std::thread::scope(|s| {
        for _ in 0..workers.max(1).min(expressions.len().max(1)) {
            let tx = tx.clone();
            let (next, cell_options) = (&next, &cell_options);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(expr) = expressions.get(i) else { break };
                let result = Expr::parse(expr).map_err(CliError::from).and_then(|source| {
                    let job = JobSpec { source, command: Command::B0, options: cell_options.clone() };
                    let group = job.source.build()?;
                    match lookup(&job, &group, cache)? {
                        Some(r) => Ok(r),
                        None => Ok(compute(&job, &group)?.record),
                    }
                });
                let cell = match result {
                    Ok(r) => SweepCell { expr: expr.clone(), record: Some(r), error: None },
                    Err(e) => SweepCell { expr: expr.clone(), record: None, error: Some(e.to_string()) },
                };
                if tx.send((i, cell)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, cell) in rx {
            if let (Some(c), Some(r)) = (cache.filter(|_| options.use_cache), cell.record.as_ref()) {
                if !r.cached {
                    if let Err(e) = c.append(r) {
                        write_error.get_or_insert(e);
                    }
                }
            }
            cells[i] = Some(cell);
        }
    });
    if let Some(e) = write_error {
        return Err(e.into());
    }
    Ok(cells.into_iter().map(|c| c.expect("every cell reported")).collect())
}

pub fn sweep_table(cells: &[SweepCell]) -> String {
    let fmt = |x: &Option<bogomolov::FinAbInvariants>| x.as_ref().map(|v| v.to_string()).unwrap_or_default();
    let mut rows = vec![["group".to_string(), "order".into(), "B0".into(), "M*".into(), "ms".into(), "note".into()]];
    for c in cells {
        rows.push(match &c.record {
            Some(r) => [
                c.expr.clone(),
                r.order.clone(),
                fmt(&r.b0),
                fmt(&r.m_star),
                format!("{:.1}", r.timings.total_ms),
                match (&r.oracle, r.cached) {
                    (Some(o), _) if !o.agrees() => "oracle disagrees".into(),
                    (_, true) => "cached".into(),
                    _ => String::new(),
                },
            ],
            None => [c.expr.clone(), String::new(), String::new(), String::new(), String::new(), c.error.clone().unwrap_or_default()],
        });
    }
    let widths: Vec<usize> = (0..6).map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Description {
    pub name: String,
    pub order: String,
    pub hash: String,
    pub prime: u64,
    pub generators: Vec<String>,
    pub central: Vec<String>,
    pub dsl: String,
}

pub fn describe(source: &Expr) -> Result<Description, CliError> {
    let g = source.build()?;
    Ok(Description {
        name: g.name().to_string(),
        order: g.order().to_string(),
        hash: g.canonical_hash(),
        prime: g.prime(),
        generators: g.labels().to_vec(),
        central: g.z_labels().to_vec(),
        dsl: g.to_dsl(),
    })
}
