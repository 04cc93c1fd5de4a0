use std::path::PathBuf;
use std::process::ExitCode;

use bogomolov::oracle::DEFAULT_ORACLE_CAP;
use bogomolov::pc::DEFAULT_CAP;
use bogomolov_cli::cache::{Cache, CACHE_ENV};
use bogomolov_cli::commands::{self, CliError, Command, JobOptions, JobOutput, JobSpec};
use bogomolov_cli::expr::Expr;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

const EXIT_ERROR: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 3;

/// Bogomolov multipliers of finite class-2 p-groups.
///
/// GROUP is a family expression such as `G3(p=5,r=1)`, `heisenberg(p=3)`,
/// `cp(left=..., right=..., k1=..., k2=...)`, or a path to a presentation file.
#[derive(Parser)]
#[command(name = "b0", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit and verify a certificate that M* lies in M0*.
    #[arg(long, global = true)]
    certificate: bool,
    /// Cross-check against the brute-force oracle.
    #[arg(long, global = true)]
    oracle: bool,
    /// Largest number of element pairs enumerated by the engine.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Largest group order accepted by the oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: u64,
    /// Oracle working modulus exponent L (arithmetic mod p^L).
    #[arg(long, global = true)]
    modulus: Option<u32>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute B0(G) = M*(G) / M0*(G).
    B0 { group: String },
    /// Compute the multiplier M*(G) and the exterior square.
    Schur { group: String },
    /// Compute everything with both the engine and the oracle and compare.
    OracleCheck { group: String },
    /// Check the exact sequence for a central extension E -> G.
    SeqCheck {
        group: String,
        /// Central subgroup N of E as comma-separated words; defaults to the
        /// kernel of a central product expression.
        #[arg(long)]
        kernel: Option<String>,
    },
    /// Check whether a central product of groups with trivial B0 has trivial B0.
    Main1Check { group: String },
    /// Run b0 over a parameter grid, e.g. `sweep G i=1..6 p=3,5 r=1`.
    Sweep {
        family: String,
        #[arg(value_name = "NAME=VALUES")]
        grid: Vec<String>,
    },
    /// Print the canonical presentation and hash.
    Describe { group: String },
}

impl Common {
    fn job_options(&self) -> JobOptions {
        JobOptions {
            certificate: self.certificate,
            oracle: self.oracle,
            cap: self.cap,
            oracle_cap: self.oracle_cap,
            modulus: self.modulus,
            jobs: self.jobs.max(1),
            use_cache: !self.no_cache,
        }
    }

    fn cache(&self) -> Result<Option<Cache>, CliError> {
        if self.no_cache {
            return Ok(None);
        }
        Ok(Some(Cache::open(self.cache_dir.clone().unwrap_or_else(Cache::default_dir))?))
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn print_job(out: &JobOutput, json: bool) {
    if json {
        return print_json(out);
    }
    let r = &out.record;
    println!("group    {} (order {}, hash {})", r.group, r.order, &r.hash[..12.min(r.hash.len())]);
    for (label, value) in [("B0", &r.b0), ("M*", &r.m_star), ("M0*", &r.m0), ("W", &r.w)] {
        if let Some(v) = value {
            println!("{label:<8} {v}");
        }
    }
    if let Some(s) = &r.strategy {
        println!("pairs    {s}");
    }
    if let Some(o) = &r.oracle {
        println!("oracle   {} (mod p^{}; B0 {}, M* {})", o.verdict, o.modulus_exponent, o.b0, o.m_star);
    }
    if let (Some(c), Some(ok)) = (&out.certificate, r.certificate_verified) {
        print!("{}", c.to_text());
        println!("certificate {}", if ok { "verified" } else { "FAILED" });
    }
    println!("time     {:.1} ms{}", r.timings.total_ms, if r.cached { " (cached)" } else { "" });
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let c = &cli.common;
    let options = c.job_options();
    let job = |group: &str, command| -> Result<u8, CliError> {
        let spec = JobSpec { source: Expr::parse(group)?, command, options: options.clone() };
        let cache = c.cache()?;
        let out = commands::run(&spec, cache.as_ref())?;
        print_job(&out, c.json);
        Ok(if out.record.consistent() { 0 } else { EXIT_CHECK_FAILED })
    };
    match &cli.command {
        Cmd::B0 { group } => job(group, Command::B0),
        Cmd::Schur { group } => job(group, Command::Schur),
        Cmd::OracleCheck { group } => job(group, Command::OracleCheck),
        Cmd::SeqCheck { group, kernel } => {
            let r = commands::seq_check(&Expr::parse(group)?, kernel.as_deref(), &options)?;
            if c.json {
                print_json(&r);
            } else {
                println!("group     {}", r.group);
                println!("B0(G)     {}", r.b0_g);
                println!("B0(E)     {}", r.b0_e);
                println!("coker     {}", r.cokernel);
                println!("N1/N0     {} (|N1| = {}, |N0| = {})", r.n1_n0, r.n1_order, r.n0_order);
                println!("xi        {}", flag(r.xi_consistent));
                println!("exact     {}", flag(r.passed));
            }
            Ok(if r.passed { 0 } else { EXIT_CHECK_FAILED })
        }
        Cmd::Main1Check { group } => {
            let r = commands::main1_check(&Expr::parse(group)?, &options)?;
            if c.json {
                print_json(&r);
            } else {
                let h = &r.hypotheses;
                println!("group          {}", opt(&r.group));
                println!("homomorphism   {}", flag(h.homomorphism));
                if let Some(rel) = &h.failing_relator {
                    println!("fails on       {rel}");
                }
                println!("bijective K1   {}", flag(h.restriction_bijective));
                println!("B0(G1/K1)      {}", opt(&h.b0_g1_mod_k1));
                println!("B0(G1)         {}", opt(&h.b0_g1));
                println!("B0(G2)         {}", opt(&h.b0_g2));
                println!("B0(G)          {}", opt(&r.b0_g));
                println!("N1/N0          {}", opt(&r.n1_n0));
                println!("verdict        {}", serde_json::to_value(r.verdict).expect("serializable").as_str().unwrap_or("?"));
            }
            Ok(if r.is_contradiction() { EXIT_CHECK_FAILED } else { 0 })
        }
        Cmd::Sweep { family, grid } => {
            let axes = grid.iter().map(|a| commands::parse_axis(a)).collect::<Result<Vec<_>, _>>()?;
            let exprs = commands::grid_expressions(family, &axes);
            let cache = c.cache()?;
            let cells = commands::sweep(&exprs, &options, options.jobs, cache.as_ref())?;
            if c.json {
                for cell in &cells {
                    println!("{}", serde_json::to_string(cell).expect("serializable"));
                }
            } else {
                print!("{}", commands::sweep_table(&cells));
            }
            let failed = cells.iter().any(|x| x.error.is_some() || x.record.as_ref().is_some_and(|r| !r.consistent()));
            Ok(if cells.iter().any(|x| x.record.as_ref().is_some_and(|r| !r.consistent())) {
                EXIT_CHECK_FAILED
            } else if failed {
                EXIT_ERROR
            } else {
                0
            })
        }
        Cmd::Describe { group } => {
            let d = commands::describe(&Expr::parse(group)?)?;
            if c.json {
                print_json(&d);
            } else {
                println!("# {} (order {}, hash {})", d.name, d.order, d.hash);
                print!("{}", d.dsl);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
