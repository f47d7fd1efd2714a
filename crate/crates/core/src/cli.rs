//! Command-line front end. Every subcommand writes machine-readable output to
//! stdout and diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or
//! validation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bergeron::{self, Quadruple};
use crate::kohdec::{self, KohError};
use crate::proofcheck::{self, StepId, StepVerdict};
use crate::qbinom::{self, gauss_box};
use crate::qpoly::{self, QPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable consulted for `--jobs` when neither the flag nor a
/// config file sets it.
pub const JOBS_ENV: &str = "KOHLAB_JOBS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "kohlab",
    version,
    about = "Exact q-binomial, KOH decomposition and unimodality checks"
)]
pub struct Cli {
    /// Worker threads for sweeps and grid checks [env: KOHLAB_JOBS]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output format (default depends on the subcommand)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// key=value file providing defaults for `jobs` and `format`
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print binom(m+n, m)_q
    Gauss {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
    },
    /// Strict-unimodality verdicts for 2 <= b <= c
    Classify {
        #[arg(long)]
        bmax: usize,
        #[arg(long)]
        cmax: usize,
    },
    /// KOH decomposition, or the lambda / mu partition families
    Koh(KohArgs),
    /// Difference binom(b+c,b)_q - binom(a+d,d)_q and its shape report
    Diff {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        json: bool,
    },
    /// Check every quadruple with bc <= N
    Sweep {
        #[arg(long = "max-product")]
        max_product: usize,
        /// Also stream failures to this file as JSON lines
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the proof-step checks over a parameter grid
    Proof {
        #[arg(long = "case", value_enum)]
        case: ProofCase,
        #[arg(long)]
        bmax: usize,
        #[arg(long)]
        cmax: usize,
        /// Comma-separated step ids, or `all`
        #[arg(long, default_value = "all")]
        steps: String,
    },
    /// Map from the proof's equations to the functions that check them
    #[command(name = "seed-docs", hide = true)]
    SeedDocs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProofCase {
    A2,
    A3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lambda,
    Mu,
}

#[derive(Debug, Args)]
pub struct KohArgs {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub m: Option<i64>,
    #[arg(long, requires = "m")]
    pub n: Option<usize>,
    /// List every F_lambda term instead of only the sum
    #[arg(long)]
    pub terms: bool,
    #[arg(long, value_enum, requires_all = ["b", "c"])]
    pub family: Option<Family>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub c: Option<usize>,
}

/// Resolved settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub jobs: usize,
    pub format: Option<Format>,
}

#[derive(Debug)]
struct UsageError(String);

impl From<KohError> for UsageError {
    fn from(e: KohError) -> Self {
        Self(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        Self(e.to_string())
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::from_str(s, true).map_err(|_| format!("unknown format {s:?}"))
}

/// Reads `key=value` lines; blank lines and `#` comments are ignored.
pub fn load_config(path: &Path) -> Result<(Option<usize>, Option<Format>), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let (mut jobs, mut format) = (None, None);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        match key.trim() {
            "jobs" => {
                jobs = Some(value.trim().parse().map_err(|_| {
                    format!(
                        "config line {}: jobs must be a positive integer",
                        lineno + 1
                    )
                })?)
            }
            "format" => format = Some(parse_format(value.trim())?),
            other => return Err(format!("config line {}: unknown key {other:?}", lineno + 1)),
        }
    }
    Ok((jobs, format))
}

/// Flag, then config file, then `KOHLAB_JOBS`, then available parallelism.
fn resolve(cli: &Cli) -> Result<RunConfig, String> {
    let (cfg_jobs, cfg_format) = match &cli.config {
        Some(path) => load_config(path)?,
        None => (None, None),
    };
    let env_jobs = match std::env::var(JOBS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("{JOBS_ENV} must be a positive integer (got {v:?})"))?,
        ),
        Err(_) => None,
    };
    let jobs = cli
        .jobs
        .or(cfg_jobs)
        .or(env_jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err("jobs must be at least 1".to_string());
    }
    Ok(RunConfig {
        jobs,
        format: cli.format.or(cfg_format),
    })
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => return usage_failure(&msg),
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => return usage_failure(&e.to_string()),
    };
    let mut buf = Vec::new();
    match pool.install(|| dispatch(&cli.command, &config, &mut buf)) {
        Ok(code) => {
            let mut out = io::stdout().lock();
            if out.write_all(&buf).and_then(|()| out.flush()).is_err() {
                return EXIT_USAGE;
            }
            code
        }
        Err(UsageError(msg)) => usage_failure(&msg),
    }
}

fn usage_failure(msg: &str) -> i32 {
    let record = json!({ "error": "usage", "message": msg });
    eprintln!("{record}");
    EXIT_USAGE
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), UsageError> {
    serde_json::to_writer(&mut *out, value).map_err(|e| UsageError(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn poly_csv(p: &QPoly) -> String {
    let mut s = String::from("degree,coefficient\n");
    for (i, c) in p.coeffs().iter().enumerate() {
        let _ = writeln!(s, "{i},{c}");
    }
    s
}

fn joined(p: &QPoly) -> String {
    p.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn dispatch(cmd: &Command, config: &RunConfig, out: &mut dyn Write) -> Result<i32, UsageError> {
    match cmd {
        Command::Gauss { m, n, json } => {
            let p = gauss_box(*m, *n);
            match pick(config, *json, Format::Text) {
                Format::Json => emit_json(out, &p)?,
                Format::Csv => write!(out, "{}", poly_csv(&p))?,
                Format::Text => writeln!(out, "{p}")?,
            }
            Ok(EXIT_OK)
        }
        Command::Classify { bmax, cmax } => {
            let rows = qbinom::classify_grid(*bmax, *cmax);
            match pick(config, false, Format::Text) {
                Format::Json => emit_json(out, &rows)?,
                Format::Csv => {
                    writeln!(out, "b,c,strict")?;
                    for r in &rows {
                        writeln!(out, "{},{},{}", r.b, r.c, r.strict)?;
                    }
                }
                Format::Text => {
                    for r in &rows {
                        let verdict = if r.strict { "strict" } else { "not strict" };
                        writeln!(out, "b={:<3} c={:<3} {verdict}", r.b, r.c)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Koh(args) => run_koh(args, config, out),
        Command::Diff { a, b, c, d, json } => {
            let quad = Quadruple::new(*a, *b, *c, *d).map_err(|e| UsageError(e.to_string()))?;
            let diff = bergeron::difference(&quad);
            let report = bergeron::check(&quad);
            match pick(config, *json, Format::Text) {
                Format::Json => emit_json(
                    out,
                    &json!({ "quadruple": quad, "difference": diff, "report": report }),
                )?,
                Format::Csv => write!(out, "{}", poly_csv(&diff))?,
                Format::Text => {
                    writeln!(out, "{diff}")?;
                    writeln!(
                        out,
                        "symmetric={} nonnegative={} unimodal={} degree={}",
                        report.symmetric, report.nonnegative, report.unimodal, report.degree
                    )?;
                    if let Some(k) = report.first_violation_degree {
                        writeln!(out, "first violation at degree {k}")?;
                    }
                }
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE_FOUND
            })
        }
        Command::Sweep {
            max_product,
            out: path,
        } => {
            if *max_product == 0 {
                return Err(UsageError("max-product must be at least 1".into()));
            }
            eprintln!(
                "sweeping {} quadruples on {} workers",
                bergeron::enumerate_quadruples(*max_product).len(),
                config.jobs
            );
            let summary = match path {
                Some(p) => bergeron::sweep_to_jsonl(*max_product, p)?,
                None => bergeron::summarize(*max_product, bergeron::sweep(*max_product)),
            };
            match pick(config, false, Format::Json) {
                Format::Json => emit_json(out, &summary)?,
                Format::Csv => {
                    writeln!(
                        out,
                        "a,b,c,d,symmetric,nonnegative,unimodal,first_violation_degree"
                    )?;
                    for f in &summary.failures {
                        let q = f.quadruple;
                        let r = &f.report;
                        let first = r
                            .first_violation_degree
                            .map(|k| k.to_string())
                            .unwrap_or_default();
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{first}",
                            q.a, q.b, q.c, q.d, r.symmetric, r.nonnegative, r.unimodal
                        )?;
                    }
                }
                Format::Text => {
                    writeln!(
                        out,
                        "checked {} quadruples with bc <= {}: {} failures",
                        summary.checked,
                        summary.max_product,
                        summary.failures.len()
                    )?;
                    for f in &summary.failures {
                        writeln!(out, "{:?} {:?}", f.quadruple, f.report)?;
                    }
                }
            }
            Ok(if summary.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILURE_FOUND
            })
        }
        Command::Proof {
            case,
            bmax,
            cmax,
            steps,
        } => {
            let verdicts = match case {
                ProofCase::A2 => {
                    if steps != "all" {
                        return Err(UsageError("--steps applies only to --case a3".into()));
                    }
                    proofcheck::run_a2(*bmax, *cmax)
                }
                ProofCase::A3 => proofcheck::run_a3(*bmax, *cmax, &parse_steps(steps)?),
            };
            write_verdicts(out, &verdicts, pick(config, false, Format::Json))?;
            Ok(if verdicts.iter().all(|v| v.pass) {
                EXIT_OK
            } else {
                EXIT_FAILURE_FOUND
            })
        }
        Command::SeedDocs => {
            write!(out, "{SEED_DOCS}")?;
            Ok(EXIT_OK)
        }
    }
}

fn pick(config: &RunConfig, json_flag: bool, default: Format) -> Format {
    if json_flag {
        Format::Json
    } else {
        config.format.unwrap_or(default)
    }
}

fn parse_steps(spec: &str) -> Result<Vec<StepId>, UsageError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(StepId::ALL.to_vec());
    }
    spec.split(',')
        .map(|s| s.parse::<StepId>().map_err(UsageError))
        .collect()
}

fn write_verdicts(
    out: &mut dyn Write,
    verdicts: &[StepVerdict],
    format: Format,
) -> Result<(), UsageError> {
    match format {
        Format::Json => emit_json(out, &verdicts)?,
        Format::Csv => {
            writeln!(out, "step,b,c,d,i,pass,detail")?;
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            for v in verdicts {
                let p = v.params;
                let detail = v.detail.as_deref().unwrap_or("").replace(',', ";");
                writeln!(
                    out,
                    "{},{},{},{},{},{},{detail}",
                    v.step,
                    opt(p.b),
                    opt(p.c),
                    opt(p.d),
                    opt(p.i),
                    v.pass
                )?;
            }
        }
        Format::Text => {
            for v in verdicts {
                let p = v.params;
                let mut line = format!("{} {}", if v.pass { "PASS" } else { "FAIL" }, v.step);
                for (name, val) in [("b", p.b), ("c", p.c), ("d", p.d), ("i", p.i)] {
                    if let Some(x) = val {
                        let _ = write!(line, " {name}={x}");
                    }
                }
                if let Some(d) = &v.detail {
                    let _ = write!(line, " -- {d}");
                }
                if let Some(n) = &v.note {
                    let _ = write!(line, " [{n}]");
                }
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FamilyEntry {
    i: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j_max: Option<i64>,
    partition: kohdec::Partition,
    closed_form: QPoly,
    first_difference: QPoly,
    closed_form_matches_koh_term: bool,
    first_difference_matches: bool,
}

fn run_koh(args: &KohArgs, config: &RunConfig, out: &mut dyn Write) -> Result<i32, UsageError> {
    if let Some(family) = args.family {
        let (b, c) = (args.b.unwrap_or(0), args.c.unwrap_or(0));
        let entries = family_entries(family, b, c)?;
        let ok = entries
            .iter()
            .all(|e| e.closed_form_matches_koh_term && e.first_difference_matches);
        let name = match family {
            Family::Lambda => "lambda",
            Family::Mu => "mu",
        };
        let i_max = match family {
            Family::Lambda => kohdec::lambda_i_max(b),
            Family::Mu => kohdec::mu_i_max(b),
        };
        match pick(config, false, Format::Text) {
            Format::Json => emit_json(
                out,
                &json!({ "family": name, "b": b, "c": c, "i_max": i_max, "entries": entries }),
            )?,
            Format::Csv => {
                writeln!(out, "i,j,j_max,partition,closed_form,first_difference,closed_form_ok,first_difference_ok")?;
                for e in &entries {
                    writeln!(
                        out,
                        "{},{},{},\"{}\",{},{},{},{}",
                        e.i,
                        e.j.map(|j| j.to_string()).unwrap_or_default(),
                        e.j_max.map(|j| j.to_string()).unwrap_or_default(),
                        e.partition,
                        joined(&e.closed_form),
                        joined(&e.first_difference),
                        e.closed_form_matches_koh_term,
                        e.first_difference_matches
                    )?;
                }
            }
            Format::Text => {
                writeln!(out, "{name} family for b={b}, c={c}: 1 <= i <= {i_max}")?;
                for e in &entries {
                    let idx = match (e.j, e.j_max) {
                        (Some(j), Some(jm)) => format!("i={} j={j} (j <= {jm})", e.i),
                        _ => format!("i={}", e.i),
                    };
                    let verdict = if e.closed_form_matches_koh_term && e.first_difference_matches {
                        "ok"
                    } else {
                        "MISMATCH"
                    };
                    writeln!(out, "{idx} {} {verdict}: {}", e.partition, e.closed_form)?;
                }
            }
        }
        return Ok(if ok { EXIT_OK } else { EXIT_FAILURE_FOUND });
    }

    let m = args.m.unwrap_or(0);
    let n = args
        .n
        .ok_or_else(|| UsageError("koh needs --n with --m".into()))?;
    let terms = kohdec::koh_terms(m, n)?;
    let sum: QPoly = terms.iter().map(|t| &t.value).sum();
    let expected = gauss_box(m as usize, n);
    let matches = sum == expected;
    match pick(config, false, Format::Text) {
        Format::Json => {
            let mut v = json!({ "m": m, "n": n, "sum": sum, "matches_gauss_box": matches });
            if args.terms {
                v["terms"] = serde_json::to_value(&terms).map_err(|e| UsageError(e.to_string()))?;
            }
            emit_json(out, &v)?
        }
        Format::Csv => {
            writeln!(out, "partition,exponent,coefficients")?;
            for t in &terms {
                writeln!(
                    out,
                    "\"{}\",{},{}",
                    t.partition,
                    t.exponent,
                    joined(&t.value)
                )?;
            }
        }
        Format::Text => {
            if args.terms {
                for t in &terms {
                    writeln!(out, "{} q^{}: {}", t.partition, t.exponent, t.value)?;
                }
            }
            writeln!(out, "sum = {sum}")?;
            writeln!(out, "matches binom({}, {m})_q: {matches}", m as usize + n)?;
        }
    }
    Ok(if matches { EXIT_OK } else { EXIT_FAILURE_FOUND })
}

fn family_entries(family: Family, b: usize, c: usize) -> Result<Vec<FamilyEntry>, UsageError> {
    let cut = b * c / 2;
    match family {
        Family::Lambda => kohdec::lambda_indices(b, c)?
            .into_iter()
            .map(|(i, j)| {
                let (si, sj) = (i as i64, j as i64);
                let partition = kohdec::lambda_family(b, c, si, sj)?;
                let closed_form = kohdec::closed_form_lambda(b, c, si, sj)?;
                let first_difference = kohdec::lambda_first_difference(b, c, si, sj)?;
                let term = kohdec::koh_term(&partition, c).value;
                Ok(FamilyEntry {
                    i,
                    j: Some(j),
                    j_max: Some(kohdec::lambda_j_max(b, c, i)),
                    closed_form_matches_koh_term: closed_form == term,
                    first_difference_matches: qpoly::first_difference_through(&closed_form, cut)
                        == first_difference.truncate(cut),
                    partition,
                    closed_form,
                    first_difference,
                })
            })
            .collect(),
        Family::Mu => (1..=kohdec::mu_i_max(b))
            .map(|i| {
                let si = i as i64;
                let partition = kohdec::mu_family(b, si)?;
                let closed_form = kohdec::closed_form_mu(b, c, si)?;
                let first_difference = kohdec::mu_first_difference(b, c, si)?;
                let term = kohdec::koh_term(&partition, c).value;
                Ok(FamilyEntry {
                    i,
                    j: None,
                    j_max: None,
                    closed_form_matches_koh_term: closed_form == term,
                    first_difference_matches: qpoly::first_difference_through(&closed_form, cut)
                        == first_difference.truncate(cut),
                    partition,
                    closed_form,
                    first_difference,
                })
            })
            .collect(),
    }
}

const SEED_DOCS: &str = "\
q-binomial definition, symmetric of degree mn   qbinom::gauss_box, qbinom::qbin
unimodality / symmetry predicates               qpoly::unimodality_report, qpoly::check_shape
strict unimodality and its nine exceptions      qbinom::classify_strict
a=2 coefficients ceil((i+1)/2)                  proofcheck::check_a2_coeffs   (A2_COEFF)
a=2 strict increase in even degrees             proofcheck::check_a2          (A2_EVEN)
KOH decomposition F_lambda                      kohdec::koh_term, kohdec::koh_sum
first difference truncated at the middle        qpoly::truncated_first_difference
KOH expansion of binom(d+3,3)_q                 kohdec::expand_d3, proofcheck::check_eq_a (EQ_A)
first differences of that expansion             proofcheck::check_eq_aa       (EQ_AA)
lambda^{i,j} family and closed form             kohdec::lambda_family, kohdec::closed_form_lambda
lambda dominance inequality                     proofcheck::check_ineq_1      (INEQ_1)
unused-range inequality                         proofcheck::check_ineq_2      (INEQ_2)
reserve l_{2b-6} > r_{2b-6}                     proofcheck::check_rl          (RL)
mu^i family and its dominance sum               kohdec::mu_family, proofcheck::check_66 (EQ_66_DOMINANCE)
a=3 end to end                                  proofcheck::check_final_a3    (FINAL_A3)
unimodality sweep                               bergeron::sweep
";
