//! The `frobzeta` command line: point counts, zeta functions, Euler
//! products, zeta-element checks and catalog validation.

mod cache;
mod inline;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::variety::{closed_points, SchemeFileError, SchemeSpec, VarietyError};
use crate::zetael::{
    catalog_entry, check_regimes, elliptic_entry, validate_catalog_with, verify_base_change, verify_norm_system,
    verify_pushforward, verify_triangle, verify_zeta_eq_element, verify_zeta_value, Level, PhiModule, Report,
    SiteObject, Verdict, ZetaElError, CONVENTION,
};
use crate::zetafn::{euler_product, reconstruct_from_counts, series_equal_through, zeta_series, LocalFactor, ZetaError};

pub use cache::CountCache;
pub use inline::parse_object;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("scheme file: {0}")]
    SchemeFile(#[from] SchemeFileError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    ZetaEl(#[from] ZetaElError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("{0}")]
    Io(String),
    #[error("cache record {digest}-{n} holds {cached}, recomputation gives {fresh}")]
    CacheMismatch { digest: String, n: u32, cached: u64, fresh: u64 },
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "frobzeta", version, about = "Zeta functions and zeta elements over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point counts #X(F_{q^n}) for n = 1..N.
    Count(Common),
    /// The zeta function reconstructed from point counts, or the L-function
    /// of an inline object.
    Zeta(Common),
    /// Euler product over closed points against the zeta series.
    Euler(Common),
    /// Zeta-element checks.
    ///
    /// CHECK is one of zeta-eq-element, zeta-value,
    /// base-change, triangle, pushforward, norm, or the numeric ids 1.3.5,
    /// 1.3.6, 2.1.3, 2.1.4, 2.1.5, 2.1.6 in that order; all of them by
    /// default. Without an object, runs a random batch drawn from --seed.
    Verify {
        checks: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Validates catalog entries against point counts.
    Catalog {
        /// Entry such as P1/F2, Gm/F4, E/F2 (repeatable).
        #[arg(long = "entry")]
        entries: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Scheme definition file (TOML).
    #[arg(long, conflicts_with = "phi")]
    scheme: Option<PathBuf>,
    /// Inline object: `catalog:NAME` or `d:[[...]];d:[[...]]`.
    #[arg(long)]
    phi: Option<String>,
    /// Coefficient prime.
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Coefficient precision, working mod p^k.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Level: the group ring of Z/n.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Largest extension degree to count over.
    #[arg(long = "N", default_value_t = 4)]
    big_n: u32,
    /// Base field size for inline points objects [default: 2, or 3 if p = 2].
    #[arg(long)]
    q: Option<u64>,
    /// Upper level for base-change [default: 2n].
    #[arg(long)]
    n_prime: Option<usize>,
    /// Divisor chain for the norm check.
    #[arg(long, value_delimiter = ',', default_value = "1,2,6,12")]
    chain: Vec<usize>,
    /// Rank of the sub-object for the triangle check [default: half the rank].
    #[arg(long)]
    split: Option<usize>,
    /// Enumeration budget in tuples.
    #[arg(long)]
    budget: Option<u64>,
    /// Seed of a random batch; case i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random cases.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Directory of the persistent point-count cache.
    #[arg(long)]
    #[serde(skip)]
    cache: Option<PathBuf>,
    /// Recompute every cache hit and fail on a mismatch.
    #[arg(long)]
    #[serde(skip)]
    verify_cache: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    #[serde(skip)]
    format: Format,
}

impl Common {
    fn q_for_points(&self) -> u64 {
        self.q.unwrap_or(if self.p == 2 { 3 } else { 2 })
    }

    fn with_budget(&self, s: SchemeSpec) -> SchemeSpec {
        match self.budget {
            Some(b) => s.with_budget(b),
            None => s,
        }
    }

    fn object(&self) -> Result<Option<SiteObject>> {
        if let Some(path) = &self.scheme {
            let s = self.with_budget(SchemeSpec::from_file(path)?);
            return Ok(Some(SiteObject::Catalog(elliptic_entry(s, self.p)?)));
        }
        let Some(src) = &self.phi else { return Ok(None) };
        Ok(Some(match parse_object(src, self.p, self.q_for_points())? {
            SiteObject::Catalog(mut e) => {
                e.scheme = e.scheme.map(|s| self.with_budget(s));
                SiteObject::Catalog(e)
            }
            other => other,
        }))
    }

    /// The scheme to count on: the file, or a catalog entry's scheme.
    fn scheme_spec(&self) -> Result<Option<SchemeSpec>> {
        if let Some(path) = &self.scheme {
            return Ok(Some(self.with_budget(SchemeSpec::from_file(path)?)));
        }
        match &self.phi {
            Some(src) if src.starts_with("catalog:") => match parse_object(src, self.p, self.q_for_points())? {
                SiteObject::Catalog(e) => Ok(e.scheme.map(|s| self.with_budget(s))),
                _ => unreachable!(),
            },
            _ => Ok(None),
        }
    }

    fn require_scheme(&self, command: &str) -> Result<SchemeSpec> {
        self.scheme_spec()?
            .ok_or_else(|| CliError::Usage(format!("{command} needs --scheme FILE or --phi catalog:NAME")))
    }

    fn cache(&self) -> Result<CountCache> {
        CountCache::new(self.cache.as_deref(), self.verify_cache)
    }
}

struct Outcome {
    results: Value,
    text: String,
    failed: bool,
}

#[derive(Serialize)]
struct Document<'a> {
    tool: &'static str,
    version: &'static str,
    convention: &'static str,
    command: &'a str,
    parameters: Value,
    results: Value,
}

/// Runs the command line `args` (program name first), writing output to
/// `out` and diagnostics to `err`. Returns the exit code: 0 when nothing
/// failed, 1 on a failed check, 2 on errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (name, common, extra) = match &cli.command {
        Command::Count(c) => ("count", c, json!({})),
        Command::Zeta(c) => ("zeta", c, json!({})),
        Command::Euler(c) => ("euler", c, json!({})),
        Command::Verify { checks, common } => ("verify", common, json!({ "checks": checks })),
        Command::Catalog { entries, common } => ("catalog", common, json!({ "entries": entries })),
    };
    let outcome = match &cli.command {
        Command::Count(c) => cmd_count(c),
        Command::Zeta(c) => cmd_zeta(c),
        Command::Euler(c) => cmd_euler(c),
        Command::Verify { checks, common } => cmd_verify(checks, common),
        Command::Catalog { entries, common } => cmd_catalog(entries, common),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let written = match common.format {
        Format::Text => write!(out, "{}", outcome.text),
        Format::Structured => {
            let mut parameters = serde_json::to_value(common).expect("parameters serialize");
            if let (Value::Object(p), Value::Object(x)) = (&mut parameters, extra) {
                p.extend(x);
            }
            let doc = Document {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                convention: CONVENTION,
                command: name,
                parameters,
                results: outcome.results,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("document serializes"))
        }
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    i32::from(outcome.failed)
}

fn cmd_count(c: &Common) -> Result<Outcome> {
    let s = c.require_scheme("count")?;
    let counts = c.cache()?.series(&s, c.big_n)?;
    let q = s.base().size();
    let mut text = format!("{:>3}  #X(F_{q}^n)\n", "n");
    for (i, v) in counts.iter().enumerate() {
        writeln!(text, "{:>3}  {v}", i + 1).unwrap();
    }
    let rows: Vec<Value> = counts.iter().enumerate().map(|(i, v)| json!({ "n": i + 1, "count": v })).collect();
    Ok(Outcome { results: json!({ "q": q, "digest": s.digest(), "counts": rows }), text, failed: false })
}

fn cmd_zeta(c: &Common) -> Result<Outcome> {
    if let Some(s) = c.scheme_spec()? {
        let cache = c.cache()?;
        let rec = reconstruct_from_counts(|order| cache.series(&s, order as u32))?;
        let text = format!(
            "Z(u) = {}\n  degree bounds {:?}, {} counts used, confirmation terms {}\n",
            rec.function,
            rec.bounds,
            rec.counts_used,
            if rec.confirmed { "match" } else { "DO NOT match" }
        );
        let results = json!({
            "q": s.base().size(),
            "zeta": rec.function,
            "text": rec.function.to_string(),
            "bounds": [rec.bounds.0, rec.bounds.1],
            "counts_used": rec.counts_used,
            "confirmed": rec.confirmed,
        });
        return Ok(Outcome { results, text, failed: !rec.confirmed });
    }
    let obj = c.object()?.ok_or_else(|| CliError::Usage("zeta needs --scheme or --phi".into()))?;
    let l = obj.lfunction()?;
    Ok(Outcome {
        text: format!("L(u) = {l}\n  from the cohomology of {}\n", obj.describe()),
        results: json!({ "object": obj.describe(), "lfunction": l, "text": l.to_string() }),
        failed: false,
    })
}

fn cmd_euler(c: &Common) -> Result<Outcome> {
    let order = c.big_n as usize;
    if let Some(s) = c.scheme_spec()? {
        let points = closed_points(&s, c.big_n)?;
        let factors: Vec<LocalFactor> = points.iter().map(|x| LocalFactor::trivial(x.degree as usize)).collect();
        let euler = euler_product(&factors, order, order)?;
        let series = zeta_series(&c.cache()?.series(&s, c.big_n)?, order)?;
        let agree = series_equal_through(&euler, &series, order);
        let mut per_degree = vec![0usize; order];
        for x in &points {
            per_degree[x.degree as usize - 1] += 1;
        }
        let coeffs: Vec<String> = euler.coeffs()[..=order].iter().map(ToString::to_string).collect();
        let text = format!(
            "closed points by degree: {per_degree:?}\nEuler product: {}\nagrees with the zeta series through u^{order}: {}\n",
            coeffs.join(", "),
            if agree { "yes" } else { "NO" }
        );
        let results = json!({ "closed_points": per_degree, "euler": coeffs, "agree": agree, "order": order });
        return Ok(Outcome { results, text, failed: !agree });
    }
    let obj = c.object()?.ok_or_else(|| CliError::Usage("euler needs --scheme or --phi".into()))?;
    let agree = check_regimes(&obj, order)?
        .ok_or_else(|| CliError::Usage("euler on a catalog entry needs its scheme".into()))?;
    Ok(Outcome {
        text: format!("Euler product agrees with L(u) through u^{order}: {}\n", if agree { "yes" } else { "NO" }),
        results: json!({ "object": obj.describe(), "agree": agree, "order": order }),
        failed: !agree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    ZetaEqElement,
    ZetaValue,
    BaseChange,
    Triangle,
    Pushforward,
    Norm,
}

const ALL_CHECKS: [Check; 6] =
    [Check::ZetaEqElement, Check::ZetaValue, Check::BaseChange, Check::Triangle, Check::Pushforward, Check::Norm];

fn parse_check(name: &str) -> Result<Check> {
    Ok(match name {
        "1.3.5" | "zeta-eq-element" => Check::ZetaEqElement,
        "1.3.6" | "zeta-value" => Check::ZetaValue,
        "2.1.3" | "base-change" => Check::BaseChange,
        "2.1.4" | "triangle" => Check::Triangle,
        "2.1.5" | "pushforward" => Check::Pushforward,
        "2.1.6" | "norm" => Check::Norm,
        _ => return Err(CliError::Usage(format!("unknown check {name:?}"))),
    })
}

fn points_of(obj: &SiteObject) -> Result<&[(u32, PhiModule)]> {
    match obj {
        SiteObject::Points { components, .. } => Ok(components),
        SiteObject::Catalog(_) => Err(CliError::Usage("triangle and pushforward need an inline points object".into())),
    }
}

fn split_module(m: &PhiModule, r: usize) -> Result<(PhiModule, PhiModule)> {
    if r > m.rank() {
        return Err(CliError::Usage(format!("--split {r} exceeds rank {}", m.rank())));
    }
    let block = |lo: usize, hi: usize| m.phi()[lo..hi].iter().map(|row| row[lo..hi].to_vec()).collect();
    Ok((PhiModule::new(m.p(), block(0, r))?, PhiModule::new(m.p(), block(r, m.rank()))?))
}

fn run_check(check: Check, obj: &SiteObject, c: &Common) -> Result<Vec<Report>> {
    let level = || Level::group(c.p, c.k, c.n);
    Ok(match check {
        Check::ZetaEqElement => vec![verify_zeta_eq_element(obj, c.n, c.k)?],
        Check::ZetaValue => vec![verify_zeta_value(obj, c.k)?],
        Check::BaseChange => vec![verify_base_change(obj, c.n_prime.unwrap_or(2 * c.n), c.n, c.k)?],
        Check::Norm => vec![verify_norm_system(obj, &c.chain, c.k)?],
        Check::Pushforward => points_of(obj)?
            .iter()
            .map(|(d, m)| Ok(verify_pushforward(obj.q(), *d, m, &level()?)?))
            .collect::<Result<_>>()?,
        Check::Triangle => {
            let (_, m) = &points_of(obj)?[0];
            let (sub, quot) = split_module(m, c.split.unwrap_or(m.rank() / 2))?;
            vec![verify_triangle(obj.q(), &sub, m, &quot, &level()?)?]
        }
    })
}

fn random_object(rng: &mut ChaCha8Rng, p: u64, q: u64) -> SiteObject {
    let parts = rng.gen_range(1..=2);
    let components = (0..parts)
        .map(|_| {
            let rank = rng.gen_range(1..=3);
            (rng.gen_range(1..=3), PhiModule::random(rng, p, rank, 25))
        })
        .collect();
    SiteObject::Points { q, components }
}

/// A random block upper-triangular module on one point.
fn random_extension(rng: &mut ChaCha8Rng, p: u64) -> (PhiModule, PhiModule, PhiModule) {
    let (ra, rb) = (rng.gen_range(0..=2), rng.gen_range(1..=2));
    let sub = PhiModule::random(rng, p, ra, 25);
    let quot = PhiModule::random(rng, p, rb, 25);
    let mut phi = vec![vec![0i64; ra + rb]; ra + rb];
    for i in 0..ra + rb {
        for j in 0..ra + rb {
            phi[i][j] = match (i < ra, j < ra) {
                (true, true) => sub.phi()[i][j],
                (false, false) => quot.phi()[i - ra][j - ra],
                (true, false) => rng.gen_range(0..25),
                (false, true) => 0,
            };
        }
    }
    let total = PhiModule::new(p, phi).expect("block triangular with invertible blocks");
    (sub, total, quot)
}

fn cmd_verify(names: &[String], c: &Common) -> Result<Outcome> {
    let checks: Vec<Check> =
        if names.is_empty() { ALL_CHECKS.to_vec() } else { names.iter().map(|s| parse_check(s)).collect::<Result<_>>()? };
    let mut reports = Vec::new();
    match c.object()? {
        Some(obj) => {
            for &check in &checks {
                reports.extend(run_check(check, &obj, c)?);
            }
        }
        None => {
            let base = c.seed.unwrap_or(0);
            let q = c.q_for_points();
            for i in 0..c.count as u64 {
                let seed = base.wrapping_add(i);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let obj = random_object(&mut rng, c.p, q);
                for &check in &checks {
                    let batch = if check == Check::Triangle {
                        let (sub, total, quot) = random_extension(&mut rng, c.p);
                        vec![verify_triangle(q, &sub, &total, &quot, &Level::group(c.p, c.k, c.n)?)?]
                    } else {
                        run_check(check, &obj, c)?
                    };
                    reports.extend(batch.into_iter().map(|r| r.with_seed(seed)));
                }
            }
        }
    }
    Ok(reports_outcome(reports))
}

fn reports_outcome(reports: Vec<Report>) -> Outcome {
    let tally = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let summary = json!({
        "pass": tally(Verdict::Pass),
        "fail": tally(Verdict::Fail),
        "inconclusive": tally(Verdict::Inconclusive),
        "hypothesis_failure": tally(Verdict::HypothesisFailure),
    });
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "{r}").unwrap();
    }
    writeln!(
        text,
        "{} reports: {} pass, {} fail, {} inconclusive, {} hypothesis failure",
        reports.len(),
        summary["pass"],
        summary["fail"],
        summary["inconclusive"],
        summary["hypothesis_failure"]
    )
    .unwrap();
    let failed = tally(Verdict::Fail) > 0;
    Outcome { results: json!({ "reports": reports, "summary": summary }), text, failed }
}

/// Entries validated when none are named.
const DEFAULT_ENTRIES: &[&str] = &["A1/F2", "P1/F2", "P2/F3", "Gm/F2", "E/F2"];

fn cmd_catalog(names: &[String], c: &Common) -> Result<Outcome> {
    let cache = c.cache()?;
    let mut entries = Vec::new();
    if let Some(path) = &c.scheme {
        entries.push(elliptic_entry(c.with_budget(SchemeSpec::from_file(path)?), c.p)?);
    }
    let named: Vec<&str> = if names.is_empty() && entries.is_empty() {
        DEFAULT_ENTRIES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    for name in named {
        let mut e = catalog_entry(name, c.p)?;
        e.scheme = e.scheme.map(|s| c.with_budget(s));
        entries.push(e);
    }
    let reports = entries
        .iter()
        .map(|e| {
            let scheme = e.scheme.as_ref().expect("catalog entries carry schemes");
            validate_catalog_with(e, |n| cache.series(scheme, n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reports_outcome(reports))
}
