//! The `selmon` command line: law suites, equivalence checks and
//! double-negation-shift verification, reported as JSON.
//!
//! Exit codes: 0 when every check passes, 1 when some check failed, 2 on a
//! configuration or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::bar_recursion::check::{check_equivalence, game_monad, EquivBounds, Equivalence};
use crate::error::{Error, Result};
use crate::herbrand::check::{check_dns_random, check_hbr_equivalence, check_lemma_suite};
use crate::herbrand::{
    check_bar_lemmas, parse_instance, verify_dns, DnsBounds, Lemma, LemmaOutcome,
};
use crate::monad::laws::{check_monad_laws, size_grid};
use crate::monad::{Algebra, Monad, MonadKind};
use crate::report::{CheckResult, Report};
use crate::selection::laws::{check_bar_binary, check_selection_laws};
use crate::selection::JMonad;
use crate::universe::FinType;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "selmon",
    version,
    about = "Monadic selection functions, bar recursion and a DNS witness checker"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed for every sampled check.
    #[arg(long, global = true, env = "SELMON_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Overrides the number of sampled cases in every sampled suite.
    #[arg(long, global = true)]
    pub cases: Option<u64>,
    /// A preset name (`default`, `small`) or a path to a JSON bounds file.
    #[arg(long, global = true, default_value = "default")]
    pub bounds: String,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Include wall-clock timings. Reports then differ between runs.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exhaustive monad, algebra, selection and bar laws.
    Laws,
    /// Seeded equalities between the iterated products.
    Equiv,
    /// Verify one instance file.
    DnsVerify { path: PathBuf },
    /// Verify generated instances and check the lemma properties.
    DnsRandom,
    /// Laws, equivalences and generated instances.
    All,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Laws => "laws",
            Command::Equiv => "equiv",
            Command::DnsVerify { .. } => "dns-verify",
            Command::DnsRandom => "dns-random",
            Command::All => "all",
        }
    }
}

/// Sizes for the exhaustive law suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawBounds {
    /// Moves and carriers range over `Base(1)..=Base(max_size)`.
    pub max_size: u32,
    /// Outcomes of the selection monads and of the continuation monad are
    /// `Pow(Base(r_prime))`.
    pub r_prime: u32,
}

impl Default for LawBounds {
    fn default() -> Self {
        LawBounds {
            max_size: 2,
            r_prime: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub laws: LawBounds,
    pub equiv: EquivBounds,
    pub dns: DnsBounds,
    /// Instances for the lemma properties.
    pub lemma_cases: u64,
}

impl Bounds {
    pub fn preset(name: &str) -> Option<Bounds> {
        let default = Bounds {
            lemma_cases: 100,
            ..Bounds::default()
        };
        match name {
            "default" => Some(default),
            "small" => Some(Bounds {
                equiv: EquivBounds {
                    cases: 20,
                    ..default.equiv
                },
                dns: DnsBounds {
                    cases: 50,
                    ..default.dns
                },
                lemma_cases: 20,
                ..default
            }),
            _ => None,
        }
    }

    /// A preset name or a JSON file. Fields missing from the file take the
    /// `default` preset's values.
    pub fn load(source: &str) -> Result<Bounds> {
        if let Some(b) = Bounds::preset(source) {
            return Ok(b);
        }
        let path = PathBuf::from(source);
        if !path.exists() {
            return Err(Error::schema(
                "--bounds",
                format!("{source:?} is neither a preset (default, small) nor a file"),
            ));
        }
        let text = std::fs::read_to_string(&path)?;
        let mut j: Json = serde_json::from_str(&text).map_err(|e| Error::Parse {
            location: format!("{source}: line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let mut base = serde_json::to_value(Bounds::preset("default").expect("preset"))
            .expect("bounds serialize");
        merge(&mut base, j.take());
        let b: Bounds =
            serde_json::from_value(base).map_err(|e| Error::schema(source, e.to_string()))?;
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |at: &str, msg: &str| Err(Error::invariant(at, msg));
        if self.laws.max_size == 0 || self.laws.max_size > 3 {
            return bad("bounds.laws.max_size", "must be between 1 and 3");
        }
        if self.laws.r_prime == 0 || self.laws.r_prime > 2 {
            return bad("bounds.laws.r_prime", "must be 1 or 2");
        }
        if self.equiv.moves == 0
            || self.equiv.moves > 3
            || self.equiv.r_prime == 0
            || self.equiv.r_prime > 2
        {
            return bad("bounds.equiv", "moves must be 1..=3 and r_prime 1..=2");
        }
        if self.equiv.omega_max > 3 {
            return bad("bounds.equiv.omega_max", "must be at most 3");
        }
        self.dns.validate()
    }

    fn with_cases(mut self, cases: Option<u64>) -> Bounds {
        if let Some(n) = cases {
            self.equiv.cases = n;
            self.dns.cases = n;
            self.lemma_cases = n;
        }
        self
    }
}

fn merge(base: &mut Json, over: Json) {
    match (base, over) {
        (Json::Object(b), Json::Object(o)) => {
            for (k, v) in o {
                merge(b.entry(k).or_insert(Json::Null), v);
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Everything a run needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub bounds: Bounds,
    pub seed: u64,
    pub timings: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig> {
        Ok(RunConfig {
            command: cli.command.clone(),
            bounds: Bounds::load(&cli.common.bounds)?.with_cases(cli.common.cases),
            seed: cli.common.seed,
            timings: cli.common.timings,
        })
    }
}

/// The full output of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub command: String,
    pub seed: u64,
    pub bounds: Bounds,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Json>,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    /// One line per check, for standard error.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {} cases={} skipped={}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.law,
                c.cases,
                c.skipped
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!(
            "{}: {} checks, {} failed\n",
            self.command,
            self.checks.len(),
            failed
        ));
        s
    }
}

struct Timer {
    enabled: bool,
    entries: Vec<(String, f64)>,
}

impl Timer {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f()?;
        if self.enabled {
            self.entries
                .push((name.into(), start.elapsed().as_secs_f64()));
        }
        Ok(out)
    }
}

pub fn law_suite(b: &LawBounds) -> Result<Report> {
    let r = FinType::pow(FinType::base(b.r_prime));
    let mut report = Report::default();
    for (x, y, z) in size_grid(b.max_size) {
        for m in [
            Monad::identity(),
            Monad::powerset(),
            Monad::continuation(r.clone()),
        ] {
            report = report.merge(check_monad_laws(&m, &x, &y, &z)?);
        }
    }
    let top = FinType::base(b.max_size);
    for j in [
        JMonad::new(Algebra::identity(r.clone())),
        JMonad::new(Algebra::powerset(FinType::base(b.r_prime))),
    ] {
        report = report.merge(check_selection_laws(&j, &top, &top, &top)?);
        report = report.merge(check_bar_binary(&j, &top, &top)?);
    }
    Ok(report)
}

pub fn equiv_suite(b: &EquivBounds, seed: u64) -> Result<Report> {
    let mut checks = Vec::new();
    for kind in [MonadKind::Identity, MonadKind::Powerset] {
        let j = game_monad(&kind, b)?;
        for which in Equivalence::ALL {
            checks.push(check_equivalence(which, &j, b, seed, None)?);
        }
    }
    checks.push(check_hbr_equivalence(b, seed, None)?);
    Ok(Report::new(checks))
}

pub fn dns_random_suite(b: &Bounds, seed: u64) -> Result<Report> {
    let mut checks = vec![check_dns_random(&b.dns, seed)?];
    let lemma_bounds = DnsBounds {
        cases: b.lemma_cases,
        ..b.dns
    };
    checks.extend(check_lemma_suite(&lemma_bounds, seed)?);
    Ok(Report::new(checks))
}

pub fn dns_verify_suite(path: &std::path::Path) -> Result<Report> {
    let inst = parse_instance(path)?;
    let v = verify_dns(&inst)?;
    let mut checks = vec![CheckResult {
        law: "dns/implication".into(),
        cases: 1,
        evaluations: None,
        passed: v.holds(),
        skipped: 0,
        counterexample: (!v.holds()).then(|| v.to_json()),
        details: Some(v.to_json()),
    }];
    for l in Lemma::ALL {
        let (cases, skipped, passed, counterexample) = match check_bar_lemmas(&inst, l)? {
            LemmaOutcome::Held { checks } => (checks, 0, true, None),
            LemmaOutcome::Skipped => (0, 1, true, None),
            LemmaOutcome::Failed(d) => (1, 0, false, Some(d)),
        };
        checks.push(CheckResult {
            law: format!("dns/lemma/{l}"),
            cases,
            evaluations: None,
            passed,
            skipped,
            counterexample,
            details: None,
        });
    }
    Ok(Report::new(checks))
}

/// Runs the configured command on the current thread pool.
pub fn run(cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.bounds.validate()?;
    let mut timer = Timer {
        enabled: cfg.timings,
        entries: Vec::new(),
    };
    let b = &cfg.bounds;
    let mut report = Report::default();
    let laws = matches!(cfg.command, Command::Laws | Command::All);
    let equiv = matches!(cfg.command, Command::Equiv | Command::All);
    let dns = matches!(cfg.command, Command::DnsRandom | Command::All);
    if laws {
        report = report.merge(timer.time("laws", || law_suite(&b.laws))?);
    }
    if equiv {
        report = report.merge(timer.time("equiv", || equiv_suite(&b.equiv, cfg.seed))?);
    }
    if dns {
        report = report.merge(timer.time("dns-random", || dns_random_suite(b, cfg.seed))?);
    }
    if let Command::DnsVerify { path } = &cfg.command {
        report = report.merge(timer.time("dns-verify", || dns_verify_suite(path))?);
    }
    Ok(SuiteReport {
        command: cfg.command.name().into(),
        seed: cfg.seed,
        bounds: cfg.bounds,
        passed: report.passed(),
        checks: report.checks,
        timings: cfg.timings.then(|| {
            Json::Object(
                timer
                    .entries
                    .into_iter()
                    .map(|(k, v)| (k, json!(v)))
                    .collect(),
            )
        }),
    })
}

/// Renders a report as the bytes written to the output.
pub fn render(report: &SuiteReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<SuiteReport> {
    let cfg = RunConfig::from_cli(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.common.jobs {
        if n == 0 {
            return Err(Error::invariant("--jobs", "must be at least 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    pool.install(|| run(&cfg))
}

/// Parses `args`, runs, writes the report, and returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("selmon: {e}");
            return EXIT_ERROR;
        }
    };
    let text = render(&report);
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("selmon: cannot write report: {e}");
        return EXIT_ERROR;
    }
    eprint!("{}", report.summary());
    report.exit_code()
}
