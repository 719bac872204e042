//! Command-line front end: argument parsing, report rendering and exit codes.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfcft_core::cftside::{cft_fusion_ring, NSLabel};
use mfcft_core::correspondence::map_label;
use mfcft_core::correspondence::suites::{cases, CheckResult, Ctx, Status, Suite};
use mfcft_core::cyclofield::{CycError, Root};
use mfcft_core::graded::{certify_product, decompose_product, mf_fusion_ring, FusionRing, GradedLabel};
use rayon::prelude::*;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mfcft", version, about = "Matrix factorisations of x^d and the N=2 minimal model fusion rules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print all pairwise products of simple objects on one side.
    FusionTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Side::Mf)]
        side: Side,
    },
    /// Decompose P̂_{a:λ} ⊗ P̂_{b:μ}, with a homology certificate when λ ≤ 1.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// First label, `a:λ`.
        x: String,
        /// Second label, `b:μ`.
        y: String,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of core, graded, tl, cft, equivariance, equivalence.
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<String>>,
    },
    /// Compare the CFT and MF fusion rings under the label dictionary.
    Compare {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Odd modulus d ≥ 3 of the potential x^d.
    #[arg(long)]
    pub d: u32,
    /// Exponent l of the root η = e^{2πil/d}; must be coprime to d.
    #[arg(long, default_value_t = 1)]
    pub root_exponent: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Internal-degree bound for equality tests on operator morphisms.
    #[arg(long)]
    pub degree_bound: Option<u32>,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Cft,
    Mf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    TensorSign,
}

/// Validated configuration.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub root: Root,
    pub format: Format,
    pub degree_bound: Option<u32>,
}

impl Config {
    pub fn from_common(c: &Common) -> Result<Config, String> {
        if c.d < 3 || c.d % 2 == 0 {
            return Err(format!("d must be odd and at least 3, got {}", c.d));
        }
        let mut root = Root::new(c.d, c.root_exponent).map_err(|e| match e {
            CycError::NotCoprime(..) => format!("root exponent {} is not coprime to d = {}", c.root_exponent, c.d),
            e => e.to_string(),
        })?;
        if c.inject_fault == Some(Fault::TensorSign) {
            root = root.with_koszul_fault();
        }
        Ok(Config { root, format: c.format, degree_bound: c.degree_bound })
    }

    fn d(&self) -> u32 {
        self.root.d()
    }

    fn ctx(&self) -> Ctx {
        Ctx { root: self.root, degree_bound: self.degree_bound }
    }
}

/// A rendered report plus its exit code.
#[derive(Clone, Debug)]
pub struct Report {
    pub d: u32,
    pub root_exponent: u32,
    pub checks: Vec<CheckResult>,
    pub tables: Value,
    pub markdown_tables: String,
}

impl Report {
    fn new(cfg: &Config) -> Report {
        Report {
            d: cfg.d(),
            root_exponent: cfg.root.exponent(),
            checks: Vec::new(),
            tables: json!({}),
            markdown_tables: String::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "paper_ref": c.reference, "status": c.status.as_str(), "detail": c.detail}))
            .collect();
        json!({"d": self.d, "root_exponent": self.root_exponent, "checks": checks, "tables": self.tables})
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# mfcft report: d = {}, root exponent {}\n\n", self.d, self.root_exponent);
        if !self.checks.is_empty() {
            s.push_str("| check | reference | status | detail |\n|---|---|---|---|\n");
            for c in &self.checks {
                let _ = writeln!(s, "| {} | {} | {} | {} |", c.name, c.reference, c.status.as_str(), c.detail.replace('|', "\\|"));
            }
            s.push('\n');
        }
        s.push_str(&self.markdown_tables);
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.to_json()).expect("report serialises"),
            Format::Markdown => self.to_markdown(),
        }
    }
}

pub fn mf_label_json(l: &GradedLabel) -> Value {
    json!({"a": l.a, "lambda": l.lambda})
}

pub fn cft_label_json(l: &NSLabel) -> Value {
    json!({"l": l.l, "r": l.r})
}

fn show_hat(l: &GradedLabel) -> String {
    format!("P̂_{{{}:{}}}", l.a, l.lambda)
}

fn table_json<L: Ord + Clone + std::fmt::Display>(ring: &FusionRing<L>, label: impl Fn(&L) -> Value) -> Value {
    let mut rows = Vec::new();
    for i in 0..ring.len() {
        for j in 0..ring.len() {
            let prod: Vec<Value> =
                ring.product(i, j).iter().map(|&(k, m)| json!({"label": label(&ring.labels[k]), "multiplicity": m})).collect();
            rows.push(json!({"x": label(&ring.labels[i]), "y": label(&ring.labels[j]), "product": prod}));
        }
    }
    Value::Array(rows)
}

fn table_markdown<L: Ord + Clone + std::fmt::Display>(ring: &FusionRing<L>) -> String {
    let mut s = String::from("| ⊗ |");
    for l in &ring.labels {
        let _ = write!(s, " {l} |");
    }
    s.push_str("\n|---|");
    s.push_str(&"---|".repeat(ring.len()));
    s.push('\n');
    for i in 0..ring.len() {
        let _ = write!(s, "| {} |", ring.labels[i]);
        for j in 0..ring.len() {
            let terms: Vec<String> = ring
                .product(i, j)
                .iter()
                .map(|&(k, m)| if m == 1 { ring.labels[k].to_string() } else { format!("{m}·{}", ring.labels[k]) })
                .collect();
            let _ = write!(s, " {} |", terms.join(" ⊕ "));
        }
        s.push('\n');
    }
    s
}

pub fn cmd_fusion_table(cfg: &Config, side: Side) -> Result<Report, String> {
    let d = cfg.d();
    let mut r = Report::new(cfg);
    match side {
        Side::Mf => {
            let ring = mf_fusion_ring(d).map_err(|e| e.to_string())?;
            r.tables = json!({"side": "mf", "rank": ring.len(), "fusion": table_json(&ring, mf_label_json)});
            r.markdown_tables = format!("## MF fusion table ({} labels a:λ)\n\n{}", ring.len(), table_markdown(&ring));
        }
        Side::Cft => {
            let ring = cft_fusion_ring(d).map_err(|e| e.to_string())?;
            r.tables = json!({"side": "cft", "rank": ring.len(), "fusion": table_json(&ring, cft_label_json)});
            r.markdown_tables = format!("## NS fusion table ({} labels [l,r])\n\n{}", ring.len(), table_markdown(&ring));
        }
    }
    Ok(r)
}

/// Parses `a:λ` with `0 ≤ λ ≤ d - 2`.
pub fn parse_label(d: u32, s: &str) -> Result<GradedLabel, String> {
    let (a, l) = s.split_once(':').ok_or_else(|| format!("label {s:?} is not of the form a:λ"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad index in {s:?}"))?;
    let l: u32 = l.trim().parse().map_err(|_| format!("bad length in {s:?}"))?;
    GradedLabel::new(d, a, l).map_err(|e| e.to_string())
}

pub fn cmd_decompose(cfg: &Config, x: GradedLabel, y: GradedLabel) -> Result<Report, String> {
    let d = cfg.d();
    let mut r = Report::new(cfg);
    let mut summands = decompose_product(d, x, y).map_err(|e| e.to_string())?;
    summands.sort_by_key(|(l, _)| (l.lambda, l.a));
    let (x, y, swapped) = if x.lambda <= 1 || y.lambda > 1 { (x, y, false) } else { (y, x, true) };
    let certificate = if x.lambda <= 1 {
        let w = certify_product(&cfg.root, x, y).map_err(|e| e.to_string())?;
        let detail = format!(
            "{} → P̂_{{{x}}} ⊗ P̂_{{{y}}} is a degree-0 cycle inducing an isomorphism on homology: {}",
            w.summands.iter().map(show_hat).collect::<Vec<_>>().join(" ⊕ "),
            w.iso
        );
        r.checks.push(CheckResult {
            name: "decompose.certificate".into(),
            reference: "direct sum decomposition".into(),
            status: if w.iso { Status::Pass } else { Status::Fail },
            detail: detail.clone(),
        });
        json!({"certified": w.iso, "detail": detail, "factors_swapped": swapped})
    } else {
        r.checks.push(CheckResult {
            name: "decompose.certificate".into(),
            reference: "direct sum decomposition".into(),
            status: Status::Skipped,
            detail: "homology certificates are built when one factor has λ ≤ 1".into(),
        });
        Value::Null
    };
    let list: Vec<Value> = summands.iter().map(|(l, m)| json!({"label": mf_label_json(l), "multiplicity": m})).collect();
    let text: Vec<String> =
        summands.iter().map(|(l, m)| if *m == 1 { show_hat(l) } else { format!("{m}·{}", show_hat(l)) }).collect();
    r.tables = json!({"decomposition": {"x": mf_label_json(&x), "y": mf_label_json(&y), "summands": list, "certificate": certificate, "text": text.join(" ⊕ ")}});
    r.markdown_tables = format!("## Decomposition\n\n{} ⊗ {} ≅ {}\n", show_hat(&x), show_hat(&y), text.join(" ⊕ "));
    Ok(r)
}

fn run_suites(cfg: &Config, suites: &[Suite]) -> Vec<CheckResult> {
    let ctx = cfg.ctx();
    cases(suites).par_iter().map(|c| c.execute(&ctx)).collect()
}

pub fn cmd_verify(cfg: &Config, suites: &[Suite]) -> Report {
    let mut r = Report::new(cfg);
    r.checks = run_suites(cfg, suites);
    let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
    r.tables = json!({"suites": names});
    r
}

pub fn cmd_compare(cfg: &Config) -> Result<Report, String> {
    let d = cfg.d();
    let mut r = Report::new(cfg);
    r.checks = run_suites(cfg, &[Suite::Equivalence]);
    let ring = cft_fusion_ring(d).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    let mut md = String::from("## Label dictionary\n\n| NS label | MF label |\n|---|---|\n");
    for x in &ring.labels {
        let y = map_label(d, x);
        rows.push(json!({"cft": cft_label_json(x), "mf": y.as_ref().map(mf_label_json)}));
        let _ = writeln!(md, "| {x} | {} |", y.map_or("-".into(), |y| show_hat(&y)));
    }
    r.tables = json!({"label_map": rows});
    r.markdown_tables = md;
    Ok(r)
}

fn parse_suites(names: &Option<Vec<String>>) -> Result<Vec<Suite>, String> {
    match names {
        None => Ok(Suite::ALL.to_vec()),
        Some(v) => v.iter().map(|s| Suite::parse(s.trim()).ok_or_else(|| format!("unknown suite {s:?}"))).collect(),
    }
}

/// Parses arguments, runs the command and writes the report; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn std::io::Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let usage = |err: &mut dyn std::io::Write, msg: String| {
        let _ = writeln!(err, "error: {msg}");
        EXIT_USAGE
    };
    let common = match &cli.command {
        Command::FusionTable { common, .. } | Command::Decompose { common, .. } | Command::Verify { common, .. } | Command::Compare { common } => common,
    };
    let cfg = match Config::from_common(common) {
        Ok(c) => c,
        Err(m) => return usage(err, m),
    };
    let report = match &cli.command {
        Command::FusionTable { side, .. } => cmd_fusion_table(&cfg, *side),
        Command::Decompose { x, y, .. } => {
            let parsed = parse_label(cfg.d(), x).and_then(|x| Ok((x, parse_label(cfg.d(), y)?)));
            match parsed {
                Ok((x, y)) => cmd_decompose(&cfg, x, y),
                Err(m) => return usage(err, m),
            }
        }
        Command::Verify { suites, .. } => match parse_suites(suites) {
            Ok(s) => Ok(cmd_verify(&cfg, &s)),
            Err(m) => return usage(err, m),
        },
        Command::Compare { .. } => cmd_compare(&cfg),
    };
    match report {
        Ok(r) => {
            let _ = writeln!(out, "{}", r.render(cfg.format));
            if r.failed() {
                for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                    let _ = writeln!(err, "FAILED {}: {}", c.name, c.detail);
                }
                EXIT_FAIL
            } else {
                EXIT_OK
            }
        }
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAIL
        }
    }
}
