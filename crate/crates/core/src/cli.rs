//! The `scattered` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cbengine::{derive_full, is_scattered, locate};
use crate::classify::{homeomorphic, ms_characteristic, pairwise_distinct, witnesses, Selector};
use crate::families::{generate, FamilyParams, Variant};
use crate::invariants::{default_kappas, psi, signature, singular_union};
use crate::oracle::check_expr;
use crate::ordinal::{CardinalSym, Ordinal, Regularity};
use crate::spaces::{parse_expr, PointName, SpaceDoc, SpaceExpr, SCHEMA_VERSION};
use crate::ultrametric::{
    hedgehog_metric, prop1_order, random_ultra, read_csv, read_json, spine_isometry, to_json,
    verify_interval_property, FiniteUltra,
};

/// Directory receiving a `<command>.json` report when `--out` is not given.
pub const REPORT_DIR_VAR: &str = "SCATTERED_REPORT_DIR";

#[derive(Parser, Debug)]
#[command(name = "scattered", version, about = "Cantor-Bendixson derivatives and invariants of scattered spaces")]
pub struct Cli {
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derivative stages of a space.
    Derive { expr: String },
    /// Rank and local shape of a named point.
    Rank { expr: String, point: String },
    /// Compactness, countability, height and characteristic.
    Classify { expr: String },
    /// Decide whether two spaces are homeomorphic.
    Homeo {
        a: String,
        b: String,
        #[arg(long = "kappa", value_delimiter = ',')]
        kappas: Vec<CardinalSym>,
    },
    /// All invariants of a space.
    Signature {
        expr: String,
        #[arg(long = "kappa", value_delimiter = ',')]
        kappas: Vec<CardinalSym>,
    },
    /// Psi for a regular cardinal, or the singular union for a singular one.
    Psi {
        expr: String,
        #[arg(long)]
        kappa: CardinalSym,
    },
    /// Build family members; with several `--set` values, compare them pairwise.
    Family {
        variant: Variant,
        /// Comma-separated ordinals; repeat for several members.
        #[arg(long)]
        set: Vec<String>,
        #[arg(long)]
        kappa: Option<CardinalSym>,
        #[arg(long)]
        alpha: Option<Ordinal>,
        /// Invariant used when comparing members.
        #[arg(long, default_value = "all")]
        select: Selector,
    },
    /// Finite ultrametric spaces.
    Ultra {
        #[command(subcommand)]
        command: UltraCommand,
    },
    /// Engine-vs-oracle comparisons.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum UltraCommand {
    /// Check the strong triangle inequality.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The ball-tree order and its interval report.
    Order {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Glue pointed spaces into a hedgehog; each spine is `PATH:BASEPOINT`.
    Hedgehog {
        #[arg(long = "spine", required = true)]
        spines: Vec<String>,
    },
    /// A random ultrametric space.
    Random {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Compare engine ranks with the oracle; prints the first divergence.
    Check {
        expr: String,
        #[arg(long, default_value_t = 3)]
        depth: u64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CardinalNote {
    pub cardinal: CardinalSym,
    pub regularity: Regularity,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub expressions: Vec<String>,
    pub cardinals: Vec<CardinalNote>,
    pub output: Option<String>,
    pub seed: Option<u64>,
}

/// A failed command: the module diagnostic, verbatim.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Outcome {
    result: Value,
    text: String,
}

fn expr_arg(s: &str, m: &mut RunManifest) -> Result<SpaceExpr, Failure> {
    // `@file` reads a DSL text or a JSON space document
    let x = if let Some(path) = s.strip_prefix('@') {
        m.inputs.push(path.to_string());
        let body = fs::read_to_string(path)?;
        match serde_json::from_str::<SpaceDoc>(&body) {
            Ok(doc) => doc.expr,
            Err(_) => parse_expr(body.trim())?,
        }
    } else {
        parse_expr(s)?
    };
    m.expressions.push(x.to_string());
    Ok(x)
}

fn note_kappas(ks: &[CardinalSym], m: &mut RunManifest) {
    m.cardinals.extend(ks.iter().map(|k| CardinalNote { cardinal: k.clone(), regularity: k.regularity() }));
}

fn set_text<T: std::fmt::Display>(s: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = s.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn load_ultra(path: &Path, m: &mut RunManifest) -> Result<FiniteUltra, Failure> {
    m.inputs.push(path.display().to_string());
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        Ok(read_json(&fs::read_to_string(path)?)?)
    } else {
        Ok(read_csv(fs::File::open(path)?)?)
    }
}

fn kappas_or_default(ks: Vec<CardinalSym>) -> Vec<CardinalSym> {
    if ks.is_empty() {
        default_kappas()
    } else {
        ks
    }
}

fn execute(cmd: Command, m: &mut RunManifest) -> Result<Outcome, Failure> {
    match cmd {
        Command::Derive { expr } => {
            m.command = "derive".into();
            let x = expr_arg(&expr, m)?;
            let t = derive_full(&x)?;
            let mut text = format!("{}  height {}\n", t.expr, t.height);
            for s in &t.stages {
                let mut parts: Vec<String> =
                    s.regions.iter().map(|r| format!("{} ranks {} ({} points)", r.region, r.ranks, r.count)).collect();
                parts.extend(s.points.iter().cloned());
                let body = if parts.is_empty() { "empty".to_string() } else { parts.join("; ") };
                text.push_str(&format!("  stage {}: {body}\n", s.stage_ordinal));
            }
            Ok(Outcome { result: serde_json::to_value(&t)?, text })
        }
        Command::Rank { expr, point } => {
            m.command = "rank".into();
            let x = expr_arg(&expr, m)?;
            let p: PointName = point.parse()?;
            let l = locate(&x, &p)?;
            let text = format!("rank of {p} in {x}: {}\n", l.rank);
            Ok(Outcome { result: json!({ "point": p.to_string(), "rank": l.rank, "local": l.local, "gamma": l.gamma }), text })
        }
        Command::Classify { expr } => {
            m.command = "classify".into();
            let x = expr_arg(&expr, m)?;
            let (_, height) = is_scattered(&x)?;
            let a = crate::cbengine::analyze(&x)?;
            let countable = a.classes.iter().all(|c| c.count <= crate::ordinal::Cardinal::aleph0());
            let ms = ms_characteristic(&x).map(|c| c.to_string());
            let mut text = format!("{x}\n  scattered, height {height}\n  compact {}\n  countable {countable}\n", a.compact);
            match &ms {
                Ok(c) => text.push_str(&format!("  homeomorphic to [0, w^a * n] with (a, n) = {c}\n")),
                Err(e) => text.push_str(&format!("  no characteristic: {e}\n")),
            }
            let result = json!({
                "space": x.to_string(),
                "scattered": true,
                "height": height,
                "compact": a.compact,
                "countable": countable,
                "ms_characteristic": ms.as_ref().ok(),
            });
            Ok(Outcome { result, text })
        }
        Command::Homeo { a, b, kappas } => {
            m.command = "homeo".into();
            let (x, y) = (expr_arg(&a, m)?, expr_arg(&b, m)?);
            let ks = kappas_or_default(kappas);
            note_kappas(&ks, m);
            let c = homeomorphic(&x, &y, &ks)?;
            let text = format!(
                "{:?} by {}: {} vs {}\n{}",
                c.verdict,
                c.invariant,
                c.left_value,
                c.right_value,
                c.notes.iter().map(|n| format!("  note: {n}\n")).collect::<String>()
            );
            Ok(Outcome { result: serde_json::to_value(&c)?, text })
        }
        Command::Signature { expr, kappas } => {
            m.command = "signature".into();
            let x = expr_arg(&expr, m)?;
            let ks = kappas_or_default(kappas);
            note_kappas(&ks, m);
            let r = signature(&x, &ks)?;
            let mut text = format!("{}\n  sigma {}\n", r.space, set_text(&r.sigma));
            for (k, v) in &r.sigma_kappa {
                text.push_str(&format!("  sigma[{k}] {}\n", set_text(v)));
            }
            for (k, v) in &r.psi {
                text.push_str(&format!("  psi[{k}] {}\n", set_text(v)));
            }
            text.push_str(&format!("  gamma {}\n", set_text(&r.gamma_points)));
            Ok(Outcome { result: serde_json::to_value(&r)?, text })
        }
        Command::Psi { expr, kappa } => {
            m.command = "psi".into();
            let x = expr_arg(&expr, m)?;
            note_kappas(std::slice::from_ref(&kappa), m);
            let (name, v) = if kappa.regularity() == Regularity::Singular {
                ("singular_union", singular_union(&x, &kappa)?)
            } else {
                ("psi", psi(&x, &kappa)?)
            };
            let text = format!("{name}[{kappa}] = {}\n", set_text(&v));
            Ok(Outcome { result: json!({ "space": x.to_string(), "kappa": kappa, name: v }), text })
        }
        Command::Family { variant, set, kappa, alpha, select } => {
            m.command = "family".into();
            if let Some(k) = &kappa {
                note_kappas(std::slice::from_ref(k), m);
            }
            let sets: Vec<Vec<Ordinal>> = if set.is_empty() {
                vec![Vec::new()]
            } else {
                set.iter()
                    .map(|s| s.split(',').map(|t| t.trim().parse::<Ordinal>()).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<_, _>>()?
            };
            let mut members = Vec::new();
            for s in sets {
                let p = FamilyParams { variant, set: s, kappa: kappa.clone(), alpha: alpha.clone() };
                members.push(generate(&p)?);
            }
            m.expressions.extend(members.iter().map(|x| x.expr.to_string()));
            let mut text: String = members
                .iter()
                .map(|x| {
                    let d: Vec<String> = x.designated.iter().map(|p| p.to_string()).collect();
                    format!("{}\n  designated {}\n", x.expr, d.join(", "))
                })
                .collect();
            let mut result = json!({ "members": members });
            if members.len() > 1 {
                let exprs: Vec<SpaceExpr> = members.iter().map(|x| x.expr.clone()).collect();
                let ks = match &kappa {
                    Some(k) if !default_kappas().contains(k) => {
                        let mut v = default_kappas();
                        v.push(k.clone());
                        v
                    }
                    _ => default_kappas(),
                };
                let mx = pairwise_distinct(&exprs, &ks, select)?;
                text.push_str(&format!(
                    "pairwise distinct: {}\n  witnesses {}\n",
                    mx.all_distinct,
                    set_text(witnesses(&mx))
                ));
                result["distinctness"] = serde_json::to_value(&mx)?;
            }
            Ok(Outcome { result, text })
        }
        Command::Ultra { command } => ultra(command, m),
        Command::Oracle { command: OracleCommand::Check { expr, depth } } => {
            m.command = "oracle check".into();
            let x = expr_arg(&expr, m)?;
            let r = check_expr(&x, depth)?;
            let text = match &r.divergence {
                None => format!("{}: engine and oracle agree on {} points\n", r.expr, r.points_checked),
                Some(d) => format!(
                    "{}: first divergence at {}: engine rank {}, oracle rank {}\n",
                    r.expr, d.point, d.engine_rank, d.oracle_rank
                ),
            };
            Ok(Outcome { result: serde_json::to_value(&r)?, text })
        }
    }
}

fn ultra(cmd: UltraCommand, m: &mut RunManifest) -> Result<Outcome, Failure> {
    match cmd {
        UltraCommand::Validate { input } => {
            m.command = "ultra validate".into();
            let u = load_ultra(&input, m)?;
            let text = format!("valid ultrametric on {} points\n", u.len());
            Ok(Outcome { result: json!({ "valid": true, "points": u.labels() }), text })
        }
        UltraCommand::Order { input } => {
            m.command = "ultra order".into();
            let u = load_ultra(&input, m)?;
            let r = prop1_order(&u);
            let report = verify_interval_property(&u, &r)?;
            let levels: Vec<Vec<Vec<&str>>> = r
                .level_orders
                .iter()
                .map(|l| l.iter().map(|b| b.iter().map(|&x| u.label(x)).collect()).collect())
                .collect();
            let text = format!("{}\n", report.order.join(" < "));
            let result = json!({ "order": report.order, "level_orders": levels, "intervals": report.blocks });
            Ok(Outcome { result, text })
        }
        UltraCommand::Hedgehog { spines } => {
            m.command = "ultra hedgehog".into();
            let mut parts = Vec::new();
            for s in &spines {
                let (path, base) =
                    s.rsplit_once(':').ok_or_else(|| Failure(format!("spine `{s}` must be PATH:BASEPOINT")))?;
                parts.push((load_ultra(Path::new(path), m)?, base.to_string()));
            }
            let h = hedgehog_metric(&parts)?;
            let iso = parts.iter().enumerate().all(|(i, (x, b))| spine_isometry(&h, x, b, i + 1));
            let text = format!("hedgehog on {} points, spines isometric: {iso}\n", h.len());
            Ok(Outcome { result: json!({ "space": to_json(&h), "spines_isometric": iso }), text })
        }
        UltraCommand::Random { n, seed } => {
            m.command = "ultra random".into();
            m.seed = Some(seed);
            if n == 0 {
                return Err(Failure("n must be positive".into()));
            }
            let u = random_ultra(&mut ChaCha8Rng::seed_from_u64(seed), n);
            let v = to_json(&u);
            Ok(Outcome { text: format!("{}\n", serde_json::to_string_pretty(&v)?), result: v })
        }
    }
}

fn report_path(cli_out: Option<PathBuf>, command: &str) -> Option<PathBuf> {
    cli_out.or_else(|| {
        std::env::var_os(REPORT_DIR_VAR).map(|d| PathBuf::from(d).join(format!("{}.json", command.replace(' ', "_"))))
    })
}

/// Runs one invocation, writing human output to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut m = RunManifest::default();
    let outcome = match execute(cli.command, &mut m) {
        Ok(o) => o,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 1;
        }
    };
    let path = report_path(cli.out, &m.command);
    m.output = path.as_ref().map(|p| p.display().to_string());
    let report = json!({ "schema_version": SCHEMA_VERSION, "manifest": m, "result": outcome.result });
    let pretty = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Some(p) = &path {
        if let Err(e) = fs::write(p, format!("{pretty}\n")) {
            let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
            return 1;
        }
    }
    let _ = if cli.json { writeln!(out, "{pretty}") } else { write!(out, "{}", outcome.text) };
    0
}
