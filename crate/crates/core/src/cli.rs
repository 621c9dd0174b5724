//! Command-line front end; `run` is the whole program minus process exit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exactnum::{format_rational, format_sig, parse_rational, rational_to_f64, PiValue, Rational};
use crate::families::{c_area_hyperelliptic, lsum_minus_from_carea, lsum_minus_hyperelliptic, principal_breakdown};
use crate::geometry::{qmax_tilde, ratio_area_gt_p, ratio_single_cyl_gt_p};
use crate::reference::{regenerate_table, ReferenceSet, Table};
use crate::strata::{ComponentTag, HypComponentSpec, HypKind, QuadStratum};
use crate::svcore::{sv_constants, APPROX_DIGITS};
use crate::volumes::{VolumeDb, VolumeSource};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VOLUME: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "svq", version, about = "Siegel-Veech constants, volumes and Lyapunov sums of quadratic strata")]
struct Cli {
    /// Volume database (JSON); replaces the shipped one.
    #[arg(long, global = true, env = "SVQ_DB")]
    db: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also print decimal approximations.
    #[arg(long, global = true)]
    approx: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Masur-Veech volume of a stratum component.
    Volume {
        #[arg(long)]
        stratum: String,
        #[arg(long, default_value = "whole")]
        component: String,
    },
    /// Constants of one configuration given as JSON.
    SvConfig {
        #[arg(long)]
        config: PathBuf,
    },
    /// c_area of a whole stratum or hyperelliptic component.
    SvStratum(StratumSel),
    /// Sum of the Lyapunov exponents L^-.
    Lyapunov {
        #[command(flatten)]
        sel: StratumSel,
        /// `pi^2 c_area` as a rational, or `c_area` itself such as `47/22*pi^-2`.
        #[arg(long, requires = "stratum")]
        carea: Option<String>,
        #[arg(long)]
        stratum: Option<String>,
    },
    /// Reduced maximal number of homologous cylinders.
    Qmax {
        #[arg(long)]
        stratum: String,
    },
    /// Proportion of the constant coming from configurations of large area.
    AreaRatio(AreaRatioArgs),
    /// Regenerate shipped tables and compare.
    Tables {
        #[arg(long, default_value = "all")]
        which: String,
        /// Reference tables (JSON); defaults to the shipped ones.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Check every database entry against the closed forms.
    DbValidate,
}

#[derive(Args, Debug)]
struct StratumSel {
    /// Q(1^K, -1^L) as `K,L`.
    #[arg(long)]
    principal: Option<String>,
    /// Hyperelliptic component as `TYPE,K1,K2`.
    #[arg(long, conflicts_with = "principal")]
    hyp: Option<String>,
}

#[derive(Args, Debug)]
struct AreaRatioArgs {
    #[arg(long)]
    single: bool,
    #[arg(long, conflicts_with = "single", required_unless_present = "single")]
    ns: Option<u32>,
    #[arg(long, conflicts_with = "single", required_unless_present = "single")]
    q: Option<u32>,
    #[arg(long, requires = "single")]
    dim: Option<u32>,
    #[arg(long)]
    p: String,
}

struct Ctx<'a> {
    db: VolumeDb,
    format: Format,
    approx: bool,
    out: &'a mut dyn Write,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownVolume(_) | Error::InexactVolume(_) => EXIT_VOLUME,
        _ => EXIT_INPUT,
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let db = match &cli.db {
        Some(path) => match VolumeDb::load(path) {
            Ok(db) => db,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
        },
        None => VolumeDb::builtin().clone(),
    };
    let mut ctx = Ctx { db, format: cli.format, approx: cli.approx, out };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("output: {e}"))
}

fn parse_list<const N: usize>(s: &str, what: &str) -> Result<[String; N]> {
    let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    parts.try_into().map_err(|_| Error::Parse(format!("{what}: expected {N} comma-separated values, got {s:?}")))
}

fn parse_principal(s: &str) -> Result<(u32, u32)> {
    let [k, l] = parse_list::<2>(s, "--principal")?;
    let num = |x: &str| x.parse::<u32>().map_err(|_| Error::Parse(format!("--principal: bad integer {x:?}")));
    Ok((num(&k)?, num(&l)?))
}

fn parse_hyp(s: &str) -> Result<HypComponentSpec> {
    let [t, k1, k2] = parse_list::<3>(s, "--hyp")?;
    let kind: HypKind = t.parse()?;
    let num = |x: &str| x.parse::<i32>().map_err(|_| Error::Parse(format!("--hyp: bad integer {x:?}")));
    HypComponentSpec::new(kind, num(&k1)?, num(&k2)?)
}

fn pi_json(v: &PiValue) -> Value {
    json!({ "exact": v.to_string(), "approx": v.approx_string(APPROX_DIGITS) })
}

fn rational_json(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "approx": format_sig(rational_to_f64(r), APPROX_DIGITS) })
}

impl Ctx<'_> {
    fn json(&mut self, v: &Value) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("serializable")).map_err(io)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(io)
    }

    fn pi_text(&self, v: &PiValue) -> String {
        if self.approx {
            format!("{v}  (approx {})", v.approx_string(APPROX_DIGITS))
        } else {
            v.to_string()
        }
    }

    fn rational_text(&self, r: &Rational) -> String {
        if self.approx {
            format!("{}  (approx {})", format_rational(r), format_sig(rational_to_f64(r), APPROX_DIGITS))
        } else {
            format_rational(r)
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, cmd: Command) -> Result<i32> {
    match cmd {
        Command::Volume { stratum, component } => {
            let s: QuadStratum = stratum.parse()?;
            let tag: ComponentTag = component.parse()?;
            let (v, source) = ctx.db.resolve_quad(&s, tag)?;
            let source = match source {
                VolumeSource::Database(s) => format!("database: {s}"),
                VolumeSource::ClosedForm(s) => format!("closed form: {s}"),
            };
            if ctx.format == Format::Json {
                ctx.json(&json!({
                    "stratum": s.key(), "component": tag.as_str(), "volume": pi_json(&v), "source": source
                }))?;
            } else {
                let text = ctx.pi_text(&v);
                ctx.line(&text)?;
            }
        }
        Command::SvConfig { config } => {
            let cfg = Configuration::load(&config)?;
            let r = sv_constants(&cfg, &ctx.db)?;
            ctx.json(&r.to_json())?;
        }
        Command::SvStratum(sel) => sv_stratum(ctx, &sel)?,
        Command::Lyapunov { sel, carea, stratum } => lyapunov(ctx, &sel, carea.as_deref(), stratum.as_deref())?,
        Command::Qmax { stratum } => {
            let s: QuadStratum = stratum.parse()?;
            let r = qmax_tilde(&s)?;
            if ctx.format == Format::Json {
                ctx.json(&json!({
                    "stratum": s.key(),
                    "qmax_tilde": r.value,
                    "method": r.method,
                    "interval": [r.interval.0, r.interval.1],
                    "satisfiable": r.satisfiable,
                }))?;
            } else {
                ctx.line(&format!(
                    "q~max = {} ({}); q_max in [{}, {}]{}",
                    r.value,
                    r.method,
                    r.interval.0,
                    r.interval.1,
                    if r.satisfiable { "" } else { "; no index set satisfies the constraint" }
                ))?;
            }
        }
        Command::AreaRatio(a) => {
            let p = parse_rational(&a.p, false)?;
            let r = if a.single {
                let d = a.dim.ok_or_else(|| Error::Parse("--single needs --dim".into()))?;
                ratio_single_cyl_gt_p(d, &p)?
            } else {
                ratio_area_gt_p(a.ns.expect("required by clap"), a.q.expect("required by clap"), &p)?
            };
            if ctx.format == Format::Json {
                ctx.json(&json!({ "ratio": rational_json(&r) }))?;
            } else {
                let text = ctx.rational_text(&r);
                ctx.line(&text)?;
            }
        }
        Command::Tables { which, reference } => {
            let set = match reference {
                Some(path) => ReferenceSet::load(&path)?,
                None => ReferenceSet::builtin().clone(),
            };
            let tables: Vec<Table> = if which == "all" { Table::ALL.to_vec() } else { vec![which.parse()?] };
            let mut mismatches = 0;
            for t in tables {
                let report = regenerate_table(&set, t, &ctx.db);
                mismatches += report.mismatches();
                write!(ctx.out, "{}", report.render()).map_err(io)?;
            }
            if mismatches > 0 {
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::DbValidate => {
            let lines = ctx.db.validate();
            let failed = lines.iter().filter(|l| !l.passed && !l.informational).count();
            for l in &lines {
                let status = match (l.passed, l.informational) {
                    (true, _) => "ok",
                    (false, true) => "note",
                    (false, false) => "FAIL",
                };
                ctx.line(&format!("{}  {}  {}  {}", l.key, l.check, status, l.detail))?;
            }
            ctx.line(&format!("{} checks, {} failed", lines.len(), failed))?;
            if failed > 0 {
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(EXIT_OK)
}

fn sv_stratum(ctx: &mut Ctx<'_>, sel: &StratumSel) -> Result<()> {
    if let Some(h) = &sel.hyp {
        let spec = parse_hyp(h)?;
        let c = c_area_hyperelliptic(&spec);
        if ctx.format == Format::Json {
            return ctx.json(&json!({ "stratum": spec.signature().key(), "component": "hyp", "c_area": pi_json(&c) }));
        }
        let text = format!("{}:hyp  c_area = {}", spec.signature(), ctx.pi_text(&c));
        return ctx.line(&text);
    }
    let Some(p) = &sel.principal else {
        return Err(Error::Parse("sv-stratum needs --principal K,L or --hyp TYPE,K1,K2".into()));
    };
    let (k, l) = parse_principal(p)?;
    let b = principal_breakdown(k, l, &ctx.db)?;
    if ctx.format == Format::Json {
        let rows: Vec<Value> = b
            .rows
            .iter()
            .map(|(cfg, c)| json!({ "configuration": cfg.family.to_string(), "N": rational_json(&cfg.multiplicity), "c_area": pi_json(c) }))
            .collect();
        let s = QuadStratum::principal(k, l)?;
        return ctx.json(&json!({ "stratum": s.key(), "configurations": rows, "total": pi_json(&b.total) }));
    }
    for (cfg, c) in &b.rows {
        let text = format!(
            "{:<10}  N = {:<8}  c_area = {}",
            cfg.family.to_string(),
            format_rational(&cfg.multiplicity),
            ctx.pi_text(c)
        );
        ctx.line(&text)?;
    }
    let text = format!("total  {}", ctx.pi_text(&b.total));
    ctx.line(&text)
}

fn lyapunov(ctx: &mut Ctx<'_>, sel: &StratumSel, carea: Option<&str>, stratum: Option<&str>) -> Result<()> {
    let (s, value) = match (carea, stratum, &sel.principal, &sel.hyp) {
        (Some(c), Some(s), None, None) => {
            let s: QuadStratum = s.parse()?;
            let c: PiValue = match parse_rational(c, false) {
                Ok(r) => PiValue::monomial(r, -2),
                Err(_) => c.parse()?,
            };
            let l = lsum_minus_from_carea(&s, &c)?;
            (s, l)
        }
        (None, None, Some(p), None) => {
            let (k, l) = parse_principal(p)?;
            let b = principal_breakdown(k, l, &ctx.db)?;
            let s = QuadStratum::principal(k, l)?;
            let l = lsum_minus_from_carea(&s, &b.total)?;
            (s, l)
        }
        (None, None, None, Some(h)) => {
            let spec = parse_hyp(h)?;
            (spec.signature(), lsum_minus_hyperelliptic(&spec))
        }
        _ => {
            return Err(Error::Parse(
                "lyapunov needs --stratum S --carea C, --principal K,L or --hyp TYPE,K1,K2".into(),
            ))
        }
    };
    if ctx.format == Format::Json {
        return ctx.json(&json!({ "stratum": s.key(), "lsum_minus": rational_json(&value) }));
    }
    let text = ctx.rational_text(&value);
    ctx.line(&text)
}
