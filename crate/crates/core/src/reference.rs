//! Shipped reference tables and their regeneration from the library.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, parse_rational, rational_to_f64, PiValue, Rational};
use crate::families::{c_area_hyperelliptic, c_area_principal_stratum, check_principal, lsum_minus_from_carea};
use crate::strata::{parse_orders, ComponentTag, QuadStratum};
use crate::svcore::carea_from_total;
use crate::volumes::VolumeDb;

/// Absolute tolerance when comparing against approximate reference values.
pub const APPROX_TOLERANCE: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Table {
    #[serde(rename = "volSV")]
    VolSV,
    #[serde(rename = "SVLyap")]
    SVLyap,
    #[serde(rename = "vol")]
    Vol,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::VolSV, Table::SVLyap, Table::Vol];

    pub fn as_str(&self) -> &'static str {
        match self {
            Table::VolSV => "volSV",
            Table::SVLyap => "SVLyap",
            Table::Vol => "vol",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Table::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown table {s:?}; expected volSV, SVLyap or vol")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Volume,
    /// `pi^2 c_area`.
    Carea,
    LsumPlus,
    LsumMinus,
    /// `sum N(C) c_area(C) Vol`, the stratum total.
    CareaVolume,
    Genus,
    GEff,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Volume => "volume",
            Quantity::Carea => "carea",
            Quantity::LsumPlus => "lsum_plus",
            Quantity::LsumMinus => "lsum_minus",
            Quantity::CareaVolume => "carea_volume",
            Quantity::Genus => "genus",
            Quantity::GEff => "g_eff",
        }
    }

    fn is_pi_valued(&self) -> bool {
        matches!(self, Quantity::Volume | Quantity::CareaVolume)
    }
}

/// One cell of a reference table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceEntry {
    pub table: Table,
    pub stratum: String,
    pub component: ComponentTag,
    pub quantity: Quantity,
    /// Canonical text; a decimal when `exact` is false.
    pub value: String,
    pub exact: bool,
    /// The value as printed, when the shipped value differs from it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A reference value parsed from its text.
#[derive(Clone, Debug, PartialEq)]
pub enum RefValue {
    Pi(PiValue),
    Rational(Rational),
    Approx(f64),
}

impl RefValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            RefValue::Pi(v) => v.to_f64(),
            RefValue::Rational(r) => rational_to_f64(r),
            RefValue::Approx(x) => *x,
        }
    }
}

impl fmt::Display for RefValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefValue::Pi(v) => write!(f, "{v}"),
            RefValue::Rational(r) => f.write_str(&format_rational(r)),
            RefValue::Approx(x) => write!(f, "~{x}"),
        }
    }
}

fn parse_approx(s: &str) -> Result<(f64, i32)> {
    let bad = || Error::Parse(format!("bad approximate value {s:?}"));
    let (num, exp) = match s.split_once("*pi^") {
        Some((n, e)) => (n, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    Ok((num.parse::<f64>().map_err(|_| bad())?, exp))
}

impl ReferenceEntry {
    pub fn quad_stratum(&self) -> Result<QuadStratum> {
        QuadStratum::new(parse_orders(&self.stratum)?)
    }

    pub fn parsed_value(&self) -> Result<RefValue> {
        if !self.exact {
            let (x, e) = parse_approx(&self.value)?;
            return Ok(RefValue::Approx(x * std::f64::consts::PI.powi(e)));
        }
        if self.quantity.is_pi_valued() {
            Ok(RefValue::Pi(self.value.parse()?))
        } else if let Ok(n) = self.value.parse::<i64>() {
            Ok(RefValue::Rational(int(n)))
        } else {
            Ok(RefValue::Rational(parse_rational(&self.value, true)?))
        }
    }

    pub fn label(&self) -> String {
        let s = self.quad_stratum().map(|s| s.to_string()).unwrap_or_else(|_| self.stratum.clone());
        match self.component {
            ComponentTag::Whole => s,
            c => format!("{s}:{}", c.as_str()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSet {
    pub entries: Vec<ReferenceEntry>,
}

static BUILTIN: OnceLock<ReferenceSet> = OnceLock::new();

impl ReferenceSet {
    pub fn builtin() -> &'static ReferenceSet {
        BUILTIN.get_or_init(|| {
            ReferenceSet::from_json(include_str!("../data/reference.json")).expect("shipped reference data parses")
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let set: ReferenceSet = serde_json::from_str(text).map_err(|e| Error::Database(e.to_string()))?;
        for e in &set.entries {
            e.quad_stratum()?;
            e.parsed_value()?;
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Database(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn table(&self, t: Table) -> impl Iterator<Item = &ReferenceEntry> {
        self.entries.iter().filter(move |e| e.table == t)
    }

    fn find(&self, t: Table, stratum: &str, component: ComponentTag, q: Quantity) -> Option<&ReferenceEntry> {
        self.table(t).find(|e| e.stratum == stratum && e.component == component && e.quantity == q)
    }
}

/// A value recomputed by the library, with the route that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Regenerated {
    pub value: RefValue,
    pub method: &'static str,
}

/// `pi^2 c_area` of a stratum component from the first route that applies:
/// the principal recursion, the hyperelliptic closed form, or a shipped
/// stratum total.
pub fn regenerate_carea(
    s: &QuadStratum,
    component: ComponentTag,
    total: Option<&PiValue>,
    db: &VolumeDb,
) -> Result<Option<(Rational, &'static str)>> {
    let principal = s.orders().iter().all(|&a| a == 1 || a == -1);
    if principal && component == ComponentTag::Whole {
        let k = s.orders().iter().filter(|&&a| a == 1).count() as u32;
        let l = s.pole_count();
        if check_principal(k, l).is_ok() {
            let c = c_area_principal_stratum(k, l, db)?;
            return Ok(Some((c.expect_degree(-2)?, "principal recursion")));
        }
    }
    if let Some(h) = s.classify_hyperelliptic() {
        if component == ComponentTag::Hyp || (h.connected && component == ComponentTag::Whole) {
            return Ok(Some((c_area_hyperelliptic(&h.spec).expect_degree(-2)?, "hyperelliptic closed form")));
        }
    }
    if let Some(total) = total {
        let vol = db.quad(s, component)?;
        return Ok(Some((carea_from_total(total, &vol)?.expect_degree(-2)?, "stratum total / volume")));
    }
    Ok(None)
}

fn regenerate(set: &ReferenceSet, e: &ReferenceEntry, db: &VolumeDb) -> Result<Option<Regenerated>> {
    let s = e.quad_stratum()?;
    let total = match set.find(e.table, &e.stratum, e.component, Quantity::CareaVolume) {
        Some(t) => match t.parsed_value()? {
            RefValue::Pi(v) => Some(v),
            _ => None,
        },
        None => None,
    };
    let carea = || regenerate_carea(&s, e.component, total.as_ref(), db);
    let out = match e.quantity {
        Quantity::Volume => match db.quad(&s, e.component) {
            Ok(v) => Some(Regenerated { value: RefValue::Pi(v), method: "volume database" }),
            Err(Error::InexactVolume(_)) => None,
            Err(err) => return Err(err),
        },
        Quantity::Carea => carea()?.map(|(c, method)| Regenerated { value: RefValue::Rational(c), method }),
        Quantity::LsumMinus => match carea()? {
            Some((c, _)) => {
                let l = lsum_minus_from_carea(&s, &PiValue::monomial(c, -2))?;
                Some(Regenerated { value: RefValue::Rational(l), method: "c_area + I + K" })
            }
            None => None,
        },
        Quantity::Genus => Some(Regenerated { value: RefValue::Rational(int(s.genus() as i64)), method: "stratum" }),
        Quantity::GEff => {
            Some(Regenerated { value: RefValue::Rational(int(s.effective_genus() as i64)), method: "stratum" })
        }
        Quantity::LsumPlus | Quantity::CareaVolume => None,
    };
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Match,
    Mismatch,
    /// No route recomputes this value; it is shown as shipped.
    ReferenceOnly,
}

impl Status {
    fn as_str(&self) -> &'static str {
        match self {
            Status::Match => "ok",
            Status::Mismatch => "MISMATCH",
            Status::ReferenceOnly => "reference",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableLine {
    pub entry: ReferenceEntry,
    pub regenerated: Option<Regenerated>,
    pub status: Status,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub table: Table,
    pub lines: Vec<TableLine>,
}

fn compare(reference: &RefValue, got: &RefValue) -> bool {
    match (reference, got) {
        (RefValue::Approx(x), g) | (g, RefValue::Approx(x)) => {
            (x - g.to_f64()).abs() <= APPROX_TOLERANCE * x.abs().max(1.0)
        }
        (a, b) => a == b,
    }
}

/// Recomputes every cell of `table` and compares it with the shipped value.
pub fn regenerate_table(set: &ReferenceSet, table: Table, db: &VolumeDb) -> TableReport {
    let lines = set
        .table(table)
        .map(|e| {
            let reference = e.parsed_value();
            match (reference, regenerate(set, e, db)) {
                (Ok(r), Ok(Some(g))) => {
                    let status = if compare(&r, &g.value) { Status::Match } else { Status::Mismatch };
                    TableLine { entry: e.clone(), regenerated: Some(g), status, error: None }
                }
                (Ok(_), Ok(None)) => {
                    TableLine { entry: e.clone(), regenerated: None, status: Status::ReferenceOnly, error: None }
                }
                (Err(err), _) | (_, Err(err)) => TableLine {
                    entry: e.clone(),
                    regenerated: None,
                    status: Status::Mismatch,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();
    TableReport { table, lines }
}

impl TableReport {
    pub fn mismatches(&self) -> usize {
        self.lines.iter().filter(|l| l.status == Status::Mismatch).count()
    }

    /// Plain-text rendering; identical input gives identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "table {}", self.table);
        let rows: Vec<[String; 5]> = self
            .lines
            .iter()
            .map(|l| {
                let got = match (&l.regenerated, &l.error) {
                    (Some(g), _) => format!("{} [{}]", g.value, g.method),
                    (None, Some(err)) => format!("error: {err}"),
                    (None, None) => "-".into(),
                };
                let reference = match l.entry.parsed_value() {
                    Ok(RefValue::Approx(_)) | Err(_) => format!("~{}", l.entry.value),
                    Ok(v) => v.to_string(),
                };
                [l.entry.label(), l.entry.quantity.as_str().into(), reference, got, l.status.as_str().into()]
            })
            .collect();
        let mut widths = [0usize; 4];
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r.iter()) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for (r, l) in rows.iter().zip(&self.lines) {
            let _ = write!(
                out,
                "{:<w0$}  {:<w1$}  {:<w2$}  {:<w3$}  {}",
                r[0],
                r[1],
                r[2],
                r[3],
                r[4],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
                w3 = widths[3]
            );
            if let Some(p) = &l.entry.printed {
                let _ = write!(out, "  (printed {p})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{} rows, {} mismatches", self.lines.len(), self.mismatches());
        out
    }
}
