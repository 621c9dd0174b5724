//! Masur-Veech volumes: closed forms, the disconnected and half-area relations,
//! and the volume database.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{double_factorial, factorial, format_rational, parse_rational, pow2, PiValue, Rational};
use crate::strata::{
    stratum_key, AbelianHypSignature, AbelianStratum, ComponentTag, HypComponentSpec, HypKind, QuadStratum,
};

const BUILTIN_JSON: &str = include_str!("../data/volumes.json");

/// `Vol Q(1^k, -1^(k+4)) = pi^(2k+2) / 2^(k-1)`.
pub fn vol_genus0_principal(k: u32) -> PiValue {
    PiValue::monomial(pow2(1 - k as i64), 2 * k as i32 + 2)
}

fn df_ratio(k: i64) -> Result<Rational> {
    Ok(Rational::new(double_factorial(k)?, double_factorial(k + 1)?))
}

/// Half-area volume of a hyperelliptic component of an Abelian stratum.
///
/// `SingleZero(k)`: `2^(k+2)/(k+2)! * (k-2)!!/(k-1)!! * pi^(k+1)`, k odd.
/// `Pair(k)`: `2^(k+3)/(k+2)! * (k-2)!!/(k-1)!! * pi^k`, k even, k >= 4.
pub fn vol_hyp_abelian_halfarea(sig: AbelianHypSignature) -> Result<PiValue> {
    match sig {
        AbelianHypSignature::SingleZero(k) if k % 2 == 1 => {
            let c = pow2(k as i64 + 2) / Rational::from_integer(factorial(k + 2)) * df_ratio(k as i64 - 2)?;
            Ok(PiValue::monomial(c, k as i32 + 1))
        }
        AbelianHypSignature::Pair(k) if k % 2 == 0 && k >= 4 => {
            let c = pow2(k as i64 + 3) / Rational::from_integer(factorial(k + 2)) * df_ratio(k as i64 - 2)?;
            Ok(PiValue::monomial(c, k as i32))
        }
        other => Err(Error::Domain(format!("no hyperelliptic Abelian component for {other:?}"))),
    }
}

/// `Vol H_(1/2) = 2^dim * Vol H_1`.
pub fn abelian_halfarea_from_unit(v1: &PiValue, dim: u32) -> PiValue {
    v1.scale(&pow2(dim as i64))
}

/// Volume of the hyperelliptic component described by `spec`.
pub fn vol_hyp_quadratic(spec: &HypComponentSpec) -> PiValue {
    let d = spec.dim();
    let ratios = df_ratio(spec.k1 as i64).expect("validated spec") * df_ratio(spec.k2 as i64).expect("validated spec");
    let d_fact = Rational::from_integer(factorial(d));
    let (coeff, exp) = match spec.kind {
        HypKind::Type1 if spec.k1 == spec.k2 => {
            let g = (spec.k1 + 1) as u32;
            let c = Rational::from_integer(BigInt::from(3)) * pow2(2 * g as i64 + 2)
                / Rational::from_integer(factorial(2 * g + 2))
                * ratios;
            (c, 2 * g as i32 + 2)
        }
        HypKind::Type1 => (pow2(d as i64) / d_fact * ratios, d as i32),
        HypKind::Type2 => (pow2(d as i64) / d_fact * ratios, d as i32 - 1),
        HypKind::Type3 => (pow2(d as i64 + 1) / d_fact * ratios, d as i32 - 2),
    };
    PiValue::monomial(coeff, exp)
}

/// Volume of a disconnected stratum from its `(volume, dim)` components.
pub fn vol_disconnected(components: &[(PiValue, u32)]) -> Result<PiValue> {
    if components.is_empty() {
        return Err(Error::Domain("disconnected volume of zero components".into()));
    }
    if components.iter().any(|(_, d)| *d == 0) {
        return Err(Error::Domain("component of dimension 0".into()));
    }
    let m = components.len() as i64;
    let total: u32 = components.iter().map(|(_, d)| d).sum();
    let mut coeff = pow2(1 - m) / Rational::from_integer(factorial(total - 1));
    let mut prod = PiValue::one();
    for (v, d) in components {
        coeff *= Rational::from_integer(factorial(d - 1));
        prod = &prod * v;
    }
    Ok(prod.scale(&coeff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Quadratic,
    Abelian,
}

/// Area normalization of a stored volume.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Area {
    Half,
    One,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VolumeKey {
    pub kind: StratumKind,
    pub stratum: String,
    pub component: ComponentTag,
}

impl fmt::Display for VolumeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            StratumKind::Quadratic => "Q",
            StratumKind::Abelian => "H",
        };
        write!(f, "{prefix}({}):{}", self.stratum, self.component)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeRecord {
    /// Stored value, in the record's own convention.
    pub value: PiValue,
    pub area: Area,
    pub labeled: bool,
    pub exact: bool,
    pub source: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    stratum: String,
    component: ComponentTag,
    kind: StratumKind,
    area: Area,
    labeled: bool,
    coeff: String,
    pi_exp: i32,
    exact: bool,
    source: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDb {
    entries: Vec<RawEntry>,
}

/// Where a resolved volume came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VolumeSource {
    Database(String),
    ClosedForm(&'static str),
}

/// Provenance-tagged volumes keyed by (kind, stratum, component).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VolumeDb {
    entries: BTreeMap<VolumeKey, VolumeRecord>,
}

/// One line of a database validation pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationLine {
    pub key: VolumeKey,
    pub check: &'static str,
    pub passed: bool,
    /// Informational lines never make the pass fail.
    pub informational: bool,
    pub detail: String,
}

fn labeling_factor(mults: impl Iterator<Item = u32>) -> Rational {
    mults.fold(Rational::one(), |acc, m| acc * Rational::from_integer(factorial(m)))
}

impl VolumeDb {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The database shipped with the crate.
    pub fn builtin() -> &'static VolumeDb {
        static DB: OnceLock<VolumeDb> = OnceLock::new();
        DB.get_or_init(|| VolumeDb::from_json(BUILTIN_JSON).expect("shipped volume database parses"))
    }

    pub fn builtin_json() -> &'static str {
        BUILTIN_JSON
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDb = serde_json::from_str(text).map_err(|e| Error::Database(format!("volume db: {e}")))?;
        let mut db = VolumeDb::empty();
        for e in raw.entries {
            let key = match e.kind {
                StratumKind::Quadratic => e.stratum.parse::<QuadStratum>()?.key(),
                StratumKind::Abelian => e.stratum.parse::<AbelianStratum>()?.key(),
            };
            if key != e.stratum {
                return Err(Error::Database(format!(
                    "stratum key `{}` is not canonical (expected `{key}`)",
                    e.stratum
                )));
            }
            if e.kind == StratumKind::Quadratic && e.area != Area::Half {
                return Err(Error::Database(format!("quadratic entry {key} must use area half")));
            }
            let coeff = parse_rational(&e.coeff, true)?;
            if !coeff.is_positive() {
                return Err(Error::Database(format!("entry {key}: coefficient must be positive")));
            }
            let vk = VolumeKey { kind: e.kind, stratum: key, component: e.component };
            if db.entries.contains_key(&vk) {
                return Err(Error::Database(format!("duplicate entry {vk}")));
            }
            db.entries.insert(
                vk,
                VolumeRecord {
                    value: PiValue::monomial(coeff, e.pi_exp),
                    area: e.area,
                    labeled: e.labeled,
                    exact: e.exact,
                    source: e.source,
                },
            );
        }
        Ok(db)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Database(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .entries
            .iter()
            .map(|(k, r)| {
                let (c, e) = r.value.as_monomial().expect("stored volumes are monomials");
                RawEntry {
                    stratum: k.stratum.clone(),
                    component: k.component,
                    kind: k.kind,
                    area: r.area,
                    labeled: r.labeled,
                    coeff: format_rational(c),
                    pi_exp: e,
                    exact: r.exact,
                    source: r.source.clone(),
                }
            })
            .collect();
        serde_json::to_string_pretty(&RawDb { entries }).expect("serializable")
    }

    /// Union of two databases; entries of `other` win.
    pub fn merge(&self, other: &VolumeDb) -> VolumeDb {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(k, v)| (k.clone(), v.clone())));
        VolumeDb { entries }
    }

    /// Copy with one quadratic entry added or replaced (area 1/2, labeled).
    pub fn with_quadratic(
        &self,
        s: &QuadStratum,
        component: ComponentTag,
        value: PiValue,
        source: &str,
    ) -> Result<VolumeDb> {
        match value.as_monomial() {
            Some((c, _)) if c.is_positive() => {}
            _ => return Err(Error::Database(format!("{s}: volumes must be positive monomials"))),
        }
        let mut entries = self.entries.clone();
        entries.insert(
            VolumeKey { kind: StratumKind::Quadratic, stratum: s.key(), component },
            VolumeRecord { value, area: Area::Half, labeled: true, exact: true, source: source.into() },
        );
        Ok(VolumeDb { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&VolumeKey, &VolumeRecord)> {
        self.entries.iter()
    }

    pub fn get(&self, key: &VolumeKey) -> Option<&VolumeRecord> {
        self.entries.get(key)
    }

    fn normalized(&self, key: &VolumeKey, rec: &VolumeRecord) -> Result<PiValue> {
        if !rec.exact {
            return Err(Error::InexactVolume(key.to_string()));
        }
        let mut v = rec.value.clone();
        if !rec.labeled {
            let f = match key.kind {
                StratumKind::Quadratic => {
                    let s: QuadStratum = key.stratum.parse()?;
                    labeling_factor(s.multiplicities().into_values())
                }
                StratumKind::Abelian => {
                    let s: AbelianStratum = key.stratum.parse()?;
                    let mut m: BTreeMap<u32, u32> = BTreeMap::new();
                    for &o in s.orders() {
                        *m.entry(o).or_insert(0) += 1;
                    }
                    labeling_factor(m.into_values())
                }
            };
            v = v.scale(&f);
        }
        if rec.area == Area::One {
            let s: AbelianStratum = key.stratum.parse()?;
            v = abelian_halfarea_from_unit(&v, s.dim_c());
        }
        Ok(v)
    }

    fn quad_candidates(s: &QuadStratum, component: ComponentTag) -> Vec<ComponentTag> {
        let mut c = vec![component];
        if s.is_connected_hyperelliptic() || s.genus() == 0 {
            match component {
                ComponentTag::Whole => c.push(ComponentTag::Hyp),
                ComponentTag::Hyp => c.push(ComponentTag::Whole),
                _ => {}
            }
        }
        c
    }

    /// Closed form for a quadratic stratum component, if the crate knows one.
    pub fn quad_closed_form(s: &QuadStratum, component: ComponentTag) -> Option<(PiValue, &'static str)> {
        if s.is_empty() {
            return None;
        }
        let k = s.orders().iter().filter(|&&o| o == 1).count() as u32;
        if component == ComponentTag::Whole && s.genus() == 0 && s.orders().iter().all(|&o| o == 1 || o == -1) {
            return Some((vol_genus0_principal(k), "genus-0 principal formula"));
        }
        let class = s.classify_hyperelliptic()?;
        let applies = match component {
            ComponentTag::Hyp => true,
            ComponentTag::Whole => class.connected,
            _ => false,
        };
        applies.then(|| (vol_hyp_quadratic(&class.spec), "hyperelliptic volume formula"))
    }

    /// Closed form for an Abelian stratum component (half-area), if known.
    pub fn abelian_closed_form(s: &AbelianStratum, component: ComponentTag) -> Option<(PiValue, &'static str)> {
        let applies = match component {
            ComponentTag::Hyp => true,
            ComponentTag::Whole => s.is_connected_hyperelliptic(),
            _ => false,
        };
        if !applies {
            return None;
        }
        let sig = s.hyperelliptic_signature()?;
        vol_hyp_abelian_halfarea(sig).ok().map(|v| (v, "hyperelliptic Abelian volume formula"))
    }

    /// Volume of a quadratic stratum component with its provenance, normalized
    /// to area 1/2 and labeled singularities.
    pub fn resolve_quad(&self, s: &QuadStratum, component: ComponentTag) -> Result<(PiValue, VolumeSource)> {
        if s.is_empty() {
            return Err(Error::EmptyStratum(s.to_string()));
        }
        for c in Self::quad_candidates(s, component) {
            let key = VolumeKey { kind: StratumKind::Quadratic, stratum: s.key(), component: c };
            if let Some(rec) = self.entries.get(&key) {
                return Ok((self.normalized(&key, rec)?, VolumeSource::Database(rec.source.clone())));
            }
        }
        for c in Self::quad_candidates(s, component) {
            if let Some((v, name)) = Self::quad_closed_form(s, c) {
                return Ok((v, VolumeSource::ClosedForm(name)));
            }
        }
        Err(Error::UnknownVolume(stratum_key(&s.key(), component)))
    }

    pub fn quad(&self, s: &QuadStratum, component: ComponentTag) -> Result<PiValue> {
        self.resolve_quad(s, component).map(|(v, _)| v)
    }

    /// Half-area, labeled volume of an Abelian stratum component.
    pub fn resolve_abelian(&self, s: &AbelianStratum, component: ComponentTag) -> Result<(PiValue, VolumeSource)> {
        let mut cands = vec![component];
        if s.is_connected_hyperelliptic() {
            match component {
                ComponentTag::Whole => cands.push(ComponentTag::Hyp),
                ComponentTag::Hyp => cands.push(ComponentTag::Whole),
                _ => {}
            }
        }
        for &c in &cands {
            let key = VolumeKey { kind: StratumKind::Abelian, stratum: s.key(), component: c };
            if let Some(rec) = self.entries.get(&key) {
                return Ok((self.normalized(&key, rec)?, VolumeSource::Database(rec.source.clone())));
            }
        }
        for &c in &cands {
            if let Some((v, name)) = Self::abelian_closed_form(s, c) {
                return Ok((v, VolumeSource::ClosedForm(name)));
            }
        }
        Err(Error::UnknownVolume(format!("{s}:{component}")))
    }

    pub fn abelian_halfarea(&self, s: &AbelianStratum, component: ComponentTag) -> Result<PiValue> {
        self.resolve_abelian(s, component).map(|(v, _)| v)
    }

    /// Lookup by quadratic key text such as `1,1,1,-1,-1,-1`.
    pub fn lookup(&self, key: &str, component: ComponentTag) -> Result<PiValue> {
        self.quad(&key.parse()?, component)
    }

    /// Checks every entry against its closed form and the pi-exponent rule.
    pub fn validate(&self) -> Vec<ValidationLine> {
        let mut out = Vec::new();
        for (key, rec) in &self.entries {
            let line = |check, passed, informational, detail: String| ValidationLine {
                key: key.clone(),
                check,
                passed,
                informational,
                detail,
            };
            let (closed, dim_exp) = match key.kind {
                StratumKind::Quadratic => {
                    let Ok(s) = key.stratum.parse::<QuadStratum>() else { continue };
                    (Self::quad_closed_form(&s, key.component), Some(s.volume_pi_exponent()))
                }
                StratumKind::Abelian => {
                    let Ok(s) = key.stratum.parse::<AbelianStratum>() else { continue };
                    (Self::abelian_closed_form(&s, key.component), None)
                }
            };
            if let Some(expected) = dim_exp {
                let (_, e) = rec.value.as_monomial().expect("stored volumes are monomials");
                out.push(line(
                    "pi exponent equals dim - #even zeros",
                    e == expected,
                    true,
                    format!("stored pi^{e}, rule gives pi^{expected}"),
                ));
            }
            if let Some((v, name)) = closed {
                match self.normalized(key, rec) {
                    Ok(stored) => out.push(line(
                        "matches closed form",
                        stored == v,
                        false,
                        format!("stored {stored}, {name} gives {v}"),
                    )),
                    Err(e) => out.push(line("matches closed form", false, false, e.to_string())),
                }
            }
        }
        out
    }
}
