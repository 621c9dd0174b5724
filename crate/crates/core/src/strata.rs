//! Strata of quadratic and Abelian differentials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Connected-component selector carried by stratum keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ComponentTag {
    #[default]
    Whole,
    Hyp,
    NonHyp,
    Reg,
    Irr,
}

impl ComponentTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentTag::Whole => "whole",
            ComponentTag::Hyp => "hyp",
            ComponentTag::NonHyp => "nonhyp",
            ComponentTag::Reg => "reg",
            ComponentTag::Irr => "irr",
        }
    }
}

impl fmt::Display for ComponentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "whole" => Ok(ComponentTag::Whole),
            "hyp" => Ok(ComponentTag::Hyp),
            "nonhyp" | "non" => Ok(ComponentTag::NonHyp),
            "reg" => Ok(ComponentTag::Reg),
            "irr" => Ok(ComponentTag::Irr),
            other => Err(Error::Parse(format!("unknown component `{other}`"))),
        }
    }
}

/// Parses `a,b,c` with optional `a^n` repetition shorthand.
pub fn parse_orders(s: &str) -> Result<Vec<i32>> {
    let mut out = Vec::new();
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(out);
    }
    for part in s.split(',') {
        let part = part.trim();
        let bad = || Error::Parse(format!("malformed order `{part}`"));
        let (base, rep) = match part.split_once('^') {
            Some((b, r)) => (b.trim(), r.trim().parse::<usize>().map_err(|_| bad())?),
            None => (part, 1),
        };
        let v: i32 = base.parse().map_err(|_| bad())?;
        out.extend(std::iter::repeat_n(v, rep));
    }
    Ok(out)
}

fn join_orders<T: fmt::Display>(orders: &[T]) -> String {
    orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",")
}

/// Stratum Q(alpha) of quadratic differentials. Orders are kept sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadStratum {
    orders: Vec<i32>,
}

impl QuadStratum {
    pub fn new(orders: impl IntoIterator<Item = i32>) -> Result<Self> {
        let mut orders: Vec<i32> = orders.into_iter().collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let key = join_orders(&orders);
        if orders.iter().any(|&o| o < -1 || o == 0) {
            return Err(Error::InvalidStratum(format!("Q({key}): orders must be -1 or positive")));
        }
        let sum: i64 = orders.iter().map(|&o| o as i64).sum();
        if sum.rem_euclid(4) != 0 || sum < -4 {
            return Err(Error::InvalidStratum(format!("Q({key}): order sum {sum} is not 4g-4 for a genus g >= 0")));
        }
        Ok(Self { orders })
    }

    /// Q(1^k, -1^l).
    pub fn principal(k: u32, l: u32) -> Result<Self> {
        Self::new(std::iter::repeat_n(1, k as usize).chain(std::iter::repeat_n(-1, l as usize)))
    }

    pub fn orders(&self) -> &[i32] {
        &self.orders
    }

    pub fn order_sum(&self) -> i64 {
        self.orders.iter().map(|&o| o as i64).sum()
    }

    pub fn genus(&self) -> u32 {
        ((self.order_sum() + 4) / 4) as u32
    }

    pub fn n(&self) -> u32 {
        self.orders.len() as u32
    }

    pub fn dim_c(&self) -> u32 {
        2 * self.genus() + self.n() - 2
    }

    pub fn pole_count(&self) -> u32 {
        self.orders.iter().filter(|&&o| o == -1).count() as u32
    }

    pub fn odd_count(&self) -> u32 {
        self.orders.iter().filter(|&&o| o % 2 != 0).count() as u32
    }

    pub fn even_count(&self) -> u32 {
        self.n() - self.odd_count()
    }

    /// Genus of the orientation double cover's anti-invariant part.
    pub fn effective_genus(&self) -> u32 {
        self.genus() + self.odd_count() / 2 - 1
    }

    /// Exponent of pi in the volume: `dim_c` minus the number of even zeros.
    pub fn volume_pi_exponent(&self) -> i32 {
        self.dim_c() as i32 - self.even_count() as i32
    }

    /// Multiplicity of every order value.
    pub fn multiplicities(&self) -> BTreeMap<i32, u32> {
        let mut m = BTreeMap::new();
        for &o in &self.orders {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }

    /// Strata that are empty: Q(), Q(1,-1), Q(3,1), Q(4).
    pub fn is_empty(&self) -> bool {
        matches!(self.orders.as_slice(), [] | [1, -1] | [3, 1] | [4])
    }

    pub fn key(&self) -> String {
        join_orders(&self.orders)
    }

    pub fn classify_hyperelliptic(&self) -> Option<HypClass> {
        let o = &self.orders;
        let spec = match o.len() {
            4 if o.iter().all(|x| x % 2 != 0) && o[0] == o[1] && o[2] == o[3] => {
                HypComponentSpec::new(HypKind::Type1, o[0], o[2]).ok()?
            }
            3 => {
                let (even, odd): (Vec<i32>, Vec<i32>) = o.iter().partition(|x| *x % 2 == 0);
                if even.len() != 1 || odd.len() != 2 || odd[0] != odd[1] || even[0] % 4 != 2 {
                    return None;
                }
                HypComponentSpec::new(HypKind::Type2, odd[0], (even[0] - 2) / 2).ok()?
            }
            2 if o.iter().all(|x| x % 4 == 2) => {
                HypComponentSpec::new(HypKind::Type3, (o[0] - 2) / 2, (o[1] - 2) / 2).ok()?
            }
            _ => return None,
        };
        let connected = matches!(o.as_slice(), [1, 1, -1, -1] | [2, -1, -1] | [1, 1, 1, 1] | [2, 1, 1] | [2, 2]);
        Some(HypClass { spec, connected })
    }

    /// True for the strata that are connected and coincide with their hyperelliptic component.
    pub fn is_connected_hyperelliptic(&self) -> bool {
        self.classify_hyperelliptic().is_some_and(|c| c.connected)
    }
}

impl fmt::Display for QuadStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({})", self.key())
    }
}

impl FromStr for QuadStratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('Q').unwrap_or(s);
        Self::new(parse_orders(s)?)
    }
}

/// Stratum H(beta) of Abelian differentials; order 0 marks a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianStratum {
    orders: Vec<u32>,
}

impl AbelianStratum {
    pub fn new(orders: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut orders: Vec<u32> = orders.into_iter().collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let key = join_orders(&orders);
        if orders.is_empty() {
            return Err(Error::InvalidStratum("H(): at least one singularity required".into()));
        }
        let sum: u64 = orders.iter().map(|&o| o as u64).sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::InvalidStratum(format!("H({key}): order sum {sum} is odd")));
        }
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn genus(&self) -> u32 {
        let sum: u32 = self.orders.iter().sum();
        sum / 2 + 1
    }

    pub fn dim_c(&self) -> u32 {
        2 * self.genus() - 1 + self.orders.len() as u32
    }

    pub fn key(&self) -> String {
        join_orders(&self.orders)
    }

    /// Signature of the hyperelliptic component, when the orders fit one.
    pub fn hyperelliptic_signature(&self) -> Option<AbelianHypSignature> {
        match self.orders.as_slice() {
            [a] if a % 2 == 0 => Some(AbelianHypSignature::SingleZero(a + 1)),
            [a, b] if a == b => Some(AbelianHypSignature::Pair(2 * a + 2)),
            _ => None,
        }
    }

    /// H(0), H(2) and H(1,1) are connected and hyperelliptic.
    pub fn is_connected_hyperelliptic(&self) -> bool {
        matches!(self.orders.as_slice(), [0] | [2] | [1, 1])
    }
}

impl fmt::Display for AbelianStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", self.key())
    }
}

impl FromStr for AbelianStratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('H').unwrap_or(s);
        let orders = parse_orders(s)?;
        if orders.iter().any(|&o| o < 0) {
            return Err(Error::InvalidStratum(format!("H({s}): negative order")));
        }
        Self::new(orders.into_iter().map(|o| o as u32))
    }
}

/// Hyperelliptic Abelian signatures, indexed by the `k` of the volume formulas.
///
/// `SingleZero(k)` is H(k-1) with k odd; `Pair(k)` is H(k/2-1, k/2-1) with k even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbelianHypSignature {
    SingleZero(u32),
    Pair(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HypKind {
    Type1,
    Type2,
    Type3,
}

impl FromStr for HypKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "type1" => Ok(HypKind::Type1),
            "2" | "type2" => Ok(HypKind::Type2),
            "3" | "type3" => Ok(HypKind::Type3),
            other => Err(Error::Parse(format!("unknown hyperelliptic type `{other}`"))),
        }
    }
}

/// Parameters of a hyperelliptic component.
///
/// Type1 is Q(k1^2, k2^2), Type2 is Q(k1^2, 2k2+2), Type3 is Q(2k1+2, 2k2+2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypComponentSpec {
    pub kind: HypKind,
    pub k1: i32,
    pub k2: i32,
}

impl HypComponentSpec {
    /// Validates and canonicalizes (`k1 >= k2` for the symmetric types).
    pub fn new(kind: HypKind, k1: i32, k2: i32) -> Result<Self> {
        let odd = |k: i32| k >= -1 && k % 2 != 0;
        let even = |k: i32| k >= 0 && k % 2 == 0;
        let ok = match kind {
            HypKind::Type1 => odd(k1) && odd(k2) && (k1, k2) != (-1, -1),
            HypKind::Type2 => odd(k1) && even(k2),
            HypKind::Type3 => even(k1) && even(k2),
        };
        if !ok {
            return Err(Error::InvalidStratum(format!(
                "no hyperelliptic component {kind:?} with (k1, k2) = ({k1}, {k2})"
            )));
        }
        let (k1, k2) = match kind {
            HypKind::Type2 => (k1, k2),
            _ => (k1.max(k2), k1.min(k2)),
        };
        Ok(Self { kind, k1, k2 })
    }

    pub fn dim(&self) -> u32 {
        (self.k1 + self.k2 + 4) as u32
    }

    pub fn signature(&self) -> QuadStratum {
        let (k1, k2) = (self.k1, self.k2);
        let orders = match self.kind {
            HypKind::Type1 => vec![k1, k1, k2, k2],
            HypKind::Type2 => vec![k1, k1, 2 * k2 + 2],
            HypKind::Type3 => vec![2 * k1 + 2, 2 * k2 + 2],
        };
        QuadStratum::new(orders).expect("validated hyperelliptic signature")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HypClass {
    pub spec: HypComponentSpec,
    /// The whole stratum is connected and equals its hyperelliptic component.
    pub connected: bool,
}

/// One surface of a boundary stratum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryComponent {
    Quad { stratum: QuadStratum, component: ComponentTag },
    Abelian { stratum: AbelianStratum, component: ComponentTag },
}

impl BoundaryComponent {
    pub fn quad(stratum: QuadStratum) -> Self {
        BoundaryComponent::Quad { stratum, component: ComponentTag::Whole }
    }

    pub fn abelian(stratum: AbelianStratum) -> Self {
        BoundaryComponent::Abelian { stratum, component: ComponentTag::Whole }
    }

    pub fn dim_c(&self) -> u32 {
        match self {
            BoundaryComponent::Quad { stratum, .. } => stratum.dim_c(),
            BoundaryComponent::Abelian { stratum, .. } => stratum.dim_c(),
        }
    }
}

impl fmt::Display for BoundaryComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryComponent::Quad { stratum, component } => write!(f, "{stratum}:{component}"),
            BoundaryComponent::Abelian { stratum, component } => write!(f, "{stratum}:{component}"),
        }
    }
}

/// Union of the strata the complementary surfaces degenerate to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoundaryStratum {
    pub components: Vec<BoundaryComponent>,
    pub hyperelliptic_restricted: bool,
}

impl BoundaryStratum {
    pub fn new(components: Vec<BoundaryComponent>) -> Self {
        Self { components, hyperelliptic_restricted: false }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn dim_c(&self) -> u32 {
        self.components.iter().map(BoundaryComponent::dim_c).sum()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Canonical `orders:component` key.
pub fn stratum_key(orders_key: &str, component: ComponentTag) -> String {
    format!("{orders_key}:{component}")
}

/// Splits `1,1,-1,-1:hyp` into orders and component (default `whole`).
pub fn split_key(s: &str) -> Result<(Vec<i32>, ComponentTag)> {
    match s.rsplit_once(':') {
        Some((o, c)) => Ok((parse_orders(o)?, c.parse()?)),
        None => Ok((parse_orders(s)?, ComponentTag::Whole)),
    }
}
