//! Configurations of homologous saddle connections and their combinatorial
//! constants M_c, M_t, M_s, |Gamma| and N.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, format_rational, int, parse_rational, rat, Rational};
use crate::strata::{AbelianStratum, BoundaryComponent, BoundaryStratum, ComponentTag, QuadStratum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Holonomy {
    Trivial,
    Nontrivial,
}

/// Surgery data of one boundary surface: the sum of the decorations `k_i`
/// along each of its boundary components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgeryData {
    pub holonomy: Holonomy,
    pub boundary_components: Vec<u32>,
}

impl SurgeryData {
    pub fn new(holonomy: Holonomy, boundary_components: Vec<u32>) -> Self {
        Self { holonomy, boundary_components }
    }

    /// `prod sum k_i` (nontrivial holonomy) or `2 prod sum k_i/2` (trivial).
    pub fn k_factor(&self) -> Rational {
        match self.holonomy {
            Holonomy::Nontrivial => {
                self.boundary_components.iter().fold(Rational::one(), |acc, &s| acc * int(s as i64))
            }
            Holonomy::Trivial => self.boundary_components.iter().fold(int(2), |acc, &s| acc * rat(s as i64, 2)),
        }
    }
}

/// Which singularities sit inside which boundary surface and which are born
/// from the collapsed saddle connections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labeling {
    pub interior: Vec<Vec<i32>>,
    pub newborn: Vec<Vec<i32>>,
    #[serde(default)]
    pub symmetry_halving: bool,
}

impl Labeling {
    fn groups(&self) -> impl Iterator<Item = &Vec<i32>> {
        self.interior.iter().chain(self.newborn.iter())
    }

    /// Checks that the groups partition the ambient orders.
    pub fn check_partition(&self, ambient: &QuadStratum) -> Result<()> {
        let mut all: Vec<i32> = self.groups().flatten().copied().collect();
        all.sort_unstable_by(|a, b| b.cmp(a));
        if all != ambient.orders() {
            return Err(Error::InvalidConfiguration(format!(
                "labeling groups {all:?} do not partition the orders of {ambient}"
            )));
        }
        Ok(())
    }

    /// Number of ways to name the singularities: for every order value, the
    /// multinomial of its multiplicity over the groups; halved on symmetry.
    pub fn count(&self, ambient: &QuadStratum) -> Result<Rational> {
        self.check_partition(ambient)?;
        let mut total = BigInt::one();
        for (value, mult) in ambient.multiplicities() {
            let mut den = BigInt::one();
            for g in self.groups() {
                den *= factorial(g.iter().filter(|&&o| o == value).count() as u32);
            }
            total *= factorial(mult) / den;
        }
        let mut n = Rational::from_integer(total);
        if self.symmetry_halving {
            n /= int(2);
        }
        Ok(n)
    }
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    ambient: QuadStratum,
    ambient_component: ComponentTag,
    boundary: BoundaryStratum,
    q1: u32,
    q2: u32,
    graph_type_a: bool,
    thick_symmetry_orders: Vec<u32>,
    surgery: Option<Vec<SurgeryData>>,
    gamma_factors: Option<Vec<u32>>,
    m_s_override: Option<Rational>,
    gamma_override: Option<u32>,
    labeling: Option<Labeling>,
    n_override: Option<Rational>,
}

/// Builder for [`Configuration`]; `build` enforces every invariant.
#[derive(Clone, Debug)]
pub struct ConfigurationBuilder {
    inner: Configuration,
}

impl ConfigurationBuilder {
    pub fn ambient_component(mut self, c: ComponentTag) -> Self {
        self.inner.ambient_component = c;
        self
    }

    pub fn graph_type_a(mut self, yes: bool) -> Self {
        self.inner.graph_type_a = yes;
        self
    }

    pub fn thick_symmetry_orders(mut self, orders: Vec<u32>) -> Self {
        self.inner.thick_symmetry_orders = orders;
        self
    }

    pub fn surgery(mut self, surgery: Vec<SurgeryData>) -> Self {
        self.inner.surgery = Some(surgery);
        self
    }

    pub fn gamma_factors(mut self, gamma: Vec<u32>) -> Self {
        self.inner.gamma_factors = Some(gamma);
        self
    }

    pub fn m_s_override(mut self, m_s: Rational) -> Self {
        self.inner.m_s_override = Some(m_s);
        self
    }

    pub fn gamma_override(mut self, gamma: u32) -> Self {
        self.inner.gamma_override = Some(gamma);
        self
    }

    pub fn labeling(mut self, labeling: Labeling) -> Self {
        self.inner.labeling = Some(labeling);
        self
    }

    pub fn n_override(mut self, n: Rational) -> Self {
        self.inner.n_override = Some(n);
        self
    }

    pub fn build(self) -> Result<Configuration> {
        let c = self.inner;
        let bad = |m: String| Err(Error::InvalidConfiguration(m));
        let q = c.q1 + c.q2;
        if q == 0 {
            return bad("at least one cylinder is required (q1 + q2 >= 1)".into());
        }
        let (d, n_s) = (c.ambient.dim_c(), c.boundary.dim_c());
        if d != n_s + q + 1 {
            return bad(format!(
                "dimension mismatch: dim {} = {d}, boundary {n_s} + q {q} + 1 = {}",
                c.ambient,
                n_s + q + 1
            ));
        }
        if c.thick_symmetry_orders.len() != c.q2 as usize {
            return bad(format!("{} thick symmetry orders given for q2 = {}", c.thick_symmetry_orders.len(), c.q2));
        }
        if c.thick_symmetry_orders.iter().any(|o| !matches!(o, 1 | 2)) {
            return bad("thick cylinder symmetry orders must be 1 or 2".into());
        }
        let m = c.boundary.len();
        if m == 0
            && (c.surgery.is_some()
                || c.gamma_factors.is_some()
                || c.gamma_override.is_some()
                || c.m_s_override.is_some())
        {
            return bad("surgery, symmetry and M_s data must be absent for an empty boundary".into());
        }
        if let Some(s) = &c.surgery {
            if s.len() != m {
                return bad(format!("{} surgery entries for {m} boundary surfaces", s.len()));
            }
        }
        if let Some(g) = &c.gamma_factors {
            if g.len() != m {
                return bad(format!("{} gamma factors for {m} boundary surfaces", g.len()));
            }
            if g.iter().any(|x| !matches!(x, 1 | 2)) {
                return bad("gamma factors must be 1 or 2".into());
            }
        }
        if c.gamma_override == Some(0) {
            return bad("|Gamma| must be positive".into());
        }
        for (name, v) in [("M_s", &c.m_s_override), ("N", &c.n_override)] {
            if v.as_ref().is_some_and(|v| !v.is_positive()) {
                return bad(format!("{name} override must be positive"));
            }
        }
        if let Some(l) = &c.labeling {
            l.check_partition(&c.ambient)?;
        }
        Ok(c)
    }
}

impl Configuration {
    pub fn builder(ambient: QuadStratum, boundary: BoundaryStratum, q1: u32, q2: u32) -> ConfigurationBuilder {
        ConfigurationBuilder {
            inner: Configuration {
                ambient,
                ambient_component: ComponentTag::Whole,
                boundary,
                q1,
                q2,
                graph_type_a: false,
                thick_symmetry_orders: vec![1; q2 as usize],
                surgery: None,
                gamma_factors: None,
                m_s_override: None,
                gamma_override: None,
                labeling: None,
                n_override: None,
            },
        }
    }

    /// The same configuration with every volume read from hyperelliptic components.
    pub fn restricted_to_hyperelliptic(&self) -> Configuration {
        let mut c = self.clone();
        c.boundary.hyperelliptic_restricted = true;
        c.ambient_component = ComponentTag::Hyp;
        c
    }

    pub fn ambient(&self) -> &QuadStratum {
        &self.ambient
    }

    pub fn ambient_component(&self) -> ComponentTag {
        self.ambient_component
    }

    pub fn boundary(&self) -> &BoundaryStratum {
        &self.boundary
    }

    pub fn q1(&self) -> u32 {
        self.q1
    }

    pub fn q2(&self) -> u32 {
        self.q2
    }

    pub fn q(&self) -> u32 {
        self.q1 + self.q2
    }

    pub fn graph_type_a(&self) -> bool {
        self.graph_type_a
    }

    pub fn labeling(&self) -> Option<&Labeling> {
        self.labeling.as_ref()
    }

    /// `4^q` for graphs of type a, `4^(q+1)` otherwise.
    pub fn m_c(&self) -> BigInt {
        let e = if self.graph_type_a { self.q() } else { self.q() + 1 };
        BigInt::from(4).pow(e)
    }

    pub fn m_t(&self) -> BigInt {
        self.thick_symmetry_orders.iter().fold(BigInt::one(), |acc, &o| acc * o)
    }

    /// `|Gamma(C)|`, from the override or the product of per-surface factors.
    pub fn gamma(&self) -> Result<BigInt> {
        if let Some(g) = self.gamma_override {
            return Ok(BigInt::from(g));
        }
        if self.boundary.is_empty() {
            return Ok(BigInt::one());
        }
        self.gamma_factors
            .as_ref()
            .map(|g| g.iter().fold(BigInt::one(), |acc, &x| acc * x))
            .ok_or_else(|| Error::InvalidConfiguration("missing symmetry data for |Gamma|".into()))
    }

    /// `M_s = K / |Gamma(C)|`.
    pub fn m_s(&self) -> Result<Rational> {
        if let Some(m) = &self.m_s_override {
            return Ok(m.clone());
        }
        if self.boundary.is_empty() {
            return Ok(Rational::one());
        }
        let surgery =
            self.surgery.as_ref().ok_or_else(|| Error::InvalidConfiguration("missing surgery data for M_s".into()))?;
        let k = surgery.iter().fold(Rational::one(), |acc, s| acc * s.k_factor());
        Ok(k / Rational::from_integer(self.gamma()?))
    }

    /// `M = M_s M_c / M_t`.
    pub fn combined_m(&self) -> Result<Rational> {
        Ok(self.m_s()? * Rational::from_integer(self.m_c()) / Rational::from_integer(self.m_t()))
    }

    /// `N(C)`, from the override or the labeling data.
    pub fn count_labelings(&self) -> Result<Rational> {
        if let Some(n) = &self.n_override {
            return Ok(n.clone());
        }
        self.labeling
            .as_ref()
            .ok_or_else(|| Error::InvalidConfiguration("missing labeling data for N".into()))?
            .count(&self.ambient)
    }

    /// `N(C)` when labeling information is available, otherwise 1.
    pub fn multiplicity(&self) -> Result<Rational> {
        if self.n_override.is_none() && self.labeling.is_none() {
            return Ok(Rational::one());
        }
        self.count_labelings()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfiguration =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("configuration: {e}")))?;
        raw.into_configuration()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawConfiguration::from(self)).expect("serializable")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Quadratic,
    Abelian,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    kind: RawKind,
    stratum: String,
    #[serde(default)]
    component: ComponentTag,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfiguration {
    ambient: String,
    #[serde(default)]
    ambient_component: ComponentTag,
    #[serde(default)]
    boundary: Vec<RawBoundary>,
    #[serde(default)]
    hyperelliptic_restricted: bool,
    q1: u32,
    q2: u32,
    #[serde(default)]
    graph_type_a: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thick_symmetry_orders: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surgery: Option<Vec<SurgeryData>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma_factors: Option<Vec<u32>>,
    #[serde(rename = "M_s", default, skip_serializing_if = "Option::is_none")]
    m_s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<u32>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labeling: Option<Labeling>,
}

impl RawConfiguration {
    fn into_configuration(self) -> Result<Configuration> {
        let ambient: QuadStratum = self.ambient.parse()?;
        let mut components = Vec::new();
        for b in self.boundary {
            components.push(match b.kind {
                RawKind::Quadratic => BoundaryComponent::Quad { stratum: b.stratum.parse()?, component: b.component },
                RawKind::Abelian => {
                    BoundaryComponent::Abelian { stratum: b.stratum.parse::<AbelianStratum>()?, component: b.component }
                }
            });
        }
        let boundary = BoundaryStratum { components, hyperelliptic_restricted: self.hyperelliptic_restricted };
        let mut b = Configuration::builder(ambient, boundary, self.q1, self.q2)
            .ambient_component(self.ambient_component)
            .graph_type_a(self.graph_type_a);
        if let Some(t) = self.thick_symmetry_orders {
            b = b.thick_symmetry_orders(t);
        }
        if let Some(s) = self.surgery {
            b = b.surgery(s);
        }
        if let Some(g) = self.gamma_factors {
            b = b.gamma_factors(g);
        }
        if let Some(m) = self.m_s {
            b = b.m_s_override(parse_rational(&m, false)?);
        }
        if let Some(g) = self.gamma {
            b = b.gamma_override(g);
        }
        if let Some(n) = self.n {
            b = b.n_override(parse_rational(&n, false)?);
        }
        if let Some(l) = self.labeling {
            b = b.labeling(l);
        }
        b.build()
    }
}

impl From<&Configuration> for RawConfiguration {
    fn from(c: &Configuration) -> Self {
        let boundary = c
            .boundary
            .components
            .iter()
            .map(|b| match b {
                BoundaryComponent::Quad { stratum, component } => {
                    RawBoundary { kind: RawKind::Quadratic, stratum: stratum.key(), component: *component }
                }
                BoundaryComponent::Abelian { stratum, component } => {
                    RawBoundary { kind: RawKind::Abelian, stratum: stratum.key(), component: *component }
                }
            })
            .collect();
        RawConfiguration {
            ambient: c.ambient.key(),
            ambient_component: c.ambient_component,
            boundary,
            hyperelliptic_restricted: c.boundary.hyperelliptic_restricted,
            q1: c.q1,
            q2: c.q2,
            graph_type_a: c.graph_type_a,
            thick_symmetry_orders: Some(c.thick_symmetry_orders.clone()),
            surgery: c.surgery.clone(),
            gamma_factors: c.gamma_factors.clone(),
            m_s: c.m_s_override.as_ref().map(format_rational),
            gamma: c.gamma_override,
            n: c.n_override.as_ref().map(format_rational),
            labeling: c.labeling.clone(),
        }
    }
}

/// Multiplicity map helper shared by callers building labelings.
pub fn repeat_orders(spec: &[(i32, u32)]) -> Vec<i32> {
    let mut m: BTreeMap<i32, u32> = BTreeMap::new();
    for &(o, n) in spec {
        *m.entry(o).or_insert(0) += n;
    }
    m.into_iter().rev().flat_map(|(o, n)| std::iter::repeat_n(o, n as usize)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadStratum {
        s.parse().unwrap()
    }

    fn c4_on_133() -> ConfigurationBuilder {
        let boundary = BoundaryStratum::new(vec![BoundaryComponent::quad(q("1^2,-1^2"))]);
        Configuration::builder(q("1^3,-1^3"), boundary, 0, 1)
    }

    #[test]
    fn m_c_values() {
        let b = BoundaryStratum::new(vec![BoundaryComponent::quad(q("1^3,-1^3"))]);
        let a = Configuration::builder(q("1^5,-1"), b.clone(), 1, 0).graph_type_a(true).build().unwrap();
        assert_eq!(a.m_c(), BigInt::from(4));
        let n = Configuration::builder(q("1^5,-1"), b, 1, 0).build().unwrap();
        assert_eq!(n.m_c(), BigInt::from(16));
        let b2 = BoundaryStratum::new(vec![BoundaryComponent::quad(q("-1^4"))]);
        let three = Configuration::builder(q("1^3,-1^3"), b2, 3, 0).build().unwrap();
        assert_eq!(three.m_c(), BigInt::from(256));
    }

    #[test]
    fn m_t_values() {
        assert_eq!(c4_on_133().build().unwrap().m_t(), BigInt::from(1));
        let b = BoundaryStratum::new(vec![BoundaryComponent::quad(q("-1^4"))]);
        let c = Configuration::builder(q("1^3,-1^3"), b, 1, 2).thick_symmetry_orders(vec![2, 2]).build().unwrap();
        assert_eq!(c.m_t(), BigInt::from(4));
        let b = BoundaryStratum::new(vec![BoundaryComponent::quad(q("-1^4"))]);
        assert!(Configuration::builder(q("1^3,-1^3"), b, 1, 2).thick_symmetry_orders(vec![3, 1]).build().is_err());
    }

    #[test]
    fn m_s_values() {
        // quadratic surface plus a torus with two rays and |Gamma| = 2
        let boundary = BoundaryStratum::new(vec![
            BoundaryComponent::quad(q("-1^4")),
            BoundaryComponent::abelian("0".parse().unwrap()),
        ]);
        let c = Configuration::builder(q("1^3,-1^3"), boundary, 0, 1)
            .surgery(vec![
                SurgeryData::new(Holonomy::Nontrivial, vec![1]),
                SurgeryData::new(Holonomy::Trivial, vec![2]),
            ])
            .gamma_factors(vec![1, 2])
            .build()
            .unwrap();
        assert_eq!(c.m_s().unwrap(), rat(1, 1));
        assert_eq!(c.combined_m().unwrap(), rat(16, 1));

        let c = c4_on_133()
            .surgery(vec![SurgeryData::new(Holonomy::Nontrivial, vec![3, 5])])
            .gamma_factors(vec![1])
            .build()
            .unwrap();
        assert_eq!(c.m_s().unwrap(), rat(15, 1));
        assert!(c4_on_133().build().unwrap().m_s().is_err());
        assert_eq!(c4_on_133().m_s_override(rat(3, 1)).build().unwrap().m_s().unwrap(), rat(3, 1));
    }

    #[test]
    fn labeling_counts() {
        let alpha = q("9,9,2,2,-1,-1");
        let l = Labeling {
            interior: vec![vec![-1, -1], vec![2], vec![2]],
            newborn: vec![vec![9], vec![9]],
            symmetry_halving: true,
        };
        assert_eq!(l.count(&alpha).unwrap(), rat(2, 1));

        // C2 family in Q(1^k, -1^l)
        for (k, l) in [(3u32, 3u32), (5, 1), (6, 2)] {
            let amb = QuadStratum::principal(k, l).unwrap();
            let lab = Labeling {
                interior: vec![repeat_orders(&[(1, k - 2), (-1, l)])],
                newborn: vec![vec![1], vec![1]],
                symmetry_halving: true,
            };
            assert_eq!(lab.count(&amb).unwrap(), rat((k * (k - 1) / 2) as i64, 1));
        }

        let distinct = Labeling { interior: vec![vec![5], vec![2]], newborn: vec![vec![1]], symmetry_halving: false };
        assert_eq!(distinct.count(&q("5,2,1")).unwrap(), rat(1, 1));
    }

    #[test]
    fn labeling_partition_mismatch() {
        let l = Labeling { interior: vec![vec![1, 1]], newborn: vec![vec![-1]], symmetry_halving: false };
        assert!(l.count(&q("1^2,-1^2")).is_err());
    }

    #[test]
    fn dimension_bookkeeping() {
        let boundary = BoundaryStratum::new(vec![BoundaryComponent::quad(q("1^2,-1^2"))]);
        assert!(Configuration::builder(q("1^3,-1^3"), boundary.clone(), 1, 1).build().is_err());
        assert!(Configuration::builder(q("1^3,-1^3"), boundary, 0, 0).build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{
            "ambient": "1,1,1,-1,-1,-1",
            "boundary": [{"kind": "quadratic", "stratum": "1,1,-1,-1"}],
            "q1": 0, "q2": 1,
            "surgery": [{"holonomy": "nontrivial", "boundary_components": [1]}],
            "gamma_factors": [1],
            "labeling": {"interior": [[1,1,-1]], "newborn": [[1], [-1,-1]]}
        }"#;
        let c = Configuration::from_json(text).unwrap();
        assert_eq!(c.count_labelings().unwrap(), rat(9, 1));
        assert_eq!(c.combined_m().unwrap(), rat(16, 1));
        assert_eq!(Configuration::from_json(&c.to_json()).unwrap(), c);
        assert!(Configuration::from_json(r#"{"ambient":"1,1,1,-1,-1,-1","q1":1,"q2":0,"bogus":1}"#).is_err());
    }
}
