//! Built-in configuration families: the four-configuration recursion for the
//! principal strata Q(1^k, -1^l), and hyperelliptic components.

use std::fmt;

use num_traits::Zero;

use crate::config::{repeat_orders, Configuration, Holonomy, Labeling, SurgeryData};
use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, rat, PiValue, Rational};
use crate::strata::{
    AbelianStratum, BoundaryComponent, BoundaryStratum, ComponentTag, HypComponentSpec, HypKind, QuadStratum,
};
use crate::svcore::sv_constants;
use crate::volumes::VolumeDb;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrincipalFamily {
    /// One thin cylinder separating Q(1^k1, -1^l1) from Q(1^k2, -1^l2).
    C1 { k1: u32, l1: u32 },
    /// One thin cylinder, both ends glued to Q(1^(k-2), -1^(l+2)).
    C2,
    /// One thick cylinder with a torus H(0), boundary Q(1^(k-3), -1^(l+1)).
    C3,
    /// One thick cylinder ending in a pair of poles, boundary Q(1^(k-1), -1^(l-1)).
    C4,
}

impl fmt::Display for PrincipalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrincipalFamily::C1 { k1, l1 } => write!(f, "C1({k1},{l1})"),
            PrincipalFamily::C2 => f.write_str("C2"),
            PrincipalFamily::C3 => f.write_str("C3"),
            PrincipalFamily::C4 => f.write_str("C4"),
        }
    }
}

/// A configuration of the principal family together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalConfig {
    pub family: PrincipalFamily,
    pub k: u32,
    pub l: u32,
    /// N(C); for C1 the ordered-pair factor 1/2 is folded in.
    pub multiplicity: Rational,
}

fn principal_dim(k: u32, l: u32) -> u32 {
    (3 * k + l) / 2
}

fn side_ok(k: u32, l: u32) -> bool {
    let diff = k as i64 - l as i64;
    l >= 1 && diff.rem_euclid(4) == 0 && diff >= -4 && QuadStratum::principal(k, l).is_ok_and(|s| !s.is_empty())
}

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Validates `(k, l)` for the four-configuration recursion.
pub fn check_principal(k: u32, l: u32) -> Result<QuadStratum> {
    if k < l {
        return Err(Error::Domain(format!("Q(1^{k}, -1^{l}) has genus 0; the recursion needs genus >= 1")));
    }
    let s = QuadStratum::principal(k, l)?;
    if s.is_empty() {
        return Err(Error::EmptyStratum(s.to_string()));
    }
    if matches!((k, l), (2, 2) | (4, 0)) {
        return Err(Error::Domain(format!("{s} is hyperelliptic and connected; use the hyperelliptic formulas")));
    }
    Ok(s)
}

/// All configurations with cylinders in Q(1^k, -1^l) and their multiplicities.
pub fn enumerate_principal(k: u32, l: u32) -> Result<Vec<PrincipalConfig>> {
    check_principal(k, l)?;
    let mut out = Vec::new();
    let push =
        |out: &mut Vec<PrincipalConfig>, family, multiplicity| out.push(PrincipalConfig { family, k, l, multiplicity });
    if k >= 2 {
        for k1 in 0..=k - 2 {
            for l1 in 1..=l + 1 {
                let (k2, l2) = (k - 2 - k1, l + 2 - l1);
                if side_ok(k1, l1) && side_ok(k2, l2) {
                    let m = rat(1, 2) * fact(k) * fact(l) / (fact(k1) * fact(k2) * fact(l1 - 1) * fact(l2 - 1));
                    push(&mut out, PrincipalFamily::C1 { k1, l1 }, m);
                }
            }
        }
        if QuadStratum::principal(k - 2, l + 2).is_ok_and(|s| !s.is_empty()) {
            push(&mut out, PrincipalFamily::C2, int((k * (k - 1) / 2) as i64));
        }
    }
    if k >= 3 && QuadStratum::principal(k - 3, l + 1).is_ok_and(|s| !s.is_empty()) {
        push(&mut out, PrincipalFamily::C3, int((k * (k - 1) * (k - 2) / 2) as i64));
    }
    if l >= 2 && k >= 1 && QuadStratum::principal(k - 1, l - 1).is_ok_and(|s| !s.is_empty()) {
        push(&mut out, PrincipalFamily::C4, int((k * l * (l - 1) / 2) as i64));
    }
    Ok(out)
}

impl PrincipalConfig {
    pub fn ambient(&self) -> QuadStratum {
        QuadStratum::principal(self.k, self.l).expect("validated principal stratum")
    }

    pub fn dim(&self) -> u32 {
        principal_dim(self.k, self.l)
    }

    /// Quadratic boundary strata as `(k_i, l_i)` pairs.
    pub fn boundary_params(&self) -> Vec<(u32, u32)> {
        let (k, l) = (self.k, self.l);
        match self.family {
            PrincipalFamily::C1 { k1, l1 } => vec![(k1, l1), (k - 2 - k1, l + 2 - l1)],
            PrincipalFamily::C2 => vec![(k - 2, l + 2)],
            PrincipalFamily::C3 => vec![(k - 3, l + 1)],
            PrincipalFamily::C4 => vec![(k - 1, l - 1)],
        }
    }

    /// The same configuration as generic descriptor data for the configuration engine.
    pub fn to_configuration(&self) -> Result<Configuration> {
        let (k, l) = (self.k, self.l);
        let quad = |(a, b): (u32, u32)| QuadStratum::principal(a, b).map(BoundaryComponent::quad);
        let params = self.boundary_params();
        let nontrivial = |sums: Vec<u32>| SurgeryData::new(Holonomy::Nontrivial, sums);
        let builder = match self.family {
            PrincipalFamily::C1 { k1, l1 } => {
                let (k2, l2) = params[1];
                let boundary = BoundaryStratum::new(vec![quad(params[0])?, quad(params[1])?]);
                Configuration::builder(self.ambient(), boundary, 1, 0)
                    .graph_type_a(true)
                    .surgery(vec![nontrivial(vec![1]), nontrivial(vec![1])])
                    .gamma_factors(vec![1, 1])
                    .labeling(Labeling {
                        interior: vec![
                            repeat_orders(&[(1, k1), (-1, l1 - 1)]),
                            repeat_orders(&[(1, k2), (-1, l2 - 1)]),
                        ],
                        newborn: vec![vec![1], vec![1]],
                        symmetry_halving: (k1, l1) == (k2, l2),
                    })
            }
            PrincipalFamily::C2 => {
                let boundary = BoundaryStratum::new(vec![quad(params[0])?]);
                Configuration::builder(self.ambient(), boundary, 1, 0)
                    .surgery(vec![nontrivial(vec![1, 1])])
                    .gamma_factors(vec![1])
                    .labeling(Labeling {
                        interior: vec![repeat_orders(&[(1, k - 2), (-1, l)])],
                        newborn: vec![vec![1], vec![1]],
                        symmetry_halving: true,
                    })
            }
            PrincipalFamily::C3 => {
                let torus = BoundaryComponent::abelian(AbelianStratum::new([0])?);
                let boundary = BoundaryStratum::new(vec![quad(params[0])?, torus]);
                Configuration::builder(self.ambient(), boundary, 0, 1)
                    .thick_symmetry_orders(vec![1])
                    .surgery(vec![nontrivial(vec![1]), SurgeryData::new(Holonomy::Trivial, vec![2])])
                    .gamma_factors(vec![1, 2])
                    .labeling(Labeling {
                        interior: vec![repeat_orders(&[(1, k - 3), (-1, l)]), vec![]],
                        newborn: vec![vec![1, 1], vec![1]],
                        symmetry_halving: false,
                    })
            }
            PrincipalFamily::C4 => {
                let boundary = BoundaryStratum::new(vec![quad(params[0])?]);
                Configuration::builder(self.ambient(), boundary, 0, 1)
                    .thick_symmetry_orders(vec![1])
                    .surgery(vec![nontrivial(vec![1])])
                    .gamma_factors(vec![1])
                    .labeling(Labeling {
                        interior: vec![repeat_orders(&[(1, k - 1), (-1, l - 2)])],
                        newborn: vec![vec![1], vec![-1, -1]],
                        symmetry_halving: false,
                    })
            }
        };
        builder.build()
    }
}

/// `c_area` of one principal configuration from the closed forms.
pub fn c_area_principal_config(cfg: &PrincipalConfig, db: &VolumeDb) -> Result<PiValue> {
    let d = cfg.dim();
    let vol = db.quad(&cfg.ambient(), ComponentTag::Whole)?;
    let bvol = |(a, b): (u32, u32)| -> Result<PiValue> { db.quad(&QuadStratum::principal(a, b)?, ComponentTag::Whole) };
    let params = cfg.boundary_params();
    let (coeff, num) = match cfg.family {
        PrincipalFamily::C1 { .. } => {
            let (d1, d2) = (principal_dim(params[0].0, params[0].1), principal_dim(params[1].0, params[1].1));
            let c = rat(1, 4) * fact(d1 - 1) * fact(d2 - 1) / fact(d - 1);
            (c, &bvol(params[0])? * &bvol(params[1])?)
        }
        PrincipalFamily::C2 => (int(2) * fact(d - 3) / fact(d - 1), bvol(params[0])?),
        PrincipalFamily::C3 => {
            let c = rat(1, 3) * fact(d - 5) / fact(d - 1);
            (c, &bvol(params[0])? * &PiValue::pi_pow(2))
        }
        PrincipalFamily::C4 => (rat(1, 2) * fact(d - 3) / fact(d - 1), bvol(params[0])?),
    };
    Ok(num.checked_div(&vol)?.scale(&coeff))
}

/// Contribution of every configuration and their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBreakdown {
    pub rows: Vec<(PrincipalConfig, PiValue)>,
    pub total: PiValue,
}

pub fn principal_breakdown(k: u32, l: u32, db: &VolumeDb) -> Result<PrincipalBreakdown> {
    let mut rows = Vec::new();
    let mut total = PiValue::zero();
    for cfg in enumerate_principal(k, l)? {
        let c = c_area_principal_config(&cfg, db)?;
        total = &total + &c.scale(&cfg.multiplicity);
        rows.push((cfg, c));
    }
    Ok(PrincipalBreakdown { rows, total })
}

/// `c_area(Q(1^k, -1^l))`.
pub fn c_area_principal_stratum(k: u32, l: u32, db: &VolumeDb) -> Result<PiValue> {
    Ok(principal_breakdown(k, l, db)?.total)
}

/// `c_area` of a hyperelliptic component:
/// `(k1+k2+4) / (4 pi^2) * (2 + 1/((k1+2)(k2+2)))`.
pub fn c_area_hyperelliptic(spec: &HypComponentSpec) -> PiValue {
    let (k1, k2) = (spec.k1 as i64, spec.k2 as i64);
    let c = rat(k1 + k2 + 4, 4) * (int(2) + rat(1, (k1 + 2) * (k2 + 2)));
    PiValue::monomial(c, -2)
}

/// Closed-form `L^-` of a hyperelliptic component, per type.
pub fn lsum_minus_hyperelliptic(spec: &HypComponentSpec) -> Rational {
    let (k1, k2) = (spec.k1 as i64, spec.k2 as i64);
    let base = rat(k1 + k2 + 4, 4);
    match spec.kind {
        HypKind::Type1 => base * (int(1) + rat(1, (k1 + 2) * (k2 + 2))),
        HypKind::Type2 => base * (int(1) + rat(1, k1 + 2)),
        HypKind::Type3 => base,
    }
}

/// `(I, K)` with `I = 1/4 sum_{d odd} 1/(d+2)` and `K = 1/24 sum d(d+4)/(d+2)`.
pub fn ekz_corrections(s: &QuadStratum) -> (Rational, Rational) {
    let mut i = Rational::zero();
    let mut k = Rational::zero();
    for &d in s.orders() {
        let d = d as i64;
        if d % 2 != 0 {
            i += rat(1, 4 * (d + 2));
        }
        k += rat(d * (d + 4), 24 * (d + 2));
    }
    (i, k)
}

/// `L^- = pi^2/3 c_area + I + K`.
pub fn lsum_minus_from_carea(s: &QuadStratum, c_area: &PiValue) -> Result<Rational> {
    let c = c_area.expect_degree(-2)?;
    let (i, k) = ekz_corrections(s);
    Ok(c / int(3) + i + k)
}

/// `c_area` of a configuration in a hyperelliptic component, with every
/// volume taken from hyperelliptic components.
pub fn c_area_hyp_generic(cfg: &Configuration, db: &VolumeDb) -> Result<PiValue> {
    let ambient = cfg.ambient();
    if ambient.classify_hyperelliptic().is_none() {
        return Err(Error::Domain(format!("{ambient} has no hyperelliptic component")));
    }
    if matches!(ambient.orders(), [2, -1, -1] | [2, 2]) {
        return Err(Error::Domain(format!(
            "{ambient} only has cylinder configurations; evaluate them with sv_constants"
        )));
    }
    Ok(sv_constants(&cfg.restricted_to_hyperelliptic(), db)?.c_area)
}
