//! Siegel-Veech constants of a single configuration and of a whole stratum.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, format_rational, format_sig, int, pow2, rational_to_f64, PiValue, Rational};
use crate::strata::{BoundaryComponent, ComponentTag};
use crate::volumes::{vol_disconnected, VolumeDb};

/// Significant digits of every decimal rendering.
pub const APPROX_DIGITS: usize = 12;

/// The constants `c`, `c_cyl`, `c_area` of one configuration together with
/// the combinatorial factors that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SVResult {
    pub c: PiValue,
    pub c_cyl: PiValue,
    pub c_area: PiValue,
    pub m: Rational,
    pub m_c: BigInt,
    pub m_t: BigInt,
    pub m_s: Rational,
    pub q1: u32,
    pub q2: u32,
    pub n_count: Rational,
}

fn pi_json(v: &PiValue) -> Value {
    json!({ "exact": v.to_string(), "approx": v.approx_string(APPROX_DIGITS) })
}

fn rational_json(r: &Rational) -> Value {
    json!({ "exact": format_rational(r), "approx": format_sig(rational_to_f64(r), APPROX_DIGITS) })
}

impl SVResult {
    pub fn to_json(&self) -> Value {
        json!({
            "c": pi_json(&self.c),
            "c_cyl": pi_json(&self.c_cyl),
            "c_area": pi_json(&self.c_area),
            "M": rational_json(&self.m),
            "M_c": self.m_c.to_string(),
            "M_t": self.m_t.to_string(),
            "M_s": rational_json(&self.m_s),
            "q1": self.q1,
            "q2": self.q2,
            "N": rational_json(&self.n_count),
        })
    }
}

/// Constants of a configuration made only of cylinders:
/// `c = M / (2^(q+1) (q-1)! Vol)`, `c_cyl = (4 q1 + q2)/4 c`, `c_area = c_cyl / q`.
pub fn cylinders_only(m: &Rational, q1: u32, q2: u32, vol: &PiValue) -> Result<(PiValue, PiValue, PiValue)> {
    let q = q1 + q2;
    if q == 0 {
        return Err(Error::InvalidConfiguration("q = 0".into()));
    }
    let den = pow2(q as i64 + 1) * Rational::from_integer(factorial(q - 1));
    let c = PiValue::rational(m / den).checked_div(vol)?;
    let c_cyl = c.scale(&Rational::new(BigInt::from(4 * q1 + q2), BigInt::from(4)));
    let c_area = c_cyl.scale(&Rational::new(1.into(), q.into()));
    Ok((c, c_cyl, c_area))
}

/// Volume of the boundary, each Abelian factor entering at half area.
pub fn boundary_volume(cfg: &Configuration, db: &VolumeDb) -> Result<PiValue> {
    let restricted = cfg.boundary().hyperelliptic_restricted;
    let tag = |c: ComponentTag| if restricted { ComponentTag::Hyp } else { c };
    let mut parts = Vec::with_capacity(cfg.boundary().len());
    for comp in &cfg.boundary().components {
        let v = match comp {
            BoundaryComponent::Quad { stratum, component } => db.quad(stratum, tag(*component))?,
            BoundaryComponent::Abelian { stratum, component } => db.abelian_halfarea(stratum, tag(*component))?,
        };
        parts.push((v, comp.dim_c()));
    }
    vol_disconnected(&parts)
}

/// Volume of the ambient stratum component the configuration lives in.
pub fn ambient_volume(cfg: &Configuration, db: &VolumeDb) -> Result<PiValue> {
    let tag = if cfg.boundary().hyperelliptic_restricted { ComponentTag::Hyp } else { cfg.ambient_component() };
    db.quad(cfg.ambient(), tag)
}

/// `c`, `c_cyl` and `c_area` of one configuration.
pub fn sv_constants(cfg: &Configuration, db: &VolumeDb) -> Result<SVResult> {
    let ambient = cfg.ambient();
    if ambient.is_empty() {
        return Err(Error::EmptyStratum(ambient.to_string()));
    }
    let vol = ambient_volume(cfg, db)?;
    let m = cfg.combined_m()?;
    let (q1, q2, q) = (cfg.q1(), cfg.q2(), cfg.q());
    let (c, c_cyl, c_area) = if cfg.boundary().is_empty() {
        cylinders_only(&m, q1, q2, &vol)?
    } else {
        let d = ambient.dim_c();
        let n_s = cfg.boundary().dim_c();
        let vol_b = boundary_volume(cfg, db)?;
        let coeff = &m / pow2(q as i64 + 2) * Rational::from_integer(factorial(n_s - 1))
            / Rational::from_integer(factorial(d - 2));
        let c = vol_b.checked_div(&vol)?.scale(&coeff);
        let c_cyl = c.scale(&(int(q1 as i64) + Rational::new(q2.into(), 4.into())));
        let c_area = c_cyl.scale(&Rational::new(1.into(), (d - 1).into()));
        (c, c_cyl, c_area)
    };
    Ok(SVResult {
        c,
        c_cyl,
        c_area,
        m,
        m_c: cfg.m_c(),
        m_t: cfg.m_t(),
        m_s: cfg.m_s()?,
        q1,
        q2,
        n_count: cfg.multiplicity()?,
    })
}

/// `sum N(C) c_area(C)` over configurations sharing one ambient stratum.
pub fn sv_stratum_total(configs: &[Configuration], db: &VolumeDb) -> Result<PiValue> {
    let Some(first) = configs.first() else {
        return Ok(PiValue::zero());
    };
    let mut total = PiValue::zero();
    for cfg in configs {
        if cfg.ambient() != first.ambient() || cfg.ambient_component() != first.ambient_component() {
            return Err(Error::InvalidConfiguration(format!(
                "mixed ambient strata {} and {}",
                first.ambient(),
                cfg.ambient()
            )));
        }
        let r = sv_constants(cfg, db)?;
        total = &total + &r.c_area.scale(&r.n_count);
    }
    Ok(total)
}

/// `c_area(Q) = total / Vol` for a tabulated stratum total `sum N c_area Vol`.
pub fn carea_from_total(total: &PiValue, vol: &PiValue) -> Result<PiValue> {
    if vol.is_zero() {
        return Err(Error::Domain("zero volume".into()));
    }
    total.checked_div(vol)
}

/// True when `v` is a rational multiple of `pi^-2` (or zero).
pub fn is_carea_shaped(v: &PiValue) -> bool {
    v.is_zero() || v.as_monomial().is_some_and(|(c, e)| e == -2 && !c.is_zero())
}
