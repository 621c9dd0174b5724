#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use svq::config::{Configuration, Holonomy, SurgeryData};
use svq::exactnum::rat;
use svq::strata::{AbelianStratum, BoundaryComponent, BoundaryStratum, ComponentTag, QuadStratum};
use svq::volumes::VolumeDb;
use svq::PiValue;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `integral_a^b f` with an `n`-point rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    gauss_legendre(n).into_iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Every nonempty Q(1^a, -1^b) with a <= a_max, b <= a_max + 4.
pub fn principal_strata(a_max: u32) -> Vec<QuadStratum> {
    let mut out = Vec::new();
    for a in 0..=a_max {
        for b in 0..=a_max + 4 {
            let diff = a as i64 - b as i64;
            if diff.rem_euclid(4) != 0 || diff < -4 {
                continue;
            }
            if let Ok(s) = QuadStratum::principal(a, b) {
                if !s.is_empty() {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// A database of random positive volumes with the right powers of pi.
pub fn synthetic_db(rng: &mut ChaCha8Rng, strata: &[QuadStratum]) -> VolumeDb {
    let mut db = VolumeDb::empty();
    for s in strata {
        let c = rat(rng.gen_range(1..200), rng.gen_range(1..200));
        db = db
            .with_quadratic(s, ComponentTag::Whole, PiValue::monomial(c, s.volume_pi_exponent()), "synthetic")
            .expect("positive monomial");
    }
    db
}

/// A random configuration whose volumes all live in `strata` or H(0).
pub fn random_configuration(rng: &mut ChaCha8Rng, strata: &[QuadStratum]) -> Configuration {
    loop {
        let ambient = strata[rng.gen_range(0..strata.len())].clone();
        let d = ambient.dim_c();
        let mut comps = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            comps.push(BoundaryComponent::quad(strata[rng.gen_range(0..strata.len())].clone()));
        }
        if rng.gen_bool(0.3) {
            comps.push(BoundaryComponent::abelian(AbelianStratum::new([0]).unwrap()));
        }
        let boundary = BoundaryStratum::new(comps);
        let n_s = boundary.dim_c();
        if d < n_s + 2 {
            continue;
        }
        let qq = d - n_s - 1;
        let q1 = rng.gen_range(0..=qq);
        let q2 = qq - q1;
        let surgery = boundary
            .components
            .iter()
            .map(|c| {
                let sums = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=3)).collect();
                match c {
                    BoundaryComponent::Quad { .. } => SurgeryData::new(Holonomy::Nontrivial, sums),
                    BoundaryComponent::Abelian { .. } => SurgeryData::new(Holonomy::Trivial, sums),
                }
            })
            .collect();
        let gamma = boundary.components.iter().map(|_| rng.gen_range(1..=2)).collect();
        let thick = (0..q2).map(|_| rng.gen_range(1..=2)).collect();
        let built = Configuration::builder(ambient, boundary, q1, q2)
            .graph_type_a(rng.gen_bool(0.5))
            .thick_symmetry_orders(thick)
            .surgery(surgery)
            .gamma_factors(gamma)
            .build();
        if let Ok(c) = built {
            return c;
        }
    }
}
